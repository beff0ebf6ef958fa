use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fcm_core::fuzzy::{build_weight_matrix, Aggregation, BuildMethods, Defuzzification, Implication};
use fcm_core::hebbian::{ahl_run, nhl_run, AhlConfig, HebbianConfig, LearningOutcome};
use fcm_core::intervention::Scenarios;
use fcm_core::rcga::{self, GaType, RcgaConfig};
use fcm_core::sim::{simulate, Inference, SimulationConfig, Transfer};
use fcm_core::survey::{check_consistency, edge_entropy, ExpertSurvey};
use fcm_core::WeightMatrix;
use fcm_tools::formats::{self, pretty};
use fcm_tools::manifest::{Outputs, RunManifest};
use fcm_tools::survey_io::{inconsistency_csv, read_survey, CsvLayout};
use fcm_tools::terms::TermsConfig;
use fcm_tools::{Result, ToolError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "fcm", version, about = "Build, simulate, train and probe fuzzy cognitive maps")]
struct Cli {
    /// Output format; both CSV and JSON are written when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Seed for stochastic commands; one is generated and recorded when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight matrix from an expert survey.
    Build(BuildArgs),
    /// Entropy of the expert ratings of every edge.
    Entropy(SurveyArgs),
    /// Edges on which experts disagree about the sign.
    Consistency(SurveyArgs),
    /// Run a map to equilibrium.
    Simulate(SimulateArgs),
    /// Non-linear Hebbian learning.
    Nhl(NhlArgs),
    /// Active Hebbian learning.
    Ahl(AhlArgs),
    /// Learn a matrix from a data series with a genetic algorithm.
    Rcga(RcgaArgs),
    /// In-sample and out-of-sample error of a matrix.
    Validate(ValidateArgs),
    /// Compare intervention scenarios against the baseline.
    Intervene(InterveneArgs),
}

#[derive(Args, Debug)]
struct SurveyArgs {
    /// Survey file (.csv or .json).
    #[arg(long)]
    survey: PathBuf,
    /// Universe and term definitions (JSON).
    #[arg(long)]
    terms: Option<PathBuf>,
    /// CSV cell separator.
    #[arg(long, default_value = ";")]
    delimiter: char,
    #[arg(long, default_value = "->")]
    concept_sep: String,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    survey: SurveyArgs,
    #[arg(long, default_value = "mamdani")]
    implication: Implication,
    #[arg(long, default_value = "fmax")]
    aggregation: Aggregation,
    #[arg(long, default_value = "centroid")]
    defuzz: Defuzzification,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[arg(long, default_value = "mkosko")]
    inference: Inference,
    #[arg(long, default_value = "sigmoid")]
    transfer: Transfer,
    /// Sigmoid slope.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Weight matrix (.csv or .json).
    #[arg(long)]
    weights: PathBuf,
    /// Initial state (.json object or one-row .csv).
    #[arg(long)]
    initial: PathBuf,
    #[command(flatten)]
    dynamics: DynamicsArgs,
    #[arg(long, default_value_t = 0.001)]
    thresh: f64,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
    /// Concepts checked for convergence (all when omitted).
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct HebbianArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    initial: PathBuf,
    /// Desired output ranges, `{"C1": [lo, hi], ...}`.
    #[arg(long)]
    docs: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    learning_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.002)]
    thresh: f64,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
}

#[derive(Args, Debug)]
struct NhlArgs {
    #[command(flatten)]
    common: HebbianArgs,
    #[arg(long, default_value_t = 1.0)]
    decay: f64,
}

#[derive(Args, Debug)]
struct AhlArgs {
    #[command(flatten)]
    common: HebbianArgs,
    #[arg(long, default_value_t = 0.03)]
    decay: f64,
    /// Activation groups, `{"0": ["C1"], "1": ["C2", "C3"]}`.
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    auto_learn: bool,
    #[arg(long, default_value_t = 0.003)]
    b1: f64,
    #[arg(long, default_value_t = 0.1)]
    lbd1: f64,
    #[arg(long, default_value_t = 0.005)]
    b2: f64,
    #[arg(long, default_value_t = 1.0)]
    lbd2: f64,
}

#[derive(Args, Debug)]
struct RcgaArgs {
    /// Data series CSV: header of concept ids, one row per time step.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 100)]
    population: usize,
    #[arg(long, default_value = "generational")]
    ga_type: GaType,
    #[arg(long, default_value_t = 30000)]
    iterations: usize,
    #[arg(long, default_value_t = 0.99)]
    threshold: f64,
    #[arg(long, default_value_t = 0.9)]
    p_recombination: f64,
    /// Per-gene mutation probability (0.5 / N^2 when omitted).
    #[arg(long)]
    p_mutation: Option<f64>,
    /// Predict from the candidate's own previous state instead of the observed one.
    #[arg(long)]
    free_running: bool,
    #[command(flatten)]
    dynamics: DynamicsArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Matrix that generated the data; enables the out-of-sample error.
    #[arg(long)]
    generator: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    low: f64,
    #[arg(long, default_value_t = 1.0)]
    high: f64,
    #[command(flatten)]
    dynamics: DynamicsArgs,
}

#[derive(Args, Debug)]
struct InterveneArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    initial: PathBuf,
    /// Intervention list (JSON).
    #[arg(long)]
    scenarios: PathBuf,
    #[command(flatten)]
    dynamics: DynamicsArgs,
    #[arg(long, default_value_t = 0.001)]
    thresh: f64,
    #[arg(long, default_value_t = 50)]
    iterations: usize,
    /// Iteration budget for the interventions (the baseline uses --iterations).
    #[arg(long)]
    intervention_iterations: Option<usize>,
}

struct Run {
    format: Option<Format>,
    verbose: bool,
    out: Outputs,
    manifest: RunManifest,
}

impl Run {
    fn csv(&self) -> bool {
        self.format != Some(Format::Json)
    }

    fn json(&self) -> bool {
        self.format != Some(Format::Csv)
    }

    fn input(&mut self, path: &Path) {
        self.manifest.inputs.push(path.display().to_string());
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.out.write(name, contents)?;
        if self.verbose {
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }

    fn write_matrix(&mut self, stem: &str, w: &WeightMatrix) -> Result<()> {
        if self.csv() {
            self.write(&format!("{stem}.csv"), &formats::matrix_to_csv(w))?;
        }
        if self.json() {
            self.write(&format!("{stem}.json"), &formats::matrix_to_json(w))?;
        }
        Ok(())
    }

    fn note(&mut self, text: String) {
        self.manifest.notes.push(text);
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match dispatch(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn generated_seed() -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    nanos ^ (u64::from(std::process::id()) << 32)
}

fn dispatch(cli: Cli, mut argv: Vec<String>) -> Result<()> {
    let name = match &cli.command {
        Command::Build(_) => "build",
        Command::Entropy(_) => "entropy",
        Command::Consistency(_) => "consistency",
        Command::Simulate(_) => "simulate",
        Command::Nhl(_) => "nhl",
        Command::Ahl(_) => "ahl",
        Command::Rcga(_) => "rcga",
        Command::Validate(_) => "validate",
        Command::Intervene(_) => "intervene",
    };
    let stochastic = matches!(cli.command, Command::Rcga(_) | Command::Validate(_));
    let seed = match (stochastic, cli.seed) {
        (false, s) => s,
        (true, Some(s)) => Some(s),
        (true, None) => {
            let s = generated_seed();
            argv.extend(["--seed".to_string(), s.to_string()]);
            Some(s)
        }
    };
    let mut run = Run {
        format: cli.format,
        verbose: cli.verbose,
        out: Outputs::new(&cli.out_dir)?,
        manifest: RunManifest {
            command: name.into(),
            args: argv,
            config: Value::Null,
            inputs: vec![],
            outputs: vec![],
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            notes: vec![],
        },
    };
    match cli.command {
        Command::Build(a) => cmd_build(&mut run, a)?,
        Command::Entropy(a) => cmd_entropy(&mut run, a)?,
        Command::Consistency(a) => cmd_consistency(&mut run, a)?,
        Command::Simulate(a) => cmd_simulate(&mut run, a)?,
        Command::Nhl(a) => cmd_nhl(&mut run, a)?,
        Command::Ahl(a) => cmd_ahl(&mut run, a)?,
        Command::Rcga(a) => cmd_rcga(&mut run, a, seed.expect("seeded"))?,
        Command::Validate(a) => cmd_validate(&mut run, a, seed.expect("seeded"))?,
        Command::Intervene(a) => cmd_intervene(&mut run, a)?,
    }
    let path = run.out.finish(run.manifest)?;
    if cli.verbose {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn load_survey(run: &mut Run, a: &SurveyArgs) -> Result<(ExpertSurvey, TermsConfig)> {
    if !a.delimiter.is_ascii() {
        return Err(ToolError::Usage(format!("delimiter `{}` is not a single-byte character", a.delimiter)));
    }
    let terms = TermsConfig::load(a.terms.as_deref())?;
    if let Some(t) = &a.terms {
        run.input(t);
    }
    run.input(&a.survey);
    let layout = CsvLayout { delimiter: a.delimiter as u8, concept_separator: a.concept_sep.clone() };
    let survey = read_survey(&a.survey, &terms.terms, &layout)?;
    if survey.is_empty() {
        return Err(ToolError::model(&a.survey, fcm_core::FcmError::EmptySurvey));
    }
    if run.verbose {
        eprintln!("{} experts, {} edges", survey.experts().len(), survey.edges().len());
    }
    Ok((survey, terms))
}

fn cmd_build(run: &mut Run, a: BuildArgs) -> Result<()> {
    let (survey, terms) = load_survey(run, &a.survey)?;
    let methods = BuildMethods { implication: a.implication, aggregation: a.aggregation, defuzzification: a.defuzz };
    run.manifest.config = json!({
        "methods": methods,
        "universe": {"lo": terms.universe.lo(), "hi": terms.universe.hi(), "step": terms.universe.step()},
    });
    if run.verbose {
        let experts = survey.experts().len();
        for t in survey.tallies().iter().filter(|t| t.raters < experts) {
            eprintln!("edge {} -> {} rated by {} of {experts} experts", t.source, t.target, t.raters);
        }
    }
    let w = build_weight_matrix(&survey, &terms.universe, &terms.terms, methods)
        .map_err(|e| ToolError::model(&a.survey.survey, e))?;
    run.write_matrix("weights", &w)
}

fn cmd_entropy(run: &mut Run, a: SurveyArgs) -> Result<()> {
    let (survey, _) = load_survey(run, &a)?;
    let h = edge_entropy(&survey).map_err(|e| ToolError::model(&a.survey, e))?;
    if run.csv() {
        let mut text = String::from("source,target,entropy\n");
        for ((s, t), v) in &h {
            text.push_str(&format!("{s},{t},{v}\n"));
        }
        run.write("entropy.csv", &text)?;
    }
    if run.json() {
        let rows: Vec<Value> = h.iter().map(|((s, t), v)| json!({"source": s, "target": t, "entropy": v})).collect();
        run.write("entropy.json", &pretty(&rows))?;
    }
    Ok(())
}

fn cmd_consistency(run: &mut Run, a: SurveyArgs) -> Result<()> {
    let (survey, _) = load_survey(run, &a)?;
    let report = check_consistency(&survey);
    if run.verbose || !report.is_empty() {
        eprintln!("{} edge(s) with conflicting signs", report.entries.len());
    }
    if run.csv() {
        run.write("inconsistencies.csv", &inconsistency_csv(&report))?;
    }
    if run.json() {
        run.write("inconsistencies.json", &pretty(&report))?;
    }
    Ok(())
}

fn sim_config(d: &DynamicsArgs, thresh: f64, iterations: usize, outputs: Option<Vec<String>>) -> SimulationConfig {
    SimulationConfig {
        inference: d.inference,
        transfer: d.transfer,
        lambda: d.lambda,
        thresh,
        max_iterations: iterations,
        output_concepts: outputs,
    }
}

fn cmd_simulate(run: &mut Run, a: SimulateArgs) -> Result<()> {
    let w = formats::read_matrix(&a.weights)?;
    let initial = formats::read_state(&a.initial, w.concepts())?;
    run.input(&a.weights);
    run.input(&a.initial);
    let cfg = sim_config(&a.dynamics, a.thresh, a.iterations, a.outputs);
    run.manifest.config = json!(cfg);
    let trace = simulate(&initial, &w, &cfg)?;
    println!("{}", trace.message());
    if !trace.is_converged() {
        run.note(trace.message());
    }
    if run.csv() {
        run.write("trace.csv", &formats::trace_to_csv(&trace))?;
    }
    if run.json() {
        run.write("trace.json", &formats::trace_to_json(&trace))?;
    }
    Ok(())
}

fn hebbian_inputs(run: &mut Run, a: &HebbianArgs) -> Result<(WeightMatrix, fcm_core::StateVector, fcm_core::hebbian::DocRanges)> {
    let w = formats::read_matrix(&a.weights)?;
    let initial = formats::read_state(&a.initial, w.concepts())?;
    let docs = formats::read_doc_ranges(&a.docs)?;
    for p in [&a.weights, &a.initial, &a.docs] {
        run.input(p);
    }
    Ok((w, initial, docs))
}

fn hebbian_config(a: &HebbianArgs, decay: f64) -> HebbianConfig {
    HebbianConfig {
        learning_rate: a.learning_rate,
        decay,
        lambda: a.lambda,
        thresh: a.thresh,
        max_iterations: a.iterations,
    }
}

fn write_learning(run: &mut Run, algorithm: &str, outcome: &LearningOutcome, eta: f64, decay: f64) -> Result<()> {
    let message = outcome.message(algorithm, eta, decay);
    println!("{message}");
    if outcome.converged_at.is_none() {
        run.note(message);
    }
    run.write_matrix("weights", &outcome.weights)?;
    if run.csv() {
        let names: Vec<&String> = outcome.doc_trace.keys().collect();
        let steps = outcome.doc_trace.values().map(Vec::len).max().unwrap_or(0);
        let mut text = format!("step,{}\n", names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));
        for k in 0..steps {
            let cells: Vec<String> = outcome.doc_trace.values().map(|s| s[k].to_string()).collect();
            text.push_str(&format!("{k},{}\n", cells.join(",")));
        }
        run.write("doc_trace.csv", &text)?;
    }
    if run.json() {
        let doc = json!({
            "weights": {"concepts": outcome.weights.concepts(), "weights": outcome.weights.rows().collect::<Vec<_>>()},
            "converged_at": outcome.converged_at,
            "termination": outcome.termination,
            "final_state": outcome.final_state,
            "doc_trace": outcome.doc_trace,
        });
        run.write("outcome.json", &pretty(&doc))?;
    }
    Ok(())
}

fn cmd_nhl(run: &mut Run, a: NhlArgs) -> Result<()> {
    let (w, initial, docs) = hebbian_inputs(run, &a.common)?;
    let cfg = hebbian_config(&a.common, a.decay);
    run.manifest.config = json!({"hebbian": cfg, "docs": docs});
    let outcome = nhl_run(&initial, &w, &docs, &cfg)?;
    write_learning(run, "NHL", &outcome, cfg.learning_rate, cfg.decay)
}

fn cmd_ahl(run: &mut Run, a: AhlArgs) -> Result<()> {
    let (w, initial, docs) = hebbian_inputs(run, &a.common)?;
    let pattern = formats::read_activation_pattern(&a.pattern)?;
    run.input(&a.pattern);
    let mut cfg = AhlConfig::new(hebbian_config(&a.common, a.decay), pattern);
    cfg.auto_learn = a.auto_learn;
    (cfg.b1, cfg.lbd1, cfg.b2, cfg.lbd2) = (a.b1, a.lbd1, a.b2, a.lbd2);
    run.manifest.config = json!({"ahl": cfg, "docs": docs});
    let outcome = ahl_run(&initial, &w, &docs, &cfg).map_err(|e| match e {
        fcm_core::FcmError::IncompletePattern(_) => ToolError::model(&a.pattern, e),
        e => e.into(),
    })?;
    write_learning(run, "AHL", &outcome, cfg.hebbian.learning_rate, cfg.hebbian.decay)
}

fn cmd_rcga(run: &mut Run, a: RcgaArgs, seed: u64) -> Result<()> {
    let data = formats::read_data(&a.data)?;
    run.input(&a.data);
    let cfg = RcgaConfig {
        population_size: a.population,
        ga_type: a.ga_type,
        p_recombination: a.p_recombination,
        p_mutation: a.p_mutation,
        n_iterations: a.iterations,
        threshold: a.threshold,
        teacher_forcing: !a.free_running,
        inference: a.dynamics.inference,
        transfer: a.dynamics.transfer,
        lambda: a.dynamics.lambda,
        ..RcgaConfig::default()
    };
    run.manifest.config = json!(cfg);
    let outcome = rcga::run(&data, &cfg, seed)?;
    println!("best fitness {} after {} generations", outcome.fitness, outcome.generations);
    if outcome.fitness < cfg.threshold {
        run.note(format!("threshold {} not reached; best fitness {}", cfg.threshold, outcome.fitness));
    }
    run.write_matrix("solution", &outcome.solution)?;
    let report = json!({
        "fitness": outcome.fitness,
        "generations": outcome.generations,
        "seed": seed,
        "config": cfg,
    });
    run.write("report.json", &pretty(&report))?;
    if run.csv() {
        let mut text = String::from("generation,best_fitness\n");
        for (g, f) in outcome.history.iter().enumerate() {
            text.push_str(&format!("{},{f}\n", g + 1));
        }
        run.write("history.csv", &text)?;
    }
    Ok(())
}

fn cmd_validate(run: &mut Run, a: ValidateArgs, seed: u64) -> Result<()> {
    let w = formats::read_matrix(&a.weights)?;
    let data = formats::read_data(&a.data)?;
    run.input(&a.weights);
    run.input(&a.data);
    let dynamics = fcm_core::sim::Dynamics {
        inference: a.dynamics.inference,
        transfer: a.dynamics.transfer,
        lambda: a.dynamics.lambda,
    };
    run.manifest.config = json!({"dynamics": dynamics, "k": a.k, "low": a.low, "high": a.high});
    let ise = rcga::validate_ise(&w, &data, &dynamics).map_err(|e| ToolError::model(&a.weights, e))?;
    let mut results = BTreeMap::from([("in_sample_error", ise)]);
    if let Some(g) = &a.generator {
        let generator = formats::read_matrix(g)?;
        run.input(g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mean, std) = rcga::validate_ose(&w, &generator, a.k, a.low, a.high, &dynamics, &mut rng)?;
        results.insert("out_sample_error", mean);
        results.insert("out_sample_std", std);
    }
    for (k, v) in &results {
        println!("{k}: {v}");
    }
    if run.csv() {
        let mut text = String::from("metric,value\n");
        for (k, v) in &results {
            text.push_str(&format!("{k},{v}\n"));
        }
        run.write("validation.csv", &text)?;
    }
    if run.json() {
        run.write("validation.json", &pretty(&results))?;
    }
    Ok(())
}

fn cmd_intervene(run: &mut Run, a: InterveneArgs) -> Result<()> {
    let w = formats::read_matrix(&a.weights)?;
    let initial = formats::read_state(&a.initial, w.concepts())?;
    let list = formats::read_interventions(&a.scenarios)?;
    for p in [&a.weights, &a.initial, &a.scenarios] {
        run.input(p);
    }
    let cfg = sim_config(&a.dynamics, a.thresh, a.iterations, None);
    run.manifest.config = json!({"simulation": cfg, "interventions": list, "intervention_iterations": a.intervention_iterations});
    let mut scenarios = Scenarios::new(&initial, w, cfg)?;
    for iv in list {
        scenarios.add(iv).map_err(|e| ToolError::model(&a.scenarios, e))?;
    }
    scenarios.test_all(a.intervention_iterations)?;

    let mut traces = vec![("baseline".to_string(), scenarios.baseline().clone())];
    traces.extend(scenarios.interventions().map(|iv| {
        let o = scenarios.outcome(&iv.name).expect("tested");
        (iv.name.clone(), o.trace.clone())
    }));
    for (name, trace) in &traces {
        if !trace.is_converged() {
            run.note(format!("{name}: {}", trace.message()));
        }
        if run.verbose {
            eprintln!("{name}: {}", trace.message());
        }
        if run.csv() {
            run.write(&format!("scenario_{name}.csv"), &formats::trace_to_csv(trace))?;
        }
        if run.json() {
            run.write(&format!("scenario_{name}.json"), &formats::trace_to_json(trace))?;
        }
    }
    let concepts = scenarios.concepts().to_vec();
    let equilibria: Vec<(String, Vec<f64>)> = scenarios.equilibria().into_iter().map(|(n, s)| (n, s.0)).collect();
    let comparison = scenarios.comparison()?;
    for (stem, table) in [("equilibria", &equilibria), ("comparison", &comparison)] {
        if run.csv() {
            run.write(&format!("{stem}.csv"), &formats::table_to_csv("scenario", &concepts, table))?;
        }
        if run.json() {
            run.write(&format!("{stem}.json"), &formats::table_to_json(&concepts, table))?;
        }
    }
    Ok(())
}
