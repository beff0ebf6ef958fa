//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to
//! see the report.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::*;
use fcm_core::fuzzy::{
    build_weight_matrix, defuzzify, edge_weight, generate_memberships, implication, Aggregation, BuildMethods,
    Defuzzification, Implication, LinguisticTermSet, MembershipFunction, TermSpec, Universe,
};
use fcm_core::hebbian::{ahl_run, nhl_run, AhlConfig, DocRanges, HebbianConfig, LearningOutcome, Termination};
use fcm_core::intervention::Scenarios;
use fcm_core::rcga::{self, crossover, mutate, non_uniform_delta, RcgaConfig};
use fcm_core::sim::{simulate, transfer, Inference, SimulationConfig, Transfer};
use fcm_core::survey::{entropy, ExpertSurvey};
use fcm_core::{FcmError, StateVector, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn simulation_golden() -> Verdict {
    let start = Instant::now();
    let trace = simulate(&map8_initial(), &map8(), &SimulationConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let shape_ok = trace.rows.len() == MAP8_TRACE.len();
    let err = trace.rows.iter().zip(MAP8_TRACE.iter()).map(|(r, e)| max_abs(r.values(), e)).fold(0.0, f64::max);
    let state = trace.converged_state();
    verdict(
        shape_ok && err <= 1e-5 && state == Some(7) && elapsed < Duration::from_millis(10),
        format!("{} rows, max err {err:.2e}, converged in state {state:?}, {elapsed:?}", trace.rows.len()),
    )
}

fn transfer_spot_check() -> Verdict {
    let v = transfer(1.1, Transfer::Sigmoid, 1.0);
    verdict((v - 0.750260).abs() <= 1e-6, format!("sigmoid(1.1) = {v:.7}"))
}

fn entropy_check() -> Verdict {
    let h = entropy(&[0.5, 1.0 / 3.0, 1.0 / 6.0]);
    let perms = [[1.0 / 6.0, 0.5, 1.0 / 3.0], [1.0 / 3.0, 1.0 / 6.0, 0.5]];
    let invariant = perms.iter().all(|p| (entropy(p) - h).abs() <= 1e-12);
    verdict((h - 1.459148).abs() <= 1e-6 && invariant, format!("H = {h:.7}, permutation invariant: {invariant}"))
}

fn fuzzy_pipeline() -> Verdict {
    let universe = Universe::new(-1.0, 1.0, 0.001).unwrap();
    let terms = LinguisticTermSet::standard();
    let memberships = generate_memberships(&universe, &terms).unwrap();
    let activations = [("+H", 0.5), ("+VH", 0.33), ("+M", 0.16)];
    let w = edge_weight(&universe, &memberships, &terms, &activations, BuildMethods::default()).unwrap();
    verdict((w - 0.7032).abs() <= 0.005, format!("centroid = {w:.6}"))
}

fn intervention_golden() -> Verdict {
    let mut s = Scenarios::new(&map8_initial(), map8(), SimulationConfig::default()).unwrap();
    for (name, weights) in map8_interventions() {
        s.add_intervention(name, weights, 1.0).unwrap();
    }
    s.test_all(None).unwrap();
    let eq: BTreeMap<String, StateVector> = s.equilibria().into_iter().collect();
    let eq_err = MAP8_EQUILIBRIA.iter().map(|(n, want)| max_abs(eq[*n].values(), want)).fold(0.0, f64::max);
    let cmp: BTreeMap<String, Vec<f64>> = s.comparison().unwrap().into_iter().collect();
    let c1 = cmp["intervention_1"][0];
    let c5 = cmp["intervention_3"][4];
    let cmp_err = (c1 - -11.191083).abs().max((c5 - -31.175022).abs());
    verdict(
        eq_err <= 1e-3 && cmp_err <= 1e-2,
        format!("equilibria max err {eq_err:.2e}; C1 under intervention_1 {c1:.4}%, C5 under intervention_3 {c5:.4}%"),
    )
}

fn docs_in_range(out: &LearningOutcome) -> bool {
    (0.68..=0.74).contains(&out.final_state[0]) && (0.74..=0.8).contains(&out.final_state[4])
}

fn hebbian() -> Verdict {
    let docs = DocRanges::new([("C1", (0.68, 0.74)), ("C5", (0.74, 0.8))]).unwrap();
    let w0 = water_tank();

    let nhl_cfg = HebbianConfig { learning_rate: 0.01, decay: 1.0, lambda: 0.98, ..HebbianConfig::default() };
    let nhl = nhl_run(&water_tank_initial(), &w0, &docs, &nhl_cfg).unwrap();
    let pattern_kept = w0
        .as_slice()
        .iter()
        .zip(nhl.weights.as_slice())
        .all(|(a, b)| if *a == 0.0 { *b == 0.0 } else { a * b >= 0.0 });
    let nhl_ok = nhl.termination == Termination::BothConditionsMet && docs_in_range(&nhl) && pattern_kept;

    let ahl_cfg = AhlConfig::new(
        HebbianConfig { learning_rate: 0.01, decay: 0.03, lambda: 1.0, thresh: 0.002, max_iterations: 100 },
        vec![vec!["C1".into()], vec!["C2".into(), "C3".into()], vec!["C5".into()], vec!["C4".into()]],
    );
    let ahl = ahl_run(&water_tank_initial(), &w0, &docs, &ahl_cfg).unwrap();
    let ahl_ok = ahl.termination == Termination::BothConditionsMet && docs_in_range(&ahl);
    let created = w0.as_slice().iter().zip(ahl.weights.as_slice()).filter(|(a, b)| **a == 0.0 && **b != 0.0).count();

    let soft = |k: Option<usize>, target: usize| match k {
        Some(k) if k.abs_diff(target) <= 15 => format!("step {k} (target {target}, within 15)"),
        Some(k) => format!("step {k} (target {target}, outside 15)"),
        None => format!("no convergence (target {target})"),
    };
    verdict(
        nhl_ok && ahl_ok,
        format!(
            "NHL {}, DOCs C1={:.4} C5={:.4}, pattern kept {pattern_kept}; AHL {}, DOCs C1={:.4} C5={:.4}, {created} edges created",
            soft(nhl.converged_at, 63),
            nhl.final_state[0],
            nhl.final_state[4],
            soft(ahl.converged_at, 19),
            ahl.final_state[0],
            ahl.final_state[4],
        ),
    )
}

/// Learned matrix of the best seed, reused by the validation criterion.
fn rcga_learning() -> (Verdict, WeightMatrix) {
    let data = water_tank_data();
    let cfg = RcgaConfig::default();
    let true_fitness = rcga::fitness(&water_tank(), &data, &cfg).unwrap();
    let mut hits = 0;
    let mut slowest = Duration::ZERO;
    let mut best: Option<rcga::RcgaOutcome> = None;
    let mut fitnesses = Vec::new();
    for seed in 1..=10 {
        let start = Instant::now();
        let out = rcga::run(&data, &cfg, seed).unwrap();
        slowest = slowest.max(start.elapsed());
        hits += usize::from(out.fitness >= 0.95);
        fitnesses.push(format!("{:.4}", out.fitness));
        if best.as_ref().is_none_or(|b| out.fitness > b.fitness) {
            best = Some(out);
        }
    }
    let v = verdict(
        hits >= 8 && true_fitness == 1.0 && slowest < Duration::from_secs(120),
        format!(
            "{hits}/10 seeds >= 0.95 [{}], true matrix fitness {true_fitness}, slowest seed {slowest:.2?}",
            fitnesses.join(" ")
        ),
    );
    (v, best.unwrap().solution)
}

fn validation(learned: &WeightMatrix) -> Verdict {
    let data = water_tank_data();
    let dynamics = RcgaConfig::default().dynamics();
    let truth = water_tank();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ise_true = rcga::validate_ise(&truth, &data, &dynamics).unwrap();
    let (ose_mean, ose_std) = rcga::validate_ose(&truth, &truth, 100, 0.0, 1.0, &dynamics, &mut rng).unwrap();
    let learned_v = rcga::validate(learned, &truth, &data, 100, (0.0, 1.0), &dynamics, &mut rng).unwrap();
    verdict(
        ise_true.abs() <= 1e-12
            && ose_mean == 0.0
            && ose_std == 0.0
            && learned_v.in_sample_error <= 0.05
            && learned_v.out_sample_error <= 0.15,
        format!(
            "true ISE {ise_true:.1e}, OSE ({ose_mean}, {ose_std}); learned ISE {:.4}, OSE {:.4} (std {:.4})",
            learned_v.in_sample_error, learned_v.out_sample_error, learned_v.out_sample_std
        ),
    )
}

fn operator_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let methods = [Aggregation::FMax, Aggregation::AlgSum, Aggregation::ESum, Aggregation::HSum];
    let aggregation_ok = (0..1000).all(|_| {
        let (x, y): (f64, f64) = (rng.gen(), rng.gen());
        methods.iter().all(|m| {
            let a = m.apply(x, y);
            (0.0..=1.0).contains(&a) && (a - m.apply(y, x)).abs() < 1e-15
        })
    });

    let genes_ok = (0..10_000).all(|t| {
        let mut a: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mut b: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        crossover(&mut a, &mut b, 0.9, &mut rng);
        mutate(&mut a, 0.5, t % 1000, 1000, 5.0, &mut rng);
        mutate(&mut b, 1.0, t % 1000, 1000, 5.0, &mut rng);
        a.iter().chain(&b).all(|g| (-1.0..=1.0).contains(g))
    });

    let universe = Universe::new(-1.0, 1.0, 0.01).unwrap();
    let mut monotone = true;
    let mut in_support = true;
    for _ in 0..200 {
        let mut p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        p.sort_by(f64::total_cmp);
        if p[2] - p[0] < 0.05 {
            continue;
        }
        let mf = MembershipFunction::sample(&universe, &TermSpec::triangular("T", p[0], p[1], p[2])).unwrap();
        let (lo, hi): (f64, f64) = (rng.gen_range(0.01..1.0), rng.gen_range(0.01..1.0));
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let cut_lo = implication(&mf, lo, Implication::Mamdani);
        let cut_hi = implication(&mf, hi, Implication::Mamdani);
        monotone &= cut_lo.values().iter().zip(cut_hi.values()).all(|(a, b)| a <= b);
        for d in [
            Defuzzification::Centroid,
            Defuzzification::Bisector,
            Defuzzification::Mom,
            Defuzzification::Som,
            Defuzzification::Lom,
        ] {
            let x = defuzzify(&universe, &cut_lo, d).unwrap();
            in_support &= x >= p[0] - 1e-9 && x <= p[2] + 1e-9;
        }
    }

    let data = water_tank_data();
    let cfg = RcgaConfig { population_size: 30, n_iterations: 200, ..RcgaConfig::default() };
    let a = rcga::run(&data, &cfg, 99).unwrap();
    let b = rcga::run(&data, &cfg, 99).unwrap();
    let reproducible = a.solution.as_slice() == b.solution.as_slice() && a.history == b.history;

    verdict(
        aggregation_ok && genes_ok && monotone && in_support && reproducible,
        format!(
            "aggregation {aggregation_ok}, genes in bounds {genes_ok}, mamdani monotone {monotone}, \
             defuzz in support {in_support}, seed reproducible {reproducible}"
        ),
    )
}

fn degenerate_cases() -> Verdict {
    let zero = WeightMatrix::zeros(names(4)).unwrap();
    let cfg = SimulationConfig { inference: Inference::Kosko, ..SimulationConfig::default() };
    let trace = simulate(&StateVector(vec![0.3, 0.9, 0.0, 1.0]), &zero, &cfg).unwrap();
    let halves = trace.final_state().values().iter().all(|&v| v == 0.5);

    let empty = ExpertSurvey::new(Vec::new()).unwrap();
    let rejected = build_weight_matrix(&empty, &Universe::default(), &LinguisticTermSet::standard(), BuildMethods::default())
        .err();
    let schema_error = rejected.as_ref().is_some_and(|e| *e == FcmError::EmptySurvey && !e.is_numerical());

    let hsum = Aggregation::HSum.apply(1.0, 1.0);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let identity = (0..1000).all(|_| {
        let y = rng.gen_range(0.0..2.0);
        non_uniform_delta(500, 500, y, rng.gen(), 5.0) == 0.0
    });

    verdict(
        halves && schema_error && hsum == 1.0 && identity,
        format!(
            "kosko on zero matrix gives 0.5: {halves}; empty survey: {rejected:?}; hsum(1,1) = {hsum}; \
             final-generation perturbation is identity: {identity}"
        ),
    )
}

#[test]
fn acceptance() {
    let (rcga_verdict, learned) = rcga_learning();
    let report = [
        (1, "simulation trace", simulation_golden()),
        (2, "transfer spot check", transfer_spot_check()),
        (3, "entropy", entropy_check()),
        (4, "fuzzy pipeline", fuzzy_pipeline()),
        (5, "interventions", intervention_golden()),
        (6, "hebbian learning", hebbian()),
        (7, "rcga learning", rcga_verdict),
        (8, "validation", validation(&learned)),
        (9, "operator properties", operator_properties()),
        (10, "degenerate cases", degenerate_cases()),
    ];
    let mut failed = Vec::new();
    for (n, name, v) in &report {
        println!("criterion {n:>2} {}: {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed.push(*n);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
