mod common;

use common::*;
use fcm_core::fuzzy::{build_weight_matrix, BuildMethods, LinguisticTermSet, Universe};
use fcm_core::hebbian::{ahl_run, nhl_run, AhlConfig, DocRanges, HebbianConfig, Termination};
use fcm_core::intervention::{Scenarios, BASELINE};
use fcm_core::sim::{simulate, SimulationConfig};
use fcm_core::WeightMatrix;

fn water_docs() -> DocRanges {
    DocRanges::new([("C1", (0.68, 0.74)), ("C5", (0.74, 0.8))]).unwrap()
}

fn pattern(groups: &[&[&str]]) -> Vec<Vec<String>> {
    groups.iter().map(|g| g.iter().map(|c| c.to_string()).collect()).collect()
}

fn ahl_config() -> AhlConfig {
    let hebbian = HebbianConfig { learning_rate: 0.01, decay: 0.03, lambda: 1.0, ..HebbianConfig::default() };
    AhlConfig::new(hebbian, pattern(&[&["C1"], &["C2", "C3"], &["C5"], &["C4"]]))
}

fn nhl_config() -> HebbianConfig {
    HebbianConfig { learning_rate: 0.01, decay: 1.0, lambda: 0.98, ..HebbianConfig::default() }
}

fn in_range(x: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&x)
}

#[test]
fn map8_trace() {
    let trace = simulate(&map8_initial(), &map8(), &SimulationConfig::default()).unwrap();
    assert_eq!(trace.rows.len(), MAP8_TRACE.len());
    for (t, (row, expected)) in trace.rows.iter().zip(MAP8_TRACE.iter()).enumerate() {
        for (c, (got, want)) in row.values().iter().zip(expected).enumerate() {
            assert!((got - want).abs() < 1e-5, "row {t} C{}: {got} vs {want}", c + 1);
        }
    }
    assert_eq!(trace.converged_state(), Some(7));
    assert_eq!(trace.message(), "The values converged in the 7 state (e <= 0.001)");
}

#[test]
fn map8_scenarios() {
    let mut s = Scenarios::new(&map8_initial(), map8(), SimulationConfig::default()).unwrap();
    for (name, weights) in map8_interventions() {
        s.add_intervention(name, weights, 1.0).unwrap();
    }
    s.test_all(None).unwrap();

    let eq = s.equilibria();
    assert_eq!(eq[0].0, BASELINE);
    for ((name, state), (want_name, want)) in eq.iter().zip(MAP8_EQUILIBRIA.iter()) {
        assert_eq!(name, want_name);
        for (got, want) in state.values().iter().zip(want) {
            assert!((got - want).abs() < 1e-3, "{name}: {got} vs {want}");
        }
    }

    let cmp = s.comparison().unwrap();
    let row = |n: &str| cmp.iter().find(|(name, _)| name == n).unwrap().1.clone();
    assert!(row(BASELINE).iter().all(|&v| v == 0.0));
    assert!((row("intervention_1")[0] - -11.191083).abs() < 1e-2);
    assert!((row("intervention_3")[4] - -31.175022).abs() < 1e-2);
}

#[test]
fn six_expert_build() {
    let w = build_weight_matrix(&six_experts(), &Universe::default(), &LinguisticTermSet::standard(), BuildMethods::default())
        .unwrap();
    for (s, t, want) in [("C1", "C2", 0.703218), ("C2", "C1", 0.608308), ("C3", "C1", 0.555732), ("C3", "C4", 0.159091)] {
        let got = w.weight(s, t).unwrap();
        assert!((got - want).abs() < 0.01, "{s}->{t}: {got} vs {want}");
    }
    assert_eq!(w.weight("C1", "C3"), Some(0.0));
}

#[test]
fn nhl_water_tank() {
    let w0 = water_tank();
    let out = nhl_run(&water_tank_initial(), &w0, &water_docs(), &nhl_config()).unwrap();
    assert_eq!(out.termination, Termination::BothConditionsMet);
    let k = out.converged_at.unwrap();
    assert!(k.abs_diff(63) <= 15, "converged at {k}");
    assert!(in_range(out.final_state[0], (0.68, 0.74)));
    assert!(in_range(out.final_state[4], (0.74, 0.8)));
    for (a, b) in w0.as_slice().iter().zip(out.weights.as_slice()) {
        if *a == 0.0 {
            assert_eq!(*b, 0.0);
        } else {
            assert!(b * a >= 0.0);
        }
    }
    let reference = [
        ("C1", "C2", -0.200310),
        ("C1", "C3", -0.023806),
        ("C1", "C5", 0.472687),
        ("C2", "C1", 0.539068),
        ("C3", "C1", 0.571531),
        ("C4", "C1", -0.832174),
        ("C5", "C2", 0.710523),
        ("C5", "C4", 0.496934),
    ];
    for (s, t, want) in reference {
        let got = out.weights.weight(s, t).unwrap();
        assert!((got - want).abs() < 0.05, "{s}->{t}: {got} vs {want}");
    }
    assert_eq!(
        out.message("NHL", 0.01, 1.0),
        format!("The NHL learning process converged at step {k} with the learning rate eta = 0.01 and decay = 1!")
    );
}

/// Reference AHL matrix after 19 passes.
const AHL_REFERENCE: [[f64; 5]; 5] = [
    [0.000000, -0.128532, -0.060395, 0.071200, 0.218170],
    [0.245859, 0.000000, 0.068981, 0.076592, 0.074289],
    [0.288257, 0.069457, 0.000000, 0.070342, 0.068190],
    [-0.386349, 0.073807, 0.067187, 0.000000, 0.073991],
    [0.070113, 0.368913, 0.069145, 0.223312, 0.000000],
];

#[test]
fn ahl_water_tank_weights_after_19_passes() {
    let w0 = water_tank();
    let mut cfg = ahl_config();
    cfg.hebbian.max_iterations = 19;
    let out = ahl_run(&water_tank_initial(), &w0, &water_docs(), &cfg).unwrap();
    let reference = WeightMatrix::from_rows(names(5), &AHL_REFERENCE.map(|r| r.to_vec())).unwrap();
    let diff = out.weights.max_abs_diff(&reference);
    assert!(diff < 0.02, "max abs diff {diff}");
    let created = w0.as_slice().iter().zip(out.weights.as_slice()).filter(|(a, b)| **a == 0.0 && **b != 0.0).count();
    assert_eq!(created, 12);
    let c2c3 = out.weights.weight("C2", "C3").unwrap();
    assert!((c2c3 - 0.069).abs() < 0.005, "C2->C3 = {c2c3}");
}

fn assert_follows_simulation(weights: &WeightMatrix, final_state: &[f64], steps: usize, lambda: f64) {
    let cfg = SimulationConfig { lambda, max_iterations: steps, thresh: 1e-300, ..SimulationConfig::default() };
    let trace = simulate(&water_tank_initial(), &water_tank(), &cfg).unwrap();
    assert_eq!(weights, &water_tank());
    for (a, b) in final_state.iter().zip(trace.rows[steps].values()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn frozen_nhl_is_simulation() {
    let cfg = HebbianConfig { learning_rate: 0.0, decay: 1.0, max_iterations: 12, ..HebbianConfig::default() };
    let out = nhl_run(&water_tank_initial(), &water_tank(), &water_docs(), &cfg).unwrap();
    let steps = out.converged_at.unwrap_or(12);
    assert_follows_simulation(&out.weights, out.final_state.values(), steps, 1.0);
}

#[test]
fn frozen_ahl_is_simulation() {
    let hebbian = HebbianConfig { learning_rate: 0.0, decay: 0.0, max_iterations: 12, ..HebbianConfig::default() };
    let cfg = AhlConfig::new(hebbian, pattern(&[&["C1", "C2", "C3", "C4", "C5"]]));
    let out = ahl_run(&water_tank_initial(), &water_tank(), &water_docs(), &cfg).unwrap();
    let steps = out.converged_at.unwrap_or(12);
    assert_follows_simulation(&out.weights, out.final_state.values(), steps, 1.0);
}

#[test]
fn zero_schedule_freezes_weights() {
    let mut cfg = ahl_config();
    cfg.auto_learn = true;
    cfg.b1 = 0.0;
    cfg.b2 = 0.0;
    let out = ahl_run(&water_tank_initial(), &water_tank(), &water_docs(), &cfg).unwrap();
    assert_eq!(out.weights, water_tank());
}

#[test]
fn docs_at_equilibrium_converge_with_decayed_weights() {
    let trace = simulate(&water_tank_initial(), &water_tank(), &SimulationConfig::default()).unwrap();
    let eq = trace.final_state();
    let e = 0.05;
    let docs = DocRanges::new([("C1", (eq[0] - e, eq[0] + e)), ("C5", (eq[4] - e, eq[4] + e))]).unwrap();
    let cfg = HebbianConfig { learning_rate: 0.0, decay: 1.0, ..HebbianConfig::default() };
    let out = nhl_run(eq, &water_tank(), &docs, &cfg).unwrap();
    assert_eq!(out.termination, Termination::BothConditionsMet);
    assert_eq!(out.weights, water_tank());
}
