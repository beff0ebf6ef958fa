#![allow(dead_code)]

use fcm_core::rcga::LongitudinalData;
use fcm_core::sim::{simulate, SimulationConfig};
use fcm_core::survey::{EdgeRating, Expert, ExpertSurvey, NO_CAUSALITY};
use fcm_core::{StateVector, WeightMatrix};

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("C{i}")).collect()
}

/// Eight-concept map used by the simulation and scenario examples.
pub fn map8() -> WeightMatrix {
    let rows = [
        [0.0, 0.0, 0.6, 0.9, 0.0, 0.0, 0.0, 0.8],
        [0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2, 0.5],
        [0.0, 0.7, 0.0, 0.0, 0.9, 0.0, 0.4, 0.1],
        [0.4, 0.0, 0.0, 0.0, 0.0, 0.9, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -0.9, 0.0, 0.3],
        [-0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.8, 0.4, 0.9],
        [0.1, 0.0, 0.0, 0.0, 0.0, 0.1, 0.6, 0.0],
    ];
    WeightMatrix::from_rows(names(8), &rows.map(|r| r.to_vec())).unwrap()
}

pub fn map8_initial() -> StateVector {
    StateVector(vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
}

/// Reference trace of `map8` from `map8_initial` (mKosko, sigmoid, slope 1).
pub const MAP8_TRACE: [[f64; 8]; 7] = [
    [1.000000, 1.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000, 0.000000],
    [0.750260, 0.731059, 0.645656, 0.710950, 0.500000, 0.500000, 0.549834, 0.785835],
    [0.738141, 0.765490, 0.749475, 0.799982, 0.746700, 0.769999, 0.838315, 0.921361],
    [0.730236, 0.784168, 0.767163, 0.812191, 0.805531, 0.829309, 0.898379, 0.950172],
    [0.727059, 0.789378, 0.769467, 0.812967, 0.816974, 0.838759, 0.908173, 0.954927],
    [0.726125, 0.790510, 0.769538, 0.812650, 0.818986, 0.839860, 0.909707, 0.955666],
    [0.725885, 0.790706, 0.769451, 0.812473, 0.819294, 0.839901, 0.909940, 0.955774],
];

/// Reference equilibria: baseline and the three continuous interventions.
pub const MAP8_EQUILIBRIA: [(&str, [f64; 8]); 4] = [
    ("baseline", [0.725885, 0.790706, 0.769451, 0.812473, 0.819294, 0.839901, 0.909940, 0.955774]),
    ("intervention_1", [0.644651, 0.870060, 0.758786, 0.798947, 0.817735, 0.838350, 0.911004, 0.954652]),
    ("intervention_2", [0.715704, 0.790580, 0.768132, 0.699316, 0.819160, 0.823430, 0.909917, 0.955427]),
    ("intervention_3", [0.723417, 0.790708, 0.769141, 0.812073, 0.563879, 0.871834, 0.909778, 0.952199]),
];

pub fn map8_interventions() -> Vec<(&'static str, Vec<(&'static str, f64)>)> {
    vec![
        ("intervention_1", vec![("C1", -0.3), ("C2", 0.5)]),
        ("intervention_2", vec![("C4", -0.5)]),
        ("intervention_3", vec![("C5", -1.0)]),
    ]
}

/// Water-tank expert matrix.
pub fn water_tank() -> WeightMatrix {
    let rows = [
        [0.0, -0.4, -0.25, 0.0, 0.3],
        [0.36, 0.0, 0.0, 0.0, 0.0],
        [0.45, 0.0, 0.0, 0.0, 0.0],
        [-0.9, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.6, 0.0, 0.3, 0.0],
    ];
    WeightMatrix::from_rows(names(5), &rows.map(|r| r.to_vec())).unwrap()
}

pub fn water_tank_initial() -> StateVector {
    StateVector(vec![0.40, 0.7077, 0.612, 0.717, 0.30])
}

/// First three simulated states of the water tank.
pub fn water_tank_data() -> LongitudinalData {
    let trace = simulate(&water_tank_initial(), &water_tank(), &SimulationConfig::default()).unwrap();
    LongitudinalData::from_states(names(5), &trace.rows[..3]).unwrap()
}

/// Six experts rating four edges; the last one answers "no causality" on
/// three of them.
pub fn six_experts() -> ExpertSurvey {
    let edges = [
        ("C1", "C2", ["+H", "+H", "+H", "+VH", "+VH", "+M"]),
        ("C2", "C1", ["+VH", "+M", "+M", "+VH", NO_CAUSALITY, "+M"]),
        ("C3", "C1", ["+VL", "+VL", "+VH", "+VH", "+VH", NO_CAUSALITY]),
        ("C3", "C4", ["-H", "+M", "+M", "+M", "+M", NO_CAUSALITY]),
    ];
    let experts = (0..6)
        .map(|e| Expert {
            id: format!("Expert{e}"),
            ratings: edges.iter().map(|(s, t, terms)| EdgeRating::new(*s, *t, terms[e])).collect(),
        })
        .collect();
    ExpertSurvey::new(experts).unwrap()
}
