//! Hebbian fine-tuning of expert weight matrices.
//!
//! Both learners move concept values and weights together until every
//! desired output concept (DOC) settles inside its range:
//!
//! - NHL updates every existing edge each step,
//!   `w_ji <- gamma w_ji + eta A_i (A_j - sgn(w_ji) w_ji A_i)` for the edge
//!   `j -> i`, never creating edges and never flipping an edge's sign, then
//!   runs a modified-Kosko sigmoid step with the new weights.
//! - AHL walks an activation pattern. Each group of activated concepts updates
//!   its own value and all of its incoming edges,
//!   `w_ji <- (1 - gamma) w_ji + eta A_i (A_j - w_ji A_i)`, which creates edges
//!   where there were none. One pass over all groups is one learning step.
//!
//! A run terminates when, for every DOC, the distance to the range midpoint
//! (F1) has not increased over the last few steps, the last change is below
//! `thresh` (F2) and the value lies inside the range.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::sim::{Dynamics, Inference, Transfer};
use crate::{FcmError, Result, StateVector, WeightMatrix};

/// Steps over which F1 must be non-increasing.
pub const F1_WINDOW: usize = 5;

/// Desired `[min, max]` range per output concept.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct DocRanges(BTreeMap<String, (f64, f64)>);

impl DocRanges {
    pub fn new<I, S>(ranges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, (f64, f64))>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, (lo, hi)) in ranges {
            let name = name.into();
            if !(lo < hi) {
                return Err(FcmError::InvalidConfig(format!("DOC `{name}` range [{lo}, {hi}] is empty")));
            }
            map.insert(name, (lo, hi));
        }
        Ok(Self(map))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &(f64, f64))> {
        self.0.iter()
    }

    pub fn get(&self, concept: &str) -> Option<(f64, f64)> {
        self.0.get(concept).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn indices(&self, w: &WeightMatrix) -> Result<Vec<(String, usize, f64, f64)>> {
        self.0
            .iter()
            .map(|(name, &(lo, hi))| {
                let i = w.index_of(name).ok_or_else(|| FcmError::UnknownDoc(name.clone()))?;
                Ok((name.clone(), i, lo, hi))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HebbianConfig {
    pub learning_rate: f64,
    pub decay: f64,
    /// Sigmoid slope.
    pub lambda: f64,
    pub thresh: f64,
    pub max_iterations: usize,
}

impl Default for HebbianConfig {
    fn default() -> Self {
        Self { learning_rate: 0.01, decay: 1.0, lambda: 1.0, thresh: 0.002, max_iterations: 100 }
    }
}

impl HebbianConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0) {
            return Err(FcmError::InvalidLearningRate(self.learning_rate));
        }
        if !(0.0..=1.0).contains(&self.decay) {
            return Err(FcmError::InvalidConfig(format!("decay must lie in [0, 1], got {}", self.decay)));
        }
        if !(self.lambda > 0.0) {
            return Err(FcmError::InvalidConfig(format!("slope must be positive, got {}", self.lambda)));
        }
        if !(self.thresh > 0.0) {
            return Err(FcmError::InvalidConfig(format!("thresh must be positive, got {}", self.thresh)));
        }
        Ok(())
    }

    fn dynamics(&self) -> Dynamics {
        Dynamics { inference: Inference::MKosko, transfer: Transfer::Sigmoid, lambda: self.lambda }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AhlConfig {
    pub hebbian: HebbianConfig,
    /// Groups of concepts activated together, fired in order.
    pub activation_pattern: Vec<Vec<String>>,
    /// Replace the fixed rate and decay with `b1 exp(-lbd1 k)` and `b2 exp(-lbd2 k)`.
    pub auto_learn: bool,
    pub b1: f64,
    pub lbd1: f64,
    pub b2: f64,
    pub lbd2: f64,
}

impl AhlConfig {
    pub fn new(hebbian: HebbianConfig, activation_pattern: Vec<Vec<String>>) -> Self {
        Self { hebbian, activation_pattern, auto_learn: false, b1: 0.003, lbd1: 0.1, b2: 0.005, lbd2: 1.0 }
    }

    /// Learning rate and decay for learning step `k` (zero-based).
    pub fn schedule(&self, k: usize) -> (f64, f64) {
        if self.auto_learn {
            let k = k as f64;
            (self.b1 * libm::exp(-self.lbd1 * k), self.b2 * libm::exp(-self.lbd2 * k))
        } else {
            (self.hebbian.learning_rate, self.hebbian.decay)
        }
    }

    fn groups(&self, w: &WeightMatrix) -> Result<Vec<Vec<usize>>> {
        let mut seen = alloc::vec![false; w.len()];
        let mut groups = Vec::with_capacity(self.activation_pattern.len());
        for group in &self.activation_pattern {
            let mut idx = Vec::with_capacity(group.len());
            for c in group {
                let i = w.index_of(c).ok_or_else(|| FcmError::IncompletePattern(format!("unknown concept `{c}`")))?;
                if seen[i] {
                    return Err(FcmError::IncompletePattern(format!("`{c}` appears in more than one group")));
                }
                seen[i] = true;
                idx.push(i);
            }
            groups.push(idx);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(FcmError::IncompletePattern(format!("`{}` is never activated", w.concepts()[i])));
        }
        Ok(groups)
    }

    fn validate(&self) -> Result<()> {
        self.hebbian.validate()?;
        if self.auto_learn && [self.b1, self.lbd1, self.b2, self.lbd2].iter().any(|v| !(*v >= 0.0)) {
            return Err(FcmError::InvalidConfig("schedule coefficients must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Termination {
    BothConditionsMet,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LearningOutcome {
    pub weights: WeightMatrix,
    /// Number of learning steps taken when the termination conditions held.
    pub converged_at: Option<usize>,
    pub final_state: StateVector,
    pub termination: Termination,
    /// DOC values per learning step, starting with the initial state.
    pub doc_trace: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TerminationMetrics {
    /// Distance of each DOC value to its range midpoint, per recorded step.
    pub f1: BTreeMap<String, Vec<f64>>,
    /// Every DOC moved by less than `thresh` in the last step.
    pub f2_satisfied: bool,
}

/// F1 series and the F2 condition for recorded DOC values.
pub fn termination_metrics(
    doc_trace: &BTreeMap<String, Vec<f64>>,
    docs: &DocRanges,
    thresh: f64,
) -> TerminationMetrics {
    let mut f1 = BTreeMap::new();
    let mut f2_satisfied = true;
    for (name, series) in doc_trace {
        if let Some((lo, hi)) = docs.get(name) {
            let mid = (lo + hi) / 2.0;
            f1.insert(name.clone(), series.iter().map(|v| libm::fabs(v - mid)).collect());
        }
        f2_satisfied &= match series.as_slice() {
            [.., a, b] => libm::fabs(b - a) < thresh,
            _ => false,
        };
    }
    TerminationMetrics { f1, f2_satisfied }
}

/// F1 has not increased over the last [`F1_WINDOW`] steps.
fn f1_declining(f1: &[f64]) -> bool {
    let start = f1.len().saturating_sub(F1_WINDOW + 1);
    f1.len() >= 2 && f1[start..].windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

fn should_stop(
    doc_trace: &BTreeMap<String, Vec<f64>>,
    docs: &DocRanges,
    thresh: f64,
) -> bool {
    let metrics = termination_metrics(doc_trace, docs, thresh);
    metrics.f2_satisfied
        && metrics.f1.values().all(|s| f1_declining(s))
        && docs.iter().all(|(name, &(lo, hi))| {
            doc_trace[name].last().is_some_and(|v| (lo..=hi).contains(v))
        })
}

struct Tracker {
    docs: Vec<(String, usize, f64, f64)>,
    trace: BTreeMap<String, Vec<f64>>,
}

impl Tracker {
    fn new(docs: Vec<(String, usize, f64, f64)>, state: &[f64]) -> Self {
        let trace = docs.iter().map(|(n, i, _, _)| (n.clone(), alloc::vec![state[*i]])).collect();
        Self { docs, trace }
    }

    fn record(&mut self, state: &[f64]) {
        for (name, i, _, _) in &self.docs {
            self.trace.get_mut(name).expect("tracked").push(state[*i]);
        }
    }
}

fn check_inputs(initial: &StateVector, w0: &WeightMatrix, docs: &DocRanges) -> Result<Vec<(String, usize, f64, f64)>> {
    if initial.len() != w0.len() {
        return Err(FcmError::DimensionMismatch { expected: w0.len(), actual: initial.len() });
    }
    docs.indices(w0)
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Non-linear Hebbian learning.
pub fn nhl_run(
    initial: &StateVector,
    w0: &WeightMatrix,
    docs: &DocRanges,
    cfg: &HebbianConfig,
) -> Result<LearningOutcome> {
    let doc_idx = check_inputs(initial, w0, docs)?;
    cfg.validate()?;
    let n = w0.len();
    let dynamics = cfg.dynamics();
    let (eta, gamma) = (cfg.learning_rate, cfg.decay);

    let mut w = w0.clone();
    let mut state = initial.0.clone();
    let mut next = alloc::vec![0.0; n];
    let mut tracker = Tracker::new(doc_idx, &state);
    let mut converged_at = None;

    for k in 1..=cfg.max_iterations {
        for j in 0..n {
            for i in 0..n {
                let original = w0[(j, i)];
                if original == 0.0 {
                    continue;
                }
                let wji = w[(j, i)];
                let mut updated = gamma * wji + eta * state[i] * (state[j] - sign(wji) * wji * state[i]);
                if sign(updated) == -sign(original) {
                    updated = 0.0;
                }
                w[(j, i)] = updated;
            }
        }
        dynamics.step_into(&state, &w, &mut next);
        core::mem::swap(&mut state, &mut next);
        tracker.record(&state);
        if should_stop(&tracker.trace, docs, cfg.thresh) {
            converged_at = Some(k);
            break;
        }
    }
    Ok(finish(w, state, converged_at, tracker))
}

/// Active Hebbian learning.
pub fn ahl_run(
    initial: &StateVector,
    w0: &WeightMatrix,
    docs: &DocRanges,
    cfg: &AhlConfig,
) -> Result<LearningOutcome> {
    let doc_idx = check_inputs(initial, w0, docs)?;
    cfg.validate()?;
    let groups = cfg.groups(w0)?;
    let n = w0.len();
    let dynamics = cfg.hebbian.dynamics();

    let mut w = w0.clone();
    let mut state = initial.0.clone();
    let mut tracker = Tracker::new(doc_idx, &state);
    let mut converged_at = None;

    for k in 1..=cfg.hebbian.max_iterations {
        let (eta, gamma) = cfg.schedule(k - 1);
        for group in &groups {
            let snapshot_w = w.clone();
            let snapshot = state.clone();
            for &i in group {
                for j in (0..n).filter(|&j| j != i) {
                    let wji = snapshot_w[(j, i)];
                    w[(j, i)] = (1.0 - gamma) * wji + eta * snapshot[i] * (snapshot[j] - wji * snapshot[i]);
                }
                state[i] = dynamics.update(i, &snapshot, &snapshot_w);
            }
        }
        tracker.record(&state);
        if should_stop(&tracker.trace, docs, cfg.hebbian.thresh) {
            converged_at = Some(k);
            break;
        }
    }
    Ok(finish(w, state, converged_at, tracker))
}

fn finish(weights: WeightMatrix, state: Vec<f64>, converged_at: Option<usize>, tracker: Tracker) -> LearningOutcome {
    LearningOutcome {
        weights,
        converged_at,
        final_state: StateVector(state),
        termination: if converged_at.is_some() { Termination::BothConditionsMet } else { Termination::MaxIterations },
        doc_trace: tracker.trace,
    }
}

impl LearningOutcome {
    pub fn message(&self, algorithm: &str, learning_rate: f64, decay: f64) -> String {
        match self.converged_at {
            Some(k) => format!(
                "The {algorithm} learning process converged at step {k} with the learning rate eta = {learning_rate} and decay = {decay}!"
            ),
            None => format!(
                "The {algorithm} learning process did not converge with the learning rate eta = {learning_rate} and decay = {decay}."
            ),
        }
    }
}
