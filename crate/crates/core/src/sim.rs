//! Synchronous FCM simulation.
//!
//! Every step recomputes all concepts from a snapshot of the previous state:
//!
//! - Kosko: `A_i' = f(sum_j A_j w_ji)`
//! - modified Kosko: `A_i' = f(A_i + sum_j A_j w_ji)`
//! - rescaled: `A_i' = f((2A_i - 1) + sum_j (2A_j - 1) w_ji)`
//!
//! The run stops once no output concept moves by `thresh` or more between
//! consecutive steps, or after `max_iterations` steps.

use core::fmt;
use core::str::FromStr;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{FcmError, Result, StateVector, WeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Inference {
    Kosko,
    #[default]
    MKosko,
    Rescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Transfer {
    #[default]
    Sigmoid,
    Tanh,
    Bivalent,
    Trivalent,
}

impl FromStr for Inference {
    type Err = FcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kosko" => Ok(Self::Kosko),
            "mkosko" => Ok(Self::MKosko),
            "rescaled" => Ok(Self::Rescaled),
            _ => Err(FcmError::InvalidConfig(format!("unknown inference `{s}`"))),
        }
    }
}

impl FromStr for Transfer {
    type Err = FcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sigmoid" => Ok(Self::Sigmoid),
            "tanh" => Ok(Self::Tanh),
            "bivalent" => Ok(Self::Bivalent),
            "trivalent" => Ok(Self::Trivalent),
            _ => Err(FcmError::InvalidConfig(format!("unknown transfer `{s}`"))),
        }
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inference::Kosko => "kosko",
            Inference::MKosko => "mkosko",
            Inference::Rescaled => "rescaled",
        })
    }
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transfer::Sigmoid => "sigmoid",
            Transfer::Tanh => "tanh",
            Transfer::Bivalent => "bivalent",
            Transfer::Trivalent => "trivalent",
        })
    }
}

/// `lambda` is the sigmoid steepness; the other transfers ignore it.
pub fn transfer(x: f64, kind: Transfer, lambda: f64) -> f64 {
    match kind {
        Transfer::Sigmoid => 1.0 / (1.0 + libm::exp(-lambda * x)),
        Transfer::Tanh => libm::tanh(x),
        Transfer::Bivalent => {
            if x > 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Transfer::Trivalent => {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }
        }
    }
}

/// Inference rule plus transfer function: everything needed for one update.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Dynamics {
    pub inference: Inference,
    pub transfer: Transfer,
    pub lambda: f64,
}

impl Default for Dynamics {
    fn default() -> Self {
        Self { inference: Inference::MKosko, transfer: Transfer::Sigmoid, lambda: 1.0 }
    }
}

impl Dynamics {
    /// New value of concept `i` computed from `state`.
    #[inline]
    pub fn update(&self, i: usize, state: &[f64], w: &WeightMatrix) -> f64 {
        self.update_flat(i, state, w.as_slice())
    }

    /// [`Dynamics::update`] on a row-major `n x n` weight slice.
    #[inline]
    pub fn update_flat(&self, i: usize, state: &[f64], weights: &[f64]) -> f64 {
        let n = state.len();
        let x = match self.inference {
            Inference::Kosko => (0..n).map(|j| state[j] * weights[j * n + i]).sum::<f64>(),
            Inference::MKosko => state[i] + (0..n).map(|j| state[j] * weights[j * n + i]).sum::<f64>(),
            Inference::Rescaled => {
                (2.0 * state[i] - 1.0)
                    + (0..n).map(|j| (2.0 * state[j] - 1.0) * weights[j * n + i]).sum::<f64>()
            }
        };
        transfer(x, self.transfer, self.lambda)
    }

    /// Synchronous step into `out`; `state`, `out` and `w` must agree in size.
    pub fn step_into(&self, state: &[f64], w: &WeightMatrix, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.update(i, state, w);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.transfer == Transfer::Sigmoid && !(self.lambda > 0.0) {
            return Err(FcmError::InvalidConfig(format!("sigmoid lambda must be positive, got {}", self.lambda)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationConfig {
    pub inference: Inference,
    pub transfer: Transfer,
    pub lambda: f64,
    pub thresh: f64,
    pub max_iterations: usize,
    /// Concepts checked for convergence; all of them when `None`.
    pub output_concepts: Option<Vec<String>>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            inference: Inference::MKosko,
            transfer: Transfer::Sigmoid,
            lambda: 1.0,
            thresh: 0.001,
            max_iterations: 50,
            output_concepts: None,
        }
    }
}

impl SimulationConfig {
    pub fn dynamics(&self) -> Dynamics {
        Dynamics { inference: self.inference, transfer: self.transfer, lambda: self.lambda }
    }

    pub fn validate(&self) -> Result<()> {
        self.dynamics().validate()?;
        if !(self.thresh > 0.0) {
            return Err(FcmError::InvalidConfig(format!("thresh must be positive, got {}", self.thresh)));
        }
        Ok(())
    }

    fn output_indices(&self, w: &WeightMatrix) -> Result<Vec<usize>> {
        match &self.output_concepts {
            None => Ok((0..w.len()).collect()),
            Some(names) => names.iter().map(|c| w.require_index(c)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimulationTrace {
    pub concepts: Vec<String>,
    /// Row 0 is the initial state.
    pub rows: Vec<StateVector>,
    /// Row index `t` of the first row that moved less than `thresh` from row `t - 1`.
    pub converged_at: Option<usize>,
    pub thresh: f64,
}

impl SimulationTrace {
    pub fn final_state(&self) -> &StateVector {
        self.rows.last().expect("trace always holds the initial state")
    }

    /// Number of states up to and including the converged one
    /// (what the convergence message reports).
    pub fn converged_state(&self) -> Option<usize> {
        self.converged_at.map(|t| t + 1)
    }

    pub fn is_converged(&self) -> bool {
        self.converged_at.is_some()
    }

    /// Human-readable outcome line.
    pub fn message(&self) -> String {
        match self.converged_state() {
            Some(s) => format!("The values converged in the {s} state (e <= {})", self.thresh),
            None => format!(
                "The values did not converge within {} iterations (e <= {})",
                self.rows.len() - 1,
                self.thresh
            ),
        }
    }

    pub fn column(&self, concept: &str) -> Option<Vec<f64>> {
        let i = self.concepts.iter().position(|c| c == concept)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn check_dims(state: &StateVector, w: &WeightMatrix) -> Result<()> {
    if state.len() != w.len() {
        return Err(FcmError::DimensionMismatch { expected: w.len(), actual: state.len() });
    }
    Ok(())
}

pub fn step(state: &StateVector, w: &WeightMatrix, cfg: &SimulationConfig) -> Result<StateVector> {
    check_dims(state, w)?;
    let mut out = alloc::vec![0.0; state.len()];
    cfg.dynamics().step_into(state.values(), w, &mut out);
    Ok(StateVector(out))
}

pub fn simulate(initial: &StateVector, w: &WeightMatrix, cfg: &SimulationConfig) -> Result<SimulationTrace> {
    simulate_clamped(initial, w, cfg, &[])
}

/// Like [`simulate`], but the listed concepts are reset to the given values
/// after every step (and in the initial state).
pub fn simulate_clamped(
    initial: &StateVector,
    w: &WeightMatrix,
    cfg: &SimulationConfig,
    clamps: &[(usize, f64)],
) -> Result<SimulationTrace> {
    check_dims(initial, w)?;
    cfg.validate()?;
    let outputs = cfg.output_indices(w)?;
    if let Some(&(i, _)) = clamps.iter().find(|(i, _)| *i >= w.len()) {
        return Err(FcmError::DimensionMismatch { expected: w.len(), actual: i + 1 });
    }
    let dynamics = cfg.dynamics();

    let mut current = initial.clone();
    for &(i, v) in clamps {
        current[i] = v;
    }
    let mut rows = alloc::vec![current];
    let mut converged_at = None;
    for t in 1..=cfg.max_iterations {
        let prev = rows[t - 1].values();
        let mut next = alloc::vec![0.0; prev.len()];
        dynamics.step_into(prev, w, &mut next);
        for &(i, v) in clamps {
            next[i] = v;
        }
        let delta = outputs.iter().fold(0.0, |m: f64, &i| m.max(libm::fabs(next[i] - prev[i])));
        rows.push(StateVector(next));
        if delta < cfg.thresh {
            converged_at = Some(t);
            break;
        }
    }
    Ok(SimulationTrace { concepts: w.concepts().to_vec(), rows, converged_at, thresh: cfg.thresh })
}
