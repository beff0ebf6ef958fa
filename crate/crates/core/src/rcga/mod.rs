//! Real-coded genetic algorithm for learning weight matrices from
//! longitudinal data.
//!
//! A chromosome is a full `N x N` matrix flattened row-major, genes in
//! `[-1, 1]`. Fitness is `1 / (a * Error + 1)` where Error is the normalised
//! `p`-norm deviation between observed states and the states the candidate
//! predicts one step ahead.

mod operators;
mod run;
mod validation;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::sim::{Dynamics, Inference, Transfer};
use crate::{FcmError, Result, StateVector, WeightMatrix};

pub use operators::{crossover, crossover_at, mutate, non_uniform_delta, roulette, select, tournament};
pub use run::{run, run_with_population, RcgaOutcome};
pub use validation::{validate, validate_ise, validate_ose, ValidationResult};

/// Observed states, one row per time step.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LongitudinalData {
    concepts: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl LongitudinalData {
    pub fn new(concepts: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(FcmError::InvalidConfig(format!("need at least 2 observations, got {}", rows.len())));
        }
        for row in &rows {
            if row.len() != concepts.len() {
                return Err(FcmError::DimensionMismatch { expected: concepts.len(), actual: row.len() });
            }
            if let Some(v) = row.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
                return Err(FcmError::InvalidConfig(format!("observation {v} is outside [-1, 1]")));
            }
        }
        for (i, c) in concepts.iter().enumerate() {
            if concepts[..i].contains(c) {
                return Err(FcmError::DuplicateConcept(c.clone()));
            }
        }
        Ok(Self { concepts, rows })
    }

    /// The first `rows` states of a trace.
    pub fn from_states(concepts: Vec<String>, states: &[StateVector]) -> Result<Self> {
        Self::new(concepts, states.iter().map(|s| s.0.clone()).collect())
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_concepts(&self) -> usize {
        self.concepts.len()
    }

    pub fn n_steps(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum GaType {
    #[default]
    Generational,
    /// Steady state: two offspring per step.
    Ssga,
}

impl FromStr for GaType {
    type Err = FcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "generational" => Ok(Self::Generational),
            "ssga" => Ok(Self::Ssga),
            _ => Err(FcmError::InvalidConfig(format!("unknown GA type `{s}`"))),
        }
    }
}

impl fmt::Display for GaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GaType::Generational => "generational",
            GaType::Ssga => "ssga",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RcgaConfig {
    pub population_size: usize,
    pub ga_type: GaType,
    pub p_recombination: f64,
    /// Per-gene mutation probability; `0.5 / N^2` when `None`.
    pub p_mutation: Option<f64>,
    pub n_iterations: usize,
    pub threshold: f64,
    pub a: f64,
    /// Norm exponent.
    pub p: f64,
    /// Error normalisation; `1 / ((T - 1) N)` when `None`.
    pub alpha: Option<f64>,
    /// Predict each step from the observed previous state (`true`) or from
    /// the candidate's own previous prediction.
    pub teacher_forcing: bool,
    /// Degree of non-uniform mutation.
    pub mutation_b: f64,
    pub tournament_size: usize,
    pub inference: Inference,
    pub transfer: Transfer,
    pub lambda: f64,
}

impl Default for RcgaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            ga_type: GaType::Generational,
            p_recombination: 0.9,
            p_mutation: None,
            n_iterations: 30000,
            threshold: 0.99,
            a: 100.0,
            p: 1.0,
            alpha: None,
            teacher_forcing: true,
            mutation_b: 5.0,
            tournament_size: 2,
            inference: Inference::MKosko,
            transfer: Transfer::Sigmoid,
            lambda: 1.0,
        }
    }
}

impl RcgaConfig {
    pub fn dynamics(&self) -> Dynamics {
        Dynamics { inference: self.inference, transfer: self.transfer, lambda: self.lambda }
    }

    pub fn p_mutation_for(&self, n: usize) -> f64 {
        self.p_mutation.unwrap_or(0.5 / (n * n) as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(FcmError::InvalidConfig(format!("{what} = {v} is out of range")));
        if self.population_size == 0 {
            return Err(FcmError::EmptyPopulation);
        }
        if self.n_iterations == 0 {
            return Err(FcmError::InvalidConfig("n_iterations must be positive".into()));
        }
        if self.tournament_size == 0 {
            return Err(FcmError::InvalidConfig("tournament size must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.p_recombination) {
            return bad("p_recombination", self.p_recombination);
        }
        if let Some(p) = self.p_mutation {
            if !(0.0..=1.0).contains(&p) {
                return bad("p_mutation", p);
            }
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return bad("threshold", self.threshold);
        }
        if !(self.a > 0.0) {
            return bad("a", self.a);
        }
        if !(self.p > 0.0) {
            return bad("p", self.p);
        }
        if let Some(alpha) = self.alpha {
            if !(alpha > 0.0) {
                return bad("alpha", alpha);
            }
        }
        if !(self.mutation_b >= 0.0) {
            return bad("mutation_b", self.mutation_b);
        }
        self.dynamics().validate()
    }
}

/// A candidate matrix and its fitness.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    pub fitness: f64,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Self {
        Self { genes, fitness: 0.0 }
    }
}

/// Normalised deviation between `data` and the predictions of `genes`.
pub(crate) fn error_of(genes: &[f64], data: &LongitudinalData, cfg: &RcgaConfig, dynamics: &Dynamics) -> f64 {
    let n = data.n_concepts();
    let rows = data.rows();
    let alpha = cfg.alpha.unwrap_or(1.0 / ((rows.len() - 1) * n) as f64);
    let mut total = 0.0;
    let mut predicted = rows[0].clone();
    let mut next = alloc::vec![0.0; n];
    for t in 1..rows.len() {
        let from = if cfg.teacher_forcing { &rows[t - 1] } else { &predicted };
        for (i, o) in next.iter_mut().enumerate() {
            *o = dynamics.update_flat(i, from, genes);
        }
        for (obs, est) in rows[t].iter().zip(&next) {
            let d = libm::fabs(obs - est);
            total += if cfg.p == 1.0 { d } else { libm::pow(d, cfg.p) };
        }
        core::mem::swap(&mut predicted, &mut next);
    }
    alpha * total
}

pub(crate) fn fitness_of(genes: &[f64], data: &LongitudinalData, cfg: &RcgaConfig, dynamics: &Dynamics) -> f64 {
    1.0 / (cfg.a * error_of(genes, data, cfg, dynamics) + 1.0)
}

/// Fitness of `candidate` on `data`, in `(0, 1]`.
pub fn fitness(candidate: &WeightMatrix, data: &LongitudinalData, cfg: &RcgaConfig) -> Result<f64> {
    if candidate.len() != data.n_concepts() {
        return Err(FcmError::DimensionMismatch { expected: data.n_concepts(), actual: candidate.len() });
    }
    Ok(fitness_of(candidate.as_slice(), data, cfg, &cfg.dynamics()))
}
