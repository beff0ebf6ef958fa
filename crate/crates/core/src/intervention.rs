//! What-if analysis on a weight matrix.
//!
//! The baseline is the equilibrium of an ordinary simulation. A continuous
//! intervention is an extra concept clamped to 1 for the whole run, whose
//! outgoing weights are the intervention weights scaled by its effectiveness.
//! A single-shot intervention overrides some concept values once and lets the
//! map run freely from there.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::sim::{simulate, simulate_clamped, SimulationConfig, SimulationTrace};
use crate::{FcmError, Result, StateVector, WeightMatrix};

/// Reserved scenario name of the baseline.
pub const BASELINE: &str = "baseline";

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum InterventionKind {
    /// Extra concept clamped to 1 with edges `weights x effectiveness`.
    Continuous { weights: BTreeMap<String, f64>, effectiveness: f64 },
    /// Concept values replaced once, at the start of the run.
    SingleShot { overrides: BTreeMap<String, f64> },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Intervention {
    pub name: String,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub kind: InterventionKind,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioOutcome {
    pub name: String,
    /// Trace over the map's own concepts (the intervention concept is dropped).
    pub trace: SimulationTrace,
}

impl ScenarioOutcome {
    pub fn equilibrium(&self) -> &StateVector {
        self.trace.final_state()
    }
}

#[derive(Debug, Clone)]
pub struct Scenarios {
    weights: WeightMatrix,
    config: SimulationConfig,
    baseline: SimulationTrace,
    interventions: BTreeMap<String, Intervention>,
    outcomes: BTreeMap<String, ScenarioOutcome>,
}

impl Scenarios {
    /// Runs the baseline simulation from `initial`.
    pub fn new(initial: &StateVector, weights: WeightMatrix, config: SimulationConfig) -> Result<Self> {
        let baseline = simulate(initial, &weights, &config)?;
        Ok(Self { weights, config, baseline, interventions: BTreeMap::new(), outcomes: BTreeMap::new() })
    }

    pub fn concepts(&self) -> &[String] {
        self.weights.concepts()
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn baseline(&self) -> &SimulationTrace {
        &self.baseline
    }

    pub fn baseline_equilibrium(&self) -> &StateVector {
        self.baseline.final_state()
    }

    pub fn interventions(&self) -> impl Iterator<Item = &Intervention> {
        self.interventions.values()
    }

    pub fn outcome(&self, name: &str) -> Option<&ScenarioOutcome> {
        self.outcomes.get(name)
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if name.eq_ignore_ascii_case(BASELINE) || self.interventions.contains_key(name) {
            return Err(FcmError::DuplicateName(name.into()));
        }
        Ok(())
    }

    fn concept_map<I, S>(&self, values: I, bounds: Option<(f64, f64)>) -> Result<BTreeMap<String, f64>>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (concept, v) in values {
            let concept = concept.into();
            if self.weights.index_of(&concept).is_none() {
                return Err(FcmError::UnknownConcept(concept));
            }
            if let Some((lo, hi)) = bounds {
                if !(lo..=hi).contains(&v) {
                    return Err(FcmError::InvalidConfig(alloc::format!(
                        "intervention weight on `{concept}` must lie in [{lo}, {hi}], got {v}"
                    )));
                }
            }
            map.insert(concept, v);
        }
        Ok(map)
    }

    /// Register a continuous intervention.
    pub fn add_intervention<I, S>(&mut self, name: &str, weights: I, effectiveness: f64) -> Result<()>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        self.check_name(name)?;
        if !(0.0..=1.0).contains(&effectiveness) {
            return Err(FcmError::EffectivenessOutOfRange(effectiveness));
        }
        let weights = self.concept_map(weights, Some((-1.0, 1.0)))?;
        let kind = InterventionKind::Continuous { weights, effectiveness };
        self.interventions.insert(name.into(), Intervention { name: name.into(), kind });
        Ok(())
    }

    /// Register a single-shot intervention.
    pub fn add_single_shot<I, S>(&mut self, name: &str, overrides: I) -> Result<()>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        self.check_name(name)?;
        let overrides = self.concept_map(overrides, None)?;
        let kind = InterventionKind::SingleShot { overrides };
        self.interventions.insert(name.into(), Intervention { name: name.into(), kind });
        Ok(())
    }

    pub fn add(&mut self, intervention: Intervention) -> Result<()> {
        match intervention.kind {
            InterventionKind::Continuous { weights, effectiveness } => {
                self.add_intervention(&intervention.name, weights, effectiveness)
            }
            InterventionKind::SingleShot { overrides } => self.add_single_shot(&intervention.name, overrides),
        }
    }

    /// The baseline matrix extended with the intervention concept of a
    /// continuous intervention.
    pub fn extended_matrix(&self, name: &str) -> Result<WeightMatrix> {
        let iv = self.interventions.get(name).ok_or_else(|| FcmError::UnknownIntervention(name.into()))?;
        let InterventionKind::Continuous { weights, effectiveness } = &iv.kind else {
            return Err(FcmError::InvalidConfig(alloc::format!("`{name}` is not a continuous intervention")));
        };
        let n = self.weights.len();
        let mut w = self.weights.extended(iv.name.clone())?;
        for (target, weight) in weights {
            let j = self.weights.require_index(target)?;
            w[(n, j)] = weight * effectiveness;
        }
        Ok(w)
    }

    /// Runs the named intervention from the baseline equilibrium, optionally
    /// with its own iteration budget.
    pub fn test_intervention(&mut self, name: &str, iterations: Option<usize>) -> Result<&ScenarioOutcome> {
        let iv = self.interventions.get(name).ok_or_else(|| FcmError::UnknownIntervention(name.into()))?;
        let mut cfg = self.config.clone();
        if let Some(it) = iterations {
            cfg.max_iterations = it;
        }
        let mut start = self.baseline_equilibrium().clone();
        let trace = match &iv.kind {
            InterventionKind::Continuous { .. } => {
                let n = self.weights.len();
                let w = self.extended_matrix(name)?;
                start.0.push(1.0);
                let mut trace = simulate_clamped(&start, &w, &cfg, &[(n, 1.0)])?;
                trace.concepts.truncate(n);
                for row in &mut trace.rows {
                    row.0.truncate(n);
                }
                trace
            }
            InterventionKind::SingleShot { overrides } => {
                for (c, v) in overrides {
                    start[self.weights.require_index(c)?] = *v;
                }
                simulate(&start, &self.weights, &cfg)?
            }
        };
        self.outcomes.insert(name.into(), ScenarioOutcome { name: name.into(), trace });
        Ok(&self.outcomes[name])
    }

    /// Tests every registered intervention that has not been tested yet.
    pub fn test_all(&mut self, iterations: Option<usize>) -> Result<()> {
        let pending: Vec<String> =
            self.interventions.keys().filter(|k| !self.outcomes.contains_key(*k)).cloned().collect();
        for name in pending {
            self.test_intervention(&name, iterations)?;
        }
        Ok(())
    }

    /// Baseline followed by every tested scenario, in name order.
    pub fn equilibria(&self) -> Vec<(String, StateVector)> {
        let mut out = alloc::vec![(String::from(BASELINE), self.baseline_equilibrium().clone())];
        out.extend(self.outcomes.values().map(|o| (o.name.clone(), o.equilibrium().clone())));
        out
    }

    /// Percent change against the baseline for the baseline itself (all
    /// zeros) and every tested scenario.
    pub fn comparison(&self) -> Result<Vec<(String, Vec<f64>)>> {
        let base = self.baseline_equilibrium();
        self.equilibria()
            .into_iter()
            .map(|(name, eq)| Ok((name, percent_change(self.concepts(), base, &eq)?)))
            .collect()
    }
}

/// `100 (value - base) / base` per concept.
pub fn percent_change(concepts: &[String], base: &StateVector, value: &StateVector) -> Result<Vec<f64>> {
    if base.len() != value.len() {
        return Err(FcmError::DimensionMismatch { expected: base.len(), actual: value.len() });
    }
    base.values()
        .iter()
        .zip(value.values())
        .zip(concepts)
        .map(|((&b, &v), c)| {
            if b == 0.0 {
                Err(FcmError::ZeroBaseline(c.clone()))
            } else {
                Ok(100.0 * (v - b) / b)
            }
        })
        .collect()
}
