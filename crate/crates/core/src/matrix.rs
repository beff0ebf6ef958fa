use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{FcmError, Result};

/// Square causal weight matrix. `w[(i, j)]` is the influence of concept `i`
/// (row, source) on concept `j` (column, target).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightMatrix {
    concepts: Vec<String>,
    weights: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(concepts: Vec<String>) -> Result<Self> {
        check_unique(&concepts)?;
        let n = concepts.len();
        Ok(Self { concepts, weights: alloc::vec![0.0; n * n] })
    }

    pub fn from_rows(concepts: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = concepts.len();
        if rows.len() != n {
            return Err(FcmError::DimensionMismatch { expected: n, actual: rows.len() });
        }
        let mut weights = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(FcmError::DimensionMismatch { expected: n, actual: row.len() });
            }
            weights.extend_from_slice(row);
        }
        Self::from_flat(concepts, weights)
    }

    /// Row-major flat storage.
    pub fn from_flat(concepts: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        check_unique(&concepts)?;
        let n = concepts.len();
        if weights.len() != n * n {
            return Err(FcmError::DimensionMismatch { expected: n * n, actual: weights.len() });
        }
        Ok(Self { concepts, weights })
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn index_of(&self, concept: &str) -> Option<usize> {
        self.concepts.iter().position(|c| c == concept)
    }

    pub fn require_index(&self, concept: &str) -> Result<usize> {
        self.index_of(concept).ok_or_else(|| FcmError::UnknownConcept(concept.into()))
    }

    /// Weight of the edge `source -> target`, by concept name.
    pub fn weight(&self, source: &str, target: &str) -> Option<f64> {
        Some(self[(self.index_of(source)?, self.index_of(target)?)])
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.weights.chunks(self.len().max(1))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    pub fn into_flat(self) -> (Vec<String>, Vec<f64>) {
        (self.concepts, self.weights)
    }

    pub fn max_abs_diff(&self, other: &WeightMatrix) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .fold(0.0, |acc, (a, b)| f64::max(acc, libm::fabs(a - b)))
    }

    /// A copy with one extra concept appended (zero row and column).
    pub fn extended(&self, concept: String) -> Result<Self> {
        let mut concepts = self.concepts.clone();
        concepts.push(concept);
        let mut out = Self::zeros(concepts)?;
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)];
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for WeightMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.weights[i * self.concepts.len() + j]
    }
}

impl IndexMut<(usize, usize)> for WeightMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        let n = self.concepts.len();
        &mut self.weights[i * n + j]
    }
}

fn check_unique(concepts: &[String]) -> Result<()> {
    for (i, c) in concepts.iter().enumerate() {
        if concepts[..i].contains(c) {
            return Err(FcmError::DuplicateConcept(c.clone()));
        }
    }
    Ok(())
}

/// Concept activations, ordered like the concepts of the matrix they are used with.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct StateVector(pub Vec<f64>);

impl StateVector {
    /// Orders named values by `concepts`. Every concept must be given exactly once.
    pub fn from_named<'a, I>(concepts: &[String], values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut out: Vec<Option<f64>> = alloc::vec![None; concepts.len()];
        for (name, value) in values {
            let i = concepts
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| FcmError::UnknownConcept(name.into()))?;
            out[i] = Some(value);
        }
        out.iter()
            .zip(concepts)
            .map(|(v, c)| v.ok_or_else(|| FcmError::InvalidConfig(format!("no initial value for `{c}`"))))
            .collect::<Result<Vec<_>>>()
            .map(StateVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for StateVector {
    fn from(v: Vec<f64>) -> Self {
        StateVector(v)
    }
}

impl Index<usize> for StateVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}
