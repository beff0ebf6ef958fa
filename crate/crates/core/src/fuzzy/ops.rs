use core::str::FromStr;

use alloc::vec::Vec;

use super::{MembershipFunction, Universe};
use crate::{FcmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Implication {
    /// Clip at the activation level.
    #[default]
    Mamdani,
    /// Scale by the activation level.
    Larsen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Aggregation {
    #[default]
    FMax,
    AlgSum,
    ESum,
    HSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Defuzzification {
    #[default]
    Centroid,
    Bisector,
    /// Mean of maxima.
    Mom,
    /// Smallest maximiser.
    Som,
    /// Largest maximiser.
    Lom,
}

fn unknown(kind: &str, s: &str) -> FcmError {
    FcmError::InvalidConfig(alloc::format!("unknown {kind} method `{s}`"))
}

impl FromStr for Implication {
    type Err = FcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mamdani" => Ok(Self::Mamdani),
            "larsen" => Ok(Self::Larsen),
            _ => Err(unknown("implication", s)),
        }
    }
}

impl FromStr for Aggregation {
    type Err = FcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fmax" | "max" => Ok(Self::FMax),
            "algsum" => Ok(Self::AlgSum),
            "esum" => Ok(Self::ESum),
            "hsum" => Ok(Self::HSum),
            _ => Err(unknown("aggregation", s)),
        }
    }
}

impl FromStr for Defuzzification {
    type Err = FcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "centroid" => Ok(Self::Centroid),
            "bisector" => Ok(Self::Bisector),
            "mom" => Ok(Self::Mom),
            "som" => Ok(Self::Som),
            "lom" => Ok(Self::Lom),
            _ => Err(unknown("defuzzification", s)),
        }
    }
}

impl Implication {
    pub fn apply(self, mu: f64, weight: f64) -> f64 {
        match self {
            Implication::Mamdani => mu.min(weight),
            Implication::Larsen => mu * weight,
        }
    }
}

impl Aggregation {
    pub fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            Aggregation::FMax => x.max(y),
            Aggregation::AlgSum => x + y - x * y,
            Aggregation::ESum => (x + y) / (1.0 + x * y),
            Aggregation::HSum => {
                let den = 1.0 - x * y;
                // only x = y = 1 reaches zero on [0,1]; the limit there is 1
                if den <= 0.0 {
                    1.0
                } else {
                    (x + y - 2.0 * x * y) / den
                }
            }
        }
    }
}

/// Activate `mf` at level `weight` (clamped to `[0, 1]`).
pub fn implication(mf: &MembershipFunction, weight: f64, method: Implication) -> MembershipFunction {
    let w = weight.clamp(0.0, 1.0);
    MembershipFunction(mf.values().iter().map(|&mu| method.apply(mu, w)).collect())
}

pub fn aggregate(
    x: &MembershipFunction,
    y: &MembershipFunction,
    method: Aggregation,
) -> Result<MembershipFunction> {
    if x.len() != y.len() {
        return Err(FcmError::LengthMismatch(x.len(), y.len()));
    }
    Ok(MembershipFunction(
        x.values().iter().zip(y.values()).map(|(&a, &b)| method.apply(a, b)).collect(),
    ))
}

/// Left fold of [`aggregate`] over `fns`, in the order given. `None` when `fns` is empty.
pub fn aggregate_all<'a, I>(fns: I, method: Aggregation) -> Result<Option<MembershipFunction>>
where
    I: IntoIterator<Item = &'a MembershipFunction>,
{
    let mut it = fns.into_iter();
    let Some(first) = it.next() else { return Ok(None) };
    it.try_fold(first.clone(), |acc, f| aggregate(&acc, f, method)).map(Some)
}

pub fn defuzzify(universe: &Universe, mf: &MembershipFunction, method: Defuzzification) -> Result<f64> {
    let xs = universe.samples();
    if xs.len() != mf.len() {
        return Err(FcmError::LengthMismatch(xs.len(), mf.len()));
    }
    let mu = mf.values();
    let area: f64 = mu.iter().sum();
    if area <= 0.0 {
        return Err(FcmError::ZeroArea);
    }
    Ok(match method {
        Defuzzification::Centroid => xs.iter().zip(mu).map(|(x, m)| x * m).sum::<f64>() / area,
        Defuzzification::Bisector => {
            let half = area / 2.0;
            let mut acc = 0.0;
            let mut at = xs[xs.len() - 1];
            for (x, m) in xs.iter().zip(mu) {
                acc += m;
                if acc >= half {
                    at = *x;
                    break;
                }
            }
            at
        }
        Defuzzification::Mom | Defuzzification::Som | Defuzzification::Lom => {
            let peak = mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let maxima: Vec<f64> =
                xs.iter().zip(mu).filter(|(_, &m)| m == peak).map(|(&x, _)| x).collect();
            match method {
                Defuzzification::Som => maxima[0],
                Defuzzification::Lom => maxima[maxima.len() - 1],
                _ => maxima.iter().sum::<f64>() / maxima.len() as f64,
            }
        }
    })
}

impl core::fmt::Display for Implication {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Implication::Mamdani => "mamdani",
            Implication::Larsen => "larsen",
        })
    }
}

impl core::fmt::Display for Aggregation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Aggregation::FMax => "fmax",
            Aggregation::AlgSum => "algsum",
            Aggregation::ESum => "esum",
            Aggregation::HSum => "hsum",
        })
    }
}

impl core::fmt::Display for Defuzzification {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Defuzzification::Centroid => "centroid",
            Defuzzification::Bisector => "bisector",
            Defuzzification::Mom => "mom",
            Defuzzification::Som => "som",
            Defuzzification::Lom => "lom",
        })
    }
}
