use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::Universe;
use crate::{FcmError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Shape {
    /// `[a, b, c]`: zero outside `[a, c]`, one at `b`.
    Triangular,
    /// `[mean, sigma]`.
    Gaussian,
    /// `[a, b, c, d]`: one on `[b, c]`.
    Trapezoidal,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TermSpec {
    pub id: String,
    pub shape: Shape,
    pub params: Vec<f64>,
}

impl TermSpec {
    pub fn triangular(id: &str, a: f64, b: f64, c: f64) -> Self {
        Self { id: id.into(), shape: Shape::Triangular, params: alloc::vec![a, b, c] }
    }

    fn invalid(&self, reason: impl Into<String>) -> FcmError {
        FcmError::InvalidParams { term: self.id.clone(), reason: reason.into() }
    }

    pub fn validate(&self, universe: &Universe) -> Result<()> {
        let p = &self.params;
        let expect = match self.shape {
            Shape::Triangular => 3,
            Shape::Gaussian => 2,
            Shape::Trapezoidal => 4,
        };
        if p.len() != expect {
            return Err(self.invalid(format!("expected {expect} parameters, got {}", p.len())));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(self.invalid("parameters must be finite"));
        }
        match self.shape {
            Shape::Gaussian => {
                if p[1] <= 0.0 {
                    return Err(self.invalid("sigma must be positive"));
                }
            }
            Shape::Triangular | Shape::Trapezoidal => {
                if p.windows(2).any(|w| w[0] > w[1]) {
                    return Err(self.invalid("parameters must be non-decreasing"));
                }
                if p[0] < universe.lo() || p[p.len() - 1] > universe.hi() {
                    return Err(self.invalid(format!(
                        "support [{}, {}] leaves the universe [{}, {}]",
                        p[0],
                        p[p.len() - 1],
                        universe.lo(),
                        universe.hi()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.shape {
            Shape::Triangular => trapezoid(x, p[0], p[1], p[1], p[2]),
            Shape::Trapezoidal => trapezoid(x, p[0], p[1], p[2], p[3]),
            Shape::Gaussian => {
                let d = x - p[0];
                libm::exp(-(d * d) / (2.0 * p[1] * p[1]))
            }
        }
    }
}

fn trapezoid(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if (b..=c).contains(&x) {
        1.0
    } else if a < x && x < b {
        (x - a) / (b - a)
    } else if c < x && x < d {
        (d - x) / (d - c)
    } else {
        0.0
    }
}

/// Ordered linguistic terms. Lookups ignore ASCII case.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct LinguisticTermSet {
    terms: Vec<TermSpec>,
}

impl LinguisticTermSet {
    pub fn new(terms: Vec<TermSpec>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if terms[..i].iter().any(|o| o.id.eq_ignore_ascii_case(&t.id)) {
                return Err(t.invalid("duplicate term id"));
            }
            if crate::survey::is_no_causality(&t.id) {
                return Err(t.invalid("\"no causality\" is reserved and carries no membership function"));
            }
        }
        Ok(Self { terms })
    }

    /// The ten signed triangular terms on `[-1, 1]`, from `-VH` to `+VH`.
    pub fn standard() -> Self {
        let t = TermSpec::triangular;
        Self {
            terms: alloc::vec![
                t("-VH", -1.0, -1.0, -0.75),
                t("-H", -1.0, -0.75, -0.5),
                t("-M", -0.75, -0.5, -0.25),
                t("-L", -0.5, -0.25, 0.0),
                t("-VL", -0.25, 0.0, 0.0),
                t("+VL", 0.0, 0.0, 0.25),
                t("+L", 0.0, 0.25, 0.5),
                t("+M", 0.25, 0.5, 0.75),
                t("+H", 0.5, 0.75, 1.0),
                t("+VH", 0.75, 1.0, 1.0),
            ],
        }
    }

    pub fn terms(&self) -> &[TermSpec] {
        &self.terms
    }

    pub fn get(&self, id: &str) -> Option<&TermSpec> {
        self.terms.iter().find(|t| t.id.eq_ignore_ascii_case(id))
    }

    /// Canonical spelling of `id`, or `UnknownTerm`.
    pub fn resolve(&self, id: &str) -> Result<&str> {
        self.get(id).map(|t| t.id.as_str()).ok_or_else(|| FcmError::UnknownTerm(id.to_string()))
    }
}

impl Default for LinguisticTermSet {
    fn default() -> Self {
        Self::standard()
    }
}

/// Membership degrees, one per universe sample.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipFunction(pub Vec<f64>);

impl MembershipFunction {
    pub fn sample(universe: &Universe, term: &TermSpec) -> Result<Self> {
        term.validate(universe)?;
        Ok(Self(universe.samples().iter().map(|&x| term.eval(x)).collect()))
    }

    pub fn zeros(len: usize) -> Self {
        Self(alloc::vec![0.0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }
}

/// Membership function of every term, keyed by term id.
pub fn generate_memberships(
    universe: &Universe,
    terms: &LinguisticTermSet,
) -> Result<BTreeMap<String, MembershipFunction>> {
    terms
        .terms()
        .iter()
        .map(|t| Ok((t.id.clone(), MembershipFunction::sample(universe, t)?)))
        .collect()
}
