//! Expert survey data: who rated which edge with which linguistic term.
//!
//! Terms are plain strings. Their valence is read from the sign prefix
//! (`-VH` .. `-VL` negative, `+VL` .. `+VH` positive); the reserved
//! [`NO_CAUSALITY`] marker is neutral.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::{FcmError, Result};

/// Reserved term meaning "this edge has no causal effect".
pub const NO_CAUSALITY: &str = "no causality";

/// True for the reserved marker and its spreadsheet abbreviation `NA`.
pub fn is_no_causality(term: &str) -> bool {
    term.eq_ignore_ascii_case(NO_CAUSALITY) || term.eq_ignore_ascii_case("na")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Valence {
    Negative,
    Neutral,
    Positive,
}

impl Valence {
    pub fn of(term: &str) -> Valence {
        if is_no_causality(term) {
            return Valence::Neutral;
        }
        match term.trim_start().as_bytes().first() {
            Some(b'-') => Valence::Negative,
            Some(b'+') => Valence::Positive,
            _ => Valence::Neutral,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Valence::Negative => "negative",
            Valence::Neutral => "neutral",
            Valence::Positive => "positive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeRating {
    pub source: String,
    pub target: String,
    pub term: String,
    /// 1.0 for a plain checkbox answer.
    pub endorsement: f64,
}

impl EdgeRating {
    pub fn new(source: impl Into<String>, target: impl Into<String>, term: impl Into<String>) -> Self {
        Self { source: source.into(), target: target.into(), term: term.into(), endorsement: 1.0 }
    }

    pub fn with_endorsement(mut self, endorsement: f64) -> Self {
        self.endorsement = endorsement;
        self
    }

    pub fn is_no_causality(&self) -> bool {
        is_no_causality(&self.term)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Expert {
    pub id: String,
    pub ratings: Vec<EdgeRating>,
}

/// Ratings from every expert, in the order the experts were read.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExpertSurvey {
    experts: Vec<Expert>,
}

impl ExpertSurvey {
    pub fn new(experts: Vec<Expert>) -> Result<Self> {
        for (i, e) in experts.iter().enumerate() {
            if experts[..i].iter().any(|o| o.id == e.id) {
                return Err(FcmError::DuplicateExpert(e.id.clone()));
            }
            for r in &e.ratings {
                if !(0.0..=1.0).contains(&r.endorsement) {
                    return Err(FcmError::InvalidEndorsement(r.endorsement));
                }
            }
        }
        Ok(Self { experts })
    }

    pub fn experts(&self) -> &[Expert] {
        &self.experts
    }

    pub fn is_empty(&self) -> bool {
        self.experts.is_empty()
    }

    /// Concepts in order of first appearance (source before target).
    pub fn concepts(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in self.ratings() {
            for c in [&r.source, &r.target] {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    /// Distinct (source, target) pairs in order of first appearance.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        for r in self.ratings() {
            if !out.iter().any(|(s, t)| *s == r.source && *t == r.target) {
                out.push((r.source.clone(), r.target.clone()));
            }
        }
        out
    }

    fn ratings(&self) -> impl Iterator<Item = &EdgeRating> {
        self.experts.iter().flat_map(|e| e.ratings.iter())
    }

    /// Per-edge endorsement totals, edges in first-appearance order.
    pub fn tallies(&self) -> Vec<EdgeTally> {
        self.edges()
            .into_iter()
            .map(|(source, target)| {
                let mut tally = EdgeTally {
                    source,
                    target,
                    term_mass: BTreeMap::new(),
                    no_causality_mass: 0.0,
                    raters: 0,
                    causal_raters: 0,
                };
                for e in &self.experts {
                    let mut rated = false;
                    let mut causal = false;
                    for r in e.ratings.iter().filter(|r| r.source == tally.source && r.target == tally.target) {
                        if r.endorsement <= 0.0 {
                            continue;
                        }
                        rated = true;
                        if r.is_no_causality() {
                            tally.no_causality_mass += r.endorsement;
                        } else {
                            causal = true;
                            *tally.term_mass.entry(r.term.clone()).or_insert(0.0) += r.endorsement;
                        }
                    }
                    tally.raters += usize::from(rated);
                    tally.causal_raters += usize::from(causal);
                }
                tally
            })
            .collect()
    }
}

/// Endorsement mass per term for one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTally {
    pub source: String,
    pub target: String,
    pub term_mass: BTreeMap<String, f64>,
    pub no_causality_mass: f64,
    /// Experts who endorsed anything for this edge, "no causality" included.
    pub raters: usize,
    /// Experts who endorsed at least one causal (non-"no causality") term.
    pub causal_raters: usize,
}

impl EdgeTally {
    pub fn total_mass(&self) -> f64 {
        self.term_mass.values().sum::<f64>() + self.no_causality_mass
    }

    /// Proportion of causal raters endorsing `term`; "no causality" answers
    /// are left out of both numerator and denominator.
    pub fn activation(&self, term: &str) -> f64 {
        if self.causal_raters == 0 {
            return 0.0;
        }
        self.term_mass.get(term).copied().unwrap_or(0.0) / self.causal_raters as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Inconsistency {
    pub source: String,
    pub target: String,
    /// (expert id, term) pairs.
    pub experts_positive: Vec<(String, String)>,
    pub experts_negative: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InconsistencyReport {
    pub entries: Vec<Inconsistency>,
}

impl InconsistencyReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Edges where some experts chose a positive term and others a negative one.
pub fn check_consistency(survey: &ExpertSurvey) -> InconsistencyReport {
    let mut entries = Vec::new();
    for (source, target) in survey.edges() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for e in survey.experts() {
            for r in &e.ratings {
                if r.source != source || r.target != target || r.endorsement <= 0.0 {
                    continue;
                }
                match Valence::of(&r.term) {
                    Valence::Positive => pos.push((e.id.clone(), r.term.clone())),
                    Valence::Negative => neg.push((e.id.clone(), r.term.clone())),
                    Valence::Neutral => {}
                }
            }
        }
        if !pos.is_empty() && !neg.is_empty() {
            entries.push(Inconsistency { source, target, experts_positive: pos, experts_negative: neg });
        }
    }
    InconsistencyReport { entries }
}

/// Shannon entropy in bits. Zero proportions contribute nothing.
pub fn entropy(proportions: &[f64]) -> f64 {
    -proportions
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * libm::log2(p))
        .sum::<f64>()
}

/// Entropy of the term distribution of every edge; "no causality" is its own category.
pub fn edge_entropy(survey: &ExpertSurvey) -> Result<BTreeMap<(String, String), f64>> {
    let mut out = BTreeMap::new();
    for tally in survey.tallies() {
        let total = tally.total_mass();
        if total <= 0.0 {
            return Err(FcmError::EmptyEdge(tally.source, tally.target));
        }
        let mut props: Vec<f64> = tally.term_mass.values().map(|m| m / total).collect();
        props.push(tally.no_causality_mass / total);
        out.insert((tally.source, tally.target), entropy(&props));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn expert(id: &str, ratings: Vec<EdgeRating>) -> Expert {
        Expert { id: id.into(), ratings }
    }

    #[test]
    fn valence_from_prefix() {
        assert_eq!(Valence::of("+H"), Valence::Positive);
        assert_eq!(Valence::of("-vl"), Valence::Negative);
        assert_eq!(Valence::of("No Causality"), Valence::Neutral);
        assert_eq!(Valence::of("NA"), Valence::Neutral);
    }

    #[test]
    fn entropy_reference_values() {
        assert!((entropy(&[0.5, 1.0 / 3.0, 1.0 / 6.0]) - 1.459148).abs() < 1e-6);
        assert_eq!(entropy(&[1.0]), 0.0);
        assert!((entropy(&[0.5, 0.5]) - 1.0).abs() < 1e-15);
        assert_eq!(entropy(&[0.0, 1.0]), 0.0);
    }

    #[test]
    fn sign_conflict_reported() {
        let s = ExpertSurvey::new(vec![
            expert("A", vec![EdgeRating::new("C1", "C2", "+H")]),
            expert("B", vec![EdgeRating::new("C1", "C2", "-M")]),
        ])
        .unwrap();
        let r = check_consistency(&s);
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].experts_positive, vec![("A".into(), "+H".into())]);
        assert_eq!(r.entries[0].experts_negative, vec![("B".into(), "-M".into())]);
    }

    #[test]
    fn agreeing_or_neutral_is_consistent() {
        let s = ExpertSurvey::new(vec![
            expert("A", vec![EdgeRating::new("C1", "C2", "+H")]),
            expert("B", vec![EdgeRating::new("C1", "C2", "+VL")]),
        ])
        .unwrap();
        assert!(check_consistency(&s).is_empty());

        // hand evaluation: "no causality" has no valence, so +H vs NC cannot conflict
        let s = ExpertSurvey::new(vec![
            expert("A", vec![EdgeRating::new("C1", "C2", "+H")]),
            expert("B", vec![EdgeRating::new("C1", "C2", NO_CAUSALITY)]),
        ])
        .unwrap();
        assert!(check_consistency(&s).is_empty());
    }

    #[test]
    fn duplicate_expert_rejected() {
        let err = ExpertSurvey::new(vec![expert("A", vec![]), expert("A", vec![])]).unwrap_err();
        assert_eq!(err, FcmError::DuplicateExpert("A".into()));
    }

    #[test]
    fn endorsement_range_checked() {
        let err = ExpertSurvey::new(vec![expert(
            "A",
            vec![EdgeRating::new("C1", "C2", "+H").with_endorsement(1.5)],
        )])
        .unwrap_err();
        assert_eq!(err, FcmError::InvalidEndorsement(1.5));
    }

    #[test]
    fn zero_mass_edge_is_empty() {
        let s = ExpertSurvey::new(vec![expert(
            "A",
            vec![EdgeRating::new("C1", "C2", "+H").with_endorsement(0.0)],
        )])
        .unwrap();
        assert_eq!(edge_entropy(&s).unwrap_err(), FcmError::EmptyEdge("C1".into(), "C2".into()));
    }

    #[test]
    fn tally_excludes_no_causality_from_activation() {
        let s = ExpertSurvey::new(vec![
            expert("A", vec![EdgeRating::new("C3", "C4", "+M")]),
            expert("B", vec![EdgeRating::new("C3", "C4", NO_CAUSALITY)]),
        ])
        .unwrap();
        let t = &s.tallies()[0];
        assert_eq!((t.raters, t.causal_raters), (2, 1));
        assert_eq!(t.activation("+M"), 1.0);
    }

    #[test]
    fn concepts_in_first_appearance_order() {
        let s = ExpertSurvey::new(vec![expert(
            "A",
            vec![EdgeRating::new("C3", "C1", "+M"), EdgeRating::new("C1", "C2", "+M")],
        )])
        .unwrap();
        assert_eq!(s.concepts(), vec!["C3", "C1", "C2"]);
    }
}
