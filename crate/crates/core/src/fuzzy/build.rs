use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{
    aggregate_all, defuzzify, generate_memberships, implication, Aggregation, Defuzzification,
    Implication, LinguisticTermSet, MembershipFunction, Universe,
};
use crate::survey::{EdgeTally, ExpertSurvey};
use crate::{FcmError, Result, WeightMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BuildMethods {
    pub implication: Implication,
    pub aggregation: Aggregation,
    pub defuzzification: Defuzzification,
}

/// Crisp weight of one edge from its term activations.
///
/// Terms are activated and folded in term-set order; an edge with no active
/// term (nobody endorsed a causal term) has weight 0.
pub fn edge_weight(
    universe: &Universe,
    memberships: &BTreeMap<String, MembershipFunction>,
    terms: &LinguisticTermSet,
    activations: &[(&str, f64)],
    methods: BuildMethods,
) -> Result<f64> {
    for (term, _) in activations {
        terms.resolve(term)?;
    }
    let activated: Vec<MembershipFunction> = terms
        .terms()
        .iter()
        .filter_map(|t| {
            let level: f64 = activations
                .iter()
                .filter(|(id, _)| id.eq_ignore_ascii_case(&t.id))
                .map(|(_, w)| *w)
                .sum();
            (level > 0.0).then(|| implication(&memberships[&t.id], level, methods.implication))
        })
        .collect();
    match aggregate_all(&activated, methods.aggregation)? {
        Some(agg) => defuzzify(universe, &agg, methods.defuzzification),
        None => Ok(0.0),
    }
}

/// Weight matrix for every edge of the survey. Concepts are ordered by first
/// appearance; unrated pairs and edges rated only "no causality" stay 0.
pub fn build_weight_matrix(
    survey: &ExpertSurvey,
    universe: &Universe,
    terms: &LinguisticTermSet,
    methods: BuildMethods,
) -> Result<WeightMatrix> {
    if survey.is_empty() {
        return Err(FcmError::EmptySurvey);
    }
    let memberships = generate_memberships(universe, terms)?;
    let mut w = WeightMatrix::zeros(survey.concepts())?;
    for tally in survey.tallies() {
        let value = tally_weight(&tally, universe, &memberships, terms, methods)?;
        let (i, j) = (w.require_index(&tally.source)?, w.require_index(&tally.target)?);
        w[(i, j)] = value;
    }
    Ok(w)
}

fn tally_weight(
    tally: &EdgeTally,
    universe: &Universe,
    memberships: &BTreeMap<String, MembershipFunction>,
    terms: &LinguisticTermSet,
    methods: BuildMethods,
) -> Result<f64> {
    let activations: Vec<(&str, f64)> =
        tally.term_mass.keys().map(|t| (t.as_str(), tally.activation(t))).collect();
    edge_weight(universe, memberships, terms, &activations, methods)
}
