//! Turning linguistic ratings into crisp weights.
//!
//! The pipeline has four steps: sample a membership function for every
//! linguistic term over a [`Universe`], activate each endorsed term with an
//! [`Implication`] rule, fuse the activated functions with an [`Aggregation`]
//! operator and collapse the result to one number with a [`Defuzzification`]
//! method. [`build_weight_matrix`] runs all four for every edge of a survey.

mod build;
mod membership;
mod ops;
mod universe;

pub use build::{build_weight_matrix, edge_weight, BuildMethods};
pub use membership::{generate_memberships, LinguisticTermSet, MembershipFunction, Shape, TermSpec};
pub use ops::{
    aggregate, aggregate_all, defuzzify, implication, Aggregation, Defuzzification, Implication,
};
pub use universe::Universe;
