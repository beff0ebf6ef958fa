//! Fuzzy cognitive maps.
//!
//! This crate holds the numeric core of the toolkit and builds without `std`
//! (it needs `alloc`):
//!
//! - [`survey`]: expert ratings, sign-consistency checks and per-edge entropy
//! - [`fuzzy`]: membership functions, implication, aggregation, defuzzification
//!   and the survey-to-matrix build
//! - [`sim`]: synchronous FCM simulation to a fixed point
//! - [`hebbian`]: NHL and AHL weight adaptation toward desired output ranges
//! - [`rcga`]: real-coded genetic algorithm learning from longitudinal data,
//!   with in-sample and out-of-sample validation
//! - [`intervention`]: what-if analysis with single-shot and continuous scenarios
//!
//! File formats and the command-line front end live in the `fcm-tools` crate.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x > 0.0)` is how NaN gets rejected along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod fuzzy;
pub mod hebbian;
pub mod intervention;
mod matrix;
pub mod rcga;
pub mod sim;
pub mod survey;

pub use error::{FcmError, Result};
pub use matrix::{StateVector, WeightMatrix};
