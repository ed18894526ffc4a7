//! Conditional covariance between pairs of binary labels.
//!
//! Three models of a label pair whose joint distribution depends on a
//! covariate `x` are provided, each exposing a coefficient pair `(beta0, beta1)`
//! for a constant and a covariate-dependent covariance term:
//!
//! - [`probit`]: latent bivariate Normal (Normal copula) with Fisher-z linked correlation;
//! - [`bernoulli`]: bivariate Bernoulli exponential family with a linear log odds ratio;
//! - [`staged`]: marginal logistic fits followed by a joint logistic fit with offset.
//!
//! [`datagen`] and [`experiment`] reproduce the controlled two-state
//! simulation study that measures how often each model detects `beta0` and
//! `beta1`.

pub mod bernoulli;
pub mod cli;
pub mod datagen;
pub mod error;
pub mod experiment;
pub mod gaussian;
pub mod joint_dist;
pub mod mle;
pub mod model;
pub mod probit;
pub mod staged;

pub use error::{Error, Result};
pub use joint_dist::{JointDist22, MarginalsCov};
