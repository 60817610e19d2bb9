//! Discharge-coefficient regression for streamlined weirs.
//!
//! The crate bundles everything needed to reproduce the study pipeline at
//! desk scale: a validated data model with CSV ingestion and a synthetic
//! generator, deterministic k-fold cross-validation, five classical
//! regressors, a small dense-tensor deep-learning engine with six named
//! recurrent/convolutional architectures, a linear-regression/CGRU hybrid,
//! eight error metrics, and the algebraic hydraulic baselines.
//!
//! Everything is deterministic given a seed; see [`experiment`] for the
//! orchestrated cross-validated comparison run.

pub mod classical;
pub mod data;
pub mod deep;
pub mod error;
pub mod experiment;
pub mod hydraulics;
pub mod metrics;
pub mod nn;
pub mod resampling;
pub mod seeding;

pub use error::{Error, Result};
