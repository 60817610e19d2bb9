//! Algebraic weir hydraulics: the head-discharge relation for short-crested
//! weirs and two published discharge-coefficient baselines (a curve-fitted
//! power law and a stage-discharge derivation).
//!
//! All functions are pure, validate their domains, and default gravity to
//! 9.81 m/s² at the call sites that take it.

use crate::error::{Error, Result};

/// Standard gravity, m/s².
pub const G_DEFAULT: f64 = 9.81;

/// Hydraulic state of an approaching flow over a weir crest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSpec {
    /// Discharge, m³/s.
    pub q: f64,
    /// Weir width, m.
    pub b: f64,
    /// Gravity, m/s².
    pub g: f64,
    /// Upstream head over the crest, m.
    pub h1: f64,
    /// Approach velocity, m/s.
    pub v: f64,
    /// Total head `h1 + v²/(2g)`, m.
    pub total_head: f64,
}

impl FlowSpec {
    /// Builds a flow state from head and approach velocity; the total head is
    /// derived, and the discharge from the head-discharge relation.
    pub fn new(cd: f64, b: f64, h1: f64, v: f64, g: f64) -> Result<Self> {
        let total = total_head(h1, v, g)?;
        let q = discharge_from_cd(cd, b, total, g)?;
        Ok(FlowSpec {
            q,
            b,
            g,
            h1,
            v,
            total_head: total,
        })
    }
}

/// Geometric and stage inputs for the stage-discharge baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarolloInputs {
    /// Upstream head over the crest, m.
    pub h1: f64,
    /// Total weir height, m.
    pub w: f64,
    /// Initial weir length, m.
    pub l: f64,
    /// Auxiliary geometric length, m.
    pub w1: f64,
}

impl CarolloInputs {
    /// The fitted dimensionless stage variable for this geometry.
    pub fn stage_variable(&self) -> Result<f64> {
        stage_discharge_a(self.h1, self.w, self.l, self.w1)
    }

    /// The implied discharge coefficient.
    pub fn cd(&self) -> Result<f64> {
        cd_carollo(self.h1, self.w, self.l, self.w1)
    }
}

/// The dimensionless coefficient `a = (2/3)·Cd^{2/3}` linking the stage
/// variable to the head ratio via `A = a·(h1/W)`.
pub fn stage_coefficient_a(cd: f64) -> Result<f64> {
    require_non_negative("cd", cd)?;
    Ok((2.0 / 3.0) * cd.powf(2.0 / 3.0))
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive, got {value}")));
    }
    Ok(())
}

fn require_non_negative(name: &str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::Domain(format!(
            "{name} must be non-negative, got {value}"
        )));
    }
    Ok(())
}

/// Total head: upstream head plus velocity head `v²/(2g)`.
pub fn total_head(h1: f64, v: f64, g: f64) -> Result<f64> {
    require_positive("h1", h1)?;
    require_non_negative("v", v)?;
    require_positive("g", g)?;
    Ok(h1 + v * v / (2.0 * g))
}

/// Head-discharge relation: `Q = (2/3)·Cd·B·√(2g/3)·H1^{3/2}`.
pub fn discharge_from_cd(cd: f64, b: f64, h1_total: f64, g: f64) -> Result<f64> {
    require_non_negative("cd", cd)?;
    require_positive("B", b)?;
    require_positive("H1", h1_total)?;
    require_positive("g", g)?;
    Ok((2.0 / 3.0) * cd * b * (2.0 * g / 3.0).sqrt() * h1_total.powf(1.5))
}

/// Closed-form inverse of the head-discharge relation.
pub fn cd_from_discharge(q: f64, b: f64, h1_total: f64, g: f64) -> Result<f64> {
    require_non_negative("Q", q)?;
    require_positive("B", b)?;
    require_positive("H1", h1_total)?;
    require_positive("g", g)?;
    Ok(q / ((2.0 / 3.0) * b * (2.0 * g / 3.0).sqrt() * h1_total.powf(1.5)))
}

/// Curve-fitted discharge coefficient:
/// `Cd = 1.4·λ^0.05·[(h1/L)(h1/W)]^0.1`.
pub fn cd_bagheri(lambda: f64, h1: f64, l: f64, w: f64) -> Result<f64> {
    require_positive("lambda", lambda)?;
    require_positive("h1", h1)?;
    require_positive("L", l)?;
    require_positive("W", w)?;
    Ok(1.4 * lambda.powf(0.05) * ((h1 / l) * (h1 / w)).powf(0.1))
}

/// Dimensionless stage variable `A = Q^{2/3}/(g^{1/3}·b^{2/3}·W)`.
pub fn stage_variable_a(q: f64, b: f64, w: f64, g: f64) -> Result<f64> {
    require_non_negative("Q", q)?;
    require_positive("b", b)?;
    require_positive("W", w)?;
    require_positive("g", g)?;
    Ok(q.powf(2.0 / 3.0) / (g.powf(1.0 / 3.0) * b.powf(2.0 / 3.0) * w))
}

/// Fitted stage-discharge relationship:
/// `A = 0.8546·(h1/W)^{1.1243}·(L/W)^{-0.1012}·(W1/W)^{0.0412}`.
pub fn stage_discharge_a(h1: f64, w: f64, l: f64, w1: f64) -> Result<f64> {
    require_positive("h1", h1)?;
    require_positive("W", w)?;
    require_positive("L", l)?;
    require_positive("W1", w1)?;
    Ok(0.8546 * (h1 / w).powf(1.1243) * (l / w).powf(-0.1012) * (w1 / w).powf(0.0412))
}

/// Discharge coefficient implied by the stage-discharge fit:
/// `Cd = [(3W/2h1)·A(h1,W,L,W1)]^{3/2}`.
pub fn cd_carollo(h1: f64, w: f64, l: f64, w1: f64) -> Result<f64> {
    let a = stage_discharge_a(h1, w, l, w1)?;
    Ok(((3.0 * w / (2.0 * h1)) * a).powf(1.5))
}
