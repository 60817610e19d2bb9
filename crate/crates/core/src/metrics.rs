//! Regression error metrics: MSE, RMSE, MAE, MAPE, MSLE, RMSLE, mean Poisson
//! deviance, and mean Gamma deviance, plus the base-10 logarithm view used
//! for cross-model comparison panels.
//!
//! Logarithms in the log-family metrics (MSLE, RMSLE, MPD, MGD) are natural
//! logs of the raw values, not `ln(1+x)`.

use crate::error::{Error, Result};

/// The eight supported error metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Mse,
    Rmse,
    Mae,
    Mape,
    Msle,
    Rmsle,
    Mpd,
    Mgd,
}

impl MetricKind {
    pub const ALL: [MetricKind; 8] = [
        MetricKind::Mse,
        MetricKind::Rmse,
        MetricKind::Mae,
        MetricKind::Mape,
        MetricKind::Msle,
        MetricKind::Rmsle,
        MetricKind::Mpd,
        MetricKind::Mgd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Mse => "mse",
            MetricKind::Rmse => "rmse",
            MetricKind::Mae => "mae",
            MetricKind::Mape => "mape",
            MetricKind::Msle => "msle",
            MetricKind::Rmsle => "rmsle",
            MetricKind::Mpd => "mpd",
            MetricKind::Mgd => "mgd",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "mse" => Ok(MetricKind::Mse),
            "rmse" => Ok(MetricKind::Rmse),
            "mae" => Ok(MetricKind::Mae),
            "mape" => Ok(MetricKind::Mape),
            "msle" => Ok(MetricKind::Msle),
            "rmsle" => Ok(MetricKind::Rmsle),
            "mpd" => Ok(MetricKind::Mpd),
            "mgd" => Ok(MetricKind::Mgd),
            other => Err(Error::Argument(format!("unknown metric '{other}'"))),
        }
    }
}

/// All eight metric values for one model, with the count of predictions
/// clamped for the log-family metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
    /// In percent.
    pub mape: f64,
    pub msle: f64,
    pub rmsle: f64,
    pub mpd: f64,
    pub mgd: f64,
    /// Predictions at or below the clamp floor before log-family metrics.
    pub clamped_count: usize,
}

impl MetricReport {
    pub fn value(&self, kind: MetricKind) -> f64 {
        match kind {
            MetricKind::Mse => self.mse,
            MetricKind::Rmse => self.rmse,
            MetricKind::Mae => self.mae,
            MetricKind::Mape => self.mape,
            MetricKind::Msle => self.msle,
            MetricKind::Rmsle => self.rmsle,
            MetricKind::Mpd => self.mpd,
            MetricKind::Mgd => self.mgd,
        }
    }
}

/// Floor applied to predictions before log-family metrics in reports.
pub const CLAMP_FLOOR: f64 = 1e-6;

/// Floor applied by [`log_report`]: values at or below 1e-16 map to -16.
pub const LOG_FLOOR: f64 = -16.0;

/// Sums per-element terms in a canonical (sorted) order, so the result is
/// exactly invariant under permutations of the input pairs.
fn sum_canonical(mut terms: Vec<f64>) -> f64 {
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum()
}

fn check_lengths(y: &[f64], yhat: &[f64]) -> Result<()> {
    if y.len() != yhat.len() {
        return Err(Error::Argument(format!(
            "length mismatch: y has {} entries, yhat has {}",
            y.len(),
            yhat.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::Argument("empty vectors".into()));
    }
    Ok(())
}

fn check_positive(kind: MetricKind, label: &str, v: &[f64]) -> Result<()> {
    for (i, x) in v.iter().enumerate() {
        if !(*x > 0.0) {
            return Err(Error::Domain(format!(
                "{}: {label}[{i}] = {x} must be positive",
                kind.name()
            )));
        }
    }
    Ok(())
}

/// Computes a single metric over paired vectors.
pub fn compute_metric(kind: MetricKind, y: &[f64], yhat: &[f64]) -> Result<f64> {
    check_lengths(y, yhat)?;
    let n = y.len() as f64;
    let terms = |f: fn(f64, f64) -> f64| -> Vec<f64> {
        y.iter().zip(yhat).map(|(&a, &b)| f(a, b)).collect()
    };
    match kind {
        MetricKind::Mse => Ok(sum_canonical(terms(|a, b| (a - b) * (a - b))) / n),
        MetricKind::Rmse => compute_metric(MetricKind::Mse, y, yhat).map(f64::sqrt),
        MetricKind::Mae => Ok(sum_canonical(terms(|a, b| (a - b).abs())) / n),
        MetricKind::Mape => {
            for (i, x) in y.iter().enumerate() {
                if *x == 0.0 {
                    return Err(Error::Domain(format!("mape: y[{i}] must be nonzero")));
                }
            }
            Ok(100.0 / n * sum_canonical(terms(|a, b| ((a - b) / a).abs())))
        }
        MetricKind::Msle => {
            check_positive(kind, "y", y)?;
            check_positive(kind, "yhat", yhat)?;
            Ok(sum_canonical(terms(|a, b| {
                let d = a.ln() - b.ln();
                d * d
            })) / n)
        }
        MetricKind::Rmsle => compute_metric(MetricKind::Msle, y, yhat).map(f64::sqrt),
        MetricKind::Mpd => {
            check_positive(kind, "y", y)?;
            check_positive(kind, "yhat", yhat)?;
            Ok(sum_canonical(terms(|a, b| 2.0 * (a * (a / b).ln() + b - a))) / n)
        }
        MetricKind::Mgd => {
            check_positive(kind, "y", y)?;
            check_positive(kind, "yhat", yhat)?;
            Ok(sum_canonical(terms(|a, b| 2.0 * ((b / a).ln() + a / b - 1.0))) / n)
        }
    }
}

/// Computes all eight metrics at once.
///
/// Targets must be strictly positive. Non-log metrics use the raw
/// predictions; log-family metrics see predictions clamped to
/// [`CLAMP_FLOOR`], with the number of clamped entries reported.
pub fn compute_report(y: &[f64], yhat: &[f64]) -> Result<MetricReport> {
    check_lengths(y, yhat)?;
    for (i, x) in y.iter().enumerate() {
        if !(*x > 0.0) {
            return Err(Error::Domain(format!(
                "targets must be positive discharge coefficients, y[{i}] = {x}"
            )));
        }
    }
    let mut clamped = Vec::with_capacity(yhat.len());
    let mut clamped_count = 0;
    for &p in yhat {
        if p <= CLAMP_FLOOR {
            clamped.push(CLAMP_FLOOR);
            clamped_count += 1;
        } else {
            clamped.push(p);
        }
    }
    let mse = compute_metric(MetricKind::Mse, y, yhat)?;
    Ok(MetricReport {
        mse,
        rmse: mse.sqrt(),
        mae: compute_metric(MetricKind::Mae, y, yhat)?,
        mape: compute_metric(MetricKind::Mape, y, yhat)?,
        msle: compute_metric(MetricKind::Msle, y, &clamped)?,
        rmsle: compute_metric(MetricKind::Rmsle, y, &clamped)?,
        mpd: compute_metric(MetricKind::Mpd, y, &clamped)?,
        mgd: compute_metric(MetricKind::Mgd, y, &clamped)?,
        clamped_count,
    })
}

/// Base-10 logarithms of the eight metrics, floored at -16.
pub fn log_report(report: &MetricReport) -> [f64; 8] {
    let mut out = [0.0; 8];
    for (slot, kind) in out.iter_mut().zip(MetricKind::ALL) {
        let v = report.value(kind);
        *slot = if v <= 1e-16 { LOG_FLOOR } else { v.log10() };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const E: f64 = 2.718281828;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn mse_hand_value() {
        assert_eq!(compute_metric(MetricKind::Mse, &[1.0, 2.0], &[2.0, 4.0]).unwrap(), 2.5);
    }

    #[test]
    fn mape_hand_value() {
        assert_eq!(
            compute_metric(MetricKind::Mape, &[1.0, 2.0], &[2.0, 4.0]).unwrap(),
            100.0
        );
    }

    #[test]
    fn msle_hand_value() {
        let v = compute_metric(MetricKind::Msle, &[1.0, E], &[E, 1.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "msle = {v}");
    }

    #[test]
    fn mpd_hand_value() {
        // 2·(2·ln2 + 1 − 2)
        let v = compute_metric(MetricKind::Mpd, &[2.0], &[1.0]).unwrap();
        assert!((v - 0.7725887).abs() < 1e-6, "mpd = {v}");
        assert!((v - 0.7725887222397812).abs() < 1e-12);
    }

    #[test]
    fn mgd_hand_value() {
        // 2·(ln(1/2) + 2 − 1)
        let v = compute_metric(MetricKind::Mgd, &[2.0], &[1.0]).unwrap();
        assert!((v - 0.6137056).abs() < 1e-6, "mgd = {v}");
        assert!((v - 0.6137056388801094).abs() < 1e-12);
    }

    #[test]
    fn perfect_prediction_is_zero_for_every_metric() {
        let y = [0.8, 1.1, 1.3, 0.95];
        for kind in MetricKind::ALL {
            assert_eq!(compute_metric(kind, &y, &y).unwrap(), 0.0, "{}", kind.name());
        }
    }

    #[test]
    fn length_mismatch_is_an_argument_error() {
        assert!(matches!(
            compute_metric(MetricKind::Mse, &[1.0], &[1.0, 2.0]),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn domain_errors_name_metric_and_index() {
        let err = compute_metric(MetricKind::Msle, &[1.0, -1.0], &[1.0, 1.0]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("msle") && msg.contains("[1]"), "{msg}");
        let err = compute_metric(MetricKind::Mape, &[0.0], &[1.0]).unwrap_err();
        assert!(err.to_string().contains("mape"));
        let err = compute_metric(MetricKind::Mgd, &[1.0], &[0.0]).unwrap_err();
        assert!(err.to_string().contains("yhat[0]"));
    }

    #[test]
    fn report_perfect_prediction() {
        let r = compute_report(&[1.0, 1.2], &[1.0, 1.2]).unwrap();
        for kind in MetricKind::ALL {
            assert_eq!(r.value(kind), 0.0);
        }
        assert_eq!(r.clamped_count, 0);
        assert_eq!(log_report(&r), [-16.0; 8]);
    }

    #[test]
    fn report_hand_values() {
        let r = compute_report(&[1.0, 2.0], &[2.0, 4.0]).unwrap();
        assert_eq!(r.mse, 2.5);
        assert!((r.rmse - 1.5811388).abs() < 1e-6);
        assert_eq!(r.mae, 1.5);
        assert_eq!(r.mape, 100.0);
    }

    #[test]
    fn report_clamps_only_log_family() {
        let y = [1.0, 1.5];
        let yhat = [-0.3, 1.5];
        let r = compute_report(&y, &yhat).unwrap();
        assert_eq!(r.clamped_count, 1);
        // MSE uses the raw -0.3.
        assert!(rel_close(r.mse, ((1.0f64 + 0.3) * (1.0 + 0.3)) / 2.0, 1e-12));
        // Log family used the floor.
        let expected_msle = compute_metric(MetricKind::Msle, &y, &[CLAMP_FLOOR, 1.5]).unwrap();
        assert_eq!(r.msle, expected_msle);
    }

    #[test]
    fn report_rejects_non_positive_targets() {
        assert!(matches!(
            compute_report(&[1.0, 0.0], &[1.0, 1.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn log_report_values() {
        let mut r = compute_report(&[1.0], &[1.0]).unwrap();
        r.mse = 0.01;
        assert_eq!(log_report(&r)[0], -2.0);
        r.mse = 0.0;
        assert_eq!(log_report(&r)[0], -16.0);
        r.mse = 1.0;
        assert_eq!(log_report(&r)[0], 0.0);
    }

    #[test]
    fn rmse_squares_back_to_mse() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let n = rng.random_range(1..50);
            let y: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
            let p: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..3.0)).collect();
            let r = compute_report(&y, &p).unwrap();
            assert!(rel_close(r.rmse * r.rmse, r.mse, 1e-12));
            assert!(rel_close(r.rmsle * r.rmsle, r.msle, 1e-12));
        }
    }

    #[test]
    fn identity_of_indiscernibles() {
        let y = [0.9, 1.1, 1.4];
        let mut p = y;
        let r = compute_report(&y, &p).unwrap();
        for kind in MetricKind::ALL {
            assert_eq!(r.value(kind), 0.0);
        }
        p[1] += 1e-3;
        let r = compute_report(&y, &p).unwrap();
        for kind in MetricKind::ALL {
            assert!(r.value(kind) > 0.0, "{}", kind.name());
        }
    }

    proptest! {
        #[test]
        fn permutation_invariance(
            pairs in prop::collection::vec((0.05f64..5.0, 0.05f64..5.0), 1..40),
            seed in 0u64..1000,
        ) {
            let y: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let yhat: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let mut order: Vec<usize> = (0..y.len()).collect();
            use rand::seq::SliceRandom;
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let py: Vec<f64> = order.iter().map(|&i| y[i]).collect();
            let pp: Vec<f64> = order.iter().map(|&i| yhat[i]).collect();
            for kind in MetricKind::ALL {
                let a = compute_metric(kind, &y, &yhat).unwrap();
                let b = compute_metric(kind, &py, &pp).unwrap();
                prop_assert_eq!(a, b, "{} changed under permutation", kind.name());
            }
        }

        #[test]
        fn scaling_laws(
            pairs in prop::collection::vec((0.05f64..5.0, 0.05f64..5.0), 1..40),
            scale in 0.01f64..100.0,
        ) {
            let y: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let yhat: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let sy: Vec<f64> = y.iter().map(|v| v * scale).collect();
            let sp: Vec<f64> = yhat.iter().map(|v| v * scale).collect();

            let mse = compute_metric(MetricKind::Mse, &y, &yhat).unwrap();
            let smse = compute_metric(MetricKind::Mse, &sy, &sp).unwrap();
            prop_assert!(rel_close(smse, scale * scale * mse, 1e-12));

            for kind in [MetricKind::Mape, MetricKind::Mgd] {
                let a = compute_metric(kind, &y, &yhat).unwrap();
                let b = compute_metric(kind, &sy, &sp).unwrap();
                prop_assert!(rel_close(b, a, 1e-12), "{} not scale invariant", kind.name());
            }
        }
    }
}
