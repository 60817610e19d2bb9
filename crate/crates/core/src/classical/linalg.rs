//! Minimum-norm least squares via one-sided Jacobi SVD.
//!
//! The design matrices here are tall and narrow (at most a dozen columns),
//! where Jacobi orthogonalization is simple and accurate: sweep over column
//! pairs, rotating until every pair is numerically orthogonal; singular
//! values then fall out as column norms. Rank-deficient systems truncate
//! singular values below a relative threshold, which yields the minimum-norm
//! solution.

use crate::error::{Error, Result};

/// Column-major dense matrix used only inside the solver.
struct Columns {
    cols: Vec<Vec<f64>>,
}

impl Columns {
    fn from_rows(rows: &[Vec<f64>], ncols: usize) -> Columns {
        let mut cols = vec![vec![0.0; rows.len()]; ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                cols[j][i] = v;
            }
        }
        Columns { cols }
    }
}

/// Solves `min ‖A·w − y‖₂` for the minimum-norm `w`.
///
/// `rows` are the rows of `A`; all rows must share a length of `ncols`.
pub fn lstsq_min_norm(rows: &[Vec<f64>], y: &[f64], ncols: usize) -> Result<Vec<f64>> {
    if rows.len() != y.len() {
        return Err(Error::Argument(format!(
            "{} rows but {} targets",
            rows.len(),
            y.len()
        )));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Argument("ragged design matrix".into()));
    }
    if rows
        .iter()
        .flatten()
        .chain(y.iter())
        .any(|v| !v.is_finite())
    {
        return Err(Error::Argument("non-finite inputs".into()));
    }

    let mut a = Columns::from_rows(rows, ncols);
    // V accumulates the right singular vectors (ncols × ncols, row-major).
    let mut v = vec![0.0; ncols * ncols];
    for j in 0..ncols {
        v[j * ncols + j] = 1.0;
    }

    // One-sided Jacobi: rotate column pairs until all are orthogonal.
    let tol = 1e-14;
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..ncols {
            for q in (p + 1)..ncols {
                let (app, aqq, apq) = {
                    let cp = &a.cols[p];
                    let cq = &a.cols[q];
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = 0.0;
                    for i in 0..cp.len() {
                        app += cp[i] * cp[i];
                        aqq += cq[i] * cq[i];
                        apq += cp[i] * cq[i];
                    }
                    (app, aqq, apq)
                };
                if apq.abs() <= tol * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                // classic Jacobi rotation angle
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (head, tail) = a.cols.split_at_mut(q);
                let cp = &mut head[p];
                let cq = &mut tail[0];
                for i in 0..cp.len() {
                    let vp = cp[i];
                    let vq = cq[i];
                    cp[i] = c * vp - s * vq;
                    cq[i] = s * vp + c * vq;
                }
                for row in 0..ncols {
                    let vp = v[row * ncols + p];
                    let vq = v[row * ncols + q];
                    v[row * ncols + p] = c * vp - s * vq;
                    v[row * ncols + q] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Singular values are the rotated column norms.
    let sigma: Vec<f64> = a
        .cols
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    let cutoff = sigma_max * (rows.len().max(ncols) as f64) * f64::EPSILON;

    // w = Σ_j v_j · (u_jᵀ y)/σ_j over the kept singular directions,
    // where u_j = col_j/σ_j.
    let mut w = vec![0.0; ncols];
    for j in 0..ncols {
        if sigma[j] <= cutoff || sigma[j] == 0.0 {
            continue;
        }
        let uy: f64 = a.cols[j].iter().zip(y).map(|(u, t)| u * t).sum::<f64>() / sigma[j];
        let scale = uy / sigma[j];
        for row in 0..ncols {
            w[row] += v[row * ncols + j] * scale;
        }
    }
    Ok(w)
}
