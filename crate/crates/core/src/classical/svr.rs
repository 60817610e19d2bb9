//! ε-insensitive support vector regression with an RBF kernel.
//!
//! The dual is solved in the standard 2n-variable box form
//! (`u = [α; α*]`, `0 ≤ u ≤ C`, `Σα − Σα* = 0`) by maximal-violating-pair
//! coordinate optimization until the KKT gap drops below `tol`. The kernel
//! matrix is dense; problem sizes here are a few hundred points at most.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvrParams {
    pub c: f64,
    pub epsilon: f64,
    pub tol: f64,
    /// Pair updates allowed before giving up.
    pub max_passes: usize,
}

impl Default for SvrParams {
    fn default() -> Self {
        SvrParams {
            c: 1.0,
            epsilon: 0.1,
            tol: 1e-3,
            max_passes: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvrModel {
    /// Support vectors with their dual coefficients `α_i − α*_i`.
    pub support: Vec<(Vec<f64>, f64)>,
    pub bias: f64,
    pub gamma: f64,
    pub n_features: usize,
    /// Pair updates the solver used.
    pub iterations: usize,
}

/// `gamma = 1 / (n_features · Var(X))` over all matrix entries
/// (population variance), the "scale" convention.
pub fn gamma_scale(x: &[Vec<f64>]) -> f64 {
    let n_features = x.first().map(|r| r.len()).unwrap_or(0);
    let count = (x.len() * n_features) as f64;
    if count == 0.0 {
        return 1.0;
    }
    let mean: f64 = x.iter().flatten().sum::<f64>() / count;
    let var: f64 = x
        .iter()
        .flatten()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / count;
    if var > 0.0 {
        1.0 / (n_features as f64 * var)
    } else {
        1.0 / n_features.max(1) as f64
    }
}

fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

impl SvrModel {
    pub fn fit(x: &[Vec<f64>], y: &[f64], params: SvrParams) -> Result<SvrModel> {
        if x.is_empty() {
            return Err(Error::Argument("svr needs at least one sample".into()));
        }
        if x.len() != y.len() {
            return Err(Error::Argument(format!(
                "{} feature rows but {} targets",
                x.len(),
                y.len()
            )));
        }
        let n_features = x[0].len();
        if x.iter().any(|r| r.len() != n_features) {
            return Err(Error::Argument("ragged feature matrix".into()));
        }
        let gamma = gamma_scale(x);
        let n = x.len();

        let mut kernel = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let k = rbf(&x[i], &x[j], gamma);
                kernel[i * n + j] = k;
                kernel[j * n + i] = k;
            }
        }

        let solved = solve_smo(&kernel, y, n, &params)?;
        let support: Vec<(Vec<f64>, f64)> = solved
            .beta
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0.0)
            .map(|(i, &b)| (x[i].clone(), b))
            .collect();
        Ok(SvrModel {
            support,
            bias: solved.bias,
            gamma,
            n_features,
            iterations: solved.iterations,
        })
    }

    pub fn predict_row(&self, query: &[f64]) -> f64 {
        self.bias
            + self
                .support
                .iter()
                .map(|(sv, beta)| beta * rbf(sv, query, self.gamma))
                .sum::<f64>()
    }
}

pub(crate) struct SmoSolution {
    pub beta: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// Final dual variables `[α; α*]`, inspected by the KKT tests.
    #[allow(dead_code)]
    pub u: Vec<f64>,
    /// Final KKT gap `m − M`, inspected by the KKT tests.
    #[allow(dead_code)]
    pub kkt_gap: f64,
}

/// Maximal-violating-pair SMO on the 2n-variable dual.
pub(crate) fn solve_smo(
    kernel: &[f64],
    y: &[f64],
    n: usize,
    params: &SvrParams,
) -> Result<SmoSolution> {
    let two_n = 2 * n;
    let c = params.c;
    let sign = |a: usize| if a < n { 1.0 } else { -1.0 };
    let idx = |a: usize| if a < n { a } else { a - n };

    let mut u = vec![0.0; two_n];
    // gradient of ½uᵀQu + pᵀu at u = 0 is p = [ε − y; ε + y]
    let mut grad: Vec<f64> = (0..two_n)
        .map(|a| {
            if a < n {
                params.epsilon - y[a]
            } else {
                params.epsilon + y[a - n]
            }
        })
        .collect();

    let mut iterations = 0usize;
    let (bias, kkt_gap) = loop {
        // w_a = z_a·G_a; the multiplier b is bounded below by w over
        // {z=+1, u>0} ∪ {z=−1, u<C} and above over the complements.
        let mut low_best: Option<(f64, usize)> = None;
        let mut up_best: Option<(f64, usize)> = None;
        for a in 0..two_n {
            let w = sign(a) * grad[a];
            let can_lower = if a < n { u[a] > 0.0 } else { u[a] < c };
            let can_upper = if a < n { u[a] < c } else { u[a] > 0.0 };
            if can_lower && low_best.map(|(bw, _)| w > bw).unwrap_or(true) {
                low_best = Some((w, a));
            }
            if can_upper && up_best.map(|(bw, _)| w < bw).unwrap_or(true) {
                up_best = Some((w, a));
            }
        }
        let (m, i) = low_best.expect("n >= 1");
        let (m_small, j) = up_best.expect("n >= 1");
        let gap = m - m_small;
        if gap <= params.tol {
            break (-(m + m_small) / 2.0, gap);
        }
        if iterations >= params.max_passes {
            return Err(Error::Convergence(format!(
                "SMO exceeded {} pair updates (KKT gap {gap:.3e} > tol {})",
                params.max_passes, params.tol
            )));
        }
        iterations += 1;

        // two-variable subproblem along d = −z_i·e_i + z_j·e_j
        let (im, jm) = (idx(i), idx(j));
        let eta = kernel[im * n + im] + kernel[jm * n + jm] - 2.0 * kernel[im * n + jm];
        let mut t = if eta > 1e-12 { gap / eta } else { f64::INFINITY };
        // box caps along the move direction
        let cap_i = if i < n { u[i] } else { c - u[i] };
        let cap_j = if j < n { c - u[j] } else { u[j] };
        t = t.min(cap_i).min(cap_j);
        // δu_i = −z_i·t, δu_j = +z_j·t keeps Σ z·u invariant
        u[i] = (u[i] - sign(i) * t).clamp(0.0, c);
        u[j] = (u[j] + sign(j) * t).clamp(0.0, c);

        // gradient update: G_a += t·z_a·(K[a][jm] − K[a][im])
        for a in 0..two_n {
            let k_j = kernel[idx(a) * n + jm];
            let k_i = kernel[idx(a) * n + im];
            grad[a] += t * sign(a) * (k_j - k_i);
        }
    };

    let beta: Vec<f64> = (0..n).map(|i| u[i] - u[n + i]).collect();
    Ok(SmoSolution {
        beta,
        bias,
        iterations,
        u,
        kkt_gap,
    })
}
