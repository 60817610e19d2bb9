//! Random forest regressor: bagged CART trees, all features considered at
//! every split, prediction by arithmetic mean over trees.
//!
//! Each tree's bootstrap resample draws from an RNG derived from
//! `(master seed, tree index)`, so the forest is independent of fit order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::tree::TreeModel;
use crate::error::{Error, Result};
use crate::seeding::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
    pub seed: u64,
}

impl ForestModel {
    pub fn fit(
        x: &[Vec<f64>],
        y: &[f64],
        n_estimators: usize,
        bootstrap: bool,
        seed: u64,
    ) -> Result<ForestModel> {
        if x.len() < 2 {
            return Err(Error::Argument("forest needs at least two samples".into()));
        }
        if n_estimators == 0 {
            return Err(Error::Argument("n_estimators must be at least 1".into()));
        }
        let n = x.len();
        let mut trees = Vec::with_capacity(n_estimators);
        for t in 0..n_estimators {
            if bootstrap {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "rf-tree", t as u64));
                let mut bx = Vec::with_capacity(n);
                let mut by = Vec::with_capacity(n);
                for _ in 0..n {
                    let i = rng.random_range(0..n);
                    bx.push(x[i].clone());
                    by.push(y[i]);
                }
                trees.push(TreeModel::fit(&bx, &by, 2, 1)?);
            } else {
                trees.push(TreeModel::fit(x, y, 2, 1)?);
            }
        }
        Ok(ForestModel { trees, seed })
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / self.trees.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x: Vec<Vec<f64>> = (0..25)
            .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
            .collect();
        let y: Vec<f64> = x.iter().map(|r| 1.0 + r[0] - 0.5 * r[1]).collect();
        (x, y)
    }

    #[test]
    fn single_tree_without_bootstrap_equals_plain_tree() {
        let (x, y) = toy();
        let forest = ForestModel::fit(&x, &y, 1, false, 0).unwrap();
        let tree = TreeModel::fit(&x, &y, 2, 1).unwrap();
        for row in &x {
            assert_eq!(forest.predict_row(row), tree.predict_row(row));
        }
    }

    #[test]
    fn prediction_is_mean_of_trees() {
        let (x, y) = toy();
        let forest = ForestModel::fit(&x, &y, 10, true, 42).unwrap();
        for row in x.iter().take(5) {
            let mean: f64 =
                forest.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / 10.0;
            assert!((forest.predict_row(row) - mean).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let (x, y) = toy();
        let a = ForestModel::fit(&x, &y, 20, true, 7).unwrap();
        let b = ForestModel::fit(&x, &y, 20, true, 7).unwrap();
        assert_eq!(a, b);
        let c = ForestModel::fit(&x, &y, 20, true, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn prediction_within_tree_envelope() {
        let (x, y) = toy();
        let forest = ForestModel::fit(&x, &y, 15, true, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let q = vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let preds: Vec<f64> = forest.trees.iter().map(|t| t.predict_row(&q)).collect();
            let lo = preds.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = preds.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let p = forest.predict_row(&q);
            assert!(p >= lo - 1e-12 && p <= hi + 1e-12);
        }
    }
}
