//! k-nearest-neighbours regression: stored training set, Euclidean
//! (Minkowski p=2) distance, uniform weights, distance ties broken by the
//! lower training index.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub k: usize,
}

impl KnnModel {
    pub fn fit(x: &[Vec<f64>], y: &[f64], k: usize) -> Result<KnnModel> {
        if k == 0 {
            return Err(Error::Argument("k must be at least 1".into()));
        }
        if x.len() < k {
            return Err(Error::Argument(format!(
                "k = {k} exceeds the {} training samples",
                x.len()
            )));
        }
        if x.len() != y.len() {
            return Err(Error::Argument(format!(
                "{} feature rows but {} targets",
                x.len(),
                y.len()
            )));
        }
        Ok(KnnModel {
            x: x.to_vec(),
            y: y.to_vec(),
            k,
        })
    }

    pub fn predict_row(&self, query: &[f64]) -> f64 {
        let mut scored: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let d2: f64 = row
                    .iter()
                    .zip(query)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (d2, i)
            })
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        scored[..self.k].iter().map(|&(_, i)| self.y[i]).sum::<f64>() / self.k as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_training_point_with_k1() {
        let x = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let y = vec![5.0, 7.0, 9.0];
        let m = KnnModel::fit(&x, &y, 1).unwrap();
        assert_eq!(m.predict_row(&[1.0, 1.0]), 7.0);
    }

    #[test]
    fn k_equals_n_gives_global_mean() {
        let x = vec![vec![0.0], vec![1.0], vec![2.0], vec![5.0]];
        let y = vec![1.0, 2.0, 3.0, 6.0];
        let m = KnnModel::fit(&x, &y, 4).unwrap();
        assert_eq!(m.predict_row(&[100.0]), 3.0);
    }

    #[test]
    fn tie_breaks_by_lower_index() {
        // two training points equidistant from the query
        let x = vec![vec![-1.0], vec![1.0], vec![3.0]];
        let y = vec![10.0, 20.0, 30.0];
        let m = KnnModel::fit(&x, &y, 1).unwrap();
        assert_eq!(m.predict_row(&[0.0]), 10.0);
    }

    #[test]
    fn rejects_k_larger_than_n() {
        assert!(KnnModel::fit(&[vec![0.0]], &[1.0], 2).is_err());
    }

    #[test]
    fn matches_exhaustive_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..4).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = (0..30).map(|_| rng.random_range(0.0..2.0)).collect();
        let m = KnnModel::fit(&x, &y, 5).unwrap();
        for _ in 0..50 {
            let q: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            // brute-force full sort oracle
            let mut dists: Vec<(f64, usize)> = x
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    (
                        row.iter()
                            .zip(&q)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt(),
                        i,
                    )
                })
                .collect();
            dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let expect: f64 = dists[..5].iter().map(|&(_, i)| y[i]).sum::<f64>() / 5.0;
            assert_eq!(m.predict_row(&q), expect);
        }
    }

    #[test]
    fn prediction_within_target_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let x: Vec<Vec<f64>> = (0..25)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = (0..25).map(|_| rng.random_range(0.5..1.5)).collect();
        let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let m = KnnModel::fit(&x, &y, 5).unwrap();
        for _ in 0..40 {
            let q: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let p = m.predict_row(&q);
            assert!(p >= lo && p <= hi);
        }
    }
}
