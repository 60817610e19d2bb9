//! Deterministic k-fold cross-validation partitioning.
//!
//! Indices are shuffled with a seeded Fisher-Yates pass and then chunked
//! contiguously, so fold sizes differ by at most one and identical
//! `(n, k, seed)` arguments always reproduce the same plan.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// A k-way partition of sample indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    /// `assignments[i]` is the fold that sample `i` is tested in.
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// Test indices of fold `i`, in original dataset order.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }

    /// Train indices of fold `i`, in original dataset order.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f != fold)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Builds a fold plan over `n` samples.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Argument(format!("fold count must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::Argument(format!(
            "fold count {k} exceeds sample count {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    // First n % k folds take one extra sample.
    let base = n / k;
    let extra = n % k;
    let mut assignments = vec![0usize; n];
    let mut cursor = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < extra);
        for &idx in &order[cursor..cursor + size] {
            assignments[idx] = fold;
        }
        cursor += size;
    }
    Ok(FoldPlan {
        k,
        assignments,
        seed,
    })
}

/// Materializes the train/test split of fold `i`; both views keep the
/// original dataset order.
pub fn fold_split(dataset: &Dataset, plan: &FoldPlan, fold: usize) -> Result<(Dataset, Dataset)> {
    if plan.len() != dataset.len() {
        return Err(Error::Argument(format!(
            "plan built for {} samples, dataset has {}",
            plan.len(),
            dataset.len()
        )));
    }
    if fold >= plan.k {
        return Err(Error::Argument(format!(
            "fold index {fold} out of range for k = {}",
            plan.k
        )));
    }
    let train = dataset.subset(&plan.train_indices(fold));
    let test = dataset.subset(&plan.test_indices(fold));
    Ok((train, test))
}
