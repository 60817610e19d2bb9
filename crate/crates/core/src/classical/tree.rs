//! CART regression tree: exhaustive best-split search on the MSE criterion.
//!
//! Candidate thresholds are midpoints between consecutive distinct sorted
//! feature values; ties between equally good splits resolve to the lowest
//! feature index, then the lowest threshold, so the tree is a deterministic
//! function of its inputs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        prediction: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    pub nodes: Vec<Node>,
    pub n_features: usize,
    pub min_samples_split: usize,
    pub min_samples_leaf: usize,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    weighted_child_sse: f64,
}

impl TreeModel {
    pub fn fit(
        x: &[Vec<f64>],
        y: &[f64],
        min_samples_split: usize,
        min_samples_leaf: usize,
    ) -> Result<TreeModel> {
        if x.is_empty() {
            return Err(Error::Argument("tree needs at least one sample".into()));
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
        if x.iter().flatten().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Argument("non-finite inputs".into()));
        }
        let mut tree = TreeModel {
            nodes: Vec::new(),
            n_features,
            min_samples_split: min_samples_split.max(2),
            min_samples_leaf: min_samples_leaf.max(1),
        };
        let indices: Vec<usize> = (0..x.len()).collect();
        tree.grow(x, y, indices);
        Ok(tree)
    }

    fn grow(&mut self, x: &[Vec<f64>], y: &[f64], indices: Vec<usize>) -> usize {
        let n = indices.len() as f64;
        let mean = indices.iter().map(|&i| y[i]).sum::<f64>() / n;
        let sse: f64 = indices
            .iter()
            .map(|&i| {
                let d = y[i] - mean;
                d * d
            })
            .sum();

        let pure = sse <= 0.0;
        if pure || indices.len() < self.min_samples_split {
            return self.push_leaf(mean);
        }
        let Some(best) = self.best_split(x, y, &indices) else {
            return self.push_leaf(mean);
        };
        // require a strict improvement over the unsplit node
        if !(best.weighted_child_sse < sse) {
            return self.push_leaf(mean);
        }

        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| x[i][best.feature] <= best.threshold);
        let slot = self.nodes.len();
        self.nodes.push(Node::Leaf { prediction: mean }); // placeholder
        let left = self.grow(x, y, left_idx);
        let right = self.grow(x, y, right_idx);
        self.nodes[slot] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        slot
    }

    fn push_leaf(&mut self, prediction: f64) -> usize {
        self.nodes.push(Node::Leaf { prediction });
        self.nodes.len() - 1
    }

    /// Scans every feature and every midpoint between consecutive distinct
    /// sorted values; each candidate's children are scored directly in node
    /// index order, so the selection is a pure function of the data.
    fn best_split(&self, x: &[Vec<f64>], y: &[f64], indices: &[usize]) -> Option<BestSplit> {
        let mut best: Option<BestSplit> = None;
        for feature in 0..self.n_features {
            let mut values: Vec<f64> = indices.iter().map(|&i| x[i][feature]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for pair in values.windows(2) {
                let threshold = pair[0] + (pair[1] - pair[0]) / 2.0;
                // midpoint of adjacent floats can round onto a boundary value
                if !(threshold >= pair[0] && threshold < pair[1]) {
                    continue;
                }
                let (left, right): (Vec<usize>, Vec<usize>) =
                    indices.iter().partition(|&&i| x[i][feature] <= threshold);
                if left.len() < self.min_samples_leaf || right.len() < self.min_samples_leaf {
                    continue;
                }
                let child_sse = |part: &[usize]| -> f64 {
                    let mean = part.iter().map(|&i| y[i]).sum::<f64>() / part.len() as f64;
                    part.iter()
                        .map(|&i| {
                            let d = y[i] - mean;
                            d * d
                        })
                        .sum()
                };
                let total = child_sse(&left) + child_sse(&right);
                // strict '<' keeps the first (lowest feature, lowest
                // threshold) candidate on ties
                if best
                    .as_ref()
                    .map(|b| total < b.weighted_child_sse)
                    .unwrap_or(true)
                {
                    best = Some(BestSplit {
                        feature,
                        threshold,
                        weighted_child_sse: total,
                    });
                }
            }
        }
        best
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                Node::Leaf { prediction } => return *prediction,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 1,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}
