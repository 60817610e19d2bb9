//! The five classical regressors behind one fit/predict surface: linear
//! regression, random forest, support vector regression, k-nearest
//! neighbours, and a CART decision tree.

mod forest;
mod knn;
mod linalg;
mod svr;
mod tree;

pub use forest::ForestModel;
pub use knn::KnnModel;
pub use svr::{gamma_scale, SvrModel, SvrParams};
pub use tree::{Node, TreeModel};

use crate::error::{Error, Result};

/// Model-kind tokens accepted on the CLI and in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalKind {
    Lr,
    Rf,
    Svm,
    Knn,
    Dt,
}

impl ClassicalKind {
    pub const ALL: [ClassicalKind; 5] = [
        ClassicalKind::Lr,
        ClassicalKind::Rf,
        ClassicalKind::Svm,
        ClassicalKind::Knn,
        ClassicalKind::Dt,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ClassicalKind::Lr => "lr",
            ClassicalKind::Rf => "rf",
            ClassicalKind::Svm => "svm",
            ClassicalKind::Knn => "knn",
            ClassicalKind::Dt => "dt",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "lr" => Ok(ClassicalKind::Lr),
            "rf" => Ok(ClassicalKind::Rf),
            "svm" => Ok(ClassicalKind::Svm),
            "knn" => Ok(ClassicalKind::Knn),
            "dt" => Ok(ClassicalKind::Dt),
            other => Err(Error::Argument(format!("unknown model kind '{other}'"))),
        }
    }
}

/// Linear model: weight per feature plus intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl LinearModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept
            + self
                .weights
                .iter()
                .zip(row)
                .map(|(w, x)| w * x)
                .sum::<f64>()
    }
}

/// A fitted regressor; prediction is pure and deterministic.
#[derive(Debug, Clone, PartialEq)]
pub enum Regressor {
    Linear(LinearModel),
    Forest(ForestModel),
    Svr(SvrModel),
    Knn(KnnModel),
    Tree(TreeModel),
}

/// Least squares with intercept; rank-deficient designs resolve to the
/// minimum-norm solution.
pub fn fit_linear_regression(x: &[Vec<f64>], y: &[f64]) -> Result<Regressor> {
    if x.is_empty() {
        return Err(Error::Argument("linear regression needs samples".into()));
    }
    let d = x[0].len();
    let rows: Vec<Vec<f64>> = x
        .iter()
        .map(|r| {
            let mut row = r.clone();
            row.push(1.0);
            row
        })
        .collect();
    let mut w = linalg::lstsq_min_norm(&rows, y, d + 1)?;
    let intercept = w.pop().expect("intercept column");
    Ok(Regressor::Linear(LinearModel {
        weights: w,
        intercept,
    }))
}

pub fn fit_knn(x: &[Vec<f64>], y: &[f64], k: usize) -> Result<Regressor> {
    Ok(Regressor::Knn(KnnModel::fit(x, y, k)?))
}

pub fn fit_decision_tree(
    x: &[Vec<f64>],
    y: &[f64],
    min_samples_split: usize,
    min_samples_leaf: usize,
) -> Result<Regressor> {
    Ok(Regressor::Tree(TreeModel::fit(
        x,
        y,
        min_samples_split,
        min_samples_leaf,
    )?))
}

pub fn fit_random_forest(
    x: &[Vec<f64>],
    y: &[f64],
    n_estimators: usize,
    bootstrap: bool,
    seed: u64,
) -> Result<Regressor> {
    Ok(Regressor::Forest(ForestModel::fit(
        x,
        y,
        n_estimators,
        bootstrap,
        seed,
    )?))
}

pub fn fit_svr(x: &[Vec<f64>], y: &[f64], params: SvrParams) -> Result<Regressor> {
    Ok(Regressor::Svr(SvrModel::fit(x, y, params)?))
}

/// Fits a kind with its stock hyperparameters: LR plain least squares,
/// RF 100 bootstrapped trees, SVM (RBF, C=1, ε=0.1, tol=1e-3, gamma=scale),
/// KNN k=5 uniform, DT best-split MSE.
pub fn fit_default(kind: ClassicalKind, x: &[Vec<f64>], y: &[f64], seed: u64) -> Result<Regressor> {
    match kind {
        ClassicalKind::Lr => fit_linear_regression(x, y),
        ClassicalKind::Rf => fit_random_forest(x, y, 100, true, seed),
        ClassicalKind::Svm => fit_svr(x, y, SvrParams::default()),
        ClassicalKind::Knn => fit_knn(x, y, 5),
        ClassicalKind::Dt => fit_decision_tree(x, y, 2, 1),
    }
}

impl Regressor {
    fn n_features(&self) -> usize {
        match self {
            Regressor::Linear(m) => m.weights.len(),
            Regressor::Forest(m) => m.trees[0].n_features,
            Regressor::Svr(m) => m.n_features,
            Regressor::Knn(m) => m.x[0].len(),
            Regressor::Tree(m) => m.n_features,
        }
    }

    /// Predicts a batch of rows.
    pub fn predict(&self, x: &[Vec<f64>]) -> Result<Vec<f64>> {
        let expected = self.n_features();
        for row in x {
            if row.len() != expected {
                return Err(Error::Shape {
                    expected: format!("{expected} columns"),
                    actual: format!("{}", row.len()),
                });
            }
        }
        Ok(x.iter().map(|row| self.predict_row(row)).collect())
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        match self {
            Regressor::Linear(m) => m.predict_row(row),
            Regressor::Forest(m) => m.predict_row(row),
            Regressor::Svr(m) => m.predict_row(row),
            Regressor::Knn(m) => m.predict_row(row),
            Regressor::Tree(m) => m.predict_row(row),
        }
    }
}
