//! Mini-batch training loop: seeded init, per-epoch seeded shuffle, MSE loss,
//! one Adam step per batch.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nn::adam::AdamState;
use crate::nn::layer::LayerSpec;
use crate::nn::net::Net;
use crate::nn::tensor::Tensor;

/// Optimizer and loop hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_hat: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 200,
            lr: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            eps_hat: 1e-8,
            batch_size: 32,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0) {
            return Err(Error::Argument(format!("lr must be positive, got {}", self.lr)));
        }
        for (name, v) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::Argument(format!("{name} must lie in [0, 1), got {v}")));
            }
        }
        if self.epochs == 0 {
            return Err(Error::Argument("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Argument("batch_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// A trained network plus its per-epoch mean training loss.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub net: Net,
    pub loss_trace: Vec<f64>,
}

/// Trains a scalar-output network on `(features, targets)` pairs.
///
/// Fully deterministic for fixed inputs and seed. Aborts with a training
/// error if the loss turns non-finite.
pub fn train(
    specs: &[LayerSpec],
    features: &[Tensor],
    targets: &[f64],
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    if features.is_empty() {
        return Err(Error::Argument("training needs at least one sample".into()));
    }
    if features.len() != targets.len() {
        return Err(Error::Argument(format!(
            "{} feature rows but {} targets",
            features.len(),
            targets.len()
        )));
    }
    let input_shape = features[0].shape();
    for f in features {
        if f.shape() != input_shape {
            return Err(Error::Shape {
                expected: format!("{input_shape:?}"),
                actual: format!("{:?}", f.shape()),
            });
        }
    }
    let mut net = Net::new(specs, input_shape)?;
    if net.output_shape() != [1] {
        return Err(Error::Shape {
            expected: "[1] (scalar head)".into(),
            actual: format!("{:?}", net.output_shape()),
        });
    }

    // One stream drives init and all epoch shuffles.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    net.init_glorot(&mut rng);

    let n = features.len();
    let mut adam = AdamState::new(&net.param_tensors());
    let mut order: Vec<usize> = (0..n).collect();
    let mut grads = net.zero_grads();
    let mut loss_trace = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut epoch_sq_sum = 0.0;
        for batch in order.chunks(config.batch_size) {
            for layer in grads.iter_mut() {
                for g in layer.iter_mut() {
                    g.fill(0.0);
                }
            }
            let scale = 2.0 / batch.len() as f64;
            for &i in batch {
                let (out, caches) = net.forward_cached(&features[i])?;
                let yhat = out.as_scalar()?;
                let err = yhat - targets[i];
                epoch_sq_sum += err * err;
                let grad_out = Tensor::scalar(scale * err);
                net.backward_into(&caches, &grad_out, &mut grads)?;
            }
            let flat_grads: Vec<&Tensor> = grads.iter().flatten().collect();
            adam.step(&mut net.param_tensors_mut(), &flat_grads, config)?;
        }
        let epoch_loss = epoch_sq_sum / n as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::Training {
                epoch,
                detail: format!("non-finite loss {epoch_loss}"),
            });
        }
        loss_trace.push(epoch_loss);
    }
    Ok(TrainOutcome { net, loss_trace })
}

/// Scalar prediction from a trained network; pure.
pub fn predict(net: &Net, features: &Tensor) -> Result<f64> {
    net.forward(features)?.as_scalar()
}
