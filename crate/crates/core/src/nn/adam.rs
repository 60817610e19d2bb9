//! Adam optimizer with bias correction.

use crate::error::{Error, Result};
use crate::nn::tensor::Tensor;
use crate::nn::train::TrainConfig;

/// First/second moment accumulators, one pair per parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<Tensor>,
    v: Vec<Tensor>,
    t: u64,
}

impl AdamState {
    pub fn new(params: &[&Tensor]) -> AdamState {
        AdamState {
            m: params.iter().map(|p| Tensor::zeros(p.shape())).collect(),
            v: params.iter().map(|p| Tensor::zeros(p.shape())).collect(),
            t: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.t
    }

    /// One Adam update over all parameters:
    /// `m ← β1·m + (1−β1)·g`, `v ← β2·v + (1−β2)·g²`, bias-corrected
    /// `m̂ = m/(1−β1^t)`, `v̂ = v/(1−β2^t)`, then
    /// `p ← p − lr·m̂/(√v̂ + ε)`.
    pub fn step(
        &mut self,
        params: &mut [&mut Tensor],
        grads: &[&Tensor],
        config: &TrainConfig,
    ) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::Shape {
                expected: format!("{} parameter tensors", self.m.len()),
                actual: format!("{} params, {} grads", params.len(), grads.len()),
            });
        }
        for ((p, g), (m, v)) in params
            .iter()
            .zip(grads)
            .zip(self.m.iter().zip(self.v.iter()))
        {
            if p.shape() != g.shape() || p.shape() != m.shape() || p.shape() != v.shape() {
                return Err(Error::Shape {
                    expected: format!("{:?}", m.shape()),
                    actual: format!("param {:?}, grad {:?}", p.shape(), g.shape()),
                });
            }
        }
        self.t += 1;
        let bc1 = 1.0 - config.beta1.powi(self.t as i32);
        let bc2 = 1.0 - config.beta2.powi(self.t as i32);
        for ((p, g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            for (((pw, &gw), mw), vw) in p
                .data_mut()
                .iter_mut()
                .zip(g.data())
                .zip(m.data_mut())
                .zip(v.data_mut())
            {
                *mw = config.beta1 * *mw + (1.0 - config.beta1) * gw;
                *vw = config.beta2 * *vw + (1.0 - config.beta2) * gw * gw;
                let m_hat = *mw / bc1;
                let v_hat = *vw / bc2;
                *pw -= config.lr * m_hat / (v_hat.sqrt() + config.eps_hat);
            }
        }
        Ok(())
    }
}
