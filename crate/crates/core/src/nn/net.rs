//! Layer stack with shape inference, seeded Glorot-uniform initialization,
//! and whole-network forward/backward passes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::nn::layer::{Cache, Layer, LayerSpec};
use crate::nn::tensor::Tensor;

#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    layers: Vec<Layer>,
    input_shape: Vec<usize>,
}

impl Net {
    /// Builds a zero-parameter network, inferring every layer's shapes from
    /// the input shape.
    pub fn new(specs: &[LayerSpec], input_shape: &[usize]) -> Result<Net> {
        if specs.is_empty() {
            return Err(Error::Argument("network needs at least one layer".into()));
        }
        let mut shape = input_shape.to_vec();
        let mut layers = Vec::with_capacity(specs.len());
        for spec in specs {
            let layer = Layer::new(*spec, &shape)?;
            shape = layer.output_shape().to_vec();
            layers.push(layer);
        }
        Ok(Net {
            layers,
            input_shape: input_shape.to_vec(),
        })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_shape(&self) -> &[usize] {
        &self.input_shape
    }

    pub fn output_shape(&self) -> &[usize] {
        self.layers.last().expect("non-empty").output_shape()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(Layer::param_count).sum()
    }

    /// Flattened view of all parameter tensors, layer order.
    pub fn param_tensors(&self) -> Vec<&Tensor> {
        self.layers.iter().flat_map(|l| l.params.iter()).collect()
    }

    pub fn param_tensors_mut(&mut self) -> Vec<&mut Tensor> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.params.iter_mut())
            .collect()
    }

    /// Seeded Glorot-uniform weights, zero biases. Weight matrices draw in
    /// layer order, row-major; the limit is `sqrt(6/(fan_in+fan_out))`.
    pub fn init_glorot(&mut self, rng: &mut ChaCha8Rng) {
        for layer in &mut self.layers {
            let fans: Vec<Option<(usize, usize)>> = match layer.spec {
                LayerSpec::Dense { units } => {
                    let fan_in = layer.params[0].shape()[1];
                    vec![Some((fan_in, units)), None]
                }
                LayerSpec::Conv1d { filters, kernel } => {
                    let window = layer.params[0].shape()[1];
                    vec![Some((window, filters * kernel)), None]
                }
                LayerSpec::Lstm { units, .. } | LayerSpec::Gru { units, .. } => {
                    let gates_units = layer.params[0].shape()[0];
                    let fan_in = layer.params[0].shape()[1];
                    vec![
                        Some((fan_in, gates_units)),
                        Some((units, gates_units)),
                        None,
                    ]
                }
                LayerSpec::Relu => vec![],
            };
            for (tensor, fan) in layer.params.iter_mut().zip(fans) {
                match fan {
                    Some((fan_in, fan_out)) => {
                        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
                        for v in tensor.data_mut() {
                            *v = rng.random_range(-limit..limit);
                        }
                    }
                    None => tensor.fill(0.0),
                }
            }
        }
    }

    pub fn init_glorot_seeded(&mut self, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.init_glorot(&mut rng);
    }

    /// Forward pass keeping every layer's activation record.
    pub fn forward_cached(&self, input: &Tensor) -> Result<(Tensor, Vec<Cache>)> {
        let mut caches = Vec::with_capacity(self.layers.len());
        let mut current = input.clone();
        for layer in &self.layers {
            let (out, cache) = layer.forward(&current)?;
            caches.push(cache);
            current = out;
        }
        Ok((current, caches))
    }

    /// Pure forward pass.
    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        let mut current = input.clone();
        for layer in &self.layers {
            let (out, _) = layer.forward(&current)?;
            current = out;
        }
        Ok(current)
    }

    /// Full reverse pass; parameter gradients accumulate into `grads`
    /// (one `Vec<Tensor>` per layer, shaped like that layer's params).
    /// Returns the gradient with respect to the network input.
    pub fn backward_into(
        &self,
        caches: &[Cache],
        grad_out: &Tensor,
        grads: &mut [Vec<Tensor>],
    ) -> Result<Tensor> {
        if caches.len() != self.layers.len() || grads.len() != self.layers.len() {
            return Err(Error::Argument(
                "caches/gradients do not match layer count".into(),
            ));
        }
        let mut grad = grad_out.clone();
        for ((layer, cache), grad_acc) in self
            .layers
            .iter()
            .zip(caches)
            .zip(grads.iter_mut())
            .rev()
        {
            grad = layer.backward_into(cache, &grad, grad_acc)?;
        }
        Ok(grad)
    }

    /// Zeroed gradient accumulators shaped like the parameters.
    pub fn zero_grads(&self) -> Vec<Vec<Tensor>> {
        self.layers
            .iter()
            .map(|l| l.params.iter().map(|p| Tensor::zeros(p.shape())).collect())
            .collect()
    }
}
