//! Central finite-difference gradient checking used by the unit tests.
//!
//! The probe loss is a fixed random linear functional of the output,
//! `L = Σ out_i·r_i`, so every output element is exercised. Relative error
//! uses an absolute floor: below gradient magnitude ~1e-4 the subtraction
//! noise of the f64 difference quotient dominates any genuine signal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::nn::layer::{Layer, LayerSpec};
use crate::nn::net::Net;
use crate::nn::tensor::Tensor;

pub const FD_STEP: f64 = 1e-6;

pub fn rel_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(1e-4)
}

pub fn init_layer_uniform(layer: &mut Layer, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for p in &mut layer.params {
        for v in p.data_mut() {
            *v = rng.random_range(-0.5..0.5);
        }
    }
}

fn random_tensor(shape: &[usize], rng: &mut ChaCha8Rng) -> Tensor {
    let mut t = Tensor::zeros(shape);
    for v in t.data_mut() {
        *v = rng.random_range(-0.5..0.5);
    }
    t
}

/// Max relative error between analytic and central finite-difference
/// gradients for a single layer (parameters and input).
pub fn check_layer_gradients(spec: LayerSpec, input_shape: &[usize], seed: u64) -> f64 {
    check_net_gradients(&[spec], input_shape, seed)
}

/// Max relative error for a whole layer stack.
pub fn check_net_gradients(specs: &[LayerSpec], input_shape: &[usize], seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Net::new(specs, input_shape).expect("valid stack");
    for layer in net.layers_mut() {
        for p in &mut layer.params {
            for v in p.data_mut() {
                *v = rng.random_range(-0.5..0.5);
            }
        }
    }
    let input = random_tensor(input_shape, &mut rng);
    let probe = random_tensor(net.output_shape(), &mut rng);

    let loss = |net: &Net, input: &Tensor| -> f64 {
        let out = net.forward(input).expect("forward");
        out.data().iter().zip(probe.data()).map(|(o, r)| o * r).sum()
    };

    // analytic pass
    let (_, caches) = net.forward_cached(&input).expect("forward");
    let mut grads = net.zero_grads();
    let grad_in = net
        .backward_into(&caches, &probe, &mut grads)
        .expect("backward");

    let mut max_err = 0.0f64;
    // parameters
    for li in 0..net.layers().len() {
        for pi in 0..net.layers()[li].params.len() {
            for e in 0..net.layers()[li].params[pi].len() {
                let original = net.layers()[li].params[pi].data()[e];
                net.layers_mut()[li].params[pi].data_mut()[e] = original + FD_STEP;
                let plus = loss(&net, &input);
                net.layers_mut()[li].params[pi].data_mut()[e] = original - FD_STEP;
                let minus = loss(&net, &input);
                net.layers_mut()[li].params[pi].data_mut()[e] = original;
                let numeric = (plus - minus) / (2.0 * FD_STEP);
                max_err = max_err.max(rel_error(grads[li][pi].data()[e], numeric));
            }
        }
    }
    // input
    let mut input = input;
    for e in 0..input.len() {
        let original = input.data()[e];
        input.data_mut()[e] = original + FD_STEP;
        let plus = loss(&net, &input);
        input.data_mut()[e] = original - FD_STEP;
        let minus = loss(&net, &input);
        input.data_mut()[e] = original;
        let numeric = (plus - minus) / (2.0 * FD_STEP);
        max_err = max_err.max(rel_error(grad_in.data()[e], numeric));
    }
    max_err
}
