//! Layer kinds: dense, 1-D convolution, LSTM, GRU, ReLU. Each layer owns its
//! parameter tensors, runs a shape-checked forward pass that records the
//! activations needed for an exact reverse pass, and backpropagates through
//! time for the recurrent kinds.
//!
//! Conventions:
//! - sequence inputs are `[steps, channels]`, row-major;
//! - dense layers flatten whatever they receive;
//! - convolution is valid-padded cross-correlation with stride 1;
//! - recurrent state starts at zero and either the full sequence or the last
//!   hidden state is emitted, per `returns_sequence`.

use crate::error::{Error, Result};
use crate::nn::math::{axpy, dot, sigmoid};
use crate::nn::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerSpec {
    Dense { units: usize },
    Conv1d { filters: usize, kernel: usize },
    Lstm { units: usize, returns_sequence: bool },
    Gru { units: usize, returns_sequence: bool },
    Relu,
}

impl LayerSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LayerSpec::Dense { units } if units == 0 => {
                Err(Error::Argument("dense units must be positive".into()))
            }
            LayerSpec::Conv1d { filters, kernel } if filters == 0 || kernel == 0 => Err(
                Error::Argument("conv1d filters and kernel must be positive".into()),
            ),
            LayerSpec::Lstm { units, .. } | LayerSpec::Gru { units, .. } if units == 0 => {
                Err(Error::Argument("recurrent units must be positive".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LayerSpec::Dense { .. } => "dense",
            LayerSpec::Conv1d { .. } => "conv1d",
            LayerSpec::Lstm { .. } => "lstm",
            LayerSpec::Gru { .. } => "gru",
            LayerSpec::Relu => "relu",
        }
    }
}

/// Number of gate blocks stacked in the fused recurrent weight matrices.
const LSTM_GATES: usize = 4; // input, forget, cell, output
const GRU_GATES: usize = 3; // update, reset, candidate

/// A layer with its parameters.
///
/// Parameter layout by kind:
/// - dense: `w [units, in]`, `b [units]`
/// - conv1d: `w [filters, kernel·channels]` (window-major), `b [filters]`
/// - lstm: `w_ih [4·units, in]`, `w_hh [4·units, units]`, `b [4·units]`
/// - gru: `w_ih [3·units, in]`, `w_hh [3·units, units]`, `b [3·units]`
/// - relu: none
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub spec: LayerSpec,
    pub params: Vec<Tensor>,
    input_shape: Vec<usize>,
    output_shape: Vec<usize>,
}

/// Activation record from one forward call, sufficient for exact backprop.
#[derive(Debug, Clone)]
pub enum Cache {
    Dense { input: Tensor },
    Conv1d { input: Tensor },
    Relu { input: Tensor },
    Lstm(RecurrentCache),
    Gru(RecurrentCache),
}

/// Per-step activations of a recurrent layer.
#[derive(Debug, Clone)]
pub struct RecurrentCache {
    input: Tensor,
    /// Hidden states `h_0..h_T` (T+1 entries, `h_0` = 0).
    hs: Vec<Vec<f64>>,
    /// LSTM cell states `c_0..c_T`; empty for GRU.
    cs: Vec<Vec<f64>>,
    /// Per-step gate activations, packed `[gates·units]` per step.
    gates: Vec<Vec<f64>>,
    /// GRU only: per-step `r ⊙ h_prev`.
    reset_hidden: Vec<Vec<f64>>,
}

impl Layer {
    /// Builds a zero-initialized layer for a given input shape and reports
    /// its output shape.
    pub fn new(spec: LayerSpec, input_shape: &[usize]) -> Result<Layer> {
        spec.validate()?;
        let (params, output_shape) = match spec {
            LayerSpec::Dense { units } => {
                let fan_in: usize = input_shape.iter().product();
                (
                    vec![Tensor::zeros(&[units, fan_in]), Tensor::zeros(&[units])],
                    vec![units],
                )
            }
            LayerSpec::Conv1d { filters, kernel } => {
                let (steps, channels) = sequence_dims(input_shape)?;
                if steps < kernel {
                    return Err(Error::Shape {
                        expected: format!("at least {kernel} steps for kernel width {kernel}"),
                        actual: format!("{input_shape:?}"),
                    });
                }
                (
                    vec![
                        Tensor::zeros(&[filters, kernel * channels]),
                        Tensor::zeros(&[filters]),
                    ],
                    vec![steps - kernel + 1, filters],
                )
            }
            LayerSpec::Lstm {
                units,
                returns_sequence,
            } => {
                let (steps, channels) = sequence_dims(input_shape)?;
                (
                    recurrent_params(LSTM_GATES, units, channels),
                    recurrent_output(steps, units, returns_sequence),
                )
            }
            LayerSpec::Gru {
                units,
                returns_sequence,
            } => {
                let (steps, channels) = sequence_dims(input_shape)?;
                (
                    recurrent_params(GRU_GATES, units, channels),
                    recurrent_output(steps, units, returns_sequence),
                )
            }
            LayerSpec::Relu => (vec![], input_shape.to_vec()),
        };
        Ok(Layer {
            spec,
            params,
            input_shape: input_shape.to_vec(),
            output_shape,
        })
    }

    pub fn input_shape(&self) -> &[usize] {
        &self.input_shape
    }

    pub fn output_shape(&self) -> &[usize] {
        &self.output_shape
    }

    pub fn param_count(&self) -> usize {
        self.params.iter().map(Tensor::len).sum()
    }

    fn check_input(&self, input: &Tensor) -> Result<()> {
        let ok = match self.spec {
            // dense flattens: only the element count must match
            LayerSpec::Dense { .. } => {
                input.len() == self.input_shape.iter().product::<usize>()
            }
            _ => input.shape() == self.input_shape.as_slice(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: format!("{:?}", self.input_shape),
                actual: format!("{:?}", input.shape()),
            })
        }
    }

    fn check_grad(&self, grad_out: &Tensor) -> Result<()> {
        if grad_out.shape() == self.output_shape.as_slice() {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: format!("{:?}", self.output_shape),
                actual: format!("{:?}", grad_out.shape()),
            })
        }
    }

    pub fn forward(&self, input: &Tensor) -> Result<(Tensor, Cache)> {
        self.check_input(input)?;
        match self.spec {
            LayerSpec::Dense { units } => {
                let w = &self.params[0];
                let b = &self.params[1];
                let mut out = Tensor::zeros(&[units]);
                for (r, o) in out.data_mut().iter_mut().enumerate() {
                    *o = b.data()[r] + dot(w.row(r), input.data());
                }
                Ok((out, Cache::Dense { input: input.clone() }))
            }
            LayerSpec::Conv1d { filters, kernel } => {
                let channels = self.input_shape[1];
                let out_steps = self.output_shape[0];
                let w = &self.params[0];
                let b = &self.params[1];
                let window = kernel * channels;
                let x = input.data();
                let mut out = Tensor::zeros(&[out_steps, filters]);
                for t in 0..out_steps {
                    let win = &x[t * channels..t * channels + window];
                    let row = out.row_mut(t);
                    for f in 0..filters {
                        row[f] = b.data()[f] + dot(w.row(f), win);
                    }
                }
                Ok((out, Cache::Conv1d { input: input.clone() }))
            }
            LayerSpec::Relu => {
                let mut out = input.clone();
                for v in out.data_mut() {
                    *v = v.max(0.0);
                }
                Ok((out, Cache::Relu { input: input.clone() }))
            }
            LayerSpec::Lstm {
                units,
                returns_sequence,
            } => {
                let cache = self.lstm_forward(input, units)?;
                let out = emit_recurrent(&cache.hs, units, returns_sequence);
                Ok((out, Cache::Lstm(cache)))
            }
            LayerSpec::Gru {
                units,
                returns_sequence,
            } => {
                let cache = self.gru_forward(input, units)?;
                let out = emit_recurrent(&cache.hs, units, returns_sequence);
                Ok((out, Cache::Gru(cache)))
            }
        }
    }

    /// Exact reverse-mode gradients: returns the gradient with respect to the
    /// input and one gradient tensor per parameter, in parameter order.
    pub fn backward(&self, cache: &Cache, grad_out: &Tensor) -> Result<(Tensor, Vec<Tensor>)> {
        let mut grads: Vec<Tensor> = self.params.iter().map(|p| Tensor::zeros(p.shape())).collect();
        let dx = self.backward_into(cache, grad_out, &mut grads)?;
        Ok((dx, grads))
    }

    /// Like [`Layer::backward`], but accumulates parameter gradients into
    /// `grad_params` (shaped like `self.params`). The training loop uses this
    /// to sum gradients over a batch without intermediate allocations.
    pub fn backward_into(
        &self,
        cache: &Cache,
        grad_out: &Tensor,
        grad_params: &mut [Tensor],
    ) -> Result<Tensor> {
        self.check_grad(grad_out)?;
        if grad_params.len() != self.params.len()
            || grad_params
                .iter()
                .zip(&self.params)
                .any(|(g, p)| g.shape() != p.shape())
        {
            return Err(Error::Shape {
                expected: "gradient tensors shaped like the parameters".into(),
                actual: format!("{:?}", grad_params.iter().map(Tensor::shape).collect::<Vec<_>>()),
            });
        }
        match (self.spec, cache) {
            (LayerSpec::Dense { units }, Cache::Dense { input }) => {
                let w = &self.params[0];
                let (dw, db) = split_two(grad_params);
                let mut dx = Tensor::zeros(input.shape());
                for r in 0..units {
                    let g = grad_out.data()[r];
                    db.data_mut()[r] += g;
                    axpy(dw.row_mut(r), g, input.data());
                    axpy(dx.data_mut(), g, w.row(r));
                }
                Ok(dx)
            }
            (LayerSpec::Conv1d { filters, kernel }, Cache::Conv1d { input }) => {
                let channels = self.input_shape[1];
                let out_steps = self.output_shape[0];
                let window = kernel * channels;
                let w = &self.params[0];
                let (dw, db) = split_two(grad_params);
                let mut dx = Tensor::zeros(input.shape());
                let x = input.data();
                for t in 0..out_steps {
                    let win = &x[t * channels..t * channels + window];
                    let g_row = grad_out.row(t);
                    for f in 0..filters {
                        let g = g_row[f];
                        if g == 0.0 {
                            continue;
                        }
                        db.data_mut()[f] += g;
                        axpy(dw.row_mut(f), g, win);
                        axpy(&mut dx.data_mut()[t * channels..t * channels + window], g, w.row(f));
                    }
                }
                Ok(dx)
            }
            (LayerSpec::Relu, Cache::Relu { input }) => {
                let mut dx = Tensor::zeros(input.shape());
                for ((d, &g), &x) in dx
                    .data_mut()
                    .iter_mut()
                    .zip(grad_out.data())
                    .zip(input.data())
                {
                    *d = if x > 0.0 { g } else { 0.0 };
                }
                Ok(dx)
            }
            (
                LayerSpec::Lstm {
                    units,
                    returns_sequence,
                },
                Cache::Lstm(rc),
            ) => self.lstm_backward(rc, grad_out, units, returns_sequence, grad_params),
            (
                LayerSpec::Gru {
                    units,
                    returns_sequence,
                },
                Cache::Gru(rc),
            ) => self.gru_backward(rc, grad_out, units, returns_sequence, grad_params),
            _ => Err(Error::Argument(
                "cache does not match layer kind".into(),
            )),
        }
    }

    fn lstm_forward(&self, input: &Tensor, units: usize) -> Result<RecurrentCache> {
        let channels = self.input_shape[1];
        let steps = self.input_shape[0];
        let w_ih = &self.params[0];
        let w_hh = &self.params[1];
        let b = &self.params[2];
        let rows = LSTM_GATES * units;
        let pre_x = input_projections(w_ih, input.data(), steps, channels);
        let mut hs = vec![vec![0.0; units]];
        let mut cs = vec![vec![0.0; units]];
        let mut gates = Vec::with_capacity(steps);
        for t in 0..steps {
            let h_prev = &hs[t];
            let c_prev = &cs[t];
            // pre-activations for all four gates
            let mut pre = b.data().to_vec();
            for (r, p) in pre.iter_mut().enumerate() {
                *p += pre_x[t * rows + r] + dot(w_hh.row(r), h_prev);
            }
            let mut gate = vec![0.0; LSTM_GATES * units];
            let mut h = vec![0.0; units];
            let mut c = vec![0.0; units];
            for u in 0..units {
                let i = sigmoid(pre[u]);
                let f = sigmoid(pre[units + u]);
                let g = pre[2 * units + u].tanh();
                let o = sigmoid(pre[3 * units + u]);
                let c_new = f * c_prev[u] + i * g;
                gate[u] = i;
                gate[units + u] = f;
                gate[2 * units + u] = g;
                gate[3 * units + u] = o;
                c[u] = c_new;
                h[u] = o * c_new.tanh();
            }
            gates.push(gate);
            hs.push(h);
            cs.push(c);
        }
        Ok(RecurrentCache {
            input: input.clone(),
            hs,
            cs,
            gates,
            reset_hidden: vec![],
        })
    }

    fn lstm_backward(
        &self,
        rc: &RecurrentCache,
        grad_out: &Tensor,
        units: usize,
        returns_sequence: bool,
        grad_params: &mut [Tensor],
    ) -> Result<Tensor> {
        let channels = self.input_shape[1];
        let steps = self.input_shape[0];
        let w_ih = &self.params[0];
        let w_hh = &self.params[1];
        let (dw_ih, dw_hh, db) = split_three(grad_params);
        let mut dx = Tensor::zeros(rc.input.shape());
        let rows = LSTM_GATES * units;

        // reverse recurrence: pre-activation gradients per step
        let mut dpre_all = vec![0.0; steps * rows];
        let mut dh_next = vec![0.0; units];
        let mut dc_next = vec![0.0; units];
        for t in (0..steps).rev() {
            let gate = &rc.gates[t];
            let c = &rc.cs[t + 1];
            let c_prev = &rc.cs[t];
            let dpre = &mut dpre_all[t * rows..(t + 1) * rows];
            for u in 0..units {
                let ext = if returns_sequence {
                    grad_out.data()[t * units + u]
                } else if t == steps - 1 {
                    grad_out.data()[u]
                } else {
                    0.0
                };
                let dh = ext + dh_next[u];
                let i = gate[u];
                let f = gate[units + u];
                let g = gate[2 * units + u];
                let o = gate[3 * units + u];
                let tc = c[u].tanh();
                let d_o = dh * tc;
                let dc = dh * o * (1.0 - tc * tc) + dc_next[u];
                let d_f = dc * c_prev[u];
                let d_i = dc * g;
                let d_g = dc * i;
                dc_next[u] = dc * f;
                dpre[u] = d_i * i * (1.0 - i);
                dpre[units + u] = d_f * f * (1.0 - f);
                dpre[2 * units + u] = d_g * (1.0 - g * g);
                dpre[3 * units + u] = d_o * o * (1.0 - o);
            }
            dh_next.iter_mut().for_each(|v| *v = 0.0);
            for (r, &dp) in dpre.iter().enumerate() {
                if dp != 0.0 {
                    axpy(&mut dh_next, dp, w_hh.row(r));
                }
            }
        }
        // parameter/input gradients accumulate row-hot over all steps
        for r in 0..rows {
            let mut db_r = 0.0;
            for t in 0..steps {
                let dp = dpre_all[t * rows + r];
                if dp == 0.0 {
                    continue;
                }
                db_r += dp;
                axpy(
                    dw_ih.row_mut(r),
                    dp,
                    &rc.input.data()[t * channels..(t + 1) * channels],
                );
                axpy(dw_hh.row_mut(r), dp, &rc.hs[t]);
                axpy(
                    &mut dx.data_mut()[t * channels..(t + 1) * channels],
                    dp,
                    w_ih.row(r),
                );
            }
            db.data_mut()[r] += db_r;
        }
        Ok(dx)
    }

    fn gru_forward(&self, input: &Tensor, units: usize) -> Result<RecurrentCache> {
        let channels = self.input_shape[1];
        let steps = self.input_shape[0];
        let w_ih = &self.params[0];
        let w_hh = &self.params[1];
        let b = &self.params[2];
        let rows = GRU_GATES * units;
        let pre_x = input_projections(w_ih, input.data(), steps, channels);
        let mut hs = vec![vec![0.0; units]];
        let mut gates = Vec::with_capacity(steps);
        let mut reset_hidden = Vec::with_capacity(steps);
        for t in 0..steps {
            let h_prev = &hs[t];
            // update (z) and reset (r) gates
            let mut pre = vec![0.0; 2 * units];
            for (r, p) in pre.iter_mut().enumerate() {
                *p = b.data()[r] + pre_x[t * rows + r] + dot(w_hh.row(r), h_prev);
            }
            let mut gate = vec![0.0; GRU_GATES * units];
            let mut rh = vec![0.0; units];
            for u in 0..units {
                let z = sigmoid(pre[u]);
                let r = sigmoid(pre[units + u]);
                gate[u] = z;
                gate[units + u] = r;
                rh[u] = r * h_prev[u];
            }
            // candidate uses the reset-gated hidden state
            let mut h = vec![0.0; units];
            for u in 0..units {
                let row = 2 * units + u;
                let pre_c = b.data()[row] + pre_x[t * rows + row] + dot(w_hh.row(row), &rh);
                let c = pre_c.tanh();
                gate[2 * units + u] = c;
                h[u] = (1.0 - gate[u]) * h_prev[u] + gate[u] * c;
            }
            gates.push(gate);
            reset_hidden.push(rh);
            hs.push(h);
        }
        Ok(RecurrentCache {
            input: input.clone(),
            hs,
            cs: vec![],
            gates,
            reset_hidden,
        })
    }

    fn gru_backward(
        &self,
        rc: &RecurrentCache,
        grad_out: &Tensor,
        units: usize,
        returns_sequence: bool,
        grad_params: &mut [Tensor],
    ) -> Result<Tensor> {
        let channels = self.input_shape[1];
        let steps = self.input_shape[0];
        let w_ih = &self.params[0];
        let w_hh = &self.params[1];
        let (dw_ih, dw_hh, db) = split_three(grad_params);
        let mut dx = Tensor::zeros(rc.input.shape());
        let rows = GRU_GATES * units;

        // reverse recurrence: pre-activation gradients per step
        let mut dpre_all = vec![0.0; steps * rows];
        let mut dh_next = vec![0.0; units];
        let mut drh = vec![0.0; units];
        for t in (0..steps).rev() {
            let gate = &rc.gates[t];
            let h_prev = &rc.hs[t];
            let dpre = &mut dpre_all[t * rows..(t + 1) * rows];

            // candidate pre-activation gradients first (they feed r and h_prev)
            for u in 0..units {
                let ext = if returns_sequence {
                    grad_out.data()[t * units + u]
                } else if t == steps - 1 {
                    grad_out.data()[u]
                } else {
                    0.0
                };
                let dh = ext + dh_next[u];
                let z = gate[u];
                let c = gate[2 * units + u];
                let dz = dh * (c - h_prev[u]);
                let dc = dh * z;
                dpre[u] = dz * z * (1.0 - z);
                dpre[2 * units + u] = dc * (1.0 - c * c);
                // direct convex-combination path into h_prev
                dh_next[u] = dh * (1.0 - z);
            }
            // candidate hidden path: drh = W_hh_c^T · dpre_c
            drh.iter_mut().for_each(|v| *v = 0.0);
            for u in 0..units {
                let dp = dpre[2 * units + u];
                if dp != 0.0 {
                    axpy(&mut drh, dp, w_hh.row(2 * units + u));
                }
            }
            for u in 0..units {
                let r = gate[units + u];
                let dr = drh[u] * h_prev[u];
                dpre[units + u] = dr * r * (1.0 - r);
                dh_next[u] += drh[u] * r;
            }
            // z and r gates feed h_prev through their hidden weights
            for u in 0..2 * units {
                let dp = dpre[u];
                if dp != 0.0 {
                    axpy(&mut dh_next, dp, w_hh.row(u));
                }
            }
        }
        // parameter/input gradients accumulate row-hot over all steps
        for row in 0..rows {
            let candidate = row >= 2 * units;
            let mut db_r = 0.0;
            for t in 0..steps {
                let dp = dpre_all[t * rows + row];
                if dp == 0.0 {
                    continue;
                }
                db_r += dp;
                axpy(
                    dw_ih.row_mut(row),
                    dp,
                    &rc.input.data()[t * channels..(t + 1) * channels],
                );
                let hidden_src: &[f64] = if candidate {
                    &rc.reset_hidden[t]
                } else {
                    &rc.hs[t]
                };
                axpy(dw_hh.row_mut(row), dp, hidden_src);
                axpy(
                    &mut dx.data_mut()[t * channels..(t + 1) * channels],
                    dp,
                    w_ih.row(row),
                );
            }
            db.data_mut()[row] += db_r;
        }
        Ok(dx)
    }
}

fn split_two(grads: &mut [Tensor]) -> (&mut Tensor, &mut Tensor) {
    let (a, rest) = grads.split_first_mut().expect("two gradient tensors");
    (a, &mut rest[0])
}

fn split_three(grads: &mut [Tensor]) -> (&mut Tensor, &mut Tensor, &mut Tensor) {
    let (a, rest) = grads.split_first_mut().expect("three gradient tensors");
    let (b, rest) = rest.split_first_mut().expect("three gradient tensors");
    (a, b, &mut rest[0])
}

/// `W_ih · x_t` for every step, accumulated row-hot so each weight row is
/// read once per sequence instead of once per step.
fn input_projections(w_ih: &Tensor, input: &[f64], steps: usize, channels: usize) -> Vec<f64> {
    let rows = w_ih.shape()[0];
    let mut pre_x = vec![0.0; steps * rows];
    for r in 0..rows {
        let w_row = w_ih.row(r);
        for t in 0..steps {
            pre_x[t * rows + r] = dot(w_row, &input[t * channels..(t + 1) * channels]);
        }
    }
    pre_x
}

fn sequence_dims(shape: &[usize]) -> Result<(usize, usize)> {
    if shape.len() != 2 {
        return Err(Error::Shape {
            expected: "[steps, channels]".into(),
            actual: format!("{shape:?}"),
        });
    }
    Ok((shape[0], shape[1]))
}

fn recurrent_params(gates: usize, units: usize, channels: usize) -> Vec<Tensor> {
    vec![
        Tensor::zeros(&[gates * units, channels]),
        Tensor::zeros(&[gates * units, units]),
        Tensor::zeros(&[gates * units]),
    ]
}

fn recurrent_output(steps: usize, units: usize, returns_sequence: bool) -> Vec<usize> {
    if returns_sequence {
        vec![steps, units]
    } else {
        vec![units]
    }
}

fn emit_recurrent(hs: &[Vec<f64>], units: usize, returns_sequence: bool) -> Tensor {
    if returns_sequence {
        let steps = hs.len() - 1;
        let mut out = Tensor::zeros(&[steps, units]);
        for t in 0..steps {
            out.row_mut(t).copy_from_slice(&hs[t + 1]);
        }
        out
    } else {
        Tensor::from_vec(&[units], hs.last().expect("at least h_0").clone())
            .expect("length matches units")
    }
}
