//! Named deep architectures and the tabular-to-sequence encoding.
//!
//! The nine scalar inputs are fed to the convolutional/recurrent stacks as a
//! length-9 single-channel sequence in feature order. Convolutions use
//! width-3 kernels with 64 filters; recurrent layers use 50 units, return
//! full sequences between recurrent layers, and the last recurrent layer
//! feeds its final hidden state into a linear dense(1) head. ReLU applies
//! after convolutions only; recurrent gates keep their sigmoid/tanh
//! nonlinearities.

use crate::data::N_FEATURES;
use crate::error::{Error, Result};
use crate::nn::{LayerSpec, Tensor};

/// Number of units in every recurrent layer.
pub const RECURRENT_UNITS: usize = 50;
/// Number of convolution filters.
pub const CONV_FILTERS: usize = 64;
/// Convolution kernel width.
pub const CONV_KERNEL: usize = 3;

/// The six catalog architectures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArchName {
    Lstm,
    Cnn,
    Gru,
    LstmGru,
    CnnLstm,
    CnnGru,
}

impl ArchName {
    pub const ALL: [ArchName; 6] = [
        ArchName::Lstm,
        ArchName::Cnn,
        ArchName::Gru,
        ArchName::LstmGru,
        ArchName::CnnLstm,
        ArchName::CnnGru,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ArchName::Lstm => "lstm",
            ArchName::Cnn => "cnn",
            ArchName::Gru => "gru",
            ArchName::LstmGru => "lstm-gru",
            ArchName::CnnLstm => "cnn-lstm",
            ArchName::CnnGru => "cnn-gru",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token.to_ascii_lowercase().as_str() {
            "lstm" => Ok(ArchName::Lstm),
            "cnn" => Ok(ArchName::Cnn),
            "gru" => Ok(ArchName::Gru),
            "lstm-gru" => Ok(ArchName::LstmGru),
            "cnn-lstm" => Ok(ArchName::CnnLstm),
            "cnn-gru" => Ok(ArchName::CnnGru),
            other => Err(Error::Argument(format!("unknown architecture '{other}'"))),
        }
    }
}

/// An architecture name together with its full layer program, always ending
/// in the dense(1) head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchitectureSpec {
    pub name: ArchName,
    pub layers: Vec<LayerSpec>,
}

/// Encodes a standardized feature vector as a `[9, 1]` sequence: step `t`
/// carries feature `t`.
pub fn encode_sequence(features: &[f64]) -> Result<Tensor> {
    if features.len() != N_FEATURES {
        return Err(Error::Shape {
            expected: format!("{N_FEATURES} features"),
            actual: format!("{}", features.len()),
        });
    }
    if features.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("features must be finite".into()));
    }
    Tensor::from_vec(&[N_FEATURES, 1], features.to_vec())
}

fn lstm(returns_sequence: bool) -> LayerSpec {
    LayerSpec::Lstm {
        units: RECURRENT_UNITS,
        returns_sequence,
    }
}

fn gru(returns_sequence: bool) -> LayerSpec {
    LayerSpec::Gru {
        units: RECURRENT_UNITS,
        returns_sequence,
    }
}

fn conv() -> LayerSpec {
    LayerSpec::Conv1d {
        filters: CONV_FILTERS,
        kernel: CONV_KERNEL,
    }
}

const HEAD: LayerSpec = LayerSpec::Dense { units: 1 };

/// Builds a catalog architecture.
pub fn build_architecture(name: ArchName) -> ArchitectureSpec {
    let layers = match name {
        ArchName::Lstm => vec![lstm(true), lstm(true), lstm(false), HEAD],
        ArchName::Gru => vec![gru(true), gru(true), gru(false), HEAD],
        ArchName::Cnn => vec![
            conv(),
            LayerSpec::Relu,
            conv(),
            LayerSpec::Relu,
            conv(),
            LayerSpec::Relu,
            HEAD,
        ],
        ArchName::LstmGru => vec![lstm(true), lstm(true), gru(false), HEAD],
        ArchName::CnnLstm => vec![conv(), LayerSpec::Relu, lstm(true), lstm(false), HEAD],
        ArchName::CnnGru => vec![conv(), LayerSpec::Relu, gru(true), gru(false), HEAD],
    };
    ArchitectureSpec { name, layers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{Net, LayerSpec};

    #[test]
    fn encode_layout_and_round_trip() {
        let v: Vec<f64> = (1..=9).map(|i| i as f64).collect();
        let t = encode_sequence(&v).unwrap();
        assert_eq!(t.shape(), &[9, 1]);
        assert_eq!(t.data(), v.as_slice());
        assert!(encode_sequence(&[0.0; 9]).unwrap().data().iter().all(|&x| x == 0.0));
        assert!(encode_sequence(&[0.0; 8]).is_err());
        assert!(encode_sequence(&[f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn cnn_gru_layer_order() {
        let arch = build_architecture(ArchName::CnnGru);
        assert!(matches!(arch.layers[0], LayerSpec::Conv1d { .. }));
        assert!(matches!(arch.layers[1], LayerSpec::Relu));
        assert!(matches!(arch.layers[2], LayerSpec::Gru { returns_sequence: true, .. }));
        assert!(matches!(arch.layers[3], LayerSpec::Gru { returns_sequence: false, .. }));
        assert!(matches!(arch.layers[4], LayerSpec::Dense { units: 1 }));
    }

    #[test]
    fn lstm_gru_layer_kinds() {
        let arch = build_architecture(ArchName::LstmGru);
        let kinds: Vec<&str> = arch.layers.iter().map(LayerSpec::name).collect();
        assert_eq!(kinds, vec!["lstm", "lstm", "gru", "dense"]);
    }

    #[test]
    fn cnn_shape_trace() {
        let arch = build_architecture(ArchName::Cnn);
        let net = Net::new(&arch.layers, &[9, 1]).unwrap();
        let conv_steps: Vec<usize> = net
            .layers()
            .iter()
            .filter(|l| matches!(l.spec, LayerSpec::Conv1d { .. }))
            .map(|l| l.output_shape()[0])
            .collect();
        assert_eq!(conv_steps, vec![7, 5, 3]);
        assert_eq!(net.output_shape(), &[1]);
    }

    #[test]
    fn every_architecture_accepts_nine_features_and_ends_scalar() {
        for name in ArchName::ALL {
            let arch = build_architecture(name);
            assert!(matches!(arch.layers.last(), Some(LayerSpec::Dense { units: 1 })));
            let net = Net::new(&arch.layers, &[9, 1]).unwrap();
            assert_eq!(net.output_shape(), &[1], "{name:?}");
            let x = encode_sequence(&[0.3; 9]).unwrap();
            let y = net.forward(&x).unwrap().as_scalar().unwrap();
            assert_eq!(y, 0.0, "zero-parameter {name:?} must emit 0");
        }
    }

    #[test]
    fn parameter_counts_match_closed_forms() {
        // dense(u) on f inputs: u·f + u
        // conv1d(F, k) on C channels: F·C·k + F
        // lstm(u) on c channels: 4·(c·u + u² + u)
        // gru(u) on c channels: 3·(c·u + u² + u)
        let dense = |u: usize, f: usize| u * f + u;
        let conv1d = |filters: usize, k: usize, c: usize| filters * c * k + filters;
        let recurrent = |gates: usize, u: usize, c: usize| gates * (c * u + u * u + u);

        for name in ArchName::ALL {
            let arch = build_architecture(name);
            let net = Net::new(&arch.layers, &[9, 1]).unwrap();
            let mut channels = 1usize;
            let mut flat = 9usize;
            for layer in net.layers() {
                let expected = match layer.spec {
                    LayerSpec::Dense { units } => dense(units, flat),
                    LayerSpec::Conv1d { filters, kernel } => {
                        let count = conv1d(filters, kernel, channels);
                        channels = filters;
                        count
                    }
                    LayerSpec::Lstm { units, .. } => {
                        let count = recurrent(4, units, channels);
                        channels = units;
                        count
                    }
                    LayerSpec::Gru { units, .. } => {
                        let count = recurrent(3, units, channels);
                        channels = units;
                        count
                    }
                    LayerSpec::Relu => 0,
                };
                assert_eq!(layer.param_count(), expected, "{name:?} {:?}", layer.spec);
                flat = layer.output_shape().iter().product();
            }
        }
        // spot checks of the closed forms themselves
        assert_eq!(recurrent(3, 50, 64), 17_250); // gru(50) on 64 channels
        assert_eq!(recurrent(4, 50, 64), 23_000); // lstm(50) on 64 channels
        assert_eq!(recurrent(3, 50, 1), 7_800);
        assert_eq!(conv1d(64, 3, 1), 256);
    }

    #[test]
    fn reduced_width_stacks_pass_gradient_checks() {
        use crate::nn::testutil::check_net_gradients;
        // units 4, filters 4 keeps finite differences tractable
        let narrow = |layers: &[LayerSpec]| -> Vec<LayerSpec> {
            layers
                .iter()
                .map(|l| match *l {
                    LayerSpec::Dense { .. } => LayerSpec::Dense { units: 1 },
                    LayerSpec::Conv1d { kernel, .. } => LayerSpec::Conv1d { filters: 4, kernel },
                    LayerSpec::Lstm {
                        returns_sequence, ..
                    } => LayerSpec::Lstm {
                        units: 4,
                        returns_sequence,
                    },
                    LayerSpec::Gru {
                        returns_sequence, ..
                    } => LayerSpec::Gru {
                        units: 4,
                        returns_sequence,
                    },
                    LayerSpec::Relu => LayerSpec::Relu,
                })
                .collect()
        };
        for name in ArchName::ALL {
            let arch = build_architecture(name);
            let max = check_net_gradients(&narrow(&arch.layers), &[9, 1], 23);
            assert!(max < 1e-5, "{name:?} max rel err {max}");
        }
    }
}
