//! Minimal dense-tensor deep-learning engine: layers with analytic
//! backpropagation (through time for the recurrent kinds), MSE loss, and
//! Adam, sized for training on a hundred-odd samples.

mod adam;
mod io;
mod layer;
mod math;
mod net;
mod tensor;
mod train;

#[cfg(test)]
pub(crate) mod testutil;

pub use adam::AdamState;
pub use io::{load_net, net_from_str, net_to_string, save_net};
pub use layer::{Cache, Layer, LayerSpec};
pub use net::Net;
pub use tensor::Tensor;
pub use train::{predict, train, TrainConfig, TrainOutcome};
