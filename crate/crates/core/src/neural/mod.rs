//! A small from-scratch 1-D convolutional regression network.
//!
//! Layer recipe per block: same-padded convolution, batch normalisation,
//! ReLU, stride-4 pooling. A fully connected layer maps the flattened final
//! block to one output per input sample. Training is mini-batch Adam on the
//! mean squared error with global gradient-norm clipping. Everything is f64.

mod layers;
mod model;
mod optim;
mod tensor;

pub use layers::{
    mse_loss, relu_backward, relu_forward, BatchNorm, BnCache, BnGrads, Conv1d, ConvGrads, Dense,
    DenseGrads, Pool, PoolMode,
};
pub use model::{CnnConfig, CnnModel, ConvBlock, Gradients, TrainTrace};
pub use optim::{clip_gradients, global_norm, Adam};
pub use tensor::Tensor;
