//! From-scratch neural-network stack: tensors, layers with manually derived
//! backward passes, Adam, model definitions, and the training loop.

pub mod tensor;

pub use tensor::{Scalar, Tensor};
