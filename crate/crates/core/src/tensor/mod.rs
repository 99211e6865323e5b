//! Dense tensors and the generalized multilinear products defined on them.

mod block;
mod dense;
mod ops;
mod shape;

pub use block::{BlockMatrix, BlockTensor3, StrongKron};
pub use dense::DenseTensor;
pub use ops::{
    contract, direct_sum, hadamard, kron, matricize, mode_product, mode_vec_product, outer,
    self_contraction, tucker, Unfolding, Variant,
};
pub use shape::Shape;

pub(crate) use ops::matmul_into;
