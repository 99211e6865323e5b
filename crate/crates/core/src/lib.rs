//! Tensor-train algebra on dense, TT (MPS) and matrix-TT (MPO) representations.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: dense N-way arrays, the multi-index linearization, the generalized
//!   Kronecker / Hadamard / outer / direct-sum products, mode products, contracted
//!   products, the Tucker operator, self-contraction and strong Kronecker products.
//! - [`tt`]: the TT format itself, TT-SVD, rounding, orthogonalization, partial
//!   contracted products and frame matrices.
//! - [`linops`]: the matrix TT format and TT arithmetic (addition, Hadamard product,
//!   inner products, operator application, quadratic forms, localized operators).
//! - [`oracle`]: loop-based dense reference implementations used to check everything
//!   above.
//! - [`io`]: the `.dnst`, `.ttv` and `.ttm` binary file formats.
//!
//! All indices, modes and core positions are 0-based. Flat offsets follow the
//! "last index fastest" rule: element `(i_1, ..., i_N)` of an `I_1 x ... x I_N` tensor
//! lives at `i_N + i_{N-1} I_N + ... + i_1 I_2 ... I_N`.

pub mod error;
pub mod io;
pub mod limits;
pub mod linops;
pub mod oracle;
pub mod random;
pub mod tensor;
pub mod tt;

pub(crate) mod linalg;

pub use error::{Error, Result};
pub use linops::{MttCore, TtMatrix};
pub use tensor::{BlockMatrix, BlockTensor3, DenseTensor, Shape, StrongKron, Unfolding, Variant};
pub use tt::{Orth, OrthMode, Side, Truncation, TtCore, TtTensor};
