//! The tensor-train (MPS) format.
//!
//! A TT tensor of order `N` is a chain of order-3 cores `G_n` of shape
//! `R_{n-1} x I_n x R_n` with `R_{-1} = R_N = 1` at the boundaries (0-based cores
//! `0..N`). Entry `x(i_0, ..., i_{N-1})` is the matrix product of the lateral slices
//! `G_0[:, i_0, :] ... G_{N-1}[:, i_{N-1}, :]`.

mod frame;
mod orth;
mod svd;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits;
use crate::tensor::matmul_into;
use crate::tensor::{BlockMatrix, DenseTensor, StrongKron};

pub use frame::Side;
pub use orth::OrthMode;
pub use svd::{separation_ranks, Truncation};

/// Cached orthogonality state of a core. Advisory only: the predicates on
/// [`TtCore`] recompute it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orth {
    #[default]
    None,
    Left,
    Right,
}

/// One order-3 core `R_left x I x R_right`.
#[derive(Clone, Debug, PartialEq)]
pub struct TtCore {
    data: DenseTensor,
    orth: Orth,
}

impl TtCore {
    pub fn new(data: DenseTensor) -> Result<Self> {
        if data.order() != 3 {
            return Err(Error::shape(format!(
                "a TT core must have order 3, got shape {:?}",
                data.dims()
            )));
        }
        Ok(TtCore { data, orth: Orth::None })
    }

    pub fn from_values(r_left: usize, size: usize, r_right: usize, values: Vec<f64>) -> Result<Self> {
        Self::new(DenseTensor::new(&[r_left, size, r_right], values)?)
    }

    pub fn with_orth(mut self, orth: Orth) -> Self {
        self.orth = orth;
        self
    }

    pub fn orth(&self) -> Orth {
        self.orth
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.data
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.data
    }

    pub fn data(&self) -> &[f64] {
        self.data.data()
    }

    pub fn rank_left(&self) -> usize {
        self.data.dims()[0]
    }

    pub fn size(&self) -> usize {
        self.data.dims()[1]
    }

    pub fn rank_right(&self) -> usize {
        self.data.dims()[2]
    }

    /// Lateral slice `G[:, i, :]`.
    pub fn slice(&self, i: usize) -> DMatrix<f64> {
        let (rl, n, rr) = (self.rank_left(), self.size(), self.rank_right());
        let v = self.data.data();
        DMatrix::from_fn(rl, rr, |a, b| v[(a * n + i) * rr + b])
    }

    /// The `(R_left I) x R_right` reshape; equals `G_(3)^T`.
    pub fn left_unfolding(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rank_left() * self.size(), self.rank_right(), self.data.data())
    }

    /// The `R_left x (I R_right)` reshape `G_(1)`.
    pub fn right_unfolding(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rank_left(), self.size() * self.rank_right(), self.data.data())
    }

    /// `G_(3) G_(3)^T = I` within `tol` (max-abs).
    pub fn is_left_orthogonal(&self, tol: f64) -> bool {
        let l = self.left_unfolding();
        gram_is_identity(&(l.transpose() * l), tol)
    }

    /// `G_(1) G_(1)^T = I` within `tol` (max-abs).
    pub fn is_right_orthogonal(&self, tol: f64) -> bool {
        let r = self.right_unfolding();
        gram_is_identity(&(&r * r.transpose()), tol)
    }

    /// Every mode unfolding has orthonormal rows.
    pub fn is_all_orthogonal(&self, tol: f64) -> bool {
        if !self.is_right_orthogonal(tol) || !self.is_left_orthogonal(tol) {
            return false;
        }
        let (rl, n, rr) = (self.rank_left(), self.size(), self.rank_right());
        let v = self.data.data();
        let m = DMatrix::from_fn(n, rl * rr, |i, c| v[((c / rr) * n + i) * rr + c % rr]);
        gram_is_identity(&(&m * m.transpose()), tol)
    }
}

fn gram_is_identity(g: &DMatrix<f64>, tol: f64) -> bool {
    g.iter()
        .enumerate()
        .all(|(k, &v)| (v - if k % g.nrows() == k / g.nrows() { 1.0 } else { 0.0 }).abs() <= tol)
}

/// A validated tensor train.
#[derive(Clone, Debug, PartialEq)]
pub struct TtTensor {
    cores: Vec<TtCore>,
}

impl TtTensor {
    /// Validates a chain of order-3 cores. Orthogonality flags start at `None`.
    pub fn new(cores: Vec<DenseTensor>) -> Result<Self> {
        let cores = cores.into_iter().map(TtCore::new).collect::<Result<Vec<_>>>()?;
        Self::from_cores(cores)
    }

    /// Validates a chain of cores, keeping their flags.
    pub fn from_cores(cores: Vec<TtCore>) -> Result<Self> {
        if cores.is_empty() {
            return Err(Error::invalid("a TT tensor needs at least one core"));
        }
        if cores[0].rank_left() != 1 {
            return Err(Error::BoundaryRank { side: "left", rank: cores[0].rank_left() });
        }
        let last = cores[cores.len() - 1].rank_right();
        if last != 1 {
            return Err(Error::BoundaryRank { side: "right", rank: last });
        }
        for (b, w) in cores.windows(2).enumerate() {
            if w[0].rank_right() != w[1].rank_left() {
                return Err(Error::BondMismatch {
                    bond: b,
                    left: w[0].rank_right(),
                    right: w[1].rank_left(),
                });
            }
        }
        Ok(TtTensor { cores })
    }

    /// Bond-1 TT whose cores hold the given vectors.
    pub fn rank_one(vectors: &[Vec<f64>]) -> Result<Self> {
        let cores = vectors
            .iter()
            .map(|v| DenseTensor::new(&[1, v.len(), 1], v.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(cores)
    }

    /// Bond-1 TT of the all-ones tensor.
    pub fn ones(dims: &[usize]) -> Result<Self> {
        Self::rank_one(&dims.iter().map(|&d| vec![1.0; d]).collect::<Vec<_>>())
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.cores.iter().map(TtCore::size).collect()
    }

    /// The `N - 1` interior bond ranks.
    pub fn ranks(&self) -> Vec<usize> {
        self.cores[..self.cores.len() - 1].iter().map(TtCore::rank_right).collect()
    }

    pub fn max_rank(&self) -> usize {
        self.ranks().into_iter().max().unwrap_or(1)
    }

    pub fn cores(&self) -> &[TtCore] {
        &self.cores
    }

    pub fn core(&self, n: usize) -> &TtCore {
        &self.cores[n]
    }

    pub fn into_cores(self) -> Vec<TtCore> {
        self.cores
    }

    pub fn orth_flags(&self) -> Vec<Orth> {
        self.cores.iter().map(TtCore::orth).collect()
    }

    /// Bytes held by the core payloads.
    pub fn storage_bytes(&self) -> usize {
        self.cores.iter().map(|c| c.data.len() * std::mem::size_of::<f64>()).sum()
    }

    /// Replaces core `n`, clearing its flag. Fails if the bonds no longer match.
    pub fn with_core(&self, n: usize, core: DenseTensor) -> Result<Self> {
        if n >= self.order() {
            return Err(Error::ModeOutOfRange { mode: n, order: self.order() });
        }
        let mut cores = self.cores.clone();
        cores[n] = TtCore::new(core)?;
        Self::from_cores(cores)
    }

    /// Product of lateral slices at `idx`.
    pub fn entry(&self, idx: &[usize]) -> Result<f64> {
        if idx.len() != self.order() {
            return Err(Error::IndexArity { expected: self.order(), got: idx.len() });
        }
        let mut row = vec![1.0];
        for (mode, (core, &i)) in self.cores.iter().zip(idx).enumerate() {
            if i >= core.size() {
                return Err(Error::IndexOutOfRange { mode, index: i, size: core.size() });
            }
            let (n, rr) = (core.size(), core.rank_right());
            let v = core.data();
            let mut next = vec![0.0; rr];
            for (a, &c) in row.iter().enumerate() {
                let s = &v[(a * n + i) * rr..(a * n + i + 1) * rr];
                for (o, &g) in next.iter_mut().zip(s) {
                    *o += c * g;
                }
            }
            row = next;
        }
        Ok(row[0])
    }

    /// Dense tensor by left-to-right contracted products.
    pub fn to_dense(&self) -> Result<DenseTensor> {
        let full = self.partial_product(Side::Left, self.order())?;
        full.into_reshaped(&self.dims())
    }

    /// `vec(x)` as the strong Kronecker product of the block matrices whose
    /// `(r, s)` block is the fiber `G_n[r, :, s]`.
    pub fn vectorize_strong_kron(&self) -> Result<Vec<f64>> {
        limits::check_elements(limits::element_count(&self.dims()))?;
        let mut acc: Option<BlockMatrix> = None;
        for core in &self.cores {
            let (rl, n, rr) = (core.rank_left(), core.size(), core.rank_right());
            let v = core.data();
            let mut blocks = Vec::with_capacity(rl * rr);
            for a in 0..rl {
                for b in 0..rr {
                    blocks.push(DMatrix::from_fn(n, 1, |i, _| v[(a * n + i) * rr + b]));
                }
            }
            let g = BlockMatrix::new(rl, rr, blocks)?;
            acc = Some(match acc {
                None => g,
                Some(a) => a.strong_kron(&g)?,
            });
        }
        let m = acc.expect("at least one core").to_dense()?;
        Ok(m.as_slice().to_vec())
    }

    /// `c * x`: only the first core is scaled.
    pub fn scale(&self, c: f64) -> Self {
        let mut cores = self.cores.clone();
        let orth = if c.abs() == 1.0 { cores[0].orth } else { Orth::None };
        cores[0] = TtCore { data: cores[0].data.scaled(c), orth };
        TtTensor { cores }
    }

    /// Cores `0..k` left-orthogonal and cores `k+1..` right-orthogonal, within `tol`.
    pub fn is_mixed_canonical(&self, k: usize, tol: f64) -> bool {
        k < self.order()
            && self.cores[..k].iter().all(|c| c.is_left_orthogonal(tol))
            && self.cores[k + 1..].iter().all(|c| c.is_right_orthogonal(tol))
    }
}

/// `(m x k) * (k x n)` row-major product into a fresh buffer.
pub(crate) fn matmul(a: &[f64], b: &[f64], m: usize, k: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * n];
    matmul_into(a, b, m, k, n, &mut out);
    out
}
