//! Matrix TT (MPO) format and TT arithmetic.
//!
//! Wherever two bond indices are merged into one, the first operand's index is the
//! slower one: `(r, r')` maps to `r * R' + r'`. The first operand is `x` in
//! addition and Hadamard products, the operator in matvec, and the bra in quadratic
//! and bilinear forms.

mod apply;
mod arith;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits;
use crate::tensor::{BlockMatrix, DenseTensor, StrongKron};

pub use apply::{
    apply, apply_core, local_bilinear_form, local_map_apply, quadratic_form, quadratic_form_by_core_matrices,
    quadratic_core_matrix,
};
pub use arith::{add, core_contraction, dot, dot_by_core_contractions, hadamard, norm, sub};

/// One order-4 core `R_left x I x J x R_right` (output mode `I`, input mode `J`).
#[derive(Clone, Debug, PartialEq)]
pub struct MttCore {
    data: DenseTensor,
}

impl MttCore {
    pub fn new(data: DenseTensor) -> Result<Self> {
        if data.order() != 4 {
            return Err(Error::shape(format!(
                "a matrix TT core must have order 4, got shape {:?}",
                data.dims()
            )));
        }
        Ok(MttCore { data })
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.data
    }

    pub fn data(&self) -> &[f64] {
        self.data.data()
    }

    pub fn rank_left(&self) -> usize {
        self.data.dims()[0]
    }

    pub fn rows(&self) -> usize {
        self.data.dims()[1]
    }

    pub fn cols(&self) -> usize {
        self.data.dims()[2]
    }

    pub fn rank_right(&self) -> usize {
        self.data.dims()[3]
    }

    /// Slice `A[:, i, j, :]`, an `R_left x R_right` matrix.
    pub fn slice(&self, i: usize, j: usize) -> DMatrix<f64> {
        let d = self.data.dims();
        let (ni, nj, rr) = (d[1], d[2], d[3]);
        let v = self.data.data();
        DMatrix::from_fn(d[0], rr, |a, b| v[((a * ni + i) * nj + j) * rr + b])
    }

    /// Block `A[r, :, :, s]`, an `I x J` matrix.
    pub fn block(&self, r: usize, s: usize) -> DMatrix<f64> {
        let d = self.data.dims();
        let (ni, nj, rr) = (d[1], d[2], d[3]);
        let v = self.data.data();
        DMatrix::from_fn(ni, nj, |i, j| v[((r * ni + i) * nj + j) * rr + s])
    }
}

/// A validated matrix TT representing an `(I_0 ... I_{N-1}) x (J_0 ... J_{N-1})`
/// matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TtMatrix {
    cores: Vec<MttCore>,
}

impl TtMatrix {
    pub fn new(cores: Vec<DenseTensor>) -> Result<Self> {
        let cores = cores.into_iter().map(MttCore::new).collect::<Result<Vec<_>>>()?;
        if cores.is_empty() {
            return Err(Error::invalid("a matrix TT needs at least one core"));
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
                return Err(Error::BondMismatch { bond: b, left: w[0].rank_right(), right: w[1].rank_left() });
            }
        }
        Ok(TtMatrix { cores })
    }

    /// Bond-1 operator `M_0 ⊗ ... ⊗ M_{N-1}`.
    pub fn from_kron_factors(factors: &[DMatrix<f64>]) -> Result<Self> {
        let cores = factors
            .iter()
            .map(|m| {
                let (i, j) = m.shape();
                DenseTensor::from_fn(&[1, i, j, 1], |ix| m[(ix[1], ix[2])])
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cores)
    }

    pub fn identity(dims: &[usize]) -> Result<Self> {
        let f: Vec<_> = dims.iter().map(|&d| DMatrix::identity(d, d)).collect();
        Self::from_kron_factors(&f)
    }

    pub fn order(&self) -> usize {
        self.cores.len()
    }

    pub fn row_dims(&self) -> Vec<usize> {
        self.cores.iter().map(MttCore::rows).collect()
    }

    pub fn col_dims(&self) -> Vec<usize> {
        self.cores.iter().map(MttCore::cols).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.cores[..self.cores.len() - 1].iter().map(MttCore::rank_right).collect()
    }

    pub fn cores(&self) -> &[MttCore] {
        &self.cores
    }

    pub fn core(&self, n: usize) -> &MttCore {
        &self.cores[n]
    }

    pub fn storage_bytes(&self) -> usize {
        self.cores.iter().map(|c| c.data.len() * std::mem::size_of::<f64>()).sum()
    }

    /// Entry `A[(i_0..i_{N-1}), (j_0..j_{N-1})]` as a product of slices.
    pub fn entry(&self, rows: &[usize], cols: &[usize]) -> Result<f64> {
        let n = self.order();
        for idx in [rows, cols] {
            if idx.len() != n {
                return Err(Error::IndexArity { expected: n, got: idx.len() });
            }
        }
        let mut acc = DMatrix::from_element(1, 1, 1.0);
        for (mode, core) in self.cores.iter().enumerate() {
            let (i, j) = (rows[mode], cols[mode]);
            if i >= core.rows() {
                return Err(Error::IndexOutOfRange { mode, index: i, size: core.rows() });
            }
            if j >= core.cols() {
                return Err(Error::IndexOutOfRange { mode, index: j, size: core.cols() });
            }
            acc *= core.slice(i, j);
        }
        Ok(acc[(0, 0)])
    }

    fn check_dense(&self) -> Result<(usize, usize)> {
        let p = limits::element_count(&self.row_dims());
        let q = limits::element_count(&self.col_dims());
        limits::check_elements(p.saturating_mul(q))?;
        Ok((p as usize, q as usize))
    }

    /// Dense matrix by left-to-right contracted products.
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let (prows, pcols) = self.check_dense()?;
        // acc[p, q, r]: p over output modes so far, q over input modes so far
        let (mut p, mut q, mut r) = (1usize, 1usize, 1usize);
        let mut acc = vec![1.0];
        for core in &self.cores {
            let (ni, nj, rr) = (core.rows(), core.cols(), core.rank_right());
            let v = core.data();
            limits::check_elements((p * ni * q * nj) as u128 * rr as u128)?;
            let mut next = vec![0.0; p * ni * q * nj * rr];
            for pi in 0..p {
                for qi in 0..q {
                    for a in 0..r {
                        let c = acc[(pi * q + qi) * r + a];
                        if c == 0.0 {
                            continue;
                        }
                        for i in 0..ni {
                            for j in 0..nj {
                                let src = &v[((a * ni + i) * nj + j) * rr..][..rr];
                                let dst = (((pi * ni + i) * q + qi) * nj + j) * rr;
                                for (o, &s) in next[dst..dst + rr].iter_mut().zip(src) {
                                    *o += c * s;
                                }
                            }
                        }
                    }
                }
            }
            acc = next;
            p *= ni;
            q *= nj;
            r = rr;
        }
        Ok(DMatrix::from_row_slice(prows, pcols, &acc))
    }

    /// Dense matrix as the strong Kronecker product of the block matrices whose
    /// `(r, s)` block is `A[r, :, :, s]`.
    pub fn to_dense_strong_kron(&self) -> Result<DMatrix<f64>> {
        self.check_dense()?;
        let mut acc: Option<BlockMatrix> = None;
        for core in &self.cores {
            let (rl, rr) = (core.rank_left(), core.rank_right());
            let blocks = (0..rl * rr).map(|k| core.block(k / rr, k % rr)).collect();
            let g = BlockMatrix::new(rl, rr, blocks)?;
            acc = Some(match acc {
                None => g,
                Some(a) => a.strong_kron(&g)?,
            });
        }
        acc.expect("at least one core").to_dense()
    }

    /// Dense matrix as the ordered product of Kronecker factors
    /// `I_{J_0..J_{n-1}} ⊗ A_n([2]) ⊗ I_{I_{n+1}..I_{N-1}}`, where `A_n([2])` is the
    /// `(R_left I) x (J R_right)` unfolding of core `n`.
    pub fn to_dense_kron_factors(&self) -> Result<DMatrix<f64>> {
        self.check_dense()?;
        let (rows, cols) = (self.row_dims(), self.col_dims());
        let mut acc: Option<DMatrix<f64>> = None;
        for (n, core) in self.cores.iter().enumerate() {
            let left: usize = cols[..n].iter().product();
            let right: usize = rows[n + 1..].iter().product();
            let (rl, ni, nj, rr) = (core.rank_left(), core.rows(), core.cols(), core.rank_right());
            let (fr, fc) = (left * rl * ni * right, left * nj * rr * right);
            limits::check_elements(fr as u128 * fc as u128)?;
            let unf = DMatrix::from_row_slice(rl * ni, nj * rr, core.data());
            let f = DMatrix::<f64>::identity(left, left)
                .kronecker(&unf)
                .kronecker(&DMatrix::<f64>::identity(right, right));
            acc = Some(match acc {
                None => f,
                Some(a) => a * f,
            });
        }
        Ok(acc.expect("at least one core"))
    }
}
