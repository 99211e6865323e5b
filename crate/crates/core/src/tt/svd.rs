//! TT-SVD, separation ranks and rounding.

use nalgebra::DMatrix;

use super::orth::{right_step, row_major};
use super::{Orth, TtCore, TtTensor};
use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, svd, truncation_rank};
use crate::tensor::DenseTensor;

/// Truncation budget for TT-SVD and rounding: a relative Frobenius tolerance and
/// optional per-bond rank caps. Both are enforced.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Truncation {
    eps: f64,
    max_ranks: Option<Vec<usize>>,
}

impl Truncation {
    /// No truncation beyond dropping numerically zero singular values.
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn eps(eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::invalid(format!("eps must be finite and >= 0, got {eps}")));
        }
        Ok(Truncation { eps, max_ranks: None })
    }

    pub fn ranks(max_ranks: Vec<usize>) -> Result<Self> {
        Self::exact().with_max_ranks(max_ranks)
    }

    pub fn with_max_ranks(mut self, max_ranks: Vec<usize>) -> Result<Self> {
        if let Some(b) = max_ranks.iter().position(|&r| r == 0) {
            return Err(Error::invalid(format!("max rank for bond {b} must be >= 1")));
        }
        self.max_ranks = Some(max_ranks);
        Ok(self)
    }

    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    pub fn max_ranks(&self) -> Option<&[usize]> {
        self.max_ranks.as_deref()
    }

    fn check_order(&self, order: usize) -> Result<()> {
        match &self.max_ranks {
            Some(r) if r.len() + 1 != order => Err(Error::invalid(format!(
                "an order-{order} tensor has {} bonds, got {} max ranks",
                order.saturating_sub(1),
                r.len()
            ))),
            _ => Ok(()),
        }
    }

    fn cap(&self, bond: usize) -> Option<usize> {
        self.max_ranks.as_ref().map(|r| r[bond])
    }

    /// Per-split squared threshold `(eps^2 / (N - 1)) ||x||^2`.
    fn delta2(&self, order: usize, norm: f64) -> f64 {
        if order < 2 {
            return 0.0;
        }
        self.eps * self.eps / (order - 1) as f64 * norm * norm
    }
}

impl TtTensor {
    /// TT-SVD: sequential truncated SVDs of the prefix unfoldings. Every core but the
    /// last is left-orthogonal. The zero tensor maps to bonds of 1 with zero cores.
    pub fn from_dense(x: &DenseTensor, spec: &Truncation) -> Result<TtTensor> {
        let dims = x.dims().to_vec();
        let order = dims.len();
        if order == 0 {
            return Err(Error::invalid("TT-SVD needs a tensor of order >= 1"));
        }
        spec.check_order(order)?;
        let norm = x.frobenius_norm();
        if norm == 0.0 {
            let cores = dims.iter().map(|&d| DenseTensor::zeros(&[1, d, 1])).collect::<Result<Vec<_>>>()?;
            return TtTensor::new(cores);
        }
        let delta2 = spec.delta2(order, norm);
        let mut cores = Vec::with_capacity(order);
        let mut rank = 1;
        let mut rest = x.data().to_vec();
        for (k, &d) in dims[..order - 1].iter().enumerate() {
            let rows = rank * d;
            let cols = rest.len() / rows;
            let f = svd(DMatrix::from_row_slice(rows, cols, &rest));
            let r = truncation_rank(f.s.as_slice(), delta2, spec.cap(k));
            let u = f.u.columns(0, r).into_owned();
            cores.push(TtCore::new(DenseTensor::new(&[rank, d, r], row_major(&u))?)?.with_orth(Orth::Left));
            let mut sv = f.vt.rows(0, r).into_owned();
            for (j, mut row) in sv.row_iter_mut().enumerate() {
                row *= f.s[j];
            }
            rest = row_major(&sv);
            rank = r;
        }
        cores.push(TtCore::new(DenseTensor::new(&[rank, dims[order - 1], 1], rest)?)?);
        TtTensor::from_cores(cores)
    }

    /// Rounding: a right-to-left QR sweep followed by a left-to-right truncated SVD
    /// sweep under the same per-split budget as TT-SVD.
    pub fn round(&self, spec: &Truncation) -> Result<TtTensor> {
        let order = self.order();
        spec.check_order(order)?;
        if order == 1 {
            return Ok(self.clone());
        }
        let mut cores = self.cores().to_vec();
        for n in (1..order).rev() {
            right_step(&mut cores, n)?;
        }
        let norm = cores[0].tensor().frobenius_norm();
        if norm == 0.0 {
            let zeros = self.dims().iter().map(|&d| DenseTensor::zeros(&[1, d, 1])).collect::<Result<Vec<_>>>()?;
            return TtTensor::new(zeros);
        }
        let delta2 = spec.delta2(order, norm);
        for k in 0..order - 1 {
            let (rl, d) = (cores[k].rank_left(), cores[k].size());
            let f = svd(cores[k].left_unfolding());
            let r = truncation_rank(f.s.as_slice(), delta2, spec.cap(k));
            let u = f.u.columns(0, r).into_owned();
            cores[k] = TtCore::new(DenseTensor::new(&[rl, d, r], row_major(&u))?)?.with_orth(Orth::Left);
            let mut sv = f.vt.rows(0, r).into_owned();
            for (j, mut row) in sv.row_iter_mut().enumerate() {
                row *= f.s[j];
            }
            let next = &cores[k + 1];
            let (d2, rr2) = (next.size(), next.rank_right());
            let m = sv * next.right_unfolding();
            cores[k + 1] = TtCore::new(DenseTensor::new(&[r, d2, rr2], row_major(&m))?)?;
        }
        TtTensor::from_cores(cores)
    }
}

/// Numerical ranks of the prefix unfoldings `X_([1]) .. X_([N-1])`.
/// The zero tensor has separation rank 0 at every split.
pub fn separation_ranks(x: &DenseTensor) -> Vec<usize> {
    let dims = x.dims();
    (1..dims.len())
        .map(|n| {
            let rows: usize = dims[..n].iter().product();
            let m = DMatrix::from_row_slice(rows, x.len() / rows, x.data());
            numerical_rank(m.singular_values().as_slice())
        })
        .collect()
}
