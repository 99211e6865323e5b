//! QR-based orthogonalization sweeps.

use nalgebra::DMatrix;

use super::{Orth, TtCore, TtTensor};
use crate::error::{Error, Result};
use crate::linalg::qr_pos;
use crate::tensor::DenseTensor;

/// Target canonical form; `k` is the 0-based site left non-orthogonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthMode {
    /// Cores `0..k` left-orthogonal.
    LeftUpTo(usize),
    /// Cores `k+1..N` right-orthogonal.
    RightDownTo(usize),
    /// Both: mixed-canonical form at `k`.
    MixedAt(usize),
}

impl TtTensor {
    /// Brings `self` into the requested canonical form. Values are unchanged up to
    /// roundoff and bond ranks never grow.
    pub fn orthogonalize(&self, mode: OrthMode) -> Result<TtTensor> {
        let (k, left, right) = match mode {
            OrthMode::LeftUpTo(k) => (k, true, false),
            OrthMode::RightDownTo(k) => (k, false, true),
            OrthMode::MixedAt(k) => (k, true, true),
        };
        if k >= self.order() {
            return Err(Error::ModeOutOfRange { mode: k, order: self.order() });
        }
        let mut cores = self.cores().to_vec();
        if left {
            for n in 0..k {
                left_step(&mut cores, n)?;
            }
        }
        if right {
            for n in (k + 1..cores.len()).rev() {
                right_step(&mut cores, n)?;
            }
        }
        TtTensor::from_cores(cores)
    }
}

/// QR of core `n`, pushing `R` into core `n + 1`.
pub(super) fn left_step(cores: &mut [TtCore], n: usize) -> Result<()> {
    let (rl, i, _) = dims(&cores[n]);
    let (q, r) = qr_pos(cores[n].left_unfolding());
    let k = q.ncols();
    cores[n] = TtCore::new(DenseTensor::new(&[rl, i, k], row_major(&q))?)?.with_orth(Orth::Left);
    let next = &cores[n + 1];
    let (_, i2, rr2) = dims(next);
    let m = r * next.right_unfolding();
    cores[n + 1] = TtCore::new(DenseTensor::new(&[k, i2, rr2], row_major(&m))?)?;
    Ok(())
}

/// LQ of core `n` (via QR of its transpose), pushing `L` into core `n - 1`.
pub(super) fn right_step(cores: &mut [TtCore], n: usize) -> Result<()> {
    let (_, i, rr) = dims(&cores[n]);
    let (q, r) = qr_pos(cores[n].right_unfolding().transpose());
    let k = q.ncols();
    cores[n] = TtCore::new(DenseTensor::new(&[k, i, rr], row_major(&q.transpose()))?)?
        .with_orth(Orth::Right);
    let prev = &cores[n - 1];
    let (rl0, i0, _) = dims(prev);
    let m = prev.left_unfolding() * r.transpose();
    cores[n - 1] = TtCore::new(DenseTensor::new(&[rl0, i0, k], row_major(&m))?)?;
    Ok(())
}

fn dims(c: &TtCore) -> (usize, usize, usize) {
    (c.rank_left(), c.size(), c.rank_right())
}

pub(crate) fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}
