//! Partial contracted products and frame matrices.

use nalgebra::DMatrix;

use super::{matmul, TtTensor};
use crate::error::{Error, Result};
use crate::limits;
use crate::tensor::DenseTensor;

/// Which end of the chain a partial product starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl TtTensor {
    /// Partial contracted products.
    ///
    /// `Left, n`: the product of cores `0..n`, shape `I_0 x ... x I_{n-1} x R`.
    /// `Right, n`: the product of cores `n..N`, shape `R x I_n x ... x I_{N-1}`.
    /// `n = 0` on the left and `n = N` on the right give the scalar 1, and
    /// `left(n) • right(n)` reproduces the full tensor for every `n`.
    pub fn partial_product(&self, side: Side, n: usize) -> Result<DenseTensor> {
        let big_n = self.order();
        if n > big_n {
            return Err(Error::ModeOutOfRange { mode: n, order: big_n });
        }
        let dims = self.dims();
        match side {
            Side::Left => {
                if n == 0 {
                    return Ok(DenseTensor::scalar(1.0));
                }
                let (rows, cols, data) = self.left_chain(n)?;
                let mut shape = dims[..n].to_vec();
                shape.push(cols);
                debug_assert_eq!(rows * cols, data.len());
                DenseTensor::new(&shape, data)
            }
            Side::Right => {
                if n == big_n {
                    return Ok(DenseTensor::scalar(1.0));
                }
                let (rows, _, data) = self.right_chain(n)?;
                let mut shape = vec![rows];
                shape.extend_from_slice(&dims[n..]);
                DenseTensor::new(&shape, data)
            }
        }
    }

    /// `(I_0 ... I_{n-1}) x R` product of the first `n` cores, row-major.
    fn left_chain(&self, n: usize) -> Result<(usize, usize, Vec<f64>)> {
        if n > 0 {
            let r = self.core(n - 1).rank_right() as u128;
            limits::check_elements(limits::element_count(&self.dims()[..n]) * r)?;
        }
        let (mut rows, mut data) = (1usize, vec![1.0]);
        for core in &self.cores()[..n] {
            let (rl, i, rr) = (core.rank_left(), core.size(), core.rank_right());
            limits::check_elements(rows as u128 * (i * rr) as u128)?;
            data = matmul(&data, core.data(), rows, rl, i * rr);
            rows *= i;
        }
        let cols = if n == 0 { 1 } else { self.core(n - 1).rank_right() };
        Ok((rows, cols, data))
    }

    /// `R x (I_n ... I_{N-1})` product of cores `n..N`, row-major.
    fn right_chain(&self, n: usize) -> Result<(usize, usize, Vec<f64>)> {
        if n < self.order() {
            let r = self.core(n).rank_left() as u128;
            limits::check_elements(limits::element_count(&self.dims()[n..]) * r)?;
        }
        let (mut cols, mut data) = (1usize, vec![1.0]);
        for core in self.cores()[n..].iter().rev() {
            let (rl, i, rr) = (core.rank_left(), core.size(), core.rank_right());
            limits::check_elements((rl * i) as u128 * cols as u128)?;
            data = matmul(core.data(), &data, rl * i, rr, cols);
            cols *= i;
        }
        let rows = if n == self.order() { 1 } else { self.core(n).rank_left() };
        Ok((rows, cols, data))
    }

    /// `(I_0 ... I_{k-1}) x R_{k-1}` matrix of the cores left of core `k`
    /// (the transpose of the mode-`k` unfolding of `G^{<k}`); `1 x 1` for `k = 0`.
    pub fn left_interface(&self, k: usize) -> Result<DMatrix<f64>> {
        self.check_site(k)?;
        let (rows, cols, data) = self.left_chain(k)?;
        Ok(DMatrix::from_row_slice(rows, cols, &data))
    }

    /// `R_k x (I_{k+1} ... I_{N-1})` matrix of the cores right of core `k`
    /// (the mode-1 unfolding of `G^{>k}`); `1 x 1` for the last core.
    pub fn right_interface(&self, k: usize) -> Result<DMatrix<f64>> {
        self.check_site(k)?;
        let (rows, cols, data) = self.right_chain(k + 1)?;
        Ok(DMatrix::from_row_slice(rows, cols, &data))
    }

    fn check_site(&self, k: usize) -> Result<()> {
        if k >= self.order() {
            return Err(Error::ModeOutOfRange { mode: k, order: self.order() });
        }
        Ok(())
    }

    /// Frame matrix `X^{≠k} = L ⊗ I_{I_k} ⊗ R^T` with `vec(x) = X^{≠k} vec(G_k)`,
    /// where `L` and `R` are the left and right interfaces of core `k`.
    ///
    /// With `pair`, cores `k` and `k + 1` are extracted together and the identity
    /// factor becomes `I_{I_k I_{k+1}}`; the frame then acts on `vec(G_k • G_{k+1})`.
    pub fn frame_matrix(&self, k: usize, pair: bool) -> Result<DMatrix<f64>> {
        self.check_site(k)?;
        let last = if pair { k + 1 } else { k };
        if last >= self.order() {
            return Err(Error::invalid(format!(
                "pair frame at site {k} needs a core {last}, order is {}",
                self.order()
            )));
        }
        let dims = self.dims();
        let width = self.core(k).rank_left() * dims[k..=last].iter().product::<usize>() * self.core(last).rank_right();
        limits::check_elements(limits::element_count(&dims) * width as u128)?;
        let left = self.left_interface(k)?;
        let right = self.right_interface(last)?;
        let mid: usize = self.dims()[k..=last].iter().product();
        let (p, rl) = left.shape();
        let (rr, q) = right.shape();
        let (rows, cols) = (p * mid * q, rl * mid * rr);
        limits::check_elements(rows as u128 * cols as u128)?;
        let mut f = DMatrix::zeros(rows, cols);
        for pi in 0..p {
            for i in 0..mid {
                for qi in 0..q {
                    let row = (pi * mid + i) * q + qi;
                    for a in 0..rl {
                        let l = left[(pi, a)];
                        if l == 0.0 {
                            continue;
                        }
                        for b in 0..rr {
                            f[(row, (a * mid + i) * rr + b)] = l * right[(b, qi)];
                        }
                    }
                }
            }
        }
        Ok(f)
    }
}
