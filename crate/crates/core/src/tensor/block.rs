//! Block matrices and block tensors, and the strong Kronecker product between them.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits;
use crate::tensor::dense::DenseTensor;
use crate::tensor::ops::{kron, Variant};

/// Strong Kronecker product `A |⊗| B`: block `(r1, r3)` of the result is
/// `sum_{r2} A[r1, r2] ⊗ B[r2, r3]`.
pub trait StrongKron: Sized {
    fn strong_kron(&self, rhs: &Self) -> Result<Self>;
}

/// An `R1 x R2` grid of equally sized dense matrix blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    block_rows: usize,
    block_cols: usize,
    block_shape: (usize, usize),
    blocks: Vec<DMatrix<f64>>,
}

impl BlockMatrix {
    /// `blocks` is the grid in row-major order.
    pub fn new(block_rows: usize, block_cols: usize, blocks: Vec<DMatrix<f64>>) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || blocks.len() != block_rows * block_cols {
            return Err(Error::shape(format!(
                "a {block_rows}x{block_cols} block grid needs {} blocks, got {}",
                block_rows * block_cols,
                blocks.len()
            )));
        }
        let block_shape = blocks[0].shape();
        if block_shape.0 == 0 || block_shape.1 == 0 {
            return Err(Error::shape("blocks must be nonempty"));
        }
        if let Some((k, b)) = blocks.iter().enumerate().find(|(_, b)| b.shape() != block_shape) {
            return Err(Error::shape(format!(
                "block {k} has shape {:?}, expected {:?}",
                b.shape(),
                block_shape
            )));
        }
        Ok(BlockMatrix { block_rows, block_cols, block_shape, blocks })
    }

    /// Partitions a dense matrix into a `block_rows x block_cols` grid.
    pub fn from_dense(m: &DMatrix<f64>, block_rows: usize, block_cols: usize) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || !m.nrows().is_multiple_of(block_rows) || !m.ncols().is_multiple_of(block_cols) {
            return Err(Error::shape(format!(
                "a {}x{} matrix cannot be split into a {block_rows}x{block_cols} grid",
                m.nrows(),
                m.ncols()
            )));
        }
        let (bi, bj) = (m.nrows() / block_rows, m.ncols() / block_cols);
        let mut blocks = Vec::with_capacity(block_rows * block_cols);
        for r in 0..block_rows {
            for c in 0..block_cols {
                blocks.push(m.view((r * bi, c * bj), (bi, bj)).into_owned());
            }
        }
        Self::new(block_rows, block_cols, blocks)
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_shape(&self) -> (usize, usize) {
        self.block_shape
    }

    pub fn block(&self, r: usize, c: usize) -> &DMatrix<f64> {
        &self.blocks[r * self.block_cols + c]
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let (bi, bj) = self.block_shape;
        let (rows, cols) = (self.block_rows * bi, self.block_cols * bj);
        limits::check_elements(rows as u128 * cols as u128)?;
        let mut m = DMatrix::zeros(rows, cols);
        for r in 0..self.block_rows {
            for c in 0..self.block_cols {
                m.view_mut((r * bi, c * bj), (bi, bj)).copy_from(self.block(r, c));
            }
        }
        Ok(m)
    }
}

impl StrongKron for BlockMatrix {
    fn strong_kron(&self, rhs: &Self) -> Result<Self> {
        if self.block_cols != rhs.block_rows {
            return Err(Error::shape(format!(
                "strong_kron: left grid has {} block columns, right grid has {} block rows",
                self.block_cols, rhs.block_rows
            )));
        }
        let (bi, bj) = (self.block_shape.0 * rhs.block_shape.0, self.block_shape.1 * rhs.block_shape.1);
        limits::check_elements(
            (self.block_rows * rhs.block_cols) as u128 * bi as u128 * bj as u128,
        )?;
        let mut blocks = Vec::with_capacity(self.block_rows * rhs.block_cols);
        for r1 in 0..self.block_rows {
            for r3 in 0..rhs.block_cols {
                let mut acc = DMatrix::zeros(bi, bj);
                for r2 in 0..self.block_cols {
                    acc += self.block(r1, r2).kronecker(rhs.block(r2, r3));
                }
                blocks.push(acc);
            }
        }
        Self::new(self.block_rows, rhs.block_cols, blocks)
    }
}

/// An `R1 x R2` grid of equally sized order-3 tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTensor3 {
    block_rows: usize,
    block_cols: usize,
    block_shape: [usize; 3],
    blocks: Vec<DenseTensor>,
}

impl BlockTensor3 {
    pub fn new(block_rows: usize, block_cols: usize, blocks: Vec<DenseTensor>) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || blocks.len() != block_rows * block_cols {
            return Err(Error::shape(format!(
                "a {block_rows}x{block_cols} block grid needs {} blocks, got {}",
                block_rows * block_cols,
                blocks.len()
            )));
        }
        let shape: [usize; 3] = blocks[0]
            .dims()
            .try_into()
            .map_err(|_| Error::shape("block tensors must have order 3"))?;
        if let Some((k, b)) = blocks.iter().enumerate().find(|(_, b)| b.dims() != shape) {
            return Err(Error::shape(format!(
                "block {k} has shape {:?}, expected {:?}",
                b.dims(),
                shape
            )));
        }
        Ok(BlockTensor3 { block_rows, block_cols, block_shape: shape, blocks })
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_shape(&self) -> [usize; 3] {
        self.block_shape
    }

    pub fn block(&self, r: usize, c: usize) -> &DenseTensor {
        &self.blocks[r * self.block_cols + c]
    }

    /// Assembles the `R1 I1 x R2 I2 x I3` tensor.
    pub fn to_dense(&self) -> Result<DenseTensor> {
        let [i1, i2, i3] = self.block_shape;
        let dims = [self.block_rows * i1, self.block_cols * i2, i3];
        let mut out = DenseTensor::zeros(&dims)?;
        let data = out.data_mut();
        for r in 0..self.block_rows {
            for c in 0..self.block_cols {
                let b = self.block(r, c).data();
                for a in 0..i1 {
                    for j in 0..i2 {
                        let dst = ((r * i1 + a) * dims[1] + c * i2 + j) * i3;
                        data[dst..dst + i3].copy_from_slice(&b[(a * i2 + j) * i3..(a * i2 + j + 1) * i3]);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl StrongKron for BlockTensor3 {
    fn strong_kron(&self, rhs: &Self) -> Result<Self> {
        if self.block_cols != rhs.block_rows {
            return Err(Error::shape(format!(
                "strong_kron: left grid has {} block columns, right grid has {} block rows",
                self.block_cols, rhs.block_rows
            )));
        }
        let mut blocks = Vec::with_capacity(self.block_rows * rhs.block_cols);
        for r1 in 0..self.block_rows {
            for r3 in 0..rhs.block_cols {
                let mut acc: Option<DenseTensor> = None;
                for r2 in 0..self.block_cols {
                    let term = kron(self.block(r1, r2), rhs.block(r2, r3), Variant::Full)?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                blocks.push(acc.expect("block grid is nonempty"));
            }
        }
        Self::new(self.block_rows, rhs.block_cols, blocks)
    }
}
