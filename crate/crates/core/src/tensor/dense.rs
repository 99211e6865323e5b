use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits;
use crate::tensor::shape::{grid_offsets, Shape};

/// Dense real tensor stored contiguously in "last index fastest" order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor {
    shape: Shape,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: &[usize], data: Vec<f64>) -> Result<Self> {
        let shape = Shape::new(dims)?;
        if data.len() != shape.len() {
            return Err(Error::shape(format!(
                "{} values supplied for shape {:?} with {} elements",
                data.len(),
                dims,
                shape.len()
            )));
        }
        Ok(DenseTensor { shape, data })
    }

    pub fn from_shape(shape: Shape, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::shape(format!(
                "{} values supplied for {} elements",
                data.len(),
                shape.len()
            )));
        }
        Ok(DenseTensor { shape, data })
    }

    pub fn filled(dims: &[usize], value: f64) -> Result<Self> {
        let shape = Shape::new(dims)?;
        limits::check_elements(shape.len() as u128)?;
        let data = vec![value; shape.len()];
        Ok(DenseTensor { shape, data })
    }

    pub fn zeros(dims: &[usize]) -> Result<Self> {
        Self::filled(dims, 0.0)
    }

    pub fn ones(dims: &[usize]) -> Result<Self> {
        Self::filled(dims, 1.0)
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let shape = Shape::new(dims)?;
        limits::check_elements(shape.len() as u128)?;
        let mut data = Vec::with_capacity(shape.len());
        let mut idx = vec![0usize; dims.len()];
        for _ in 0..shape.len() {
            data.push(f(&idx));
            for n in (0..dims.len()).rev() {
                idx[n] += 1;
                if idx[n] < dims[n] {
                    break;
                }
                idx[n] = 0;
            }
        }
        Ok(DenseTensor { shape, data })
    }

    pub fn scalar(value: f64) -> Self {
        DenseTensor { shape: Shape::scalar(), data: vec![value] }
    }

    pub fn vector(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(&[n], values)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(&[n, n], |i| if i[0] == i[1] { 1.0 } else { 0.0 })
    }

    /// Row-major copy of an order-2 matrix.
    pub fn from_matrix(m: &DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(m[(i, j)]);
            }
        }
        Self::new(&[rows, cols], data)
    }

    /// Interprets an order-2 tensor as a matrix.
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        match self.dims() {
            [rows, cols] => Ok(DMatrix::from_row_slice(*rows, *cols, &self.data)),
            _ => Err(Error::shape(format!(
                "expected an order-2 tensor, got shape {:?}",
                self.dims()
            ))),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.data[self.shape.flatten(idx)?])
    }

    /// Value of an order-0 tensor (or any single-element tensor).
    pub fn scalar_value(&self) -> Option<f64> {
        (self.data.len() == 1).then(|| self.data[0])
    }

    pub fn reshape(&self, dims: &[usize]) -> Result<Self> {
        Self::new(dims, self.data.clone())
    }

    pub fn into_reshaped(self, dims: &[usize]) -> Result<Self> {
        Self::new(dims, self.data)
    }

    /// Reorders modes: mode `k` of the result is mode `axes[k]` of `self`.
    pub fn permute(&self, axes: &[usize]) -> Result<Self> {
        let order = self.order();
        let mut seen = vec![false; order];
        if axes.len() != order || axes.iter().any(|&a| a >= order || std::mem::replace(&mut seen[a], true)) {
            return Err(Error::invalid(format!("{axes:?} is not a permutation of 0..{order}")));
        }
        let strides = self.shape.strides();
        let dims: Vec<usize> = axes.iter().map(|&a| self.dims()[a]).collect();
        let src_strides: Vec<usize> = axes.iter().map(|&a| strides[a]).collect();
        let data = grid_offsets(&dims, &src_strides)
            .into_iter()
            .map(|off| self.data[off])
            .collect();
        Self::new(&dims, data)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        DenseTensor { shape: self.shape.clone(), data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Elementwise sum of two tensors of the same shape.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::shape(format!("{:?} vs {:?}", self.dims(), other.dims())));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(DenseTensor { shape: self.shape.clone(), data })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
