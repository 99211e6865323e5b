use crate::error::{Error, Result};

/// Mode sizes of a dense tensor.
///
/// The empty shape is the order-0 (scalar) shape with exactly one element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
    len: usize,
}

impl Shape {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::ZeroDimension { dims: dims.to_vec() });
        }
        let mut len: usize = 1;
        for &d in dims {
            len = len
                .checked_mul(d)
                .filter(|&l| l <= i64::MAX as usize)
                .ok_or_else(|| Error::Overflow { dims: dims.to_vec() })?;
        }
        Ok(Shape { dims: dims.to_vec(), len })
    }

    pub fn scalar() -> Self {
        Shape { dims: Vec::new(), len: 1 }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// Number of elements, `prod I_n`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major strides: the last mode has stride 1.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for n in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[n] = strides[n + 1] * self.dims[n + 1];
        }
        strides
    }

    /// Flat offset of a multi-index.
    pub fn flatten(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dims.len() {
            return Err(Error::IndexArity { expected: self.dims.len(), got: idx.len() });
        }
        let mut off = 0;
        for (mode, (&i, &d)) in idx.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(Error::IndexOutOfRange { mode, index: i, size: d });
            }
            off = off * d + i;
        }
        Ok(off)
    }

    /// Inverse of [`Shape::flatten`].
    pub fn unflatten(&self, offset: usize) -> Result<Vec<usize>> {
        if offset >= self.len {
            return Err(Error::OffsetOutOfRange { offset, len: self.len });
        }
        let mut idx = vec![0; self.dims.len()];
        let mut rest = offset;
        for n in (0..self.dims.len()).rev() {
            idx[n] = rest % self.dims[n];
            rest /= self.dims[n];
        }
        Ok(idx)
    }
}

/// Offsets `sum_k idx_k * strides_k` for every multi-index of the grid `dims`, in
/// row-major enumeration order.
pub(crate) fn grid_offsets(dims: &[usize], strides: &[usize]) -> Vec<usize> {
    debug_assert_eq!(dims.len(), strides.len());
    let mut offsets = vec![0usize];
    for (&d, &s) in dims.iter().zip(strides) {
        let mut next = Vec::with_capacity(offsets.len() * d);
        for &base in &offsets {
            for i in 0..d {
                next.push(base + i * s);
            }
        }
        offsets = next;
    }
    offsets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_examples() {
        let s = Shape::new(&[2, 3]).unwrap();
        assert_eq!(s.flatten(&[1, 2]).unwrap(), 5);
        let s = Shape::new(&[2, 3, 4]).unwrap();
        assert_eq!(s.flatten(&[0, 0, 0]).unwrap(), 0);
        assert_eq!(s.flatten(&[1, 2, 3]).unwrap(), 23);
    }

    #[test]
    fn flatten_names_offending_mode() {
        let s = Shape::new(&[2, 3, 4]).unwrap();
        match s.flatten(&[1, 3, 0]) {
            Err(Error::IndexOutOfRange { mode: 1, index: 3, size: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(s.flatten(&[1, 2]).is_err());
        assert!(s.unflatten(24).is_err());
    }

    #[test]
    fn rejects_zero_and_overflow() {
        assert!(matches!(Shape::new(&[2, 0]), Err(Error::ZeroDimension { .. })));
        assert!(matches!(
            Shape::new(&[1 << 32, 1 << 32]),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn scalar_shape() {
        let s = Shape::scalar();
        assert_eq!(s.len(), 1);
        assert_eq!(s.flatten(&[]).unwrap(), 0);
        assert_eq!(s.unflatten(0).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn bijection_over_full_grids() {
        for dims in [vec![7], vec![10, 10, 10, 10], vec![2, 3, 5, 7, 11], vec![1, 9, 1, 4]] {
            let s = Shape::new(&dims).unwrap();
            assert!(s.len() <= 10_000);
            for off in 0..s.len() {
                let idx = s.unflatten(off).unwrap();
                assert_eq!(s.flatten(&idx).unwrap(), off);
            }
        }
    }

    #[test]
    fn grid_offsets_match_strides() {
        let s = Shape::new(&[2, 3, 4]).unwrap();
        let offs = grid_offsets(s.dims(), &s.strides());
        assert_eq!(offs, (0..24).collect::<Vec<_>>());
    }
}
