//! Seeded random instances with entries uniform in `[-1, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linops::TtMatrix;
use crate::tensor::DenseTensor;
use crate::tt::TtTensor;

pub type InstanceRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-1.0..=1.0)
}

pub fn values<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| uniform(rng)).collect()
}

pub fn dense<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Result<DenseTensor> {
    let n = crate::tensor::Shape::new(dims)?.len();
    DenseTensor::new(dims, values(rng, n))
}

fn bonds(order: usize, ranks: &[usize]) -> Result<Vec<usize>> {
    if order == 0 || ranks.len() + 1 != order {
        return Err(Error::invalid(format!(
            "an order-{order} train needs {} bond ranks, got {}",
            order.saturating_sub(1),
            ranks.len()
        )));
    }
    let mut b = vec![1];
    b.extend_from_slice(ranks);
    b.push(1);
    Ok(b)
}

/// Random TT with the given mode sizes and `N - 1` bond ranks.
pub fn tt<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], ranks: &[usize]) -> Result<TtTensor> {
    let b = bonds(dims.len(), ranks)?;
    let cores = dims
        .iter()
        .enumerate()
        .map(|(n, &d)| dense(rng, &[b[n], d, b[n + 1]]))
        .collect::<Result<Vec<_>>>()?;
    TtTensor::new(cores)
}

/// Random matrix TT with output sizes `rows`, input sizes `cols` and `N - 1` bond ranks.
pub fn tt_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: &[usize],
    cols: &[usize],
    ranks: &[usize],
) -> Result<TtMatrix> {
    if rows.len() != cols.len() {
        return Err(Error::shape(format!(
            "{} output modes but {} input modes",
            rows.len(),
            cols.len()
        )));
    }
    let b = bonds(rows.len(), ranks)?;
    let cores = rows
        .iter()
        .zip(cols)
        .enumerate()
        .map(|(n, (&i, &j))| dense(rng, &[b[n], i, j, b[n + 1]]))
        .collect::<Result<Vec<_>>>()?;
    TtMatrix::new(cores)
}
