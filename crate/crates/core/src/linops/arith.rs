//! Addition, Hadamard products and inner products of TT tensors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{direct_sum, kron, Variant};
use crate::tt::{matmul, TtCore, TtTensor};

fn check_same_dims(x: &TtTensor, y: &TtTensor, op: &str) -> Result<()> {
    if x.dims() != y.dims() {
        return Err(Error::shape(format!(
            "{op}: mode sizes differ ({:?} vs {:?})",
            x.dims(),
            y.dims()
        )));
    }
    Ok(())
}

/// `x + y` with cores `X_0 ⊕_3 Y_0`, `X_n ⊕_2̄ Y_n`, `X_{N-1} ⊕_1 Y_{N-1}`; bond ranks
/// add.
pub fn add(x: &TtTensor, y: &TtTensor) -> Result<TtTensor> {
    check_same_dims(x, y, "add")?;
    let n = x.order();
    if n == 1 {
        return TtTensor::new(vec![x.core(0).tensor().add(y.core(0).tensor())?]);
    }
    let cores = (0..n)
        .map(|k| {
            let variant = match k {
                0 => Variant::Mode(2),
                _ if k == n - 1 => Variant::Mode(0),
                _ => Variant::Shared(1),
            };
            direct_sum(x.core(k).tensor(), y.core(k).tensor(), variant)
        })
        .collect::<Result<Vec<_>>>()?;
    TtTensor::new(cores)
}

/// `x - y`.
pub fn sub(x: &TtTensor, y: &TtTensor) -> Result<TtTensor> {
    add(x, &y.scale(-1.0))
}

/// `x ⊛ y` with cores `X_n ⊗_2̄ Y_n`; bond ranks multiply.
pub fn hadamard(x: &TtTensor, y: &TtTensor) -> Result<TtTensor> {
    check_same_dims(x, y, "hadamard")?;
    let cores = x
        .cores()
        .iter()
        .zip(y.cores())
        .map(|(a, b)| kron(a.tensor(), b.tensor(), Variant::Shared(1)))
        .collect::<Result<Vec<_>>>()?;
    TtTensor::new(cores)
}

/// Core contraction `sum_i X_i ⊗ Y_i`, of shape `(Rx_l Ry_l) x (Rx_r Ry_r)`.
pub fn core_contraction(x: &TtCore, y: &TtCore) -> Result<DMatrix<f64>> {
    if x.size() != y.size() {
        return Err(Error::shape(format!(
            "core_contraction: physical sizes differ ({} vs {})",
            x.size(),
            y.size()
        )));
    }
    let (xl, xr, yl, yr) = (x.rank_left(), x.rank_right(), y.rank_left(), y.rank_right());
    let mut z = DMatrix::zeros(xl * yl, xr * yr);
    for i in 0..x.size() {
        z += x.slice(i).kronecker(&y.slice(i));
    }
    debug_assert_eq!(z.shape(), (xl * yl, xr * yr));
    Ok(z)
}

/// `<x, y>` by a running `Ry x Rx` boundary, `O(N I R^3)`.
pub fn dot(x: &TtTensor, y: &TtTensor) -> Result<f64> {
    check_same_dims(x, y, "dot")?;
    let mut env = vec![1.0];
    for (cx, cy) in x.cores().iter().zip(y.cores()) {
        let (rx, i, rx2) = (cx.rank_left(), cx.size(), cx.rank_right());
        let (ry, ry2) = (cy.rank_left(), cy.rank_right());
        // t[a', i, b] = sum_a env[a', a] X[a, i, b]
        let t = matmul(&env, cx.data(), ry, rx, i * rx2);
        // env'[b', b] = sum_{a', i} Y[a', i, b'] t[a', i, b]
        let yt = transpose(cy.data(), ry * i, ry2);
        env = matmul(&yt, &t, ry2, ry * i, rx2);
    }
    Ok(env[0])
}

/// `<x, y>` as the explicit product of core-contraction matrices.
pub fn dot_by_core_contractions(x: &TtTensor, y: &TtTensor) -> Result<f64> {
    check_same_dims(x, y, "dot")?;
    let mut acc = DMatrix::from_element(1, 1, 1.0);
    for (cx, cy) in x.cores().iter().zip(y.cores()) {
        acc *= core_contraction(cx, cy)?;
    }
    Ok(acc[(0, 0)])
}

/// Frobenius norm `sqrt(<x, x>)`.
pub fn norm(x: &TtTensor) -> f64 {
    dot(x, x).expect("same shape").max(0.0).sqrt()
}

pub(crate) fn transpose(a: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = a[r * cols + c];
        }
    }
    out
}
