//! Operator application, quadratic forms and the localized operators of sweep
//! methods.

use nalgebra::DMatrix;

use super::arith::transpose;
use super::{MttCore, TtMatrix};
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;
use crate::tt::{matmul, TtCore, TtTensor};

/// Core of `A(X)`: `Z[(r, r'), i, (s, s')] = sum_j A[r, i, j, s] X[r', j, s']`.
pub fn apply_core(a: &MttCore, x: &TtCore) -> Result<DenseTensor> {
    if a.cols() != x.size() {
        return Err(Error::shape(format!(
            "apply: operator input size {} does not match core size {}",
            a.cols(),
            x.size()
        )));
    }
    let (ra, ni, nj, ra2) = (a.rank_left(), a.rows(), a.cols(), a.rank_right());
    let (rx, rx2) = (x.rank_left(), x.rank_right());
    let (av, xv) = (a.data(), x.data());
    let mut z = vec![0.0; ra * rx * ni * ra2 * rx2];
    for r in 0..ra {
        for i in 0..ni {
            for j in 0..nj {
                for s in 0..ra2 {
                    let c = av[((r * ni + i) * nj + j) * ra2 + s];
                    if c == 0.0 {
                        continue;
                    }
                    for r2 in 0..rx {
                        let src = &xv[(r2 * nj + j) * rx2..][..rx2];
                        let dst = (((r * rx + r2) * ni + i) * ra2 + s) * rx2;
                        for (o, &v) in z[dst..dst + rx2].iter_mut().zip(src) {
                            *o += c * v;
                        }
                    }
                }
            }
        }
    }
    DenseTensor::new(&[ra * rx, ni, ra2 * rx2], z)
}

/// `A(x)` core by core; bond ranks multiply.
pub fn apply(a: &TtMatrix, x: &TtTensor) -> Result<TtTensor> {
    if a.order() != x.order() {
        return Err(Error::shape(format!(
            "apply: operator has order {}, tensor has order {}",
            a.order(),
            x.order()
        )));
    }
    let cores = a
        .cores()
        .iter()
        .zip(x.cores())
        .map(|(ac, xc)| apply_core(ac, xc))
        .collect::<Result<Vec<_>>>()?;
    TtTensor::new(cores)
}

/// Localized map: `A(x)` with core `site` of `x` replaced by `w`, densified. Equals
/// `A X^{≠site} vec(w)`.
pub fn local_map_apply(a: &TtMatrix, x: &TtTensor, site: usize, w: &DenseTensor) -> Result<DenseTensor> {
    check_site_core(x, site, w, "local_map_apply")?;
    apply(a, &x.with_core(site, w.clone())?)?.to_dense()
}

fn check_site_core(x: &TtTensor, site: usize, w: &DenseTensor, op: &str) -> Result<()> {
    if site >= x.order() {
        return Err(Error::ModeOutOfRange { mode: site, order: x.order() });
    }
    let c = x.core(site);
    let want = [c.rank_left(), c.size(), c.rank_right()];
    if w.dims() != want {
        return Err(Error::shape(format!(
            "{op}: core at site {site} must have shape {want:?}, got {:?}",
            w.dims()
        )));
    }
    Ok(())
}

fn check_square(x: &TtTensor, a: &TtMatrix, op: &str) -> Result<()> {
    if a.order() != x.order() {
        return Err(Error::shape(format!(
            "{op}: operator has order {}, tensor has order {}",
            a.order(),
            x.order()
        )));
    }
    for (n, c) in a.cores().iter().enumerate() {
        if c.rows() != c.cols() {
            return Err(Error::shape(format!(
                "{op}: operator mode {n} is {}x{}, not square",
                c.rows(),
                c.cols()
            )));
        }
        if c.rows() != x.core(n).size() {
            return Err(Error::shape(format!(
                "{op}: operator mode {n} has size {}, tensor mode has size {}",
                c.rows(),
                x.core(n).size()
            )));
        }
    }
    Ok(())
}

/// One step of the `[bra, op, ket]` boundary:
/// `E'[b'', b, b'] = sum E[a'', a, a'] Bra[a'', i, b''] A[a, i, j, b] Ket[a', j, b']`.
fn env_step(env: &[f64], bra: &DenseTensor, a: &DenseTensor, ket: &DenseTensor) -> Result<Vec<f64>> {
    let (rb, ni, rb2) = (bra.dims()[0], bra.dims()[1], bra.dims()[2]);
    let (ra, nj, ra2) = (a.dims()[0], a.dims()[2], a.dims()[3]);
    let (rk, rk2) = (ket.dims()[0], ket.dims()[2]);
    // t1[a, a', i, b'']
    let t1 = matmul(&transpose(env, rb, ra * rk), bra.data(), ra * rk, rb, ni * rb2);
    let t1 = DenseTensor::new(&[ra, rk, ni, rb2], t1)?.permute(&[1, 3, 0, 2])?;
    // t2[a', b'', j, b]
    let t2 = matmul(t1.data(), a.data(), rk * rb2, ra * ni, nj * ra2);
    let t2 = DenseTensor::new(&[rk, rb2, nj, ra2], t2)?.permute(&[1, 3, 0, 2])?;
    Ok(matmul(t2.data(), ket.data(), rb2 * ra2, rk * nj, rk2))
}

fn reversed_tt(c: &DenseTensor) -> Result<DenseTensor> {
    c.permute(&[2, 1, 0])
}

fn reversed_mtt(c: &DenseTensor) -> Result<DenseTensor> {
    c.permute(&[3, 1, 2, 0])
}

/// Boundary over cores `0..n` (left) or `n+1..N` (right, built on the reversed chain).
fn left_env(x: &TtTensor, a: &TtMatrix, n: usize) -> Result<Vec<f64>> {
    let mut env = vec![1.0];
    for k in 0..n {
        let xc = x.core(k).tensor();
        env = env_step(&env, xc, a.core(k).tensor(), xc)?;
    }
    Ok(env)
}

fn right_env(x: &TtTensor, a: &TtMatrix, n: usize) -> Result<Vec<f64>> {
    let mut env = vec![1.0];
    for k in (n + 1..x.order()).rev() {
        let xc = reversed_tt(x.core(k).tensor())?;
        env = env_step(&env, &xc, &reversed_mtt(a.core(k).tensor())?, &xc)?;
    }
    Ok(env)
}

/// `x^T A x` by a running `[bra, op, ket]` boundary. `A` must be square per mode;
/// symmetry is not required.
pub fn quadratic_form(x: &TtTensor, a: &TtMatrix) -> Result<f64> {
    check_square(x, a, "quadratic_form")?;
    Ok(left_env(x, a, x.order())?[0])
}

/// `sum_{i, j} X_i ⊗ A_{i,j} ⊗ X_j`, of shape `R R_A R x R' R_A' R'`.
pub fn quadratic_core_matrix(x: &TtCore, a: &MttCore) -> Result<DMatrix<f64>> {
    if a.rows() != x.size() || a.cols() != x.size() {
        return Err(Error::shape(format!(
            "quadratic core: operator core is {}x{}, tensor core size is {}",
            a.rows(),
            a.cols(),
            x.size()
        )));
    }
    let (rx, ra, rx2, ra2) = (x.rank_left(), a.rank_left(), x.rank_right(), a.rank_right());
    let mut z = DMatrix::zeros(rx * ra * rx, rx2 * ra2 * rx2);
    for i in 0..x.size() {
        let xi = x.slice(i);
        for j in 0..x.size() {
            z += xi.kronecker(&a.slice(i, j)).kronecker(&x.slice(j));
        }
    }
    Ok(z)
}

/// `x^T A x` as the explicit product of quadratic core matrices.
pub fn quadratic_form_by_core_matrices(x: &TtTensor, a: &TtMatrix) -> Result<f64> {
    check_square(x, a, "quadratic_form")?;
    let mut acc = DMatrix::from_element(1, 1, 1.0);
    for (xc, ac) in x.cores().iter().zip(a.cores()) {
        acc *= quadratic_core_matrix(xc, ac)?;
    }
    Ok(acc[(0, 0)])
}

/// Localized bilinear form: `vec(y)^T (X^{≠site})^T A X^{≠site} vec(w)`, computed by
/// substituting `y` (bra) and `w` (ket) for core `site` in the boundary chain.
pub fn local_bilinear_form(
    a: &TtMatrix,
    x: &TtTensor,
    site: usize,
    y: &DenseTensor,
    w: &DenseTensor,
) -> Result<f64> {
    check_square(x, a, "local_bilinear_form")?;
    check_site_core(x, site, y, "local_bilinear_form")?;
    check_site_core(x, site, w, "local_bilinear_form")?;
    let left = left_env(x, a, site)?;
    let mid = env_step(&left, y, a.core(site).tensor(), w)?;
    let right = right_env(x, a, site)?;
    Ok(mid.iter().zip(&right).map(|(p, q)| p * q).sum())
}
