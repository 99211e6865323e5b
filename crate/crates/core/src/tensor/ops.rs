//! Generalized multilinear products on dense tensors.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::limits;
use crate::tensor::dense::DenseTensor;
use crate::tensor::shape::{grid_offsets, Shape};

/// Which modes of a binary product are combined.
///
/// - `Full`: every mode is combined (`A ⊗ B`, `A ⊕ B`).
/// - `Mode(n)`: only mode `n` is combined, every other mode must agree and is shared
///   (`A ⊗_n B`, `A ⊕_n B`).
/// - `Shared(n)`: every mode except `n` is combined, mode `n` must agree and is
///   shared (`A ⊗_n̄ B`, `A ⊕_n̄ B`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Full,
    Mode(usize),
    Shared(usize),
}

/// Matricization layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unfolding {
    /// `X_(n)`: mode `n` indexes rows, the remaining modes (in order) index columns.
    Mode(usize),
    /// `X_([n])`: the first `n` modes index rows, the rest index columns.
    Prefix(usize),
}

/// Marks each mode as combined (`true`) or shared (`false`) after validating the
/// operand shapes for `variant`.
fn combined_modes(a: &Shape, b: &Shape, variant: Variant, op: &str) -> Result<Vec<bool>> {
    let order = a.order();
    if b.order() != order {
        return Err(Error::shape(format!(
            "{op}: operand orders differ ({} vs {})",
            order,
            b.order()
        )));
    }
    let combined: Vec<bool> = match variant {
        Variant::Full => vec![true; order],
        Variant::Mode(n) | Variant::Shared(n) => {
            if n >= order {
                return Err(Error::ModeOutOfRange { mode: n, order });
            }
            let shared_is_n = matches!(variant, Variant::Shared(_));
            (0..order).map(|k| (k == n) != shared_is_n).collect()
        }
    };
    for (k, &c) in combined.iter().enumerate() {
        if !c && a.dims()[k] != b.dims()[k] {
            return Err(Error::shape(format!(
                "{op}: mode {k} must agree, got {} and {}",
                a.dims()[k],
                b.dims()[k]
            )));
        }
    }
    Ok(combined)
}

fn pick(values: &[usize], mask: &[bool], want: bool) -> Vec<usize> {
    values.iter().zip(mask).filter(|(_, &m)| m == want).map(|(&v, _)| v).collect()
}

/// Kronecker product family. Combined modes have size `I_k J_k` with the index
/// `i_k J_k + j_k`.
pub fn kron(a: &DenseTensor, b: &DenseTensor, variant: Variant) -> Result<DenseTensor> {
    let combined = combined_modes(a.shape(), b.shape(), variant, "kron")?;
    let (ad, bd) = (a.dims(), b.dims());
    let out_dims: Vec<usize> = (0..ad.len())
        .map(|k| if combined[k] { ad[k] * bd[k] } else { ad[k] })
        .collect();
    let out_shape = Shape::new(&out_dims)?;
    limits::check_elements(out_shape.len() as u128)?;

    let (as_, bs, os) = (a.shape().strides(), b.shape().strides(), out_shape.strides());
    let scaled_os: Vec<usize> = (0..ad.len()).map(|k| bd[k] * os[k]).collect();

    let sh_dims = pick(ad, &combined, false);
    let a_sh = grid_offsets(&sh_dims, &pick(&as_, &combined, false));
    let b_sh = grid_offsets(&sh_dims, &pick(&bs, &combined, false));
    let o_sh = grid_offsets(&sh_dims, &pick(&os, &combined, false));

    let a_kd = pick(ad, &combined, true);
    let a_free = grid_offsets(&a_kd, &pick(&as_, &combined, true));
    let a_out = grid_offsets(&a_kd, &pick(&scaled_os, &combined, true));
    let b_kd = pick(bd, &combined, true);
    let b_free = grid_offsets(&b_kd, &pick(&bs, &combined, true));
    let b_out = grid_offsets(&b_kd, &pick(&os, &combined, true));

    let (av, bv) = (a.data(), b.data());
    let mut out = vec![0.0; out_shape.len()];
    for s in 0..o_sh.len() {
        for (p, &ao) in a_free.iter().enumerate() {
            let x = av[a_sh[s] + ao];
            let base = o_sh[s] + a_out[p];
            for (q, &bo) in b_free.iter().enumerate() {
                out[base + b_out[q]] = x * bv[b_sh[s] + bo];
            }
        }
    }
    DenseTensor::from_shape(out_shape, out)
}

/// Direct-sum family. Combined modes have size `I_k + J_k`; `a` occupies the leading
/// block and `b` the trailing block, everything else is zero. Order-0 operands add.
pub fn direct_sum(a: &DenseTensor, b: &DenseTensor, variant: Variant) -> Result<DenseTensor> {
    let combined = combined_modes(a.shape(), b.shape(), variant, "direct_sum")?;
    let (ad, bd) = (a.dims(), b.dims());
    let out_dims: Vec<usize> = (0..ad.len())
        .map(|k| if combined[k] { ad[k] + bd[k] } else { ad[k] })
        .collect();
    let out_shape = Shape::new(&out_dims)?;
    limits::check_elements(out_shape.len() as u128)?;
    let os = out_shape.strides();
    let b_shift: usize = (0..ad.len()).filter(|&k| combined[k]).map(|k| ad[k] * os[k]).sum();

    let mut out = vec![0.0; out_shape.len()];
    for (off, &v) in grid_offsets(ad, &os).into_iter().zip(a.data()) {
        out[off] += v;
    }
    for (off, &v) in grid_offsets(bd, &os).into_iter().zip(b.data()) {
        out[b_shift + off] += v;
    }
    DenseTensor::from_shape(out_shape, out)
}

pub fn hadamard(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
    if a.dims() != b.dims() {
        return Err(Error::shape(format!("hadamard: {:?} vs {:?}", a.dims(), b.dims())));
    }
    let data = a.data().iter().zip(b.data()).map(|(x, y)| x * y).collect();
    DenseTensor::from_shape(a.shape().clone(), data)
}

pub fn outer(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
    let mut dims = a.dims().to_vec();
    dims.extend_from_slice(b.dims());
    let shape = Shape::new(&dims)?;
    limits::check_elements(shape.len() as u128)?;
    let mut out = Vec::with_capacity(shape.len());
    for &x in a.data() {
        out.extend(b.data().iter().map(|&y| x * y));
    }
    DenseTensor::from_shape(shape, out)
}

fn split_at_mode(dims: &[usize], n: usize) -> (usize, usize, usize) {
    let pre = dims[..n].iter().product();
    let post = dims[n + 1..].iter().product();
    (pre, dims[n], post)
}

/// `A ×_n B` for a `J x I_n` matrix `B`: mode `n` fibers are multiplied by `B`.
pub fn mode_product(a: &DenseTensor, m: &DMatrix<f64>, n: usize) -> Result<DenseTensor> {
    if n >= a.order() {
        return Err(Error::ModeOutOfRange { mode: n, order: a.order() });
    }
    let (pre, size, post) = split_at_mode(a.dims(), n);
    if m.ncols() != size {
        return Err(Error::shape(format!(
            "mode_product: matrix has {} columns, mode {n} has size {size}",
            m.ncols()
        )));
    }
    let rows = m.nrows();
    let mut dims = a.dims().to_vec();
    dims[n] = rows;
    let shape = Shape::new(&dims)?;
    limits::check_elements(shape.len() as u128)?;
    let av = a.data();
    let mut out = vec![0.0; shape.len()];
    for p in 0..pre {
        for j in 0..rows {
            let dst = &mut out[(p * rows + j) * post..(p * rows + j + 1) * post];
            for i in 0..size {
                let c = m[(j, i)];
                if c == 0.0 {
                    continue;
                }
                let src = &av[(p * size + i) * post..(p * size + i + 1) * post];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += c * s;
                }
            }
        }
    }
    DenseTensor::from_shape(shape, out)
}

/// `A ×̄_n b`: contracts mode `n` with a vector, removing that mode.
pub fn mode_vec_product(a: &DenseTensor, v: &[f64], n: usize) -> Result<DenseTensor> {
    if n >= a.order() {
        return Err(Error::ModeOutOfRange { mode: n, order: a.order() });
    }
    let (pre, size, post) = split_at_mode(a.dims(), n);
    if v.len() != size {
        return Err(Error::shape(format!(
            "mode_vec_product: vector has length {}, mode {n} has size {size}",
            v.len()
        )));
    }
    let mut dims = a.dims().to_vec();
    dims.remove(n);
    let mut out = vec![0.0; pre * post];
    let av = a.data();
    for p in 0..pre {
        for (i, &c) in v.iter().enumerate() {
            let src = &av[(p * size + i) * post..(p * size + i + 1) * post];
            for (d, s) in out[p * post..(p + 1) * post].iter_mut().zip(src) {
                *d += c * s;
            }
        }
    }
    DenseTensor::new(&dims, out)
}

/// Contracted product `A • B` over the last mode of `a` and the first mode of `b`.
pub fn contract(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
    let (Some(&k), Some(&k2)) = (a.dims().last(), b.dims().first()) else {
        return Err(Error::shape("contract: operands must have order at least 1"));
    };
    if k != k2 {
        return Err(Error::shape(format!(
            "contract: last mode of a has size {k}, first mode of b has size {k2}"
        )));
    }
    let mut dims = a.dims()[..a.order() - 1].to_vec();
    dims.extend_from_slice(&b.dims()[1..]);
    let shape = Shape::new(&dims)?;
    limits::check_elements(shape.len() as u128)?;
    let rows = a.len() / k;
    let cols = b.len() / k;
    let mut out = vec![0.0; rows * cols];
    matmul_into(a.data(), b.data(), rows, k, cols, &mut out);
    DenseTensor::from_shape(shape, out)
}

/// `out += A B` for row-major `A` (m x k) and `B` (k x n).
pub(crate) fn matmul_into(a: &[f64], b: &[f64], m: usize, k: usize, n: usize, out: &mut [f64]) {
    for i in 0..m {
        let row = &mut out[i * n..(i + 1) * n];
        for l in 0..k {
            let c = a[i * k + l];
            if c == 0.0 {
                continue;
            }
            for (o, &y) in row.iter_mut().zip(&b[l * n..(l + 1) * n]) {
                *o += c * y;
            }
        }
    }
}

/// Generalized Tucker operator `[[G; A_1, ..., A_N]]`.
///
/// Factor `n` has shape `I_{n,1} x ... x I_{n,M_n} x R_n`; a vector factor (order 1)
/// removes its mode. The result has order `sum M_n`.
pub fn tucker(g: &DenseTensor, factors: &[DenseTensor]) -> Result<DenseTensor> {
    if g.order() == 0 || factors.len() != g.order() {
        return Err(Error::shape(format!(
            "tucker: core of order {} needs one factor per mode, got {}",
            g.order(),
            factors.len()
        )));
    }
    let mut cur = g.clone();
    let mut pos = 0;
    for (n, f) in factors.iter().enumerate() {
        let r = g.dims()[n];
        if f.order() == 0 || *f.dims().last().unwrap() != r {
            return Err(Error::shape(format!(
                "tucker: factor {n} has shape {:?}, its last mode must be {r}",
                f.dims()
            )));
        }
        let fm = f.order() - 1;
        let frows = f.len() / r;
        let (pre, _, post) = split_at_mode(cur.dims(), pos);
        let mut dims = cur.dims()[..pos].to_vec();
        dims.extend_from_slice(&f.dims()[..fm]);
        dims.extend_from_slice(&cur.dims()[pos + 1..]);
        let shape = Shape::new(&dims)?;
        limits::check_elements(shape.len() as u128)?;
        let mut out = vec![0.0; shape.len()];
        let (cv, fv) = (cur.data(), f.data());
        for p in 0..pre {
            for row in 0..frows {
                let dst = &mut out[(p * frows + row) * post..(p * frows + row + 1) * post];
                for k in 0..r {
                    let c = fv[row * r + k];
                    let src = &cv[(p * r + k) * post..(p * r + k + 1) * post];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += c * s;
                    }
                }
            }
        }
        cur = DenseTensor::from_shape(shape, out)?;
        pos += fm;
    }
    Ok(cur)
}

/// Self-contraction: sums over matched first and last indices.
pub fn self_contraction(x: &DenseTensor) -> Result<DenseTensor> {
    let dims = x.dims();
    if dims.len() < 2 || dims[0] != dims[dims.len() - 1] {
        return Err(Error::shape(format!(
            "self_contraction: first and last modes must match, got shape {dims:?}"
        )));
    }
    let size = dims[0];
    let mid = x.len() / (size * size);
    let xv = x.data();
    let out = (0..mid)
        .map(|m| (0..size).map(|i| xv[(i * mid + m) * size + i]).sum())
        .collect();
    DenseTensor::new(&dims[1..dims.len() - 1], out)
}

pub fn matricize(x: &DenseTensor, unfolding: Unfolding) -> Result<DMatrix<f64>> {
    let order = x.order();
    match unfolding {
        Unfolding::Prefix(n) => {
            if n > order {
                return Err(Error::ModeOutOfRange { mode: n, order });
            }
            let rows: usize = x.dims()[..n].iter().product();
            Ok(DMatrix::from_row_slice(rows, x.len() / rows, x.data()))
        }
        Unfolding::Mode(n) => {
            if n >= order {
                return Err(Error::ModeOutOfRange { mode: n, order });
            }
            let mut axes = vec![n];
            axes.extend((0..order).filter(|&k| k != n));
            let p = x.permute(&axes)?;
            let rows = x.dims()[n];
            Ok(DMatrix::from_row_slice(rows, x.len() / rows, p.data()))
        }
    }
}
