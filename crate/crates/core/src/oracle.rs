//! Brute-force dense references.
//!
//! Everything here is written as exhaustive index loops over the entrywise
//! definitions and shares nothing with the optimized paths except [`Shape`]'s
//! flatten/unflatten. Each evaluation is capped at [`WORK_CAP`] scalar multiplies.

#![allow(clippy::needless_range_loop)]

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor, Shape, Unfolding, Variant};

pub const WORK_CAP: u128 = 10_000_000;

fn check_work(work: u128) -> Result<()> {
    if work > WORK_CAP {
        return Err(Error::WorkCap { work, cap: WORK_CAP });
    }
    Ok(())
}

fn sz(dims: &[usize]) -> u128 {
    dims.iter().map(|&d| d as u128).product()
}

fn at(x: &DenseTensor, idx: &[usize]) -> f64 {
    x.data()[x.shape().flatten(idx).expect("index in range")]
}

fn grid(dims: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = dims.iter().product();
    let mut cur = vec![0usize; dims.len()];
    (0..total).map(move |k| {
        if k > 0 {
            for m in (0..cur.len()).rev() {
                cur[m] += 1;
                if cur[m] < dims[m] {
                    break;
                }
                cur[m] = 0;
            }
        }
        cur.clone()
    })
}

fn build(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Result<DenseTensor> {
    let vals: Vec<f64> = grid(dims).map(|idx| f(&idx)).collect();
    DenseTensor::new(dims, vals)
}

/// Which modes are combined for `variant` at order `n`.
fn combined(variant: Variant, n: usize) -> Result<Vec<bool>> {
    Ok(match variant {
        Variant::Full => vec![true; n],
        Variant::Mode(k) if k < n => (0..n).map(|m| m == k).collect(),
        Variant::Shared(k) if k < n => (0..n).map(|m| m != k).collect(),
        Variant::Mode(k) | Variant::Shared(k) => return Err(Error::ModeOutOfRange { mode: k, order: n }),
    })
}

fn check_shared(a: &DenseTensor, b: &DenseTensor, comb: &[bool]) -> Result<()> {
    if a.order() != b.order() {
        return Err(Error::shape("operand orders differ"));
    }
    for (k, &c) in comb.iter().enumerate() {
        if !c && a.dims()[k] != b.dims()[k] {
            return Err(Error::shape(format!("mode {k} must agree")));
        }
    }
    Ok(())
}

/// Operation tags understood by [`dense_reference`]. Matrices are order-2 tensors.
pub enum RefOp<'a> {
    Kron(&'a DenseTensor, &'a DenseTensor, Variant),
    DirectSum(&'a DenseTensor, &'a DenseTensor, Variant),
    Hadamard(&'a DenseTensor, &'a DenseTensor),
    Outer(&'a DenseTensor, &'a DenseTensor),
    ModeProduct(&'a DenseTensor, &'a DenseTensor, usize),
    ModeVecProduct(&'a DenseTensor, &'a DenseTensor, usize),
    Contract(&'a DenseTensor, &'a DenseTensor),
    Tucker(&'a DenseTensor, &'a [DenseTensor]),
    SelfContraction(&'a DenseTensor),
    Matricize(&'a DenseTensor, Unfolding),
    Add(&'a DenseTensor, &'a DenseTensor),
    Dot(&'a DenseTensor, &'a DenseTensor),
    /// Dense matrix times the tensor flattened to a vector.
    Matvec(&'a DenseTensor, &'a DenseTensor),
    /// `x^T A x` with `x` flattened.
    Quadratic(&'a DenseTensor, &'a DenseTensor),
}

impl RefOp<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            RefOp::Kron(..) => "kron",
            RefOp::DirectSum(..) => "direct_sum",
            RefOp::Hadamard(..) => "hadamard",
            RefOp::Outer(..) => "outer",
            RefOp::ModeProduct(..) => "mode_product",
            RefOp::ModeVecProduct(..) => "mode_vec_product",
            RefOp::Contract(..) => "contract",
            RefOp::Tucker(..) => "tucker",
            RefOp::SelfContraction(..) => "self_contraction",
            RefOp::Matricize(..) => "matricize",
            RefOp::Add(..) => "add",
            RefOp::Dot(..) => "dot",
            RefOp::Matvec(..) => "matvec",
            RefOp::Quadratic(..) => "quadratic",
        }
    }
}

/// Evaluates `op` from its entrywise definition. Scalar results are order-0 tensors.
pub fn dense_reference(op: &RefOp) -> Result<DenseTensor> {
    match *op {
        RefOp::Kron(a, b, v) => kron(a, b, v),
        RefOp::DirectSum(a, b, v) => direct_sum(a, b, v),
        RefOp::Hadamard(a, b) | RefOp::Add(a, b) => {
            if a.dims() != b.dims() {
                return Err(Error::shape("operands must have equal shapes"));
            }
            check_work(sz(a.dims()))?;
            let add = matches!(op, RefOp::Add(..));
            build(a.dims(), |i| if add { at(a, i) + at(b, i) } else { at(a, i) * at(b, i) })
        }
        RefOp::Outer(a, b) => {
            let mut dims = a.dims().to_vec();
            dims.extend_from_slice(b.dims());
            check_work(sz(&dims))?;
            let m = a.order();
            build(&dims, |i| at(a, &i[..m]) * at(b, &i[m..]))
        }
        RefOp::ModeProduct(a, m, n) => mode_product(a, m, n),
        RefOp::ModeVecProduct(a, v, n) => {
            if n >= a.order() || v.order() != 1 || v.dims()[0] != a.dims()[n] {
                return Err(Error::shape("vector length must match mode n"));
            }
            let mut dims = a.dims().to_vec();
            dims.remove(n);
            check_work(sz(a.dims()))?;
            build(&dims, |i| {
                let mut full = i.to_vec();
                full.insert(n, 0);
                (0..v.dims()[0])
                    .map(|k| {
                        full[n] = k;
                        at(a, &full) * v.data()[k]
                    })
                    .sum()
            })
        }
        RefOp::Contract(a, b) => contract(a, b),
        RefOp::Tucker(g, f) => tucker(g, f),
        RefOp::SelfContraction(x) => {
            let d = x.dims();
            if d.len() < 2 || d[0] != d[d.len() - 1] {
                return Err(Error::shape("first and last modes must match"));
            }
            check_work(sz(d))?;
            build(&d[1..d.len() - 1], |i| {
                (0..d[0])
                    .map(|k| {
                        let mut full = vec![k];
                        full.extend_from_slice(i);
                        full.push(k);
                        at(x, &full)
                    })
                    .sum()
            })
        }
        RefOp::Matricize(x, u) => matricize(x, u),
        RefOp::Dot(a, b) => {
            if a.dims() != b.dims() {
                return Err(Error::shape("operands must have equal shapes"));
            }
            check_work(sz(a.dims()))?;
            let s = grid(a.dims()).map(|i| at(a, &i) * at(b, &i)).sum();
            Ok(DenseTensor::scalar(s))
        }
        RefOp::Matvec(a, x) => {
            let (rows, cols) = matrix_dims(a)?;
            if cols != x.len() {
                return Err(Error::shape("matrix columns must match the vector length"));
            }
            check_work(rows as u128 * cols as u128)?;
            let xv = x.data();
            build(&[rows], |i| (0..cols).map(|j| at(a, &[i[0], j]) * xv[j]).sum())
        }
        RefOp::Quadratic(a, x) => {
            let (rows, cols) = matrix_dims(a)?;
            if rows != cols || cols != x.len() {
                return Err(Error::shape("matrix must be square and match the vector length"));
            }
            check_work(2 * rows as u128 * cols as u128)?;
            let xv = x.data();
            let mut s = 0.0;
            for i in 0..rows {
                for j in 0..cols {
                    s += xv[i] * at(a, &[i, j]) * xv[j];
                }
            }
            Ok(DenseTensor::scalar(s))
        }
    }
}

fn matrix_dims(a: &DenseTensor) -> Result<(usize, usize)> {
    match a.dims() {
        &[r, c] => Ok((r, c)),
        d => Err(Error::shape(format!("expected a matrix, got shape {d:?}"))),
    }
}

fn kron(a: &DenseTensor, b: &DenseTensor, v: Variant) -> Result<DenseTensor> {
    let comb = combined(v, a.order())?;
    check_shared(a, b, &comb)?;
    let dims: Vec<usize> =
        (0..a.order()).map(|k| if comb[k] { a.dims()[k] * b.dims()[k] } else { a.dims()[k] }).collect();
    check_work(sz(&dims))?;
    build(&dims, |idx| {
        let ia: Vec<usize> = (0..idx.len()).map(|k| if comb[k] { idx[k] / b.dims()[k] } else { idx[k] }).collect();
        let ib: Vec<usize> = (0..idx.len()).map(|k| if comb[k] { idx[k] % b.dims()[k] } else { idx[k] }).collect();
        at(a, &ia) * at(b, &ib)
    })
}

fn direct_sum(a: &DenseTensor, b: &DenseTensor, v: Variant) -> Result<DenseTensor> {
    if a.order() == 0 && b.order() == 0 {
        return Ok(DenseTensor::scalar(a.data()[0] + b.data()[0]));
    }
    let comb = combined(v, a.order())?;
    check_shared(a, b, &comb)?;
    let dims: Vec<usize> =
        (0..a.order()).map(|k| if comb[k] { a.dims()[k] + b.dims()[k] } else { a.dims()[k] }).collect();
    check_work(sz(&dims))?;
    build(&dims, |idx| {
        let in_a = (0..idx.len()).all(|k| !comb[k] || idx[k] < a.dims()[k]);
        let in_b = (0..idx.len()).all(|k| !comb[k] || idx[k] >= a.dims()[k]);
        let mut s = 0.0;
        if in_a {
            s += at(a, idx);
        }
        if in_b {
            let ib: Vec<usize> = (0..idx.len()).map(|k| if comb[k] { idx[k] - a.dims()[k] } else { idx[k] }).collect();
            s += at(b, &ib);
        }
        s
    })
}

fn mode_product(a: &DenseTensor, m: &DenseTensor, n: usize) -> Result<DenseTensor> {
    let (rows, cols) = matrix_dims(m)?;
    if n >= a.order() || cols != a.dims()[n] {
        return Err(Error::shape("matrix columns must match mode n"));
    }
    let mut dims = a.dims().to_vec();
    dims[n] = rows;
    check_work(sz(&dims) * cols as u128)?;
    build(&dims, |idx| {
        let mut src = idx.to_vec();
        (0..cols)
            .map(|k| {
                src[n] = k;
                at(m, &[idx[n], k]) * at(a, &src)
            })
            .sum()
    })
}

fn contract(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
    if a.order() == 0 || b.order() == 0 || a.dims()[a.order() - 1] != b.dims()[0] {
        return Err(Error::shape("last mode of a must match first mode of b"));
    }
    let k = b.dims()[0];
    let ma = a.order() - 1;
    let mut dims = a.dims()[..ma].to_vec();
    dims.extend_from_slice(&b.dims()[1..]);
    check_work(sz(&dims) * k as u128)?;
    build(&dims, |idx| {
        let mut ia = idx[..ma].to_vec();
        ia.push(0);
        let mut ib = vec![0];
        ib.extend_from_slice(&idx[ma..]);
        (0..k)
            .map(|r| {
                ia[ma] = r;
                ib[0] = r;
                at(a, &ia) * at(b, &ib)
            })
            .sum()
    })
}

fn tucker(g: &DenseTensor, factors: &[DenseTensor]) -> Result<DenseTensor> {
    if factors.len() != g.order() {
        return Err(Error::shape("one factor per core mode"));
    }
    let mut dims = Vec::new();
    let mut split = Vec::new();
    for (n, f) in factors.iter().enumerate() {
        if f.order() == 0 || f.dims()[f.order() - 1] != g.dims()[n] {
            return Err(Error::shape(format!("factor {n} does not match core mode {n}")));
        }
        split.push(dims.len());
        dims.extend_from_slice(&f.dims()[..f.order() - 1]);
    }
    split.push(dims.len());
    check_work(sz(&dims) * sz(g.dims()) * factors.len() as u128)?;
    let core_idx: Vec<Vec<usize>> = grid(g.dims()).collect();
    build(&dims, |idx| {
        core_idx
            .iter()
            .map(|r| {
                let mut p = at(g, r);
                for (n, f) in factors.iter().enumerate() {
                    let mut fi = idx[split[n]..split[n + 1]].to_vec();
                    fi.push(r[n]);
                    p *= at(f, &fi);
                }
                p
            })
            .sum()
    })
}

fn matricize(x: &DenseTensor, u: Unfolding) -> Result<DenseTensor> {
    let d = x.dims();
    let (row_modes, col_modes): (Vec<usize>, Vec<usize>) = match u {
        Unfolding::Mode(n) if n < d.len() => (vec![n], (0..d.len()).filter(|&k| k != n).collect()),
        Unfolding::Prefix(n) if n <= d.len() => ((0..n).collect(), (n..d.len()).collect()),
        Unfolding::Mode(n) | Unfolding::Prefix(n) => return Err(Error::ModeOutOfRange { mode: n, order: d.len() }),
    };
    let rd: Vec<usize> = row_modes.iter().map(|&k| d[k]).collect();
    let cd: Vec<usize> = col_modes.iter().map(|&k| d[k]).collect();
    let (rs, cs) = (Shape::new(&rd)?, Shape::new(&cd)?);
    check_work(sz(d))?;
    build(&[rs.len(), cs.len()], |idx| {
        let ri = rs.unflatten(idx[0]).unwrap();
        let ci = cs.unflatten(idx[1]).unwrap();
        let mut full = vec![0; d.len()];
        for (k, &m) in row_modes.iter().enumerate() {
            full[m] = ri[k];
        }
        for (k, &m) in col_modes.iter().enumerate() {
            full[m] = ci[k];
        }
        at(x, &full)
    })
}

/// Strong Kronecker product of block grids (row-major lists of order-2 blocks):
/// block `(r1, r3)` is `sum_{r2} A[r1, r2] ⊗ B[r2, r3]`.
pub fn strong_kron(
    a: &[DenseTensor],
    a_rows: usize,
    a_cols: usize,
    b: &[DenseTensor],
    b_cols: usize,
) -> Result<Vec<DenseTensor>> {
    if a.len() != a_rows * a_cols || b.len() != a_cols * b_cols {
        return Err(Error::shape("block grids do not chain"));
    }
    let mut out = Vec::with_capacity(a_rows * b_cols);
    for r1 in 0..a_rows {
        for r3 in 0..b_cols {
            let mut acc: Option<DenseTensor> = None;
            for r2 in 0..a_cols {
                let t = kron(&a[r1 * a_cols + r2], &b[r2 * b_cols + r3], Variant::Full)?;
                acc = Some(match acc {
                    None => t,
                    Some(s) => dense_reference(&RefOp::Add(&s, &t))?,
                });
            }
            out.push(acc.unwrap());
        }
    }
    Ok(out)
}

/// Dense TT from its cores by the scalar-product formula, one entry at a time.
pub fn tt_dense(cores: &[DenseTensor]) -> Result<DenseTensor> {
    let dims: Vec<usize> = cores.iter().map(|c| c.dims()[1]).collect();
    let rmax = cores.iter().map(|c| c.dims()[0].max(c.dims()[2])).max().unwrap_or(1);
    check_work(sz(&dims) * (cores.len() * rmax * rmax) as u128)?;
    build(&dims, |idx| {
        let mut row = vec![1.0];
        for (c, &i) in cores.iter().zip(idx) {
            let (rl, rr) = (c.dims()[0], c.dims()[2]);
            let next: Vec<f64> =
                (0..rr).map(|s| (0..rl).map(|r| row[r] * at(c, &[r, i, s])).sum()).collect();
            row = next;
        }
        row[0]
    })
}

/// Dense `(prod I) x (prod J)` matrix of a matrix TT from its order-4 cores.
pub fn mtt_dense(cores: &[DenseTensor]) -> Result<DenseTensor> {
    let rd: Vec<usize> = cores.iter().map(|c| c.dims()[1]).collect();
    let cd: Vec<usize> = cores.iter().map(|c| c.dims()[2]).collect();
    let (rs, cs) = (Shape::new(&rd)?, Shape::new(&cd)?);
    let rmax = cores.iter().map(|c| c.dims()[0].max(c.dims()[3])).max().unwrap_or(1);
    check_work(sz(&rd) * sz(&cd) * (cores.len() * rmax * rmax) as u128)?;
    build(&[rs.len(), cs.len()], |idx| {
        let ri = rs.unflatten(idx[0]).unwrap();
        let ci = cs.unflatten(idx[1]).unwrap();
        let mut row = vec![1.0];
        for (n, c) in cores.iter().enumerate() {
            let (rl, rr) = (c.dims()[0], c.dims()[3]);
            row = (0..rr).map(|s| (0..rl).map(|r| row[r] * at(c, &[r, ri[n], ci[n], s])).sum()).collect();
        }
        row[0]
    })
}

/// Frame matrix at core `site` (cores `site` and `site + 1` with `pair`) by
/// substituting each basis tensor for the extracted core(s) and densifying.
pub fn frame_matrix(cores: &[DenseTensor], site: usize, pair: bool) -> Result<DenseTensor> {
    let last = if pair { site + 1 } else { site };
    if last >= cores.len() {
        return Err(Error::ModeOutOfRange { mode: last, order: cores.len() });
    }
    let rl = cores[site].dims()[0];
    let rr = cores[last].dims()[2];
    let mid: usize = cores[site..=last].iter().map(|c| c.dims()[1]).product();
    let ncols = rl * mid * rr;
    let rows: usize = cores.iter().map(|c| c.dims()[1]).product();
    let mut cols = Vec::with_capacity(ncols);
    for c in 0..ncols {
        let mut basis = vec![0.0; ncols];
        basis[c] = 1.0;
        let mut chain: Vec<DenseTensor> = cores[..site].to_vec();
        chain.push(DenseTensor::new(&[rl, mid, rr], basis)?);
        chain.extend_from_slice(&cores[last + 1..]);
        cols.push(tt_dense(&chain)?.into_data());
    }
    build(&[rows, ncols], |idx| cols[idx[1]][idx[0]])
}

/// Singular values, non-increasing, by one-sided Jacobi rotations on a row-major
/// `rows x cols` matrix.
pub fn singular_values(data: &[f64], rows: usize, cols: usize) -> Result<Vec<f64>> {
    check_work(rows as u128 * cols as u128 * (rows.min(cols) as u128).pow(2) * 30)?;
    // work on columns of the taller orientation
    let (m, n) = if rows >= cols { (rows, cols) } else { (cols, rows) };
    let mut c: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..m).map(|i| if rows >= cols { data[i * cols + j] } else { data[j * cols + i] }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = c[p].iter().map(|v| v * v).sum();
                let beta: f64 = c[q].iter().map(|v| v * v).sum();
                let gamma: f64 = c[p].iter().zip(&c[q]).map(|(a, b)| a * b).sum();
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let (a, b) = (c[p][i], c[q][i]);
                    c[p][i] = cs * a - sn * b;
                    c[q][i] = sn * a + cs * b;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|col| col.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

fn prefix_values(x: &DenseTensor, n: usize) -> Result<Vec<f64>> {
    if n == 0 || n >= x.order() {
        return Err(Error::ModeOutOfRange { mode: n, order: x.order() });
    }
    let m = matricize(x, Unfolding::Prefix(n))?;
    singular_values(m.data(), m.dims()[0], m.dims()[1])
}

/// Count of singular values `>= 1e-12 * s_max`.
pub fn numerical_rank(s: &[f64]) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v >= 1e-12 * smax).count()
}

/// Numerical ranks of the prefix unfoldings at splits `1..N`.
pub fn separation_ranks(x: &DenseTensor) -> Result<Vec<usize>> {
    (1..x.order()).map(|n| Ok(numerical_rank(&prefix_values(x, n)?))).collect()
}

/// `sqrt(sum_{k >= r} s_k^2)` for the prefix unfolding with `n` row modes.
pub fn unfolding_tail(x: &DenseTensor, n: usize, r: usize) -> Result<f64> {
    let s = prefix_values(x, n)?;
    Ok(s.iter().skip(r).map(|v| v * v).sum::<f64>().sqrt())
}

/// Outcome of one oracle comparison, emitted as a JSON line.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub op_name: String,
    pub max_abs_err: f64,
    /// `max |got - want| / max |want|` (the absolute error when `want` is zero).
    pub max_rel_err: f64,
    pub passed: bool,
    pub instance: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn compare(
        op_name: &str,
        got: &[f64],
        want: &[f64],
        tolerance: f64,
        instance: impl Into<String>,
        seed: Option<u64>,
    ) -> Self {
        let (abs, rel) = if got.len() != want.len() {
            (f64::INFINITY, f64::INFINITY)
        } else {
            let abs = got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let scale = want.iter().map(|v| v.abs()).fold(0.0, f64::max);
            (abs, if scale > 0.0 { abs / scale } else { abs })
        };
        OracleReport {
            op_name: op_name.to_string(),
            max_abs_err: abs,
            max_rel_err: rel,
            passed: rel <= tolerance,
            instance: instance.into(),
            seed,
            tolerance,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(dims: &[usize], v: &[f64]) -> DenseTensor {
        DenseTensor::new(dims, v.to_vec()).unwrap()
    }

    #[test]
    fn kron_of_ones() {
        let o = DenseTensor::ones(&[2, 2]).unwrap();
        let k = dense_reference(&RefOp::Kron(&o, &o, Variant::Full)).unwrap();
        assert_eq!(k, DenseTensor::ones(&[4, 4]).unwrap());
    }

    #[test]
    fn dot_is_sum_of_squares() {
        let x = t(&[2, 2], &[1.0, -2.0, 3.0, 0.5]);
        let d = dense_reference(&RefOp::Dot(&x, &x)).unwrap();
        assert_eq!(d.scalar_value(), Some(14.25));
    }

    #[test]
    fn direct_sum_block_diag() {
        let a = t(&[1, 1], &[2.0]);
        let b = t(&[1, 2], &[3.0, 4.0]);
        let s = dense_reference(&RefOp::DirectSum(&a, &b, Variant::Full)).unwrap();
        assert_eq!(s.data(), &[2.0, 0.0, 0.0, 0.0, 3.0, 4.0]);
        let v = t(&[1], &[1.0]);
        let s = dense_reference(&RefOp::DirectSum(&v, &v, Variant::Shared(0))).unwrap();
        assert_eq!(s.data(), &[2.0]);
    }

    #[test]
    fn jacobi_singular_values() {
        let s = singular_values(&[3.0, 0.0, 0.0, 0.0, -5.0, 0.0], 2, 3).unwrap();
        assert!((s[0] - 5.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
        let m = [1.0, 2.0, 2.0, 4.0, 3.0, 6.0];
        let s = singular_values(&m, 3, 2).unwrap();
        assert!((s[0] - 70f64.sqrt()).abs() < 1e-13);
        assert!(s[1] < 1e-13);
        assert_eq!(numerical_rank(&s), 1);
    }

    #[test]
    fn tails() {
        let x = DenseTensor::ones(&[2, 3, 2]).unwrap();
        assert!(unfolding_tail(&x, 1, 1).unwrap() < 1e-13);
        assert!(unfolding_tail(&x, 2, 0).unwrap() > 0.0);
        assert_eq!(separation_ranks(&x).unwrap(), vec![1, 1]);
        assert!(unfolding_tail(&x, 3, 0).is_err());
    }

    #[test]
    fn work_cap() {
        let x = DenseTensor::zeros(&[4000, 4000]).unwrap();
        assert!(matches!(
            dense_reference(&RefOp::Quadratic(&x, &DenseTensor::zeros(&[4000]).unwrap())),
            Err(Error::WorkCap { .. })
        ));
    }

    #[test]
    fn report_json() {
        let r = OracleReport::compare("dot", &[1.0], &[1.0 + 1e-15], 1e-12, "x", Some(3));
        assert!(r.passed);
        let line = r.to_json_line();
        assert!(line.starts_with('{') && line.contains("\"op_name\":\"dot\"") && line.contains("\"seed\":3"));
        let bad = OracleReport::compare("dot", &[1.0], &[2.0], 1e-12, "x", None);
        assert!(!bad.passed);
    }
}
