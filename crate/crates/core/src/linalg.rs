//! Thin wrappers over the dense factorizations used by TT-SVD, rounding and
//! orthogonalization.

use nalgebra::{DMatrix, DVector};

/// Relative cutoff below which a singular value counts as zero.
pub(crate) const RANK_TOL: f64 = 1e-12;

/// Thin QR with `diag(R) >= 0`, so that a matrix with orthonormal columns maps to
/// itself. `Q` is `m x k`, `R` is `k x n` with `k = min(m, n)`.
pub(crate) fn qr_pos(m: DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = m.qr();
    let (mut q, mut r) = qr.unpack();
    for k in 0..r.nrows().min(r.ncols()) {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
            r.row_mut(k).neg_mut();
        }
    }
    (q, r)
}

/// Thin SVD with singular values in non-increasing order.
pub(crate) struct Svd {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub vt: DMatrix<f64>,
}

pub(crate) fn svd(m: DMatrix<f64>) -> Svd {
    let svd = m.svd(true, true);
    Svd {
        u: svd.u.expect("requested U"),
        s: svd.singular_values,
        vt: svd.v_t.expect("requested V^T"),
    }
}

/// Number of singular values at or above `RANK_TOL * s_max`; 0 for the zero matrix.
pub(crate) fn numerical_rank(s: &[f64]) -> usize {
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v >= RANK_TOL * smax).count()
}

/// Squared tails `t[r] = sum_{k >= r} s_k^2`, with `t[len] = 0`.
pub(crate) fn squared_tails(s: &[f64]) -> Vec<f64> {
    let mut t = vec![0.0; s.len() + 1];
    for k in (0..s.len()).rev() {
        t[k] = t[k + 1] + s[k] * s[k];
    }
    t
}

/// Rank kept at one truncation step.
///
/// The smallest `r` whose discarded squared tail is strictly below `delta2` (so a tail
/// sitting exactly on the threshold keeps its value), or every value when none is.
/// With `delta2 == 0` the numerical rank is used instead, so exact decompositions
/// drop roundoff-level directions. The result is capped by `cap` and is at least 1.
pub(crate) fn truncation_rank(s: &[f64], delta2: f64, cap: Option<usize>) -> usize {
    let tails = squared_tails(s);
    let mut r = if delta2 > 0.0 {
        (0..s.len()).find(|&r| tails[r] < delta2).unwrap_or(s.len())
    } else {
        numerical_rank(s)
    };
    if let Some(c) = cap {
        r = r.min(c);
    }
    r.max(1)
}
