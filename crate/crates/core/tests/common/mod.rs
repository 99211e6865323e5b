//! Helpers shared by the integration test crates.
#![allow(dead_code)]

use nalgebra::DMatrix;
use ttkit::oracle::OracleReport;
use ttkit::DenseTensor;

/// Row-major values of a matrix.
pub fn rows(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

/// Order-2 tensor holding `m`.
pub fn as_tensor(m: &DMatrix<f64>) -> DenseTensor {
    DenseTensor::from_matrix(m).unwrap()
}

pub fn report(op: &str, got: &[f64], want: &[f64], tol: f64, instance: impl Into<String>, seed: u64) -> OracleReport {
    OracleReport::compare(op, got, want, tol, instance, Some(seed))
}

/// Panics with the JSON report when the comparison fails.
#[track_caller]
pub fn assert_close(op: &str, got: &[f64], want: &[f64], tol: f64, instance: impl Into<String>, seed: u64) {
    let r = report(op, got, want, tol, instance, seed);
    assert!(r.passed, "{}", r.to_json_line());
}

/// `||a - b||_F / ||b||_F`.
pub fn rel_frob(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let n: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    if n == 0.0 {
        d
    } else {
        d / n
    }
}

/// Largest deviation of `m^T m` (columns) or `m m^T` (rows) from the identity.
pub fn orthonormality_defect(m: &DMatrix<f64>, columns: bool) -> f64 {
    let g = if columns { m.transpose() * m } else { m * m.transpose() };
    (g - DMatrix::identity(if columns { m.ncols() } else { m.nrows() }, if columns { m.ncols() } else { m.nrows() }))
        .amax()
}
