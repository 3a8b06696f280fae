//! Dense least squares by Householder QR.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Least-squares solution of `A x ~= b` for several right-hand sides.
#[derive(Clone, Debug)]
pub struct LstsqSolution {
    /// One coefficient vector per right-hand side.
    pub coefficients: Vec<Vec<f64>>,
    /// `||A x - b||_2` per right-hand side.
    pub residual_norms: Vec<f64>,
}

/// Solves `min ||A x - b||_2` where `a` is row-major `rows x cols`.
///
/// Columns are equilibrated before factorisation; the system is rejected as
/// ill-conditioned when a pivot of the scaled `R` falls below `1e-12` of the
/// largest one.
pub fn least_squares(a: &[f64], rows: usize, cols: usize, rhs: &[Vec<f64>]) -> Result<LstsqSolution> {
    assert_eq!(a.len(), rows * cols, "matrix size mismatch");
    if rows < cols || cols == 0 {
        return Err(Error::TooFewNodes { found: rows, needed: cols.max(1) });
    }
    // Column-major working copy with unit-norm columns.
    let mut q = vec![0.0; rows * cols];
    let mut scale = vec![0.0; cols];
    for j in 0..cols {
        let mut s = 0.0;
        for i in 0..rows {
            let v = a[i * cols + j];
            q[j * rows + i] = v;
            s += v * v;
        }
        let s = libm::sqrt(s);
        scale[j] = if s > 0.0 { s } else { 1.0 };
        for i in 0..rows {
            q[j * rows + i] /= scale[j];
        }
    }
    let mut bs: Vec<Vec<f64>> = rhs.to_vec();
    for b in &bs {
        assert_eq!(b.len(), rows, "right-hand side length mismatch");
    }
    let mut diag = vec![0.0; cols];
    for k in 0..cols {
        let col = &mut q[k * rows..(k + 1) * rows];
        let norm = libm::sqrt(col[k..].iter().map(|v| v * v).sum::<f64>());
        let alpha = if col[k] > 0.0 { -norm } else { norm };
        diag[k] = alpha;
        if norm == 0.0 {
            continue;
        }
        col[k] -= alpha;
        let vnorm2: f64 = col[k..].iter().map(|v| v * v).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let v: Vec<f64> = col[k..].to_vec();
        for j in (k + 1)..cols {
            let cj = &mut q[j * rows..(j + 1) * rows];
            let dot: f64 = v.iter().zip(&cj[k..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in cj[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        for b in &mut bs {
            let dot: f64 = v.iter().zip(&b[k..]).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in b[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
    }
    let max_diag = diag.iter().fold(0.0f64, |m, d| m.max(libm::fabs(*d)));
    if max_diag == 0.0 || diag.iter().any(|d| libm::fabs(*d) < 1e-12 * max_diag) {
        return Err(Error::IllConditioned);
    }
    let mut coefficients = Vec::with_capacity(bs.len());
    let mut residual_norms = Vec::with_capacity(bs.len());
    for b in &bs {
        let mut x = vec![0.0; cols];
        for k in (0..cols).rev() {
            let mut s = b[k];
            for j in (k + 1)..cols {
                s -= q[j * rows + k] * x[j];
            }
            x[k] = s / diag[k];
        }
        for (xj, sj) in x.iter_mut().zip(&scale) {
            *xj /= sj;
        }
        residual_norms.push(libm::sqrt(b[cols..].iter().map(|v| v * v).sum()));
        coefficients.push(x);
    }
    Ok(LstsqSolution { coefficients, residual_norms })
}
