//! Matrix functions on Hermitian matrices, the geometric mean, and the
//! eigensolver-free factorizations (Cholesky, LU) used for cross-checks.

use num_complex::Complex64;

use super::eigen::{herm_eig, EigenSystem};
use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Default relative tolerance for PSD clamping and Loewner tests.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative threshold separating positive definite from singular.
pub const PD_THRESHOLD: f64 = 1e-10;

pub fn scale_of(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm().max(1.0)
}

fn check_psd(es: &EigenSystem, scale: f64, tol: f64) -> Result<()> {
    let min = es.min();
    if min < -tol * scale {
        return Err(Error::NotPsd {
            min_eig: min,
            witness: es.min_vector(),
        });
    }
    Ok(())
}

fn check_pd(es: &EigenSystem, scale: f64) -> Result<()> {
    let threshold = PD_THRESHOLD * scale;
    let min = es.min();
    if min <= threshold {
        return Err(Error::NotPd {
            min_eig: min,
            threshold,
        });
    }
    Ok(())
}

/// `P^p` for PSD `P`; eigenvalues in `[-tol·scale, 0)` are clamped to zero.
pub fn psd_power_tol(p: &HermitianMatrix, power: f64, tol: f64) -> Result<HermitianMatrix> {
    let es = herm_eig(p)?;
    check_psd(&es, scale_of(p), tol)?;
    Ok(es.apply(|l| l.max(0.0).powf(power)))
}

pub fn psd_power(p: &HermitianMatrix, power: f64) -> Result<HermitianMatrix> {
    psd_power_tol(p, power, DEFAULT_TOL)
}

pub fn psd_sqrt(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    let es = herm_eig(p)?;
    check_psd(&es, scale_of(p), DEFAULT_TOL)?;
    Ok(es.apply(|l| l.max(0.0).sqrt()))
}

pub fn pd_inverse(p: &HermitianMatrix) -> Result<HermitianMatrix> {
    let es = herm_eig(p)?;
    check_pd(&es, scale_of(p))?;
    Ok(es.apply(|l| 1.0 / l))
}

/// Fails with `NotPd` unless the minimum eigenvalue clears the PD threshold.
pub fn require_pd(p: &HermitianMatrix) -> Result<()> {
    check_pd(&herm_eig(p)?, scale_of(p))
}

/// `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}` for PD `A` and PSD `B`.
pub fn geometric_mean(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let es = herm_eig(a)?;
    check_pd(&es, scale_of(a))?;
    let half = es.apply(f64::sqrt);
    let inv_half = es.apply(|l| 1.0 / l.sqrt());
    let inner = b.congruence(&inv_half);
    let inner_sqrt = psd_sqrt(&inner)?;
    Ok(inner_sqrt.congruence(&half))
}

/// `(A + εI) # (B + εI)`, defined on the PSD boundary for `ε > 0`.
pub fn geometric_mean_reg(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    eps: f64,
) -> Result<HermitianMatrix> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "regularization must be positive, got {eps}"
        )));
    }
    geometric_mean(&a.shift(eps), &b.shift(eps))
}

/// `Y^{1/4} X^{1/2} Y^{1/4}`.
pub fn frac_power_quarter_half(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    let x_half = psd_sqrt(x)?;
    let y_quarter = psd_power(y, 0.25)?;
    Ok(x_half.congruence(&y_quarter))
}

/// Lower-triangular Cholesky factor, or `None` when a pivot is not strictly
/// positive. Does not touch the eigensolver.
pub fn cholesky(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.n();
    let mut l = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut d = m[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Determinant by LU with partial pivoting.
pub fn lu_determinant(m: &ComplexMatrix) -> Complex64 {
    let n = m.n();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))
            .expect("non-empty range");
        if a[(pivot, col)].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for k in 0..n {
                let t = a[(col, k)];
                a[(col, k)] = a[(pivot, k)];
                a[(pivot, k)] = t;
            }
            det = -det;
        }
        let p = a[(col, col)];
        det *= p;
        for i in col + 1..n {
            let f = a[(i, col)] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let sub = f * a[(col, k)];
                a[(i, k)] -= sub;
            }
        }
    }
    det
}

/// Inertia `(positive, negative, zero)` of a Hermitian matrix from the
/// pivots of an unpivoted `LDL*` factorization (Sylvester's law). Returns
/// `None` when a pivot falls below `1e-14 · max(1, ‖M‖_F)` in magnitude.
pub fn inertia(m: &ComplexMatrix) -> Option<(usize, usize, usize)> {
    let n = m.n();
    let floor = 1e-14 * m.frobenius_norm().max(1.0);
    let mut a = m.clone();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        let d = a[(k, k)].re;
        if d.abs() <= floor {
            return None;
        }
        if d > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            for j in k + 1..n {
                let sub = f * a[(k, j)];
                a[(i, j)] -= sub;
            }
        }
    }
    Some((pos, neg, n - pos - neg))
}

/// Number of eigenvalues of Hermitian `m` strictly above `t`, by inertia of
/// `m - tI`.
pub fn count_above(m: &ComplexMatrix, t: f64) -> Option<usize> {
    let mut shifted = m.clone();
    for i in 0..m.n() {
        shifted[(i, i)] -= t;
    }
    inertia(&shifted).map(|(pos, _, _)| pos)
}
