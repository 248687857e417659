//! Singular value and polar decompositions built on the Hermitian eigensolver.
//!
//! The right singular vectors come from the eigendecomposition of `X*X`. The
//! columns of `XV` are then made mutually orthogonal by a few one-sided Jacobi
//! sweeps (accumulated into `V`), which keeps `XV V* = X` exact while giving
//! the left factor orthonormal columns. Columns whose norm falls below
//! `RANK_CUTOFF · s_1` are treated as null directions and the left factor is
//! completed by Gram-Schmidt against the standard basis.

use num_complex::Complex64;

use super::eigen::{herm_eig, Rotation};
use super::matrix::{inner, vec_norm, ComplexMatrix, HermitianMatrix};
use crate::error::Result;

/// Relative threshold below which a singular value counts as zero when
/// completing the left factor.
pub const RANK_CUTOFF: f64 = 1e-12;

const MAX_ORTHO_SWEEPS: usize = 12;

/// `X = W Σ V*` with singular values sorted descending.
#[derive(Debug, Clone)]
pub struct SvdSystem {
    pub left: ComplexMatrix,
    pub singulars: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SvdSystem {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.left.n();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.left[(i, k)] * self.singulars[k] * self.right[(j, k)].conj())
                .sum()
        })
    }
}

/// `X = U |X|` with `U` unitary and `|X| = (X*X)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub modulus: HermitianMatrix,
}

pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(x)?.singulars)
}

pub fn svd(x: &ComplexMatrix) -> Result<SvdSystem> {
    let n = x.n();
    let gram = HermitianMatrix::project(&(&x.adjoint() * x));
    let mut v = herm_eig(&gram)?.basis;
    let mut y = x * &v;

    for _ in 0..MAX_ORTHO_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let yp = y.column(p);
                let yq = y.column(q);
                let alpha = inner(&yp, &yp).re;
                let beta = inner(&yq, &yq).re;
                let gamma = inner(&yp, &yq);
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let rot = Rotation::annihilating(alpha, beta, gamma);
                rot.apply_right(&mut y, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| vec_norm(&y.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singulars: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);

    let cutoff = RANK_CUTOFF * singulars[0];
    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        if singulars[k] > cutoff && singulars[k] > 0.0 {
            let col: Vec<Complex64> = y.column(j).iter().map(|z| z / singulars[k]).collect();
            left_cols.push(col);
        } else {
            break;
        }
    }
    complete_orthonormal(&mut left_cols, n);
    let mut left = ComplexMatrix::zeros(n);
    for (j, col) in left_cols.iter().enumerate() {
        left.set_column(j, col);
    }
    Ok(SvdSystem {
        left,
        singulars,
        right,
    })
}

/// Extends `cols` to an orthonormal basis of `C^n`, each time taking the
/// standard basis vector with the largest residual after projection.
fn complete_orthonormal(cols: &mut Vec<Vec<Complex64>>, n: usize) {
    while cols.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..n {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[e] = Complex64::new(1.0, 0.0);
            // two passes of classical Gram-Schmidt
            for _ in 0..2 {
                for c in cols.iter() {
                    let proj = inner(c, &v);
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let norm = vec_norm(&v);
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("n > 0");
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
}

/// Polar decomposition with the fixed unitary choice `U = W V*`.
pub fn polar(x: &ComplexMatrix) -> Result<PolarFactors> {
    let s = svd(x)?;
    let unitary = &s.left * &s.right.adjoint();
    let modulus = HermitianMatrix::project(&s.right.conjugate_diag(&s.singulars));
    Ok(PolarFactors { unitary, modulus })
}
