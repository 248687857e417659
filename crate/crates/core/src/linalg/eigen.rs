//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Stopping rule for the Jacobi sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSettings {
    /// Converged once the off-diagonal Frobenius mass is at most `tol · ‖M‖_F`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiSettings {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_sweeps: 40,
        }
    }
}

impl JacobiSettings {
    /// Settings used when re-verifying a counterexample.
    pub fn tight() -> Self {
        Self {
            tol: 1e-15,
            max_sweeps: 80,
        }
    }
}

/// Eigenvalues sorted descending together with the matching orthonormal
/// eigenvectors (columns of `basis`).
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub basis: ComplexMatrix,
}

impl EigenSystem {
    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Eigenvector of the smallest eigenvalue.
    pub fn min_vector(&self) -> Vec<Complex64> {
        self.basis.column(self.basis.n() - 1)
    }

    /// `U Λ U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.basis.conjugate_diag(&self.eigenvalues)
    }

    /// `U f(Λ) U*` as a Hermitian matrix.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        HermitianMatrix::project(&self.basis.conjugate_diag(&d))
    }
}

/// Plane rotation `J = [[c, s·e^{iφ}], [-s·e^{-iφ}, c]]` acting on the index
/// pair `(p, q)`, chosen so that `J* [[a_pp, a_pq], [a_qp, a_qq]] J` is diagonal.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub c: f64,
    /// `s·e^{iφ}`
    pub s: Complex64,
}

impl Rotation {
    pub fn annihilating(app: f64, aqq: f64, apq: Complex64) -> Self {
        let g = apq.norm();
        if g == 0.0 {
            return Self {
                c: 1.0,
                s: Complex64::new(0.0, 0.0),
            };
        }
        let phase = apq / g;
        let tau = (aqq - app) / (2.0 * g);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        Self {
            c,
            s: phase * (t * c),
        }
    }

    /// `M ← M J` restricted to columns `p, q`.
    pub fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let c = self.c;
        for k in 0..m.n() {
            let mkp = m[(k, p)];
            let mkq = m[(k, q)];
            m[(k, p)] = mkp * c - mkq * self.s.conj();
            m[(k, q)] = mkp * self.s + mkq * c;
        }
    }

    /// `M ← J* M` restricted to rows `p, q`.
    pub fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        let c = self.c;
        for k in 0..m.n() {
            let mpk = m[(p, k)];
            let mqk = m[(q, k)];
            m[(p, k)] = mpk * c - mqk * self.s;
            m[(q, k)] = mpk * self.s.conj() + mqk * c;
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

static FAULT: AtomicU64 = AtomicU64::new(0);

/// Fault-injection hook for self-tests: every eigenvalue computed afterwards
/// is shifted by `delta · ‖M‖_F`. Pass `0.0` to disable. Process-global.
pub fn inject_eigen_fault(delta: f64) {
    FAULT.store(delta.to_bits(), Ordering::SeqCst);
}

pub fn herm_eig(m: &HermitianMatrix) -> Result<EigenSystem> {
    herm_eig_with(m, JacobiSettings::default())
}

/// Cyclic-by-row Jacobi with threshold pivoting during the first three sweeps.
pub fn herm_eig_with(m: &HermitianMatrix, settings: JacobiSettings) -> Result<EigenSystem> {
    let n = m.n();
    let mut a = m.as_matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let target = settings.tol * m.frobenius_norm();

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > target {
        if sweeps == settings.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        let threshold = if sweeps < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= threshold || apq.norm() == 0.0 {
                    continue;
                }
                let rot = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, apq);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rot.apply_right(&mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let fault = f64::from_bits(FAULT.load(Ordering::Relaxed)) * m.frobenius_norm();
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re + fault).collect();
    let basis = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { eigenvalues, basis })
}

/// Smallest eigenvalue.
pub fn min_eig(m: &HermitianMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.min())
}
