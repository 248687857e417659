//! Dense complex linear algebra: matrices, Jacobi eigensolver, SVD, polar
//! decomposition, matrix functions and the geometric mean.

mod eigen;
mod functions;
mod matrix;
mod svd;

pub use eigen::{
    herm_eig, herm_eig_with, inject_eigen_fault, min_eig, EigenSystem, JacobiSettings,
};
pub use functions::{
    cholesky, count_above, frac_power_quarter_half, geometric_mean, geometric_mean_reg, inertia,
    lu_determinant, pd_inverse, psd_power, psd_power_tol, psd_sqrt, require_pd, scale_of,
    DEFAULT_TOL, PD_THRESHOLD,
};
pub use matrix::{inner, vec_norm, ComplexMatrix, HermitianMatrix, HERMITIAN_TOL};
pub use svd::{polar, singular_values, svd, PolarFactors, SvdSystem, RANK_CUTOFF};
