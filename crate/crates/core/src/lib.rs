//! Construction and certification of positive partial transpose (PPT)
//! `2 x 2` block matrices, together with numerical verifiers for the
//! geometric-mean, norm, trace and singular-value inequalities that PPT
//! blocks satisfy.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod block;
pub mod campaign;
pub mod certificate;
pub mod error;
pub mod exec;
pub mod functionals;
pub mod linalg;
pub mod sampling;
pub mod suite;
pub mod verify;

pub use certificate::{loewner_leq, Certificate, Evidence};
pub use error::{Error, Result};
