//! Dense square complex matrices and the Hermitian wrapper.

use std::fmt;
use std::ops::{Add, Deref, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Relative asymmetry tolerated by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense `n x n` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix. Panics on `n == 0`; use [`ComplexMatrix::from_rows`] for
    /// untrusted dimensions.
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n])
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from row-major real and (optional) imaginary parts,
    /// rejecting ragged, empty or non-finite input.
    pub fn from_rows(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for row in re {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        if let Some(im) = im {
            if im.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: im.len(),
                });
            }
            for row in im {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: row.len(),
                    });
                }
            }
        }
        let m = Self::from_fn(n, |i, j| {
            Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
        });
        m.check_finite()?;
        Ok(m)
    }

    /// Real matrix from row slices; convenient in tests and examples.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let re: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&re, None).expect("invalid real matrix literal")
    }

    pub fn check_finite(&self) -> Result<()> {
        for (k, z) in self.data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / self.n,
                    col: k % self.n,
                });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v* M v` for this matrix.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        inner(v, &self.mul_vec(v))
    }

    /// Hermitian part `(M + M*)/2` as a raw matrix.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// `‖M - M*‖_F`.
    pub fn asymmetry(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// `[[a, b], [c, d]]` assembled from four `n x n` blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.n;
        assert!(b.n == n && c.n == n && d.n == n, "block dimensions differ");
        Self::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - n)],
            (false, true) => c[(i - n, j)],
            (false, false) => d[(i - n, j - n)],
        })
    }

    /// The `k x k` sub-matrix starting at `(r0, c0)`.
    pub fn sub_block(&self, r0: usize, c0: usize, k: usize) -> Self {
        assert!(r0 + k <= self.n && c0 + k <= self.n);
        Self::from_fn(k, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Principal sub-matrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// `self * diag(d) * self^*` for a real diagonal; used to rebuild
    /// Hermitian matrices from an eigenbasis.
    pub fn conjugate_diag(&self, d: &[f64]) -> Self {
        let n = self.n;
        assert_eq!(d.len(), n);
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self[(i, k)] * self[(j, k)].conj() * d[k];
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }

    /// `T* self T`.
    pub fn congruence(&self, t: &Self) -> Self {
        &(&t.adjoint() * self) * t
    }
}

/// `u* v`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

macro_rules! elementwise_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                ComplexMatrix {
                    n: self.n,
                    data: self.data.iter().zip(&rhs.data).map(|(a, b)| a $op b).collect(),
                }
            }
        }

        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;

            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

elementwise_op!(Add, add, +);
elementwise_op!(Sub, sub, -);

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul<ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let n = m.n;
        let re = (0..n)
            .map(|i| m.row(i).iter().map(|z| z.re).collect())
            .collect();
        let im = (0..n)
            .map(|i| m.row(i).iter().map(|z| z.im).collect())
            .collect();
        MatrixJson {
            n,
            re,
            im: Some(im),
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        ComplexMatrix::from_json_parts(raw.n, &raw.re, raw.im.as_deref())
            .map_err(serde::de::Error::custom)
    }
}

impl ComplexMatrix {
    fn from_json_parts(n: usize, re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let m = Self::from_rows(re, im)?;
        if m.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.n,
            });
        }
        Ok(m)
    }

    /// Parses the `{"n", "re", "im"}` object form, allowing the row count to
    /// differ from `"n"` (used by the flat block form, where `"n"` is the block
    /// size and the arrays are `2n x 2n`).
    pub(crate) fn from_json_value_loose(v: &serde_json::Value) -> Result<(usize, Self)> {
        let raw: MatrixJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let m = Self::from_rows(&raw.re, raw.im.as_deref())?;
        Ok((raw.n, m))
    }
}

/// A Hermitian matrix. Construction symmetrizes the input after checking that
/// its asymmetry is within roundoff.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `‖M - M*‖_F ≤ 1e-12 · max(1, ‖M‖_F)` and stores `(M + M*)/2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        m.check_finite()?;
        let asymmetry = m.asymmetry();
        let allowed = HERMITIAN_TOL * m.frobenius_norm().max(1.0);
        if asymmetry > allowed {
            return Err(Error::NotHermitian { asymmetry, allowed });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Orthogonal projection onto the Hermitian matrices, without the
    /// asymmetry check. Used for intermediate results of exact Hermitian
    /// formulas that pick up roundoff asymmetry.
    pub fn project(m: &ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n))
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diag(d))
    }

    pub fn scalar(n: usize, s: f64) -> Self {
        Self::from_real_diag(&vec![s; n])
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(rows))
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `T* self T`, which stays Hermitian.
    pub fn congruence(&self, t: &ComplexMatrix) -> Self {
        Self::project(&self.0.congruence(t))
    }

    /// Adds `s·I`.
    pub fn shift(&self, s: f64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.n() {
            m[(i, i)] += s;
        }
        Self(m)
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian")?;
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for HermitianMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        HermitianMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

impl Add<&HermitianMatrix> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub<&HermitianMatrix> for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn neg(self) -> HermitianMatrix {
        HermitianMatrix(-&self.0)
    }
}
