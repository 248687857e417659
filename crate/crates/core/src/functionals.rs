//! Lieb functions and unitarily invariant norms, with numeric checks of the
//! Lieb axioms and of the derived block and geometric-mean inequalities.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::block::{assemble, is_positive, Block2x2};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::linalg::{
    geometric_mean, herm_eig, lu_determinant, require_pd, singular_values, ComplexMatrix,
    HermitianMatrix, HERMITIAN_TOL,
};
use crate::sampling::{SampleRng, SampleSpec};

/// A scalar functional on `n x n` complex matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    Trace,
    Determinant,
    SpectralRadius,
    /// `e_k(λ_1, …, λ_n)`
    ElemSymEig(usize),
    /// `Π_{j≤k} s_j`
    TopKSingularProduct(usize),
    /// `Σ_{j≤k} s_j`
    KyFan(usize),
    /// `(Σ s_j^p)^{1/p}`, `p = ∞` giving `s_1`.
    Schatten(f64),
    Frobenius,
    OperatorNorm,
}

/// How a functional behaves under unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    /// `L(UMV) = L(M)` for all unitaries `U`, `V`.
    TwoSided,
    /// `L(UMU*) = L(M)`; equals two-sided invariance on the PSD inputs the
    /// verifiers feed these functionals.
    Similarity,
}

impl Functional {
    pub fn is_norm(&self) -> bool {
        matches!(
            self,
            Functional::KyFan(_)
                | Functional::Schatten(_)
                | Functional::Frobenius
                | Functional::OperatorNorm
        )
    }

    /// Every implemented functional is flagged unitarily invariant; see
    /// [`Functional::invariance`] for the precise sense.
    pub fn is_unitarily_invariant(&self) -> bool {
        true
    }

    pub fn invariance(&self) -> Invariance {
        match self {
            Functional::Trace
            | Functional::Determinant
            | Functional::SpectralRadius
            | Functional::ElemSymEig(_) => Invariance::Similarity,
            _ => Invariance::TwoSided,
        }
    }

    /// Whether the value depends only on the singular values.
    pub fn is_singular_value_function(&self) -> bool {
        self.invariance() == Invariance::TwoSided
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            Functional::ElemSymEig(k)
            | Functional::TopKSingularProduct(k)
            | Functional::KyFan(k)
                if k == 0 || k > n =>
            {
                Err(Error::InvalidParameter(format!(
                    "{self}: k must lie in 1..={n}"
                )))
            }
            Functional::Schatten(p) if !(p >= 1.0) => Err(Error::InvalidParameter(format!(
                "schatten exponent must be at least 1, got {p}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn evaluate(&self, m: &ComplexMatrix) -> Result<Complex64> {
        let n = m.n();
        self.validate(n)?;
        let real = |v: f64| Ok(Complex64::new(v, 0.0));
        match *self {
            Functional::Trace => Ok(m.trace()),
            Functional::Determinant => Ok(lu_determinant(m)),
            Functional::SpectralRadius => real(spectral_radius(m)?),
            Functional::ElemSymEig(k) => Ok(elementary_symmetric(m, k)),
            Functional::Frobenius => real(m.frobenius_norm()),
            _ => real(self.evaluate_singulars(&singular_values(m)?)?),
        }
    }

    /// Real part of [`Functional::evaluate`]; the natural value on PSD inputs.
    pub fn evaluate_real(&self, m: &ComplexMatrix) -> Result<f64> {
        Ok(self.evaluate(m)?.re)
    }

    /// Value of a singular-value functional from a descending singular value
    /// list. The list may be zero-padded beyond the matrix dimension, which
    /// is how `‖A + B‖` is compared against a norm of the `2n x 2n` block.
    pub fn evaluate_singulars(&self, s: &[f64]) -> Result<f64> {
        self.validate(s.len())?;
        Ok(match *self {
            Functional::KyFan(k) => s[..k].iter().sum(),
            Functional::TopKSingularProduct(k) => s[..k].iter().product(),
            Functional::Schatten(p) if p.is_infinite() => s[0],
            Functional::Schatten(p) => s.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p),
            Functional::Frobenius => s.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Functional::OperatorNorm => s[0],
            other => {
                return Err(Error::InvalidParameter(format!(
                    "{other} is not a function of the singular values"
                )))
            }
        })
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Trace => write!(f, "trace"),
            Functional::Determinant => write!(f, "det"),
            Functional::SpectralRadius => write!(f, "specrad"),
            Functional::ElemSymEig(k) => write!(f, "esym:{k}"),
            Functional::TopKSingularProduct(k) => write!(f, "prod-sv:{k}"),
            Functional::KyFan(k) => write!(f, "kyfan:{k}"),
            Functional::Schatten(p) if p.is_infinite() => write!(f, "schatten:inf"),
            Functional::Schatten(p) => write!(f, "schatten:{p}"),
            Functional::Frobenius => write!(f, "frobenius"),
            Functional::OperatorNorm => write!(f, "op"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown functional {s:?}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let index =
            || -> Result<usize> { arg.ok_or_else(bad)?.parse::<usize>().map_err(|_| bad()) };
        let f = match (head, arg) {
            ("trace", None) => Functional::Trace,
            ("det", None) => Functional::Determinant,
            ("specrad", None) => Functional::SpectralRadius,
            ("frobenius", None) => Functional::Frobenius,
            ("op", None) => Functional::OperatorNorm,
            ("esym", Some(_)) => Functional::ElemSymEig(index()?),
            ("prod-sv", Some(_)) => Functional::TopKSingularProduct(index()?),
            ("kyfan", Some(_)) => Functional::KyFan(index()?),
            ("schatten", Some(p)) => {
                let p = match p {
                    "inf" | "∞" => f64::INFINITY,
                    p => p.parse::<f64>().map_err(|_| bad())?,
                };
                Functional::Schatten(p)
            }
            _ => return Err(bad()),
        };
        if let Functional::Schatten(p) = f {
            if !(p >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "schatten exponent must be at least 1, got {p}"
                )));
            }
        }
        if matches!(
            f,
            Functional::ElemSymEig(0) | Functional::TopKSingularProduct(0) | Functional::KyFan(0)
        ) {
            return Err(Error::InvalidParameter(format!(
                "{s}: k must be at least 1"
            )));
        }
        Ok(f)
    }
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `e_k` of the eigenvalues, as the sum of all `k x k` principal minors.
fn elementary_symmetric(m: &ComplexMatrix, k: usize) -> Complex64 {
    let n = m.n();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        total += lu_determinant(&m.principal(&idx));
        // next k-combination in lexicographic order
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return total;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Characteristic polynomial coefficients `c_0..=c_n` of `λ^n + c_1 λ^{n-1} + … + c_n`.
fn characteristic_coefficients(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.n();
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        c.push(elementary_symmetric(m, k) * sign);
    }
    c
}

/// Roots of a monic polynomial by Durand-Kerner iteration.
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| {
        coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    };
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let denom: Complex64 = (0..n).filter(|&j| j != i).map(|j| zi - roots[j]).product();
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta <= 1e-15 * radius {
            break;
        }
    }
    roots
}

fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    if m.asymmetry() <= HERMITIAN_TOL * m.frobenius_norm().max(1.0) {
        let es = herm_eig(&HermitianMatrix::project(m))?;
        return Ok(es.max().abs().max(es.min().abs()));
    }
    let roots = polynomial_roots(&characteristic_coefficients(m));
    Ok(roots.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Checks both Lieb axioms over `spec.count` random draws of dimension
/// `spec.n`: nonnegativity and monotonicity on Loewner-ordered PSD pairs
/// `P ≤ P + K*K`, and `|L(X*Y)|² ≤ L(X*X) L(Y*Y)` on Ginibre pairs. The
/// certificate keeps the worst instance of each of the three checks.
pub fn check_lieb_axioms(l: Functional, spec: &SampleSpec, tol: f64) -> Result<Certificate> {
    l.validate(spec.n)?;
    let mut worst: [Option<Certificate>; 3] = [None, None, None];
    let keep = |slot: &mut Option<Certificate>, c: Certificate| {
        let ratio = |c: &Certificate| c.gap / (c.tol * c.scale);
        if slot.as_ref().is_none_or(|w| ratio(&c) < ratio(w)) {
            *slot = Some(c);
        }
    };
    for i in 0..spec.count {
        let mut rng = SampleRng::new(spec.seed_of(i));
        let n = spec.n;
        let g = rng.ginibre(n);
        let k = rng.ginibre(n);
        let p = &g.adjoint() * &g;
        let q = &p + &(&k.adjoint() * &k);
        let lp = l.evaluate_real(&p)?;
        let lq = l.evaluate_real(&q)?;
        keep(
            &mut worst[0],
            Certificate::scalar("lieb_nonnegative", "0", "L(P)", 0.0, lp, tol),
        );
        keep(
            &mut worst[1],
            Certificate::scalar("lieb_monotone", "L(P)", "L(P + K*K)", lp, lq, tol),
        );

        let x = rng.ginibre(n);
        let y = rng.ginibre(n);
        let xs = x.adjoint();
        let lxy = l.evaluate(&(&xs * &y))?.norm();
        let lxx = l.evaluate_real(&(&xs * &x))?;
        let lyy = l.evaluate_real(&(&y.adjoint() * &y))?;
        keep(
            &mut worst[2],
            Certificate::scalar(
                "lieb_cauchy_schwarz",
                "|L(X*Y)|²",
                "L(X*X) L(Y*Y)",
                lxy * lxy,
                lxx * lyy,
                tol,
            ),
        );
    }
    let links: Vec<Certificate> = worst.into_iter().flatten().collect();
    if links.is_empty() {
        return Err(Error::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    Ok(Certificate::chain(
        &format!("lieb_axioms[{l}]"),
        "axioms",
        "hold",
        links,
    ))
}

/// `|L(Z)|² ≤ L(X) L(Y)` for the PSD block `[[X, Z*], [Z, Y]]`; with the block
/// stored as `(A, W, B)` this reads `X = A`, `Z = W*`, `Y = B`.
pub fn check_block_lieb(l: Functional, b: &Block2x2, tol: f64) -> Result<Certificate> {
    let pos = is_positive(b, tol)?;
    if !pos.pass {
        let witness = pos.witness().map(<[_]>::to_vec).unwrap_or_default();
        return Err(Error::NotPsd {
            min_eig: pos.gap,
            witness,
        });
    }
    debug_assert_eq!(assemble(b).n(), 2 * b.n());
    let lz = l.evaluate(&b.x().adjoint())?.norm();
    let la = l.evaluate_real(b.a())?;
    let lb = l.evaluate_real(b.b())?;
    Ok(Certificate::scalar(
        &format!("block_lieb[{l}]"),
        "|L(Z)|²",
        "L(X) L(Y)",
        lz * lz,
        la * lb,
        tol,
    ))
}

/// `L(X # Y) ≤ sqrt(L(X) L(Y))` for PD `X`, `Y`.
pub fn check_gm_lieb(
    l: Functional,
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    tol: f64,
) -> Result<Certificate> {
    require_pd(x)?;
    require_pd(y)?;
    let g = geometric_mean(x, y)?;
    let lg = l.evaluate_real(&g)?;
    let lx = l.evaluate_real(x)?;
    let ly = l.evaluate_real(y)?;
    Ok(Certificate::scalar(
        &format!("gm_lieb[{l}]"),
        "L(X#Y)",
        "sqrt(L(X) L(Y))",
        lg,
        (lx * ly).max(0.0).sqrt(),
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;
    use crate::sampling::Method;

    fn val(l: Functional, m: &ComplexMatrix) -> f64 {
        l.evaluate_real(m).unwrap()
    }

    #[test]
    fn spec_examples() {
        let d31 = ComplexMatrix::from_real_diag(&[3.0, 1.0]);
        assert_eq!(val(Functional::KyFan(1), &d31), 3.0);
        let shift = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!((val(Functional::Schatten(2.0), &shift) - 1.0).abs() < 1e-15);
        let d321 = ComplexMatrix::from_real_diag(&[3.0, 2.0, 1.0]);
        assert!((val(Functional::TopKSingularProduct(2), &d321) - 6.0).abs() < 1e-14);
        let m = ComplexMatrix::from_real(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!((val(Functional::Determinant, &m) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "trace",
            "det",
            "specrad",
            "esym:2",
            "prod-sv:3",
            "kyfan:1",
            "schatten:2",
            "schatten:inf",
            "schatten:1.5",
            "frobenius",
            "op",
        ] {
            let f: Functional = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        for s in ["kyfan", "kyfan:0", "schatten:0.5", "nope", "trace:2"] {
            assert!(s.parse::<Functional>().is_err(), "{s}");
        }
    }

    #[test]
    fn range_errors() {
        let m = ComplexMatrix::identity(2);
        assert!(Functional::KyFan(3).evaluate(&m).is_err());
        assert!(Functional::Schatten(0.5).evaluate(&m).is_err());
    }

    #[test]
    fn elementary_symmetric_of_diagonal() {
        let d = ComplexMatrix::from_real_diag(&[1.0, 2.0, 3.0]);
        assert_eq!(val(Functional::ElemSymEig(1), &d), 6.0);
        assert_eq!(val(Functional::ElemSymEig(2), &d), 11.0);
        assert_eq!(val(Functional::ElemSymEig(3), &d), 6.0);
    }

    #[test]
    fn spectral_radius_of_non_normal() {
        // eigenvalues 2 and -3 regardless of the upper-right entry
        let m = ComplexMatrix::from_real(&[&[2.0, 7.0], &[0.0, -3.0]]);
        assert!((val(Functional::SpectralRadius, &m) - 3.0).abs() < 1e-10);
        let rot = ComplexMatrix::from_real(&[&[0.0, -2.0], &[2.0, 0.0]]);
        assert!((val(Functional::SpectralRadius, &rot) - 2.0).abs() < 1e-10);
    }

    #[test]
    fn schatten_two_is_frobenius() {
        let m = crate::sampling::random_ginibre(4, 3);
        let a = val(Functional::Schatten(2.0), &m);
        let b = val(Functional::Frobenius, &m);
        assert!((a - b).abs() <= 1e-12 * b);
        let trace_norm = val(Functional::Schatten(1.0), &m);
        assert!((val(Functional::KyFan(4), &m) - trace_norm).abs() <= 1e-12 * trace_norm);
    }

    #[test]
    fn axioms_hold_for_trace_and_ky_fan() {
        let spec3 = SampleSpec::new(Method::Ginibre, 3, 200, 1);
        assert!(
            check_lieb_axioms(Functional::Trace, &spec3, DEFAULT_TOL)
                .unwrap()
                .pass
        );
        let spec4 = SampleSpec::new(Method::Ginibre, 4, 200, 2);
        assert!(
            check_lieb_axioms(Functional::KyFan(2), &spec4, DEFAULT_TOL)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn cauchy_schwarz_equality_on_diagonal() {
        let x = crate::sampling::random_ginibre(3, 8);
        for l in [
            Functional::Trace,
            Functional::KyFan(2),
            Functional::Determinant,
        ] {
            let xx = &x.adjoint() * &x;
            let lhs = l.evaluate(&xx).unwrap().norm().powi(2);
            let rhs = val(l, &xx).powi(2);
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn block_lieb_examples() {
        let zero_off = Block2x2::new(
            HermitianMatrix::identity(2),
            ComplexMatrix::zeros(2),
            HermitianMatrix::scalar(2, 2.0),
        )
        .unwrap();
        let c = check_block_lieb(Functional::Trace, &zero_off, DEFAULT_TOL).unwrap();
        assert!(c.pass);
        assert_eq!(c.gap, 8.0);
        let ones = Block2x2::new(
            HermitianMatrix::identity(2),
            ComplexMatrix::identity(2),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        let c = check_block_lieb(Functional::Trace, &ones, DEFAULT_TOL).unwrap();
        assert!(c.pass && c.gap.abs() < 1e-15);
        let bad = Block2x2::new(
            HermitianMatrix::identity(2),
            ComplexMatrix::identity(2).scale(2.0),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        assert!(matches!(
            check_block_lieb(Functional::Trace, &bad, DEFAULT_TOL),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn gm_lieb_examples() {
        let x = crate::sampling::random_pd(3, 4, 10.0).unwrap();
        let c = check_gm_lieb(Functional::Determinant, &x, &x, DEFAULT_TOL).unwrap();
        assert!(c.pass && c.gap.abs() < 1e-10);
        let c = check_gm_lieb(
            Functional::Trace,
            &HermitianMatrix::identity(2),
            &HermitianMatrix::scalar(2, 4.0),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(c.pass);
        assert!(c.gap.abs() < 1e-14);
        assert!(check_gm_lieb(
            Functional::Trace,
            &HermitianMatrix::from_real_diag(&[1.0, 0.0]),
            &HermitianMatrix::identity(2),
            DEFAULT_TOL
        )
        .is_err());
    }
}
