//! `2 x 2` block matrices `H = [[A, X], [X*, B]]`, the partial transpose,
//! positivity and PPT certification, and the block transformations that
//! preserve positivity or the PPT property.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::linalg::{geometric_mean, pd_inverse, require_pd, ComplexMatrix, HermitianMatrix};

/// `τ_strict`: tolerance used when a block must be PPT beyond doubt.
pub const STRICT_TOL: f64 = 1e-10;

/// The triple `(A, X, B)` representing `H = [[A, X], [X*, B]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block2x2 {
    #[serde(rename = "A")]
    a: HermitianMatrix,
    #[serde(rename = "X")]
    x: ComplexMatrix,
    #[serde(rename = "B")]
    b: HermitianMatrix,
}

impl Block2x2 {
    pub fn new(a: HermitianMatrix, x: ComplexMatrix, b: HermitianMatrix) -> Result<Self> {
        let n = a.n();
        for found in [x.n(), b.n()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        Ok(Self { a, x, b })
    }

    /// Splits a `2n x 2n` Hermitian matrix into its four `n x n` blocks.
    pub fn split(h: &HermitianMatrix, n: usize) -> Result<Self> {
        if h.n() != 2 * n || n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: h.n(),
            });
        }
        let a = HermitianMatrix::project(&h.sub_block(0, 0, n));
        let x = h.sub_block(0, n, n);
        let b = HermitianMatrix::project(&h.sub_block(n, n, n));
        Ok(Self { a, x, b })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn b(&self) -> &HermitianMatrix {
        &self.b
    }

    /// `(cA, cX, cB)`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            a: self.a.scale(c),
            x: self.x.scale(c),
            b: self.b.scale(c),
        }
    }

    pub fn with_x(&self, x: ComplexMatrix) -> Self {
        assert_eq!(x.n(), self.n());
        Self {
            a: self.a.clone(),
            x,
            b: self.b.clone(),
        }
    }

    /// Parses either `{"A": .., "X": .., "B": ..}` or the flat form: a matrix
    /// object whose `re`/`im` arrays are `2n x 2n` and whose `"n"` names the
    /// block size.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("block must be a JSON object".into()))?;
        if obj.contains_key("A") {
            let field = |key: &str| {
                obj.get(key)
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("block is missing \"{key}\"")))
            };
            let parse = |key: &str| -> Result<ComplexMatrix> {
                serde_json::from_value(field(key)?)
                    .map_err(|e| Error::Parse(format!("block \"{key}\": {e}")))
            };
            let a = HermitianMatrix::new(parse("A")?)?;
            let x = parse("X")?;
            let b = HermitianMatrix::new(parse("B")?)?;
            return Self::new(a, x, b);
        }
        let (n, m) = ComplexMatrix::from_json_value_loose(v)?;
        if m.n() == n {
            return Err(Error::Parse(format!(
                "flat block form needs 2n x 2n arrays with \"n\" the block size, got n = {n} and {0}x{0} arrays",
                m.n()
            )));
        }
        Self::split(&HermitianMatrix::new(m)?, n)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_json_value(&v)
    }
}

impl<'de> Deserialize<'de> for Block2x2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Block2x2::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}

/// `H = [[A, X], [X*, B]]`.
pub fn assemble(b: &Block2x2) -> HermitianMatrix {
    HermitianMatrix::project(&ComplexMatrix::from_blocks(
        &b.a,
        &b.x,
        &b.x.adjoint(),
        &b.b,
    ))
}

/// `(A, X, B) ↦ (A, X*, B)`.
pub fn partial_transpose(b: &Block2x2) -> Block2x2 {
    Block2x2 {
        a: b.a.clone(),
        x: b.x.adjoint(),
        b: b.b.clone(),
    }
}

pub fn is_positive(b: &Block2x2, tol: f64) -> Result<Certificate> {
    Certificate::psd("is_positive", "H", assemble(b), tol)
}

/// Both `H` and `H^τ` positive semidefinite; the gap is the smaller of the two.
pub fn is_ppt(b: &Block2x2, tol: f64) -> Result<Certificate> {
    let h = Certificate::psd("is_positive", "H", assemble(b), tol)?;
    let ht = Certificate::psd("is_positive", "H^τ", assemble(&partial_transpose(b)), tol)?;
    Ok(Certificate::chain("is_ppt", "0", "H, H^τ", vec![h, ht]))
}

/// PPT test through the two Schur complements `B - X*A⁻¹X` and `B - XA⁻¹X*`.
/// Requires `A` positive definite.
pub fn schur_criterion(b: &Block2x2, tol: f64) -> Result<Certificate> {
    let a_inv = pd_inverse(&b.a)?;
    let x_star = b.x.adjoint();
    let s1 = HermitianMatrix::project(&(b.b.as_matrix() - &(&(&x_star * &a_inv) * &b.x)));
    let s2 = HermitianMatrix::project(&(b.b.as_matrix() - &(&(&b.x * &a_inv) * &x_star)));
    let c1 = Certificate::psd("schur", "B - X*A⁻¹X", s1, tol)?;
    let c2 = Certificate::psd("schur", "B - XA⁻¹X*", s2, tol)?;
    Ok(Certificate::chain(
        "schur_criterion",
        "0",
        "Schur complements",
        vec![c1, c2],
    ))
}

/// `(A, -X, B)`.
pub fn negate_offdiag(b: &Block2x2) -> Block2x2 {
    b.with_x(-&b.x)
}

/// `(B, X*, A)`.
pub fn swap_blocks(b: &Block2x2) -> Block2x2 {
    Block2x2 {
        a: b.b.clone(),
        x: b.x.adjoint(),
        b: b.a.clone(),
    }
}

/// Certifies `[[0, X], [X*, 0]] ≤ H/2`.
pub fn offdiag_compression(b: &Block2x2, tol: f64) -> Result<Certificate> {
    let n = b.n();
    let zero = ComplexMatrix::zeros(n);
    let off = ComplexMatrix::from_blocks(&zero, &b.x, &b.x.adjoint(), &zero);
    let half = assemble(b).scale(0.5);
    Certificate::loewner(
        "offdiag_compression",
        "[[0, X], [X*, 0]]",
        "H/2",
        HermitianMatrix::project(&(half.as_matrix() - &off)),
        tol,
    )
}

/// The eight sign, transpose and swap variants
/// `(A, ∓X, B)`, `(A, ∓X*, B)`, `(B, ∓X*, A)`, `(B, ∓X, A)`.
pub fn ppt_variants(b: &Block2x2) -> Vec<Block2x2> {
    let x = &b.x;
    let xs = b.x.adjoint();
    let mk = |a: &HermitianMatrix, off: ComplexMatrix, d: &HermitianMatrix| Block2x2 {
        a: a.clone(),
        x: off,
        b: d.clone(),
    };
    vec![
        mk(&b.a, x.clone(), &b.b),
        mk(&b.a, -x, &b.b),
        mk(&b.a, xs.clone(), &b.b),
        mk(&b.a, -&xs, &b.b),
        mk(&b.b, xs.clone(), &b.a),
        mk(&b.b, -&xs, &b.a),
        mk(&b.b, x.clone(), &b.a),
        mk(&b.b, -x, &b.a),
    ]
}

/// `(A, e^{iθ}X, B)`.
pub fn rotate_offdiag(b: &Block2x2, theta: f64) -> Block2x2 {
    b.with_x(b.x.scale_complex(Complex64::from_polar(1.0, theta)))
}

/// `((A+B)/2, X, (A+B)/2)`.
pub fn average_diagonal(b: &Block2x2) -> Block2x2 {
    let m = (&b.a + &b.b).scale(0.5);
    Block2x2 {
        a: m.clone(),
        x: b.x.clone(),
        b: m,
    }
}

/// `(A₁#A₂, X, B₁#B₂)` for two blocks sharing the same off-diagonal block.
pub fn ando_mix(b1: &Block2x2, b2: &Block2x2) -> Result<Block2x2> {
    if b1.n() != b2.n() {
        return Err(Error::DimensionMismatch {
            expected: b1.n(),
            found: b2.n(),
        });
    }
    let diff = (&b1.x - &b2.x).frobenius_norm();
    if diff > 1e-12 * b1.x.frobenius_norm().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "blocks must share the off-diagonal block (difference {diff:.3e})"
        )));
    }
    for m in [&b1.b, &b2.b] {
        require_pd(m)?;
    }
    Ok(Block2x2 {
        a: geometric_mean(&b1.a, &b2.a)?,
        x: b1.x.clone(),
        b: geometric_mean(&b1.b, &b2.b)?,
    })
}

/// `(A#B, X, A#B)`.
pub fn geometric_mean_block(b: &Block2x2) -> Result<Block2x2> {
    require_pd(&b.b)?;
    let g = geometric_mean(&b.a, &b.b)?;
    Ok(Block2x2 {
        a: g.clone(),
        x: b.x.clone(),
        b: g,
    })
}

/// `Re(X) = (X + X*)/2` and `Im(X) = (X - X*)/(2i)`.
pub fn cartesian_parts(x: &ComplexMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let xs = x.adjoint();
    let re = (x + &xs).scale(0.5);
    let im = (x - &xs).scale_complex(Complex64::new(0.0, -0.5));
    (HermitianMatrix::project(&re), HermitianMatrix::project(&im))
}

/// `W = diag(e^{iθ} I, I)`.
pub fn phase_unitary(n: usize, theta: f64) -> ComplexMatrix {
    let mut d = vec![Complex64::new(1.0, 0.0); 2 * n];
    for z in d.iter_mut().take(n) {
        *z = Complex64::from_polar(1.0, theta);
    }
    ComplexMatrix::from_diag(&d)
}

/// `J = (1/√2) [[I, -I], [I, I]]`.
pub fn hadamard_unitary(n: usize) -> ComplexMatrix {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let i = ComplexMatrix::identity(n).scale(c);
    ComplexMatrix::from_blocks(&i, &-&i, &i, &i)
}

/// `W M W*`.
pub fn conjugate(m: &HermitianMatrix, w: &ComplexMatrix) -> HermitianMatrix {
    m.congruence(&w.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{herm_eig, DEFAULT_TOL};

    fn scalar_block(n: usize, a: f64, x: f64, b: f64) -> Block2x2 {
        Block2x2::new(
            HermitianMatrix::scalar(n, a),
            ComplexMatrix::identity(n).scale(x),
            HermitianMatrix::scalar(n, b),
        )
        .unwrap()
    }

    fn shift_matrix() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    /// `b = (diag(½,0), [[0,½],[0,0]], diag(0,½))`: `H` is the projector onto
    /// `(e₁⊗e₁ + e₂⊗e₂)/√2` and `H^τ` has eigenvalue `-½`.
    fn entangled_projector() -> Block2x2 {
        Block2x2::new(
            HermitianMatrix::from_real_diag(&[0.5, 0.0]),
            shift_matrix().scale(0.5),
            HermitianMatrix::from_real_diag(&[0.0, 0.5]),
        )
        .unwrap()
    }

    #[test]
    fn assemble_identity_block() {
        let h = assemble(&scalar_block(2, 1.0, 0.0, 1.0));
        assert_eq!(h.as_matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn assemble_half_coupled_spectrum() {
        let es = herm_eig(&assemble(&scalar_block(3, 1.0, 0.5, 1.0))).unwrap();
        let expected = [1.5, 1.5, 1.5, 0.5, 0.5, 0.5];
        for (l, e) in es.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-14);
        }
    }

    #[test]
    fn assemble_projector_example() {
        // (diag(1,0), [[0,.5],[0,0]], diag(0,1)): couples e₁ with the second
        // B index only; spectrum is that of [[1, .5], [.5, 1]] plus zeros
        let b = Block2x2::new(
            HermitianMatrix::from_real_diag(&[1.0, 0.0]),
            shift_matrix().scale(0.5),
            HermitianMatrix::from_real_diag(&[0.0, 1.0]),
        )
        .unwrap();
        let es = herm_eig(&assemble(&b)).unwrap();
        let expected = [1.5, 0.5, 0.0, 0.0];
        for (l, e) in es.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-14, "{:?}", es.eigenvalues);
        }
    }

    #[test]
    fn split_round_trips() {
        let b = entangled_projector();
        assert_eq!(Block2x2::split(&assemble(&b), 2).unwrap(), b);
        assert!(Block2x2::split(&assemble(&b), 3).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(Block2x2::new(
            HermitianMatrix::identity(2),
            ComplexMatrix::zeros(3),
            HermitianMatrix::identity(2)
        )
        .is_err());
    }

    #[test]
    fn partial_transpose_examples() {
        let herm = Block2x2::new(
            HermitianMatrix::identity(2),
            ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 3.0]]),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(partial_transpose(&herm), herm);
        let b = Block2x2::new(
            HermitianMatrix::identity(2),
            shift_matrix(),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        assert_eq!(partial_transpose(&b).x(), &shift_matrix().adjoint());
        assert_eq!(partial_transpose(&partial_transpose(&b)), b);
    }

    #[test]
    fn positivity_examples() {
        assert!(
            is_positive(&scalar_block(2, 1.0, 0.0, 1.0), DEFAULT_TOL)
                .unwrap()
                .pass
        );
        let c = is_positive(&scalar_block(2, 1.0, 2.0, 1.0), DEFAULT_TOL).unwrap();
        assert!(!c.pass);
        assert!((c.gap + 1.0).abs() < 1e-14);
    }

    #[test]
    fn ppt_examples() {
        assert!(
            is_ppt(&scalar_block(2, 1.0, 0.5, 1.0), DEFAULT_TOL)
                .unwrap()
                .pass
        );
        let b = entangled_projector();
        assert!(is_positive(&b, DEFAULT_TOL).unwrap().pass);
        let c = is_ppt(&b, DEFAULT_TOL).unwrap();
        assert!(!c.pass);
        assert!((c.gap + 0.5).abs() < 1e-14);
        assert!(c.recheck());
    }

    #[test]
    fn schur_examples() {
        let c = schur_criterion(&scalar_block(2, 1.0, 0.5, 1.0), DEFAULT_TOL).unwrap();
        assert!(c.pass);
        assert!((c.gap - 0.75).abs() < 1e-14);
        let c = schur_criterion(&scalar_block(2, 1.0, 2.0, 1.0), DEFAULT_TOL).unwrap();
        assert!(!c.pass);
        assert!((c.gap + 3.0).abs() < 1e-14);
        let singular_a = Block2x2::new(
            HermitianMatrix::from_real_diag(&[1.0, 0.0]),
            ComplexMatrix::zeros(2),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        assert!(matches!(
            schur_criterion(&singular_a, DEFAULT_TOL),
            Err(Error::NotPd { .. })
        ));
    }

    #[test]
    fn sign_and_swap() {
        let b = scalar_block(2, 1.0, 0.5, 1.0);
        assert!(is_positive(&negate_offdiag(&b), DEFAULT_TOL).unwrap().pass);
        assert!(is_positive(&swap_blocks(&b), DEFAULT_TOL).unwrap().pass);
        let p = entangled_projector();
        assert_eq!(negate_offdiag(&negate_offdiag(&p)), p);
        let s = swap_blocks(&p);
        assert_eq!(s.a(), p.b());
        assert_eq!(s.x(), &p.x().adjoint());
    }

    #[test]
    fn compression_examples() {
        let c = offdiag_compression(&scalar_block(2, 1.0, 0.0, 1.0), DEFAULT_TOL).unwrap();
        assert!(c.pass);
        assert!((c.gap - 0.5).abs() < 1e-15);
        assert!(
            offdiag_compression(&scalar_block(2, 1.0, 0.5, 1.0), DEFAULT_TOL)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn variants_of_simple_blocks() {
        for b in [
            scalar_block(2, 1.0, 0.5, 1.0),
            scalar_block(2, 2.0, 0.0, 3.0),
        ] {
            let vs = ppt_variants(&b);
            assert_eq!(vs.len(), 8);
            for v in vs {
                assert!(is_positive(&v, DEFAULT_TOL).unwrap().pass);
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let b = entangled_projector();
        assert_eq!(rotate_offdiag(&b, 0.0), b);
        let r = rotate_offdiag(&b, std::f64::consts::PI);
        assert!((r.x() - negate_offdiag(&b).x()).max_abs() < 1e-16);
        let half = scalar_block(2, 1.0, 0.5, 1.0);
        let r = rotate_offdiag(&half, std::f64::consts::FRAC_PI_2);
        assert!((r.x()[(0, 0)] - Complex64::new(0.0, 0.5)).norm() < 1e-16);
        assert!(is_ppt(&r, DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn averaging_examples() {
        let b = scalar_block(2, 1.0, 0.3, 1.0);
        assert_eq!(average_diagonal(&b), b);
        let avg = average_diagonal(&scalar_block(2, 2.0, 0.5, 1.0));
        assert_eq!(avg, scalar_block(2, 1.5, 0.5, 1.5));
        assert!(is_ppt(&avg, DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn ando_examples() {
        let b = scalar_block(2, 1.0, 0.5, 2.0);
        let m = ando_mix(&b, &b).unwrap();
        assert!((assemble(&m).as_matrix() - assemble(&b).as_matrix()).max_abs() < 1e-14);
        let m = ando_mix(
            &scalar_block(2, 1.0, 0.0, 1.0),
            &scalar_block(2, 4.0, 0.0, 9.0),
        )
        .unwrap();
        assert!(
            (assemble(&m).as_matrix() - assemble(&scalar_block(2, 2.0, 0.0, 3.0)).as_matrix())
                .max_abs()
                < 1e-14
        );
        assert!(ando_mix(
            &scalar_block(2, 1.0, 0.1, 1.0),
            &scalar_block(2, 1.0, 0.2, 1.0)
        )
        .is_err());
    }

    #[test]
    fn mean_block_examples() {
        let b = scalar_block(2, 1.0, 0.5, 1.0);
        let g = geometric_mean_block(&b).unwrap();
        assert!((assemble(&g).as_matrix() - assemble(&b).as_matrix()).max_abs() < 1e-15);
        let g = geometric_mean_block(&scalar_block(2, 4.0, 1.0, 9.0)).unwrap();
        assert!(
            (assemble(&g).as_matrix() - assemble(&scalar_block(2, 6.0, 1.0, 6.0)).as_matrix())
                .max_abs()
                < 1e-14
        );
        assert!(is_ppt(&g, DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn cartesian_examples() {
        let h = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, -1.0]]);
        let (re, im) = cartesian_parts(&h);
        assert_eq!(re.as_matrix(), &h);
        assert_eq!(im.max_abs(), 0.0);

        let i = ComplexMatrix::identity(2).scale_complex(Complex64::new(0.0, 1.0));
        let (re, im) = cartesian_parts(&i);
        assert_eq!(re.max_abs(), 0.0);
        assert_eq!(im.as_matrix(), &ComplexMatrix::identity(2));

        let x = shift_matrix();
        let (re, im) = cartesian_parts(&x);
        assert_eq!(
            re.as_matrix(),
            &ComplexMatrix::from_real(&[&[0.0, 0.5], &[0.5, 0.0]])
        );
        assert_eq!(im[(0, 1)], Complex64::new(0.0, -0.5));
        assert_eq!(im[(1, 0)], Complex64::new(0.0, 0.5));
        let back = re.as_matrix() + &im.scale_complex(Complex64::new(0.0, 1.0));
        assert_eq!(back, x);
    }

    #[test]
    fn conjugation_by_phase_unitary_rotates() {
        let b = entangled_projector();
        let theta = 0.7;
        let w = phase_unitary(2, theta);
        let lhs = conjugate(&assemble(&b), &w);
        let rhs = assemble(&rotate_offdiag(&b, theta));
        assert!((lhs.as_matrix() - rhs.as_matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn block_json_forms() {
        let b = entangled_projector();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(Block2x2::from_json_str(&s).unwrap(), b);
        let flat = serde_json::json!({
            "n": 1,
            "re": [[2.0, 0.5], [0.5, 1.0]],
        });
        let f = Block2x2::from_json_value(&flat).unwrap();
        assert_eq!(f.x()[(0, 0)], Complex64::new(0.5, 0.0));
        let bad = Block2x2::from_json_str("{\"A\": 1");
        assert!(matches!(bad, Err(Error::Parse(_))));
    }
}
