use std::cell::OnceCell;

use crate::block::{assemble, cartesian_parts, is_ppt, Block2x2, STRICT_TOL};
use crate::certificate::{rayleigh_quotient, Certificate};
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::linalg::{
    frac_power_quarter_half, geometric_mean, herm_eig, polar, psd_sqrt, require_pd,
    singular_values, ComplexMatrix, HermitianMatrix, PolarFactors,
};
use crate::sampling::SampleRng;

/// Floor applied to singular values before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-300;

/// Number of upward perturbations tried by [`verify_extremal_gm`].
pub const EXTREMAL_DIRECTIONS: usize = 10;

/// Relative size `ε / ‖G‖_F` of the extremal perturbations.
pub const EXTREMAL_STEP: f64 = 1e-3;

/// Fails with `NotPpt` unless `b` is PPT at `τ_strict`; with `need_pd`, also
/// requires `A` and `B` positive definite.
pub fn check_preconditions(b: &Block2x2, need_pd: bool) -> Result<()> {
    let c = is_ppt(b, STRICT_TOL)?;
    if !c.pass {
        return Err(Error::NotPpt { gap: c.gap });
    }
    if need_pd {
        require_pd(b.a())?;
        require_pd(b.b())?;
    }
    Ok(())
}

fn descending_eigs(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(herm_eig(h)?
        .eigenvalues
        .into_iter()
        .map(|l| l.max(0.0))
        .collect())
}

fn log_product(s: &[f64], k: usize) -> f64 {
    s[..k].iter().map(|v| v.max(LOG_FLOOR).ln()).sum()
}

/// Quantities shared by the verifiers of a single PD-cornered PPT block,
/// computed on first use.
pub struct Context<'a> {
    block: &'a Block2x2,
    tol: f64,
    g: HermitianMatrix,
    sx: Vec<f64>,
    sg: Vec<f64>,
    polar: OnceCell<PolarFactors>,
    rhs_main: OnceCell<HermitianMatrix>,
    s_root_product: OnceCell<Vec<f64>>,
    s_mean: OnceCell<Vec<f64>>,
}

impl<'a> Context<'a> {
    /// Checks the PPT and PD preconditions, then computes `G = A#B` and the
    /// singular values of `X` and `G`.
    pub fn new(block: &'a Block2x2, tol: f64) -> Result<Self> {
        check_preconditions(block, true)?;
        Self::unchecked(block, tol)
    }

    pub(crate) fn unchecked(block: &'a Block2x2, tol: f64) -> Result<Self> {
        let g = geometric_mean(block.a(), block.b())?;
        let sx = singular_values(block.x())?;
        let sg = descending_eigs(&g)?;
        Ok(Self {
            block,
            tol,
            g,
            sx,
            sg,
            polar: OnceCell::new(),
            rhs_main: OnceCell::new(),
            s_root_product: OnceCell::new(),
            s_mean: OnceCell::new(),
        })
    }

    pub fn geometric_mean(&self) -> &HermitianMatrix {
        &self.g
    }

    fn n(&self) -> usize {
        self.block.n()
    }

    fn polar(&self) -> Result<&PolarFactors> {
        if self.polar.get().is_none() {
            let _ = self.polar.set(polar(self.block.x())?);
        }
        Ok(self.polar.get().expect("set above"))
    }

    /// `U*GU` for the polar factor `U` of `X`.
    fn rotated_mean(&self) -> Result<HermitianMatrix> {
        Ok(self.g.congruence(&self.polar()?.unitary))
    }

    fn rhs_main(&self) -> Result<&HermitianMatrix> {
        if self.rhs_main.get().is_none() {
            let r = geometric_mean(&self.g, &self.rotated_mean()?)?;
            let _ = self.rhs_main.set(r);
        }
        Ok(self.rhs_main.get().expect("set above"))
    }

    /// Singular values of `A^{1/2} B^{1/2}`.
    fn s_root_product(&self) -> Result<&[f64]> {
        if self.s_root_product.get().is_none() {
            let p = psd_sqrt(self.block.a())?.as_matrix() * psd_sqrt(self.block.b())?.as_matrix();
            let _ = self.s_root_product.set(singular_values(&p)?);
        }
        Ok(self.s_root_product.get().expect("set above"))
    }

    /// Eigenvalues (equivalently singular values) of `(A+B)/2`.
    fn s_mean(&self) -> Result<&[f64]> {
        if self.s_mean.get().is_none() {
            let m = (self.block.a() + self.block.b()).scale(0.5);
            let _ = self.s_mean.set(descending_eigs(&m)?);
        }
        Ok(self.s_mean.get().expect("set above"))
    }

    /// `|X| ≤ G # U*GU`.
    pub fn main(&self) -> Result<Certificate> {
        let modulus = &self.polar()?.modulus;
        Certificate::loewner(
            "main",
            "|X|",
            "G # U*GU",
            self.rhs_main()? - modulus,
            self.tol,
        )
    }

    /// `|X| ≤ (G + U*GU)/2`, plus `G # U*GU ≤ (G + U*GU)/2`.
    pub fn lee(&self) -> Result<Certificate> {
        let modulus = &self.polar()?.modulus;
        let rhs = (&self.g + &self.rotated_mean()?).scale(0.5);
        let bound =
            Certificate::loewner("lee_bound", "|X|", "(G + U*GU)/2", &rhs - modulus, self.tol)?;
        let strength = Certificate::loewner(
            "lee_weaker_than_main",
            "G # U*GU",
            "(G + U*GU)/2",
            &rhs - self.rhs_main()?,
            self.tol,
        )?;
        Ok(Certificate::chain(
            "lee",
            "|X|",
            "(G + U*GU)/2",
            vec![bound, strength],
        ))
    }

    /// `L(|X|) ≤ L(G)` for each functional.
    pub fn lieb_gm(&self, functionals: &[Functional]) -> Result<Certificate> {
        let mut links = Vec::with_capacity(functionals.len());
        for &l in functionals {
            l.validate(self.n())?;
            let name = format!("lieb_gm[{l}]");
            let link = match l {
                Functional::Determinant | Functional::TopKSingularProduct(_) => {
                    let k = match l {
                        Functional::TopKSingularProduct(k) => k,
                        _ => self.n(),
                    };
                    Certificate::scalar_scaled(
                        &name,
                        "log L(|X|)",
                        "log L(G)",
                        log_product(&self.sx, k),
                        log_product(&self.sg, k),
                        self.tol,
                        1.0,
                    )
                }
                l if l.is_singular_value_function() => Certificate::scalar(
                    &name,
                    "L(|X|)",
                    "L(G)",
                    l.evaluate_singulars(&self.sx)?,
                    l.evaluate_singulars(&self.sg)?,
                    self.tol,
                ),
                l => Certificate::scalar(
                    &name,
                    "L(|X|)",
                    "L(G)",
                    l.evaluate_real(&self.polar()?.modulus)?,
                    l.evaluate_real(&self.g)?,
                    self.tol,
                ),
            };
            links.push(link);
        }
        if links.is_empty() {
            return Err(Error::InvalidParameter("no functionals selected".into()));
        }
        Ok(Certificate::chain("lieb_gm", "L(|X|)", "L(A#B)", links))
    }

    /// `‖X‖ ≤ ‖G‖ ≤ ‖A^{1/2}B^{1/2}‖ ≤ ‖A+B‖/2` for each norm.
    pub fn norm_chain(&self, norms: &[Functional]) -> Result<Certificate> {
        let mut chains = Vec::with_capacity(norms.len());
        for &norm in norms {
            require_norm(norm)?;
            norm.validate(self.n())?;
            let x = norm.evaluate_singulars(&self.sx)?;
            let g = norm.evaluate_singulars(&self.sg)?;
            let p = norm.evaluate_singulars(self.s_root_product()?)?;
            let m = norm.evaluate_singulars(self.s_mean()?)?;
            let tol = self.tol;
            chains.push(Certificate::chain(
                &format!("norm_chain[{norm}]"),
                "‖X‖",
                "‖A+B‖/2",
                vec![
                    Certificate::scalar("norm_x_gm", "‖X‖", "‖A#B‖", x, g, tol),
                    Certificate::scalar("norm_gm_root", "‖A#B‖", "‖A^{1/2}B^{1/2}‖", g, p, tol),
                    Certificate::scalar("norm_root_mean", "‖A^{1/2}B^{1/2}‖", "‖A+B‖/2", p, m, tol),
                ],
            ));
        }
        if chains.is_empty() {
            return Err(Error::InvalidParameter("no norms selected".into()));
        }
        Ok(Certificate::chain("norm_chain", "‖X‖", "‖A+B‖/2", chains))
    }

    /// `tr(X*X) ≤ tr((A#B)²) ≤ tr(AB) ≤ tr((A+B)²)/2`.
    pub fn trace_chain(&self) -> Result<Certificate> {
        let (a, b) = (self.block.a(), self.block.b());
        let x2: f64 = self.sx.iter().map(|s| s * s).sum();
        let g2: f64 = self.sg.iter().map(|s| s * s).sum();
        let ab = (a.as_matrix() * b.as_matrix()).trace().re;
        let sum = a + b;
        let half_sq = 0.5 * (sum.as_matrix() * sum.as_matrix()).trace().re;
        let tol = self.tol;
        Ok(Certificate::chain(
            "trace_chain",
            "tr(X*X)",
            "tr((A+B)²)/2",
            vec![
                Certificate::scalar("trace_x_gm", "tr(X*X)", "tr((A#B)²)", x2, g2, tol),
                Certificate::scalar("trace_gm_ab", "tr((A#B)²)", "tr(AB)", g2, ab, tol),
                Certificate::scalar("trace_ab_sum", "tr(AB)", "tr((A+B)²)/2", ab, half_sq, tol),
            ],
        ))
    }

    /// Log-space chain `Π s_j(X) ≤ Π s_j(A#B) ≤ Π s_j(B^{1/4}A^{1/2}B^{1/4})
    /// ≤ Π s_j(A^{1/2}B^{1/2})` over `j ≤ k`. At `k = n` the last two links
    /// are determinant identities and are checked as equalities.
    pub fn sv_product(&self, k: usize) -> Result<Certificate> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!(
                "k must lie in 1..={n}, got {k}"
            )));
        }
        let quarter = frac_power_quarter_half(self.block.a(), self.block.b())?;
        let sq = descending_eigs(&quarter)?;
        let lx = log_product(&self.sx, k);
        let lg = log_product(&self.sg, k);
        let lq = log_product(&sq, k);
        let lp = log_product(self.s_root_product()?, k);
        let tol = self.tol;
        let link = |name: &str, lhs: &str, rhs: &str, l: f64, r: f64| {
            if k == n {
                Certificate::identity(name, lhs, rhs, l, r, tol, 1.0)
            } else {
                Certificate::scalar_scaled(name, lhs, rhs, l, r, tol, 1.0)
            }
        };
        Ok(Certificate::chain(
            &format!("sv_product[k={k}]"),
            "log Π s_j(X)",
            "log Π s_j(A^{1/2}B^{1/2})",
            vec![
                Certificate::scalar_scaled(
                    "sv_x_gm",
                    "log Π s_j(X)",
                    "log Π s_j(A#B)",
                    lx,
                    lg,
                    tol,
                    1.0,
                ),
                link(
                    "sv_gm_quarter",
                    "log Π s_j(A#B)",
                    "log Π s_j(B^{1/4}A^{1/2}B^{1/4})",
                    lg,
                    lq,
                ),
                link(
                    "sv_quarter_root",
                    "log Π s_j(B^{1/4}A^{1/2}B^{1/4})",
                    "log Π s_j(A^{1/2}B^{1/2})",
                    lq,
                    lp,
                ),
            ],
        ))
    }

    /// [`Context::sv_product`] for every `k` in `1..=n`.
    pub fn sv_product_all(&self) -> Result<Certificate> {
        let links = (1..=self.n())
            .map(|k| self.sv_product(k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate::chain(
            "sv_product",
            "Π s_j(X)",
            "Π s_j(A^{1/2}B^{1/2})",
            links,
        ))
    }

    /// `s_j(X) ≤ s_i(A#B) ≤ s_i((A+B)/2)` with `i = ⌊(j+1)/2⌋`, for all `j`.
    pub fn half_index(&self) -> Result<Certificate> {
        let sm = self.s_mean()?;
        let mut links = Vec::with_capacity(self.n());
        for j in 1..=self.n() {
            let i = j.div_ceil(2);
            links.push(Certificate::chain(
                &format!("half_index[j={j}]"),
                &format!("s_{j}(X)"),
                &format!("s_{i}((A+B)/2)"),
                vec![
                    Certificate::scalar(
                        "half_index_x_gm",
                        &format!("s_{j}(X)"),
                        &format!("s_{i}(A#B)"),
                        self.sx[j - 1],
                        self.sg[i - 1],
                        self.tol,
                    ),
                    Certificate::scalar(
                        "half_index_gm_mean",
                        &format!("s_{i}(A#B)"),
                        &format!("s_{i}((A+B)/2)"),
                        self.sg[i - 1],
                        sm[i - 1],
                        self.tol,
                    ),
                ],
            ));
        }
        Ok(Certificate::chain(
            "half_index",
            "s_j(X)",
            "s_[(j+1)/2]((A+B)/2)",
            links,
        ))
    }

    /// `∓Re(X) ≤ A#B` and `∓Im(X) ≤ A#B`.
    pub fn re_im(&self) -> Result<Certificate> {
        let (re, im) = cartesian_parts(self.block.x());
        let g = &self.g;
        let tol = self.tol;
        Ok(Certificate::chain(
            "re_im",
            "∓Re(X), ∓Im(X)",
            "A#B",
            vec![
                Certificate::loewner("re_plus", "Re(X)", "A#B", g - &re, tol)?,
                Certificate::loewner("re_minus", "-Re(X)", "A#B", g + &re, tol)?,
                Certificate::loewner("im_plus", "Im(X)", "A#B", g - &im, tol)?,
                Certificate::loewner("im_minus", "-Im(X)", "A#B", g + &im, tol)?,
            ],
        ))
    }
}

fn require_norm(f: Functional) -> Result<()> {
    if f.is_norm() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{f} is not a unitarily invariant norm"
        )))
    }
}

pub fn verify_main(b: &Block2x2, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.main()
}

pub fn verify_lee(b: &Block2x2, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.lee()
}

pub fn verify_lieb_gm(b: &Block2x2, l: Functional, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.lieb_gm(&[l])
}

pub fn verify_norm_chain(b: &Block2x2, norm: Functional, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.norm_chain(&[norm])
}

pub fn verify_trace_chain(b: &Block2x2, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.trace_chain()
}

pub fn verify_singular_product_chain(b: &Block2x2, k: usize, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.sv_product(k)
}

pub fn verify_half_index(b: &Block2x2, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.half_index()
}

pub fn verify_re_im(b: &Block2x2, tol: f64) -> Result<Certificate> {
    Context::new(b, tol)?.re_im()
}

/// `‖H‖ ≤ ‖A+B‖` for each norm, with the singular values of `A+B` padded by
/// zeros to length `2n`. The trace norm gives `tr H = tr(A+B)` and is
/// checked as an equality.
pub fn hiroshima_unchecked(b: &Block2x2, norms: &[Functional], tol: f64) -> Result<Certificate> {
    let n = b.n();
    let sh = descending_eigs(&assemble(b))?;
    let mut ssum = descending_eigs(&(b.a() + b.b()))?;
    ssum.resize(2 * n, 0.0);
    let mut links = Vec::with_capacity(norms.len());
    for &norm in norms {
        require_norm(norm)?;
        norm.validate(n)?;
        let lhs = norm.evaluate_singulars(&sh)?;
        let rhs = norm.evaluate_singulars(&ssum)?;
        let name = format!("hiroshima[{norm}]");
        let trace_norm = match norm {
            Functional::Schatten(p) => p == 1.0,
            Functional::KyFan(k) => k >= 2 * n,
            _ => false,
        };
        links.push(if trace_norm {
            Certificate::identity(&name, "‖H‖", "‖A+B‖", lhs, rhs, tol, rhs.abs().max(1.0))
        } else {
            Certificate::scalar(&name, "‖H‖", "‖A+B‖", lhs, rhs, tol)
        });
    }
    if links.is_empty() {
        return Err(Error::InvalidParameter("no norms selected".into()));
    }
    Ok(Certificate::chain("hiroshima", "‖H‖", "‖A+B‖", links))
}

pub fn verify_hiroshima(b: &Block2x2, norm: Functional, tol: f64) -> Result<Certificate> {
    check_preconditions(b, false)?;
    hiroshima_unchecked(b, &[norm], tol)
}

/// Extremal property of `G = X#Y`: `[[X, G], [G, Y]] ≥ 0`, and for
/// [`EXTREMAL_DIRECTIONS`] random unit PSD directions `D` the block with
/// `G + εD`, `ε = EXTREMAL_STEP · ‖G‖_F`, is not PSD. Each failure is
/// recorded through the Rayleigh quotient of the computed witness, which must
/// lie below `-τ · scale`.
pub fn verify_extremal_gm(
    x: &HermitianMatrix,
    y: &HermitianMatrix,
    seed: u64,
    tol: f64,
) -> Result<Certificate> {
    require_pd(x)?;
    require_pd(y)?;
    let n = x.n();
    let g = geometric_mean(x, y)?;
    let block =
        |z: &ComplexMatrix| HermitianMatrix::project(&ComplexMatrix::from_blocks(x, z, z, y));
    let mut links = vec![Certificate::psd(
        "extremal_gm_block",
        "[[X, X#Y], [X#Y, Y]]",
        block(&g),
        tol,
    )?];
    let eps = EXTREMAL_STEP * g.frobenius_norm();
    let mut rng = SampleRng::new(seed);
    for i in 0..EXTREMAL_DIRECTIONS {
        let d = rng.wishart(n, 1 + i % n);
        let d = d.scale(1.0 / d.frobenius_norm());
        let h = block(&(g.as_matrix() + d.scale(eps).as_matrix()));
        let es = herm_eig(&h)?;
        let w = es.min_vector();
        let rq = rayleigh_quotient(&h, &w);
        let scale = h.frobenius_norm().max(1.0);
        links.push(Certificate::scalar_scaled(
            "extremal_gm_perturbation",
            "w*H_εw / w*w",
            "-2τ·scale",
            rq,
            -2.0 * tol * scale,
            tol,
            scale,
        ));
    }
    Ok(Certificate::chain("extremal_gm", "Z", "X#Y", links))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_TOL;

    fn scalar_block(n: usize, a: f64, x: f64, b: f64) -> Block2x2 {
        Block2x2::new(
            HermitianMatrix::scalar(n, a),
            ComplexMatrix::identity(n).scale(x),
            HermitianMatrix::scalar(n, b),
        )
        .unwrap()
    }

    fn scalars(c: &Certificate) -> Vec<(f64, f64)> {
        c.links()
            .iter()
            .flat_map(|l| l.links())
            .map(|l| match l.evidence {
                crate::certificate::Evidence::Scalar { lhs, rhs }
                | crate::certificate::Evidence::Identity { lhs, rhs } => (lhs, rhs),
                _ => panic!("not scalar"),
            })
            .collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn main_and_lee_on_half_identity() {
        let b = scalar_block(2, 1.0, 0.5, 1.0);
        let c = verify_main(&b, DEFAULT_TOL).unwrap();
        assert!(c.pass && close(c.gap, 0.5));
        let c = verify_lee(&b, DEFAULT_TOL).unwrap();
        assert!(c.pass);
        // both right-hand sides equal I here
        assert!(c.links()[1].gap.abs() < 1e-12);
    }

    #[test]
    fn zero_offdiagonal() {
        let b = Block2x2::new(
            HermitianMatrix::from_real_diag(&[1.0, 2.0]),
            ComplexMatrix::zeros(2),
            HermitianMatrix::from_real_diag(&[3.0, 1.0]),
        )
        .unwrap();
        let ctx = Context::new(&b, DEFAULT_TOL).unwrap();
        for c in [
            ctx.main().unwrap(),
            ctx.lee().unwrap(),
            ctx.lieb_gm(&[Functional::Trace, Functional::Determinant])
                .unwrap(),
            ctx.trace_chain().unwrap(),
            ctx.sv_product_all().unwrap(),
            ctx.half_index().unwrap(),
            ctx.re_im().unwrap(),
        ] {
            assert!(c.pass, "{}", c.name);
        }
    }

    #[test]
    fn lieb_trace_example() {
        let c = verify_lieb_gm(
            &scalar_block(2, 1.0, 0.5, 1.0),
            Functional::Trace,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(scalars(&c), vec![(1.0, 2.0)]);
    }

    #[test]
    fn norm_chain_examples() {
        let c = verify_norm_chain(
            &scalar_block(2, 1.0, 0.5, 1.0),
            Functional::OperatorNorm,
            DEFAULT_TOL,
        )
        .unwrap();
        let v = scalars(&c);
        assert!(close(v[0].0, 0.5) && close(v[0].1, 1.0));
        assert!(close(v[1].1, 1.0) && close(v[2].1, 1.0));
        let c = verify_norm_chain(
            &scalar_block(1, 4.0, 1.0, 9.0),
            Functional::Schatten(1.0),
            DEFAULT_TOL,
        )
        .unwrap();
        let v = scalars(&c);
        assert!(close(v[0].0, 1.0) && close(v[0].1, 6.0));
        assert!(close(v[1].1, 6.0) && close(v[2].1, 6.5));
        assert!(verify_norm_chain(
            &scalar_block(1, 4.0, 1.0, 9.0),
            Functional::Trace,
            DEFAULT_TOL
        )
        .is_err());
    }

    #[test]
    fn trace_chain_example() {
        let c = verify_trace_chain(&scalar_block(2, 1.0, 0.5, 1.0), DEFAULT_TOL).unwrap();
        let v = scalars(&c);
        assert!(close(v[0].0, 0.5) && close(v[0].1, 2.0));
        assert!(close(v[1].1, 2.0) && close(v[2].1, 4.0));
    }

    #[test]
    fn sv_product_full_rank_is_determinant() {
        let c =
            verify_singular_product_chain(&scalar_block(2, 1.0, 0.5, 1.0), 2, DEFAULT_TOL).unwrap();
        assert!(c.pass && !c.marginal);
        let v = scalars(&c);
        assert!(close(v[0].0, 0.25f64.ln()) && close(v[0].1, 0.0));
        assert!(matches!(
            c.links()[1].evidence,
            crate::certificate::Evidence::Identity { .. }
        ));
        assert!(
            verify_singular_product_chain(&scalar_block(2, 1.0, 0.5, 1.0), 3, DEFAULT_TOL).is_err()
        );
    }

    #[test]
    fn sv_product_of_zero_is_floored() {
        let c =
            verify_singular_product_chain(&scalar_block(2, 1.0, 0.0, 1.0), 1, DEFAULT_TOL).unwrap();
        assert!(c.pass);
        assert!(close(scalars(&c)[0].0, LOG_FLOOR.ln()));
    }

    #[test]
    fn half_index_scalars() {
        let c = verify_half_index(&scalar_block(1, 4.0, 1.5, 9.0), DEFAULT_TOL).unwrap();
        let v = scalars(&c);
        assert!(close(v[0].0, 1.5) && close(v[0].1, 6.0));
        let c = verify_half_index(&scalar_block(2, 1.0, 0.5, 1.0), DEFAULT_TOL).unwrap();
        assert!(c.pass && c.links().len() == 2);
    }

    #[test]
    fn hiroshima_examples() {
        let c = verify_hiroshima(
            &scalar_block(2, 1.0, 0.0, 1.0),
            Functional::OperatorNorm,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(scalars(&c), vec![(1.0, 2.0)]);
        let c = verify_hiroshima(
            &scalar_block(2, 1.0, 0.5, 1.0),
            Functional::OperatorNorm,
            DEFAULT_TOL,
        )
        .unwrap();
        let v = scalars(&c);
        assert!(close(v[0].0, 1.5) && close(v[0].1, 2.0));
        let c = verify_hiroshima(
            &scalar_block(2, 1.0, 0.5, 1.0),
            Functional::Schatten(1.0),
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(c.pass && !c.marginal);
    }

    #[test]
    fn re_im_examples() {
        let c = verify_re_im(&scalar_block(2, 1.0, 0.5, 1.0), DEFAULT_TOL).unwrap();
        assert!(c.pass);
        let gaps: Vec<f64> = c.links().iter().map(|l| l.gap).collect();
        assert!(close(gaps[0], 0.5) && close(gaps[1], 1.5) && close(gaps[2], 1.0));
        let b = Block2x2::new(
            HermitianMatrix::identity(2),
            ComplexMatrix::identity(2).scale_complex(num_complex::Complex64::new(0.0, 0.5)),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        let c = verify_re_im(&b, DEFAULT_TOL).unwrap();
        let gaps: Vec<f64> = c.links().iter().map(|l| l.gap).collect();
        assert!(close(gaps[0], 1.0) && close(gaps[2], 0.5) && close(gaps[3], 1.5));
    }

    #[test]
    fn preconditions() {
        let not_ppt = scalar_block(2, 1.0, 2.0, 1.0);
        assert!(matches!(
            verify_main(&not_ppt, DEFAULT_TOL),
            Err(Error::NotPpt { .. })
        ));
        let singular = Block2x2::new(
            HermitianMatrix::from_real_diag(&[1.0, 0.0]),
            ComplexMatrix::zeros(2),
            HermitianMatrix::identity(2),
        )
        .unwrap();
        assert!(matches!(
            verify_main(&singular, DEFAULT_TOL),
            Err(Error::NotPd { .. })
        ));
        assert!(
            verify_hiroshima(&singular, Functional::OperatorNorm, DEFAULT_TOL)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn extremal_examples() {
        let i = HermitianMatrix::identity(2);
        let c = verify_extremal_gm(&i, &i, 1, DEFAULT_TOL).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(c.links()[0].gap.abs() < 1e-14);
        let c = verify_extremal_gm(&i, &HermitianMatrix::scalar(2, 4.0), 2, DEFAULT_TOL).unwrap();
        assert!(c.pass);
        assert!(c.links().iter().all(Certificate::recheck));
    }

    #[test]
    fn scaling_keeps_verdicts() {
        let b = crate::sampling::random_ppt_separable(3, 11, 4).unwrap();
        let base = verify_main(&b, DEFAULT_TOL).unwrap();
        for c in [1e-3, 1e3] {
            let s = verify_main(&b.scaled(c), DEFAULT_TOL).unwrap();
            assert_eq!(s.pass, base.pass);
            assert!((s.gap - c * base.gap).abs() <= 1e-9 * c.max(1.0));
        }
    }
}
