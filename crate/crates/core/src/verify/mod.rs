//! Verifiers for the inequalities satisfied by PPT blocks, a registry that
//! runs a selection of them on one block, and the counterexample hunt.

mod hunt;
mod theorems;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::block::Block2x2;
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::linalg::DEFAULT_TOL;

pub use hunt::{
    check_violation, hunt_sj_counterexample, known_violation, replay, HuntConfig, HuntHit,
    HuntReport, ViolationCheck, CLIMB_STEPS, DEFAULT_HUNT_BUDGET,
};
pub use theorems::{
    check_preconditions, verify_extremal_gm, verify_half_index, verify_hiroshima, verify_lee,
    verify_lieb_gm, verify_main, verify_norm_chain, verify_re_im, verify_singular_product_chain,
    verify_trace_chain, Context, EXTREMAL_DIRECTIONS, EXTREMAL_STEP, LOG_FLOOR,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifierKind {
    Main,
    Lee,
    LiebGm,
    NormChain,
    TraceChain,
    SvProduct,
    HalfIndex,
    Hiroshima,
    ReIm,
}

impl VerifierKind {
    pub fn all() -> [VerifierKind; 9] {
        use VerifierKind::*;
        [
            Main, Lee, LiebGm, NormChain, TraceChain, SvProduct, HalfIndex, Hiroshima, ReIm,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            VerifierKind::Main => "main",
            VerifierKind::Lee => "lee",
            VerifierKind::LiebGm => "lieb_gm",
            VerifierKind::NormChain => "norm_chain",
            VerifierKind::TraceChain => "trace_chain",
            VerifierKind::SvProduct => "sv_product",
            VerifierKind::HalfIndex => "half_index",
            VerifierKind::Hiroshima => "hiroshima",
            VerifierKind::ReIm => "re_im",
        }
    }

    pub fn needs_pd(self) -> bool {
        self != VerifierKind::Hiroshima
    }

    /// Parses a comma-separated list, rejecting unknown names and empty lists.
    pub fn parse_list(s: &str) -> Result<Vec<VerifierKind>> {
        let mut kinds = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let k: VerifierKind = part.parse()?;
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
        if kinds.is_empty() {
            return Err(Error::InvalidParameter("empty verifier list".into()));
        }
        Ok(kinds)
    }
}

impl fmt::Display for VerifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VerifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VerifierKind::all()
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = VerifierKind::all().iter().map(|k| k.name()).collect();
                Error::InvalidParameter(format!(
                    "unknown verifier {s:?}; expected one of {}",
                    known.join(", ")
                ))
            })
    }
}

/// Ky Fan `k = 1..=n` and Schatten `1, 2, ∞`.
pub fn default_norms(n: usize) -> Vec<Functional> {
    let mut v: Vec<Functional> = (1..=n).map(Functional::KyFan).collect();
    v.extend([
        Functional::Schatten(1.0),
        Functional::Schatten(2.0),
        Functional::Schatten(f64::INFINITY),
    ]);
    v
}

/// Trace norm, Schatten 3, product of the top `min(2, n)` singular values,
/// and the determinant.
pub fn default_lieb_functionals(n: usize) -> Vec<Functional> {
    vec![
        Functional::KyFan(n),
        Functional::Schatten(3.0),
        Functional::TopKSingularProduct(n.min(2)),
        Functional::Determinant,
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Norms for `norm_chain` and `hiroshima`; defaults to [`default_norms`].
    pub norms: Option<Vec<Functional>>,
    /// Functionals for `lieb_gm`; defaults to [`default_lieb_functionals`].
    pub lieb: Option<Vec<Functional>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            norms: None,
            lieb: None,
        }
    }
}

impl VerifyOptions {
    /// Rejects option values that can never be evaluated at dimension `n`.
    pub fn validate(&self, kinds: &[VerifierKind], n: usize) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if let Some(norms) = &self.norms {
            if kinds
                .iter()
                .any(|k| matches!(k, VerifierKind::NormChain | VerifierKind::Hiroshima))
            {
                for f in norms {
                    if !f.is_norm() {
                        return Err(Error::InvalidParameter(format!("{f} is not a norm")));
                    }
                    f.validate(n)?;
                }
            }
        }
        if let Some(lieb) = &self.lieb {
            for f in lieb {
                f.validate(n)?;
            }
        }
        Ok(())
    }
}

/// Runs each selected verifier once on `b`, after checking the PPT (and,
/// where needed, PD) preconditions.
pub fn run_verifiers(
    b: &Block2x2,
    kinds: &[VerifierKind],
    opts: &VerifyOptions,
) -> Result<Vec<Certificate>> {
    let n = b.n();
    let need_pd = kinds.iter().any(|k| k.needs_pd());
    check_preconditions(b, need_pd)?;
    let ctx = if need_pd {
        Some(Context::unchecked(b, opts.tol)?)
    } else {
        None
    };
    let norms = opts.norms.clone().unwrap_or_else(|| default_norms(n));
    let lieb = opts
        .lieb
        .clone()
        .unwrap_or_else(|| default_lieb_functionals(n));
    let mut certs = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let c = match (kind, &ctx) {
            (VerifierKind::Hiroshima, _) => theorems::hiroshima_unchecked(b, &norms, opts.tol)?,
            (_, None) => unreachable!("context exists whenever a PD verifier is selected"),
            (VerifierKind::Main, Some(c)) => c.main()?,
            (VerifierKind::Lee, Some(c)) => c.lee()?,
            (VerifierKind::LiebGm, Some(c)) => c.lieb_gm(&lieb)?,
            (VerifierKind::NormChain, Some(c)) => c.norm_chain(&norms)?,
            (VerifierKind::TraceChain, Some(c)) => c.trace_chain()?,
            (VerifierKind::SvProduct, Some(c)) => c.sv_product_all()?,
            (VerifierKind::HalfIndex, Some(c)) => c.half_index()?,
            (VerifierKind::ReIm, Some(c)) => c.re_im()?,
        };
        certs.push(c);
    }
    Ok(certs)
}

/// One line of a verification campaign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub sample_id: usize,
    pub seed: Option<u64>,
    pub dimension: usize,
    pub certificates: Vec<Certificate>,
    pub marginal_count: usize,
    pub failure_count: usize,
}

impl VerificationReport {
    pub fn new(
        sample_id: usize,
        seed: Option<u64>,
        dimension: usize,
        certificates: Vec<Certificate>,
    ) -> Self {
        let marginal_count = certificates.iter().filter(|c| c.marginal).count();
        let failure_count = certificates.iter().filter(|c| !c.pass).count();
        Self {
            sample_id,
            seed,
            dimension,
            certificates,
            marginal_count,
            failure_count,
        }
    }
}

/// [`run_verifiers`] wrapped into a report.
pub fn verify_block(
    sample_id: usize,
    seed: Option<u64>,
    b: &Block2x2,
    kinds: &[VerifierKind],
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let certs = run_verifiers(b, kinds, opts)?;
    Ok(VerificationReport::new(sample_id, seed, b.n(), certs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{Method, SampleSpec};

    #[test]
    fn names_round_trip() {
        for k in VerifierKind::all() {
            assert_eq!(k.name().parse::<VerifierKind>().unwrap(), k);
            assert_eq!(
                serde_json::to_string(&k).unwrap(),
                format!("\"{}\"", k.name())
            );
        }
        assert!("bogus".parse::<VerifierKind>().is_err());
        assert_eq!(
            VerifierKind::parse_list("main, lee,main").unwrap(),
            vec![VerifierKind::Main, VerifierKind::Lee]
        );
        assert!(VerifierKind::parse_list(" , ").is_err());
        assert!(VerifierKind::parse_list("main,nope").is_err());
    }

    #[test]
    fn one_certificate_per_verifier() {
        let spec = SampleSpec::new(Method::PptSeparable, 3, 5, 7);
        for i in 0..spec.count {
            let (b, seed) = spec.strict_ppt_block(i).unwrap();
            let r = verify_block(
                i,
                Some(seed),
                &b,
                &VerifierKind::all(),
                &VerifyOptions::default(),
            )
            .unwrap();
            assert_eq!(r.certificates.len(), 9);
            assert_eq!(r.failure_count, 0, "{r:#?}");
            assert!(r.certificates.iter().all(Certificate::recheck));
        }
    }

    #[test]
    fn rejection_blocks_pass() {
        let spec = SampleSpec::new(Method::PptRejection, 2, 5, 3);
        for i in 0..spec.count {
            let (b, _) = spec.strict_ppt_block(i).unwrap();
            let certs = run_verifiers(&b, &VerifierKind::all(), &VerifyOptions::default()).unwrap();
            assert!(certs.iter().all(|c| c.pass));
        }
    }

    #[test]
    fn option_validation() {
        let mut o = VerifyOptions {
            norms: Some(vec![Functional::Trace]),
            ..Default::default()
        };
        assert!(o.validate(&[VerifierKind::Hiroshima], 2).is_err());
        assert!(o.validate(&[VerifierKind::Main], 2).is_ok());
        o.norms = Some(vec![Functional::KyFan(3)]);
        assert!(o.validate(&[VerifierKind::NormChain], 2).is_err());
        o.norms = None;
        o.tol = 0.0;
        assert!(o.validate(&[VerifierKind::Main], 2).is_err());
    }
}
