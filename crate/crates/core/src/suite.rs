//! Seeded invariant checks at configurable sample counts. `selftest` runs
//! them all at reduced size.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::block::{
    ando_mix, assemble, average_diagonal, cartesian_parts, conjugate, geometric_mean_block,
    hadamard_unitary, is_positive, is_ppt, offdiag_compression, phase_unitary, ppt_variants,
    rotate_offdiag, schur_criterion, swap_blocks, Block2x2,
};
use crate::campaign::{run_campaign, CampaignOutcome};
use crate::error::Result;
use crate::exec::Execution;
use crate::linalg::{
    geometric_mean, herm_eig, pd_inverse, ComplexMatrix, HermitianMatrix, DEFAULT_TOL,
};
use crate::sampling::{
    random_ginibre, random_pd, random_ppt_separable, random_psd, random_psd_block, sample_seed,
    Method, SampleRng, SampleSpec,
};
use crate::verify::{
    hunt_sj_counterexample, known_violation, replay, verify_extremal_gm, HuntConfig, VerifierKind,
    VerifyOptions,
};

/// Marginal-rate ceiling for theorem campaigns.
pub const MAX_MARGINAL_RATE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            pass,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((pass, detail)) => Self::new(name, pass, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

fn rel(diff: f64, reference: f64) -> f64 {
    diff / reference.max(1.0)
}

/// Random Hermitian matrices of size `2..=8`: `‖M - VΛV*‖_F ≤ 1e-10 ·
/// max(1, ‖M‖_F)` and `‖V*V - I‖_F ≤ 1e-10`.
pub fn eigen_reconstruction(count: usize, seed: u64) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let mut worst = 0.0f64;
        let mut worst_ortho = 0.0f64;
        for i in 0..count {
            let n = 2 + i % 7;
            let m = HermitianMatrix::project(&random_ginibre(n, sample_seed(seed, i as u64)));
            let es = herm_eig(&m)?;
            worst = worst.max(rel(
                (m.as_matrix() - &es.reconstruct()).frobenius_norm(),
                m.frobenius_norm(),
            ));
            let gram = &es.basis.adjoint() * &es.basis;
            worst_ortho = worst_ortho.max((&gram - &ComplexMatrix::identity(n)).frobenius_norm());
        }
        Ok((
            worst <= 1e-10 && worst_ortho <= 1e-10,
            format!("{count} matrices, worst residual {worst:.2e}, worst orthogonality {worst_ortho:.2e}"),
        ))
    };
    CheckOutcome::from_result("eigen_reconstruction", run())
}

/// Random PD pairs of size `2..=6`: symmetry of the mean within `1e-7`
/// relative, AM-GM gap at least `-1e-8 · scale`, and `G X⁻¹ G = Y` within
/// `1e-7` relative.
pub fn geometric_mean_identities(count: usize, seed: u64) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let (mut sym, mut amgm, mut ric) = (0.0f64, f64::INFINITY, 0.0f64);
        for i in 0..count {
            let n = 2 + i % 5;
            let s = sample_seed(seed, i as u64);
            let x = random_pd(n, s, 100.0)?;
            let y = random_pd(n, s ^ 1, 100.0)?;
            let g = geometric_mean(&x, &y)?;
            let h = geometric_mean(&y, &x)?;
            sym = sym.max(rel((&g - &h).frobenius_norm(), g.frobenius_norm()));
            let am = (&x + &y).scale(0.5);
            let d = &am - &g;
            amgm = amgm.min(herm_eig(&d)?.min() / d.frobenius_norm().max(1.0));
            let riccati = &(g.as_matrix() * pd_inverse(&x)?.as_matrix()) * g.as_matrix();
            ric = ric.max(rel(
                (&riccati - y.as_matrix()).frobenius_norm(),
                y.frobenius_norm(),
            ));
        }
        Ok((
            sym <= 1e-7 && amgm >= -1e-8 && ric <= 1e-7,
            format!(
                "{count} pairs, symmetry {sym:.2e}, min AM-GM gap {amgm:.2e}, Riccati {ric:.2e}"
            ),
        ))
    };
    CheckOutcome::from_result("geometric_mean", run())
}

/// Random PD pairs of size `2..=6` through `verify_extremal_gm`.
pub fn extremal(count: usize, seed: u64) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let mut failures = 0;
        let mut broken = 0;
        for i in 0..count {
            let n = 2 + i % 5;
            let s = sample_seed(seed, i as u64);
            let x = random_pd(n, s, 100.0)?;
            let y = random_pd(n, s ^ 1, 100.0)?;
            let c = verify_extremal_gm(&x, &y, s ^ 2, DEFAULT_TOL)?;
            let links = c.links();
            broken += links[1..].iter().filter(|l| l.pass && l.recheck()).count();
            if !c.pass || !links[0].recheck() {
                failures += 1;
            }
        }
        let expected = count * crate::verify::EXTREMAL_DIRECTIONS;
        Ok((
            failures == 0 && broken == expected,
            format!(
                "{count} pairs, {broken}/{expected} perturbations broke PSD, {failures} failures"
            ),
        ))
    };
    CheckOutcome::from_result("extremal", run())
}

/// Full verifier set over `separable` separable and `rejection` rejection
/// blocks of size `n`: zero failures, marginal rate below
/// [`MAX_MARGINAL_RATE`], every certificate re-checked without the
/// eigensolver, and `lee` passing wherever `main` passes.
pub fn theorem_suite(
    n: usize,
    separable: usize,
    rejection: usize,
    seed: u64,
    exec: Execution,
) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let kinds = VerifierKind::all();
        let opts = VerifyOptions::default();
        let mut outcomes: Vec<CampaignOutcome> = Vec::new();
        for (method, count, salt) in [
            (Method::PptSeparable, separable, 0u64),
            (Method::PptRejection, rejection, 1u64),
        ] {
            if count > 0 {
                let spec = SampleSpec::new(method, n, count, seed ^ salt);
                outcomes.push(run_campaign(&spec, &kinds, &opts, exec)?);
            }
        }
        let (mut certs, mut failed, mut marginal, mut unsound, mut order) = (0, 0, 0, 0, 0);
        for o in &outcomes {
            certs += o.summary.certificates;
            failed += o.summary.failed;
            marginal += o.summary.marginal;
            for r in &o.reports {
                unsound += r.certificates.iter().filter(|c| !c.recheck()).count();
                let main = &r.certificates[0];
                let lee = &r.certificates[1];
                if main.pass && !lee.pass {
                    order += 1;
                }
            }
        }
        let rate = marginal as f64 / certs.max(1) as f64;
        Ok((
            failed == 0 && unsound == 0 && order == 0 && rate < MAX_MARGINAL_RATE,
            format!(
                "n={n}: {} blocks, {certs} certificates, {failed} failed, marginal rate {:.3}%, {unsound} not re-checked, {order} main-without-lee",
                separable + rejection,
                100.0 * rate
            ),
        ))
    };
    CheckOutcome::from_result(&format!("theorems_n{n}"), run())
}

/// `schur_criterion` against `is_ppt` on blocks with PD `A` (alternating
/// Wishart and separable draws); disagreements are tolerated only when one
/// of the two verdicts is marginal, and are listed in the detail.
pub fn schur_equivalence(count: usize, seed: u64) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let (mut agree, mut ppt) = (0, 0);
        let mut logged = String::new();
        let mut hard = 0;
        for i in 0..count {
            let n = 2 + i % 3;
            let s = sample_seed(seed, i as u64);
            let b = if i % 2 == 0 {
                random_psd_block(n, s)?
            } else {
                random_ppt_separable(n, s, 2)?
            };
            let eig = is_ppt(&b, DEFAULT_TOL)?;
            let schur = schur_criterion(&b, DEFAULT_TOL)?;
            ppt += eig.pass as usize;
            if eig.pass == schur.pass {
                agree += 1;
            } else {
                let _ = write!(
                    logged,
                    "; sample {i}: is_ppt gap {:.2e}, schur gap {:.2e}",
                    eig.gap, schur.gap
                );
                if !(eig.marginal || schur.marginal) {
                    hard += 1;
                }
            }
        }
        Ok((
            hard == 0,
            format!("{count} blocks ({ppt} PPT), {agree} agree, {hard} outside the marginal band{logged}"),
        ))
    };
    CheckOutcome::from_result("schur_equivalence", run())
}

/// Closure of PPT blocks under the sign, swap and transpose variants, phase
/// rotation, diagonal averaging, geometric-mean diagonals and the two-block
/// mean of PSD blocks sharing `X`; plus the unitary conjugation identities
/// `W H W* = H_θ` and `J* [[G, Re X], [Re X, G]] J = G ± Re X` within
/// `1e-12` relative.
pub fn closure(count: usize, seed: u64) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let tol = DEFAULT_TOL;
        let mut failures = Vec::new();
        let mut worst_identity = 0.0f64;
        for i in 0..count {
            let n = 2 + i % 3;
            let s = sample_seed(seed, i as u64);
            let b = random_ppt_separable(n, s, 4)?;
            let mut rng = SampleRng::new(s ^ 3);
            let theta = rng.uniform_range(0.0, std::f64::consts::TAU);

            let mut ok = true;
            for v in ppt_variants(&b) {
                ok &= is_positive(&v, tol)?.pass;
            }
            let rotated = rotate_offdiag(&b, theta);
            for t in [
                rotated.clone(),
                average_diagonal(&b),
                swap_blocks(&b),
                geometric_mean_block(&b)?,
            ] {
                ok &= is_ppt(&t, tol)?.pass;
            }
            ok &= offdiag_compression(&b, tol)?.pass;

            let shift = |m: &HermitianMatrix, k: u64| -> HermitianMatrix {
                m + &random_psd(n, s ^ k).scale(0.5)
            };
            let other = Block2x2::new(shift(b.a(), 4), b.x().clone(), shift(b.b(), 5))?;
            ok &= is_positive(&ando_mix(&b, &other)?, tol)?.pass;

            let h = assemble(&b);
            let w = phase_unitary(n, theta);
            let diff =
                (conjugate(&h, &w).as_matrix() - assemble(&rotated).as_matrix()).frobenius_norm();
            worst_identity = worst_identity.max(rel(diff, h.frobenius_norm()));

            let g = geometric_mean(b.a(), b.b())?;
            let (re, _) = cartesian_parts(b.x());
            let m = HermitianMatrix::project(&ComplexMatrix::from_blocks(&g, &re, &re, &g));
            let j = hadamard_unitary(n);
            let zero = ComplexMatrix::zeros(n);
            let expected = ComplexMatrix::from_blocks(&(&g + &re), &zero, &zero, &(&g - &re));
            let diff = (conjugate(&m, &j.adjoint()).as_matrix() - &expected).frobenius_norm();
            worst_identity = worst_identity.max(rel(diff, m.frobenius_norm()));

            if !ok {
                failures.push(i);
            }
        }
        Ok((
            failures.is_empty() && worst_identity <= 1e-12,
            format!(
                "{count} blocks, failures {failures:?}, worst conjugation identity {worst_identity:.2e}"
            ),
        ))
    };
    CheckOutcome::from_result("closure", run())
}

/// The stored violation replays as certified, and `j = 1` hunts at `n = 2, 3`
/// find nothing within `budget`.
pub fn hunt_consistency(budget: usize, seed: u64, exec: Execution) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let replayed = replay(&known_violation(), 2, DEFAULT_TOL)?;
        let mut detail = format!(
            "stored block: s_2(X) = {:.4} vs s_2((A+B)/2) = {:.4}, certified {}",
            replayed.sj_x, replayed.sj_mean, replayed.certified
        );
        let mut ok = replayed.certified;
        for n in [2, 3] {
            let mut cfg = HuntConfig::new(n, 1, seed);
            cfg.budget = budget;
            let r = hunt_sj_counterexample(&cfg, exec)?;
            ok &= r.hit.is_none();
            let _ = write!(
                detail,
                "; j=1 n={n}: best ratio {:.9}, hit {}",
                r.best_ratio,
                r.hit.is_some()
            );
        }
        Ok((ok, detail))
    };
    CheckOutcome::from_result("hunt_consistency", run())
}

/// Two identical campaigns serialize to identical bytes.
pub fn determinism(count: usize, seed: u64, exec: Execution) -> CheckOutcome {
    let run = || -> Result<(bool, String)> {
        let spec = SampleSpec::new(Method::PptSeparable, 3, count, seed);
        let kinds = VerifierKind::all();
        let opts = VerifyOptions::default();
        let a = run_campaign(&spec, &kinds, &opts, exec)?.json_lines();
        let b = run_campaign(&spec, &kinds, &opts, exec)?.json_lines();
        Ok((
            a == b,
            format!("{count} samples, {} bytes, identical {}", a.len(), a == b),
        ))
    };
    CheckOutcome::from_result("determinism", run())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub pass: bool,
}

/// Every check above at reduced size.
pub fn selftest(seed: u64, exec: Execution) -> SelftestReport {
    let checks = vec![
        eigen_reconstruction(70, seed),
        geometric_mean_identities(50, seed),
        extremal(20, seed),
        theorem_suite(2, 35, 15, seed, exec),
        theorem_suite(3, 35, 15, seed, exec),
        schur_equivalence(100, seed),
        closure(50, seed),
        hunt_consistency(640, seed, exec),
        determinism(10, seed, exec),
    ];
    let pass = checks.iter().all(|c| c.pass);
    SelftestReport { seed, checks, pass }
}
