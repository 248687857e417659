//! Search for PPT blocks violating `s_j(X) ≤ s_j((A+B)/2)`.
//!
//! The search runs in independent rounds. Each round draws one PPT block
//! (three separable draws for every rejection draw) and then hill-climbs on
//! `X` with random single-entry moves, keeping a move only when the block
//! stays PPT at `τ_strict` and the ratio `s_j(X) / s_j((A+B)/2)` grows.
//! Rounds are seeded from the hunt seed and merged in round order, so the
//! report does not depend on the number of workers.

use serde::{Deserialize, Serialize};

use crate::block::{assemble, is_ppt, partial_transpose, Block2x2, STRICT_TOL};
use crate::certificate::MARGINAL_FACTOR;
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::linalg::{
    cholesky, count_above, herm_eig, herm_eig_with, scale_of, ComplexMatrix, HermitianMatrix,
    JacobiSettings, DEFAULT_TOL,
};
use crate::sampling::{
    random_ppt_rejection, random_ppt_separable, sample_seed, SampleRng, SampleSpec, DEFAULT_BUDGET,
    DEFAULT_RANK,
};

/// Default number of candidate evaluations.
pub const DEFAULT_HUNT_BUDGET: usize = 100_000;

/// Hill-climbing moves per round.
pub const CLIMB_STEPS: usize = 31;

const ROUND_BATCH: usize = 64;
const CLIMB_SALT: u64 = 0x6a09_e667_f3bc_c909;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntConfig {
    pub n: usize,
    pub j: usize,
    pub seed: u64,
    /// Total candidate evaluations, counting hill-climbing moves.
    pub budget: usize,
    /// Rank of the separable sampler.
    pub r: usize,
    pub tol: f64,
}

impl HuntConfig {
    pub fn new(n: usize, j: usize, seed: u64) -> Self {
        Self {
            n,
            j,
            seed,
            budget: DEFAULT_HUNT_BUDGET,
            r: DEFAULT_RANK,
            tol: DEFAULT_TOL,
        }
    }

    /// Takes `n`, `seed` and `r` from a sample spec and uses its `budget` as
    /// the search budget.
    pub fn from_spec(spec: &SampleSpec, j: usize, tol: f64) -> Self {
        Self {
            n: spec.n,
            j,
            seed: spec.seed,
            budget: spec.budget,
            r: spec.r,
            tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "hunt dimension must be at least 2, got {}",
                self.n
            )));
        }
        if self.j == 0 || self.j > self.n {
            return Err(Error::InvalidParameter(format!(
                "j must lie in 1..={}, got {}",
                self.n, self.j
            )));
        }
        if self.budget == 0 || self.r == 0 {
            return Err(Error::InvalidParameter(
                "budget and r must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Verdict on one candidate block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationCheck {
    pub j: usize,
    pub sj_x: f64,
    pub sj_mean: f64,
    pub ratio: f64,
    /// `10τ · max(1, ‖(A+B)/2‖_F)`: the excess required for a hit.
    pub margin: f64,
    /// Minimum eigenvalue over `H` and `H^τ`.
    pub ppt_gap: f64,
    /// Violation seen with the tightened eigensolver.
    pub violated: bool,
    /// Violation and PPT reproduced without the eigensolver: Sylvester
    /// inertia counts at the midpoint threshold, Cholesky for PPT.
    pub rechecked: bool,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntHit {
    pub block: Block2x2,
    pub check: ViolationCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HuntReport {
    pub n: usize,
    pub j: usize,
    pub seed: u64,
    pub budget: usize,
    pub evaluated: usize,
    pub best_ratio: f64,
    /// Block attaining `best_ratio`, for replay.
    pub best_block: Option<Block2x2>,
    pub hit: Option<HuntHit>,
    pub exhausted: bool,
}

fn mean_of(b: &Block2x2) -> HermitianMatrix {
    (b.a() + b.b()).scale(0.5)
}

/// `(s_j(X), s_j((A+B)/2))` with the default eigensolver.
fn sj_pair(b: &Block2x2, j: usize) -> Result<(f64, f64)> {
    let xx = HermitianMatrix::project(&(&b.x().adjoint() * b.x()));
    let sx = herm_eig(&xx)?.eigenvalues[j - 1].max(0.0).sqrt();
    let sm = herm_eig(&mean_of(b))?.eigenvalues[j - 1].max(0.0);
    Ok((sx, sm))
}

fn ratio_of(sx: f64, sm: f64) -> f64 {
    if sm > 0.0 {
        sx / sm
    } else if sx > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

fn hit_margin(b: &Block2x2, tol: f64) -> f64 {
    MARGINAL_FACTOR * tol * scale_of(&mean_of(b))
}

/// Full check of `s_j(X) > s_j((A+B)/2) + 10τ·scale` on a PPT block, using
/// tightened Jacobi settings, followed by the eigensolver-free re-check.
pub fn check_violation(b: &Block2x2, j: usize, tol: f64) -> Result<ViolationCheck> {
    let n = b.n();
    if j == 0 || j > n {
        return Err(Error::InvalidParameter(format!(
            "j must lie in 1..={n}, got {j}"
        )));
    }
    let tight = JacobiSettings::tight();
    let xx = HermitianMatrix::project(&(&b.x().adjoint() * b.x()));
    let mean = mean_of(b);
    let sj_x = herm_eig_with(&xx, tight)?.eigenvalues[j - 1]
        .max(0.0)
        .sqrt();
    let sj_mean = herm_eig_with(&mean, tight)?.eigenvalues[j - 1].max(0.0);
    let margin = hit_margin(b, tol);

    let h = assemble(b);
    let ht = assemble(&partial_transpose(b));
    let ppt_gap = herm_eig_with(&h, tight)?
        .min()
        .min(herm_eig_with(&ht, tight)?.min());
    let ppt_band = STRICT_TOL * scale_of(&h);
    let ppt = ppt_gap >= -ppt_band;
    let violated = ppt && sj_x > sj_mean + margin;

    let rechecked = violated && {
        let mid = 0.5 * (sj_x + sj_mean);
        let shifted = |m: &ComplexMatrix| {
            let mut s = m.clone();
            for i in 0..s.n() {
                s[(i, i)] += ppt_band;
            }
            s
        };
        let mean_below = count_above(&mean, mid).is_some_and(|c| c < j);
        let x_above = count_above(&xx, mid * mid).is_some_and(|c| c >= j);
        let ppt_chol = cholesky(&shifted(&h)).is_some() && cholesky(&shifted(&ht)).is_some();
        mean_below && x_above && ppt_chol
    };

    Ok(ViolationCheck {
        j,
        sj_x,
        sj_mean,
        ratio: ratio_of(sj_x, sj_mean),
        margin,
        ppt_gap,
        violated,
        rechecked,
        certified: violated && rechecked,
    })
}

/// Re-runs the violation check on a stored block.
pub fn replay(b: &Block2x2, j: usize, tol: f64) -> Result<ViolationCheck> {
    check_violation(b, j, tol)
}

struct RoundOutcome {
    evaluated: usize,
    best_ratio: f64,
    best_block: Option<Block2x2>,
    hit: Option<HuntHit>,
}

fn draw(cfg: &HuntConfig, round: usize, seed: u64) -> Result<Option<Block2x2>> {
    let b = if round % 4 == 3 {
        match random_ppt_rejection(cfg.n, seed, DEFAULT_BUDGET) {
            Ok((b, _)) => b,
            Err(Error::BudgetExhausted { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    } else {
        random_ppt_separable(cfg.n, seed, cfg.r)?
    };
    let c = is_ppt(&b, STRICT_TOL)?;
    Ok((c.pass && !c.marginal).then_some(b))
}

fn run_round(cfg: &HuntConfig, round: usize, evaluations: usize) -> Result<RoundOutcome> {
    let seed = sample_seed(cfg.seed, round as u64);
    let mut out = RoundOutcome {
        evaluated: 0,
        best_ratio: 0.0,
        best_block: None,
        hit: None,
    };
    let Some(mut current) = draw(cfg, round, seed)? else {
        out.evaluated = 1;
        return Ok(out);
    };
    let consider = |b: &Block2x2, out: &mut RoundOutcome| -> Result<f64> {
        out.evaluated += 1;
        let (sx, sm) = sj_pair(b, cfg.j)?;
        let ratio = ratio_of(sx, sm);
        if ratio > out.best_ratio || out.best_block.is_none() {
            out.best_ratio = ratio;
            out.best_block = Some(b.clone());
        }
        if sx > sm + hit_margin(b, cfg.tol) {
            let check = check_violation(b, cfg.j, cfg.tol)?;
            if check.certified {
                out.hit = Some(HuntHit {
                    block: b.clone(),
                    check,
                });
            }
        }
        Ok(ratio)
    };

    let mut current_ratio = consider(&current, &mut out)?;
    let mut rng = SampleRng::new(seed ^ CLIMB_SALT);
    let n = cfg.n;
    let mut step = 0.25 * current.x().frobenius_norm().max(1e-3) / n as f64;
    while out.hit.is_none() && out.evaluated < evaluations {
        let (i, k) = (rng.below(n), rng.below(n));
        let mut x = current.x().clone();
        x[(i, k)] += rng.complex_gaussian() * step;
        let candidate = current.with_x(x);
        let ppt = is_ppt(&candidate, STRICT_TOL)?;
        if !ppt.pass || ppt.marginal {
            out.evaluated += 1;
            step *= 0.7;
            continue;
        }
        let ratio = consider(&candidate, &mut out)?;
        if ratio > current_ratio {
            current = candidate;
            current_ratio = ratio;
            step *= 1.3;
        } else {
            step *= 0.85;
        }
    }
    Ok(out)
}

/// Runs the hunt and reports the best ratio seen and the first certified hit
/// in round order, if any.
pub fn hunt_sj_counterexample(cfg: &HuntConfig, exec: Execution) -> Result<HuntReport> {
    cfg.validate()?;
    let per_round = CLIMB_STEPS + 1;
    let rounds = cfg.budget.div_ceil(per_round);
    let mut report = HuntReport {
        n: cfg.n,
        j: cfg.j,
        seed: cfg.seed,
        budget: cfg.budget,
        evaluated: 0,
        best_ratio: 0.0,
        best_block: None,
        hit: None,
        exhausted: false,
    };
    let mut start = 0;
    while start < rounds {
        let len = ROUND_BATCH.min(rounds - start);
        let outcomes = map_indices(len, exec, |i| {
            let round = start + i;
            let evaluations = per_round.min(cfg.budget - round * per_round);
            run_round(cfg, round, evaluations)
        });
        for outcome in outcomes {
            let outcome = outcome?;
            report.evaluated += outcome.evaluated;
            if outcome.best_block.is_some()
                && (outcome.best_ratio > report.best_ratio || report.best_block.is_none())
            {
                report.best_ratio = outcome.best_ratio;
                report.best_block = outcome.best_block;
            }
            if let Some(hit) = outcome.hit {
                report.best_ratio = report.best_ratio.max(hit.check.ratio);
                report.best_block = Some(hit.block.clone());
                report.hit = Some(hit);
                return Ok(report);
            }
        }
        start += len;
    }
    report.exhausted = true;
    Ok(report)
}

/// A PPT block violating the inequality at `j = 2`: `A = B = diag(0.6, 2.2)`
/// and `X` the swap matrix. `X` is Hermitian, so `H^τ = H`, and `H ≥ 0`
/// because `0.6 · 2.2 ≥ 1`; yet `s_2(X) = 1 > 0.6 = s_2((A+B)/2)`.
pub fn known_violation() -> Block2x2 {
    let d = HermitianMatrix::from_real_diag(&[0.6, 2.2]);
    let swap = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
    Block2x2::new(d.clone(), swap, d).expect("square blocks of equal size")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_violation_is_certified() {
        let c = replay(&known_violation(), 2, DEFAULT_TOL).unwrap();
        assert!(c.certified, "{c:?}");
        assert!((c.sj_x - 1.0).abs() < 1e-12 && (c.sj_mean - 0.6).abs() < 1e-12);
        let c = replay(&known_violation(), 1, DEFAULT_TOL).unwrap();
        assert!(!c.violated && !c.certified);
    }

    #[test]
    fn non_ppt_block_is_not_certified() {
        let b = known_violation().with_x(ComplexMatrix::from_real(&[&[0.0, 3.0], &[3.0, 0.0]]));
        let c = replay(&b, 2, DEFAULT_TOL).unwrap();
        assert!(c.ppt_gap < 0.0 && !c.certified);
    }

    #[test]
    fn j_one_never_hits() {
        let mut cfg = HuntConfig::new(2, 1, 5);
        cfg.budget = 2_000;
        let r = hunt_sj_counterexample(&cfg, Execution::Sequential).unwrap();
        assert!(r.hit.is_none() && r.exhausted);
        assert_eq!(r.evaluated, 2_000);
        assert!(r.best_ratio <= 1.0 + 1e-7, "{}", r.best_ratio);
    }

    #[test]
    fn j_two_finds_a_hit() {
        let mut cfg = HuntConfig::new(2, 2, 1);
        cfg.budget = 20_000;
        let r = hunt_sj_counterexample(&cfg, Execution::Sequential).unwrap();
        let hit = r.hit.expect("hit within budget");
        assert!(replay(&hit.block, 2, DEFAULT_TOL).unwrap().certified);
    }

    #[test]
    fn report_is_independent_of_execution() {
        let mut cfg = HuntConfig::new(3, 2, 9);
        cfg.budget = 3_000;
        let a = hunt_sj_counterexample(&cfg, Execution::Sequential).unwrap();
        let b = hunt_sj_counterexample(&cfg, Execution::Parallel).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn config_validation() {
        assert!(HuntConfig::new(1, 1, 0).validate().is_err());
        assert!(HuntConfig::new(2, 3, 0).validate().is_err());
        assert!(HuntConfig::new(2, 0, 0).validate().is_err());
    }
}
