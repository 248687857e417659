//! Deterministic, seeded generation of random matrices and PPT blocks.
//!
//! The uniform stream is ChaCha8 (`rand_chacha`), seeded from a single `u64`.
//! Uniforms take the top 53 bits of each `u64` draw. A standard complex
//! Gaussian (`E|z|² = 1`) is produced by one Box-Muller step,
//! `z = sqrt(-ln u₁) · e^{2πi u₂}` with `u₁ ∈ (0, 1]`, which is the same as
//! drawing real and imaginary parts i.i.d. `N(0, 1/2)`. Per-sample seeds are
//! `seed ⊕ splitmix64(index)`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::block::{is_ppt, Block2x2, STRICT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, inner, vec_norm, ComplexMatrix, HermitianMatrix};

pub const DEFAULT_RANK: usize = 4;
pub const DEFAULT_BUDGET: usize = 10_000;
pub const DEFAULT_COND_CAP: f64 = 100.0;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sample `index` within a campaign seeded with `seed`.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    seed ^ splitmix64(index)
}

/// Uniform and Gaussian draws on top of ChaCha8.
pub struct SampleRng(ChaCha8Rng);

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        Complex64::from_polar((-u1.ln()).sqrt(), TAU * u2)
    }

    pub fn ginibre(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |_, _| self.complex_gaussian())
    }

    /// Wishart-type `G G*/k` with `G` of size `n x k`.
    pub fn wishart(&mut self, n: usize, k: usize) -> HermitianMatrix {
        let g: Vec<Vec<Complex64>> = (0..n)
            .map(|_| (0..k).map(|_| self.complex_gaussian()).collect())
            .collect();
        let m = ComplexMatrix::from_fn(n, |i, j| inner(&g[j], &g[i]) / k as f64);
        HermitianMatrix::project(&m)
    }

    /// Haar unitary: Gram-Schmidt (twice) on the columns of a Ginibre sample.
    /// The implied `R` has positive diagonal, which fixes the phases.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        let g = self.ginibre(n);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for c in &cols {
                    let p = inner(c, &v);
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= p * ci;
                    }
                }
            }
            let norm = vec_norm(&v);
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        let mut u = ComplexMatrix::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            u.set_column(j, c);
        }
        u
    }
}

pub fn random_ginibre(n: usize, seed: u64) -> ComplexMatrix {
    SampleRng::new(seed).ginibre(n)
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    SampleRng::new(seed).unitary(n)
}

/// Full-rank Wishart PSD matrix `G G*/n`.
pub fn random_psd(n: usize, seed: u64) -> HermitianMatrix {
    SampleRng::new(seed).wishart(n, n)
}

/// `G*G` shifted by `δI` so that the condition number is at most `cond_cap`,
/// then normalized to trace `n`.
pub fn random_pd(n: usize, seed: u64, cond_cap: f64) -> Result<HermitianMatrix> {
    pd_from(&mut SampleRng::new(seed), n, cond_cap)
}

fn pd_from(rng: &mut SampleRng, n: usize, cond_cap: f64) -> Result<HermitianMatrix> {
    if !(cond_cap >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "condition cap must be at least 1, got {cond_cap}"
        )));
    }
    let g = rng.ginibre(n);
    let p = HermitianMatrix::project(&(&g.adjoint() * &g));
    if cond_cap == 1.0 {
        return Ok(HermitianMatrix::identity(n));
    }
    let es = herm_eig(&p)?;
    let (hi, lo) = (es.max(), es.min().max(0.0));
    let delta = ((hi - cond_cap * lo) / (cond_cap - 1.0)).max(0.0);
    let shifted = p.shift(delta);
    let tr = shifted.trace().re;
    Ok(shifted.scale(n as f64 / tr))
}

/// `H = Σ_k P_k ⊗ Q_k` with `P_k` random `2 x 2` PSD and `Q_k` random `n x n`
/// PSD; the partial transpose sends each `P_k` to its transpose, so `H` is PPT.
pub fn random_ppt_separable(n: usize, seed: u64, r: usize) -> Result<Block2x2> {
    if r == 0 {
        return Err(Error::InvalidParameter(
            "separable rank r must be at least 1".into(),
        ));
    }
    let mut rng = SampleRng::new(seed);
    let mut a = ComplexMatrix::zeros(n);
    let mut x = ComplexMatrix::zeros(n);
    let mut b = ComplexMatrix::zeros(n);
    for _ in 0..r {
        let p = rng.wishart(2, 2);
        let q = rng.wishart(n, n);
        a = &a + &q.scale_complex(p[(0, 0)]);
        x = &x + &q.scale_complex(p[(0, 1)]);
        b = &b + &q.scale_complex(p[(1, 1)]);
    }
    let norm = 1.0 / r as f64;
    Block2x2::new(
        HermitianMatrix::project(&a.scale(norm)),
        x.scale(norm),
        HermitianMatrix::project(&b.scale(norm)),
    )
}

/// Draws from [`random_ppt_separable`] with explicit factors, for tests.
pub fn separable_from_factors(factors: &[(HermitianMatrix, HermitianMatrix)]) -> Result<Block2x2> {
    let n = factors
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one factor".into()))?
        .1
        .n();
    let mut a = ComplexMatrix::zeros(n);
    let mut x = ComplexMatrix::zeros(n);
    let mut b = ComplexMatrix::zeros(n);
    for (p, q) in factors {
        a = &a + &q.scale_complex(p[(0, 0)]);
        x = &x + &q.scale_complex(p[(0, 1)]);
        b = &b + &q.scale_complex(p[(1, 1)]);
    }
    Block2x2::new(
        HermitianMatrix::project(&a),
        x,
        HermitianMatrix::project(&b),
    )
}

/// Wishart `2n x 2n` PSD matrix split into blocks.
pub fn random_psd_block(n: usize, seed: u64) -> Result<Block2x2> {
    psd_block_from(&mut SampleRng::new(seed), n, 2 * n)
}

fn psd_block_from(rng: &mut SampleRng, n: usize, k: usize) -> Result<Block2x2> {
    Block2x2::split(&rng.wishart(2 * n, k), n)
}

/// Outcome of a rejection run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RejectionStats {
    pub draws: usize,
    pub acceptance_rate: f64,
}

/// Wishart degrees of freedom used by the rejection sampler.
pub fn rejection_wishart_dim(n: usize) -> usize {
    4 * n
}

/// Draws Wishart blocks until one passes `is_ppt` at `τ_strict` outside the
/// marginal band.
pub fn random_ppt_rejection(
    n: usize,
    seed: u64,
    budget: usize,
) -> Result<(Block2x2, RejectionStats)> {
    if budget == 0 {
        return Err(Error::InvalidParameter(
            "rejection budget must be at least 1".into(),
        ));
    }
    let mut rng = SampleRng::new(seed);
    for draw in 1..=budget {
        let b = psd_block_from(&mut rng, n, rejection_wishart_dim(n))?;
        let c = is_ppt(&b, STRICT_TOL)?;
        if c.pass && !c.marginal {
            return Ok((
                b,
                RejectionStats {
                    draws: draw,
                    acceptance_rate: 1.0 / draw as f64,
                },
            ));
        }
    }
    Err(Error::BudgetExhausted {
        budget,
        acceptance_rate: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ginibre,
    Psd,
    Pd,
    Unitary,
    PsdBlock,
    PptSeparable,
    PptRejection,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ginibre => "ginibre",
            Method::Psd => "psd",
            Method::Pd => "pd",
            Method::Unitary => "unitary",
            Method::PsdBlock => "psd_block",
            Method::PptSeparable => "ppt_separable",
            Method::PptRejection => "ppt_rejection",
        }
    }

    pub fn produces_blocks(self) -> bool {
        matches!(
            self,
            Method::PsdBlock | Method::PptSeparable | Method::PptRejection
        )
    }

    pub fn all() -> [Method; 7] {
        [
            Method::Ginibre,
            Method::Psd,
            Method::Pd,
            Method::Unitary,
            Method::PsdBlock,
            Method::PptSeparable,
            Method::PptRejection,
        ]
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::all()
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown method {s:?} (expected one of {})",
                    Method::all().map(Method::name).join(", ")
                ))
            })
    }
}

/// Deterministic recipe for a stream of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: usize,
    pub seed: u64,
    pub count: usize,
    pub method: Method,
    #[serde(default = "default_rank")]
    pub r: usize,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_cond_cap")]
    pub cond_cap: f64,
}

fn default_rank() -> usize {
    DEFAULT_RANK
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

fn default_cond_cap() -> f64 {
    DEFAULT_COND_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Sample {
    Matrix(ComplexMatrix),
    Block(Block2x2),
}

impl SampleSpec {
    pub fn new(method: Method, n: usize, count: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            count,
            method,
            r: DEFAULT_RANK,
            budget: DEFAULT_BUDGET,
            cond_cap: DEFAULT_COND_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.r == 0 || self.budget == 0 {
            return Err(Error::InvalidParameter(
                "r and budget must be at least 1".into(),
            ));
        }
        if !(self.cond_cap >= 1.0) {
            return Err(Error::InvalidParameter(
                "cond_cap must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn seed_of(&self, index: usize) -> u64 {
        sample_seed(self.seed, index as u64)
    }

    /// Sample number `index` of this stream.
    pub fn sample(&self, index: usize) -> Result<Sample> {
        let seed = self.seed_of(index);
        let n = self.n;
        Ok(match self.method {
            Method::Ginibre => Sample::Matrix(random_ginibre(n, seed)),
            Method::Psd => Sample::Matrix(random_psd(n, seed).into_matrix()),
            Method::Pd => Sample::Matrix(random_pd(n, seed, self.cond_cap)?.into_matrix()),
            Method::Unitary => Sample::Matrix(random_unitary(n, seed)),
            Method::PsdBlock => Sample::Block(random_psd_block(n, seed)?),
            Method::PptSeparable => Sample::Block(random_ppt_separable(n, seed, self.r)?),
            Method::PptRejection => Sample::Block(random_ppt_rejection(n, seed, self.budget)?.0),
        })
    }

    /// Sample `index` as a block, for block-producing methods.
    pub fn block(&self, index: usize) -> Result<Block2x2> {
        match self.sample(index)? {
            Sample::Block(b) => Ok(b),
            Sample::Matrix(_) => Err(Error::InvalidParameter(format!(
                "method {} does not produce blocks",
                self.method.name()
            ))),
        }
    }

    /// Sample `index` as a PPT block certified at `τ_strict` and outside the
    /// marginal band. Marginal draws are regenerated from a derived seed;
    /// returns the block and the seed that produced it.
    pub fn strict_ppt_block(&self, index: usize) -> Result<(Block2x2, u64)> {
        let base = self.seed_of(index);
        let mut seed = base;
        for attempt in 0..64u64 {
            if attempt > 0 {
                seed = sample_seed(base, attempt);
            }
            let b = match self.method {
                Method::PptSeparable => random_ppt_separable(self.n, seed, self.r)?,
                Method::PptRejection => random_ppt_rejection(self.n, seed, self.budget)?.0,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "method {} does not produce PPT blocks",
                        other.name()
                    )))
                }
            };
            let c = is_ppt(&b, STRICT_TOL)?;
            if c.pass && !c.marginal {
                return Ok((b, seed));
            }
        }
        Err(Error::BudgetExhausted {
            budget: 64,
            acceptance_rate: 0.0,
        })
    }
}
