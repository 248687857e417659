//! Verification campaigns over sampled or supplied blocks, reported as JSON
//! lines ordered by sample id.

use serde::{Deserialize, Serialize};

use crate::block::Block2x2;
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::sampling::{Method, SampleSpec};
use crate::verify::{verify_block, VerificationReport, VerifierKind, VerifyOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub samples: usize,
    pub certificates: usize,
    pub passed: usize,
    pub marginal: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignOutcome {
    pub reports: Vec<VerificationReport>,
    pub summary: CampaignSummary,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a CampaignSummary,
}

impl CampaignOutcome {
    pub fn from_reports(reports: Vec<VerificationReport>) -> Self {
        let mut s = CampaignSummary {
            samples: reports.len(),
            ..Default::default()
        };
        for r in &reports {
            s.certificates += r.certificates.len();
            s.failed += r.failure_count;
            s.passed += r.certificates.len() - r.failure_count;
            s.marginal += r.marginal_count;
        }
        Self {
            reports,
            summary: s,
        }
    }

    /// Fraction of certificates flagged marginal.
    pub fn marginal_rate(&self) -> f64 {
        self.summary.marginal as f64 / self.summary.certificates.max(1) as f64
    }

    /// One JSON object per report followed by a `{"summary": …}` line.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&serde_json::to_string(r).expect("reports serialize"));
            out.push('\n');
        }
        out.push_str(
            &serde_json::to_string(&SummaryLine {
                summary: &self.summary,
            })
            .expect("summary serializes"),
        );
        out.push('\n');
        out
    }
}

/// Verifies `spec.count` strictly PPT blocks drawn from `spec`.
pub fn run_campaign(
    spec: &SampleSpec,
    kinds: &[VerifierKind],
    opts: &VerifyOptions,
    exec: Execution,
) -> Result<CampaignOutcome> {
    spec.validate()?;
    if !matches!(spec.method, Method::PptSeparable | Method::PptRejection) {
        return Err(Error::InvalidParameter(format!(
            "verification needs a PPT sampler (ppt_separable or ppt_rejection), got {}",
            spec.method.name()
        )));
    }
    if kinds.is_empty() {
        return Err(Error::InvalidParameter("empty verifier list".into()));
    }
    opts.validate(kinds, spec.n)?;
    let reports = map_indices(spec.count, exec, |i| {
        let (b, seed) = spec.strict_ppt_block(i)?;
        verify_block(i, Some(seed), &b, kinds, opts)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CampaignOutcome::from_reports(reports))
}

/// Verifies the given blocks in order.
pub fn verify_blocks(
    blocks: &[Block2x2],
    kinds: &[VerifierKind],
    opts: &VerifyOptions,
    exec: Execution,
) -> Result<CampaignOutcome> {
    if kinds.is_empty() {
        return Err(Error::InvalidParameter("empty verifier list".into()));
    }
    for b in blocks {
        opts.validate(kinds, b.n())?;
    }
    let reports = map_indices(blocks.len(), exec, |i| {
        verify_block(i, None, &blocks[i], kinds, opts)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(CampaignOutcome::from_reports(reports))
}
