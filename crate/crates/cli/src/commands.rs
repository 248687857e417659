use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use ppt_core::block::{is_positive, is_ppt, schur_criterion, Block2x2};
use ppt_core::campaign::{run_campaign, verify_blocks, CampaignOutcome};
use ppt_core::exec::Execution;
use ppt_core::functionals::Functional;
use ppt_core::linalg::{inject_eigen_fault, require_pd};
use ppt_core::sampling::SampleSpec;
use ppt_core::suite::selftest as run_selftest;
use ppt_core::verify::{hunt_sj_counterexample, replay, HuntConfig, VerifierKind, VerifyOptions};
use ppt_core::{Error, Result};
use serde_json::{json, Value};

use crate::{
    CheckArgs, Format, HuntArgs, OutputArgs, SampleArgs, SelftestArgs, SpecArgs, VerifyArgs,
    EXIT_EXHAUSTED, EXIT_FAILURE, EXIT_OK,
};

/// Environment variable read by `selftest` to shift every computed
/// eigenvalue by the given relative amount.
pub const EIGEN_FAULT_ENV: &str = "PPT_BLOCKS_EIGEN_FAULT";

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

/// One block, an array of blocks, or one block per line.
fn read_blocks(path: &Path) -> Result<Vec<Block2x2>> {
    let text = read(path)?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Array(items)) => items.iter().map(Block2x2::from_json_value).collect(),
        Ok(v) => Ok(vec![Block2x2::from_json_value(&v)?]),
        Err(whole) => {
            let lines: Vec<(usize, &str)> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .collect();
            if lines.len() < 2 {
                return Err(Error::Parse(format!(
                    "line {}, column {}: {whole}",
                    whole.line(),
                    whole.column()
                )));
            }
            lines
                .into_iter()
                .map(|(i, l)| {
                    Block2x2::from_json_str(l)
                        .map_err(|e| Error::Parse(format!("input line {}: {e}", i + 1)))
                })
                .collect()
        }
    }
}

fn spec_from(a: &SpecArgs) -> SampleSpec {
    let mut spec = SampleSpec::new(a.method, a.n, a.count, a.seed);
    spec.r = a.r;
    spec.budget = a.budget;
    spec.cond_cap = a.cond_cap;
    spec
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

pub fn check(a: &CheckArgs) -> Result<u8> {
    let b = Block2x2::from_json_str(&read(&a.input)?)?;
    let psd = is_positive(&b, a.tol)?;
    let ppt = is_ppt(&b, a.tol)?;
    let schur = match require_pd(b.a()) {
        Ok(()) => Some(schur_criterion(&b, a.tol)?),
        Err(_) => None,
    };
    let h_gap = ppt.links()[0].gap;
    let ht_gap = ppt.links()[1].gap;
    let text = match a.format {
        Format::Json => {
            let mut v = json!({
                "n": b.n(),
                "psd": psd,
                "ppt": ppt,
                "schur": schur,
                "h_min_eig": h_gap,
                "h_tau_min_eig": ht_gap,
            });
            v["verdict"] = json!(verdict(ppt.pass));
            format!("{}\n", to_json(&v))
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "n: {}", b.n());
            let _ = writeln!(s, "PSD: {} (H min eig {:.6e})", verdict(psd.pass), h_gap);
            let _ = writeln!(s, "PPT: {} (H^τ min eig {:.6e})", verdict(ppt.pass), ht_gap);
            match &schur {
                Some(c) => {
                    for l in c.links() {
                        let _ = writeln!(
                            s,
                            "Schur {}: {} (min eig {:.6e})",
                            l.rhs,
                            verdict(l.pass),
                            l.gap
                        );
                    }
                }
                None => {
                    let _ = writeln!(s, "Schur: skipped (A is not positive definite)");
                }
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(if ppt.pass { EXIT_OK } else { EXIT_FAILURE })
}

fn verify_options(a: &VerifyArgs) -> Result<VerifyOptions> {
    let mut opts = VerifyOptions {
        tol: a.tol,
        ..Default::default()
    };
    if let Some(spec) = &a.norm {
        let f: Functional = spec.parse()?;
        opts.norms = Some(vec![f]);
        opts.lieb = Some(vec![f]);
    }
    Ok(opts)
}

fn outcome_table(o: &CampaignOutcome) -> String {
    let mut s = String::new();
    for r in &o.reports {
        let seed = r.seed.map(|s| format!(" seed {s}")).unwrap_or_default();
        let _ = writeln!(
            s,
            "sample {}{seed} (n={}): {} certificates, {} failed, {} marginal",
            r.sample_id,
            r.dimension,
            r.certificates.len(),
            r.failure_count,
            r.marginal_count
        );
        for c in &r.certificates {
            let flag = if c.marginal { " (marginal)" } else { "" };
            let _ = writeln!(
                s,
                "  {:<12} {} gap {:.3e}{flag}",
                c.name,
                verdict(c.pass),
                c.gap
            );
        }
    }
    let m = &o.summary;
    let _ = writeln!(
        s,
        "summary: {} samples, {} certificates, {} passed, {} marginal, {} failed",
        m.samples, m.certificates, m.passed, m.marginal, m.failed
    );
    s
}

pub fn verify(a: &VerifyArgs) -> Result<u8> {
    let kinds = match (&a.only, a.all) {
        (_, true) => VerifierKind::all().to_vec(),
        (Some(list), false) => VerifierKind::parse_list(list)?,
        (None, false) => {
            return Err(Error::InvalidParameter(
                "no verifiers selected; pass --all or --only NAME[,NAME...]".into(),
            ))
        }
    };
    let opts = verify_options(a)?;
    let exec = Execution::default();
    let outcome = match &a.input {
        Some(path) => verify_blocks(&read_blocks(path)?, &kinds, &opts, exec)?,
        None => run_campaign(&spec_from(&a.spec), &kinds, &opts, exec)?,
    };
    let text = match a.format {
        Format::Json => outcome.json_lines(),
        Format::Table => outcome_table(&outcome),
    };
    emit(&a.out, &text)?;
    Ok(if outcome.summary.failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

pub fn sample(a: &SampleArgs) -> Result<u8> {
    let spec = spec_from(&a.spec);
    spec.validate()?;
    let mut text = String::new();
    for i in 0..spec.count {
        text.push_str(&to_json(&spec.sample(i)?));
        text.push('\n');
    }
    emit(&a.out, &text)?;
    Ok(EXIT_OK)
}

/// A block, or a hunt report carrying `hit.block` or `best_block`.
fn replay_block(path: &Path) -> Result<Block2x2> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if let Some(block) = v.pointer("/hit/block").filter(|b| !b.is_null()) {
        return Block2x2::from_json_value(block);
    }
    if let Some(block) = v.get("best_block").filter(|b| !b.is_null()) {
        return Block2x2::from_json_value(block);
    }
    Block2x2::from_json_value(&v)
}

pub fn hunt(a: &HuntArgs) -> Result<u8> {
    if let Some(path) = &a.replay {
        let b = replay_block(path)?;
        let check = replay(&b, a.j, a.tol)?;
        let text = match a.format {
            Format::Json => format!("{}\n", to_json(&json!({ "replay": check, "block": b }))),
            Format::Table => format!(
                "replay j={}: s_j(X) = {:.9}, s_j((A+B)/2) = {:.9}, ratio {:.6}, certified {}\n",
                check.j, check.sj_x, check.sj_mean, check.ratio, check.certified
            ),
        };
        emit(&a.out, &text)?;
        return Ok(if check.certified {
            EXIT_OK
        } else {
            EXIT_FAILURE
        });
    }
    let cfg = HuntConfig {
        n: a.n,
        j: a.j,
        seed: a.seed,
        budget: a.budget,
        r: a.r,
        tol: a.tol,
    };
    let report = hunt_sj_counterexample(&cfg, Execution::default())?;
    let text = match a.format {
        Format::Json => format!("{}\n", to_json(&report)),
        Format::Table => {
            let mut s = format!(
                "hunt n={} j={} seed={}: {} of {} evaluations, best ratio {:.6}\n",
                report.n, report.j, report.seed, report.evaluated, report.budget, report.best_ratio
            );
            match &report.hit {
                Some(hit) => {
                    let _ = writeln!(
                        s,
                        "hit: s_j(X) = {:.9} > s_j((A+B)/2) = {:.9}, certified {}",
                        hit.check.sj_x, hit.check.sj_mean, hit.check.certified
                    );
                    let _ = writeln!(s, "{}", to_json(&hit.block));
                }
                None => s.push_str("no violation found (budget exhausted)\n"),
            }
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(if report.hit.is_some() {
        EXIT_OK
    } else {
        EXIT_EXHAUSTED
    })
}

pub fn selftest(a: &SelftestArgs) -> Result<u8> {
    if let Ok(v) = std::env::var(EIGEN_FAULT_ENV) {
        let delta: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{EIGEN_FAULT_ENV} must be a number")))?;
        inject_eigen_fault(delta);
    }
    let report = run_selftest(a.seed, Execution::default());
    let text = match a.format {
        Format::Json => format!("{}\n", to_json(&report)),
        Format::Table => {
            let mut s = String::new();
            for c in &report.checks {
                let _ = writeln!(s, "[{}] {}: {}", verdict(c.pass), c.name, c.detail);
            }
            let _ = writeln!(s, "selftest: {}", verdict(report.pass));
            s
        }
    };
    emit(&a.out, &text)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
}
