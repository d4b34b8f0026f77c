//! Soundness verification: run (or replay) the reduction chain and check
//! every certificate against the spectral oracle.

use std::fmt;

use num_traits::ToPrimitive;

use crate::reduction::{
    apply_certificate, audit_certificate, replay, sparsify, ProblemInstance, ReductionCertificate, ReductionError,
    StepKind, Verdict,
};
use crate::spectral::{decide_promise, weyl_check, Answer, Decision, SpectralConfig, SpectralError, NUMERICAL_ALLOWANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn tag(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.status.tag(), self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoundnessReport {
    pub checks: Vec<Check>,
    pub chain: Vec<ReductionCertificate>,
    pub original: Option<Decision>,
    pub reduced: Option<Decision>,
}

impl SoundnessReport {
    /// No check failed. Skipped checks do not count against.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn promise_violated(&self) -> bool {
        self.original.as_ref().is_some_and(|d| d.answer == Answer::PromiseViolated)
    }

    fn push(&mut self, name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }
}

fn pass_fail(ok: bool) -> CheckStatus {
    if ok {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    }
}

/// Sparsifies `inst` and verifies the resulting chain.
pub fn verify_instance(inst: &ProblemInstance, cfg: &SpectralConfig) -> Result<SoundnessReport, ReductionError> {
    let sparse = sparsify(inst)?;
    Ok(verify_chain(inst, &sparse.chain, cfg))
}

/// Verifies a supplied chain: certificate arithmetic, replay against
/// recomputation, Weyl bounds per coupling truncation, gap preservation, and
/// answer preservation between the original and the final instance.
pub fn verify_chain(inst: &ProblemInstance, chain: &[ReductionCertificate], cfg: &SpectralConfig) -> SoundnessReport {
    let mut report = SoundnessReport {
        checks: Vec::new(),
        chain: chain.to_vec(),
        original: None,
        reduced: None,
    };
    let n = inst.side();
    let d = inst.model.geometry.dim;

    for (i, cert) in chain.iter().enumerate() {
        let bad = audit_certificate(cert, n, d);
        let detail = if bad.is_empty() {
            format!("{} exact", cert.step)
        } else {
            bad.join("; ")
        };
        report.push(format!("certificate[{i}] arithmetic"), pass_fail(bad.is_empty()), detail);
    }
    match replay(inst, chain) {
        Ok(_) => report.push("chain replay", CheckStatus::Pass, "every certificate matches recomputation"),
        Err(e) => report.push("chain replay", CheckStatus::Fail, e.to_string()),
    }

    let mut instances = vec![inst.clone()];
    for cert in chain {
        instances.push(apply_certificate(instances.last().expect("non-empty"), cert));
    }

    for (i, cert) in chain.iter().enumerate() {
        if cert.verdict == Verdict::Reduced && cert.gap_out != cert.gap_in {
            let gap = cert.beta_out.value() - cert.alpha_out.value();
            let floor = crate::reduction::instance::gap_floor(n, cert.gap_out);
            report.push(
                format!("certificate[{i}] gap"),
                pass_fail(gap > floor),
                format!("beta_out - alpha_out > 1/N^{}", cert.gap_out),
            );
        }
        if cert.step != StepKind::FractionalCoupling || cert.verdict != Verdict::Reduced || cert.coupling_in == cert.coupling_out {
            continue;
        }
        let name = format!("certificate[{i}] weyl");
        let ops = instances[i]
            .model
            .build(cfg.max_dim)
            .and_then(|h| instances[i + 1].model.build(cfg.max_dim).map(|h2| (h, h2)));
        let (h, h2) = match ops {
            Ok(pair) => pair,
            Err(e) => {
                report.push(name, CheckStatus::Skipped, format!("build: {e}"));
                continue;
            }
        };
        match weyl_check(&h, &h2, cfg) {
            Ok(w) => {
                let eps = cert.epsilon.to_f64().unwrap_or(f64::INFINITY);
                report.push(
                    name.clone(),
                    pass_fail(w.holds),
                    format!("|dlambda| = {:.3e} <= ||H - H'|| = {:.3e}", w.shift, w.perturbation_norm),
                );
                report.push(
                    format!("{name} epsilon"),
                    pass_fail(w.perturbation_norm <= eps + NUMERICAL_ALLOWANCE),
                    format!("||H - H'|| = {:.3e} <= epsilon = {eps:.3e}", w.perturbation_norm),
                );
            }
            Err(e) => report.push(name, CheckStatus::Skipped, format!("oracle: {e}")),
        }
    }

    let final_instance = instances.last().expect("non-empty");
    let original = match decide_promise(inst, cfg) {
        Ok(d) => d,
        Err(e) => {
            report.push("answer preservation", CheckStatus::Skipped, format!("oracle on original: {e}"));
            return report;
        }
    };
    let answer = original.answer;
    report.original = Some(original);
    if answer == Answer::PromiseViolated {
        report.push(
            "answer preservation",
            CheckStatus::Skipped,
            "original instance violates the promise; soundness does not apply",
        );
        return report;
    }
    let forced = chain.last().map(|c| c.verdict).filter(|v| v.is_forced());
    if let Some(v) = forced {
        let claimed = if v == Verdict::ForcedYes { Answer::Yes } else { Answer::No };
        report.push(
            "forced verdict",
            pass_fail(claimed == answer),
            format!("{v} against oracle answer {answer}"),
        );
    }
    match decide_promise(final_instance, cfg) {
        Ok(reduced) => {
            report.push(
                "answer preservation",
                pass_fail(reduced.answer == answer),
                format!("original {answer}, reduced {}", reduced.answer),
            );
            report.reduced = Some(reduced);
        }
        Err(SpectralError::Instance(e)) => {
            report.push("answer preservation", CheckStatus::Fail, format!("reduced instance invalid: {e}"));
        }
        Err(e) => report.push("answer preservation", CheckStatus::Skipped, format!("oracle on reduced: {e}")),
    }
    report
}
