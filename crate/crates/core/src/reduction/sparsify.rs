use num_rational::BigRational;
use thiserror::Error;

use super::certificate::{ReductionCertificate, StepKind, Verdict};
use super::instance::{gap_floor, InstanceError, ProblemInstance};
use super::steps::{self, log_side, max_field_digits, StepOutput};
use crate::numerics::{ceil_to_dyadic, inverse_pow2, rational_pow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("certificate {index} ({step}) does not match recomputation: field `{field}`")]
    Mismatch {
        index: usize,
        step: String,
        field: &'static str,
    },
    #[error("chain has {found} certificates, recomputation yields {expected}")]
    Length { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Reduced,
    ForcedYes,
    ForcedNo,
}

impl Outcome {
    pub fn tag(self) -> &'static str {
        match self {
            Outcome::Reduced => "reduced",
            Outcome::ForcedYes => "forced_yes",
            Outcome::ForcedNo => "forced_no",
        }
    }
}

/// Output of [`sparsify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseInstance {
    pub instance: ProblemInstance,
    pub chain: Vec<ReductionCertificate>,
    pub outcome: Outcome,
    /// Largest digit count over all binary fields of `instance`.
    pub max_digits: usize,
    /// `⌈max_digits / ⌈log₂N⌉⌉`: the constant `C` of the output-size law.
    pub budget: usize,
}

impl SparseInstance {
    /// Some step took the small-N exemption.
    pub fn exempt(&self) -> bool {
        self.chain.iter().any(|c| c.verdict == Verdict::PassThrough)
    }
}

type Step = Box<dyn Fn(&ProblemInstance) -> StepOutput>;

/// The fixed step order: integer check per coupling, fractional truncation per
/// coupling, integer thresholds, fractional thresholds.
fn schedule(inst: &ProblemInstance) -> Vec<Step> {
    let ids: Vec<_> = inst.model.couplings().iter().map(|c| c.id).collect();
    let mut out: Vec<Step> = Vec::new();
    for &id in &ids {
        out.push(Box::new(move |i| steps::reduce_integer_coupling(i, id)));
    }
    for &id in &ids {
        out.push(Box::new(move |i| steps::reduce_fractional_coupling(i, id)));
    }
    out.push(Box::new(steps::reduce_integer_thresholds));
    out.push(Box::new(steps::reduce_fractional_thresholds));
    out
}

/// Every intermediate instance, starting with `inst`, plus the certificates.
fn run(inst: &ProblemInstance) -> (Vec<ProblemInstance>, Vec<ReductionCertificate>) {
    let mut instances = vec![inst.clone()];
    let mut chain = Vec::new();
    for step in schedule(inst) {
        let out = step(instances.last().expect("non-empty"));
        let forced = out.certificate.verdict.is_forced();
        instances.push(out.instance);
        chain.push(out.certificate);
        if forced {
            break;
        }
    }
    (instances, chain)
}

fn finish(instance: ProblemInstance, chain: Vec<ReductionCertificate>) -> SparseInstance {
    let outcome = match chain.last().map(|c| c.verdict) {
        Some(Verdict::ForcedYes) => Outcome::ForcedYes,
        Some(Verdict::ForcedNo) => Outcome::ForcedNo,
        _ => Outcome::Reduced,
    };
    let max_digits = max_field_digits(&instance);
    let budget = max_digits.div_ceil(log_side(&instance).max(1));
    SparseInstance {
        instance,
        chain,
        outcome,
        max_digits,
        budget,
    }
}

/// Composes the reduction steps, stopping early on a forced answer.
pub fn sparsify(inst: &ProblemInstance) -> Result<SparseInstance, ReductionError> {
    inst.validate()?;
    let (mut instances, chain) = run(inst);
    Ok(finish(instances.pop().expect("non-empty"), chain))
}

/// Recomputes the chain from `inst` and checks it against `chain` field by
/// field. Returns every intermediate instance, starting with `inst`.
pub fn replay(
    inst: &ProblemInstance,
    chain: &[ReductionCertificate],
) -> Result<Vec<ProblemInstance>, ReductionError> {
    inst.validate()?;
    let (instances, expected) = run(inst);
    for (index, (want, got)) in expected.iter().zip(chain).enumerate() {
        if let Some(field) = first_difference(want, got) {
            return Err(ReductionError::Mismatch {
                index,
                step: got.step.to_string(),
                field,
            });
        }
    }
    if expected.len() != chain.len() {
        return Err(ReductionError::Length {
            expected: expected.len(),
            found: chain.len(),
        });
    }
    Ok(instances)
}

fn first_difference(a: &ReductionCertificate, b: &ReductionCertificate) -> Option<&'static str> {
    let checks: [(&'static str, bool); 17] = [
        ("step", a.step == b.step),
        ("coupling", a.coupling == b.coupling),
        ("L", a.truncation_width == b.truncation_width),
        ("k", a.k == b.k),
        ("a", a.norm_constant == b.norm_constant),
        ("epsilon", a.epsilon == b.epsilon),
        ("widen", a.widen == b.widen),
        ("coupling_in", a.coupling_in == b.coupling_in),
        ("coupling_out", a.coupling_out == b.coupling_out),
        ("alpha_in", a.alpha_in == b.alpha_in),
        ("beta_in", a.beta_in == b.beta_in),
        ("alpha_out", a.alpha_out == b.alpha_out),
        ("beta_out", a.beta_out == b.beta_out),
        ("gap_in", a.gap_in == b.gap_in),
        ("gap_out", a.gap_out == b.gap_out),
        ("verdict", a.verdict == b.verdict),
        ("note", a.note == b.note),
    ];
    checks.iter().find(|(_, ok)| !ok).map(|(f, _)| *f)
}

/// Self-contained arithmetic audit of one certificate on a lattice of side
/// `n` and dimension `d`. Returns the violated conditions.
pub fn audit_certificate(cert: &ReductionCertificate, n: usize, d: u32) -> Vec<String> {
    let mut bad = Vec::new();
    let ell = crate::numerics::ceil_log2(n as u64) as usize;
    let changed = cert.alpha_in != cert.alpha_out || cert.beta_in != cert.beta_out;
    match cert.step {
        StepKind::FractionalCoupling => {
            let (Some(k), Some(l), Some(a)) = (cert.k, cert.truncation_width, &cert.norm_constant) else {
                bad.push("missing k, L or a".into());
                return bad;
            };
            if k != 2 * cert.gap_in + d {
                bad.push(format!("k = {k} but 2c + d = {}", 2 * cert.gap_in + d));
            }
            if l != k as usize * ell {
                bad.push(format!("L = {l} but k*ceil(log2 N) = {}", k as usize * ell));
            }
            let eps = a * rational_pow(n as u64, d) / rational_pow(n as u64, k);
            if cert.epsilon != eps {
                bad.push("epsilon differs from a*N^d/N^k".into());
            }
            if cert.verdict == Verdict::Reduced && changed && cert.widen != ceil_to_dyadic(&eps, l) {
                bad.push("widen is not epsilon rounded up to 2^-L".into());
            }
        }
        StepKind::FractionalThresholds => {
            let Some(l) = cert.truncation_width else {
                bad.push("missing L".into());
                return bad;
            };
            if l != 2 * cert.gap_in as usize * ell {
                bad.push(format!("L = {l} but 2c*ceil(log2 N) = {}", 2 * cert.gap_in as usize * ell));
            }
            if cert.epsilon != inverse_pow2(l) {
                bad.push("epsilon differs from 2^-L".into());
            }
        }
        StepKind::IntegerCoupling | StepKind::IntegerThresholds => {
            if !cert.verdict.is_forced() && changed && cert.step == StepKind::IntegerCoupling {
                bad.push("integer coupling step moved a threshold".into());
            }
        }
    }
    if cert.verdict == Verdict::Reduced {
        if cert.alpha_out.value() < cert.alpha_in.value() || cert.beta_out.value() > cert.beta_in.value() {
            bad.push("thresholds moved inward".into());
        }
        let gap: BigRational = cert.beta_out.value() - cert.alpha_out.value();
        if gap <= gap_floor(n, cert.gap_out) {
            bad.push(format!("beta_out - alpha_out <= 1/N^{}", cert.gap_out));
        }
    }
    bad
}

/// The instance a certificate claims to produce from `inst`, read off the
/// certificate itself rather than recomputed.
pub fn apply_certificate(inst: &ProblemInstance, cert: &ReductionCertificate) -> ProblemInstance {
    match cert.verdict {
        Verdict::ForcedYes => return steps::forced_instance(inst, true),
        Verdict::ForcedNo => return steps::forced_instance(inst, false),
        Verdict::PassThrough => return inst.clone(),
        Verdict::Reduced => {}
    }
    let model = match (cert.coupling, &cert.coupling_out) {
        (Some(id), Some(value)) => inst.model.with_coupling(id, value.clone()).unwrap_or_else(|| inst.model.clone()),
        _ => inst.model.clone(),
    };
    ProblemInstance {
        model,
        alpha: cert.alpha_out.clone(),
        beta: cert.beta_out.clone(),
        gap_exponent: cert.gap_out,
    }
}
