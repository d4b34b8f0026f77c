//! The individual reduction steps. Each takes the running instance and returns
//! the next instance together with its certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::certificate::{ReductionCertificate, StepKind, Verdict};
use super::instance::{gap_floor, unit_in_last_place, ProblemInstance, COUPLING_DEGREE};
use crate::models::CouplingId;
use crate::numerics::{ceil_log2, ceil_to_dyadic, inverse_pow2, rational_pow, FixedPrecisionReal};

/// Result of one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutput {
    pub instance: ProblemInstance,
    pub certificate: ReductionCertificate,
}

fn dyadic(v: &BigRational) -> FixedPrecisionReal {
    FixedPrecisionReal::from_dyadic(v).expect("threshold arithmetic stays dyadic")
}

/// `⌈log₂N⌉`, the unit in which every width is measured.
pub fn log_side(inst: &ProblemInstance) -> usize {
    ceil_log2(inst.side() as u64) as usize
}

/// Integer-digit cap for couplings: `|J| < N^D` has a canonical form with at
/// most `D·⌈log₂N⌉ + 1` integer digits.
pub fn coupling_int_limit(inst: &ProblemInstance) -> usize {
    COUPLING_DEGREE as usize * log_side(inst) + 1
}

/// Integer-digit cap for thresholds inside `(−P, P)`.
pub fn threshold_int_limit(norm_bound: &BigRational) -> usize {
    let ceil = norm_bound.ceil().to_integer();
    ceil.bits() as usize + 1
}

fn identity_certificate(inst: &ProblemInstance, step: StepKind) -> ReductionCertificate {
    ReductionCertificate {
        step,
        coupling: None,
        truncation_width: None,
        k: None,
        norm_constant: None,
        epsilon: BigRational::zero(),
        widen: BigRational::zero(),
        coupling_in: None,
        coupling_out: None,
        alpha_in: inst.alpha.clone(),
        beta_in: inst.beta.clone(),
        alpha_out: inst.alpha.clone(),
        beta_out: inst.beta.clone(),
        gap_in: inst.gap_exponent,
        gap_out: inst.gap_exponent,
        verdict: Verdict::Reduced,
        note: None,
    }
}

/// Checks `0 < J < N^D` (validated upstream) and shortens an over-long
/// integer part by canonicalizing. The value never changes.
pub fn reduce_integer_coupling(inst: &ProblemInstance, id: CouplingId) -> StepOutput {
    let value = inst.model.coupling(id).expect("coupling id from this model").clone();
    let mut cert = identity_certificate(inst, StepKind::IntegerCoupling);
    cert.coupling = Some(id);
    cert.coupling_in = Some(value.clone());
    let limit = coupling_int_limit(inst);
    let out = if value.int_width() > limit {
        cert.note = Some(format!("integer part canonicalized to at most {limit} digits"));
        value.canonicalize()
    } else {
        value
    };
    cert.coupling_out = Some(out.clone());
    let instance = ProblemInstance {
        model: inst.model.with_coupling(id, out).expect("coupling id from this model"),
        ..inst.clone()
    };
    StepOutput {
        instance,
        certificate: cert,
    }
}

/// Truncates one coupling to `L = k·⌈log₂N⌉` fractional digits with
/// `k = 2c + d`, widening the thresholds by the certified bound
/// `ε = a·N^d/N^k` rounded up to a multiple of `2^-L`.
pub fn reduce_fractional_coupling(inst: &ProblemInstance, id: CouplingId) -> StepOutput {
    let coupling = inst
        .model
        .couplings()
        .into_iter()
        .find(|c| c.id == id)
        .expect("coupling id from this model");
    let value = coupling.value.clone();
    let a = coupling.norm_constant.clone();
    let positive = coupling.positive;
    let n = inst.side() as u64;
    let d = inst.model.geometry.dim;
    let c = inst.gap_exponent;
    let k = 2 * c + d;
    let width = k as usize * log_side(inst);
    let epsilon = &a * rational_pow(n, d) / rational_pow(n, k);

    let mut cert = identity_certificate(inst, StepKind::FractionalCoupling);
    cert.coupling = Some(id);
    cert.truncation_width = Some(width);
    cert.k = Some(k);
    cert.norm_constant = Some(a.clone());
    cert.epsilon = epsilon.clone();
    cert.coupling_in = Some(value.clone());
    cert.coupling_out = Some(value.clone());

    let mut truncated = value.truncate_fraction(width);
    if positive && truncated.value() <= BigRational::zero() {
        truncated = unit_in_last_place(width);
    }
    if truncated.value() == value.value() {
        cert.coupling_out = Some(truncated.clone());
        cert.note = Some("already short: value unchanged, no widening".into());
        let instance = ProblemInstance {
            model: inst.model.with_coupling(id, truncated).expect("coupling id from this model"),
            ..inst.clone()
        };
        return StepOutput {
            instance,
            certificate: cert,
        };
    }

    let pass_through = |mut cert: ReductionCertificate, note: String| {
        cert.verdict = Verdict::PassThrough;
        cert.note = Some(note);
        StepOutput {
            instance: inst.clone(),
            certificate: cert,
        }
    };
    let side_pow_c = rational_pow(n, c);
    let two_a_plus_one = &a * BigRational::from_integer(BigInt::from(2)) + BigRational::one();
    if side_pow_c <= two_a_plus_one {
        return pass_through(cert, format!("small-N exemption: N^c = {n}^{c} <= 2a + 1"));
    }
    let widen = ceil_to_dyadic(&epsilon, width);
    let alpha = dyadic(&(inst.alpha.value() + &widen));
    let beta = dyadic(&(inst.beta.value() - &widen));
    if beta.value() - alpha.value() <= gap_floor(inst.side(), 2 * c) {
        return pass_through(cert, "small-N exemption: widened gap below 1/N^(2c)".into());
    }
    cert.widen = widen;
    cert.coupling_out = Some(truncated.clone());
    cert.alpha_out = alpha.clone();
    cert.beta_out = beta.clone();
    cert.gap_out = 2 * c;
    let instance = ProblemInstance {
        model: inst.model.with_coupling(id, truncated).expect("coupling id from this model"),
        alpha,
        beta,
        gap_exponent: 2 * c,
    };
    StepOutput {
        instance,
        certificate: cert,
    }
}

/// The designated instance for a forced answer: same model and lattice with
/// every coupling 1, and integer thresholds both above (`Yes`) or both below
/// (`No`) the norm bound `P₁` of that instance.
pub fn forced_instance(inst: &ProblemInstance, yes: bool) -> ProblemInstance {
    let model = inst.model.with_unit_couplings();
    let p = model.norm_bound().ceil().to_integer();
    let one = BigInt::one();
    let (alpha, beta) = if yes {
        (&p + &one, &p + &one + &one)
    } else {
        (-&p - &one - &one, -&p - &one)
    };
    ProblemInstance {
        model,
        alpha: dyadic(&BigRational::from_integer(alpha)),
        beta: dyadic(&BigRational::from_integer(beta)),
        gap_exponent: inst.gap_exponent,
    }
}

/// With `P = Σ|J|·a·N^d ≥ ‖H‖`: `α ≤ −P` forces No, `β ≥ P` forces Yes, and
/// otherwise over-long integer parts of the thresholds are canonicalized.
pub fn reduce_integer_thresholds(inst: &ProblemInstance) -> StepOutput {
    let p = inst.norm_bound();
    let mut cert = identity_certificate(inst, StepKind::IntegerThresholds);
    let forced = if inst.alpha.value() <= -p.clone() {
        Some(false)
    } else if inst.beta.value() >= p {
        Some(true)
    } else {
        None
    };
    if let Some(yes) = forced {
        let instance = forced_instance(inst, yes);
        cert.alpha_out = instance.alpha.clone();
        cert.beta_out = instance.beta.clone();
        cert.gap_out = instance.gap_exponent;
        cert.verdict = if yes { Verdict::ForcedYes } else { Verdict::ForcedNo };
        cert.note = Some(format!("norm bound P = {}", crate::numerics::format_rational(&p)));
        return StepOutput {
            instance,
            certificate: cert,
        };
    }
    let limit = threshold_int_limit(&p);
    let shorten = |x: &FixedPrecisionReal| {
        if x.int_width() > limit {
            x.canonicalize()
        } else {
            x.clone()
        }
    };
    let alpha = shorten(&inst.alpha);
    let beta = shorten(&inst.beta);
    if alpha != inst.alpha || beta != inst.beta {
        cert.note = Some(format!("integer parts canonicalized to at most {limit} digits"));
    }
    cert.alpha_out = alpha.clone();
    cert.beta_out = beta.clone();
    StepOutput {
        instance: ProblemInstance {
            alpha,
            beta,
            ..inst.clone()
        },
        certificate: cert,
    }
}

/// Truncates long thresholds to `L = 2c·⌈log₂N⌉` fractional digits, moving
/// `α` up and `β` down by `2^-L` so neither answer can flip.
pub fn reduce_fractional_thresholds(inst: &ProblemInstance) -> StepOutput {
    let n = inst.side() as u64;
    let c = inst.gap_exponent;
    let width = 2 * c as usize * log_side(inst);
    let ulp = inverse_pow2(width);
    let mut cert = identity_certificate(inst, StepKind::FractionalThresholds);
    cert.truncation_width = Some(width);
    cert.epsilon = ulp.clone();

    let long_alpha = inst.alpha.frac_width() > width;
    let long_beta = inst.beta.frac_width() > width;
    if !long_alpha && !long_beta {
        cert.note = Some("already short: thresholds unchanged".into());
        return StepOutput {
            instance: inst.clone(),
            certificate: cert,
        };
    }
    if rational_pow(n, c) <= BigRational::from_integer(BigInt::from(5)) {
        cert.verdict = Verdict::PassThrough;
        cert.note = Some(format!("small-N exemption: N^c = {n}^{c} <= 5"));
        return StepOutput {
            instance: inst.clone(),
            certificate: cert,
        };
    }
    let alpha = if long_alpha {
        dyadic(&(inst.alpha.truncate_fraction(width).value() + &ulp))
    } else {
        inst.alpha.clone()
    };
    let beta = if long_beta {
        dyadic(&(inst.beta.truncate_fraction(width).value() - &ulp))
    } else {
        inst.beta.clone()
    };
    if beta.value() - alpha.value() <= gap_floor(inst.side(), 2 * c) {
        cert.verdict = Verdict::PassThrough;
        cert.note = Some("small-N exemption: truncated gap below 1/N^(2c)".into());
        return StepOutput {
            instance: inst.clone(),
            certificate: cert,
        };
    }
    cert.widen = ulp;
    cert.alpha_out = alpha.clone();
    cert.beta_out = beta.clone();
    cert.gap_out = 2 * c;
    StepOutput {
        instance: ProblemInstance {
            alpha,
            beta,
            gap_exponent: 2 * c,
            ..inst.clone()
        },
        certificate: cert,
    }
}

/// Largest digit count among the instance's binary fields.
pub fn max_field_digits(inst: &ProblemInstance) -> usize {
    inst.model
        .couplings()
        .iter()
        .map(|c| c.value.digit_count())
        .chain([inst.alpha.digit_count(), inst.beta.digit_count()])
        .max()
        .unwrap_or(0)
}

