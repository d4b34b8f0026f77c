use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::models::CouplingId;
use crate::numerics::FixedPrecisionReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    IntegerCoupling,
    FractionalCoupling,
    IntegerThresholds,
    FractionalThresholds,
}

impl StepKind {
    pub fn tag(self) -> &'static str {
        match self {
            StepKind::IntegerCoupling => "integer_coupling",
            StepKind::FractionalCoupling => "fractional_coupling",
            StepKind::IntegerThresholds => "integer_thresholds",
            StepKind::FractionalThresholds => "fractional_thresholds",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for StepKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "integer_coupling" => StepKind::IntegerCoupling,
            "fractional_coupling" => StepKind::FractionalCoupling,
            "integer_thresholds" => StepKind::IntegerThresholds,
            "fractional_thresholds" => StepKind::FractionalThresholds,
            _ => return Err(format!("unknown step `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Reduced,
    ForcedYes,
    ForcedNo,
    /// Small-N exemption: the step's gap arithmetic does not hold, so the
    /// instance passes through unchanged.
    PassThrough,
}

impl Verdict {
    pub fn tag(self) -> &'static str {
        match self {
            Verdict::Reduced => "reduced",
            Verdict::ForcedYes => "forced_yes",
            Verdict::ForcedNo => "forced_no",
            Verdict::PassThrough => "pass_through",
        }
    }

    pub fn is_forced(self) -> bool {
        matches!(self, Verdict::ForcedYes | Verdict::ForcedNo)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "reduced" => Verdict::Reduced,
            "forced_yes" => Verdict::ForcedYes,
            "forced_no" => Verdict::ForcedNo,
            "pass_through" => Verdict::PassThrough,
            _ => return Err(format!("unknown verdict `{s}`")),
        })
    }
}

/// Record of one reduction step.
///
/// `epsilon` is the step's perturbation bound (`a·N^d/N^k` for a coupling
/// truncation, `2^-L` for a threshold truncation, `0` otherwise) and `widen`
/// is the dyadic amount actually added to `α` and subtracted from `β`.
/// Both are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub step: StepKind,
    pub coupling: Option<CouplingId>,
    pub truncation_width: Option<usize>,
    pub k: Option<u32>,
    pub norm_constant: Option<BigRational>,
    pub epsilon: BigRational,
    pub widen: BigRational,
    pub coupling_in: Option<FixedPrecisionReal>,
    pub coupling_out: Option<FixedPrecisionReal>,
    pub alpha_in: FixedPrecisionReal,
    pub beta_in: FixedPrecisionReal,
    pub alpha_out: FixedPrecisionReal,
    pub beta_out: FixedPrecisionReal,
    pub gap_in: u32,
    pub gap_out: u32,
    pub verdict: Verdict,
    pub note: Option<String>,
}
