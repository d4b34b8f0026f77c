use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::models::{ModelError, ModelKind, ModelSpec};
use crate::numerics::{inverse_pow2, rational_pow, FixedPrecisionReal};

/// Couplings must satisfy `|J| < N^COUPLING_DEGREE`: the fixed polynomial that
/// bounds integer parts to `O(log N)` digits.
pub const COUPLING_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("lattice side N = {0} is below 2")]
    SideTooSmall(usize),
    #[error("gap exponent must be at least 1")]
    GapExponent,
    #[error("thresholds violate beta - alpha > 1/N^{c}: beta - alpha = {gap}")]
    Gap { c: u32, gap: String },
    #[error("coupling {name} must be strictly positive")]
    NonPositive { name: String },
    #[error("coupling {name} = {value} is not below N^{COUPLING_DEGREE} = {limit}")]
    CouplingTooLarge {
        name: String,
        value: String,
        limit: String,
    },
}

/// A promise-problem instance: is `λ(H) < α` or `λ(H) > β`, promised
/// `β − α > 1/N^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    pub model: ModelSpec,
    pub alpha: FixedPrecisionReal,
    pub beta: FixedPrecisionReal,
    pub gap_exponent: u32,
}

impl ProblemInstance {
    pub fn side(&self) -> usize {
        self.model.geometry.side
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }

    /// `β − α`.
    pub fn gap(&self) -> BigRational {
        self.beta.value() - self.alpha.value()
    }

    /// `1/N^e`.
    pub fn inverse_side_pow(&self, e: u32) -> BigRational {
        gap_floor(self.side(), e)
    }

    pub fn norm_bound(&self) -> BigRational {
        self.model.norm_bound()
    }

    pub fn with_thresholds(&self, alpha: FixedPrecisionReal, beta: FixedPrecisionReal, c: u32) -> Self {
        Self {
            model: self.model.clone(),
            alpha,
            beta,
            gap_exponent: c,
        }
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        self.model.geometry.validate()?;
        let n = self.side();
        if n < 2 {
            return Err(InstanceError::SideTooSmall(n));
        }
        if self.gap_exponent == 0 {
            return Err(InstanceError::GapExponent);
        }
        let gap = self.gap();
        if gap <= self.inverse_side_pow(self.gap_exponent) {
            return Err(InstanceError::Gap {
                c: self.gap_exponent,
                gap: crate::numerics::format_rational(&gap),
            });
        }
        let limit = rational_pow(n as u64, COUPLING_DEGREE);
        for c in self.model.couplings() {
            let v = c.value.value();
            if c.positive && v <= BigRational::zero() {
                return Err(InstanceError::NonPositive { name: c.id.to_string() });
            }
            if v.abs() >= limit {
                return Err(InstanceError::CouplingTooLarge {
                    name: c.id.to_string(),
                    value: crate::numerics::format_rational(&v),
                    limit: crate::numerics::format_rational(&limit),
                });
            }
        }
        if let Some(ne) = self.model.electrons() {
            if self.model.dim() == 0 || ne == 0 {
                return Err(ModelError::Electrons(format!("no states with {ne} electrons")).into());
            }
        }
        Ok(())
    }
}

/// `1/N^e`.
pub fn gap_floor(side: usize, e: u32) -> BigRational {
    rational_pow(side as u64, e).recip()
}

/// `2^-L` as a canonical signed-digit value.
pub fn unit_in_last_place(width: usize) -> FixedPrecisionReal {
    FixedPrecisionReal::from_dyadic(&inverse_pow2(width)).expect("power of two is dyadic")
}
