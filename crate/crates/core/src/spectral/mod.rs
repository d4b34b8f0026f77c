//! Exact-diagonalization oracle: ground energies, operator norms, promise
//! decisions and Weyl-bound checks.
//!
//! Unless a method is requested, dense diagonalization is used up to
//! [`DENSE_AUTO_MAX_DIM`]; above that a thick-restart Lanczos solver runs on
//! the compiled operator.

pub mod dense;
pub mod lanczos;
pub mod operator;

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::models::{ModelError, SparseOperator};
use crate::numerics::format_rational;
use crate::reduction::{InstanceError, ProblemInstance};
pub use lanczos::{lowest_eigenpair, Eigenpair, LanczosConfig};
pub use operator::{Compiled, CompiledPauli, CsrMatrix, LinearOperator, Negated, Scalar};

/// Largest dimension handled by dense diagonalization.
pub const DENSE_MAX_DIM: usize = 1 << 12;
/// Largest dimension for which dense is the default. Above it Lanczos is
/// tens of times faster at equal accuracy.
pub const DENSE_AUTO_MAX_DIM: usize = 1 << 8;
/// Largest dimension handled at all.
pub const ITERATIVE_MAX_DIM: usize = 1 << 24;
/// Absolute floating-point allowance folded into every error bound.
pub const NUMERICAL_ALLOWANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("no convergence after {restarts} restarts (last Ritz value {value})")]
    NonConvergence { restarts: usize, value: f64 },
    #[error("empty operator")]
    Empty,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Dense,
    Iterative,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Iterative => "iterative",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dense" => Ok(Method::Dense),
            "iterative" => Ok(Method::Iterative),
            _ => Err(format!("unknown method `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// `None` picks dense up to [`DENSE_AUTO_MAX_DIM`] and iterative above.
    pub method: Option<Method>,
    /// Residual target relative to `‖H‖`.
    pub tolerance: f64,
    pub seed: u64,
    pub max_dim: usize,
    pub lanczos: LanczosConfig,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        let lanczos = LanczosConfig::default();
        Self {
            method: None,
            tolerance: lanczos.tolerance,
            seed: lanczos.seed,
            max_dim: ITERATIVE_MAX_DIM,
            lanczos,
        }
    }
}

impl SpectralConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = Some(method);
        self
    }

    fn lanczos(&self) -> LanczosConfig {
        LanczosConfig {
            tolerance: self.tolerance,
            seed: self.seed,
            ..self.lanczos
        }
    }

    fn resolve(&self, dim: usize) -> Result<Method, SpectralError> {
        if dim == 0 {
            return Err(SpectralError::Empty);
        }
        if dim > self.max_dim.min(ITERATIVE_MAX_DIM) {
            return Err(SpectralError::Capacity(format!(
                "dimension {dim} exceeds the cap {}",
                self.max_dim.min(ITERATIVE_MAX_DIM)
            )));
        }
        let method = self
            .method
            .unwrap_or(if dim <= DENSE_AUTO_MAX_DIM { Method::Dense } else { Method::Iterative });
        if method == Method::Dense && dim > DENSE_MAX_DIM {
            return Err(SpectralError::Capacity(format!(
                "dense diagonalization is limited to dimension {DENSE_MAX_DIM}, got {dim}"
            )));
        }
        Ok(method)
    }
}

/// An extremal eigenvalue with its error certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub lambda: f64,
    /// `‖Hv − λv‖` for the returned unit vector `v`.
    pub residual: f64,
    pub method: Method,
    /// Residual plus [`NUMERICAL_ALLOWANCE`].
    pub certified_error_bound: f64,
    pub matvecs: usize,
}

fn finish(lambda: f64, residual: f64, method: Method, matvecs: usize) -> SpectralResult {
    SpectralResult {
        lambda,
        residual,
        method,
        certified_error_bound: residual + NUMERICAL_ALLOWANCE,
        matvecs,
    }
}

fn lowest_with<T: Scalar>(op: &SparseOperator, method: Method, cfg: &SpectralConfig, negate: bool) -> Result<SpectralResult, SpectralError> {
    let compiled = Compiled::<T>::new(op);
    let sign = if negate { -1.0 } else { 1.0 };
    if let Some(diag) = compiled.diagonal_only() {
        let lambda = diag.iter().map(|v| sign * v).fold(f64::INFINITY, f64::min);
        return Ok(finish(sign * lambda, 0.0, method, 0));
    }
    match method {
        Method::Dense => {
            let mut m = compiled.to_dense();
            if negate {
                m = -m;
            }
            let (lambda, residual) = dense::lowest(&m);
            Ok(finish(sign * lambda, residual, method, 0))
        }
        Method::Iterative => {
            let pair = if negate {
                lowest_eigenpair(&Negated(&compiled), &cfg.lanczos())?
            } else {
                lowest_eigenpair(&compiled, &cfg.lanczos())?
            };
            Ok(finish(sign * pair.value, pair.residual, method, pair.matvecs))
        }
    }
}

fn extremal(op: &SparseOperator, cfg: &SpectralConfig, negate: bool) -> Result<SpectralResult, SpectralError> {
    let method = cfg.resolve(op.dim())?;
    if op.is_real() {
        lowest_with::<f64>(op, method, cfg, negate)
    } else {
        lowest_with::<Complex64>(op, method, cfg, negate)
    }
}

/// `λ(H)`, the smallest eigenvalue.
pub fn ground_energy(op: &SparseOperator, cfg: &SpectralConfig) -> Result<SpectralResult, SpectralError> {
    extremal(op, cfg, false)
}

/// The largest eigenvalue.
pub fn top_energy(op: &SparseOperator, cfg: &SpectralConfig) -> Result<SpectralResult, SpectralError> {
    extremal(op, cfg, true)
}

/// `‖H‖ = max(|λ_min|, |λ_max|)`.
pub fn operator_norm(op: &SparseOperator, cfg: &SpectralConfig) -> Result<f64, SpectralError> {
    if op.term_count() == 0 {
        return Ok(0.0);
    }
    if cfg.resolve(op.dim())? == Method::Dense && !op.is_diagonal() {
        let s = spectrum(op)?;
        return Ok(s[0].abs().max(s[s.len() - 1].abs()));
    }
    let lo = ground_energy(op, cfg)?;
    let hi = top_energy(op, cfg)?;
    Ok(lo.lambda.abs().max(hi.lambda.abs()))
}

/// Full spectrum, ascending, by dense diagonalization.
pub fn spectrum(op: &SparseOperator) -> Result<Vec<f64>, SpectralError> {
    let dim = op.dim();
    if dim > DENSE_MAX_DIM {
        return Err(SpectralError::Capacity(format!(
            "full spectrum is limited to dimension {DENSE_MAX_DIM}, got {dim}"
        )));
    }
    Ok(if op.is_real() {
        dense::eigenvalues(&Compiled::<f64>::new(op).to_dense())
    } else {
        dense::eigenvalues(&Compiled::<Complex64>::new(op).to_dense())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    PromiseViolated,
}

impl Answer {
    pub fn tag(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::PromiseViolated => "promise_violated",
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub answer: Answer,
    /// `None` when the norm bound alone decided.
    pub spectral: Option<SpectralResult>,
    pub norm_bound: BigRational,
    pub diagnostic: String,
}

/// Decides `λ < α` (Yes) against `λ > β` (No). A value within the certified
/// error of either threshold, or between them, is reported as a promise
/// violation rather than guessed.
pub fn decide_promise(inst: &ProblemInstance, cfg: &SpectralConfig) -> Result<Decision, SpectralError> {
    inst.validate()?;
    let p = inst.norm_bound();
    let alpha = inst.alpha.value();
    let beta = inst.beta.value();
    if alpha > p {
        return Ok(Decision {
            answer: Answer::Yes,
            spectral: None,
            diagnostic: format!("alpha > norm bound {}", format_rational(&p)),
            norm_bound: p,
        });
    }
    if beta < -p.clone() {
        return Ok(Decision {
            answer: Answer::No,
            spectral: None,
            diagnostic: format!("beta < -(norm bound {})", format_rational(&p)),
            norm_bound: p,
        });
    }
    let op = inst.model.build(cfg.max_dim)?;
    let result = ground_energy(&op, cfg)?;
    let (a, b) = (alpha.to_f64().unwrap_or(f64::NAN), beta.to_f64().unwrap_or(f64::NAN));
    let (lambda, err) = (result.lambda, result.certified_error_bound);
    let (answer, diagnostic) = if lambda + err < a {
        (Answer::Yes, format!("lambda = {lambda:.12} < alpha = {a:.12}"))
    } else if lambda - err > b {
        (Answer::No, format!("lambda = {lambda:.12} > beta = {b:.12}"))
    } else {
        (
            Answer::PromiseViolated,
            format!("lambda = {lambda:.12} +/- {err:.1e} is not clear of [alpha, beta] = [{a:.12}, {b:.12}]"),
        )
    };
    Ok(Decision {
        answer,
        spectral: Some(result),
        norm_bound: p,
        diagnostic,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylReport {
    pub lambda: f64,
    pub lambda_perturbed: f64,
    /// `|λ(H) − λ(H')|`.
    pub shift: f64,
    /// `‖H − H'‖`.
    pub perturbation_norm: f64,
    pub allowance: f64,
    pub holds: bool,
}

/// Checks `|λ(H) − λ(H')| ≤ ‖H − H'‖` up to [`NUMERICAL_ALLOWANCE`].
pub fn weyl_check(h: &SparseOperator, h2: &SparseOperator, cfg: &SpectralConfig) -> Result<WeylReport, SpectralError> {
    if h.dim() != h2.dim() {
        return Err(ModelError::Mismatch(format!("dimensions {} and {}", h.dim(), h2.dim())).into());
    }
    let l1 = ground_energy(h, cfg)?;
    let l2 = ground_energy(h2, cfg)?;
    let diff = h.difference(h2)?;
    let perturbation_norm = operator_norm(&diff, cfg)?;
    let shift = (l1.lambda - l2.lambda).abs();
    Ok(WeylReport {
        lambda: l1.lambda,
        lambda_perturbed: l2.lambda,
        shift,
        perturbation_norm,
        allowance: NUMERICAL_ALLOWANCE,
        holds: shift <= perturbation_norm + NUMERICAL_ALLOWANCE,
    })
}
