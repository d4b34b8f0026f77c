//! Subcommand implementations behind the `tisparse` binary. Each command
//! returns a [`RunReport`], optional artifact and human-readable body, and an
//! exit [`Status`] that the report records as `exit_code`.

pub mod report;

use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use tisparse::format::{parse_certificates, parse_document, write_document, write_operator_dump, Document};
use tisparse::models::{stoquastic_transform, ModelError, SparseOperator};
use tisparse::numerics::format_rational;
use tisparse::reduction::census::{census_range, count_for_side, enumerate_field, CensusBudget};
use tisparse::reduction::{sparsify, InstanceError, Outcome, ReductionError, Verdict};
use tisparse::spectral::{decide_promise, ground_energy, spectrum, Answer, SpectralConfig, SpectralError, DENSE_MAX_DIM};
use tisparse::verify::{verify_chain, CheckStatus};
use tisparse::{EncodingError, ParseError};

pub use report::{RunReport, TOOL, VERSION};

/// Exit status. Codes are stable and documented in the README.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Reduced, decided, or all checks passed.
    Ok,
    ForcedYes,
    ForcedNo,
    PromiseViolated,
    Usage,
    /// Unreadable input, malformed file, or an instance that breaks a precondition.
    Parse,
    Capacity,
    /// A verification or stoquasticity check failed.
    CheckFailed,
    /// The iterative solver exhausted its restart budget.
    NoConvergence,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Usage => 1,
            Status::Parse => 2,
            Status::Capacity => 3,
            Status::CheckFailed => 4,
            Status::NoConvergence => 5,
            Status::ForcedYes => 10,
            Status::ForcedNo => 11,
            Status::PromiseViolated => 20,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::ForcedYes => "forced_yes",
            Status::ForcedNo => "forced_no",
            Status::PromiseViolated => "promise_violated",
            Status::Usage => "usage",
            Status::Parse => "parse",
            Status::Capacity => "capacity",
            Status::CheckFailed => "check_failed",
            Status::NoConvergence => "no_convergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(Status::Parse, format!("parse error: {e}"))
    }
}

impl From<EncodingError> for CliError {
    fn from(e: EncodingError) -> Self {
        CliError::new(Status::Parse, format!("encoding error: {e}"))
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        let status = match e {
            ModelError::Capacity(_) => Status::Capacity,
            _ => Status::Parse,
        };
        CliError::new(status, e.to_string())
    }
}

impl From<InstanceError> for CliError {
    fn from(e: InstanceError) -> Self {
        match e {
            InstanceError::Model(m) => m.into(),
            e => CliError::new(Status::Parse, format!("invalid instance: {e}")),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Instance(i) => i.into(),
            e => CliError::new(Status::CheckFailed, e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Capacity(m) => CliError::new(Status::Capacity, format!("capacity: {m}")),
            SpectralError::NonConvergence { .. } => CliError::new(Status::NoConvergence, e.to_string()),
            SpectralError::Model(m) => m.into(),
            SpectralError::Instance(i) => i.into(),
            SpectralError::Empty => CliError::new(Status::Parse, e.to_string()),
        }
    }
}

/// What a subcommand produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub report: RunReport,
    /// The product (document or operator dump), written to `--out` when given.
    pub artifact: Option<String>,
    /// Human-readable lines (checks, tables) for the text format.
    pub body: Option<String>,
    /// Printed to standard error in either format.
    pub warnings: Vec<String>,
    pub status: Status,
}

impl Run {
    fn new(mut report: RunReport, status: Status) -> Self {
        report.push("exit_code", status.code());
        Self {
            report,
            artifact: None,
            body: None,
            warnings: Vec::new(),
            status,
        }
    }

    fn with_artifact(mut self, artifact: String) -> Self {
        self.artifact = Some(artifact);
        self
    }

    fn with_body(mut self, body: String) -> Self {
        self.body = Some(body);
        self
    }

    fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

/// Reads a document and returns it with its canonical bytes, which the
/// report digest is taken over.
pub fn load(path: &Path) -> Result<(Document, String), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(Status::Parse, format!("cannot read {}: {e}", path.display())))?;
    let doc = parse_document(&text).map_err(|e| CliError::new(Status::Parse, format!("{}: {e}", path.display())))?;
    let canonical = write_document(&doc.instance, &doc.certificates)?;
    Ok((doc, canonical))
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let start = Instant::now();
    let out = f();
    let us = timing.then(|| start.elapsed().as_micros().min(u64::MAX as u128) as u64);
    (out, us)
}

/// `build`: operator dump with `dim`, `terms`, `norm_bound`, `nnz` metadata.
pub fn cmd_build(path: &Path, cfg: &SpectralConfig, timing: bool) -> Result<Run, CliError> {
    let (doc, canonical) = load(path)?;
    let model = &doc.instance.model;
    let (result, us) = timed(timing, || -> Result<_, CliError> {
        model.geometry.validate()?;
        let op = model.build(cfg.max_dim)?;
        let dump = write_operator_dump(model, &op, cfg.max_dim)?;
        Ok((op, dump))
    });
    let (op, dump) = result?;
    let mut report = RunReport::new("build", canonical.as_bytes());
    report.push("model", doc.instance.kind().tag());
    report.push("dim", op.dim());
    report.push("terms", op.term_count());
    report.push("norm_bound", format_rational(&model.norm_bound()));
    report.push("dump_sha256", report::digest(dump.as_bytes()));
    report.elapsed_us = us;
    Ok(Run::new(report, Status::Ok).with_artifact(dump))
}

/// `reduce`: the sparsified instance followed by its certificate chain.
pub fn cmd_reduce(path: &Path, timing: bool) -> Result<Run, CliError> {
    let (doc, canonical) = load(path)?;
    let (sparse, us) = timed(timing, || sparsify(&doc.instance));
    let sparse = sparse?;
    let body = write_document(&sparse.instance, &sparse.chain)?;
    let mut report = RunReport::new("reduce", canonical.as_bytes());
    report.push("outcome", sparse.outcome.tag());
    report.push("steps", sparse.chain.len());
    report.push("max_digits", sparse.max_digits);
    report.push("digit_budget", sparse.budget);
    report.push("gap_exponent", sparse.instance.gap_exponent);
    let mut warnings = Vec::new();
    for (i, cert) in sparse.chain.iter().enumerate() {
        let mut line = format!("{} {}", cert.step, cert.verdict);
        if let Some(l) = cert.truncation_width {
            line.push_str(&format!(" L={l}"));
        }
        line.push_str(&format!(
            " epsilon={} widen={}",
            format_rational(&cert.epsilon),
            format_rational(&cert.widen)
        ));
        report.push(format!("certificate.{i}"), line);
        if cert.verdict == Verdict::PassThrough {
            warnings.push(format!(
                "certificate {i} ({}) passed the instance through: {}",
                cert.step,
                cert.note.as_deref().unwrap_or("exemption")
            ));
        }
    }
    report.push("exempt", sparse.exempt());
    report.push("document_sha256", report::digest(body.as_bytes()));
    report.elapsed_us = us;
    let status = match sparse.outcome {
        Outcome::Reduced => Status::Ok,
        Outcome::ForcedYes => Status::ForcedYes,
        Outcome::ForcedNo => Status::ForcedNo,
    };
    Ok(Run::new(report, status).with_artifact(body).with_warnings(warnings))
}

/// `solve`: Yes, No or PromiseViolated with `λ` and its error bound.
pub fn cmd_solve(path: &Path, cfg: &SpectralConfig, timing: bool) -> Result<Run, CliError> {
    let (doc, canonical) = load(path)?;
    let (decision, us) = timed(timing, || decide_promise(&doc.instance, cfg));
    let decision = decision?;
    let mut report = RunReport::new("solve", canonical.as_bytes());
    report.push("answer", decision.answer);
    match &decision.spectral {
        Some(s) => {
            report.push("lambda", format!("{:.15e}", s.lambda));
            report.push("residual", format!("{:.3e}", s.residual));
            report.push("error_bound", format!("{:.3e}", s.certified_error_bound));
            report.push("method", s.method);
            report.push("matvecs", s.matvecs);
        }
        None => report.push("decided_by", "norm_bound"),
    }
    report.push("norm_bound", format_rational(&decision.norm_bound));
    report.push("diagnostic", &decision.diagnostic);
    report.elapsed_us = us;
    let status = match decision.answer {
        Answer::PromiseViolated => Status::PromiseViolated,
        _ => Status::Ok,
    };
    Ok(Run::new(report, status))
}

/// `verify`: sparsify (or take the supplied chain) and check it against the oracle.
pub fn cmd_verify(path: &Path, chain_path: Option<&Path>, cfg: &SpectralConfig, timing: bool) -> Result<Run, CliError> {
    let (doc, mut canonical) = load(path)?;
    let chain = match chain_path {
        Some(_) if !doc.certificates.is_empty() => {
            return Err(CliError::new(
                Status::Usage,
                "instance file already carries certificates; drop --chain",
            ))
        }
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::new(Status::Parse, format!("cannot read {}: {e}", p.display())))?;
            let chain = parse_certificates(&text)
                .map_err(|e| CliError::new(Status::Parse, format!("{}: {e}", p.display())))?;
            canonical = write_document(&doc.instance, &chain)?;
            chain
        }
        None if doc.certificates.is_empty() => sparsify(&doc.instance)?.chain,
        None => doc.certificates.clone(),
    };
    doc.instance.validate()?;
    let (report_v, us) = timed(timing, || verify_chain(&doc.instance, &chain, cfg));
    let mut report = RunReport::new("verify", canonical.as_bytes());
    report.push("certificates", chain.len());
    let mut body = String::new();
    for (i, check) in report_v.checks.iter().enumerate() {
        report.push(format!("check.{i}"), check);
        body.push_str(&format!("{check}\n"));
    }
    let failed = report_v.failures().count();
    let skipped = report_v.checks.iter().filter(|c| c.status == CheckStatus::Skipped).count();
    report.push("failed", failed);
    report.push("skipped", skipped);
    let status = if failed > 0 {
        Status::CheckFailed
    } else if report_v.promise_violated() {
        Status::PromiseViolated
    } else {
        Status::Ok
    };
    let verdict = match status {
        Status::Ok => "PASS",
        Status::PromiseViolated => "SKIP",
        _ => "FAIL",
    };
    report.push("verdict", verdict);
    body.push_str(&format!("verdict: {verdict}\n"));
    report.elapsed_us = us;
    Ok(Run::new(report, status).with_body(body))
}

/// Widest per-field digit string exhaustively enumerated by `census --enumerate`.
pub const ENUMERATION_MAX_DIGITS: usize = 12;

/// `census`: per-`N` counts of sparse instances and the fitted growth exponent.
pub fn cmd_census(n_min: usize, n_max: usize, budget: CensusBudget, enumerate: bool, timing: bool) -> Result<Run, CliError> {
    if n_min < 2 || n_max < n_min {
        return Err(CliError::new(Status::Usage, "census needs 2 <= n-min <= n-max"));
    }
    if budget.free_fields == 0 || budget.int_coeff + budget.frac_coeff == 0 {
        return Err(CliError::new(Status::Usage, "census budget must have a free field and a digit"));
    }
    let canonical = format!(
        "census n_min={n_min} n_max={n_max} free_fields={} int_coeff={} frac_coeff={} enumerate={enumerate}\n",
        budget.free_fields, budget.int_coeff, budget.frac_coeff
    );
    let ((table, enumerated), us) = timed(timing, || {
        let table = census_range(n_min, n_max, budget);
        let single = CensusBudget {
            free_fields: 1,
            ..budget
        };
        let enumerated: Vec<Option<bool>> = table
            .rows
            .iter()
            .map(|row| {
                (enumerate && row.digits_per_field <= ENUMERATION_MAX_DIGITS).then(|| {
                    num_bigint::BigUint::from(enumerate_field(row.side, single)) == count_for_side(row.side, single)
                })
            })
            .collect();
        (table, enumerated)
    });
    let mut report = RunReport::new("census", canonical.as_bytes());
    report.push("columns", "N digits_per_field count exponent enumeration");
    let mut body = String::from("N\tdigits\tcount\texponent\tenumeration\n");
    for (row, check) in table.rows.iter().zip(&enumerated) {
        let check = match check {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None => "-",
        };
        report.push(
            format!("row.{}", row.side),
            format!("{} {} {} {:.4} {check}", row.side, row.digits_per_field, row.count, row.exponent),
        );
        body.push_str(&format!(
            "{}\t{}\t{}\t{:.4}\t{check}\n",
            row.side, row.digits_per_field, row.count, row.exponent
        ));
    }
    report.push("fitted_exponent", format!("{:.4}", table.fitted_exponent));
    report.push("declared_degree", table.declared_degree);
    body.push_str(&format!(
        "fitted exponent {:.4}, declared degree {}\n",
        table.fitted_exponent, table.declared_degree
    ));
    let mismatch = enumerated.contains(&Some(false));
    let within = table.fitted_exponent <= table.declared_degree as f64;
    report.push("within_degree", within);
    report.elapsed_us = us;
    let status = if mismatch || !within { Status::CheckFailed } else { Status::Ok };
    Ok(Run::new(report, status).with_body(body))
}

/// `stoq`: conjugate by `Z` on one sublattice, then check the off-diagonal
/// signs exactly and the spectrum numerically.
pub fn cmd_stoq(path: &Path, cfg: &SpectralConfig, timing: bool) -> Result<Run, CliError> {
    let (doc, canonical) = load(path)?;
    let model = &doc.instance.model;
    let (result, us) = timed(timing, || -> Result<_, CliError> {
        model.geometry.validate()?;
        let op = model.build(cfg.max_dim)?;
        let side_a = model.geometry.checkerboard();
        let out = stoquastic_transform(&op, &side_a)?;
        let matrix = out.to_exact_matrix(cfg.max_dim)?;
        let signs_ok = matrix.is_stoquastic();
        let (spectrum_ok, deviation) = spectrum_preserved(&op, &out, cfg)?;
        let dump = write_operator_dump(model, &out, cfg.max_dim)?;
        Ok((signs_ok, spectrum_ok, deviation, dump))
    });
    let (signs_ok, spectrum_ok, deviation, dump) = result?;
    let pf = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let mut report = RunReport::new("stoq", canonical.as_bytes());
    report.push("off_diagonal_nonpositive", pf(signs_ok));
    report.push("spectrum_preserved", pf(spectrum_ok));
    report.push("spectrum_deviation", format!("{deviation:.3e}"));
    report.push("dump_sha256", report::digest(dump.as_bytes()));
    report.elapsed_us = us;
    let body = format!(
        "off-diagonal <= 0: {}\nspectrum preserved: {} (max deviation {deviation:.3e})\n",
        pf(signs_ok),
        pf(spectrum_ok)
    );
    let status = if signs_ok && spectrum_ok { Status::Ok } else { Status::CheckFailed };
    Ok(Run::new(report, status).with_artifact(dump).with_body(body))
}

/// Tolerance on eigenvalue agreement under the sign conjugation.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;

/// Full spectra up to the dense limit, ground energies above it.
fn spectrum_preserved(a: &SparseOperator, b: &SparseOperator, cfg: &SpectralConfig) -> Result<(bool, f64), CliError> {
    if a.dim() <= DENSE_MAX_DIM {
        let (sa, sb) = (spectrum(a)?, spectrum(b)?);
        let dev = sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        return Ok((sa.len() == sb.len() && dev <= SPECTRUM_TOLERANCE, dev));
    }
    let (la, lb) = (ground_energy(a, cfg)?, ground_energy(b, cfg)?);
    let dev = (la.lambda - lb.lambda).abs();
    let allowed = la.certified_error_bound + lb.certified_error_bound;
    Ok((dev <= allowed, dev))
}
