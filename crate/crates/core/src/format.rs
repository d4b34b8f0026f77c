//! The line-oriented text format for instances, certificate chains and
//! operator dumps.
//!
//! Every line is `key=value`; `#` starts a comment. Binary arguments are the
//! hex form of their wire encoding, `N` is written in unary, and each
//! certificate is a `[certificate]` section following the instance.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::models::{
    Boundary, CellSite, CellTerm, CouplingId, ExactComplex, LatticeGeometry, ModelError, ModelKind, ModelParams,
    ModelSpec, SparseOperator, UnitCellSpec,
};
use crate::numerics::{format_rational, parse_rational, EncodingError, FixedPrecisionReal};
use crate::reduction::{ProblemInstance, ReductionCertificate, StepKind, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub instance: ProblemInstance,
    pub certificates: Vec<ReductionCertificate>,
}

#[derive(Debug, Clone, Copy)]
struct Field<'a> {
    line: usize,
    key_column: usize,
    key: &'a str,
    value: &'a str,
    value_column: usize,
}

impl Field<'_> {
    fn error(&self, message: impl fmt::Display) -> ParseError {
        self.error_at(0, message)
    }

    fn error_at(&self, offset: usize, message: impl fmt::Display) -> ParseError {
        ParseError {
            line: self.line,
            column: self.value_column + offset,
            message: message.to_string(),
        }
    }
}

enum Line<'a> {
    Section { line: usize, column: usize, name: &'a str },
    Field(Field<'a>),
}

fn lex(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let lead = content.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(ParseError {
                    line,
                    column: lead + 1,
                    message: "unterminated section header".into(),
                });
            };
            out.push(Line::Section {
                line,
                column: lead + 1,
                name,
            });
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(ParseError {
                line,
                column: lead + 1,
                message: "expected `key=value`".into(),
            });
        };
        let key = trimmed[..eq].trim_end();
        let value_raw = &trimmed[eq + 1..];
        let value = value_raw.trim_start();
        if key.is_empty() {
            return Err(ParseError {
                line,
                column: lead + 1,
                message: "empty key".into(),
            });
        }
        out.push(Line::Field(Field {
            line,
            key_column: lead + 1,
            key,
            value,
            value_column: lead + eq + 2 + (value_raw.len() - value.len()),
        }));
    }
    Ok(out)
}

/// Parses an instance followed by zero or more certificate sections.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let lines = lex(text)?;
    let mut sections: Vec<(usize, Vec<Field>)> = vec![(0, Vec::new())];
    for l in lines {
        match l {
            Line::Section { line, column, name } => {
                if name != "certificate" {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("unknown section `[{name}]`"),
                    });
                }
                sections.push((line, Vec::new()));
            }
            Line::Field(f) => sections.last_mut().expect("non-empty").1.push(f),
        }
    }
    let mut iter = sections.into_iter();
    let (_, head) = iter.next().expect("instance section");
    let instance = parse_instance_fields(&head)?;
    let certificates = iter
        .map(|(line, fields)| parse_certificate_fields(line, &fields))
        .collect::<Result<_, _>>()?;
    Ok(Document {
        instance,
        certificates,
    })
}

/// Parses an instance; certificate sections, if any, are ignored.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, ParseError> {
    parse_document(text).map(|d| d.instance)
}

/// Parses only the certificate sections of a document.
pub fn parse_certificates(text: &str) -> Result<Vec<ReductionCertificate>, ParseError> {
    let lines = lex(text)?;
    let mut out = Vec::new();
    let mut current: Option<(usize, Vec<Field>)> = None;
    for l in lines {
        match l {
            Line::Section { line, column, name } => {
                if name != "certificate" {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("unknown section `[{name}]`"),
                    });
                }
                if let Some((line, fields)) = current.take() {
                    out.push(parse_certificate_fields(line, &fields)?);
                }
                current = Some((line, Vec::new()));
            }
            Line::Field(f) => {
                if let Some((_, fields)) = current.as_mut() {
                    fields.push(f);
                }
            }
        }
    }
    if let Some((line, fields)) = current {
        out.push(parse_certificate_fields(line, &fields)?);
    }
    Ok(out)
}

struct Fields<'a> {
    single: HashMap<&'a str, Field<'a>>,
    sites: Vec<Field<'a>>,
    terms: Vec<Field<'a>>,
    end_line: usize,
}

impl<'a> Fields<'a> {
    fn collect(fields: &[Field<'a>], allowed: &[&str], repeated: &[&str], end_line: usize) -> Result<Self, ParseError> {
        let mut single = HashMap::new();
        let (mut sites, mut terms) = (Vec::new(), Vec::new());
        for f in fields {
            if repeated.contains(&f.key) {
                if f.key == "site" {
                    sites.push(*f);
                } else {
                    terms.push(*f);
                }
                continue;
            }
            if !allowed.contains(&f.key) {
                return Err(ParseError {
                    line: f.line,
                    column: f.key_column,
                    message: format!("unknown key `{}`", f.key),
                });
            }
            if single.insert(f.key, *f).is_some() {
                return Err(ParseError {
                    line: f.line,
                    column: f.key_column,
                    message: format!("duplicate key `{}`", f.key),
                });
            }
        }
        Ok(Self {
            single,
            sites,
            terms,
            end_line,
        })
    }

    fn get(&self, key: &str) -> Option<&Field<'a>> {
        self.single.get(key)
    }

    fn require(&self, key: &str) -> Result<&Field<'a>, ParseError> {
        self.single.get(key).ok_or_else(|| ParseError {
            line: self.end_line,
            column: 1,
            message: format!("missing key `{key}`"),
        })
    }

    fn int<T: std::str::FromStr>(&self, key: &str) -> Result<T, ParseError> {
        let f = self.require(key)?;
        f.value.parse().map_err(|_| f.error(format!("`{key}` must be a non-negative integer")))
    }

    fn fpr(&self, key: &str) -> Result<FixedPrecisionReal, ParseError> {
        let f = self.require(key)?;
        parse_fpr(f)
    }
}

fn parse_fpr(f: &Field) -> Result<FixedPrecisionReal, ParseError> {
    FixedPrecisionReal::from_hex(f.value).map_err(|e| f.error(format!("`{}`: {e}", f.key)))
}

fn parse_unary(f: &Field) -> Result<usize, ParseError> {
    if f.value.is_empty() {
        return Err(f.error("`N` must be a non-empty unary string of 1s"));
    }
    if let Some(pos) = f.value.find(|ch| ch != '1') {
        return Err(f.error_at(pos, "`N` must be unary: only the digit 1 is allowed"));
    }
    Ok(f.value.len())
}

const INSTANCE_KEYS: &[&str] = &[
    "model", "d", "N", "boundary", "J", "B", "t", "U", "Ne", "a", "alpha", "beta", "c",
];

fn model_error(f: &Field, e: ModelError) -> ParseError {
    ParseError {
        line: f.line,
        column: f.key_column,
        message: e.to_string(),
    }
}

fn parse_instance_fields(fields: &[Field]) -> Result<ProblemInstance, ParseError> {
    let end = fields.last().map_or(1, |f| f.line);
    let fs = Fields::collect(fields, INSTANCE_KEYS, &["site", "term"], end)?;
    let model_field = fs.require("model")?;
    let kind = ModelKind::from_tag(model_field.value)
        .ok_or_else(|| model_field.error(format!("unknown model `{}`", model_field.value)))?;
    let dim: u32 = fs.int("d")?;
    let n_field = fs.require("N")?;
    let side = parse_unary(n_field)?;
    let b_field = fs.require("boundary")?;
    let boundary: Boundary = b_field.value.parse().map_err(|e: String| b_field.error(e))?;
    let geometry = LatticeGeometry::new(dim, side, boundary).map_err(|e| model_error(n_field, e))?;

    let allowed: &[&str] = match kind {
        ModelKind::Heisenberg => &["J"],
        ModelKind::Ising => &["J", "B"],
        ModelKind::UnitCell => &["a"],
        ModelKind::Hubbard => &["t", "U", "Ne"],
        ModelKind::TJ => &["t", "J", "Ne"],
    };
    for key in ["J", "B", "t", "U", "Ne", "a"] {
        if let Some(f) = fs.get(key) {
            if !allowed.contains(&key) {
                return Err(ParseError {
                    line: f.line,
                    column: f.key_column,
                    message: format!("key `{key}` does not apply to model `{}`", kind.tag()),
                });
            }
        }
    }
    if kind != ModelKind::UnitCell {
        if let Some(f) = fs.sites.first().or(fs.terms.first()) {
            return Err(ParseError {
                line: f.line,
                column: f.key_column,
                message: format!("key `{}` applies only to model `unitcell`", f.key),
            });
        }
    }

    let params = match kind {
        ModelKind::Heisenberg => ModelParams::Heisenberg { coupling: fs.fpr("J")? },
        ModelKind::Ising => ModelParams::Ising {
            coupling: fs.fpr("J")?,
            field: match fs.get("B") {
                Some(f) => parse_fpr(f)?,
                None => FixedPrecisionReal::zero(),
            },
        },
        ModelKind::Hubbard => ModelParams::Hubbard {
            hopping: fs.fpr("t")?,
            interaction: fs.fpr("U")?,
            electrons: fs.int("Ne")?,
        },
        ModelKind::TJ => ModelParams::TJ {
            hopping: fs.fpr("t")?,
            exchange: fs.fpr("J")?,
            electrons: fs.int("Ne")?,
        },
        ModelKind::UnitCell => ModelParams::UnitCell(parse_unit_cell(&fs, dim, model_field)?),
    };
    Ok(ProblemInstance {
        model: ModelSpec { geometry, params },
        alpha: fs.fpr("alpha")?,
        beta: fs.fpr("beta")?,
        gap_exponent: fs.int("c")?,
    })
}

fn parse_unit_cell(fs: &Fields, dim: u32, model_field: &Field) -> Result<UnitCellSpec, ParseError> {
    let a_field = fs.require("a")?;
    let cap = parse_rational(a_field.value).ok_or_else(|| a_field.error("`a` must be a rational number"))?;
    let mut sites = Vec::new();
    for f in &fs.sites {
        let (label, offsets) = f
            .value
            .split_once(':')
            .ok_or_else(|| f.error("expected `site=<label>:<offset>,...`"))?;
        let label = label.trim();
        if label.is_empty() || label.contains([',', ';']) {
            return Err(f.error("site label must be non-empty without `,` or `;`"));
        }
        let offset = offsets
            .split(',')
            .map(|o| o.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| f.error_at(label.len() + 1, "offsets must be integers"))?;
        sites.push(CellSite {
            label: label.to_string(),
            offset,
        });
    }
    let mut terms = Vec::new();
    for f in &fs.terms {
        let parts: Vec<&str> = f.value.splitn(3, ';').collect();
        if parts.len() != 3 {
            return Err(f.error("expected `term=<sites>;<hex coupling>;<matrix>`"));
        }
        let subset = parts[0]
            .split(',')
            .map(|l| {
                let l = l.trim();
                sites
                    .iter()
                    .position(|s| s.label == l)
                    .ok_or_else(|| f.error(format!("unknown site `{l}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let offset = parts[0].len() + 1;
        let coupling = FixedPrecisionReal::from_hex(parts[1].trim()).map_err(|e| f.error_at(offset, e))?;
        let offset = offset + parts[1].len() + 1;
        let matrix = parse_matrix(parts[2]).map_err(|e| f.error_at(offset, e))?;
        terms.push(CellTerm {
            subset,
            coupling,
            matrix,
        });
    }
    UnitCellSpec::new(dim, sites, terms, cap).map_err(|e| model_error(fs.terms.first().unwrap_or(model_field), e))
}

/// Parses `re`, `re±imi`, `imi`, `i` or `-i` with exact rational parts.
pub fn parse_complex(s: &str) -> Option<ExactComplex> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return parse_rational(&s).map(ExactComplex::real);
    };
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, ch)| k > 0 && (ch == '+' || ch == '-') && !body[..k].ends_with(['/', 'e', 'E']))
        .map(|(k, _)| k);
    let (re, im) = match split {
        Some(k) => (parse_rational(&body[..k])?, &body[k..]),
        None => (BigRational::from_integer(BigInt::from(0)), body),
    };
    let im = match im {
        "" | "+" => BigRational::from_integer(BigInt::from(1)),
        "-" => BigRational::from_integer(BigInt::from(-1)),
        other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(ExactComplex::new(re, im))
}

/// Parses `[[a,b],[c,d]]`.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<ExactComplex>>, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix("[[")
        .and_then(|r| r.strip_suffix("]]"))
        .ok_or("matrix must be written `[[...],...,[...]]`")?;
    inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .map(|e| parse_complex(e).ok_or_else(|| format!("invalid matrix entry `{e}`")))
                .collect()
        })
        .collect()
}

pub fn format_matrix(m: &[Vec<ExactComplex>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|row| {
            let entries: Vec<String> = row.iter().map(ExactComplex::to_literal).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

const CERTIFICATE_KEYS: &[&str] = &[
    "step",
    "coupling",
    "L",
    "k",
    "a",
    "epsilon",
    "widen",
    "coupling_in",
    "coupling_out",
    "alpha_in",
    "beta_in",
    "alpha_out",
    "beta_out",
    "gap_in",
    "gap_out",
    "verdict",
    "note",
];

fn parse_certificate_fields(line: usize, fields: &[Field]) -> Result<ReductionCertificate, ParseError> {
    let end = fields.last().map_or(line, |f| f.line);
    let fs = Fields::collect(fields, CERTIFICATE_KEYS, &[], end)?;
    let rational = |key: &str| -> Result<BigRational, ParseError> {
        let f = fs.require(key)?;
        parse_rational(f.value).ok_or_else(|| f.error(format!("`{key}` must be an exact rational")))
    };
    let opt_fpr = |key: &str| fs.get(key).map(parse_fpr).transpose();
    let step_field = fs.require("step")?;
    let step: StepKind = step_field.value.parse().map_err(|e: String| step_field.error(e))?;
    let verdict_field = fs.require("verdict")?;
    let verdict: Verdict = verdict_field.value.parse().map_err(|e: String| verdict_field.error(e))?;
    let coupling = fs
        .get("coupling")
        .map(|f| CouplingId::parse(f.value).ok_or_else(|| f.error(format!("unknown coupling `{}`", f.value))))
        .transpose()?;
    let opt_int = |key: &str| -> Result<Option<usize>, ParseError> {
        fs.get(key)
            .map(|f| f.value.parse().map_err(|_| f.error(format!("`{key}` must be an integer"))))
            .transpose()
    };
    Ok(ReductionCertificate {
        step,
        coupling,
        truncation_width: opt_int("L")?,
        k: opt_int("k")?.map(|k| k as u32),
        norm_constant: fs
            .get("a")
            .map(|f| parse_rational(f.value).ok_or_else(|| f.error("`a` must be an exact rational")))
            .transpose()?,
        epsilon: rational("epsilon")?,
        widen: rational("widen")?,
        coupling_in: opt_fpr("coupling_in")?,
        coupling_out: opt_fpr("coupling_out")?,
        alpha_in: fs.fpr("alpha_in")?,
        beta_in: fs.fpr("beta_in")?,
        alpha_out: fs.fpr("alpha_out")?,
        beta_out: fs.fpr("beta_out")?,
        gap_in: fs.int("gap_in")?,
        gap_out: fs.int("gap_out")?,
        verdict,
        note: fs.get("note").map(|f| f.value.to_string()),
    })
}

/// Canonical serialization with a fixed key order.
pub fn write_instance(inst: &ProblemInstance) -> Result<String, EncodingError> {
    let mut s = String::new();
    let g = &inst.model.geometry;
    let _ = writeln!(s, "model={}", inst.kind().tag());
    let _ = writeln!(s, "d={}", g.dim);
    let _ = writeln!(s, "N={}", "1".repeat(g.side));
    let _ = writeln!(s, "boundary={}", g.boundary);
    match &inst.model.params {
        ModelParams::Heisenberg { coupling } => {
            let _ = writeln!(s, "J={}", coupling.to_hex()?);
        }
        ModelParams::Ising { coupling, field } => {
            let _ = writeln!(s, "J={}", coupling.to_hex()?);
            let _ = writeln!(s, "B={}", field.to_hex()?);
        }
        ModelParams::Hubbard {
            hopping,
            interaction,
            electrons,
        } => {
            let _ = writeln!(s, "t={}", hopping.to_hex()?);
            let _ = writeln!(s, "U={}", interaction.to_hex()?);
            let _ = writeln!(s, "Ne={electrons}");
        }
        ModelParams::TJ {
            hopping,
            exchange,
            electrons,
        } => {
            let _ = writeln!(s, "t={}", hopping.to_hex()?);
            let _ = writeln!(s, "J={}", exchange.to_hex()?);
            let _ = writeln!(s, "Ne={electrons}");
        }
        ModelParams::UnitCell(spec) => {
            let _ = writeln!(s, "a={}", format_rational(spec.norm_cap()));
            for site in spec.sites() {
                let offs: Vec<String> = site.offset.iter().map(i64::to_string).collect();
                let _ = writeln!(s, "site={}:{}", site.label, offs.join(","));
            }
            for term in spec.terms() {
                let labels: Vec<&str> = term.subset.iter().map(|&i| spec.sites()[i].label.as_str()).collect();
                let _ = writeln!(
                    s,
                    "term={};{};{}",
                    labels.join(","),
                    term.coupling.to_hex()?,
                    format_matrix(&term.matrix)
                );
            }
        }
    }
    let _ = writeln!(s, "alpha={}", inst.alpha.to_hex()?);
    let _ = writeln!(s, "beta={}", inst.beta.to_hex()?);
    let _ = writeln!(s, "c={}", inst.gap_exponent);
    Ok(s)
}

pub fn write_certificate(cert: &ReductionCertificate) -> Result<String, EncodingError> {
    let mut s = String::from("[certificate]\n");
    let _ = writeln!(s, "step={}", cert.step);
    if let Some(c) = cert.coupling {
        let _ = writeln!(s, "coupling={c}");
    }
    if let Some(l) = cert.truncation_width {
        let _ = writeln!(s, "L={l}");
    }
    if let Some(k) = cert.k {
        let _ = writeln!(s, "k={k}");
    }
    if let Some(a) = &cert.norm_constant {
        let _ = writeln!(s, "a={}", format_rational(a));
    }
    let _ = writeln!(s, "epsilon={}", format_rational(&cert.epsilon));
    let _ = writeln!(s, "widen={}", format_rational(&cert.widen));
    if let Some(c) = &cert.coupling_in {
        let _ = writeln!(s, "coupling_in={}", c.to_hex()?);
    }
    if let Some(c) = &cert.coupling_out {
        let _ = writeln!(s, "coupling_out={}", c.to_hex()?);
    }
    let _ = writeln!(s, "alpha_in={}", cert.alpha_in.to_hex()?);
    let _ = writeln!(s, "beta_in={}", cert.beta_in.to_hex()?);
    let _ = writeln!(s, "alpha_out={}", cert.alpha_out.to_hex()?);
    let _ = writeln!(s, "beta_out={}", cert.beta_out.to_hex()?);
    let _ = writeln!(s, "gap_in={}", cert.gap_in);
    let _ = writeln!(s, "gap_out={}", cert.gap_out);
    let _ = writeln!(s, "verdict={}", cert.verdict);
    if let Some(note) = &cert.note {
        let _ = writeln!(s, "note={}", note.replace(['#', '\n'], " "));
    }
    Ok(s)
}

/// Instance followed by its certificate chain.
pub fn write_document(inst: &ProblemInstance, chain: &[ReductionCertificate]) -> Result<String, EncodingError> {
    let mut s = write_instance(inst)?;
    for cert in chain {
        s.push('\n');
        s.push_str(&write_certificate(cert)?);
    }
    Ok(s)
}

/// Coordinate-form dump with metadata: `dim`, `terms` (simplified Pauli
/// strings, or second-quantized terms for sector operators), `norm_bound`,
/// `nnz`, then one `entry=<row> <col> <re> <im>` line per non-zero.
pub fn write_operator_dump(model: &ModelSpec, op: &SparseOperator, max_dim: usize) -> Result<String, ModelError> {
    let matrix = op.to_exact_matrix(max_dim)?;
    let terms = match op {
        SparseOperator::Pauli(p) => p.simplified().terms().len(),
        SparseOperator::Sector(s) => s.term_count,
    };
    let mut s = String::new();
    let _ = writeln!(s, "dim={}", op.dim());
    let _ = writeln!(s, "terms={terms}");
    let _ = writeln!(s, "norm_bound={}", format_rational(&model.norm_bound()));
    let _ = writeln!(s, "nnz={}", matrix.nnz());
    for (r, c, v) in matrix.entries() {
        let _ = writeln!(s, "entry={r} {c} {} {}", format_rational(&v.re), format_rational(&v.im));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg_text(n: &str) -> String {
        let one = FixedPrecisionReal::from_integer(1).to_hex().unwrap();
        let alpha = FixedPrecisionReal::from_integer(-30).to_hex().unwrap();
        let beta = FixedPrecisionReal::from_integer(-29).to_hex().unwrap();
        format!("# sample\nmodel=heisenberg\nd=2\nN={n}\nboundary=open\nJ={one}\nalpha={alpha}\nbeta={beta}\nc=1\n")
    }

    #[test]
    fn round_trip() {
        let inst = parse_instance(&heisenberg_text("11")).unwrap();
        assert_eq!(inst.side(), 2);
        let written = write_instance(&inst).unwrap();
        assert_eq!(parse_instance(&written).unwrap(), inst);
        assert_eq!(write_instance(&parse_instance(&written).unwrap()).unwrap(), written);
    }

    #[test]
    fn unary_error_points_at_offending_character() {
        let err = parse_instance(&heisenberg_text("101")).unwrap_err();
        assert_eq!((err.line, err.column), (4, 4));
    }

    #[test]
    fn complex_literals() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(parse_complex("1"), Some(ExactComplex::real(r(1, 1))));
        assert_eq!(parse_complex("-1/2"), Some(ExactComplex::real(r(-1, 2))));
        assert_eq!(parse_complex("0.5-0.25i"), Some(ExactComplex::new(r(1, 2), r(-1, 4))));
        assert_eq!(parse_complex("-i"), Some(ExactComplex::imag(r(-1, 1))));
        assert_eq!(parse_complex("3/4i"), Some(ExactComplex::imag(r(3, 4))));
        assert_eq!(parse_complex("1/2+3/4i"), Some(ExactComplex::new(r(1, 2), r(3, 4))));
        assert_eq!(parse_complex("x"), None);
        for lit in ["1", "-1/2", "1/2+3/4i", "-1i", "5-2i"] {
            let v = parse_complex(lit).unwrap();
            assert_eq!(parse_complex(&v.to_literal()), Some(v));
        }
    }

    #[test]
    fn unknown_and_duplicate_keys_rejected() {
        let dup = heisenberg_text("11") + "c=2\n";
        assert!(parse_instance(&dup).unwrap_err().message.contains("duplicate"));
        let unknown = heisenberg_text("11") + "zeta=1\n";
        assert!(parse_instance(&unknown).unwrap_err().message.contains("unknown key"));
        let wrong = heisenberg_text("11") + "U=00000000\n";
        assert!(parse_instance(&wrong).is_err());
    }

    #[test]
    fn star_cell_round_trip() {
        let spec = UnitCellSpec::heisenberg_star(FixedPrecisionReal::from_digits(&[], &[1]).unwrap());
        let inst = ProblemInstance {
            model: ModelSpec {
                geometry: LatticeGeometry::square(3, Boundary::Torus).unwrap(),
                params: ModelParams::UnitCell(spec),
            },
            alpha: FixedPrecisionReal::from_integer(-1),
            beta: FixedPrecisionReal::from_integer(1),
            gap_exponent: 1,
        };
        let text = write_instance(&inst).unwrap();
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }
}
