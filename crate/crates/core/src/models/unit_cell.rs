//! Unit-cell Hamiltonians: one constant block `Σ_Q J_Q h_Q` on a small
//! footprint `W`, repeated at every lattice translation.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::lattice::LatticeGeometry;
use super::matrix::ExactComplex;
use super::pauli::{PauliString, PauliSum};
use super::ModelError;
use crate::numerics::FixedPrecisionReal;

pub const DEFAULT_MAX_CELL_SITES: usize = 5;
/// A footprint of at most five sites has at most 2^5 subsets.
pub const MAX_CELL_TERMS: usize = 32;

/// Slack allowed when checking `‖h_Q‖ ≤ a` in floating point.
const NORM_CHECK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSite {
    pub label: String,
    pub offset: Vec<i64>,
}

/// One `J_Q h_Q` term. `matrix` is row-major over `2^|Q|` basis states with the
/// first site of `subset` as the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellTerm {
    pub subset: Vec<usize>,
    pub coupling: FixedPrecisionReal,
    pub matrix: Vec<Vec<ExactComplex>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitCellSpec {
    dim: u32,
    sites: Vec<CellSite>,
    terms: Vec<CellTerm>,
    norm_cap: BigRational,
}

impl UnitCellSpec {
    pub fn new(
        dim: u32,
        sites: Vec<CellSite>,
        terms: Vec<CellTerm>,
        norm_cap: BigRational,
    ) -> Result<Self, ModelError> {
        Self::with_max_sites(dim, sites, terms, norm_cap, DEFAULT_MAX_CELL_SITES)
    }

    pub fn with_max_sites(
        dim: u32,
        sites: Vec<CellSite>,
        terms: Vec<CellTerm>,
        norm_cap: BigRational,
        max_sites: usize,
    ) -> Result<Self, ModelError> {
        if sites.len() > max_sites {
            return Err(ModelError::UnitCell(format!(
                "footprint has {} sites, cap is {max_sites}",
                sites.len()
            )));
        }
        if terms.len() > MAX_CELL_TERMS {
            return Err(ModelError::UnitCell(format!(
                "{} terms exceeds the constant-size cap {MAX_CELL_TERMS}",
                terms.len()
            )));
        }
        for (i, s) in sites.iter().enumerate() {
            if s.offset.len() != dim as usize {
                return Err(ModelError::UnitCell(format!(
                    "site `{}` has a {}-dimensional offset in a {dim}-dimensional cell",
                    s.label,
                    s.offset.len()
                )));
            }
            if sites[..i].iter().any(|o| o.label == s.label || o.offset == s.offset) {
                return Err(ModelError::UnitCell(format!("site `{}` declared twice", s.label)));
            }
        }
        if norm_cap < BigRational::zero() {
            return Err(ModelError::UnitCell("norm cap must be non-negative".into()));
        }
        let cap = norm_cap.to_f64().unwrap_or(f64::INFINITY);
        for (k, term) in terms.iter().enumerate() {
            let q = term.subset.len();
            if q == 0 || q > sites.len() {
                return Err(ModelError::UnitCell(format!("term {k} has an invalid subset")));
            }
            let mut sorted = term.subset.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != q || sorted.iter().any(|&s| s >= sites.len()) {
                return Err(ModelError::UnitCell(format!(
                    "term {k} repeats a site or names an unknown one"
                )));
            }
            let size = 1usize << q;
            if term.matrix.len() != size || term.matrix.iter().any(|row| row.len() != size) {
                return Err(ModelError::UnitCell(format!(
                    "term {k} matrix must be {size}x{size}"
                )));
            }
            for r in 0..size {
                for c in 0..size {
                    if term.matrix[r][c] != term.matrix[c][r].conj() {
                        return Err(ModelError::UnitCell(format!("term {k} matrix is not Hermitian")));
                    }
                }
            }
            let norm = dense_hermitian_norm(&term.matrix);
            if norm > cap + NORM_CHECK_SLACK {
                return Err(ModelError::NormCap(format!(
                    "term {k} has norm {norm} above the declared cap {cap}"
                )));
            }
        }
        Ok(Self {
            dim,
            sites,
            terms,
            norm_cap,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn sites(&self) -> &[CellSite] {
        &self.sites
    }

    pub fn terms(&self) -> &[CellTerm] {
        &self.terms
    }

    pub fn norm_cap(&self) -> &BigRational {
        &self.norm_cap
    }

    /// Same cell with term `k`'s coupling replaced.
    pub fn with_coupling(&self, k: usize, coupling: FixedPrecisionReal) -> Self {
        let mut out = self.clone();
        out.terms[k].coupling = coupling;
        out
    }

    /// The five-site star cell whose translates tile the square-lattice
    /// Heisenberg model: `(J/2) Σ_{q ∈ {N,E,S,W}} σ_C·σ_q`.
    pub fn heisenberg_star(half_coupling: FixedPrecisionReal) -> Self {
        let site = |label: &str, offset: [i64; 2]| CellSite {
            label: label.to_string(),
            offset: offset.to_vec(),
        };
        let sites = vec![
            site("C", [0, 0]),
            site("N", [-1, 0]),
            site("E", [0, 1]),
            site("S", [1, 0]),
            site("W", [0, -1]),
        ];
        let terms = (1..5)
            .map(|q| CellTerm {
                subset: vec![0, q],
                coupling: half_coupling.clone(),
                matrix: exchange_matrix(),
            })
            .collect();
        Self::new(2, sites, terms, BigRational::from_integer(BigInt::from(3)))
            .expect("star cell is well formed")
    }
}

/// `σ·σ` on two qubits.
pub fn exchange_matrix() -> Vec<Vec<ExactComplex>> {
    let e = |v: i64| ExactComplex::real(BigRational::from_integer(BigInt::from(v)));
    vec![
        vec![e(1), e(0), e(0), e(0)],
        vec![e(0), e(-1), e(2), e(0)],
        vec![e(0), e(2), e(-1), e(0)],
        vec![e(0), e(0), e(0), e(1)],
    ]
}

pub(crate) fn dense_hermitian_norm(m: &[Vec<ExactComplex>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 0.0;
    }
    let dense = DMatrix::<Complex64>::from_fn(n, n, |r, c| m[r][c].to_c64());
    dense
        .symmetric_eigenvalues()
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Pauli coefficients `Tr(P h) / 2^k` of a Hermitian `2^k × 2^k` matrix, in
/// local masks where bit `k-1-j` is the `j`-th subset site.
pub(crate) fn pauli_decomposition(m: &[Vec<ExactComplex>]) -> Vec<(u64, u64, BigRational)> {
    let size = m.len() as u64;
    let mut out = Vec::new();
    for x in 0..size {
        for z in 0..size {
            let ny = (x & z).count_ones();
            let mut trace = ExactComplex::zero();
            for col in 0..size {
                // Tr(P h) = Σ_m phase(m) h[m, m ⊕ x]
                let sign_neg = (col & z).count_ones() % 2 == 1;
                let v = m[col as usize][(col ^ x) as usize].times_i_pow(ny);
                if sign_neg {
                    trace = trace - v;
                } else {
                    trace = trace + v;
                }
            }
            debug_assert!(trace.im.is_zero(), "Hermitian input has real Pauli coefficients");
            let c = trace.re / BigRational::from_integer(BigInt::from(size));
            if !c.is_zero() {
                out.push((x, z, c));
            }
        }
    }
    out
}

/// `H = Σ_cells Σ_Q J_Q h_Q`. On an open lattice, cell terms that would reach
/// outside the lattice are dropped.
pub fn build_unit_cell(geometry: &LatticeGeometry, spec: &UnitCellSpec) -> Result<PauliSum, ModelError> {
    if spec.dim != geometry.dim {
        return Err(ModelError::UnitCell(format!(
            "{}-dimensional cell on a {}-dimensional lattice",
            spec.dim, geometry.dim
        )));
    }
    let mut h = PauliSum::new(geometry.num_sites())?;
    let decomposed: Vec<_> = spec
        .terms
        .iter()
        .map(|t| (t.coupling.value(), pauli_decomposition(&t.matrix)))
        .collect();
    for origin in 0..geometry.num_sites() {
        for (term, (coupling, paulis)) in spec.terms.iter().zip(&decomposed) {
            let placed: Option<Vec<usize>> = term
                .subset
                .iter()
                .map(|&s| geometry.offset_site(origin, &spec.sites[s].offset))
                .collect();
            let Some(placed) = placed else { continue };
            let mut distinct = placed.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != placed.len() {
                return Err(ModelError::UnitCell(format!(
                    "cell footprint wraps onto itself at N = {}",
                    geometry.side
                )));
            }
            let k = placed.len();
            let to_global = |local: u64| -> u64 {
                placed
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &g)| acc | ((local >> (k - 1 - j)) & 1) << g)
            };
            for (x, z, c) in paulis {
                h.push(PauliString::from_masks(to_global(*x), to_global(*z), coupling * c));
            }
        }
    }
    Ok(h.simplified())
}
