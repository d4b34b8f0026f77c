//! Hamiltonian builders, a-priori norm bounds, and the bipartite sign
//! conjugation that makes the Heisenberg model stoquastic.

pub mod fermion;
pub mod lattice;
pub mod matrix;
pub mod pauli;
pub mod unit_cell;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use fermion::{build_fermi_hubbard, build_fermi_hubbard_on, build_tj, build_tj_on, FermionInstance, SectorBasis, SectorOperator};
pub use lattice::{Boundary, LatticeGeometry};
pub use matrix::{ExactComplex, ExactMatrix};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use unit_cell::{build_unit_cell, CellSite, CellTerm, UnitCellSpec};

use crate::numerics::{rational_pow, FixedPrecisionReal};

/// Default cap on materialized and sector dimensions.
pub const DEFAULT_MAX_DIM: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("unit cell: {0}")]
    UnitCell(String),
    #[error("norm cap violated: {0}")]
    NormCap(String),
    #[error("electron count: {0}")]
    Electrons(String),
    #[error("not bipartite: {0}")]
    NotBipartite(String),
    #[error("operator mismatch: {0}")]
    Mismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Scaling of the exchange term: `σ·σ` (default) or `S·S = σ·σ/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinConvention {
    #[default]
    Pauli,
    Spin,
}

/// A built Hamiltonian: either a Pauli sum on qubits or an explicit matrix on
/// a fermionic sector basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparseOperator {
    Pauli(PauliSum),
    Sector(SectorOperator),
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        match self {
            SparseOperator::Pauli(p) => p.dim(),
            SparseOperator::Sector(s) => s.basis.dim(),
        }
    }

    pub fn term_count(&self) -> usize {
        match self {
            SparseOperator::Pauli(p) => p.terms().len(),
            SparseOperator::Sector(s) => s.term_count,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        match self {
            SparseOperator::Pauli(p) => p.is_diagonal(),
            SparseOperator::Sector(s) => s.matrix.is_diagonal(),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            SparseOperator::Pauli(p) => p.is_real(),
            SparseOperator::Sector(s) => s.matrix.is_real(),
        }
    }

    pub fn to_exact_matrix(&self, max_dim: usize) -> Result<ExactMatrix, ModelError> {
        match self {
            SparseOperator::Pauli(p) => p.to_exact_matrix(max_dim),
            SparseOperator::Sector(s) => {
                if s.basis.dim() > max_dim {
                    return Err(ModelError::Capacity(format!(
                        "dimension {} exceeds the materialization cap {max_dim}",
                        s.basis.dim()
                    )));
                }
                Ok(s.matrix.clone())
            }
        }
    }

    /// `self - other`; both must live on the same space.
    pub fn difference(&self, other: &Self) -> Result<Self, ModelError> {
        match (self, other) {
            (SparseOperator::Pauli(a), SparseOperator::Pauli(b)) => {
                Ok(SparseOperator::Pauli(a.difference(b)?))
            }
            (SparseOperator::Sector(a), SparseOperator::Sector(b)) if a.basis == b.basis => {
                let neg = b.matrix.entries().map(|(r, c, v)| (r, c, -v.clone()));
                let all = a.matrix.entries().map(|(r, c, v)| (r, c, v.clone())).chain(neg);
                Ok(SparseOperator::Sector(SectorOperator {
                    basis: a.basis.clone(),
                    matrix: ExactMatrix::from_triplets(a.basis.dim(), all.collect::<Vec<_>>()),
                    term_count: a.term_count + b.term_count,
                }))
            }
            _ => Err(ModelError::Mismatch("operators act on different spaces".into())),
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `J Σ_{⟨i,j⟩} (X_i X_j + Y_i Y_j + Z_i Z_j)`, or the `S·S` form with
/// [`SpinConvention::Spin`].
pub fn build_heisenberg_with(
    geometry: &LatticeGeometry,
    coupling: &FixedPrecisionReal,
    convention: SpinConvention,
) -> Result<PauliSum, ModelError> {
    geometry.validate()?;
    let mut c = coupling.value();
    if convention == SpinConvention::Spin {
        c /= int(4);
    }
    let mut h = PauliSum::new(geometry.num_sites())?;
    for (i, j) in geometry.edges() {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            h.push(PauliString::new(&[(i, p), (j, p)], c.clone()));
        }
    }
    Ok(h)
}

pub fn build_heisenberg(geometry: &LatticeGeometry, coupling: &FixedPrecisionReal) -> Result<PauliSum, ModelError> {
    build_heisenberg_with(geometry, coupling, SpinConvention::Pauli)
}

/// `Σ_{⟨i,j⟩} J_ij Z_i Z_j + Σ_i B_i Z_i`, with couplings listed in
/// [`LatticeGeometry::edges`] order. The result is diagonal.
pub fn build_ising(
    geometry: &LatticeGeometry,
    couplings: &[BigRational],
    fields: &[BigRational],
) -> Result<PauliSum, ModelError> {
    geometry.validate()?;
    let edges = geometry.edges();
    if couplings.len() != edges.len() || fields.len() != geometry.num_sites() {
        return Err(ModelError::Mismatch(format!(
            "expected {} couplings and {} fields, got {} and {}",
            edges.len(),
            geometry.num_sites(),
            couplings.len(),
            fields.len()
        )));
    }
    let mut h = PauliSum::new(geometry.num_sites())?;
    for (&(i, j), c) in edges.iter().zip(couplings) {
        h.push(PauliString::new(&[(i, Pauli::Z), (j, Pauli::Z)], c.clone()));
    }
    for (i, b) in fields.iter().enumerate() {
        h.push(PauliString::new(&[(i, Pauli::Z)], b.clone()));
    }
    Ok(h)
}

/// Conjugates by `U = ⊗_{a ∈ A} I ⊗ ⊗_{b ∉ A} Z_b`. Every two-site interaction
/// must join `A` to its complement.
pub fn stoquastic_transform(h: &SparseOperator, side_a: &[usize]) -> Result<SparseOperator, ModelError> {
    let SparseOperator::Pauli(p) = h else {
        return Err(ModelError::Unsupported(
            "sign conjugation is defined on qubit operators".into(),
        ));
    };
    let n = p.num_qubits();
    if let Some(&bad) = side_a.iter().find(|&&s| s >= n) {
        return Err(ModelError::NotBipartite(format!("site {bad} outside {n} qubits")));
    }
    if p.max_locality() > 2 {
        return Err(ModelError::NotBipartite(
            "operator has interactions on more than two sites".into(),
        ));
    }
    let a_mask = side_a.iter().fold(0u64, |m, &s| m | 1 << s);
    for (i, j) in p.interaction_edges() {
        let (ia, ja) = (a_mask >> i & 1 == 1, a_mask >> j & 1 == 1);
        if ia == ja {
            return Err(ModelError::NotBipartite(format!(
                "edge ({i}, {j}) has both ends on the same side"
            )));
        }
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(SparseOperator::Pauli(p.conjugated_by_z(all & !a_mask)))
}

/// Identifies one scalar argument of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingId {
    /// A named parameter line (`J`, `B`, `t`, `U`).
    Key(&'static str),
    /// Coefficient `J_Q` of unit-cell term `k`.
    Term(usize),
}

impl fmt::Display for CouplingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingId::Key(k) => f.write_str(k),
            CouplingId::Term(k) => write!(f, "term{k}"),
        }
    }
}

impl CouplingId {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "J" => Some(CouplingId::Key("J")),
            "B" => Some(CouplingId::Key("B")),
            "t" => Some(CouplingId::Key("t")),
            "U" => Some(CouplingId::Key("U")),
            _ => s.strip_prefix("term")?.parse().ok().map(CouplingId::Term),
        }
    }
}

/// The model-specific part of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelParams {
    Heisenberg {
        coupling: FixedPrecisionReal,
    },
    /// Uniform Ising coupling and uniform longitudinal field.
    Ising {
        coupling: FixedPrecisionReal,
        field: FixedPrecisionReal,
    },
    UnitCell(UnitCellSpec),
    Hubbard {
        hopping: FixedPrecisionReal,
        interaction: FixedPrecisionReal,
        electrons: usize,
    },
    TJ {
        hopping: FixedPrecisionReal,
        exchange: FixedPrecisionReal,
        electrons: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Heisenberg,
    Ising,
    UnitCell,
    Hubbard,
    TJ,
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::Ising => "ising",
            ModelKind::UnitCell => "unitcell",
            ModelKind::Hubbard => "hubbard",
            ModelKind::TJ => "tj",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "heisenberg" => ModelKind::Heisenberg,
            "ising" => ModelKind::Ising,
            "unitcell" => ModelKind::UnitCell,
            "hubbard" => ModelKind::Hubbard,
            "tj" => ModelKind::TJ,
            _ => return None,
        })
    }
}

/// One scalar argument together with the certified constant `a` such that
/// its term family has norm at most `|value|·a·N^d`.
#[derive(Debug, Clone)]
pub struct Coupling<'a> {
    pub id: CouplingId,
    pub value: &'a FixedPrecisionReal,
    pub norm_constant: BigRational,
    /// Must stay strictly positive (the Heisenberg `J`).
    pub positive: bool,
}

/// Geometry plus model parameters: everything needed to build `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    pub geometry: LatticeGeometry,
    pub params: ModelParams,
}

impl ModelSpec {
    pub fn kind(&self) -> ModelKind {
        match self.params {
            ModelParams::Heisenberg { .. } => ModelKind::Heisenberg,
            ModelParams::Ising { .. } => ModelKind::Ising,
            ModelParams::UnitCell(_) => ModelKind::UnitCell,
            ModelParams::Hubbard { .. } => ModelKind::Hubbard,
            ModelParams::TJ { .. } => ModelKind::TJ,
        }
    }

    /// Certified per-coupling norm constants. With `d` the dimension, a site
    /// owns at most `d` bonds, so:
    /// Heisenberg `3d` (‖σ·σ‖ = 3), Ising `d` and `1`, Hubbard `2d` (two spins,
    /// ‖hop + h.c.‖ = 1) and `1`, t-J `2d` and `d` (‖S·S − ñ ñ/4‖ = 1), and the
    /// declared cap `a` for every unit-cell term.
    pub fn couplings(&self) -> Vec<Coupling<'_>> {
        let d = self.geometry.dim as i64;
        let c = |id: &'static str, value, a: i64, positive| Coupling {
            id: CouplingId::Key(id),
            value,
            norm_constant: int(a),
            positive,
        };
        match &self.params {
            ModelParams::Heisenberg { coupling } => vec![c("J", coupling, 3 * d, true)],
            ModelParams::Ising { coupling, field } => {
                vec![c("J", coupling, d, false), c("B", field, 1, false)]
            }
            ModelParams::Hubbard {
                hopping,
                interaction,
                ..
            } => vec![c("t", hopping, 2 * d, false), c("U", interaction, 1, false)],
            ModelParams::TJ { hopping, exchange, .. } => {
                vec![c("t", hopping, 2 * d, false), c("J", exchange, d, false)]
            }
            ModelParams::UnitCell(spec) => spec
                .terms()
                .iter()
                .enumerate()
                .map(|(k, t)| Coupling {
                    id: CouplingId::Term(k),
                    value: &t.coupling,
                    norm_constant: spec.norm_cap().clone(),
                    positive: false,
                })
                .collect(),
        }
    }

    pub fn coupling(&self, id: CouplingId) -> Option<&FixedPrecisionReal> {
        self.couplings().into_iter().find(|c| c.id == id).map(|c| c.value)
    }

    pub fn with_coupling(&self, id: CouplingId, value: FixedPrecisionReal) -> Option<Self> {
        let mut out = self.clone();
        match (&mut out.params, id) {
            (ModelParams::Heisenberg { coupling }, CouplingId::Key("J")) => *coupling = value,
            (ModelParams::Ising { coupling, .. }, CouplingId::Key("J")) => *coupling = value,
            (ModelParams::Ising { field, .. }, CouplingId::Key("B")) => *field = value,
            (ModelParams::Hubbard { hopping, .. }, CouplingId::Key("t")) => *hopping = value,
            (ModelParams::Hubbard { interaction, .. }, CouplingId::Key("U")) => *interaction = value,
            (ModelParams::TJ { hopping, .. }, CouplingId::Key("t")) => *hopping = value,
            (ModelParams::TJ { exchange, .. }, CouplingId::Key("J")) => *exchange = value,
            (ModelParams::UnitCell(spec), CouplingId::Term(k)) if k < spec.terms().len() => {
                *spec = spec.with_coupling(k, value)
            }
            _ => return None,
        }
        Some(out)
    }

    /// Same model with every coupling set to 1.
    pub fn with_unit_couplings(&self) -> Self {
        let ids: Vec<CouplingId> = self.couplings().iter().map(|c| c.id).collect();
        ids.into_iter().fold(self.clone(), |acc, id| {
            acc.with_coupling(id, FixedPrecisionReal::from_integer(1))
                .expect("coupling id taken from the model")
        })
    }

    /// Number of electrons, for the fermionic models.
    pub fn electrons(&self) -> Option<usize> {
        match self.params {
            ModelParams::Hubbard { electrons, .. } | ModelParams::TJ { electrons, .. } => Some(electrons),
            _ => None,
        }
    }

    pub fn build(&self, max_dim: usize) -> Result<SparseOperator, ModelError> {
        let g = &self.geometry;
        g.validate()?;
        Ok(match &self.params {
            ModelParams::Heisenberg { coupling } => SparseOperator::Pauli(build_heisenberg(g, coupling)?),
            ModelParams::Ising { coupling, field } => {
                let j = coupling.value();
                let b = field.value();
                let couplings = vec![j; g.edges().len()];
                let fields = vec![b; g.num_sites()];
                SparseOperator::Pauli(build_ising(g, &couplings, &fields)?)
            }
            ModelParams::UnitCell(spec) => SparseOperator::Pauli(build_unit_cell(g, spec)?),
            ModelParams::Hubbard {
                hopping,
                interaction,
                electrons,
            } => SparseOperator::Sector(build_fermi_hubbard(
                &FermionInstance {
                    geometry: *g,
                    hopping: hopping.clone(),
                    interaction: interaction.clone(),
                    electrons: *electrons,
                },
                max_dim,
            )?),
            ModelParams::TJ {
                hopping,
                exchange,
                electrons,
            } => SparseOperator::Sector(build_tj(
                &FermionInstance {
                    geometry: *g,
                    hopping: hopping.clone(),
                    interaction: exchange.clone(),
                    electrons: *electrons,
                },
                max_dim,
            )?),
        })
    }

    /// Hilbert-space dimension without building anything.
    pub fn dim(&self) -> u128 {
        let sites = self.geometry.num_sites() as u64;
        match self.params {
            ModelParams::Hubbard { electrons, .. } => fermion::binomial(2 * sites, electrons as u64),
            ModelParams::TJ { electrons, .. } => {
                if electrons as u64 > sites {
                    0
                } else {
                    fermion::binomial(sites, electrons as u64) * (1u128 << electrons)
                }
            }
            _ if sites >= 127 => u128::MAX,
            _ => 1u128 << sites,
        }
    }

    /// Certified a-priori bound `Σ |c|·a_c·N^d ≥ ‖H‖`.
    pub fn norm_bound(&self) -> BigRational {
        let volume = rational_pow(self.geometry.side as u64, self.geometry.dim);
        self.couplings()
            .iter()
            .map(|c| c.value.value().abs() * &c.norm_constant * &volume)
            .fold(BigRational::zero(), |acc, v| acc + v)
    }
}

/// Certified bound on `‖H‖` for a model.
pub fn norm_bound(spec: &ModelSpec) -> BigRational {
    spec.norm_bound()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis(n: usize, b: Boundary, j: i64) -> ModelSpec {
        ModelSpec {
            geometry: LatticeGeometry::square(n, b).unwrap(),
            params: ModelParams::Heisenberg {
                coupling: FixedPrecisionReal::from_integer(j),
            },
        }
    }

    #[test]
    fn heisenberg_term_counts() {
        let spec = heis(2, Boundary::Open, 1);
        let op = spec.build(DEFAULT_MAX_DIM).unwrap();
        assert_eq!(op.dim(), 16);
        assert_eq!(op.term_count(), 12);
        let torus = heis(3, Boundary::Torus, 1).build(DEFAULT_MAX_DIM).unwrap();
        assert_eq!(torus.term_count(), 3 * 18);
    }

    #[test]
    fn norm_bounds() {
        assert_eq!(heis(2, Boundary::Open, 1).norm_bound(), int(24));
        assert_eq!(heis(3, Boundary::Open, 2).norm_bound(), int(108));
        let zero = ModelSpec {
            geometry: LatticeGeometry::square(2, Boundary::Open).unwrap(),
            params: ModelParams::Ising {
                coupling: FixedPrecisionReal::zero(),
                field: FixedPrecisionReal::zero(),
            },
        };
        assert_eq!(zero.norm_bound(), int(0));
        let star = ModelSpec {
            geometry: LatticeGeometry::square(3, Boundary::Torus).unwrap(),
            params: ModelParams::UnitCell(UnitCellSpec::heisenberg_star(FixedPrecisionReal::from_integer(1))),
        };
        // four terms of |J_Q| = 1 at a = 3 on nine cells
        assert_eq!(star.norm_bound(), int(108));
    }

    #[test]
    fn coupling_replacement() {
        let spec = heis(2, Boundary::Open, 1);
        let two = FixedPrecisionReal::from_integer(2);
        let out = spec.with_coupling(CouplingId::Key("J"), two.clone()).unwrap();
        assert_eq!(out.coupling(CouplingId::Key("J")), Some(&two));
        assert!(spec.with_coupling(CouplingId::Key("U"), two).is_none());
        assert_eq!(CouplingId::parse("term3"), Some(CouplingId::Term(3)));
        assert_eq!(CouplingId::Term(3).to_string(), "term3");
    }

    #[test]
    fn stoquastic_rejects_same_side_edges() {
        let g = LatticeGeometry::square(2, Boundary::Open).unwrap();
        let h = SparseOperator::Pauli(build_heisenberg(&g, &FixedPrecisionReal::from_integer(1)).unwrap());
        assert!(stoquastic_transform(&h, &g.checkerboard()).is_ok());
        assert!(matches!(
            stoquastic_transform(&h, &[0, 1]),
            Err(ModelError::NotBipartite(_))
        ));
        let odd = LatticeGeometry::square(3, Boundary::Torus).unwrap();
        let h = SparseOperator::Pauli(build_heisenberg(&odd, &FixedPrecisionReal::from_integer(1)).unwrap());
        assert!(stoquastic_transform(&h, &odd.checkerboard()).is_err());
    }
}
