//! Pauli strings and real-weighted sums of them.
//!
//! Site `i` is bit `i` of a computational-basis index. A string is stored as
//! an X mask and a Z mask with `Y = i·X·Z` on sites set in both, so its action
//! on a basis state is `P|b⟩ = i^{#Y} (-1)^{|b ∧ z|} |b ⊕ x⟩`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::{ExactComplex, ExactMatrix};
use super::ModelError;

/// Largest qubit count a mask can address.
pub const MAX_QUBITS: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn masks(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: u64,
    z: u64,
    coeff: BigRational,
}

impl PauliString {
    pub fn new(factors: &[(usize, Pauli)], coeff: BigRational) -> Self {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(site, p) in factors {
            assert!(site < MAX_QUBITS, "site {site} beyond mask width");
            let (px, pz) = p.masks();
            assert!((x | z) >> site & 1 == 0, "site {site} repeated in Pauli string");
            x |= (px as u64) << site;
            z |= (pz as u64) << site;
        }
        Self { x, z, coeff }
    }

    pub fn from_masks(x: u64, z: u64, coeff: BigRational) -> Self {
        Self { x, z, coeff }
    }

    pub fn identity(coeff: BigRational) -> Self {
        Self::from_masks(0, 0, coeff)
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn factor(&self, site: usize) -> Option<Pauli> {
        match ((self.x >> site) & 1, (self.z >> site) & 1) {
            (1, 0) => Some(Pauli::X),
            (1, 1) => Some(Pauli::Y),
            (0, 1) => Some(Pauli::Z),
            _ => None,
        }
    }

    /// Coefficient times `i^{#Y}`; the matrix element at `(b ⊕ x, b)` is this
    /// value times `(-1)^{|b ∧ z|}`.
    pub fn phased_coeff(&self) -> ExactComplex {
        ExactComplex::real(self.coeff.clone()).times_i_pow(self.y_count())
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        let map = |mask: u64| {
            let mut out = 0u64;
            for (site, &target) in perm.iter().enumerate() {
                out |= ((mask >> site) & 1) << target;
            }
            out
        };
        Self::from_masks(map(self.x), map(self.z), self.coeff.clone())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::numerics::format_rational(&self.coeff))?;
        let mut s = self.support();
        while s != 0 {
            let site = s.trailing_zeros() as usize;
            let p = match self.factor(site) {
                Some(Pauli::X) => 'X',
                Some(Pauli::Y) => 'Y',
                _ => 'Z',
            };
            write!(f, " {p}{site}")?;
            s &= s - 1;
        }
        Ok(())
    }
}

/// Hermitian operator `Σ c_k P_k` on `n` qubits with exact real coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(num_qubits: usize) -> Result<Self, ModelError> {
        if num_qubits > MAX_QUBITS {
            return Err(ModelError::Capacity(format!(
                "{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit limit"
            )));
        }
        Ok(Self {
            num_qubits,
            terms: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn push(&mut self, term: PauliString) {
        assert!(
            term.support() >> self.num_qubits == 0,
            "Pauli string acts outside {} qubits",
            self.num_qubits
        );
        if !term.coeff.is_zero() {
            self.terms.push(term);
        }
    }

    /// Merges equal strings, drops zero coefficients, and orders terms by masks.
    pub fn simplified(&self) -> Self {
        let mut acc: BTreeMap<(u64, u64), BigRational> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry((t.x, t.z)).or_insert_with(BigRational::zero) += &t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((x, z), c)| PauliString::from_masks(x, z, c))
            .collect();
        Self {
            num_qubits: self.num_qubits,
            terms,
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        let mut out = Self {
            num_qubits: self.num_qubits,
            terms: Vec::with_capacity(self.terms.len()),
        };
        for t in &self.terms {
            out.push(PauliString::from_masks(t.x, t.z, &t.coeff * factor));
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Result<Self, ModelError> {
        if self.num_qubits != other.num_qubits {
            return Err(ModelError::Mismatch(format!(
                "{} vs {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.push(PauliString::from_masks(t.x, t.z, -t.coeff.clone()));
        }
        Ok(out.simplified())
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.x == 0)
    }

    /// True when every string has an even number of Y factors, i.e. the matrix is real.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.y_count() % 2 == 0)
    }

    /// Relabels site `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.num_qubits);
        Self {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(|t| t.permuted(perm)).collect(),
        }
    }

    /// Conjugation by `Π_{b ∈ mask} Z_b`: strings anticommuting with it change sign.
    pub fn conjugated_by_z(&self, mask: u64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let flip = (t.x & mask).count_ones() % 2 == 1;
                    let coeff = if flip { -t.coeff.clone() } else { t.coeff.clone() };
                    PauliString::from_masks(t.x, t.z, coeff)
                })
                .collect(),
        }
    }

    /// Strings grouped by X mask, with their phased coefficients.
    pub fn grouped_by_flip(&self) -> BTreeMap<u64, Vec<(u64, ExactComplex)>> {
        let mut groups: BTreeMap<u64, Vec<(u64, ExactComplex)>> = BTreeMap::new();
        for t in &self.simplified().terms {
            groups.entry(t.x).or_default().push((t.z, t.phased_coeff()));
        }
        groups
    }

    /// One row of the matrix: `H[b, b ⊕ x] = Σ c·i^{#Y}·(-1)^{|(b ⊕ x) ∧ z|}`.
    fn exact_row(groups: &BTreeMap<u64, Vec<(u64, ExactComplex)>>, b: u64) -> Vec<(usize, ExactComplex)> {
        let mut row = Vec::with_capacity(groups.len());
        for (&x, strings) in groups {
            let col = b ^ x;
            let mut v = ExactComplex::zero();
            for (z, c) in strings {
                if (col & z).count_ones().is_multiple_of(2) {
                    v.re += &c.re;
                    v.im += &c.im;
                } else {
                    v.re -= &c.re;
                    v.im -= &c.im;
                }
            }
            if !v.is_zero() {
                row.push((col as usize, v));
            }
        }
        row.sort_by_key(|(c, _)| *c);
        row
    }

    pub fn to_exact_matrix(&self, max_dim: usize) -> Result<ExactMatrix, ModelError> {
        let dim = self.dim();
        if dim > max_dim {
            return Err(ModelError::Capacity(format!(
                "dimension {dim} exceeds the materialization cap {max_dim}"
            )));
        }
        let groups = self.grouped_by_flip();
        let rows = (0..dim as u64).map(|b| Self::exact_row(&groups, b)).collect();
        Ok(ExactMatrix::from_sorted_rows(dim, rows))
    }

    /// Pairs of sites that appear together in a two-site string.
    pub fn interaction_edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .terms
            .iter()
            .filter(|t| t.support().count_ones() == 2)
            .map(|t| {
                let s = t.support();
                let i = s.trailing_zeros() as usize;
                let j = 63 - s.leading_zeros() as usize;
                (i, j)
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn max_locality(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.support().count_ones())
            .max()
            .unwrap_or(0)
    }
}
