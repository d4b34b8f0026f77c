//! Fermi-Hubbard and t-J Hamiltonians in fixed-particle-number sectors.
//!
//! Spin-orbitals are ordered row-major by site with spin-↑ before spin-↓, so
//! orbital `2·site + spin`. A basis state is the bitmask of occupied orbitals;
//! sector bases are listed in increasing bitmask order. Fermionic signs follow
//! the orbital order: `a†_p a_q` picks up `(-1)^(occupied orbitals strictly
//! between p and q)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lattice::LatticeGeometry;
use super::matrix::{ExactComplex, ExactMatrix};
use super::pauli::{Pauli, PauliString, PauliSum};
use super::ModelError;
use crate::numerics::FixedPrecisionReal;

pub const UP: usize = 0;
pub const DOWN: usize = 1;

pub fn orbital(site: usize, spin: usize) -> usize {
    2 * site + spin
}

/// Parameters shared by the Hubbard and t-J builders. `interaction` is `U`
/// for Hubbard and `J` for t-J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermionInstance {
    pub geometry: LatticeGeometry,
    pub hopping: FixedPrecisionReal,
    pub interaction: FixedPrecisionReal,
    pub electrons: usize,
}

/// Occupation-number basis of one particle-number sector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    orbitals: usize,
    states: Vec<u64>,
}

impl SectorBasis {
    /// All `orbitals`-bit masks with `electrons` bits set.
    pub fn fixed_number(orbitals: usize, electrons: usize, max_dim: usize) -> Result<Self, ModelError> {
        check_orbitals(orbitals)?;
        let dim = binomial(orbitals as u64, electrons as u64);
        check_dim(dim, max_dim)?;
        let mut states = Vec::with_capacity(dim as usize);
        if electrons <= orbitals {
            for_each_combination(orbitals, electrons, |m| states.push(m));
        }
        Ok(Self { orbitals, states })
    }

    /// Fixed-number states with no doubly occupied site.
    pub fn no_double_occupancy(sites: usize, electrons: usize, max_dim: usize) -> Result<Self, ModelError> {
        check_orbitals(2 * sites)?;
        let dim = if electrons <= sites {
            binomial(sites as u64, electrons as u64) * (1u128 << electrons)
        } else {
            0
        };
        check_dim(dim, max_dim)?;
        let mut states = Vec::with_capacity(dim as usize);
        if electrons <= sites {
            for_each_combination(sites, electrons, |occupied| {
                let occ: Vec<usize> = (0..sites).filter(|s| occupied >> s & 1 == 1).collect();
                for spins in 0u64..(1u64 << electrons) {
                    let mut m = 0u64;
                    for (k, &site) in occ.iter().enumerate() {
                        m |= 1 << orbital(site, ((spins >> k) & 1) as usize);
                    }
                    states.push(m);
                }
            });
        }
        states.sort_unstable();
        Ok(Self {
            orbitals: 2 * sites,
            states,
        })
    }

    pub fn orbitals(&self) -> usize {
        self.orbitals
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn index_of(&self, state: u64) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }
}

/// Operator restricted to a sector basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorOperator {
    pub basis: SectorBasis,
    pub matrix: ExactMatrix,
    /// Number of second-quantized terms the operator was assembled from.
    pub term_count: usize,
}

fn check_orbitals(orbitals: usize) -> Result<(), ModelError> {
    if orbitals > 63 {
        return Err(ModelError::Capacity(format!(
            "{orbitals} spin-orbitals exceeds the 63-orbital limit"
        )));
    }
    Ok(())
}

fn check_dim(dim: u128, max_dim: usize) -> Result<(), ModelError> {
    if dim > max_dim as u128 {
        return Err(ModelError::Capacity(format!(
            "sector dimension {dim} exceeds the cap {max_dim}"
        )));
    }
    Ok(())
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visits every `n`-bit mask with `k` bits set, in increasing order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut m: u64 = (1u64 << k) - 1;
    while m < limit {
        f(m);
        // Gosper's hack
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
}

/// Sign of `a†_p a_q` acting on `state`.
fn hop_sign(state: u64, p: usize, q: usize) -> i64 {
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    let between = if hi - lo > 1 {
        let mask = ((1u64 << hi) - 1) & !((1u64 << (lo + 1)) - 1);
        (state & mask).count_ones()
    } else {
        0
    };
    if between % 2 == 0 {
        1
    } else {
        -1
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `-t Σ_{⟨i,j⟩,s} (a†_{i,s} a_{j,s} + h.c.) + U Σ_i n_{i,↑} n_{i,↓}` in the
/// `N_e`-electron sector.
pub fn build_fermi_hubbard(inst: &FermionInstance, max_dim: usize) -> Result<SectorOperator, ModelError> {
    build_fermi_hubbard_on(
        inst.geometry.num_sites(),
        &inst.geometry.edges(),
        &inst.hopping.value(),
        &inst.interaction.value(),
        inst.electrons,
        max_dim,
    )
}

/// Hubbard Hamiltonian on an arbitrary graph of `sites` sites.
pub fn build_fermi_hubbard_on(
    sites: usize,
    edges: &[(usize, usize)],
    t: &BigRational,
    u: &BigRational,
    electrons: usize,
    max_dim: usize,
) -> Result<SectorOperator, ModelError> {
    if electrons == 0 || electrons >= 2 * sites {
        return Err(ModelError::Electrons(format!(
            "Hubbard requires 0 < N_e < {}, got {electrons}",
            2 * sites
        )));
    }
    let basis = SectorBasis::fixed_number(2 * sites, electrons, max_dim)?;
    let mut triplets = Vec::new();
    for (col, &s) in basis.states().iter().enumerate() {
        let doubles = (0..sites)
            .filter(|&i| s >> orbital(i, UP) & 1 == 1 && s >> orbital(i, DOWN) & 1 == 1)
            .count() as i64;
        if doubles != 0 && !u.is_zero() {
            triplets.push((col, col, ExactComplex::real(u * int(doubles))));
        }
        for &(i, j) in edges {
            for spin in [UP, DOWN] {
                let (p, q) = (orbital(i, spin), orbital(j, spin));
                for (to, from) in [(p, q), (q, p)] {
                    if s >> from & 1 == 1 && s >> to & 1 == 0 {
                        let target = s ^ (1 << from) ^ (1 << to);
                        let row = basis.index_of(target).expect("hop preserves particle number");
                        let amp = -(t * int(hop_sign(s, to, from)));
                        triplets.push((row, col, ExactComplex::real(amp)));
                    }
                }
            }
        }
    }
    let dim = basis.dim();
    Ok(SectorOperator {
        matrix: ExactMatrix::from_triplets(dim, triplets),
        basis,
        term_count: 4 * edges.len() + sites,
    })
}

/// `-t Σ (ã†_{i,s} ã_{j,s} + h.c.) + J Σ_{⟨i,j⟩} (S_i·S_j - ñ_i ñ_j / 4)` on the
/// no-double-occupancy sector, with `S = σ/2`.
pub fn build_tj(inst: &FermionInstance, max_dim: usize) -> Result<SectorOperator, ModelError> {
    build_tj_on(
        inst.geometry.num_sites(),
        &inst.geometry.edges(),
        &inst.hopping.value(),
        &inst.interaction.value(),
        inst.electrons,
        max_dim,
    )
}

/// t-J Hamiltonian on an arbitrary graph of `sites` sites.
pub fn build_tj_on(
    sites: usize,
    edges: &[(usize, usize)],
    t: &BigRational,
    j: &BigRational,
    electrons: usize,
    max_dim: usize,
) -> Result<SectorOperator, ModelError> {
    if electrons > sites {
        return Err(ModelError::Electrons(format!("t-J requires N_e <= {sites}, got {electrons}")));
    }
    let basis = SectorBasis::no_double_occupancy(sites, electrons, max_dim)?;
    let half_j = j / int(2);
    let spin_of = |s: u64, site: usize| -> Option<usize> {
        if s >> orbital(site, UP) & 1 == 1 {
            Some(UP)
        } else if s >> orbital(site, DOWN) & 1 == 1 {
            Some(DOWN)
        } else {
            None
        }
    };
    let mut triplets = Vec::new();
    for (col, &s) in basis.states().iter().enumerate() {
        for &(a, b) in edges {
            match (spin_of(s, a), spin_of(s, b)) {
                (Some(sa), Some(sb)) if sa != sb => {
                    // S^z S^z - 1/4 = -1/2 on antiparallel spins.
                    triplets.push((col, col, ExactComplex::real(-half_j.clone())));
                    // (S+S- + S-S+)/2 exchanges the spins; both same-site moves
                    // are between adjacent orbitals, so no fermionic sign.
                    let target = s
                        ^ (1 << orbital(a, sa))
                        ^ (1 << orbital(a, sb))
                        ^ (1 << orbital(b, sb))
                        ^ (1 << orbital(b, sa));
                    let row = basis.index_of(target).expect("exchange stays in sector");
                    triplets.push((row, col, ExactComplex::real(half_j.clone())));
                }
                (Some(spin), None) | (None, Some(spin)) => {
                    let (from_site, to_site) = if spin_of(s, a).is_some() { (a, b) } else { (b, a) };
                    let (from, to) = (orbital(from_site, spin), orbital(to_site, spin));
                    let target = s ^ (1 << from) ^ (1 << to);
                    let row = basis.index_of(target).expect("projected hop stays in sector");
                    let amp = -(t * int(hop_sign(s, to, from)));
                    triplets.push((row, col, ExactComplex::real(amp)));
                }
                _ => {}
            }
        }
    }
    let dim = basis.dim();
    Ok(SectorOperator {
        matrix: ExactMatrix::from_triplets(dim, triplets),
        basis,
        term_count: 5 * edges.len(),
    })
}

/// The Hubbard Hamiltonian on the full Fock space of `2·sites` qubits via the
/// Jordan-Wigner encoding (orbital `p` occupied ⇔ qubit `p` in |1⟩).
pub fn hubbard_jordan_wigner(
    geometry: &LatticeGeometry,
    hopping: &BigRational,
    interaction: &BigRational,
) -> Result<PauliSum, ModelError> {
    let sites = geometry.num_sites();
    let mut h = PauliSum::new(2 * sites)?;
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    for (i, j) in geometry.edges() {
        for spin in [UP, DOWN] {
            let (p, q) = {
                let (a, b) = (orbital(i, spin), orbital(j, spin));
                (a.min(b), a.max(b))
            };
            // a†_p a_q + a†_q a_p = (X_p Z..Z X_q + Y_p Z..Z Y_q) / 2
            for end in [Pauli::X, Pauli::Y] {
                let mut factors = vec![(p, end), (q, end)];
                factors.extend((p + 1..q).map(|k| (k, Pauli::Z)));
                h.push(PauliString::new(&factors, -(hopping * &half)));
            }
        }
    }
    for i in 0..sites {
        let (u, d) = (orbital(i, UP), orbital(i, DOWN));
        // n_u n_d = (1 - Z_u - Z_d + Z_u Z_d) / 4
        let c = interaction * &quarter;
        h.push(PauliString::identity(c.clone()));
        h.push(PauliString::new(&[(u, Pauli::Z)], -c.clone()));
        h.push(PauliString::new(&[(d, Pauli::Z)], -c.clone()));
        h.push(PauliString::new(&[(u, Pauli::Z), (d, Pauli::Z)], c));
    }
    Ok(h.simplified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::lattice::Boundary;

    #[test]
    fn combinations_in_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |m| seen.push(m));
        assert_eq!(seen, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn sector_dimensions() {
        let b = SectorBasis::fixed_number(8, 3, 1 << 20).unwrap();
        assert_eq!(b.dim(), 56);
        let b = SectorBasis::no_double_occupancy(4, 2, 1 << 20).unwrap();
        assert_eq!(b.dim(), 6 * 4);
        assert!(b.states().windows(2).all(|w| w[0] < w[1]));
        assert!(SectorBasis::fixed_number(40, 20, 1000).is_err());
    }

    #[test]
    fn hop_signs_count_between() {
        assert_eq!(hop_sign(0b0000, 0, 3), 1);
        assert_eq!(hop_sign(0b0110, 0, 3), 1);
        assert_eq!(hop_sign(0b0100, 0, 3), -1);
        assert_eq!(hop_sign(0b0100, 3, 0), -1);
        assert_eq!(hop_sign(0b1111, 1, 2), 1);
    }

    #[test]
    fn electron_range_checked() {
        let geometry = LatticeGeometry::square(2, Boundary::Open).unwrap();
        let inst = FermionInstance {
            geometry,
            hopping: FixedPrecisionReal::from_integer(1),
            interaction: FixedPrecisionReal::from_integer(1),
            electrons: 8,
        };
        assert!(build_fermi_hubbard(&inst, 1 << 20).is_err());
        assert!(build_tj(&inst, 1 << 20).is_err());
    }
}
