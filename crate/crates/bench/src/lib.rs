//! Fixtures shared by the benchmarks.

use tisparse::numerics::parse_rational;
use tisparse::{Boundary, FixedPrecisionReal, LatticeGeometry, ModelParams, ModelSpec, ProblemInstance};

/// Parses `p/q` with a power-of-two `q` into a signed-digit real.
pub fn real(value: &str) -> FixedPrecisionReal {
    let r = parse_rational(value).expect("rational literal");
    FixedPrecisionReal::from_dyadic(&r).expect("dyadic literal")
}

pub fn heisenberg(dim: u32, side: usize, boundary: Boundary, coupling: &str) -> ModelSpec {
    ModelSpec {
        geometry: LatticeGeometry::new(dim, side, boundary).expect("valid lattice"),
        params: ModelParams::Heisenberg { coupling: real(coupling) },
    }
}

pub fn hubbard(side: usize, electrons: usize) -> ModelSpec {
    ModelSpec {
        geometry: LatticeGeometry::new(2, side, Boundary::Open).expect("valid lattice"),
        params: ModelParams::Hubbard {
            hopping: real("1"),
            interaction: real("4"),
            electrons,
        },
    }
}

/// A side-3 instance whose coupling carries far more fractional digits than
/// the sparse budget, so every step of the chain does work.
pub fn long_instance() -> ProblemInstance {
    ProblemInstance {
        model: heisenberg(2, 3, Boundary::Open, "87381/65536"),
        alpha: real("-14"),
        beta: real("-13"),
        gap_exponent: 3,
    }
}
