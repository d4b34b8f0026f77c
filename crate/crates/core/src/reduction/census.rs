//! Counting sparse instances: every binary field of a sparsified instance is
//! a canonical signed-digit value with `P ≤ C_int·⌈log₂N⌉` integer and
//! `Q ≤ C_frac·⌈log₂N⌉` fractional digits, padded to exactly those widths.
//! The number of distinct encodings per field is then the number of
//! non-adjacent signed-digit strings of length `n = (C_int + C_frac)·⌈log₂N⌉`.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::numerics::{ceil_log2, Digit, FixedPrecisionReal};

/// Digit budget per free field, in units of `⌈log₂N⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusBudget {
    pub free_fields: usize,
    pub int_coeff: usize,
    pub frac_coeff: usize,
}

impl CensusBudget {
    /// One free coupling with `⌈log₂N⌉` integer and `2⌈log₂N⌉` fractional digits.
    pub const STANDARD: CensusBudget = CensusBudget {
        free_fields: 1,
        int_coeff: 1,
        frac_coeff: 2,
    };

    pub fn digits_per_field(&self, side: usize) -> usize {
        (self.int_coeff + self.frac_coeff) * ceil_log2(side as u64) as usize
    }

    /// Each field's count is at most `(4/3)·2^{C·⌈log₂N⌉} ≤ (16/3)·2^C·N^C`
    /// with `C = C_int + C_frac`, so `F·(2C + 1)` dominates the exponent for
    /// every `N ≥ 2`.
    pub fn declared_degree(&self) -> usize {
        self.free_fields * (2 * (self.int_coeff + self.frac_coeff) + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub side: usize,
    pub digits_per_field: usize,
    pub count: BigUint,
    /// `log(count)/log(N)`.
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusTable {
    pub budget: CensusBudget,
    pub rows: Vec<CensusRow>,
    /// Least-squares slope of `log count` against `log N` over the rows.
    pub fitted_exponent: f64,
    pub declared_degree: usize,
}

/// Number of non-adjacent signed-digit strings of length `n`:
/// `(2^{n+2} − (−1)^n)/3`.
pub fn naf_count(n: usize) -> BigUint {
    let big = BigUint::one() << (n + 2);
    let v = if n.is_multiple_of(2) { big - 1u32 } else { big + 1u32 };
    v / 3u32
}

/// Count of distinct padded canonical encodings for all free fields at side `N`.
pub fn count_for_side(side: usize, budget: CensusBudget) -> BigUint {
    let per_field = naf_count(budget.digits_per_field(side));
    (0..budget.free_fields).fold(BigUint::one(), |acc, _| acc * &per_field)
}

fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        v.to_f64().unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 900;
        (v >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Counts for `N = n_min..=n_max` with the growth exponent fitted by least squares.
pub fn census_range(n_min: usize, n_max: usize, budget: CensusBudget) -> CensusTable {
    let rows: Vec<CensusRow> = (n_min.max(2)..=n_max)
        .map(|side| {
            let count = count_for_side(side, budget);
            let exponent = if count.is_zero() {
                f64::NEG_INFINITY
            } else {
                ln_big(&count) / (side as f64).ln()
            };
            CensusRow {
                side,
                digits_per_field: budget.digits_per_field(side),
                count,
                exponent,
            }
        })
        .collect();
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.side as f64).ln(), ln_big(&r.count)))
        .collect();
    CensusTable {
        budget,
        fitted_exponent: slope(&pts),
        declared_degree: budget.declared_degree(),
        rows,
    }
}

pub fn census(n_max: usize, budget: CensusBudget) -> CensusTable {
    census_range(2, n_max, budget)
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return 0.0;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Exhaustive count for one field: canonicalize every signed-digit string
/// of the budget's total length and collect the distinct padded encodings
/// that fit. Cost is `3^n`, so only for small `N`.
pub fn enumerate_field(side: usize, budget: CensusBudget) -> usize {
    let ell = ceil_log2(side as u64) as usize;
    let (p, q) = (budget.int_coeff * ell, budget.frac_coeff * ell);
    let n = p + q;
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut digits = vec![Digit::Zero; n];
    let total = 3usize.pow(n as u32);
    for mut code in 0..total {
        for d in digits.iter_mut() {
            *d = match code % 3 {
                0 => Digit::Zero,
                1 => Digit::One,
                _ => Digit::NegOne,
            };
            code /= 3;
        }
        let raw = FixedPrecisionReal::new(digits[..p].to_vec(), digits[p..].to_vec());
        if let Some(padded) = raw.canonicalize().padded(p, q) {
            seen.insert(padded.encode().expect("widths fit the header"));
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naf_count_matches_brute_force() {
        for n in 0..10u32 {
            let brute = (0..3u32.pow(n))
                .filter(|&code| {
                    let digits: Vec<u32> = (0..n).map(|i| code / 3u32.pow(i) % 3).collect();
                    digits.windows(2).all(|w| w[0] == 0 || w[1] == 0)
                })
                .count();
            assert_eq!(naf_count(n as usize).to_usize().unwrap(), brute, "n = {n}");
        }
    }

    #[test]
    fn zero_free_fields_count_one() {
        let b = CensusBudget {
            free_fields: 0,
            ..CensusBudget::STANDARD
        };
        for row in census(16, b).rows {
            assert_eq!(row.count, BigUint::one());
        }
    }

    #[test]
    fn doubling_headroom() {
        let b = CensusBudget::STANDARD;
        let c = b.int_coeff + b.frac_coeff;
        for n in 2..64usize {
            let bound = count_for_side(n, b) << (2 * c);
            assert!(count_for_side(2 * n, b) <= bound, "N = {n}");
        }
    }
}
