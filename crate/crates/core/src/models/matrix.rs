//! Exact complex scalars and coordinate-form sparse matrices over them.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::numerics::format_rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn imag(im: BigRational) -> Self {
        Self {
            re: BigRational::zero(),
            im,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplies by `i^k`.
    pub fn times_i_pow(&self, k: u32) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => Self::new(-self.im.clone(), self.re.clone()),
            2 => -self.clone(),
            _ => Self::new(self.im.clone(), -self.re.clone()),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// `re`, `re+imi`, or `imi` with exact rational parts.
    pub fn to_literal(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => format_rational(&self.re),
            (true, false) => format!("{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                format!(
                    "{}{}{}i",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

impl Add for ExactComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &ExactComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for ExactComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ExactComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Square sparse matrix with exact entries, stored row by row with columns
/// ascending and no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, ExactComplex)>>,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    /// Sums duplicate coordinates and drops zeros.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, ExactComplex)>) -> Self {
        let mut rows: Vec<Vec<(usize, ExactComplex)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            rows[r].push((c, v));
        }
        for row in &mut rows {
            row.sort_by_key(|(c, _)| *c);
            let mut merged: Vec<(usize, ExactComplex)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += &v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        Self { dim, rows }
    }

    pub(crate) fn from_sorted_rows(dim: usize, rows: Vec<Vec<(usize, ExactComplex)>>) -> Self {
        debug_assert_eq!(rows.len(), dim);
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, ExactComplex)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> ExactComplex {
        match self.rows[r].binary_search_by_key(&c, |(cc, _)| *cc) {
            Ok(i) => self.rows[r][i].1.clone(),
            Err(_) => ExactComplex::zero(),
        }
    }

    /// `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &ExactComplex)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn is_hermitian(&self) -> bool {
        self.entries().all(|(r, c, v)| self.get(c, r) == v.conj())
    }

    pub fn is_real(&self) -> bool {
        self.entries().all(|(_, _, v)| v.is_real())
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    /// Largest off-diagonal entry if every off-diagonal entry is real, `None`
    /// if some off-diagonal entry has an imaginary part.
    pub fn max_off_diagonal(&self) -> Option<Option<BigRational>> {
        let mut best: Option<BigRational> = None;
        for (r, c, v) in self.entries() {
            if r == c {
                continue;
            }
            if !v.is_real() {
                return None;
            }
            if best.as_ref().is_none_or(|b| v.re > *b) {
                best = Some(v.re.clone());
            }
        }
        Some(best)
    }

    /// Stoquastic in the computational basis: every off-diagonal entry real and `≤ 0`.
    pub fn is_stoquastic(&self) -> bool {
        match self.max_off_diagonal() {
            None => false,
            Some(None) => true,
            Some(Some(m)) => m <= BigRational::zero(),
        }
    }

    /// `P M Pᵀ` for the basis permutation `perm` (basis state `b` maps to `perm[b]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_triplets(
            self.dim,
            self.entries()
                .map(|(r, c, v)| (perm[r], perm[c], v.clone())),
        )
    }

    pub fn to_dense_c64(&self) -> Vec<Vec<Complex64>> {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); self.dim]; self.dim];
        for (r, c, v) in self.entries() {
            out[r][c] = v.to_c64();
        }
        out
    }
}
