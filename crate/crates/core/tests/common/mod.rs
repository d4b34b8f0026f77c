//! Independent oracles: dense Kronecker-product builders and closed forms that
//! share no code with the library's builders.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use tisparse::numerics::{Digit, FixedPrecisionReal};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli(which: char) -> DMatrix<Complex64> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match which {
        'I' => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("not a Pauli label"),
    }
}

/// `⊗` over sites with site `n-1` as the most significant factor, so basis
/// index bit `k` is the state of site `k`.
pub fn site_operator(n: usize, ops: &[(usize, char)]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for site in (0..n).rev() {
        let label = ops.iter().find(|(s, _)| *s == site).map_or('I', |(_, p)| *p);
        m = m.kronecker(&pauli(label));
    }
    m
}

/// Nearest-neighbour bonds of a `rows × cols` grid, site `r·cols + col`.
pub fn grid_edges(rows: usize, cols: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for col in 0..cols {
            if col + 1 < cols {
                edges.push((id(r, col), id(r, col + 1)));
            } else if periodic && cols > 2 {
                edges.push((id(r, 0), id(r, col)));
            }
            if r + 1 < rows {
                edges.push((id(r, col), id(r + 1, col)));
            } else if periodic && rows > 2 {
                edges.push((id(0, col), id(r, col)));
            }
        }
    }
    edges
}

pub fn chain_edges(n: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if periodic && n > 2 {
        edges.push((0, n - 1));
    }
    edges
}

/// `J Σ (XX + YY + ZZ)` as a dense matrix.
pub fn heisenberg_dense(n: usize, edges: &[(usize, usize)], j: f64) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut h = DMatrix::zeros(dim, dim);
    for &(a, b) in edges {
        for p in ['X', 'Y', 'Z'] {
            h += site_operator(n, &[(a, p), (b, p)]) * c(j, 0.0);
        }
    }
    h
}

pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    eigenvalues(m)[0]
}

pub fn real_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Free-fermion ground energy: fill the lowest single-particle levels of
/// `-t·A`, two spins per level.
pub fn tight_binding_fill(sites: usize, edges: &[(usize, usize)], t: f64, electrons: usize) -> f64 {
    let mut a = DMatrix::<f64>::zeros(sites, sites);
    for &(i, j) in edges {
        a[(i, j)] -= t;
        a[(j, i)] -= t;
    }
    let levels = real_eigenvalues(&a);
    let mut left = electrons;
    let mut energy = 0.0;
    for e in levels {
        let take = left.min(2);
        energy += take as f64 * e;
        left -= take;
        if left == 0 {
            break;
        }
    }
    energy
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn random_digit<R: Rng>(rng: &mut R) -> Digit {
    match rng.random_range(0..3) {
        0 => Digit::NegOne,
        1 => Digit::Zero,
        _ => Digit::One,
    }
}

/// Random digit strings of the given widths (not canonical).
pub fn random_fpr<R: Rng>(rng: &mut R, int_width: usize, frac_width: usize) -> FixedPrecisionReal {
    let int = (0..int_width).map(|_| random_digit(rng)).collect();
    let frac = (0..frac_width).map(|_| random_digit(rng)).collect();
    FixedPrecisionReal::new(int, frac)
}

/// A dyadic with exactly `frac_width` fractional digits whose value is
/// within `2^-12` of `target`; the low digits are random.
pub fn dyadic_near<R: Rng>(rng: &mut R, target: f64, frac_width: usize) -> FixedPrecisionReal {
    let scaled = (target * 4096.0).round() as i64;
    let head = BigRational::new(BigInt::from(scaled), BigInt::from(4096));
    let tail = random_fpr(rng, 0, frac_width);
    // Tail digits beyond position 14 only, so |tail| < 2^-13.
    let tail_digits: Vec<Digit> = tail
        .frac_digits()
        .iter()
        .enumerate()
        .map(|(i, d)| if i < 14 { Digit::Zero } else { *d })
        .collect();
    let mut tail_digits = tail_digits;
    if let Some(last) = tail_digits.last_mut() {
        *last = Digit::One;
    }
    let tail = FixedPrecisionReal::new(Vec::new(), tail_digits);
    let value = head + tail.value();
    let canonical = FixedPrecisionReal::from_dyadic(&value).expect("dyadic");
    assert_eq!(canonical.frac_width(), frac_width);
    canonical
}

pub fn fpr(p: i64, q: i64) -> FixedPrecisionReal {
    FixedPrecisionReal::from_dyadic(&rat(p, q)).expect("dyadic")
}
