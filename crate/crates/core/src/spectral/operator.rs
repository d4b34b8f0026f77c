//! Floating-point operator representations: a compiled Pauli sum applied
//! matrix-free, and compressed sparse rows for explicit matrices.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rand::Rng;

use crate::models::{ExactMatrix, PauliSum, SparseOperator};

/// Field scalars the solvers run over: `f64` for real operators,
/// `Complex64` otherwise.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    /// Drops the imaginary part for real scalars.
    fn from_c64(c: Complex64) -> Self;
    fn random<R: Rng>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    fn from_c64(c: Complex64) -> Self {
        c.re
    }

    fn random<R: Rng>(rng: &mut R) -> Self {
        rng.random::<f64>() - 0.5
    }
}

impl Scalar for Complex64 {
    fn from_c64(c: Complex64) -> Self {
        c
    }

    fn random<R: Rng>(rng: &mut R) -> Self {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    }
}

/// A Hermitian linear map on `T^dim`.
pub trait LinearOperator<T: Scalar> {
    fn dim(&self) -> usize;
    /// `y = A x`.
    fn apply(&self, x: &[T], y: &mut [T]);
    /// The diagonal, if the operator is diagonal.
    fn diagonal_only(&self) -> Option<Vec<f64>> {
        None
    }
}

/// Pauli sum compiled for repeated application: the diagonal is tabulated
/// once and off-diagonal strings are grouped by their X mask, so row `b`
/// gathers `v[b ⊕ x]` once per group.
#[derive(Debug, Clone)]
pub struct CompiledPauli<T> {
    dim: usize,
    diagonal: Vec<f64>,
    groups: Vec<(u64, Vec<(u64, T)>)>,
}

impl<T: Scalar> CompiledPauli<T> {
    pub fn new(sum: &PauliSum) -> Self {
        let dim = sum.dim();
        let mut diagonal = vec![0.0; dim];
        let mut groups = Vec::new();
        for (x, strings) in sum.grouped_by_flip() {
            if x == 0 {
                for (z, c) in &strings {
                    let c = c.to_c64().re;
                    for (b, d) in diagonal.iter_mut().enumerate() {
                        if (b as u64 & z).count_ones().is_multiple_of(2) {
                            *d += c;
                        } else {
                            *d -= c;
                        }
                    }
                }
            } else {
                let terms = strings.iter().map(|(z, c)| (*z, T::from_c64(c.to_c64()))).collect();
                groups.push((x, terms));
            }
        }
        Self { dim, diagonal, groups }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn is_diagonal(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for b in 0..self.dim {
            m[(b, b)] = T::from_real(self.diagonal[b]);
            for (x, terms) in &self.groups {
                let col = b as u64 ^ x;
                m[(b, col as usize)] += self.element(col, terms);
            }
        }
        m
    }

    #[inline]
    fn element(&self, col: u64, terms: &[(u64, T)]) -> T {
        let mut acc = T::zero();
        for &(z, c) in terms {
            if (col & z).count_ones() & 1 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }
}

impl<T: Scalar> LinearOperator<T> for CompiledPauli<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (b, out) in y.iter_mut().enumerate() {
            let mut acc = x[b] * T::from_real(self.diagonal[b]);
            for (flip, terms) in &self.groups {
                let col = b as u64 ^ flip;
                acc += self.element(col, terms) * x[col as usize];
            }
            *out = acc;
        }
    }

    fn diagonal_only(&self) -> Option<Vec<f64>> {
        self.is_diagonal().then(|| self.diagonal.clone())
    }
}

/// Compressed sparse rows.
#[derive(Debug, Clone)]
pub struct CsrMatrix<T> {
    dim: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn from_exact(m: &ExactMatrix) -> Self {
        let mut indptr = Vec::with_capacity(m.dim() + 1);
        let mut indices = Vec::with_capacity(m.nnz());
        let mut values = Vec::with_capacity(m.nnz());
        indptr.push(0);
        for r in 0..m.dim() {
            for (c, v) in m.row(r) {
                indices.push(*c);
                values.push(T::from_c64(v.to_c64()));
            }
            indptr.push(indices.len());
        }
        Self {
            dim: m.dim(),
            indptr,
            indices,
            values,
        }
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.indptr[r]..self.indptr[r + 1] {
                m[(r, self.indices[k])] = self.values[k];
            }
        }
        m
    }

    fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (self.indptr[r]..self.indptr[r + 1]).all(|k| self.indices[k] == r))
    }
}

impl<T: Scalar> LinearOperator<T> for CsrMatrix<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *out = acc;
        }
    }

    fn diagonal_only(&self) -> Option<Vec<f64>> {
        if !self.is_diagonal() {
            return None;
        }
        let mut d = vec![0.0; self.dim];
        for (r, v) in d.iter_mut().enumerate() {
            if self.indptr[r] < self.indptr[r + 1] {
                *v = self.values[self.indptr[r]].real();
            }
        }
        Some(d)
    }
}

/// `−A`, used to reach the top of the spectrum with a lowest-eigenvalue solver.
pub struct Negated<'a, O>(pub &'a O);

impl<T: Scalar, O: LinearOperator<T>> LinearOperator<T> for Negated<'_, O> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        self.0.apply(x, y);
        for v in y.iter_mut() {
            *v = -*v;
        }
    }

    fn diagonal_only(&self) -> Option<Vec<f64>> {
        self.0.diagonal_only().map(|d| d.into_iter().map(|v| -v).collect())
    }
}

/// Either representation, chosen per operator.
pub enum Compiled<T> {
    Pauli(CompiledPauli<T>),
    Csr(CsrMatrix<T>),
}

impl<T: Scalar> Compiled<T> {
    pub fn new(op: &SparseOperator) -> Self {
        match op {
            SparseOperator::Pauli(p) => Compiled::Pauli(CompiledPauli::new(p)),
            SparseOperator::Sector(s) => Compiled::Csr(CsrMatrix::from_exact(&s.matrix)),
        }
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        match self {
            Compiled::Pauli(p) => p.to_dense(),
            Compiled::Csr(c) => c.to_dense(),
        }
    }
}

impl<T: Scalar> LinearOperator<T> for Compiled<T> {
    fn dim(&self) -> usize {
        match self {
            Compiled::Pauli(p) => p.dim(),
            Compiled::Csr(c) => c.dim(),
        }
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        match self {
            Compiled::Pauli(p) => p.apply(x, y),
            Compiled::Csr(c) => c.apply(x, y),
        }
    }

    fn diagonal_only(&self) -> Option<Vec<f64>> {
        match self {
            Compiled::Pauli(p) => p.diagonal_only(),
            Compiled::Csr(c) => c.diagonal_only(),
        }
    }
}
