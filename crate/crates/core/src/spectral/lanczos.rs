//! Thick-restart Lanczos for the lowest eigenpair of a Hermitian operator.
//!
//! The basis is kept orthonormal by two passes of classical Gram-Schmidt
//! against every stored vector, and the projected matrix `T = Vᴴ A V` is
//! assembled from those coefficients. After each cycle the `keep` lowest
//! Ritz vectors and the residual direction seed the next cycle.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::operator::{LinearOperator, Scalar};
use super::SpectralError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    pub keep: usize,
    pub max_restarts: usize,
    /// Residual target relative to the spectral scale.
    pub tolerance: f64,
    /// Ritz-value stagnation target relative to the spectral scale.
    pub ritz_tolerance: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            krylov_dim: 30,
            keep: 6,
            max_restarts: 2000,
            tolerance: 1e-9,
            ritz_tolerance: 1e-12,
            seed: 0x7153_7061_7273_6531,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair<T> {
    pub value: f64,
    pub vector: Vec<T>,
    pub residual: f64,
    /// Largest Ritz magnitude seen: a lower estimate of `‖A‖`.
    pub scale: f64,
    pub matvecs: usize,
    pub restarts: usize,
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.conjugate() * *y)
}

fn norm<T: Scalar>(a: &[T]) -> f64 {
    a.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
}

fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

fn scale_in_place<T: Scalar>(x: &mut [T], s: f64) {
    let s = T::from_real(s);
    for v in x.iter_mut() {
        *v *= s;
    }
}

/// Removes the components of `w` along `basis`; returns the accumulated
/// coefficients `⟨v_i, w⟩`.
fn orthogonalize<T: Scalar>(basis: &[Vec<T>], w: &mut [T]) -> Vec<T> {
    let mut coeffs = vec![T::zero(); basis.len()];
    for _ in 0..2 {
        for (i, v) in basis.iter().enumerate() {
            let h = dot(v, w);
            axpy(-h, v, w);
            coeffs[i] += h;
        }
    }
    coeffs
}

fn random_unit<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize, basis: &[Vec<T>]) -> Option<Vec<T>> {
    for _ in 0..8 {
        let mut v: Vec<T> = (0..dim).map(|_| T::random(rng)).collect();
        orthogonalize(basis, &mut v);
        let nv = norm(&v);
        if nv > 1e-8 {
            scale_in_place(&mut v, 1.0 / nv);
            return Some(v);
        }
    }
    None
}

/// Eigenvalues ascending with their eigenvectors, for the leading `size`
/// block of `t`.
fn ritz<T: Scalar>(t: &DMatrix<T>, size: usize) -> (Vec<f64>, DMatrix<T>) {
    let block = t.view((0, 0), (size, size)).into_owned();
    let herm = (&block + block.adjoint()) * T::from_real(0.5);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(size, size, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn combine<T: Scalar>(basis: &[Vec<T>], coeffs: impl Iterator<Item = T>, dim: usize) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for (v, c) in basis.iter().zip(coeffs) {
        axpy(c, v, &mut out);
    }
    out
}

/// Lowest eigenpair of `op`. Deterministic for a fixed seed.
pub fn lowest_eigenpair<T: Scalar, O: LinearOperator<T>>(
    op: &O,
    cfg: &LanczosConfig,
) -> Result<Eigenpair<T>, SpectralError> {
    let dim = op.dim();
    if dim == 0 {
        return Err(SpectralError::Empty);
    }
    let m = cfg.krylov_dim.max(2).min(dim);
    let keep = cfg.keep.clamp(1, m.saturating_sub(1).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut basis: Vec<Vec<T>> = vec![random_unit(&mut rng, dim, &[]).ok_or(SpectralError::Empty)?];
    let mut t = DMatrix::<T>::zeros(m, m);
    let mut w = vec![T::zero(); dim];
    let mut scale = 0.0f64;
    let mut previous: Option<f64> = None;
    let mut matvecs = 0;

    for restart in 0..cfg.max_restarts {
        // Expand to `m` columns; `basis[m]`, if present, is the residual direction.
        let mut exhausted = false;
        let mut coupling = 0.0;
        while basis.len() <= m {
            let j = basis.len() - 1;
            if j == m {
                break;
            }
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let coeffs = orthogonalize(&basis, &mut w);
            for (i, h) in coeffs.iter().enumerate() {
                t[(i, j)] = *h;
                if i != j {
                    t[(j, i)] = h.conjugate();
                }
            }
            let b = norm(&w);
            let diag_scale = t[(j, j)].modulus().max(scale);
            if b <= 1e-12 * diag_scale.max(f64::MIN_POSITIVE) || b == 0.0 {
                if basis.len() == dim {
                    exhausted = true;
                    break;
                }
                match random_unit(&mut rng, dim, &basis) {
                    Some(v) => {
                        if j + 1 == m {
                            coupling = 0.0;
                            basis.push(v);
                            break;
                        }
                        basis.push(v);
                    }
                    None => {
                        exhausted = true;
                        break;
                    }
                }
            } else {
                let mut next = w.clone();
                scale_in_place(&mut next, 1.0 / b);
                if j + 1 < m {
                    t[(j + 1, j)] = T::from_real(b);
                    t[(j, j + 1)] = T::from_real(b);
                }
                coupling = b;
                basis.push(next);
            }
        }
        let size = basis.len().min(m);
        let (values, vectors) = ritz(&t, size);
        scale = values
            .iter()
            .fold(scale, |acc, v| acc.max(v.abs()));
        let theta = values[0];
        let estimate = if exhausted {
            0.0
        } else {
            coupling * vectors[(size - 1, 0)].modulus()
        };
        let unit = scale.max(f64::MIN_POSITIVE);
        let settled = previous.is_some_and(|p| (p - theta).abs() <= cfg.ritz_tolerance * unit);
        previous = Some(theta);

        if exhausted || (settled && estimate <= cfg.tolerance * unit) {
            let mut y = combine(&basis[..size], vectors.column(0).iter().copied(), dim);
            let ny = norm(&y);
            scale_in_place(&mut y, 1.0 / ny);
            op.apply(&y, &mut w);
            matvecs += 1;
            axpy(T::from_real(-theta), &y, &mut w);
            let residual = norm(&w);
            if residual <= cfg.tolerance * unit || exhausted {
                return Ok(Eigenpair {
                    value: theta,
                    vector: y,
                    residual,
                    scale,
                    matvecs,
                    restarts: restart,
                });
            }
        }

        // Thick restart: keep the lowest Ritz vectors plus the residual direction.
        let kept = keep.min(size - 1).max(1);
        let mut next: Vec<Vec<T>> = (0..kept)
            .map(|c| combine(&basis[..size], vectors.column(c).iter().copied(), dim))
            .collect();
        let tail = basis.pop().filter(|_| basis.len() == m);
        basis.clear();
        for v in next.iter_mut() {
            let nv = norm(v);
            scale_in_place(v, 1.0 / nv);
        }
        t.fill(T::zero());
        for (i, v) in values.iter().take(kept).enumerate() {
            t[(i, i)] = T::from_real(*v);
        }
        basis.extend(next);
        match tail {
            Some(mut v) => {
                orthogonalize(&basis, &mut v);
                let nv = norm(&v);
                if nv > 1e-8 {
                    scale_in_place(&mut v, 1.0 / nv);
                    basis.push(v);
                } else if let Some(v) = random_unit(&mut rng, dim, &basis) {
                    basis.push(v);
                }
            }
            None => {
                if let Some(v) = random_unit(&mut rng, dim, &basis) {
                    basis.push(v);
                }
            }
        }
    }
    Err(SpectralError::NonConvergence {
        restarts: cfg.max_restarts,
        value: previous.unwrap_or(f64::NAN),
    })
}
