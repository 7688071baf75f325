//! Small dense helpers shared by the operator modules.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CMatrix, CVector, Complex64};

/// Kronecker product with the first factor slowest-varying:
/// `(a ⊗ b)[(i,k),(j,l)] = a[i,j] · b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for j in 0..ac {
        for i in 0..ar {
            let aij = a[(i, j)];
            if aij == Complex64::new(0.0, 0.0) {
                continue;
            }
            for l in 0..bc {
                for k in 0..br {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of column vectors, same flattening as [`kron`].
pub fn kron_vec(x: &CVector, y: &CVector) -> CVector {
    let mut out = CVector::zeros(x.len() * y.len());
    for i in 0..x.len() {
        for k in 0..y.len() {
            out[i * y.len() + k] = x[i] * y[k];
        }
    }
    out
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `a·b − b·a`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entrywise modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |m, s| m.max(*s))
}

/// Max column absolute sum (the exact 1→1 norm on counting spaces).
pub fn max_col_sum(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Max row absolute sum (the exact ∞→∞ norm on counting spaces).
pub fn max_row_sum(a: &CMatrix) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let herm = (a + a.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Numerical rank of a Hermitian matrix by eigenvalue thresholding.
pub fn hermitian_rank(a: &CMatrix, threshold: f64) -> usize {
    hermitian_eigenvalues(a)
        .into_iter()
        .filter(|e| e.abs() > threshold)
        .count()
}

/// Numerical rank from singular values relative to the largest one.
pub fn rank(a: &CMatrix, rel_threshold: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.clone().singular_values();
    let top = sv.iter().fold(0.0_f64, |m, s| m.max(*s));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_threshold * top).count()
}

/// Real matrix lifted to complex.
pub fn from_real(a: &DMatrix<f64>) -> CMatrix {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Deterministic per-task RNG derived from `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex Gaussian-ish vector with independent uniform(−1,1) parts.
pub fn random_complex_vector<R: Rng>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Unit-modulus phase of `z`, or 0 at the origin.
pub fn phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z / r
    }
}
