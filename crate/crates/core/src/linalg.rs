//! Small dense complex linear-algebra helpers shared by both phase spaces.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Operator on the representation space, in the basis used by the owning
/// system (|j, j⟩ … |j, −j⟩ for spin, |0⟩ … |n_max⟩ for Fock).
pub type OperatorMatrix = DMatrix<Complex64>;

pub fn identity(dim: usize) -> OperatorMatrix {
    OperatorMatrix::identity(dim, dim)
}

/// Entrywise max-norm of `a - b`.
pub fn max_abs_diff(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &OperatorMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `max |A - A†|`.
pub fn hermiticity_defect(a: &OperatorMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &OperatorMatrix, b: &OperatorMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `Tr(A B†)`, the Hilbert-Schmidt inner product.
pub fn hs_inner(a: &OperatorMatrix, b: &OperatorMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// `|v⟩⟨v|`.
pub fn projector(v: &[Complex64]) -> OperatorMatrix {
    let n = v.len();
    OperatorMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj())
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> OperatorMatrix {
    let g = random_complex(rng, dim);
    (&g + g.adjoint()).scale(0.5)
}

/// Random unit vector, uniform on the complex sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

/// Random density matrix `G G† / Tr(G G†)` with `G` of shape `dim × rank`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> OperatorMatrix {
    let g = DMatrix::<Complex64>::from_fn(dim, rank.max(1), |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho.map(|x| x / tr)
}
