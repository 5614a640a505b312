//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `|v⟩⟨w|`
pub fn outer(v: &CVector, w: &CVector) -> CMatrix {
    v * w.adjoint()
}

pub fn projector(v: &CVector) -> CMatrix {
    outer(v, v)
}

/// `⟨v|w⟩`
pub fn inner(v: &CVector, w: &CVector) -> Complex64 {
    v.dotc(w)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Pauli matrices σx, σy, σz.
pub fn pauli() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Hermitian eigendecomposition, eigenvalues in descending order.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).into_owned())
        .collect();
    (values, vectors)
}

/// Applies `f` to the eigenvalues above `threshold`; the rest map to zero.
pub fn spectral_map(m: &CMatrix, threshold: f64, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (lambda, v) in values.iter().zip(&vectors) {
        if *lambda > threshold {
            out += projector(v) * Complex64::new(f(*lambda), 0.0);
        }
    }
    out
}

/// Orthonormal basis of the eigenspace with eigenvalues above `threshold`.
pub fn support_basis(m: &CMatrix, threshold: f64) -> Vec<CVector> {
    let (values, vectors) = eigh(m);
    values
        .into_iter()
        .zip(vectors)
        .filter(|(l, _)| *l > threshold)
        .map(|(_, v)| v)
        .collect()
}

/// Completes `seed` (orthonormal) to an orthonormal basis of the span of
/// `space` (orthonormal), by Gram–Schmidt over `space`.
pub fn complete_basis(seed: &[CVector], space: &[CVector], tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = seed.to_vec();
    for candidate in space {
        if basis.len() >= space.len() {
            break;
        }
        let mut v = candidate.clone();
        for b in &basis {
            let c = inner(b, &v);
            v -= b * c;
        }
        // second pass for numerical orthogonality
        for b in &basis {
            let c = inner(b, &v);
            v -= b * c;
        }
        let n = v.norm();
        if n > tol {
            basis.push(v / Complex64::new(n, 0.0));
        }
    }
    basis
}
