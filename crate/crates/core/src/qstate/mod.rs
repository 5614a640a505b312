//! Finite-dimensional quantum states: pure states, density operators, Bloch
//! geometry, POVMs, and bipartite pure states with Schmidt decomposition and
//! partial trace.

pub mod linalg;
pub mod repr;
mod tolerance;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
pub use linalg::{CMatrix, CVector};
use linalg::{eigh, frobenius, hermiticity_defect, inner, pauli, projector, trace, ONE};
pub use tolerance::{Tolerances, TOL};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A normalized state vector on C^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateRepr", into = "PureStateRepr")]
pub struct PureState {
    amplitudes: CVector,
}

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    dim: usize,
    amplitudes: Vec<repr::ComplexPair>,
}

impl TryFrom<PureStateRepr> for PureState {
    type Error = Error;

    fn try_from(r: PureStateRepr) -> Result<Self> {
        if r.dim != r.amplitudes.len() {
            return Err(Error::Invariant(format!(
                "dim {} does not match {} amplitudes",
                r.dim,
                r.amplitudes.len()
            )));
        }
        PureState::new(r.amplitudes.iter().map(repr::from_pair).collect())
    }
}

impl From<PureState> for PureStateRepr {
    fn from(s: PureState) -> Self {
        PureStateRepr {
            dim: s.dim(),
            amplitudes: repr::vector_to_pairs(&s.amplitudes),
        }
    }
}

impl PureState {
    /// Builds a state from amplitudes whose norm is already one.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::from_vector(CVector::from_vec(amplitudes))
    }

    pub fn from_vector(v: CVector) -> Result<Self> {
        if v.is_empty() {
            return domain("pure state needs at least one amplitude");
        }
        let n = v.norm();
        if (n - 1.0).abs() > TOL.norm {
            return Err(Error::Invariant(format!("state norm {n} differs from 1")));
        }
        Ok(Self { amplitudes: v })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(v: CVector) -> Result<Self> {
        let n = v.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return domain("cannot normalize a zero vector");
        }
        Ok(Self {
            amplitudes: v / c(n),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(CVector::from_iterator(amps.len(), amps.iter().map(|&x| c(x))))
    }

    /// Computational basis vector `|k⟩` on C^dim.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[k] = ONE;
        Self { amplitudes: v }
    }

    /// Qubit state with the given Bloch direction (must have unit length).
    pub fn from_bloch(b: &BlochVector) -> Result<Self> {
        let n = b.norm();
        if (n - 1.0).abs() > 1e-9 {
            return domain(format!("pure qubit needs a unit Bloch vector, got |r| = {n}"));
        }
        let [x, y, z] = b.unit();
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = y.atan2(x);
        Ok(Self {
            amplitudes: CVector::from_vec(vec![
                c((theta / 2.0).cos()),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ]),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_vector(self) -> CVector {
        self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &PureState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|⟨self|other⟩|²`
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Same ray up to a global phase.
    pub fn same_ray(&self, other: &PureState) -> bool {
        self.dim() == other.dim() && 1.0 - self.overlap(other) < TOL.same_state
    }

    pub fn projector(&self) -> CMatrix {
        projector(&self.amplitudes)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.projector(),
        }
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Result<BlochVector> {
        density_to_bloch(&self.density())
    }

    /// The state orthogonal to a qubit state (antipodal Bloch vector).
    pub fn qubit_complement(&self) -> Result<Self> {
        if self.dim() != 2 {
            return domain("qubit complement needs a qubit");
        }
        let a = self.amplitudes[0];
        let b = self.amplitudes[1];
        Ok(Self {
            amplitudes: CVector::from_vec(vec![-b.conj(), a.conj()]),
        })
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityOperator {
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dim: usize,
    matrix: Vec<Vec<repr::ComplexPair>>,
}

impl TryFrom<DensityRepr> for DensityOperator {
    type Error = Error;

    fn try_from(r: DensityRepr) -> Result<Self> {
        let m = repr::rows_to_matrix(&r.matrix).map_err(Error::Invariant)?;
        if m.nrows() != r.dim {
            return Err(Error::Invariant("dim does not match matrix".into()));
        }
        DensityOperator::new(m)
    }
}

impl From<DensityOperator> for DensityRepr {
    fn from(d: DensityOperator) -> Self {
        DensityRepr {
            dim: d.dim(),
            matrix: repr::matrix_to_rows(&d.matrix),
        }
    }
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return domain("density operator must be a nonempty square matrix");
        }
        let herm = hermiticity_defect(&matrix);
        if herm > TOL.density {
            return Err(Error::Invariant(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = trace(&matrix);
        if (tr.re - 1.0).abs() > TOL.density || tr.im.abs() > TOL.density {
            return Err(Error::Invariant(format!("trace {tr} differs from 1")));
        }
        let (values, _) = eigh(&matrix);
        if let Some(min) = values.last() {
            if *min < -TOL.density {
                return Err(Error::Invariant(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix known to satisfy the invariants up to round-off.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) / c(dim as f64),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diagonal(&CVector::from_iterator(
            probs.len(),
            probs.iter().map(|&p| c(p)),
        )))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues (descending) and eigenvectors.
    pub fn spectrum(&self) -> (Vec<f64>, Vec<CVector>) {
        eigh(&self.matrix)
    }

    pub fn rank(&self) -> usize {
        self.spectrum()
            .0
            .iter()
            .filter(|&&l| l > TOL.schmidt_rank)
            .count()
    }

    /// Frobenius distance between the two operators.
    pub fn distance(&self, other: &DensityOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        frobenius(&(&self.matrix - &other.matrix))
    }

    /// Orthonormal basis of the support.
    pub fn support(&self) -> Vec<CVector> {
        linalg::support_basis(&self.matrix, TOL.schmidt_rank)
    }

    /// Norm of the component of `psi` outside the support.
    pub fn range_residual(&self, psi: &PureState) -> f64 {
        let mut v = psi.vector().clone();
        for b in self.support() {
            let coeff = inner(&b, &v);
            v -= b * coeff;
        }
        v.norm()
    }

    /// `⟨ψ|ρ⁺|ψ⟩` with the pseudo-inverse taken on the support.
    pub fn inverse_expectation(&self, psi: &PureState) -> f64 {
        let pinv = linalg::spectral_map(&self.matrix, TOL.schmidt_rank, |l| 1.0 / l);
        inner(psi.vector(), &(pinv * psi.vector())).re
    }

    /// Positive square root, restricted to the support.
    pub fn sqrt(&self) -> CMatrix {
        linalg::spectral_map(&self.matrix, TOL.schmidt_rank, f64::sqrt)
    }
}

/// A point of the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    r: [f64; 3],
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;

    fn try_from(r: [f64; 3]) -> Result<Self> {
        BlochVector::new(r)
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> Self {
        b.r
    }
}

impl BlochVector {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return domain("Bloch vector must be finite");
        }
        let b = Self { r };
        if b.norm() > 1.0 + TOL.bloch {
            return domain(format!("Bloch vector length {} exceeds 1", b.norm()));
        }
        Ok(b)
    }

    pub fn components(&self) -> [f64; 3] {
        self.r
    }

    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Unit direction; the zero vector maps to ẑ.
    pub fn unit(&self) -> [f64; 3] {
        let n = self.norm();
        if n < 1e-300 {
            [0.0, 0.0, 1.0]
        } else {
            self.r.map(|x| x / n)
        }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        dot3(&self.r, &other.r)
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `½(I + r·σ)`
pub fn bloch_to_density(b: &BlochVector) -> DensityOperator {
    let [sx, sy, sz] = pauli();
    let [x, y, z] = b.r;
    let m = (CMatrix::identity(2, 2) + sx * c(x) + sy * c(y) + sz * c(z)) * c(0.5);
    DensityOperator { matrix: m }
}

/// Inverse of [`bloch_to_density`] for qubits.
pub fn density_to_bloch(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return domain(format!("Bloch vector needs a qubit, got dim {}", rho.dim()));
    }
    let r = pauli().map(|s| trace(&(s * &rho.matrix)).re);
    // clamp round-off just outside the ball
    let n = dot3(&r, &r).sqrt();
    let r = if n > 1.0 { r.map(|x| x / n) } else { r };
    BlochVector::new(r)
}

/// `Tr(E ρ)`, real part, clamped to [0, 1].
pub fn born_probability(rho: &DensityOperator, effect: &CMatrix) -> Result<f64> {
    if effect.nrows() != rho.dim() || effect.ncols() != rho.dim() {
        return domain(format!(
            "effect is {}x{} but state has dim {}",
            effect.nrows(),
            effect.ncols(),
            rho.dim()
        ));
    }
    Ok(trace(&(effect * &rho.matrix)).re.clamp(0.0, 1.0))
}

/// Positive operator-valued measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PovmRepr", into = "PovmRepr")]
pub struct Povm {
    effects: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct PovmRepr {
    dim: usize,
    effects: Vec<Vec<Vec<repr::ComplexPair>>>,
}

impl TryFrom<PovmRepr> for Povm {
    type Error = Error;

    fn try_from(r: PovmRepr) -> Result<Self> {
        let effects = r
            .effects
            .iter()
            .map(|rows| repr::rows_to_matrix(rows).map_err(Error::Invariant))
            .collect::<Result<Vec<_>>>()?;
        if effects.iter().any(|e| e.nrows() != r.dim) {
            return Err(Error::Invariant("effect dimension mismatch".into()));
        }
        Povm::new(effects)
    }
}

impl From<Povm> for PovmRepr {
    fn from(p: Povm) -> Self {
        PovmRepr {
            dim: p.dim(),
            effects: p.effects.iter().map(repr::matrix_to_rows).collect(),
        }
    }
}

/// Residuals of the POVM conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PovmResiduals {
    /// Largest negative eigenvalue magnitude over all effects (0 when PSD).
    pub negativity: f64,
    /// Frobenius distance of `Σ E_k` from the identity.
    pub completeness: f64,
    /// Largest Hermiticity defect over all effects.
    pub hermiticity: f64,
}

impl Povm {
    pub fn new(effects: Vec<CMatrix>) -> Result<Self> {
        let p = Self::from_effects_unchecked(effects)?;
        let res = p.residuals();
        if res.negativity > TOL.povm || res.completeness > TOL.povm || res.hermiticity > TOL.povm
        {
            return Err(Error::Invariant(format!("invalid POVM: {res:?}")));
        }
        Ok(p)
    }

    pub(crate) fn from_effects_unchecked(effects: Vec<CMatrix>) -> Result<Self> {
        let dim = match effects.first() {
            Some(e) => e.nrows(),
            None => return domain("POVM needs at least one effect"),
        };
        if effects.iter().any(|e| e.nrows() != dim || e.ncols() != dim) {
            return domain("POVM effects must share one square dimension");
        }
        Ok(Self { effects })
    }

    /// Projective measurement onto an orthonormal basis.
    pub fn projective(basis: &[PureState]) -> Result<Self> {
        Self::new(basis.iter().map(PureState::projector).collect())
    }

    pub fn dim(&self) -> usize {
        self.effects[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn residuals(&self) -> PovmResiduals {
        let dim = self.dim();
        let mut sum = CMatrix::zeros(dim, dim);
        let mut negativity = 0.0f64;
        let mut hermiticity = 0.0f64;
        for e in &self.effects {
            sum += e;
            hermiticity = hermiticity.max(hermiticity_defect(e));
            let (values, _) = eigh(e);
            if let Some(min) = values.last() {
                negativity = negativity.max(-min);
            }
        }
        PovmResiduals {
            negativity: negativity.max(0.0),
            completeness: frobenius(&(sum - CMatrix::identity(dim, dim))),
            hermiticity,
        }
    }

    pub fn probabilities(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        self.effects
            .iter()
            .map(|e| born_probability(rho, e))
            .collect()
    }
}

/// Pure state of a bipartite system `C^dimA ⊗ C^dimB`; amplitude `(i, j)`
/// multiplies `|i⟩_A |j⟩_B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BipartiteRepr", into = "BipartiteRepr")]
pub struct BipartiteState {
    amplitudes: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct BipartiteRepr {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<Vec<repr::ComplexPair>>,
}

impl TryFrom<BipartiteRepr> for BipartiteState {
    type Error = Error;

    fn try_from(r: BipartiteRepr) -> Result<Self> {
        let m = repr::rows_to_matrix(&r.amplitudes).map_err(Error::Invariant)?;
        if m.nrows() != r.dim_a || m.ncols() != r.dim_b {
            return Err(Error::Invariant(format!(
                "amplitude table is {}x{}, declared {}x{}",
                m.nrows(),
                m.ncols(),
                r.dim_a,
                r.dim_b
            )));
        }
        BipartiteState::new(m)
    }
}

impl From<BipartiteState> for BipartiteRepr {
    fn from(s: BipartiteState) -> Self {
        BipartiteRepr {
            dim_a: s.dim_a(),
            dim_b: s.dim_b(),
            amplitudes: repr::matrix_to_rows(&s.amplitudes),
        }
    }
}

impl BipartiteState {
    pub fn new(amplitudes: CMatrix) -> Result<Self> {
        if amplitudes.is_empty() {
            return domain("bipartite state needs nonzero dimensions");
        }
        let n = amplitudes.norm();
        if (n - 1.0).abs() > TOL.norm {
            return Err(Error::Invariant(format!("state norm {n} differs from 1")));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: CMatrix) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return domain("cannot normalize a zero state");
        }
        Self::new(amplitudes / c(n))
    }

    /// `Σ_j c_j |a_j⟩|b_j⟩`
    pub fn from_schmidt(coefficients: &[f64], basis_a: &[PureState], basis_b: &[PureState]) -> Result<Self> {
        if coefficients.len() != basis_a.len() || coefficients.len() != basis_b.len() {
            return domain("Schmidt data lengths differ");
        }
        let (da, db) = match (basis_a.first(), basis_b.first()) {
            (Some(a), Some(b)) => (a.dim(), b.dim()),
            _ => return domain("empty Schmidt data"),
        };
        let mut m = CMatrix::zeros(da, db);
        for ((cj, a), b) in coefficients.iter().zip(basis_a).zip(basis_b) {
            m += a.vector() * b.vector().transpose() * c(*cj);
        }
        Self::normalized(m)
    }

    pub fn product(a: &PureState, b: &PureState) -> Self {
        Self {
            amplitudes: a.vector() * b.vector().transpose(),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.amplitudes.ncols()
    }

    pub fn amplitudes(&self) -> &CMatrix {
        &self.amplitudes
    }

    /// The state as a vector on `C^(dimA·dimB)` with index `i·dimB + j`.
    pub fn to_vector(&self) -> CVector {
        let (da, db) = (self.dim_a(), self.dim_b());
        CVector::from_fn(da * db, |k, _| self.amplitudes[(k / db, k % db)])
    }
}

/// Schmidt form `Σ_j c_j |a_j⟩|b_j⟩` with `c_j` descending and positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub basis_a: Vec<PureState>,
    pub basis_b: Vec<PureState>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let da = self.basis_a.first().map_or(0, PureState::dim);
        let db = self.basis_b.first().map_or(0, PureState::dim);
        let mut m = CMatrix::zeros(da, db);
        for ((cj, a), b) in self.coefficients.iter().zip(&self.basis_a).zip(&self.basis_b) {
            m += a.vector() * b.vector().transpose() * c(*cj);
        }
        m
    }
}

/// Schmidt decomposition via the singular values of the amplitude table.
/// Coefficients at or below the rank threshold are dropped.
pub fn schmidt(psi: &BipartiteState) -> SchmidtDecomposition {
    let svd = psi.amplitudes.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut out = SchmidtDecomposition {
        coefficients: Vec::new(),
        basis_a: Vec::new(),
        basis_b: Vec::new(),
    };
    for k in order {
        let s = svd.singular_values[k];
        if s <= TOL.schmidt_rank {
            continue;
        }
        // |ψ⟩ = Σ_k s_k (U e_k) ⊗ (row k of V†)ᵀ
        let a = u.column(k).into_owned();
        let b = v_t.row(k).transpose();
        out.coefficients.push(s);
        out.basis_a.push(PureState { amplitudes: a });
        out.basis_b.push(PureState { amplitudes: b });
    }
    out
}

/// Bob's reduced state `Tr_A |ψ⟩⟨ψ|`.
pub fn partial_trace_a(psi: &BipartiteState) -> DensityOperator {
    let m = &psi.amplitudes;
    // ρ_B[j, l] = Σ_i M_ij conj(M_il)
    let rho: DMatrix<Complex64> = m.transpose() * m.conjugate();
    DensityOperator { matrix: rho }
}

/// Alice's reduced state `Tr_B |ψ⟩⟨ψ|`.
pub fn partial_trace_b(psi: &BipartiteState) -> DensityOperator {
    let m = &psi.amplitudes;
    DensityOperator {
        matrix: m * m.adjoint(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use linalg::ZERO;

    fn plus() -> PureState {
        PureState::from_real(&[1.0, 1.0]).unwrap()
    }

    fn bell() -> BipartiteState {
        let h = 0.5f64.sqrt();
        BipartiteState::new(CMatrix::from_row_slice(2, 2, &[c(h), ZERO, ZERO, c(h)])).unwrap()
    }

    #[test]
    fn bloch_center_pole_and_mixed() {
        let center = bloch_to_density(&BlochVector::new([0.0; 3]).unwrap());
        assert!(center.distance(&DensityOperator::maximally_mixed(2)) < 1e-15);
        let pole = bloch_to_density(&BlochVector::new([0.0, 0.0, 1.0]).unwrap());
        assert!(pole.distance(&PureState::basis(2, 0).density()) < 1e-15);
        let half = bloch_to_density(&BlochVector::new([0.0, 0.0, 0.5]).unwrap());
        assert!(half.distance(&DensityOperator::diagonal(&[0.75, 0.25]).unwrap()) < 1e-15);
    }

    #[test]
    fn bloch_outside_ball_is_rejected() {
        assert!(matches!(
            BlochVector::new([0.0, 0.8, 0.8]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn born_examples() {
        let zero = PureState::basis(2, 0);
        let one = PureState::basis(2, 1);
        let rho = zero.density();
        assert_eq!(born_probability(&rho, &zero.projector()).unwrap(), 1.0);
        assert_eq!(born_probability(&rho, &one.projector()).unwrap(), 0.0);
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((born_probability(&mixed, &plus().projector()).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            born_probability(&mixed, &CMatrix::identity(3, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn schmidt_product_and_bell() {
        let product = BipartiteState::product(&PureState::basis(2, 0), &PureState::basis(2, 1));
        let s = schmidt(&product);
        assert_eq!(s.rank(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);

        let s = schmidt(&bell());
        assert_eq!(s.rank(), 2);
        for cj in &s.coefficients {
            assert!((cj - 0.5f64.sqrt()).abs() < 1e-12);
        }
        assert!(frobenius(&(s.reconstruct() - bell().amplitudes())) < 1e-12);
    }

    #[test]
    fn partial_trace_examples() {
        let product = BipartiteState::product(&PureState::basis(2, 0), &PureState::basis(2, 1));
        assert!(partial_trace_a(&product).distance(&PureState::basis(2, 1).density()) < 1e-15);
        assert!(partial_trace_a(&bell()).distance(&DensityOperator::maximally_mixed(2)) < 1e-15);
    }

    #[test]
    fn qubit_complement_is_orthogonal() {
        let s = PureState::from_bloch(&BlochVector::new([0.6, 0.0, 0.8]).unwrap()).unwrap();
        let t = s.qubit_complement().unwrap();
        assert!(s.overlap(&t) < 1e-30);
        let b = t.bloch().unwrap().components();
        assert!((b[0] + 0.6).abs() < 1e-12 && (b[2] + 0.8).abs() < 1e-12);
    }

    #[test]
    fn density_invariants_enforced() {
        let not_unit_trace = CMatrix::identity(2, 2);
        assert!(DensityOperator::new(not_unit_trace).is_err());
        let negative = CMatrix::from_row_slice(2, 2, &[c(1.5), ZERO, ZERO, c(-0.5)]);
        assert!(DensityOperator::new(negative).is_err());
    }

    #[test]
    fn json_uses_pairs_row_major() {
        let rho = DensityOperator::diagonal(&[0.75, 0.25]).unwrap();
        let v = serde_json::to_value(&rho).unwrap();
        assert_eq!(v["matrix"][0][0], serde_json::json!([0.75, 0.0]));
        assert_eq!(v["matrix"][1][1], serde_json::json!([0.25, 0.0]));
        let back: DensityOperator = serde_json::from_value(v).unwrap();
        assert_eq!(back, rho);

        let bad = serde_json::json!({"dim": 2, "amplitudes": [[1.0, 0.0], [1.0, 0.0]]});
        assert!(serde_json::from_value::<PureState>(bad).is_err());
    }
}
