//! Ontological models of a qubit over a discretized ontic space.
//!
//! The ontic space is a quadrature of the unit sphere, optionally extended by
//! a tag coordinate. Two models are provided:
//!
//! * the Kochen–Specker model, with `μ(λ|ψ) = max(0, ψ̂·λ)/π` and
//!   `ξ(φ|λ) = Θ(φ̂·λ)`;
//! * a deficit model mixing the Kochen–Specker layer (weight `1 − ε`) with a
//!   copy of it that lives on a tag private to each pure state (weight `ε`).
//!   Supports of distinct states never meet on private tags, so the degree
//!   of epistemicity drops to `1 − ε` while the Born rule still holds.
//!
//! Response functions are identical on every tag layer.
//!
//! All quadrature sums are evaluated in fixed-size chunks whose partial sums
//! are combined in index order, so parallel evaluation is bit-reproducible.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::Decomposition;
use crate::error::{domain, Result};
use crate::qstate::{dot3, BlochVector, PureState, TOL};
use crate::scalar::Scalar;

pub const DEFAULT_POINTS: usize = 200_000;
pub const SPHERE_MEASURE: f64 = 4.0 * PI;
const CHUNK: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quadrature {
    Fibonacci,
    MonteCarlo { seed: u64 },
    /// Arbitrary caller-supplied points; not a sphere quadrature.
    Declared,
}

/// Discretized ontic space Λ: sphere points with quadrature weights, plus an
/// optional tag coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct OnticSpace {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
    quadrature: Quadrature,
    tagged: bool,
}

impl OnticSpace {
    /// Fibonacci lattice with equal weights `4π/N`.
    pub fn fibonacci(n: usize) -> Result<Self> {
        if n == 0 {
            return domain("quadrature needs at least one point");
        }
        let golden = PI * (3.0 - 5f64.sqrt());
        let points = (0..n)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / n as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let (s, c) = (golden * i as f64).sin_cos();
                [r * c, r * s, z]
            })
            .collect();
        Ok(Self {
            points,
            weights: vec![SPHERE_MEASURE / n as f64; n],
            quadrature: Quadrature::Fibonacci,
            tagged: false,
        })
    }

    /// Uniform random sphere points with equal weights `4π/N`.
    pub fn monte_carlo(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return domain("quadrature needs at least one point");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n).map(|_| random_direction(&mut rng)).collect();
        Ok(Self {
            points,
            weights: vec![SPHERE_MEASURE / n as f64; n],
            quadrature: Quadrature::MonteCarlo { seed },
            tagged: false,
        })
    }

    /// Arbitrary weighted point set.
    pub fn declared(points: Vec<[f64; 3]>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return domain("points and weights must be nonempty and of equal length");
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return domain("quadrature weights must be nonnegative");
        }
        Ok(Self {
            points,
            weights,
            quadrature: Quadrature::Declared,
            tagged: false,
        })
    }

    /// Extends every point with a tag coordinate.
    pub fn with_tags(mut self) -> Self {
        self.tagged = true;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    pub fn is_tagged(&self) -> bool {
        self.tagged
    }

    pub fn is_sphere(&self) -> bool {
        !matches!(self.quadrature, Quadrature::Declared)
    }

    /// Total measure of one layer.
    pub fn total_measure(&self) -> f64 {
        self.sum(|_| 1.0)
    }

    /// `Σ_i w_i f(i)`, chunked and combined in index order.
    pub fn sum(&self, f: impl Fn(usize) -> f64 + Sync) -> f64 {
        let w = &self.weights;
        let partials: Vec<f64> = (0..w.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(w.len());
                (lo..hi).fold(0.0, |acc, i| acc + w[i] * f(i))
            })
            .collect();
        partials.iter().fold(0.0, |acc, x| acc + x)
    }
}

pub(crate) fn random_direction(rng: &mut impl Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    let r = (1.0 - z * z).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Identity of a pure qubit state up to global phase (Bloch vector on a 1e-9 grid).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateKey(pub [i64; 3]);

impl StateKey {
    pub fn of(dir: &[f64; 3]) -> Self {
        StateKey(dir.map(|x| (x * 1e9).round() as i64))
    }
}

/// Tag coordinate of an ontic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    Shared,
    Private(StateKey),
}

/// Epistemic state μ(λ|·): a density per point on each occupied tag layer.
#[derive(Debug, Clone)]
pub struct EpistemicState {
    space: Arc<OnticSpace>,
    layers: BTreeMap<Tag, Vec<f64>>,
}

impl EpistemicState {
    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn layers(&self) -> &BTreeMap<Tag, Vec<f64>> {
        &self.layers
    }

    pub fn layer(&self, tag: &Tag) -> Option<&[f64]> {
        self.layers.get(tag).map(Vec::as_slice)
    }

    pub fn density(&self, tag: &Tag, i: usize) -> f64 {
        self.layers.get(tag).map_or(0.0, |l| l[i])
    }

    /// `∫_Λ μ dλ`
    pub fn integral(&self) -> f64 {
        self.layers.values().map(|l| self.space.sum(|i| l[i])).fold(0.0, |acc, x| acc + x)
    }

    /// `∫_S μ dλ`
    pub fn mass_on(&self, set: &SupportSet) -> f64 {
        self.layers
            .iter()
            .filter_map(|(tag, l)| set.layers.get(tag).map(|m| (l, m)))
            .map(|(l, m)| self.space.sum(|i| if m[i] { l[i] } else { 0.0 }))
            .fold(0.0, |acc, x| acc + x)
    }

    /// `∫_Λ ξ(k|λ) μ(λ) dλ`
    pub fn expectation(&self, response: &ResponseFunction, outcome: usize) -> f64 {
        let xi = &response.outcomes[outcome];
        self.layers.values().map(|l| self.space.sum(|i| xi[i] * l[i])).fold(0.0, |acc, x| acc + x)
    }

    /// `∫_S ξ(k|λ) μ(λ) dλ`
    pub fn expectation_on(&self, response: &ResponseFunction, outcome: usize, set: &SupportSet) -> f64 {
        let xi = &response.outcomes[outcome];
        self.layers
            .iter()
            .filter_map(|(tag, l)| set.layers.get(tag).map(|m| (l, m)))
            .map(|(l, m)| self.space.sum(|i| if m[i] { xi[i] * l[i] } else { 0.0 }))
            .fold(0.0, |acc, x| acc + x)
    }

    fn add_scaled(&mut self, other: &EpistemicState, w: f64) {
        for (tag, l) in &other.layers {
            let acc = self
                .layers
                .entry(*tag)
                .or_insert_with(|| vec![0.0; l.len()]);
            for (a, x) in acc.iter_mut().zip(l) {
                *a += w * x;
            }
        }
    }
}

/// Response function ξ(k|λ) of a projective measurement, per outcome and
/// sphere point (the same on every tag layer).
#[derive(Debug, Clone)]
pub struct ResponseFunction {
    basis: Vec<PureState>,
    outcomes: Vec<Vec<f64>>,
}

impl ResponseFunction {
    pub fn basis(&self) -> &[PureState] {
        &self.basis
    }

    pub fn outcomes(&self) -> &[Vec<f64>] {
        &self.outcomes
    }

    /// Index of the basis element equal (up to phase) to `phi`.
    pub fn outcome_of(&self, phi: &PureState) -> Option<usize> {
        self.basis.iter().position(|b| b.same_ray(phi))
    }

    /// Largest per-point deviation of `Σ_k ξ(k|λ)` from one.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.outcomes.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| (self.outcomes.iter().map(|o| o[i]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Membership of ontic points in a subset of Λ, with its measure.
#[derive(Debug, Clone)]
pub struct SupportSet {
    space: Arc<OnticSpace>,
    layers: BTreeMap<Tag, Vec<bool>>,
    measure: f64,
}

impl SupportSet {
    fn from_layers(space: Arc<OnticSpace>, layers: BTreeMap<Tag, Vec<bool>>) -> Self {
        let measure = layers
            .values()
            .map(|m| space.sum(|i| if m[i] { 1.0 } else { 0.0 }))
            .fold(0.0, |acc, x| acc + x);
        Self {
            space,
            layers,
            measure,
        }
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    /// Number of member points over all layers.
    pub fn count(&self) -> usize {
        self.layers.values().map(|m| m.iter().filter(|&&b| b).count()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn contains(&self, tag: &Tag, i: usize) -> bool {
        self.layers.get(tag).is_some_and(|m| m[i])
    }

    pub fn layers(&self) -> &BTreeMap<Tag, Vec<bool>> {
        &self.layers
    }

    pub fn intersection(&self, other: &SupportSet) -> SupportSet {
        let layers = self
            .layers
            .iter()
            .filter_map(|(tag, a)| {
                other
                    .layers
                    .get(tag)
                    .map(|b| (*tag, a.iter().zip(b).map(|(x, y)| *x && *y).collect()))
            })
            .collect();
        SupportSet::from_layers(self.space.clone(), layers)
    }

    pub fn union(&self, other: &SupportSet) -> SupportSet {
        let mut layers = self.layers.clone();
        for (tag, b) in &other.layers {
            match layers.get_mut(tag) {
                Some(a) => a.iter_mut().zip(b).for_each(|(x, y)| *x |= *y),
                None => {
                    layers.insert(*tag, b.clone());
                }
            }
        }
        SupportSet::from_layers(self.space.clone(), layers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    KochenSpecker,
    Deficit { epsilon: f64 },
}

/// An ontological model of a qubit.
#[derive(Debug, Clone)]
pub struct OnticModel {
    name: String,
    space: Arc<OnticSpace>,
    kind: ModelKind,
    born_tolerance: f64,
}

/// Declared Born-reproduction tolerance of the shipped models.
pub const BORN_TOLERANCE: f64 = 1e-3;

/// The Kochen–Specker model on a sphere quadrature.
pub fn ks_model(space: OnticSpace) -> Result<OnticModel> {
    if !space.is_sphere() || space.is_tagged() {
        return domain("the Kochen–Specker model needs an untagged sphere quadrature");
    }
    Ok(OnticModel {
        name: "ks".into(),
        space: Arc::new(space),
        kind: ModelKind::KochenSpecker,
        born_tolerance: BORN_TOLERANCE,
    })
}

/// Kochen–Specker layer with weight `1 − ε` plus a private-tag copy with weight `ε`.
pub fn deficit_model(space: OnticSpace, epsilon: f64) -> Result<OnticModel> {
    if !(0.0..=1.0).contains(&epsilon) {
        return domain(format!("epsilon = {epsilon} must lie in [0, 1]"));
    }
    if !space.is_sphere() {
        return domain("the deficit model needs a sphere quadrature");
    }
    Ok(OnticModel {
        name: "deficit".into(),
        space: Arc::new(space.with_tags()),
        kind: ModelKind::Deficit { epsilon },
        born_tolerance: BORN_TOLERANCE,
    })
}

fn qubit_direction(psi: &PureState) -> Result<[f64; 3]> {
    if psi.dim() != 2 {
        return domain(format!("ontological models here are for qubits, got dim {}", psi.dim()));
    }
    Ok(psi.bloch()?.unit())
}

impl OnticModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn born_tolerance(&self) -> f64 {
        self.born_tolerance
    }

    fn ks_density(&self, dir: &[f64; 3], scale: f64) -> Vec<f64> {
        self.space
            .points
            .par_iter()
            .map(|p| scale * dot3(dir, p).max(0.0) / PI)
            .collect()
    }

    /// Epistemic state `μ(λ|ψ)`.
    pub fn prepare(&self, psi: &PureState) -> Result<EpistemicState> {
        let dir = qubit_direction(psi)?;
        let mut layers = BTreeMap::new();
        match self.kind {
            ModelKind::KochenSpecker => {
                layers.insert(Tag::Shared, self.ks_density(&dir, 1.0));
            }
            ModelKind::Deficit { epsilon } => {
                if epsilon < 1.0 {
                    layers.insert(Tag::Shared, self.ks_density(&dir, 1.0 - epsilon));
                }
                if epsilon > 0.0 {
                    layers.insert(Tag::Private(StateKey::of(&dir)), self.ks_density(&dir, epsilon));
                }
            }
        }
        Ok(EpistemicState {
            space: self.space.clone(),
            layers,
        })
    }

    /// Epistemic state of a preparation context: the weighted sum of the
    /// members' epistemic states.
    pub fn prepare_mixture<W: Scalar>(&self, d: &Decomposition<W>) -> Result<EpistemicState> {
        let mut acc = EpistemicState {
            space: self.space.clone(),
            layers: BTreeMap::new(),
        };
        for m in d.members() {
            acc.add_scaled(&self.prepare(&m.state)?, m.weight.to_f64());
        }
        Ok(acc)
    }

    /// Response function of a projective qubit measurement. A point on the
    /// boundary between outcomes goes to the first of them.
    pub fn respond(&self, basis: &[PureState]) -> Result<ResponseFunction> {
        if basis.len() != 2 {
            return domain("a qubit measurement basis has two elements");
        }
        if basis[0].overlap(&basis[1]) > TOL.orthogonal.sqrt() {
            return domain("measurement basis is not orthogonal");
        }
        let d0 = qubit_direction(&basis[0])?;
        let first: Vec<f64> = self
            .space
            .points
            .par_iter()
            .map(|p| if dot3(&d0, p) >= 0.0 { 1.0 } else { 0.0 })
            .collect();
        let second = first.iter().map(|x| 1.0 - x).collect();
        Ok(ResponseFunction {
            basis: basis.to_vec(),
            outcomes: vec![first, second],
        })
    }

    /// Response for the outcome `phi` of the basis `{φ, φ⊥}`.
    pub fn respond_to(&self, phi: &PureState) -> Result<ResponseFunction> {
        self.respond(&[phi.clone(), phi.qubit_complement()?])
    }
}

fn support_of(state: &EpistemicState) -> SupportSet {
    let layers = state
        .layers
        .iter()
        .map(|(tag, l)| (*tag, l.iter().map(|&x| x > TOL.support).collect()))
        .collect();
    SupportSet::from_layers(state.space.clone(), layers)
}

/// `Λ_ψ = {λ : μ(λ|ψ) > threshold}`
pub fn support(model: &OnticModel, psi: &PureState) -> Result<SupportSet> {
    Ok(support_of(&model.prepare(psi)?))
}

/// Support of an arbitrary epistemic state.
pub fn support_of_state(state: &EpistemicState) -> SupportSet {
    support_of(state)
}

/// `∫_{Λ_φ} μ(λ|ψ) dλ`
pub fn ontic_overlap(model: &OnticModel, phi: &PureState, psi: &PureState) -> Result<f64> {
    let lambda_phi = support(model, phi)?;
    Ok(model.prepare(psi)?.mass_on(&lambda_phi))
}

/// Degree of epistemicity `f(φ,ψ)`, clipped to [0, 1]; `None` for
/// (numerically) orthogonal pairs.
pub fn epistemicity_degree(model: &OnticModel, phi: &PureState, psi: &PureState) -> Result<Option<f64>> {
    let born = phi.overlap(psi);
    if born < TOL.born_orthogonal {
        return Ok(None);
    }
    Ok(Some((ontic_overlap(model, phi, psi)? / born).clamp(0.0, 1.0)))
}

/// Postcondition checks attached to an Ω set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaChecks {
    /// (i) `Ω ∩ Λ_φ = ∅` at the discretization level.
    pub disjoint_from_phi: bool,
    /// (ii) `∫_Ω μ(λ|ψ) dλ`
    pub psi_mass: f64,
    /// `|⟨φ|ψ⟩|² − ∫_{Λ_φ} μ(λ|ψ) dλ`
    pub overlap_deficit: f64,
    /// (iii) `ξ(φ|λ) > 0` on every point of Ω.
    pub response_positive: bool,
}

#[derive(Debug, Clone)]
pub struct Omega {
    pub set: SupportSet,
    pub checks: OmegaChecks,
}

/// `Ω = {λ : μ(λ|ψ) > 0, λ ∉ Λ_φ, ξ(φ|basis, λ) > 0}`
pub fn find_omega(model: &OnticModel, phi: &PureState, psi: &PureState, basis: &[PureState]) -> Result<Omega> {
    let response = model.respond(basis)?;
    let Some(k) = response.outcome_of(phi) else {
        return domain("phi is not a member of the measurement basis");
    };
    let mu_psi = model.prepare(psi)?;
    let lambda_phi = support(model, phi)?;
    let xi = &response.outcomes[k];

    let layers: BTreeMap<Tag, Vec<bool>> = mu_psi
        .layers
        .iter()
        .map(|(tag, l)| {
            let members = (0..l.len())
                .map(|i| l[i] > TOL.support && !lambda_phi.contains(tag, i) && xi[i] > 0.0)
                .collect();
            (*tag, members)
        })
        .collect();
    let set = SupportSet::from_layers(model.space.clone(), layers);

    let disjoint_from_phi = set.intersection(&lambda_phi).is_empty();
    let response_positive = set
        .layers
        .values()
        .all(|m| m.iter().zip(xi).all(|(&inside, &x)| !inside || x > 0.0));
    let psi_mass = mu_psi.mass_on(&set);
    let overlap_deficit = phi.overlap(psi) - mu_psi.mass_on(&lambda_phi);
    Ok(Omega {
        set,
        checks: OmegaChecks {
            disjoint_from_phi,
            psi_mass,
            overlap_deficit,
            response_positive,
        },
    })
}

/// Result of [`verify_born`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BornReport {
    pub model: String,
    pub points: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_deviation: f64,
    /// Bloch directions `(φ̂, ψ̂)` of the worst pair.
    pub worst_pair: ([f64; 3], [f64; 3]),
    /// Largest `|∫ μ − 1|` over the prepared states.
    pub max_normalization_error: f64,
}

/// Compares `∫ ξ(φ|λ) μ(λ|ψ) dλ` with `|⟨φ|ψ⟩|²` on seeded random pairs.
pub fn verify_born(model: &OnticModel, trials: usize, seed: u64) -> Result<BornReport> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BornReport {
        model: model.name.clone(),
        points: model.space.len(),
        trials,
        seed,
        max_deviation: 0.0,
        worst_pair: ([0.0; 3], [0.0; 3]),
        max_normalization_error: 0.0,
    };
    for _ in 0..trials {
        let phi_dir = random_direction(&mut rng);
        let psi_dir = random_direction(&mut rng);
        let phi = PureState::from_bloch(&BlochVector::new(phi_dir)?)?;
        let psi = PureState::from_bloch(&BlochVector::new(psi_dir)?)?;
        let mu = model.prepare(&psi)?;
        let response = model.respond_to(&phi)?;
        let deviation = (mu.expectation(&response, 0) - phi.overlap(&psi)).abs();
        if deviation > report.max_deviation {
            report.max_deviation = deviation;
            report.worst_pair = (phi_dir, psi_dir);
        }
        report.max_normalization_error = report.max_normalization_error.max((mu.integral() - 1.0).abs());
    }
    Ok(report)
}

/// Discretization noise estimate: the largest Born-rule deviation over a
/// fixed set of calibration pairs, floored at one quadrature weight.
pub fn noise_floor(model: &OnticModel) -> Result<f64> {
    let report = verify_born(model, 16, 0x5eed)?;
    let weight = model.space.weights.iter().cloned().fold(0.0, f64::max);
    Ok(report.max_deviation.max(weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(dir: [f64; 3]) -> PureState {
        PureState::from_bloch(&BlochVector::new(dir).unwrap()).unwrap()
    }

    fn space() -> OnticSpace {
        OnticSpace::fibonacci(DEFAULT_POINTS).unwrap()
    }

    #[test]
    fn fibonacci_measure_and_normalization() {
        let s = space();
        assert!((s.total_measure() - SPHERE_MEASURE).abs() < 1e-6);
        let m = ks_model(s).unwrap();
        let mu = m.prepare(&state([0.3, -0.4, 0.866_025_403_784_438_6])).unwrap();
        assert!((mu.integral() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ks_rejects_declared_space() {
        let s = OnticSpace::declared(vec![[0.0, 0.0, 1.0]], vec![1.0]).unwrap();
        assert!(ks_model(s.clone()).is_err());
        assert!(deficit_model(s, 0.5).is_err());
        assert!(deficit_model(space(), 1.5).is_err());
    }

    #[test]
    fn ks_identity_orthogonal_and_right_angle() {
        let m = ks_model(space()).unwrap();
        let up = state([0.0, 0.0, 1.0]);
        let down = state([0.0, 0.0, -1.0]);
        let x = state([1.0, 0.0, 0.0]);
        assert!((ontic_overlap(&m, &up, &up).unwrap() - 1.0).abs() < 1e-6);
        assert!(ontic_overlap(&m, &down, &up).unwrap().abs() < 1e-12);
        let inter = support(&m, &up).unwrap().intersection(&support(&m, &down).unwrap());
        assert_eq!(inter.measure(), 0.0);
        assert!((ontic_overlap(&m, &x, &up).unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn ks_support_is_hemisphere() {
        let m = ks_model(space()).unwrap();
        let s = support(&m, &PureState::basis(2, 0)).unwrap();
        assert!((s.measure() - 2.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn deficit_overlaps() {
        let up = state([0.0, 0.0, 1.0]);
        let x = state([1.0, 0.0, 0.0]);
        let ks = ks_model(space()).unwrap();
        let zero = deficit_model(space(), 0.0).unwrap();
        assert!((ontic_overlap(&zero, &x, &up).unwrap() - ontic_overlap(&ks, &x, &up).unwrap()).abs() < 1e-12);

        let m = deficit_model(space(), 0.2).unwrap();
        assert!((ontic_overlap(&m, &x, &up).unwrap() - 0.4).abs() < 5e-3);
        let m = deficit_model(space(), 0.1).unwrap();
        assert!((ontic_overlap(&m, &x, &up).unwrap() - 0.45).abs() < 5e-3);
        assert!((epistemicity_degree(&m, &x, &up).unwrap().unwrap() - 0.9).abs() < 1e-2);

        let ontic = deficit_model(space(), 1.0).unwrap();
        assert_eq!(epistemicity_degree(&ontic, &x, &up).unwrap(), Some(0.0));
        let inter = support(&ontic, &x).unwrap().intersection(&support(&ontic, &up).unwrap());
        assert!(inter.is_empty());
    }

    #[test]
    fn orthogonal_pair_has_undefined_degree() {
        let m = ks_model(space()).unwrap();
        let up = state([0.0, 0.0, 1.0]);
        assert_eq!(epistemicity_degree(&m, &up, &up.qubit_complement().unwrap()).unwrap(), None);
    }

    #[test]
    fn omega_examples() {
        let up = state([0.0, 0.0, 1.0]);
        let x = state([1.0, 0.0, 0.0]);
        let basis = [x.clone(), x.qubit_complement().unwrap()];

        let ks = ks_model(space()).unwrap();
        let o = find_omega(&ks, &x, &up, &basis).unwrap();
        assert!(o.checks.psi_mass <= 1e-3);
        assert!(o.checks.disjoint_from_phi && o.checks.response_positive);

        let m = deficit_model(space(), 0.1).unwrap();
        let o = find_omega(&m, &x, &up, &basis).unwrap();
        assert!((o.checks.psi_mass - 0.05).abs() < 5e-3, "{:?}", o.checks);
        assert!(o.checks.disjoint_from_phi && o.checks.response_positive);

        let m = deficit_model(space(), 1.0).unwrap();
        let o = find_omega(&m, &x, &up, &basis).unwrap();
        assert!((o.checks.psi_mass - 0.5).abs() < 5e-3);

        let wrong_basis = [up.clone(), up.qubit_complement().unwrap()];
        assert!(find_omega(&m, &x, &up, &wrong_basis).is_err());
    }

    #[test]
    fn born_verification_and_trials_guard() {
        let m = deficit_model(space(), 0.3).unwrap();
        let r = verify_born(&m, 20, 7).unwrap();
        assert!(r.max_deviation < 1e-3, "{r:?}");
        assert!(verify_born(&m, 0, 7).is_err());
    }

    #[test]
    fn mixture_is_pointwise_linear() {
        let m = deficit_model(OnticSpace::fibonacci(5000).unwrap(), 0.4).unwrap();
        let six = crate::ensembles::six_decompositions(0.3, &BlochVector::new([0.0, 0.0, 1.0]).unwrap()).unwrap();
        for d in &six {
            let mix = m.prepare_mixture(d).unwrap();
            let mut manual: BTreeMap<Tag, Vec<f64>> = BTreeMap::new();
            for member in d.members() {
                for (tag, l) in m.prepare(&member.state).unwrap().layers() {
                    let acc = manual.entry(*tag).or_insert_with(|| vec![0.0; l.len()]);
                    for (a, v) in acc.iter_mut().zip(l) {
                        *a += member.weight * v;
                    }
                }
            }
            for (tag, l) in &manual {
                let got = mix.layer(tag).unwrap();
                for (a, b) in got.iter().zip(l) {
                    assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sums_are_reproducible() {
        let m = ks_model(OnticSpace::monte_carlo(50_000, 3).unwrap()).unwrap();
        let psi = state([0.0, 0.6, 0.8]);
        let a = m.prepare(&psi).unwrap().integral();
        let b = m.prepare(&psi).unwrap().integral();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((a - 1.0).abs() < 2e-2);
    }

    #[test]
    fn response_is_complete() {
        let m = ks_model(OnticSpace::fibonacci(4001).unwrap()).unwrap();
        let r = m.respond_to(&state([0.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.completeness_defect(), 0.0);
    }
}
