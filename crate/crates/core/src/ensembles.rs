//! Pure-state decompositions of density operators.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{domain, range, Error, Result};
use crate::exact::{ExactBloch, ExactQubitGeometry, Surd3};
use crate::qstate::linalg::{complete_basis, frobenius};
use crate::qstate::{
    bloch_to_density, dot3, BipartiteState, BlochVector, CMatrix, CVector, DensityOperator,
    PureState, TOL,
};
use crate::scalar::Scalar;
use crate::steering::bob_conditionals;

/// One weighted pure state of a decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Member<W = f64> {
    pub weight: W,
    pub state: PureState,
}

/// A convex pure-state decomposition (preparation context) of `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<W = f64> {
    label: String,
    target: DensityOperator,
    members: Vec<Member<W>>,
}

impl<W: Scalar> Decomposition<W> {
    /// Assembles a decomposition without checking it; see [`validate`].
    pub fn new(label: impl Into<String>, target: DensityOperator, members: Vec<Member<W>>) -> Self {
        Self {
            label: label.into(),
            target,
            members,
        }
    }

    /// Assembles a decomposition and rejects it if [`validate`] reports anything.
    pub fn checked(
        label: impl Into<String>,
        target: DensityOperator,
        members: Vec<Member<W>>,
    ) -> Result<Self> {
        let d = Self::new(label, target, members);
        let violations = validate(&d);
        if violations.is_empty() {
            Ok(d)
        } else {
            Err(Error::Invariant(format!(
                "decomposition '{}' invalid: {violations:?}",
                d.label
            )))
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn target(&self) -> &DensityOperator {
        &self.target
    }

    pub fn members(&self) -> &[Member<W>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ w_i |ψ_i⟩⟨ψ_i|` in floating point.
    pub fn mixture(&self) -> CMatrix {
        let dim = self.target.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for member in &self.members {
            if member.state.dim() == dim {
                m += member.state.projector() * Complex64::new(member.weight.to_f64(), 0.0);
            }
        }
        m
    }

    /// Same decomposition with floating-point weights.
    pub fn to_f64(&self) -> Decomposition<f64> {
        Decomposition {
            label: self.label.clone(),
            target: self.target.clone(),
            members: self
                .members
                .iter()
                .map(|m| Member {
                    weight: m.weight.to_f64(),
                    state: m.state.clone(),
                })
                .collect(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// A failed decomposition invariant, with its magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `|Σ w_i − 1|`
    WeightSum { deviation: f64 },
    NegativeWeight { index: usize, weight: f64 },
    DimensionMismatch { index: usize, dim: usize },
    /// Frobenius distance between the mixture and the target.
    Reconstruction { distance: f64 },
    Empty,
}

/// Lists every violated invariant of `d`; empty when the decomposition is valid.
/// Exact scalars must sum to one exactly.
pub fn validate<W: Scalar>(d: &Decomposition<W>) -> Vec<Violation> {
    let mut out = Vec::new();
    if d.members.is_empty() {
        out.push(Violation::Empty);
        return out;
    }
    let dim = d.target.dim();
    let mut total = W::zero();
    for (index, m) in d.members.iter().enumerate() {
        if m.weight < W::zero() {
            out.push(Violation::NegativeWeight {
                index,
                weight: m.weight.to_f64(),
            });
        }
        if m.state.dim() != dim {
            out.push(Violation::DimensionMismatch {
                index,
                dim: m.state.dim(),
            });
        }
        total = total + m.weight.clone();
    }
    let deviation = (total.clone() - W::one()).abs_val();
    let bad_sum = if W::EXACT {
        deviation != W::zero()
    } else {
        deviation.to_f64() > TOL.norm
    };
    if bad_sum {
        out.push(Violation::WeightSum {
            deviation: deviation.to_f64(),
        });
    }
    let distance = frobenius(&(d.mixture() - d.target.matrix()));
    if distance > TOL.reconstruction {
        out.push(Violation::Reconstruction { distance });
    }
    out
}

#[derive(Serialize, Deserialize)]
struct MemberRepr {
    weight: Value,
    state: PureState,
}

#[derive(Serialize, Deserialize)]
struct DecompositionRepr {
    label: String,
    #[serde(default)]
    mode: Option<String>,
    target: DensityOperator,
    members: Vec<MemberRepr>,
}

impl<W: Scalar> Serialize for Decomposition<W> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            label: self.label.clone(),
            mode: Some(if W::EXACT { "rational" } else { "float" }.to_string()),
            target: self.target.clone(),
            members: self
                .members
                .iter()
                .map(|m| MemberRepr {
                    weight: m.weight.to_json(),
                    state: m.state.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, W: Scalar> Deserialize<'de> for Decomposition<W> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = DecompositionRepr::deserialize(d)?;
        let members = r
            .members
            .into_iter()
            .map(|m| {
                W::from_json(&m.weight)
                    .map(|weight| Member {
                        weight,
                        state: m.state,
                    })
                    .ok_or_else(|| D::Error::custom(format!("bad weight {}", m.weight)))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Decomposition::new(r.label, r.target, members))
    }
}

/// Bloch directions of the equatorial triple: `(ψ_x, ψ_x⊥)` for x = a, b, c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquatorialTriple {
    pub pairs: [([f64; 3], [f64; 3]); 3],
}

impl EquatorialTriple {
    pub fn a(&self) -> [f64; 3] {
        self.pairs[0].0
    }
    pub fn b(&self) -> [f64; 3] {
        self.pairs[1].0
    }
    pub fn c(&self) -> [f64; 3] {
        self.pairs[2].0
    }
}

fn unit_check(n_hat: &BlochVector) -> Result<[f64; 3]> {
    if (n_hat.norm() - 1.0).abs() > 1e-9 {
        return domain(format!("direction must be a unit vector, |n| = {}", n_hat.norm()));
    }
    Ok(n_hat.unit())
}

/// Orthonormal frame `(e1, e2)` of the plane orthogonal to `n`, seeded by the
/// coordinate axis along which `n` has its smallest component (first on ties).
pub fn equatorial_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let mut axis = 0;
    for k in 1..3 {
        if n[k].abs() < n[axis].abs() {
            axis = k;
        }
    }
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let proj = dot3(&e, &n);
    let mut e1 = [e[0] - proj * n[0], e[1] - proj * n[1], e[2] - proj * n[2]];
    let len = dot3(&e1, &e1).sqrt();
    e1 = e1.map(|x| x / len);
    let e2 = cross(&n, &e1);
    (e1, e2)
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// ψ_a, ψ_b, ψ_c at equatorial angles `phase`, `phase + 120°`, `phase + 240°`
/// about `n_hat`, so the three antipodal lines sit 60° apart.
pub fn equatorial_triple(n_hat: &BlochVector, phase: f64) -> Result<EquatorialTriple> {
    let n = unit_check(n_hat)?;
    let (e1, e2) = equatorial_frame(n);
    let at = |angle: f64| {
        let (s, c) = angle.sin_cos();
        [
            c * e1[0] + s * e2[0],
            c * e1[1] + s * e2[1],
            c * e1[2] + s * e2[2],
        ]
    };
    let pair = |angle: f64| {
        let v = at(angle);
        (v, v.map(|x| -x))
    };
    Ok(EquatorialTriple {
        pairs: [
            pair(phase),
            pair(phase + 2.0 * PI / 3.0),
            pair(phase + 4.0 * PI / 3.0),
        ],
    })
}

/// Labels of the eight states in the canonical order used throughout.
pub const LEMMA1_LABELS: [&str; 8] = [
    "phi_n", "phi_n_perp", "psi_a", "psi_a_perp", "psi_b", "psi_b_perp", "psi_c", "psi_c_perp",
];

/// Labels of the six preparation contexts in order.
pub const SIX_LABELS: [&str; 6] = [
    "C(phi_n_perp,phi_n)",
    "C(psi_a,psi_a_perp,phi_n)",
    "C(psi_b,psi_b_perp,phi_n)",
    "C(psi_c,psi_c_perp,phi_n)",
    "C(psi_a,psi_b,psi_c,phi_n)",
    "C(psi_a_perp,psi_b_perp,psi_c_perp,phi_n)",
];

/// The eight states φ_n, φ_n⊥, ψ_a, ψ_a⊥, ψ_b, ψ_b⊥, ψ_c, ψ_c⊥ as Bloch
/// directions, in [`LEMMA1_LABELS`] order.
pub fn lemma1_bloch_directions(n_hat: &BlochVector, phase: f64) -> Result<[[f64; 3]; 8]> {
    let n = unit_check(n_hat)?;
    let t = equatorial_triple(n_hat, phase)?;
    Ok([
        n,
        n.map(|x| -x),
        t.pairs[0].0,
        t.pairs[0].1,
        t.pairs[1].0,
        t.pairs[1].1,
        t.pairs[2].0,
        t.pairs[2].1,
    ])
}

pub fn lemma1_states(n_hat: &BlochVector, phase: f64) -> Result<Vec<PureState>> {
    lemma1_bloch_directions(n_hat, phase)?
        .iter()
        .map(|d| PureState::from_bloch(&BlochVector::new(*d)?))
        .collect()
}

/// Member structure of the six decompositions as `(state index, weight)`
/// over the eight states of [`LEMMA1_LABELS`].
pub fn six_decomposition_terms<W: Scalar>(q: &W) -> Vec<Vec<(usize, W)>> {
    let one = W::one();
    let two = W::from_i64(2);
    let three = W::from_i64(3);
    let half_low = (one.clone() - q.clone()) / two.clone();
    let half_high = (one.clone() + q.clone()) / two;
    let third_low = (one - q.clone()) / three;
    let pair = |a: usize, b: usize| vec![(a, half_low.clone()), (b, half_low.clone()), (0, q.clone())];
    vec![
        vec![(1, half_low.clone()), (0, half_high)],
        pair(2, 3),
        pair(4, 5),
        pair(6, 7),
        vec![(2, third_low.clone()), (4, third_low.clone()), (6, third_low.clone()), (0, q.clone())],
        vec![(3, third_low.clone()), (5, third_low.clone()), (7, third_low), (0, q.clone())],
    ]
}

fn check_q<W: Scalar>(q: &W) -> Result<()> {
    if *q < W::zero() || *q >= W::one() {
        return domain(format!("mixedness parameter q = {q} must satisfy 0 <= q < 1"));
    }
    Ok(())
}

/// The six decompositions of `ρ_n = ½(I + q n̂·σ)` with the triple at `phase`.
pub fn six_decompositions_with_phase<W: Scalar>(
    q: W,
    n_hat: &BlochVector,
    phase: f64,
) -> Result<Vec<Decomposition<W>>> {
    check_q(&q)?;
    let n = unit_check(n_hat)?;
    let states = lemma1_states(n_hat, phase)?;
    let qf = q.to_f64();
    let target = bloch_to_density(&BlochVector::new(n.map(|x| x * qf))?);
    Ok(six_decomposition_terms(&q)
        .into_iter()
        .zip(SIX_LABELS)
        .map(|(terms, label)| {
            let members = terms
                .into_iter()
                .map(|(i, weight)| Member {
                    weight,
                    state: states[i].clone(),
                })
                .collect();
            Decomposition::new(label, target.clone(), members)
        })
        .collect())
}

/// The six decompositions at the default phase 0.
pub fn six_decompositions<W: Scalar>(q: W, n_hat: &BlochVector) -> Result<Vec<Decomposition<W>>> {
    six_decompositions_with_phase(q, n_hat, 0.0)
}

/// Exact Bloch data for the eight states when `n̂` is a signed coordinate
/// axis and the phase is zero; `None` otherwise.
pub fn exact_lemma1_geometry(q: &BigRational, n_hat: &BlochVector, phase: f64) -> Option<ExactQubitGeometry> {
    if phase != 0.0 {
        return None;
    }
    let n = n_hat.components();
    let mut axis: [i64; 3] = [0; 3];
    for k in 0..3 {
        axis[k] = if n[k] == 1.0 {
            1
        } else if n[k] == -1.0 {
            -1
        } else if n[k] == 0.0 {
            0
        } else {
            return None;
        };
    }
    if axis.iter().map(|a| a.abs()).sum::<i64>() != 1 {
        return None;
    }
    // same frame rule as `equatorial_frame`
    let seed = (0..3).find(|&k| axis[k] == 0)?;
    let mut e1 = [0i64; 3];
    e1[seed] = 1;
    let e2 = [
        axis[1] * e1[2] - axis[2] * e1[1],
        axis[2] * e1[0] - axis[0] * e1[2],
        axis[0] * e1[1] - axis[1] * e1[0],
    ];
    let rat = |p: i64, d: i64| BigRational::new(p.into(), d.into());
    let int_vec = |v: [i64; 3]| -> ExactBloch { v.map(|x| Surd3::rational(rat(x, 1))) };
    let half = Surd3::rational(rat(-1, 2));
    let root_half = Surd3::new(rat(0, 1), rat(1, 2));
    let combo = |sign: i64| -> ExactBloch {
        let e1 = int_vec(e1);
        let e2 = int_vec(e2);
        [0, 1, 2].map(|k| {
            half.clone() * e1[k].clone()
                + Surd3::rational(rat(sign, 1)) * root_half.clone() * e2[k].clone()
        })
    };
    let neg = |v: &ExactBloch| v.clone().map(|x| -x);
    let phi = int_vec(axis);
    let a = int_vec(e1);
    let b = combo(1);
    let c = combo(-1);
    let target = phi.clone().map(|x| Surd3::rational(q.clone()) * x);
    Some(ExactQubitGeometry {
        target,
        states: vec![
            phi.clone(),
            neg(&phi),
            a.clone(),
            neg(&a),
            b.clone(),
            neg(&b),
            c.clone(),
            neg(&c),
        ],
    })
}

/// A decomposition of `rho` with `m` members whose first member is `psi1`
/// with the largest admissible weight `1 / ⟨ψ₁|ρ⁺|ψ₁⟩`.
///
/// Built by purifying `rho` and measuring the purifying system in a basis
/// whose first vector steers the purified system onto `psi1`.
pub fn range_decomposition(rho: &DensityOperator, psi1: &PureState, m: usize) -> Result<Decomposition> {
    if psi1.dim() != rho.dim() {
        return domain(format!("state dim {} vs operator dim {}", psi1.dim(), rho.dim()));
    }
    let (values, vectors) = rho.spectrum();
    let support: Vec<(f64, CVector)> = values
        .into_iter()
        .zip(vectors)
        .filter(|(p, _)| *p > TOL.schmidt_rank)
        .collect();
    let rank = support.len();
    if m < rank {
        return domain(format!("m = {m} is below rank {rank}"));
    }
    let residual = rho.range_residual(psi1);
    if residual > TOL.range_residual {
        return range(format!("state lies outside the range (residual {residual:e})"));
    }

    // purification Σ_j √p_j |j⟩_A |φ_j⟩_B
    let dim = rho.dim();
    let amplitudes = CMatrix::from_fn(rank, dim, |j, k| support[j].1[k] * support[j].0.sqrt());
    let purification = BipartiteState::normalized(amplitudes)?;

    // frame vectors in Alice's coordinates; v_1 ∝ ρ^{-1/2} ψ₁
    let u = CVector::from_fn(rank, |j, _| support[j].1.dotc(psi1.vector()) / support[j].0.sqrt());
    let u = &u / Complex64::new(u.norm(), 0.0);
    let standard: Vec<CVector> = (0..rank)
        .map(|j| {
            let mut e = CVector::zeros(rank);
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let basis = complete_basis(std::slice::from_ref(&u), &standard, 1e-8);
    if basis.len() != rank {
        return Err(Error::Invariant("failed to complete the support basis".into()));
    }
    let mut frame = vec![u];
    let rest = rank - 1;
    let extra = m - 1;
    if rest > 0 {
        // (m−1)×(rank−1) isometry with DFT columns spreads the remaining basis over m−1 vectors
        let scale = 1.0 / (extra as f64).sqrt();
        for k in 0..extra {
            let mut v = CVector::zeros(rank);
            for i in 0..rest {
                let phase = 2.0 * PI * (k * i) as f64 / extra as f64;
                v += &basis[i + 1] * Complex64::from_polar(scale, phase);
            }
            frame.push(v);
        }
    }
    let alice: Vec<CVector> = frame.iter().map(|v| v.conjugate()).collect();
    let conditionals = bob_conditionals(&purification, &alice)?;

    let mut members = Vec::with_capacity(m);
    for (k, (weight, bob)) in conditionals.into_iter().enumerate() {
        let state = if k == 0 {
            psi1.clone()
        } else {
            PureState::normalized(bob)?
        };
        members.push(Member { weight, state });
    }
    // pure target with m > 1: pad with weightless copies of ψ₁
    while members.len() < m {
        members.push(Member {
            weight: 0.0,
            state: psi1.clone(),
        });
    }
    Ok(Decomposition::new("range(psi_1)", rho.clone(), members))
}

/// Spectral decomposition of `rho` restricted to its support.
pub fn spectral_decomposition(rho: &DensityOperator) -> Result<Decomposition> {
    let (values, vectors) = rho.spectrum();
    let members = values
        .into_iter()
        .zip(vectors)
        .filter(|(p, _)| *p > TOL.schmidt_rank)
        .map(|(p, v)| {
            Ok(Member {
                weight: p,
                state: PureState::normalized(v)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Decomposition::new("spectral", rho.clone(), members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn z_hat() -> BlochVector {
        BlochVector::new([0.0, 0.0, 1.0]).unwrap()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn maximally_mixed_family() {
        let six = six_decompositions(r(0, 1), &z_hat()).unwrap();
        assert_eq!(six.len(), 6);
        assert_eq!(six[0].members()[0].weight, r(1, 2));
        assert_eq!(six[0].members()[1].weight, r(1, 2));
        for d in &six {
            assert!(validate(d).is_empty(), "{}: {:?}", d.label(), validate(d));
            assert!(d.target().distance(&DensityOperator::maximally_mixed(2)) < 1e-15);
        }
    }

    #[test]
    fn half_mixed_weights() {
        let six = six_decompositions(r(1, 2), &z_hat()).unwrap();
        let w: Vec<Rational> = six[0].members().iter().map(|m| m.weight.clone()).collect();
        assert_eq!(w, vec![r(1, 4), r(3, 4)]);
        for d in &six[4..] {
            let w: Vec<Rational> = d.members().iter().map(|m| m.weight.clone()).collect();
            assert_eq!(w, vec![r(1, 6), r(1, 6), r(1, 6), r(1, 2)]);
        }
        assert!(six[0].target().distance(&DensityOperator::diagonal(&[0.75, 0.25]).unwrap()) < 1e-15);
    }

    #[test]
    fn q_one_is_rejected() {
        assert!(matches!(six_decompositions(1.0, &z_hat()), Err(Error::Domain(_))));
        assert!(matches!(six_decompositions(r(3, 2), &z_hat()), Err(Error::Domain(_))));
        assert!(matches!(six_decompositions(-0.1, &z_hat()), Err(Error::Domain(_))));
    }

    #[test]
    fn triple_geometry_on_z() {
        let t = equatorial_triple(&z_hat(), 0.0).unwrap();
        let mut line_angles: Vec<f64> = t
            .pairs
            .iter()
            .map(|(v, _)| (v[1].atan2(v[0]).to_degrees() + 360.0) % 180.0)
            .collect();
        line_angles.sort_by(f64::total_cmp);
        for (got, want) in line_angles.iter().zip([0.0, 60.0, 120.0]) {
            assert!((got - want).abs() < 1e-9, "{line_angles:?}");
        }
        for (v, w) in t.pairs {
            assert!((dot3(&v, &w) + 1.0).abs() < 1e-15);
        }
        // ψ_a·ψ_b sits at ±cos 60°
        assert!((dot3(&t.a(), &t.b()).abs() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exact_geometry_mixes_exactly() {
        for axis in [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, -1.0, 0.0]] {
            let n = BlochVector::new(axis).unwrap();
            let q = r(2, 7);
            let g = exact_lemma1_geometry(&q, &n, 0.0).unwrap();
            let floats = lemma1_bloch_directions(&n, 0.0).unwrap();
            for (i, s) in g.states.iter().enumerate() {
                assert!(g.is_pure(i));
                let f = crate::exact::exact_to_f64(s);
                for k in 0..3 {
                    assert!((f[k] - floats[i][k]).abs() < 1e-15);
                }
            }
            for terms in six_decomposition_terms(&q) {
                assert!(g.mixes_to_target(&terms));
            }
        }
        assert!(exact_lemma1_geometry(&r(1, 2), &z_hat(), 0.3).is_none());
    }

    #[test]
    fn validate_reports_weight_sum_and_reconstruction() {
        let target = DensityOperator::maximally_mixed(2);
        let d = Decomposition::new(
            "bad",
            target.clone(),
            vec![
                Member { weight: 0.5, state: PureState::basis(2, 0) },
                Member { weight: 0.6, state: PureState::basis(2, 1) },
            ],
        );
        let v = validate(&d);
        match v.iter().find(|x| matches!(x, Violation::WeightSum { .. })) {
            Some(Violation::WeightSum { deviation }) => assert!((deviation - 0.1).abs() < 1e-12),
            other => panic!("{other:?}"),
        }

        let d = Decomposition::new(
            "pure",
            target,
            vec![Member { weight: 1.0, state: PureState::basis(2, 0) }],
        );
        let v = validate(&d);
        assert_eq!(v.len(), 1);
        match &v[0] {
            // diag(1,0) − I/2 = diag(½, −½), Frobenius norm 1/√2
            Violation::Reconstruction { distance } => {
                assert!((distance - 0.5f64.sqrt()).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn range_decomposition_examples() {
        let mixed = DensityOperator::maximally_mixed(2);
        let d = range_decomposition(&mixed, &PureState::basis(2, 0), 2).unwrap();
        assert!(validate(&d).is_empty());
        assert!((d.members()[0].weight - 0.5).abs() < 1e-12);
        assert!((d.members()[1].weight - 0.5).abs() < 1e-12);
        assert!(d.members()[1].state.same_ray(&PureState::basis(2, 1)));

        let plus = PureState::from_real(&[1.0, 1.0]).unwrap();
        let minus = PureState::from_real(&[1.0, -1.0]).unwrap();
        let d = range_decomposition(&mixed, &plus, 2).unwrap();
        assert!(validate(&d).is_empty());
        assert!(d.members()[1].state.same_ray(&minus));

        let rho = DensityOperator::diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let psi1 = PureState::from_real(&[1.0, 1.0, 1.0]).unwrap();
        for m in [3, 4, 6] {
            let d = range_decomposition(&rho, &psi1, m).unwrap();
            assert_eq!(d.len(), m);
            assert!(validate(&d).is_empty(), "{:?}", validate(&d));
            assert_eq!(d.members()[0].state, psi1);
            let q1 = 1.0 / (1.0 / 0.5 + 1.0 / 0.3 + 1.0 / 0.2) * 3.0;
            assert!((d.members()[0].weight - q1).abs() < 1e-12);
        }
    }

    #[test]
    fn range_decomposition_errors() {
        let rho = DensityOperator::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        let outside = PureState::basis(3, 2);
        assert!(matches!(range_decomposition(&rho, &outside, 2), Err(Error::Range(_))));
        assert!(matches!(
            range_decomposition(&rho, &PureState::basis(3, 0), 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn decomposition_json_round_trip() {
        let six = six_decompositions(r(1, 2), &z_hat()).unwrap();
        let v = serde_json::to_value(&six[4]).unwrap();
        assert_eq!(v["members"][0]["weight"], serde_json::json!("1/6"));
        assert_eq!(v["mode"], serde_json::json!("rational"));
        let back: Decomposition<Rational> = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(back, six[4]);
        let as_float: Decomposition<f64> = serde_json::from_value(v).unwrap();
        assert!((as_float.members()[3].weight - 0.5).abs() < 1e-15);
    }
}
