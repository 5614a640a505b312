//! Remote preparation of Bob's ensembles by measurements on Alice's side of
//! a shared pure state, and the nonlocality witnesses built from two such
//! preparations.
//!
//! Convention: with `|ψ⟩ = Σ_j c_j |a_j⟩|b_j⟩` and target member
//! `(q_k, |ψ_k⟩)`, Alice's effect is `A_k = |α_k⟩⟨α_k|` with
//! `α_k = Σ_j conj(x_kj) |a_j⟩` and `x_kj = √q_k ⟨b_j|ψ_k⟩ / c_j`; the
//! kernel projector of Alice's reduced state is added to `A_0`. Assemblages
//! are computed independently by contracting `Tr_A[(A_k ⊗ I)|ψ⟩⟨ψ|]`.

use nalgebra::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{equatorial_frame, range_decomposition, spectral_decomposition, Decomposition, Member};
use crate::error::{domain, range, Error, Result};
use crate::onticmodel::{self, find_omega, support, ModelKind, OnticModel, OnticSpace};
use crate::pncheck::{self, build_lemma1_instance, FeasibilityReport, Verdict};
use crate::qstate::linalg::{frobenius, identity, outer};
use crate::qstate::{
    density_to_bloch, dot3, partial_trace_a, schmidt, BipartiteState, BlochVector, CMatrix, CVector,
    DensityOperator, Povm, PovmResiduals, PureState, TOL,
};
use crate::scalar::rational_from_f64;
use crate::Rational;

/// Bob's unnormalized conditional vectors `(⟨α|⊗I)|ψ⟩ = Mᵀ conj(α)` with
/// their squared norms.
pub fn bob_conditionals(psi: &BipartiteState, alice: &[CVector]) -> Result<Vec<(f64, CVector)>> {
    let m = psi.amplitudes();
    alice
        .iter()
        .map(|a| {
            if a.len() != m.nrows() {
                return domain(format!("Alice vector of dim {} vs {}", a.len(), m.nrows()));
            }
            let v = m.transpose() * a.conjugate();
            Ok((v.norm_squared(), v))
        })
        .collect()
}

/// `Tr_A[(A ⊗ I)|ψ⟩⟨ψ|] = Mᵀ Aᵀ conj(M)`
pub fn conditional_operator(psi: &BipartiteState, effect: &CMatrix) -> CMatrix {
    let m = psi.amplitudes();
    m.transpose() * effect.transpose() * m.conjugate()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssemblageOutcome {
    pub probability: f64,
    /// `None` for outcomes that never occur.
    pub conditional: Option<DensityOperator>,
}

/// Alice's outcome probabilities with Bob's conditional states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringAssemblage {
    pub outcomes: Vec<AssemblageOutcome>,
}

impl SteeringAssemblage {
    /// Assemblage of `povm` on Alice's side of `psi`.
    pub fn of(psi: &BipartiteState, povm: &Povm) -> Self {
        let outcomes = povm
            .effects()
            .iter()
            .map(|e| {
                let unnormalized = conditional_operator(psi, e);
                let probability = unnormalized.trace().re;
                let conditional = (probability > 1e-15).then(|| {
                    DensityOperator::from_matrix_unchecked(unnormalized.map(|x| x / probability))
                });
                AssemblageOutcome {
                    probability,
                    conditional,
                }
            })
            .collect();
        Self { outcomes }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    /// `Σ_k p_k ρ_k`
    pub fn average(&self, dim: usize) -> CMatrix {
        self.outcomes
            .iter()
            .filter_map(|o| o.conditional.as_ref().map(|c| c.matrix() * Complex::new(o.probability, 0.0)))
            .fold(CMatrix::zeros(dim, dim), |acc, m| acc + m)
    }
}

/// Residuals of one steering run against its target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteeringChecks {
    pub povm: PovmResiduals,
    /// `max_k |p_k − q_k|`
    pub probability_error: f64,
    /// `min_k ⟨ψ_k|ρ_k|ψ_k⟩` over outcomes that occur
    pub min_fidelity: f64,
    /// `‖Σ_k p_k ρ_k − ρ_B‖_F`
    pub marginal_error: f64,
}

impl SteeringChecks {
    pub fn passes(&self) -> bool {
        self.povm.negativity < TOL.povm
            && self.povm.completeness < TOL.povm
            && self.povm.hermiticity < TOL.povm
            && self.probability_error < TOL.steering_target
            && self.min_fidelity > 1.0 - TOL.steering_target
            && self.marginal_error < TOL.povm
    }
}

/// Checks an assemblage against the decomposition it was meant to prepare.
pub fn assemblage_checks(povm: &Povm, assemblage: &SteeringAssemblage, target: &Decomposition) -> SteeringChecks {
    let mut probability_error: f64 = 0.0;
    let mut min_fidelity: f64 = 1.0;
    for (o, m) in assemblage.outcomes.iter().zip(target.members()) {
        probability_error = probability_error.max((o.probability - m.weight).abs());
        if let Some(c) = &o.conditional {
            let v = m.state.vector();
            let f = v.dotc(&(c.matrix() * v)).re;
            min_fidelity = min_fidelity.min(f);
        }
    }
    if assemblage.outcomes.len() != target.len() {
        probability_error = f64::INFINITY;
    }
    let dim = target.target().dim();
    SteeringChecks {
        povm: povm.residuals(),
        probability_error,
        min_fidelity,
        marginal_error: frobenius(&(assemblage.average(dim) - target.target().matrix())),
    }
}

/// Alice's measurement steering Bob onto `target`, and the resulting assemblage.
pub fn steer(psi_ab: &BipartiteState, target: &Decomposition) -> Result<(Povm, SteeringAssemblage)> {
    let rho_b = partial_trace_a(psi_ab);
    let mismatch = rho_b.distance(target.target());
    if mismatch > TOL.steering_target {
        return range(format!("target differs from Bob's reduced state by {mismatch:e}"));
    }
    let mixture_error = frobenius(&(target.mixture() - rho_b.matrix()));
    if mixture_error > TOL.steering_target {
        return range(format!("decomposition mixes to a state {mixture_error:e} away from Bob's"));
    }
    for (k, m) in target.members().iter().enumerate() {
        if m.state.dim() != rho_b.dim() {
            return domain(format!("member {k} has dim {}", m.state.dim()));
        }
        if m.weight > 0.0 && rho_b.range_residual(&m.state) > TOL.range_residual {
            return range(format!("member {k} lies outside the range of Bob's state"));
        }
    }

    let sd = schmidt(psi_ab);
    let dim_a = psi_ab.dim_a();
    let mut effects: Vec<CMatrix> = target
        .members()
        .iter()
        .map(|m| {
            let scale = m.weight.max(0.0).sqrt();
            let alpha = sd
                .basis_a
                .iter()
                .zip(&sd.basis_b)
                .zip(&sd.coefficients)
                .fold(CVector::zeros(dim_a), |acc, ((a, b), c)| {
                    let x = b.vector().dotc(m.state.vector()) * (scale / c);
                    acc + a.vector() * x.conj()
                });
            outer(&alpha, &alpha)
        })
        .collect();
    let support_a = sd
        .basis_a
        .iter()
        .fold(CMatrix::zeros(dim_a, dim_a), |acc, a| acc + a.projector());
    if let Some(first) = effects.first_mut() {
        *first += identity(dim_a) - support_a;
    }
    let povm = Povm::from_effects_unchecked(effects)?;
    let assemblage = SteeringAssemblage::of(psi_ab, &povm);
    Ok((povm, assemblage))
}

/// A decomposition of Bob's state with the Alice measurement that prepares it.
#[derive(Debug, Clone, Serialize)]
pub struct PreparedContext {
    pub label: String,
    pub decomposition: Decomposition,
    pub alice: Povm,
    pub assemblage: SteeringAssemblage,
    pub checks: SteeringChecks,
}

fn prepare_context(psi_ab: &BipartiteState, label: &str, decomposition: Decomposition) -> Result<PreparedContext> {
    let (alice, assemblage) = steer(psi_ab, &decomposition)?;
    let checks = assemblage_checks(&alice, &assemblage, &decomposition);
    Ok(PreparedContext {
        label: label.to_string(),
        decomposition: decomposition.with_label(label),
        alice,
        assemblage,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SampleOutcome {
    /// `(r, ψ_n)` admits no pure complement.
    Rejected { reason: String },
    Evaluated {
        /// `∫_Ω μ(λ | context II) dλ`
        omega_mass: f64,
        /// `∫_Ω μ(λ|ψ_n) dλ`
        psi_mass: f64,
        /// `|⟨φ_n|ψ_n⟩|² − ∫_{Λ_{φ_n}} μ(λ|ψ_n) dλ`
        overlap_deficit: f64,
        /// Ω avoids the supports of both `φ_n` and `φ_n⊥`.
        disjoint: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub psi_bloch: [f64; 3],
    pub outcome: SampleOutcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The two preparations differ on a set Ω of ontic states that context I
    /// never reaches.
    OmegaGap {
        model: String,
        model_kind: ModelKind,
        r: f64,
        /// Chosen sample, if any was evaluated.
        best: Option<usize>,
        omega_mass: f64,
        psi_mass: f64,
        born: f64,
        omega_measure: f64,
        threshold: f64,
        samples: Vec<Sample>,
    },
    /// Contextuality taken from a structural argument, with the qubit
    /// contradiction on the two largest eigenvalues attached.
    Structural {
        assumption: String,
        restriction_q: String,
        restriction: FeasibilityReport<Rational>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessVerdict {
    Nonlocal,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonlocalityWitness {
    pub state: BipartiteState,
    pub schmidt_rank: usize,
    pub contexts: Vec<PreparedContext>,
    pub evidence: Evidence,
    pub verdict: WitnessVerdict,
}

pub const RANK2_SAMPLES: usize = 64;

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = dot3(&v, &v).sqrt();
    v.map(|x| x / n)
}

/// Candidate `ψ_n` directions: Fibonacci-grid azimuths on the cone of unit
/// vectors `u` for which `(s − r u)/(1 − r)` is also a unit vector.
fn candidate_directions(s: [f64; 3], r: f64) -> std::result::Result<Vec<[f64; 3]>, String> {
    let grid = OnticSpace::fibonacci(RANK2_SAMPLES).map_err(|e| e.to_string())?;
    let q = dot3(&s, &s).sqrt();
    if q < TOL.bloch {
        if (2.0 * r - 1.0).abs() > TOL.same_state {
            return Err(format!("a maximally mixed state has a pure two-member decomposition only at r = 1/2, not {r}"));
        }
        return Ok(grid.points().to_vec());
    }
    let n = s.map(|x| x / q);
    let c = (q * q + 2.0 * r - 1.0) / (2.0 * r * q);
    if c.abs() > 1.0 {
        return Err(format!("no pure complement exists for r = {r} at |s| = {q}"));
    }
    let (e1, e2) = equatorial_frame(n);
    let sin = (1.0 - c * c).max(0.0).sqrt();
    Ok(grid
        .points()
        .iter()
        .map(|p| {
            let theta = dot3(p, &e2).atan2(dot3(p, &e1));
            let (st, ct) = theta.sin_cos();
            unit([0, 1, 2].map(|k| c * n[k] + sin * (ct * e1[k] + st * e2[k])))
        })
        .collect())
}

/// Two-qubit witness from decompositions (I) `{φ_n, φ_n⊥}` and (II)
/// `{(r, ψ_n), (1 − r, χ_n)}` of Bob's reduced state, using the overlap
/// deficit of `model`.
pub fn witness_rank2(psi_ab: &BipartiteState, model: &OnticModel, r: f64) -> Result<NonlocalityWitness> {
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("r = {r} must lie strictly between 0 and 1"));
    }
    if psi_ab.dim_a() != 2 || psi_ab.dim_b() != 2 {
        return domain("witness_rank2 needs a two-qubit state");
    }
    let rank = schmidt(psi_ab).rank();
    if rank < 2 {
        return domain("product state: nothing to steer");
    }
    let rho_b = partial_trace_a(psi_ab);
    let s = density_to_bloch(&rho_b)?.components();
    let q = dot3(&s, &s).sqrt();
    let n = if q < TOL.bloch { [0.0, 0.0, 1.0] } else { s.map(|x| x / q) };
    let phi = PureState::from_bloch(&BlochVector::new(n)?)?;
    let phi_perp = phi.qubit_complement()?;
    let basis = [phi.clone(), phi_perp.clone()];

    let context_i = Decomposition::new(
        "I",
        rho_b.clone(),
        vec![
            Member {
                weight: (1.0 + q) / 2.0,
                state: phi.clone(),
            },
            Member {
                weight: (1.0 - q) / 2.0,
                state: phi_perp.clone(),
            },
        ],
    );
    let mut contexts = vec![prepare_context(psi_ab, "I", context_i)?];

    let threshold = 10.0 * onticmodel::noise_floor(model)?;
    let context_i_support = support(model, &phi)?.union(&support(model, &phi_perp)?);

    let evaluate = |u: [f64; 3]| -> Result<(Sample, Option<(Decomposition, f64)>)> {
        let chi = [0, 1, 2].map(|k| (s[k] - r * u[k]) / (1.0 - r));
        let chi_norm = dot3(&chi, &chi).sqrt();
        if (chi_norm - 1.0).abs() > TOL.same_state {
            let outcome = SampleOutcome::Rejected {
                reason: format!("complement has Bloch length {chi_norm}"),
            };
            return Ok((Sample { psi_bloch: u, outcome }, None));
        }
        let psi_n = PureState::from_bloch(&BlochVector::new(u)?)?;
        let chi_n = PureState::from_bloch(&BlochVector::new(unit(chi))?)?;
        let context_ii = Decomposition::new(
            "II",
            rho_b.clone(),
            vec![
                Member {
                    weight: r,
                    state: psi_n.clone(),
                },
                Member {
                    weight: 1.0 - r,
                    state: chi_n,
                },
            ],
        );
        let omega = find_omega(model, &phi, &psi_n, &basis)?;
        let disjoint = omega.set.intersection(&context_i_support).is_empty();
        let omega_mass = model.prepare_mixture(&context_ii)?.mass_on(&omega.set);
        let outcome = SampleOutcome::Evaluated {
            omega_mass,
            psi_mass: omega.checks.psi_mass,
            overlap_deficit: omega.checks.overlap_deficit,
            disjoint,
        };
        let measure = omega.set.measure();
        Ok((Sample { psi_bloch: u, outcome }, Some((context_ii, measure))))
    };

    let (samples, candidates): (Vec<Sample>, Vec<Option<(Decomposition, f64)>>) = match candidate_directions(s, r) {
        Err(reason) => (
            vec![Sample {
                psi_bloch: [f64::NAN; 3],
                outcome: SampleOutcome::Rejected { reason },
            }],
            vec![None],
        ),
        Ok(dirs) => dirs
            .into_par_iter()
            .map(evaluate)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
    };

    let best = samples
        .iter()
        .enumerate()
        .filter_map(|(i, smp)| match smp.outcome {
            SampleOutcome::Evaluated {
                omega_mass, disjoint, ..
            } if disjoint => Some((i, omega_mass)),
            _ => None,
        })
        .fold(None::<(usize, f64)>, |acc, (i, m)| match acc {
            Some((_, best)) if best >= m => acc,
            _ => Some((i, m)),
        });

    let (mut omega_mass, mut psi_mass, mut born, mut omega_measure) = (0.0, 0.0, 0.0, 0.0);
    if let Some((i, _)) = best {
        let (context_ii, measure) = candidates[i].clone().ok_or_else(|| Error::Invariant("missing context".into()))?;
        if let SampleOutcome::Evaluated {
            omega_mass: m, psi_mass: p, ..
        } = samples[i].outcome
        {
            omega_mass = m;
            psi_mass = p;
        }
        born = phi.overlap(&context_ii.members()[0].state);
        omega_measure = measure;
        contexts.push(prepare_context(psi_ab, "II", context_ii)?);
    }

    let steered = contexts.iter().all(|c| c.checks.passes());
    let verdict = if best.is_some() && omega_mass > threshold && steered {
        WitnessVerdict::Nonlocal
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(NonlocalityWitness {
        state: psi_ab.clone(),
        schmidt_rank: rank,
        contexts,
        evidence: Evidence::OmegaGap {
            model: model.name().to_string(),
            model_kind: model.kind(),
            r,
            best: best.map(|(i, _)| i),
            omega_mass,
            psi_mass,
            born,
            omega_measure,
            threshold,
            samples,
        },
        verdict,
    })
}

pub const RANK_GT2_ASSUMPTION: &str =
    "assumed per cited theorem: every pure state in dimension d >= 3 has a partner with an overlap deficit";

/// Witness for Schmidt rank `d ≥ 3` from preparation (α), the spectral
/// decomposition of Bob's state, and (β), a range decomposition with `d`
/// members whose first member is `psi1` (default: the uniform superposition
/// of Bob's Schmidt vectors).
pub fn witness_rank_gt2(psi_ab: &BipartiteState, psi1: Option<&PureState>) -> Result<NonlocalityWitness> {
    let sd = schmidt(psi_ab);
    let rank = sd.rank();
    if rank < 3 {
        return domain(format!(
            "Schmidt rank {rank} < 3: this reduces to the two-qubit case, use witness_rank2"
        ));
    }
    let rho_b = partial_trace_a(psi_ab);
    let psi1 = match psi1 {
        Some(p) => p.clone(),
        None => {
            let sum = sd
                .basis_b
                .iter()
                .fold(CVector::zeros(psi_ab.dim_b()), |acc, b| acc + b.vector());
            PureState::normalized(sum)?
        }
    };
    let alpha = spectral_decomposition(&rho_b)?;
    let beta = range_decomposition(&rho_b, &psi1, rank)?;
    let contexts = vec![
        prepare_context(psi_ab, "alpha", alpha)?,
        prepare_context(psi_ab, "beta", beta)?,
    ];

    let p1 = sd.coefficients[0].powi(2);
    let p2 = sd.coefficients[1].powi(2);
    let q = rational_from_f64((p1 - p2) / (p1 + p2))
        .ok_or_else(|| Error::Invariant("non-finite restriction parameter".into()))?;
    let restriction = pncheck::check(&build_lemma1_instance(q.clone(), 0.0)?);

    let steered = contexts.iter().all(|c| c.checks.passes());
    let verdict = if restriction.verdict == Verdict::Contextual && steered {
        WitnessVerdict::Nonlocal
    } else {
        WitnessVerdict::Inconclusive
    };
    Ok(NonlocalityWitness {
        state: psi_ab.clone(),
        schmidt_rank: rank,
        contexts,
        evidence: Evidence::Structural {
            assumption: RANK_GT2_ASSUMPTION.into(),
            restriction_q: crate::scalar::format_rational(&q),
            restriction,
        },
        verdict,
    })
}
