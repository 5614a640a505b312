//! Preparation-noncontextuality feasibility engine.
//!
//! A preparation-noncontextual model assigns to every ontic point λ in the
//! support of ρ a value `v = μ(λ|ρ) > 0` and nonnegative values `m_j =
//! μ(λ|ψ_j)` for the member states, subject to
//!
//! * `Σ_j w_ij m_j = v` for every decomposition `i` of ρ, and
//! * `m_i m_j = 0` for every orthogonal pair.
//!
//! The engine enumerates the `2^k` ways of zeroing one member of each of the
//! `k` orthogonal pairs and decides each resulting linear system with `v = 1`
//! (the system is homogeneous, so this loses nothing). A branch is
//! infeasible exactly when a Farkas vector exists; every branch carries
//! either such a vector or a feasible point, and both replay without the
//! solver.
//!
//! **Reading the verdict.** The analysis is pointwise. [`Verdict::Contextual`]
//! is a proof that no preparation-noncontextual model reproduces the
//! decompositions. [`Verdict::NotDecided`] only says that this pointwise
//! argument finds no contradiction; it does not establish noncontextuality.

mod explain;
pub mod simplex;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::ser::Serializer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::ensembles::{
    exact_lemma1_geometry, lemma1_states, six_decompositions_with_phase, validate, Decomposition,
    LEMMA1_LABELS,
};
use crate::error::{domain, Error, Result};
use crate::exact::ExactQubitGeometry;
use crate::qstate::{BlochVector, PureState, TOL};
use crate::scalar::{rational_from_f64, Scalar};

pub use explain::explain;
pub use simplex::{LpOutcome, Pivot};

/// Arithmetic used to decide the branch systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Arithmetic {
    Exact,
    Float { eps: f64 },
}

/// How an instance was built; drives case labels in explanations.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    Lemma1 { q: Value, n_hat: [f64; 3], phase: f64 },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledState {
    pub label: String,
    pub state: PureState,
}

/// One decomposition as `(state index, weight)` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemContext<W> {
    pub label: String,
    pub terms: Vec<(usize, W)>,
}

/// The combinatorial content of an instance: labels, orthogonal pairs and
/// weighted contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct PncSystem<W> {
    pub labels: Vec<String>,
    pub pairs: Vec<(usize, usize)>,
    pub contexts: Vec<SystemContext<W>>,
}

pub const MAX_PAIRS: usize = 16;

impl<W: Scalar> PncSystem<W> {
    pub fn new(labels: Vec<String>, pairs: Vec<(usize, usize)>, contexts: Vec<SystemContext<W>>) -> Result<Self> {
        let n = labels.len();
        if pairs.len() > MAX_PAIRS {
            return domain(format!("{} orthogonal pairs exceed the limit of {MAX_PAIRS}", pairs.len()));
        }
        for &(i, j) in &pairs {
            if i >= n || j >= n || i == j {
                return domain(format!("invalid orthogonal pair ({i}, {j})"));
            }
        }
        for c in &contexts {
            for (j, w) in &c.terms {
                if *j >= n {
                    return domain(format!("context {} refers to state {j}", c.label));
                }
                if *w < W::zero() {
                    return domain(format!("context {} has a negative weight", c.label));
                }
            }
        }
        Ok(Self { labels, pairs, contexts })
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// Subsystem keeping only the listed contexts.
    pub fn restrict(&self, contexts: &[usize]) -> Self {
        Self {
            labels: self.labels.clone(),
            pairs: self.pairs.clone(),
            contexts: contexts.iter().map(|&i| self.contexts[i].clone()).collect(),
        }
    }

    /// States zeroed by branch `pattern`: bit `p` selects the second member
    /// of pair `p`, otherwise the first.
    pub fn zeroed(&self, pattern: u64) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .pairs
            .iter()
            .enumerate()
            .map(|(p, &(a, b))| if pattern >> p & 1 == 1 { b } else { a })
            .collect();
        set.into_iter().collect()
    }

    pub fn num_branches(&self) -> u64 {
        1u64 << self.pairs.len()
    }

    /// Constraint matrix over the free states of a branch, restricted to
    /// `contexts`. Right-hand side is all ones.
    pub fn branch_matrix(&self, free: &[usize], contexts: &[usize]) -> Vec<Vec<W>> {
        contexts
            .iter()
            .map(|&i| {
                let mut row = vec![W::zero(); free.len()];
                for (j, w) in &self.contexts[i].terms {
                    if let Ok(col) = free.binary_search(j) {
                        row[col] = row[col].clone() + w.clone();
                    }
                }
                row
            })
            .collect()
    }

    fn free(&self, zeroed: &[usize]) -> Vec<usize> {
        (0..self.num_states()).filter(|j| zeroed.binary_search(j).is_err()).collect()
    }

    fn feasible(&self, free: &[usize], contexts: &[usize], eps: &W) -> bool {
        let a = self.branch_matrix(free, contexts);
        let b = vec![W::one(); contexts.len()];
        matches!(simplex::solve(&a, &b, eps).outcome, LpOutcome::Feasible { .. })
    }

    /// `true` when every branch is infeasible; stops at the first feasible branch.
    pub fn is_contextual(&self, eps: &W) -> bool {
        let all: Vec<usize> = (0..self.contexts.len()).collect();
        (0..self.num_branches())
            .into_par_iter()
            .all(|p| !self.feasible(&self.free(&self.zeroed(p)), &all, eps))
    }
}

/// A family of decompositions of one density operator over a shared set of
/// labeled pure states.
#[derive(Debug, Clone)]
pub struct PncInstance<W = crate::Rational> {
    states: Vec<LabeledState>,
    orthogonal_pairs: Vec<(usize, usize)>,
    decompositions: Vec<Decomposition<W>>,
    arithmetic: Arithmetic,
    origin: Origin,
    exact_geometry: Option<ExactQubitGeometry>,
    system: PncSystem<W>,
}

impl<W: Scalar> PncInstance<W> {
    /// Validates pairs, decompositions and their common target, and indexes
    /// every member against `states` (up to global phase).
    pub fn new(
        states: Vec<LabeledState>,
        orthogonal_pairs: Vec<(usize, usize)>,
        decompositions: Vec<Decomposition<W>>,
        arithmetic: Arithmetic,
    ) -> Result<Self> {
        match arithmetic {
            Arithmetic::Exact if !W::EXACT => return domain("exact arithmetic needs an exact scalar"),
            Arithmetic::Float { .. } if W::EXACT => return domain("float arithmetic needs a float scalar"),
            Arithmetic::Float { eps } if !(eps >= 0.0) => return domain("eps must be nonnegative"),
            _ => {}
        }
        if decompositions.is_empty() {
            return domain("an instance needs at least one decomposition");
        }
        let target = decompositions[0].target().clone();
        let mut contexts = Vec::with_capacity(decompositions.len());
        for d in &decompositions {
            if d.target().distance(&target) > TOL.same_state {
                return domain(format!("decomposition {} has a different target", d.label()));
            }
            if let Some(v) = validate(d).into_iter().next() {
                return domain(format!("decomposition {}: {v:?}", d.label()));
            }
            let terms = d
                .members()
                .iter()
                .map(|m| {
                    states
                        .iter()
                        .position(|s| s.state.same_ray(&m.state))
                        .map(|j| (j, m.weight.clone()))
                        .ok_or_else(|| Error::Domain(format!("member of {} is not a listed state", d.label())))
                })
                .collect::<Result<Vec<_>>>()?;
            contexts.push(SystemContext {
                label: d.label().to_string(),
                terms,
            });
        }
        for &(i, j) in &orthogonal_pairs {
            if i < states.len() && j < states.len() && states[i].state.overlap(&states[j].state) >= TOL.orthogonal {
                return domain(format!("states {i} and {j} are not orthogonal"));
            }
        }
        let labels = states.iter().map(|s| s.label.clone()).collect();
        let system = PncSystem::new(labels, orthogonal_pairs.clone(), contexts)?;
        Ok(Self {
            states,
            orthogonal_pairs,
            decompositions,
            arithmetic,
            origin: Origin::Custom,
            exact_geometry: None,
            system,
        })
    }

    /// Attaches exact Bloch data, checked exactly against the pairs and the
    /// decompositions.
    pub fn with_exact_geometry(mut self, geometry: ExactQubitGeometry) -> Result<Self> {
        if geometry.states.len() != self.states.len() {
            return domain("exact geometry does not match the state list");
        }
        if !(0..self.states.len()).all(|i| geometry.is_pure(i)) {
            return domain("exact geometry has a mixed state");
        }
        if !self.orthogonal_pairs.iter().all(|&(i, j)| geometry.orthogonal(i, j)) {
            return domain("an orthogonal pair is not exactly orthogonal");
        }
        for c in &self.system.contexts {
            let terms: Option<Vec<_>> = c
                .terms
                .iter()
                .map(|(j, w)| w.to_rational().map(|r| (*j, r)))
                .collect();
            if !terms.is_some_and(|t| geometry.mixes_to_target(&t)) {
                return domain(format!("decomposition {} does not mix exactly to the target", c.label));
            }
        }
        self.exact_geometry = Some(geometry);
        Ok(self)
    }

    /// Switches the float tolerance; exact instances stay exact.
    pub fn with_arithmetic(mut self, arithmetic: Arithmetic) -> Result<Self> {
        match arithmetic {
            Arithmetic::Exact if !W::EXACT => return domain("exact arithmetic needs an exact scalar"),
            Arithmetic::Float { .. } if W::EXACT => return domain("float arithmetic needs a float scalar"),
            Arithmetic::Float { eps } if !(eps >= 0.0) => return domain("eps must be nonnegative"),
            _ => {}
        }
        self.arithmetic = arithmetic;
        Ok(self)
    }

    /// Keeps only the listed decompositions.
    pub fn restrict(&self, decompositions: &[usize]) -> Result<Self> {
        if decompositions.is_empty() || decompositions.iter().any(|&i| i >= self.decompositions.len()) {
            return domain("invalid decomposition subset");
        }
        let mut out = self.clone();
        out.decompositions = decompositions.iter().map(|&i| self.decompositions[i].clone()).collect();
        out.system = self.system.restrict(decompositions);
        Ok(out)
    }

    pub fn states(&self) -> &[LabeledState] {
        &self.states
    }

    pub fn orthogonal_pairs(&self) -> &[(usize, usize)] {
        &self.orthogonal_pairs
    }

    pub fn decompositions(&self) -> &[Decomposition<W>] {
        &self.decompositions
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn exact_geometry(&self) -> Option<&ExactQubitGeometry> {
        self.exact_geometry.as_ref()
    }

    pub fn system(&self) -> &PncSystem<W> {
        &self.system
    }

    pub fn eps(&self) -> W {
        match self.arithmetic {
            Arithmetic::Exact => W::zero(),
            Arithmetic::Float { eps } => rational_from_f64(eps).map_or_else(W::zero, |r| W::from_rational(&r)),
        }
    }

    fn is_lemma1(&self) -> bool {
        matches!(self.origin, Origin::Lemma1 { .. }) && self.system.contexts.len() == 6
    }
}

/// The eight-state, six-decomposition qubit instance for `ρ_n = ½(I + q n̂·σ)`.
///
/// Exact arithmetic is used for exact scalars, float arithmetic with
/// `ε = 1e-9` otherwise. With `n̂` on a coordinate axis and zero phase the
/// geometry is also verified exactly.
pub fn build_lemma1_instance_with<W: Scalar>(q: W, n_hat: &BlochVector, phase: f64) -> Result<PncInstance<W>> {
    let decompositions = six_decompositions_with_phase(q.clone(), n_hat, phase)?;
    let states = lemma1_states(n_hat, phase)?
        .into_iter()
        .zip(LEMMA1_LABELS)
        .map(|(state, label)| LabeledState {
            label: label.to_string(),
            state,
        })
        .collect();
    let arithmetic = if W::EXACT {
        Arithmetic::Exact
    } else {
        Arithmetic::Float { eps: 1e-9 }
    };
    let mut instance = PncInstance::new(states, vec![(0, 1), (2, 3), (4, 5), (6, 7)], decompositions, arithmetic)?;
    if W::EXACT {
        if let Some(g) = q.to_rational().and_then(|r| exact_lemma1_geometry(&r, n_hat, phase)) {
            instance = instance.with_exact_geometry(g)?;
        }
    }
    instance.origin = Origin::Lemma1 {
        q: q.to_json(),
        n_hat: n_hat.unit(),
        phase,
    };
    Ok(instance)
}

/// [`build_lemma1_instance_with`] about `n̂ = ẑ`.
pub fn build_lemma1_instance<W: Scalar>(q: W, phase: f64) -> Result<PncInstance<W>> {
    build_lemma1_instance_with(q, &BlochVector::new([0.0, 0.0, 1.0])?, phase)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Contextual,
    NotDecided,
}

/// How a minimal infeasible set of decompositions contradicts `v > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Route {
    /// One decomposition has no free member of positive weight, forcing `v = 0`.
    VanishingMixture { context: usize },
    /// Two decompositions force incompatible values on shared members.
    ForcedEquality { contexts: [usize; 2] },
    /// A larger irreducible set of decompositions.
    Combination { contexts: Vec<usize> },
}

/// Infeasibility proof of one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivation<W> {
    /// Irreducible infeasible set of decompositions.
    pub core: Vec<usize>,
    pub route: Route,
    /// Farkas vector over all decompositions (zero outside the core).
    pub farkas: Vec<W>,
    /// Pivots of the phase-one tableau on the core system.
    pub pivots: Vec<Pivot>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BranchStatus<W> {
    Infeasible(Derivation<W>),
    /// Values `m_j` for every state (zero on zeroed states) with `v = 1`.
    Feasible { witness: Vec<W> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchCertificate<W> {
    pub pattern: u64,
    pub zeroed: Vec<usize>,
    pub status: BranchStatus<W>,
    /// Case letter of the eight-state qubit instance.
    pub case: Option<char>,
}

impl<W> BranchCertificate<W> {
    pub fn is_infeasible(&self) -> bool {
        matches!(self.status, BranchStatus::Infeasible(_))
    }
}

#[derive(Debug, Clone)]
pub struct FeasibilityReport<W> {
    pub verdict: Verdict,
    pub branches: Vec<BranchCertificate<W>>,
    pub arithmetic: Arithmetic,
    pub origin: Origin,
    pub system: PncSystem<W>,
    pub exact_geometry: bool,
}

fn route_of<W: Scalar>(core: &[usize]) -> Route {
    match core {
        [c] => Route::VanishingMixture { context: *c },
        [a, b] => Route::ForcedEquality { contexts: [*a, *b] },
        _ => Route::Combination { contexts: core.to_vec() },
    }
}

/// Smallest infeasible set of at most two contexts if one exists, otherwise
/// an irreducible set found by deletion.
fn infeasible_core<W: Scalar>(system: &PncSystem<W>, free: &[usize], eps: &W) -> Vec<usize> {
    let n = system.contexts.len();
    for i in 0..n {
        if !system.feasible(free, &[i], eps) {
            return vec![i];
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !system.feasible(free, &[i, j], eps) {
                return vec![i, j];
            }
        }
    }
    let mut core: Vec<usize> = (0..n).collect();
    let mut k = 0;
    while k < core.len() {
        let mut trial = core.clone();
        trial.remove(k);
        if !trial.is_empty() && !system.feasible(free, &trial, eps) {
            core = trial;
        } else {
            k += 1;
        }
    }
    core
}

fn lemma1_case(pattern: u64) -> char {
    let perps = (1..4).filter(|p| pattern >> p & 1 == 1).count() as u8;
    let base = if pattern & 1 == 0 { b'a' } else { b'e' };
    (base + perps) as char
}

fn check_branch<W: Scalar>(system: &PncSystem<W>, pattern: u64, eps: &W, lemma1: bool) -> BranchCertificate<W> {
    let zeroed = system.zeroed(pattern);
    let free = system.free(&zeroed);
    let all: Vec<usize> = (0..system.contexts.len()).collect();
    let a = system.branch_matrix(&free, &all);
    let b = vec![W::one(); all.len()];
    let status = match simplex::solve(&a, &b, eps).outcome {
        LpOutcome::Feasible { x } => {
            let mut witness = vec![W::zero(); system.num_states()];
            for (col, &j) in free.iter().enumerate() {
                witness[j] = x[col].clone();
            }
            BranchStatus::Feasible { witness }
        }
        LpOutcome::Infeasible { .. } => {
            let core = infeasible_core(system, &free, eps);
            let a_core = system.branch_matrix(&free, &core);
            let b_core = vec![W::one(); core.len()];
            let sol = simplex::solve(&a_core, &b_core, eps);
            let LpOutcome::Infeasible { farkas: y } = sol.outcome else {
                unreachable!("core is infeasible by construction")
            };
            let mut farkas = vec![W::zero(); all.len()];
            for (k, &i) in core.iter().enumerate() {
                farkas[i] = y[k].clone();
            }
            BranchStatus::Infeasible(Derivation {
                route: route_of::<W>(&core),
                core,
                farkas,
                pivots: sol.pivots,
            })
        }
    };
    BranchCertificate {
        pattern,
        zeroed,
        status,
        case: lemma1.then(|| lemma1_case(pattern)),
    }
}

/// Decides every branch of a bare system.
pub fn check_system<W: Scalar>(system: &PncSystem<W>, arithmetic: Arithmetic, eps: &W) -> FeasibilityReport<W> {
    let branches: Vec<_> = (0..system.num_branches())
        .into_par_iter()
        .map(|p| check_branch(system, p, eps, false))
        .collect();
    report(system.clone(), branches, arithmetic, Origin::Custom, false)
}

fn report<W: Scalar>(
    system: PncSystem<W>,
    branches: Vec<BranchCertificate<W>>,
    arithmetic: Arithmetic,
    origin: Origin,
    exact_geometry: bool,
) -> FeasibilityReport<W> {
    let verdict = if branches.iter().all(BranchCertificate::is_infeasible) {
        Verdict::Contextual
    } else {
        Verdict::NotDecided
    };
    FeasibilityReport {
        verdict,
        branches,
        arithmetic,
        origin,
        system,
        exact_geometry,
    }
}

/// Decides every branch of `instance`.
pub fn check<W: Scalar>(instance: &PncInstance<W>) -> FeasibilityReport<W> {
    let eps = instance.eps();
    let lemma1 = instance.is_lemma1();
    let system = &instance.system;
    let branches: Vec<_> = (0..system.num_branches())
        .into_par_iter()
        .map(|p| check_branch(system, p, &eps, lemma1))
        .collect();
    report(
        system.clone(),
        branches,
        instance.arithmetic,
        instance.origin.clone(),
        instance.exact_geometry.is_some(),
    )
}

/// All inclusion-minimal sets of decompositions that are still contextual.
pub fn minimal_contradiction<W: Scalar>(instance: &PncInstance<W>) -> Result<Vec<Vec<usize>>> {
    let eps = instance.eps();
    let system = &instance.system;
    let n = system.contexts.len();
    if n > 16 {
        return domain(format!("{n} decompositions are too many to search exhaustively"));
    }
    if !system.is_contextual(&eps) {
        return Err(Error::State("instance is not contextual".into()));
    }
    let mut subsets: Vec<u32> = (1..1u32 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut minimal: Vec<u32> = Vec::new();
    for s in subsets {
        if minimal.iter().any(|m| s & m == *m) {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        if system.restrict(&idx).is_contextual(&eps) {
            minimal.push(s);
        }
    }
    Ok(minimal
        .into_iter()
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect())
}

/// A certificate that failed independent replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayFailure {
    pub pattern: u64,
    pub reason: String,
}

/// Re-checks every certificate against the constraints without the solver:
/// Farkas vectors and witnesses by substitution, pivot logs by re-execution.
pub fn replay<W: Scalar>(report: &FeasibilityReport<W>, eps: &W) -> Vec<ReplayFailure> {
    let system = &report.system;
    let all: Vec<usize> = (0..system.contexts.len()).collect();
    let b = vec![W::one(); all.len()];
    let mut failures = Vec::new();
    for (expected, branch) in report.branches.iter().enumerate() {
        let fail = |reason: &str| ReplayFailure {
            pattern: branch.pattern,
            reason: reason.to_string(),
        };
        if branch.pattern != expected as u64 || branch.zeroed != system.zeroed(branch.pattern) {
            failures.push(fail("branch pattern out of canonical order"));
            continue;
        }
        let free = system.free(&branch.zeroed);
        let a = system.branch_matrix(&free, &all);
        match &branch.status {
            BranchStatus::Feasible { witness } => {
                if branch.zeroed.iter().any(|&j| !witness[j].is_zero_tol(eps)) {
                    failures.push(fail("witness is nonzero on a zeroed state"));
                }
                let x: Vec<W> = free.iter().map(|&j| witness[j].clone()).collect();
                if !simplex::is_solution(&a, &b, &x, eps) {
                    failures.push(fail("witness violates a constraint"));
                }
            }
            BranchStatus::Infeasible(d) => {
                if !simplex::is_farkas_certificate(&a, &b, &d.farkas, eps) {
                    failures.push(fail("Farkas vector does not certify infeasibility"));
                }
                if d.farkas
                    .iter()
                    .enumerate()
                    .any(|(i, y)| !d.core.contains(&i) && !y.is_zero_tol(eps))
                {
                    failures.push(fail("Farkas vector is supported outside the core"));
                }
                let a_core = system.branch_matrix(&free, &d.core);
                let b_core = vec![W::one(); d.core.len()];
                let y_core: Vec<W> = d.core.iter().map(|&i| d.farkas[i].clone()).collect();
                match simplex::replay_pivots(&a_core, &b_core, &d.pivots, eps) {
                    Some(LpOutcome::Infeasible { farkas }) if farkas == y_core => {}
                    _ => failures.push(fail("pivot log does not reproduce the Farkas vector")),
                }
            }
        }
    }
    if (report.verdict == Verdict::Contextual) != report.branches.iter().all(BranchCertificate::is_infeasible) {
        failures.push(ReplayFailure {
            pattern: u64::MAX,
            reason: "verdict disagrees with branch statuses".into(),
        });
    }
    failures
}

impl<W: Scalar> FeasibilityReport<W> {
    pub fn infeasible_count(&self) -> usize {
        self.branches.iter().filter(|b| b.is_infeasible()).count()
    }

    pub fn branch(&self, pattern: u64) -> Option<&BranchCertificate<W>> {
        self.branches.get(pattern as usize)
    }

    pub fn to_json(&self) -> Value {
        let s = &self.system;
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|b| {
                let zeroed: Vec<&str> = b.zeroed.iter().map(|&j| s.labels[j].as_str()).collect();
                let mut v = json!({ "pattern": b.pattern, "zeroed": zeroed });
                if let Some(c) = b.case {
                    v["case"] = json!(c.to_string());
                }
                match &b.status {
                    BranchStatus::Feasible { witness } => {
                        v["status"] = json!("feasible");
                        v["witness"] = Value::Array(witness.iter().map(Scalar::to_json).collect());
                    }
                    BranchStatus::Infeasible(d) => {
                        v["status"] = json!("infeasible");
                        v["core"] = json!(d.core);
                        v["route"] = serde_json::to_value(&d.route).unwrap_or(Value::Null);
                        v["farkas"] = Value::Array(d.farkas.iter().map(Scalar::to_json).collect());
                        v["pivots"] = json!(d.pivots.iter().map(|p| [p.row, p.col]).collect::<Vec<_>>());
                    }
                }
                v
            })
            .collect();
        let contexts: Vec<Value> = s
            .contexts
            .iter()
            .map(|c| {
                json!({
                    "label": c.label,
                    "terms": c.terms.iter().map(|(j, w)| json!([j, w.to_json()])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "verdict": self.verdict,
            "infeasible_branches": self.infeasible_count(),
            "total_branches": self.branches.len(),
            "branches": branches,
            "instance": {
                "states": s.labels,
                "orthogonal_pairs": s.pairs,
                "decompositions": contexts,
                "arithmetic": self.arithmetic,
                "origin": self.origin,
                "exact_geometry": self.exact_geometry,
            },
        })
    }
}

impl<W: Scalar> Serialize for FeasibilityReport<W> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

#[cfg(test)]
mod tests;
