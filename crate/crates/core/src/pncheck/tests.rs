use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::Rational;

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Feasibility of `A x = 1, x ≥ 0` by enumerating basic solutions.
fn oracle_feasible(a: &[Vec<Rational>]) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return true;
    }
    for mask in 0u32..1 << n {
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        if cols.len() > m {
            continue;
        }
        // Gauss–Jordan on [A_S | 1]
        let mut t: Vec<Vec<Rational>> = a
            .iter()
            .map(|row| {
                let mut v: Vec<Rational> = cols.iter().map(|&j| row[j].clone()).collect();
                v.push(r(1, 1));
                v
            })
            .collect();
        let k = cols.len();
        let mut pivot_row = 0;
        let mut full_rank = true;
        for c in 0..k {
            let Some(p) = (pivot_row..m).find(|&i| !t[i][c].is_zero()) else {
                full_rank = false;
                break;
            };
            t.swap(pivot_row, p);
            let inv = r(1, 1) / t[pivot_row][c].clone();
            for v in t[pivot_row].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for i in 0..m {
                if i != pivot_row && !t[i][c].is_zero() {
                    let f = t[i][c].clone();
                    let prow = t[pivot_row].clone();
                    for (v, p) in t[i].iter_mut().zip(prow) {
                        *v = v.clone() - f.clone() * p;
                    }
                }
            }
            pivot_row += 1;
        }
        if !full_rank {
            continue;
        }
        let consistent = (k..m).all(|i| t[i][k].is_zero());
        let nonneg = (0..k).all(|i| t[i][k] >= r(0, 1));
        if consistent && nonneg {
            return true;
        }
    }
    false
}

fn oracle_branch_feasible(system: &PncSystem<Rational>, pattern: u64) -> bool {
    let zeroed = system.zeroed(pattern);
    let free = system.free(&zeroed);
    let all: Vec<usize> = (0..system.contexts.len()).collect();
    oracle_feasible(&system.branch_matrix(&free, &all))
}

fn lemma1(q: Rational) -> PncInstance<Rational> {
    build_lemma1_instance(q, 0.0).unwrap()
}

#[test]
fn half_is_contextual_with_sixteen_infeasible_branches() {
    let inst = lemma1(r(1, 2));
    assert_eq!(inst.states().len(), 8);
    assert_eq!(inst.orthogonal_pairs().len(), 4);
    assert_eq!(inst.decompositions().len(), 6);
    assert!(inst.exact_geometry().is_some());
    let rep = check(&inst);
    assert_eq!(rep.verdict, Verdict::Contextual);
    assert_eq!(rep.branches.len(), 16);
    assert_eq!(rep.infeasible_count(), 16);
    assert!(replay(&rep, &r(0, 1)).is_empty());
    for p in 0..16 {
        assert!(!oracle_branch_feasible(&rep.system, p));
    }
}

#[test]
fn every_mixedness_is_contextual() {
    for q in [r(0, 1), r(1, 10), r(9, 10), r(999, 1000)] {
        let rep = check(&lemma1(q.clone()));
        assert_eq!(rep.verdict, Verdict::Contextual, "q = {q}");
        assert!(replay(&rep, &r(0, 1)).is_empty());
    }
    assert!(build_lemma1_instance(r(1, 1), 0.0).is_err());
    assert!(build_lemma1_instance(r(-1, 5), 0.0).is_err());
}

#[test]
fn case_letters_and_routes() {
    let rep = check(&lemma1(r(1, 2)));
    let a = rep.branch(0).unwrap();
    assert_eq!(a.case, Some('a'));
    assert_eq!(a.zeroed, vec![0, 2, 4, 6]);
    let BranchStatus::Infeasible(d) = &a.status else { panic!() };
    assert_eq!(d.route, Route::VanishingMixture { context: 4 });

    let h = rep.branch(15).unwrap();
    assert_eq!(h.case, Some('h'));
    assert_eq!(h.zeroed, vec![1, 3, 5, 7]);
    let BranchStatus::Infeasible(d) = &h.status else { panic!() };
    assert_eq!(d.route, Route::ForcedEquality { contexts: [0, 5] });

    let letters: Vec<char> = rep.branches.iter().map(|b| b.case.unwrap()).collect();
    assert_eq!(letters.iter().filter(|&&c| c == 'b').count(), 3);
    assert_eq!(letters.iter().filter(|&&c| c == 'h').count(), 1);

    // at q = 0 the sixth decomposition alone already vanishes on branch (h)
    let rep = check(&lemma1(r(0, 1)));
    let BranchStatus::Infeasible(d) = &rep.branch(15).unwrap().status else { panic!() };
    assert_eq!(d.core, vec![5]);
    // the forced-equality subsystem is still contradictory on its own
    let sub = lemma1(r(0, 1)).restrict(&[0, 5]).unwrap();
    assert!(check(&sub).branch(15).unwrap().is_infeasible());
}

#[test]
fn two_decompositions_are_not_decided() {
    let inst = lemma1(r(1, 2)).restrict(&[0, 1]).unwrap();
    let rep = check(&inst);
    assert_eq!(rep.verdict, Verdict::NotDecided);
    assert!(replay(&rep, &r(0, 1)).is_empty());
    for b in &rep.branches {
        assert_eq!(!b.is_infeasible(), oracle_branch_feasible(&rep.system, b.pattern));
    }
}

#[test]
fn single_decomposition_has_trivial_witness() {
    let inst = lemma1(r(1, 2)).restrict(&[0]).unwrap();
    let rep = check(&inst);
    assert_eq!(rep.verdict, Verdict::NotDecided);
    let BranchStatus::Feasible { witness } = &rep.branch(1).unwrap().status else { panic!() };
    // φ_n⊥ zeroed: (3/4) m_φ = 1
    assert_eq!(witness[0], r(4, 3));
    assert!(minimal_contradiction(&inst).is_err());
}

#[test]
fn minimal_families_match_exhaustive_recheck() {
    let inst = lemma1(r(1, 2));
    let minimal = minimal_contradiction(&inst).unwrap();
    assert!(!minimal.is_empty());
    let contextual = |s: &[usize]| check(&inst.restrict(s).unwrap()).verdict == Verdict::Contextual;
    for m in &minimal {
        assert!(contextual(m));
        for drop in 0..m.len() {
            let mut sub = m.clone();
            sub.remove(drop);
            assert!(sub.is_empty() || !contextual(&sub));
        }
    }
    for mask in 1u32..64 {
        let s: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
        let covered = minimal.iter().any(|m| m.iter().all(|i| s.contains(i)));
        assert_eq!(contextual(&s), covered, "{s:?}");
    }
}

#[test]
fn duplicates_never_appear_together() {
    let inst = lemma1(r(1, 3));
    let mut decomps = inst.decompositions().to_vec();
    decomps.push(decomps[4].clone().with_label("copy of (5)"));
    let dup = PncInstance::new(inst.states().to_vec(), inst.orthogonal_pairs().to_vec(), decomps, Arithmetic::Exact)
        .unwrap();
    for m in minimal_contradiction(&dup).unwrap() {
        assert!(!(m.contains(&4) && m.contains(&6)), "{m:?}");
    }
}

#[test]
fn float_mode_agrees_on_fixtures() {
    for k in 0..10 {
        let exact = check(&lemma1(r(k, 10)));
        let float = check(&build_lemma1_instance(k as f64 / 10.0, 0.0).unwrap());
        assert_eq!(exact.verdict, float.verdict);
        assert!(replay(&float, &1e-9).is_empty());
    }
    let exact = check(&lemma1(r(1, 2)).restrict(&[0, 1]).unwrap());
    let float = check(&build_lemma1_instance(0.5, 0.0).unwrap().restrict(&[0, 1]).unwrap());
    assert_eq!(exact.verdict, float.verdict);
}

#[test]
fn phase_and_axis_keep_verdict() {
    let tilted = BlochVector::new([0.6, 0.0, 0.8]).unwrap();
    let inst = build_lemma1_instance_with(r(1, 2), &tilted, 0.7).unwrap();
    assert!(inst.exact_geometry().is_none());
    assert_eq!(check(&inst).verdict, Verdict::Contextual);
    let x = BlochVector::new([-1.0, 0.0, 0.0]).unwrap();
    assert!(build_lemma1_instance_with(r(1, 4), &x, 0.0).unwrap().exact_geometry().is_some());
}

#[test]
fn mismatched_targets_are_rejected() {
    let a = lemma1(r(1, 2));
    let b = lemma1(r(1, 3));
    let decomps = vec![a.decompositions()[0].clone(), b.decompositions()[1].clone()];
    let err = PncInstance::new(a.states().to_vec(), a.orthogonal_pairs().to_vec(), decomps, Arithmetic::Exact);
    assert!(matches!(err, Err(Error::Domain(_))));
}

#[test]
fn explanation_names_cases() {
    let text = explain(&check(&lemma1(r(1, 2))));
    assert!(text.contains("case (a)"));
    assert!(text.contains("case (h)"));
    assert!(text.contains("v = 0"));
    assert!(text.lines().last().unwrap().starts_with("contextual"));
}

#[test]
fn report_json_has_echo() {
    let v = check(&lemma1(r(1, 2))).to_json();
    assert_eq!(v["verdict"], "Contextual");
    assert_eq!(v["instance"]["decompositions"][0]["terms"][1][1], "3/4");
    assert_eq!(v["branches"].as_array().unwrap().len(), 16);
}

fn arb_system() -> impl Strategy<Value = PncSystem<Rational>> {
    (2usize..=7, 0usize..=3, 1usize..=5).prop_flat_map(|(n, k, c)| {
        let k = k.min(n / 2);
        let context = prop::collection::vec((0..n, 1i64..=6), 1..=n);
        prop::collection::vec(context, c).prop_map(move |raw| {
            let contexts = raw
                .into_iter()
                .enumerate()
                .map(|(i, terms)| {
                    let total: i64 = terms.iter().map(|(_, w)| w).sum();
                    SystemContext {
                        label: format!("D{i}"),
                        terms: terms.into_iter().map(|(j, w)| (j, r(w, total))).collect(),
                    }
                })
                .collect();
            let labels = (0..n).map(|j| format!("s{j}")).collect();
            let pairs = (0..k).map(|p| (2 * p, 2 * p + 1)).collect();
            PncSystem::new(labels, pairs, contexts).unwrap()
        })
    })
}

fn to_float(s: &PncSystem<Rational>) -> PncSystem<f64> {
    PncSystem {
        labels: s.labels.clone(),
        pairs: s.pairs.clone(),
        contexts: s
            .contexts
            .iter()
            .map(|c| SystemContext {
                label: c.label.clone(),
                terms: c.terms.iter().map(|(j, w)| (*j, w.to_f64())).collect(),
            })
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_replay_and_match_oracle(system in arb_system()) {
        let rep = check_system(&system, Arithmetic::Exact, &r(0, 1));
        prop_assert!(replay(&rep, &r(0, 1)).is_empty());
        for b in &rep.branches {
            prop_assert_eq!(!b.is_infeasible(), oracle_branch_feasible(&system, b.pattern));
        }
    }

    #[test]
    fn verdict_is_scale_invariant(system in arb_system(), p in 1i64..20, q in 1i64..20, which in 0usize..5) {
        let base = check_system(&system, Arithmetic::Exact, &r(0, 1)).verdict;
        let c = r(p, q);
        // common scaling of every weight (rescales v)
        let mut scaled = system.clone();
        for ctx in &mut scaled.contexts {
            for t in &mut ctx.terms {
                t.1 = t.1.clone() * c.clone();
            }
        }
        prop_assert_eq!(check_system(&scaled, Arithmetic::Exact, &r(0, 1)).verdict, base);
        // one decomposition scaled, then renormalized
        let mut renorm = system.clone();
        let i = which % renorm.contexts.len();
        let total = renorm.contexts[i].terms.iter().fold(r(0, 1), |acc, t| acc + t.1.clone() * c.clone());
        for t in &mut renorm.contexts[i].terms {
            t.1 = t.1.clone() * c.clone() / total.clone();
        }
        prop_assert_eq!(check_system(&renorm, Arithmetic::Exact, &r(0, 1)).verdict, base);
    }

    #[test]
    fn float_agrees_with_exact(system in arb_system()) {
        let exact = check_system(&system, Arithmetic::Exact, &r(0, 1)).verdict;
        let float = check_system(&to_float(&system), Arithmetic::Float { eps: 1e-9 }, &1e-9).verdict;
        prop_assert_eq!(exact, float);
    }

    #[test]
    fn lemma1_float_agrees_with_exact(k in 0i64..100, phase in 0.0f64..6.28) {
        let exact = check(&build_lemma1_instance(r(k, 100), 0.0).unwrap()).verdict;
        let float = check(&build_lemma1_instance(k as f64 / 100.0, phase).unwrap()).verdict;
        prop_assert_eq!(exact, Verdict::Contextual);
        prop_assert_eq!(float, Verdict::Contextual);
    }
}
