use onticlab::ensembles::spectral_decomposition;
use onticlab::onticmodel::{deficit_model, find_omega, OnticSpace};
use onticlab::pncheck::{build_lemma1_instance, check, explain, Verdict};
use onticlab::qstate::{partial_trace_a, BipartiteState, PureState};
use onticlab::steering::{assemblage_checks, steer};
use onticlab::{ExactReport, FloatReport, Rational};

#[test]
fn exact_and_float_reports_agree_on_every_branch() {
    for k in 1..10 {
        let exact: ExactReport = check(&build_lemma1_instance(Rational::new(k.into(), 10.into()), 0.0).unwrap());
        let float: FloatReport = check(&build_lemma1_instance(k as f64 / 10.0, 0.0).unwrap());
        assert_eq!(exact.verdict, Verdict::Contextual);
        assert_eq!(exact.verdict, float.verdict);
        for (e, f) in exact.branches.iter().zip(&float.branches) {
            assert_eq!(e.case, f.case);
            assert_eq!(e.is_infeasible(), f.is_infeasible());
        }
        assert_eq!(explain(&exact).lines().count(), 17);
    }
}

#[test]
fn steered_bob_states_feed_the_omega_search() {
    let basis = [PureState::basis(2, 0), PureState::basis(2, 1)];
    let psi = BipartiteState::from_schmidt(&[0.8f64.sqrt(), 0.2f64.sqrt()], &basis, &basis).unwrap();
    let target = spectral_decomposition(&partial_trace_a(&psi)).unwrap();
    let (povm, assemblage) = steer(&psi, &target).unwrap();
    assert!(assemblage_checks(&povm, &assemblage, &target).passes());

    let model = deficit_model(OnticSpace::fibonacci(20_000).unwrap(), 0.25).unwrap();
    let phi = target.members()[0].state.clone();
    let psi_b = PureState::from_bloch(&onticlab::qstate::BlochVector::new([1.0, 0.0, 0.0]).unwrap()).unwrap();
    let omega = find_omega(&model, &phi, &psi_b, &[phi.clone(), phi.qubit_complement().unwrap()]).unwrap();
    assert!(omega.checks.disjoint_from_phi);
    assert!((omega.checks.psi_mass - 0.125).abs() < 5e-3);
}
