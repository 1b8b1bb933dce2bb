use entrywise_core::oracle::{find_negativity_witness, necessary_coeff_check, run_suite, Suite};
use entrywise_core::CoeffVector;

#[test]
fn identity_suite_is_clean() {
    let r = run_suite(Suite::Identities, 7, 100).unwrap();
    assert!(r.pass);
    for rep in &r.reports {
        assert!(rep.failures.is_empty(), "{}: {:?}", rep.name, rep.failures);
        assert!(rep.instance_count > 0);
    }
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["suite"], "identities");
    assert_eq!(json["seed"], 7);
}

#[test]
fn transition_and_kernel_suites_are_clean() {
    for suite in [Suite::Transition, Suite::Kernels] {
        let r = run_suite(suite, 3, 25).unwrap();
        assert!(
            r.pass,
            "{suite}: {:?}",
            r.reports.iter().filter(|x| !x.pass()).collect::<Vec<_>>()
        );
    }
}

#[test]
fn scans_replay_from_their_seed() {
    let c = CoeffVector::ones(3);
    let a = find_negativity_witness(&c, -0.06, 3, 1.0, 90, 42).unwrap();
    let b = find_negativity_witness(&c, -0.06, 3, 1.0, 90, 42).unwrap();
    assert_eq!(a.min_eigenvalue(), b.min_eigenvalue());
    assert_eq!(a.first_witness_draw, b.first_witness_draw);
}

#[test]
fn nonnegative_extra_coefficient_never_fails() {
    let c = CoeffVector::from_ints(&[1, 2]).unwrap();
    let scan = find_negativity_witness(&c, 0.0, 4, 1.0, 300, 1).unwrap();
    assert!(scan.witness().is_none());
}

#[test]
fn coefficient_sign_rule() {
    assert!(necessary_coeff_check(&[1.0, 1.0, 1.0, -5.0], &[0, 1, 2, 3], 3).unwrap());
    assert!(!necessary_coeff_check(&[1.0, -1.0, 1.0], &[0, 1, 2], 3).unwrap());
    assert!(!necessary_coeff_check(&[0.0, 2.0, 3.0, -1.0], &[0, 1, 2, 3], 3).unwrap());
}
