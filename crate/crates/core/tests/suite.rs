use std::collections::BTreeSet;

use lattk_core::suite::json::{contains_float, keys_sorted};
use lattk_core::suite::{
    check_anchors, check_names, run_check, run_selected, sweep_check_names, Status, SuiteError,
    SweepConfig,
};
use serde_json::Value;

const ANCHORS: &str = include_str!("fixtures/anchors.txt");

fn config(samples: usize) -> SweepConfig {
    SweepConfig {
        samples,
        ..SweepConfig::default()
    }
}

#[test]
fn every_anchor_is_in_the_fixture() {
    let fixture: BTreeSet<&str> = ANCHORS.lines().filter(|l| !l.is_empty()).collect();
    let used: BTreeSet<&str> = check_anchors().into_iter().map(|(_, a)| a).collect();
    assert_eq!(used.len(), check_names().len(), "anchors are not distinct");
    for (name, anchor) in check_anchors() {
        assert!(fixture.contains(anchor), "{name}: anchor {anchor:?} missing");
    }
    assert_eq!(fixture, used, "fixture lists anchors no check uses");
}

#[test]
fn results_carry_their_registry_anchor() {
    let report = run_selected(&check_names(), &config(0)).unwrap();
    let anchors: Vec<_> = check_anchors();
    for r in &report.checks {
        let expected = anchors.iter().find(|(n, _)| *n == r.name).unwrap().1;
        assert_eq!(r.anchor, expected);
    }
}

#[test]
fn registry_has_nineteen_sorted_unique_names() {
    let names = check_names();
    assert_eq!(names.len(), 19);
    let set: BTreeSet<_> = names.iter().collect();
    assert_eq!(set.len(), 19);
    for s in sweep_check_names() {
        assert!(names.contains(&s));
    }
}

#[test]
fn unknown_check_is_reported_with_the_registry() {
    match run_check("bogus", &config(0)) {
        Err(SuiteError::UnknownCheck { name, known }) => {
            assert_eq!(name, "bogus");
            assert_eq!(known.len(), 19);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn zero_bound_is_rejected() {
    let bad = SweepConfig {
        bound: 0,
        ..config(1)
    };
    assert!(run_selected(&["twisted-alg-16"], &bad).is_err());
}

#[test]
fn parameter_free_checks_pass() {
    for name in [
        "pic-disc",
        "fiber-isotropic",
        "disc-form-matrix",
        "fano-kernel-chain",
        "alpha-nontrivial",
        "overlattice-unique-4",
        "overlattice-three-2",
        "beta-product",
        "diagram-intersection",
        "restriction-classes",
        "half-pairing-rescale",
    ] {
        let r = run_check(name, &config(0)).unwrap();
        assert_eq!(r.status, Status::Pass, "{name}: {}", r.witness);
    }
}

/// The kernel model and the Mukai complement give isomorphic discriminant
/// forms for every sampled B-field.
#[test]
fn cross_validation_holds_on_all_samples() {
    let r = run_check("complement-duality", &config(100)).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.witness);
    let sweep = &r.witness["sweep"];
    assert_eq!(sweep["counts"]["pass"], Value::from(100));
    assert_eq!(sweep["failed_samples"], Value::Array(vec![]));
}

#[test]
fn twisted_discriminant_is_sixteen_on_all_samples() {
    let r = run_check("twisted-alg-16", &config(100)).unwrap();
    assert_eq!(r.status, Status::Pass, "{}", r.witness);
    assert_eq!(r.witness["sweep"]["counts"]["pass"], Value::from(100));
}

#[test]
fn reading_dependent_checks_have_a_reading_that_always_holds() {
    for name in ["appB-solve-w", "appB-corollary-isometry"] {
        let r = run_check(name, &config(30)).unwrap();
        assert_ne!(r.status, Status::Fail, "{name}: {}", r.witness);
        let sweep = &r.witness["sweep"];
        let evaluations = sweep["evaluations"].clone();
        let counts = sweep["reading_counts"].as_object().unwrap();
        assert!(
            counts.values().any(|c| *c == evaluations),
            "{name}: no reading holds on every sample"
        );
    }
}

#[test]
fn reports_are_deterministic_and_canonical() {
    let names = ["disc-group-z4z4", "appB-solve-w", "residue-invariance"];
    let a = run_selected(&names, &config(12)).unwrap().to_canonical_json();
    let b = run_selected(&names, &config(12)).unwrap().to_canonical_json();
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert!(!contains_float(&v));
    assert!(keys_sorted(&v));
    assert!(a.ends_with('\n'));

    let other = SweepConfig {
        seed: 7,
        ..config(12)
    };
    let c = run_selected(&names, &other).unwrap().to_canonical_json();
    assert_ne!(a, c);
}

#[test]
fn selection_order_does_not_matter() {
    let a = run_selected(&["pic-disc", "fiber-isotropic"], &config(0)).unwrap();
    let b = run_selected(&["fiber-isotropic", "pic-disc", "pic-disc"], &config(0)).unwrap();
    assert_eq!(a.to_canonical_json(), b.to_canonical_json());
}
