use covdyn::attractor::AttractorKind;
use covdyn::dynamics::{DynamicsError, Element, FilterSpec};
use covdyn::scenarios::{
    build, builtin, builtin_names, load_system, run_scenario, ActionConfig, RunOptions, ScenarioError,
};

#[test]
fn builtins_meet_their_expectations() {
    for seed in 0..3 {
        for name in builtin_names() {
            let s = build(builtin(name).unwrap(), seed).unwrap();
            let r = run_scenario(
                &s,
                &RunOptions {
                    seed,
                    ..RunOptions::default()
                },
            )
            .unwrap();
            assert!(r.ok(), "{name} seed {seed}: {:?}", r.violations);
            assert_eq!(Some(r.kind), s.config.expectations.kind, "{name}");
        }
    }
}

#[test]
fn decay_attractor_is_the_origin() {
    let s = build(builtin("decay").unwrap(), 0).unwrap();
    let r = run_scenario(&s, &RunOptions::default()).unwrap();
    assert_eq!(r.constructed, ["p0"]);
    assert_eq!(r.kind, AttractorKind::Both);
}

#[test]
fn reports_are_reproducible() {
    let s = build(builtin("exp-decay").unwrap(), 7).unwrap();
    let a = run_scenario(
        &s,
        &RunOptions {
            seed: 7,
            ..RunOptions::default()
        },
    )
    .unwrap();
    let b = run_scenario(
        &build(builtin("exp-decay").unwrap(), 7).unwrap(),
        &RunOptions {
            seed: 7,
            ..RunOptions::default()
        },
    )
    .unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn non_nested_levels_are_rejected() {
    let mut cfg = builtin("decay").unwrap();
    cfg.filter.spec = FilterSpec::Explicit {
        levels: vec![vec![Element::Nat(1), Element::Nat(2)], vec![Element::Nat(3)]],
    };
    let err = load_system(&cfg.to_toml(), 0).unwrap_err();
    assert!(
        matches!(
            err,
            ScenarioError::Dynamics(DynamicsError::NestingViolation { level: 1, .. })
        ),
        "{err}"
    );
}

#[test]
fn off_grid_action_is_rejected() {
    let mut cfg = builtin("decay").unwrap();
    cfg.action = ActionConfig::Scale {
        factor: 0.3,
        snap_tolerance: Some(1e-6),
    };
    let err = load_system(&cfg.to_toml(), 0).unwrap_err();
    assert!(
        matches!(
            err,
            ScenarioError::Dynamics(DynamicsError::SnapToleranceExceeded { .. })
        ),
        "{err}"
    );
}

#[test]
fn unknown_keys_are_schema_errors() {
    let text = builtin("decay").unwrap().to_toml() + "\nsurprise = 1\n";
    assert!(matches!(load_system(&text, 0), Err(ScenarioError::Schema(_))));
    assert!(matches!(load_system("name = \"x\"", 0), Err(ScenarioError::Schema(_))));
}

#[test]
fn every_builtin_round_trips_through_text() {
    for name in builtin_names() {
        let cfg = builtin(name).unwrap();
        let a = build(cfg.clone(), 2).unwrap();
        let b = load_system(&cfg.to_toml(), 2).unwrap();
        assert_eq!(a.system, b.system, "{name}");
        assert_eq!(a.testsets, b.testsets, "{name}");
        assert_eq!(a.alt_testsets, b.alt_testsets, "{name}");
    }
}

#[test]
fn unknown_testset_is_an_error() {
    let s = build(builtin("decay").unwrap(), 0).unwrap();
    assert!(matches!(s.testset("missing"), Err(ScenarioError::UnknownTestset(_))));
    assert!(s.testset("one").is_ok());
}
