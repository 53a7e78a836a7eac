use std::time::{Duration, Instant};

use covdyn::suite::{finite_topology_inputs, run_suite, verify_axioms, Fault, SuiteOptions, LABELS};

#[test]
fn axiom_suite_on_standard_inputs() {
    let start = Instant::now();
    let r = verify_axioms(&SuiteOptions::default());
    assert!(start.elapsed() < Duration::from_secs(60));
    for l in LABELS {
        assert!(r.label(l).is_some(), "{l}");
    }
    // the capped union law is an equality only up to doubling the cap
    let failing: Vec<&str> = r
        .summary
        .iter()
        .filter(|c| c.failed())
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(failing, vec!["P9-3"], "{:?}", r.summary);
    assert!(r.label("P9-3 cap bracket").unwrap().passed());
    assert!(r.label("CK").unwrap().passed());
    assert!(r.label("CK negative controls").unwrap().passed());
}

#[test]
fn every_small_topology_is_run_or_reported() {
    let (inputs, skipped) = finite_topology_inputs(3);
    assert_eq!(inputs.len() + skipped.len(), 1 + 4 + 29);
    // a finite topology is uniformizable iff its minimal neighbourhoods partition the points
    assert_eq!(inputs.len(), 1 + 2 + 5);
    assert!(skipped.iter().all(|s| s.reason.contains("fails")));
}

#[test]
fn injected_asymmetry_is_caught() {
    let (inputs, skipped) = finite_topology_inputs(3);
    let opts = SuiteOptions {
        fault: Some(Fault::RhoAsymmetry),
        ..SuiteOptions::default()
    };
    let r = run_suite(&inputs, skipped, &opts);
    assert!(r.label("P1-1").unwrap().failed());
}

#[test]
fn suite_is_deterministic() {
    let (inputs, skipped) = finite_topology_inputs(3);
    let a = run_suite(&inputs, skipped.clone(), &SuiteOptions::default());
    let b = run_suite(&inputs, skipped, &SuiteOptions::default());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
