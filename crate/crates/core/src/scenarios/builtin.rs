use crate::attractor::AttractorKind;
use crate::dynamics::{Element, FilterSpec, SemigroupKind, WitnessSequence};
use crate::space::MetricKind;

use super::config::*;
use super::function_space::{FunctionModel, PointwiseLevel};

const NAMES: [&str; 6] = [
    "exp-decay",
    "iterated-contractions",
    "composition",
    "composition-shifted",
    "decay",
    "grid",
];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

/// Configuration of a built-in scenario.
pub fn builtin(name: &str) -> Option<ScenarioConfig> {
    Some(match name {
        "exp-decay" => exp_decay(),
        "iterated-contractions" => iterated_contractions(),
        "composition" => composition(0.0, "composition"),
        "composition-shifted" => composition(0.5, "composition-shifted"),
        "decay" => decay(),
        "grid" => grid(),
        _ => return None,
    })
}

fn filter(spec: FilterSpec) -> FilterConfig {
    FilterConfig {
        spec,
        depth: 12,
        budget: 32,
    }
}

fn ids(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn expected_failure(check: &str, reason: &str) -> ExpectedFailure {
    ExpectedFailure {
        check: check.into(),
        reason: reason.into(),
    }
}

fn both_args(eps0: f64, depth: i32) -> Vec<PointwiseLevel> {
    (0..=depth)
        .map(|i| PointwiseLevel {
            args: vec![0, 1],
            eps: eps0 / 4f64.powi(i),
        })
        .collect()
}

fn exp_decay() -> ScenarioConfig {
    let mut levels = vec![PointwiseLevel {
        args: vec![0],
        eps: 1.0,
    }];
    levels.extend((1..=3).map(|i| PointwiseLevel {
        args: vec![0, 1],
        eps: 0.9 / 4f64.powi(i),
    }));
    let top = "f[2^13,2^13]".to_string();
    ScenarioConfig {
        name: "exp-decay".into(),
        space: SpaceConfig::FunctionSpace {
            model: FunctionModel::ExpDecay { min_exp: -6, max_exp: 13 },
        },
        family: FamilyConfig::Pointwise { levels },
        semigroup: SemigroupKind::IntVecAdd { dim: 2 },
        action: ActionConfig::Model { snap_tolerance: None },
        filter: filter(FilterSpec::VecTails),
        testsets: TestsetConfig::default(),
        expectations: Expectations {
            attractor: Some(ids(&["f[0,0]"])),
            kind: Some(AttractorKind::UniformOnly),
            uniform_radius: Some(16.0),
            sequences: vec![WitnessSequence {
                name: "diagonal".into(),
                elements: (0..=12).map(|k| Element::Ints(vec![k, k])).collect(),
                points: vec![top; 13],
            }],
            expected_failures: vec![
                expected_failure("taxonomy/asymptotically compact", "the diagonal sequence has no cluster point"),
                expected_failure(
                    "equivalence/limit compact => asymptotically compact (complete space)",
                    "the truncated orbit A_12 X is finite, so it fits under the cap although no tail clusters",
                ),
                expected_failure(
                    "consistency/limit sets forward invariant (H1)",
                    "A_12 is sampled on a bounded box of offsets, so s·ω(B) reaches coefficients no sampled element reaches",
                ),
                expected_failure(
                    "consistency/limit sets invariant (H1, H4)",
                    "the truncated limit set keeps the coefficient 2 that no further shift reaches",
                ),
            ],
            ..Expectations::default()
        },
    }
}

fn iterated_contractions() -> ScenarioConfig {
    ScenarioConfig {
        name: "iterated-contractions".into(),
        space: SpaceConfig::FunctionSpace {
            model: FunctionModel::IteratedContractions {
                fixed: vec![0.0, 0.25, 0.5, 0.75, 1.0],
                lipschitz: 0.5,
                max_power: 7,
                args: vec![-1.0, 2.0],
            },
        },
        family: FamilyConfig::Pointwise {
            levels: both_args(2.56, 4),
        },
        semigroup: SemigroupKind::NatMul,
        action: ActionConfig::Model { snap_tolerance: None },
        filter: filter(FilterSpec::Tails),
        testsets: TestsetConfig::default(),
        expectations: Expectations {
            attractor: Some(ids(&["i(0)", "i(0.25)", "i(0.5)", "i(0.75)", "i(1)"])),
            kind: Some(AttractorKind::Both),
            eventual_witness: Some(Element::Nat(8)),
            omega_invariant: true,
            expected_failures: vec![
                expected_failure("hypotheses/H3", "odd numbers are not multiples of 2"),
                expected_failure("hypotheses/H4", "the semigroup is commutative, so H4 is H3"),
            ],
            ..Expectations::default()
        },
    }
}

fn composition(x0: f64, name: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        space: SpaceConfig::FunctionSpace {
            model: FunctionModel::Composition {
                x0,
                lipschitz: 1.0,
                max_exp: 6,
            },
        },
        family: FamilyConfig::Pointwise {
            levels: both_args(2.56, 4),
        },
        semigroup: SemigroupKind::RealMul { bound: 0.5 },
        action: ActionConfig::Model { snap_tolerance: None },
        filter: filter(FilterSpec::PowerContractions {
            generators: vec![0.5, -0.5, 0.25],
        }),
        testsets: TestsetConfig::default(),
        expectations: Expectations {
            // ids label offsets from x0, so i(x0) is f[0,0]
            attractor: Some(ids(&["f[0,0]"])),
            kind: Some(AttractorKind::Both),
            eventual_witness: Some(Element::Real(2f64.powi(-5))),
            omega_invariant: true,
            ..Expectations::default()
        },
    }
}

fn decay() -> ScenarioConfig {
    let mut points = vec![vec![0.0]];
    points.extend((0..=10).map(|e| vec![2f64.powi(-e)]));
    ScenarioConfig {
        name: "decay".into(),
        space: SpaceConfig::Metric {
            points: Some(points),
            grid: None,
            metric: MetricKind::Euclidean,
        },
        family: FamilyConfig::MetricChain { eps0: 0.9, depth: 5 },
        semigroup: SemigroupKind::NatAdd,
        action: ActionConfig::Scale {
            factor: 0.5,
            snap_tolerance: None,
        },
        filter: filter(FilterSpec::Tails),
        testsets: TestsetConfig {
            named: vec![NamedSet {
                name: "one".into(),
                points: ids(&["p1"]),
            }],
            ..TestsetConfig::default()
        },
        expectations: Expectations {
            attractor: Some(ids(&["p0"])),
            kind: Some(AttractorKind::Both),
            eventual_witness: Some(Element::Nat(11)),
            cap: Some(3),
            omega_invariant: true,
            ..Expectations::default()
        },
    }
}

fn grid() -> ScenarioConfig {
    ScenarioConfig {
        name: "grid".into(),
        space: SpaceConfig::Metric {
            points: None,
            grid: Some(GridConfig {
                start: 0.0,
                step: 0.01,
                count: 101,
            }),
            metric: MetricKind::Euclidean,
        },
        family: FamilyConfig::MetricChain { eps0: 1.0, depth: 6 },
        semigroup: SemigroupKind::NatAdd,
        // the identity: a halving map snapped to a uniform grid is not an action
        action: ActionConfig::Scale {
            factor: 1.0,
            snap_tolerance: None,
        },
        filter: filter(FilterSpec::Tails),
        testsets: TestsetConfig::default(),
        expectations: Expectations {
            kind: Some(AttractorKind::Both),
            eventual_witness: Some(Element::Nat(0)),
            cap: Some(101),
            omega_invariant: true,
            ..Expectations::default()
        },
    }
}
