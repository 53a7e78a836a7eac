use serde::Serialize;

use crate::attractor::{
    check_equivalence, check_uniqueness, construct_candidate, verify_global, verify_uniform, AttractorKind,
    AttractorVerdict, EquivalenceInput,
};
use crate::compactness::default_cap;
use crate::covering::Covering;
use crate::dynamics::{
    attracts, check_associativity, check_dissipativity, check_hypotheses, omega_limit, prolongational_limit,
    HypothesisFailure, System, TaxonomyOptions, DEFAULT_ENUMERATION_BOUND,
};
use crate::pointset::PointSet;
use crate::proximity::{dominated_at, equal_at};
use crate::report::{Budget, Check, Verdict};

use super::config::{FamilyConfig, ScenarioConfig, SpaceConfig};
use super::function_space::{pointwise_covering, FunctionModel, PointwiseLevel};
use super::{Scenario, ScenarioError};

/// Overrides applied to a scenario before it is built and run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    /// Filter truncation depth.
    pub max_level: Option<usize>,
    /// Covering index up to which verdicts are certified.
    pub resolution: Option<usize>,
    pub cap: Option<usize>,
    /// Sampled elements per filter level.
    pub budget: Option<usize>,
    /// Random sequences per test set for asymptotic compactness.
    pub random_sequences: usize,
    /// Deepest-level terms appended to each random sequence.
    pub tail_extension: usize,
    /// Elements of `A_0` used as `s` in the hypothesis checks.
    pub hypothesis_sample: usize,
    pub enumeration_bound: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            max_level: None,
            resolution: None,
            cap: None,
            budget: None,
            random_sequences: 4,
            tail_extension: 64,
            hypothesis_sample: 8,
            enumeration_bound: DEFAULT_ENUMERATION_BOUND,
        }
    }
}

impl RunOptions {
    /// Writes the truncation overrides into a configuration.
    pub fn apply(&self, config: &mut ScenarioConfig) {
        if let Some(d) = self.max_level {
            config.filter.depth = d;
        }
        if let Some(b) = self.budget {
            config.filter.budget = b;
        }
        if let Some(c) = self.cap {
            config.expectations.cap = Some(c);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestsetSummary {
    pub name: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub seed: u64,
    pub points: usize,
    pub resolution: usize,
    pub truncation: usize,
    pub cap: usize,
    pub max_snap_error: f64,
    pub testsets: Vec<TestsetSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_attractor: Option<Vec<String>>,
    pub constructed: Vec<String>,
    pub kind: AttractorKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_kind: Option<AttractorKind>,
    pub hypothesis_failures: Vec<HypothesisFailure>,
    pub sections: Vec<Section>,
    /// Failed checks not declared as expected, as `section/check`.
    pub violations: Vec<String>,
}

impl ScenarioReport {
    pub fn check(&self, section: &str, name: &str) -> Option<&Check> {
        self.sections
            .iter()
            .find(|s| s.name == section)
            .and_then(|s| s.checks.iter().find(|c| c.name == name))
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn section(name: &str, checks: Vec<Check>) -> Section {
    Section {
        name: name.into(),
        checks,
    }
}

/// Runs every check on a built scenario.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<ScenarioReport, ScenarioError> {
    let sys = &scenario.system;
    let family = sys.family();
    let finest = family.len() - 1;
    let res = opts.resolution.unwrap_or(finest).min(finest);
    let exp = &scenario.config.expectations;
    let cap = opts.cap.or(exp.cap).unwrap_or_else(|| default_cap(sys.len()));
    let depth = sys.filter().depth();
    let testsets = &scenario.testsets;
    let mut sections = Vec::new();

    let mut system_checks = check_associativity(sys, 8)?;
    let tol = scenario_tolerance(&scenario.config);
    system_checks.push(Check::new(
        "snap error",
        tol.is_none_or(|t| sys.max_snap_error() <= t),
        Some(format!("max {:e}", sys.max_snap_error())),
        Budget::exhaustive(sys.filter().sample(0).len()),
        res,
    ));
    sections.push(section("system", system_checks));

    let hyp = check_hypotheses(sys.filter(), opts.hypothesis_sample, opts.enumeration_bound);
    sections.push(section("hypotheses", hyp.checks.clone()));

    let taxonomy = check_dissipativity(
        sys,
        testsets,
        &TaxonomyOptions {
            cap,
            resolution: res,
            core: scenario.expected.clone(),
            sequences: exp.sequences.clone(),
            eventual_witness: exp.eventual_witness.clone(),
            random_sequences: opts.random_sequences,
            tail_extension: opts.tail_extension,
            seed: opts.seed,
            points: sys.space().all(),
        },
    )?;
    sections.push(section("taxonomy", taxonomy.checks.clone()));

    let constructed = construct_candidate(sys, testsets)?;
    let target = scenario.expected.clone().unwrap_or_else(|| constructed.clone());
    let global = verify_global(sys, &target, testsets, cap, res)?;
    let uniform = verify_uniform(sys, &target, &scenario.uniform_points, cap, res)?;
    let built = verify_global(sys, &constructed, testsets, cap, res)?;
    let kind = AttractorKind::from_verdicts(global.passed(), uniform.passed());
    sections.push(section("global", global.checks.clone()));
    sections.push(section("uniform", uniform.checks.clone()));
    sections.push(section("constructed", built.checks.clone()));

    sections.push(section(
        "equivalence",
        check_equivalence(&EquivalenceInput {
            global: &global,
            uniform: &uniform,
            taxonomy: &taxonomy,
            hypotheses: &hyp,
            omega_invariant: exp.omega_invariant,
            constructed: &built,
            resolution: res,
        }),
    ));

    let alt = construct_candidate(sys, &scenario.alt_testsets)?;
    let consistency = consistency_checks(
        scenario,
        res,
        &[&global, &built],
        &constructed,
        &alt,
        hyp.passed("H1"),
        hyp.passed("H4"),
    )?;
    sections.push(section("consistency", consistency));

    sections.push(section("scenario", scenario_checks(scenario, res)?));

    let mut expectation_checks = Vec::new();
    if let Some(k) = exp.kind {
        expectation_checks.push(Check::new(
            "kind",
            k == kind,
            Some(format!("expected {}, found {}", kind_name(k), kind_name(kind))),
            Budget::exhaustive(1),
            res,
        ));
    }
    let expects_global = matches!(exp.kind, Some(AttractorKind::Both | AttractorKind::GlobalOnly));
    if let (Some(e), true) = (&scenario.expected, expects_global) {
        let same = *e == constructed;
        expectation_checks.push(Check::new(
            "constructed equals expected",
            same,
            (!same).then(|| format!("constructed {:?}", sys.ids(&constructed))),
            Budget::exhaustive(testsets.len()),
            res,
        ));
    }
    if exp.omega_invariant {
        expectation_checks.push(declared_invariance(sys, testsets, res)?);
    }
    sections.push(section("expectations", expectation_checks));

    let mut violations = Vec::new();
    for s in &sections {
        let tolerated = |c: &Check| {
            let key = format!("{}/{}", s.name, c.name);
            exp.expected_failures.iter().any(|f| f.check == key)
                || (s.name == "uniform"
                    && !matches!(exp.kind, Some(AttractorKind::Both | AttractorKind::UniformOnly))
                    && exp.kind.is_some())
                || ((s.name == "global" || s.name == "constructed") && !expects_global && exp.kind.is_some())
        };
        for c in &s.checks {
            if c.verdict == Verdict::Fail && !tolerated(c) {
                violations.push(format!("{}/{}", s.name, c.name));
            }
        }
    }

    Ok(ScenarioReport {
        scenario: scenario.config.name.clone(),
        seed: opts.seed,
        points: sys.len(),
        resolution: res,
        truncation: depth,
        cap,
        max_snap_error: sys.max_snap_error(),
        testsets: testsets
            .iter()
            .map(|(n, t)| TestsetSummary {
                name: n.clone(),
                size: t.len(),
            })
            .collect(),
        expected_attractor: scenario.expected.as_ref().map(|e| sys.ids(e)),
        constructed: sys.ids(&constructed),
        kind,
        expected_kind: exp.kind,
        hypothesis_failures: hyp.failures,
        sections,
        violations,
    })
}

pub fn kind_name(k: AttractorKind) -> &'static str {
    match k {
        AttractorKind::Both => "both",
        AttractorKind::GlobalOnly => "global-only",
        AttractorKind::UniformOnly => "global-uniform-only",
        AttractorKind::Neither => "neither",
    }
}

fn scenario_tolerance(config: &ScenarioConfig) -> Option<f64> {
    use super::config::ActionConfig;
    let declared = match &config.action {
        ActionConfig::Model { snap_tolerance } | ActionConfig::Scale { snap_tolerance, .. } => *snap_tolerance,
        ActionConfig::Maps { .. } => return None,
    };
    declared.or(match &config.family {
        FamilyConfig::MetricChain { eps0, depth } => Some(eps0 / 4f64.powi(*depth as i32)),
        FamilyConfig::Pointwise { levels } => levels.last().map(|l| l.eps),
        FamilyConfig::AllCoverings => None,
    })
}

fn declared_invariance(sys: &System, testsets: &[(String, PointSet)], res: usize) -> Result<Check, ScenarioError> {
    let mut bad = None;
    'outer: for (name, t) in testsets {
        let w = omega_limit(sys, t)?.set;
        for s in sys.filter().sample(0) {
            let img = sys.image(s, &w)?;
            if !equal_at(sys.family(), &w, &img, res) {
                bad = Some(format!("{s}·ω({name}) differs from ω({name})"));
                break 'outer;
            }
        }
    }
    Ok(Check::new(
        "declared limit-set invariance",
        bad.is_none(),
        bad,
        Budget::new(0, sys.filter().sample(0).len()),
        res,
    ))
}

fn consistency_checks(
    scenario: &Scenario,
    res: usize,
    verdicts: &[&AttractorVerdict],
    constructed: &PointSet,
    alt: &PointSet,
    h1: bool,
    h4: bool,
) -> Result<Vec<Check>, ScenarioError> {
    let sys = &scenario.system;
    let family = sys.family();
    let testsets = &scenario.testsets;
    let depth = sys.filter().depth();
    let mut out = Vec::new();

    let mut disagree = None;
    let mut count = 0;
    for v in verdicts {
        for (name, r) in &v.attractions {
            count += 1;
            if !r.agrees && disagree.is_none() {
                disagree = Some(format!(
                    "{:?} on {name}: levels say {}, sequences say {}",
                    v.candidate, r.attracts, r.sequence_converges
                ));
            }
        }
    }
    out.push(Check::new(
        "attraction formulations agree",
        disagree.is_none(),
        disagree,
        Budget::new(depth, count),
        res,
    ));

    let mut stray = None;
    for x in scenario.uniform_points.iter() {
        let single = PointSet::singleton(sys.len(), x);
        let w = omega_limit(sys, &single)?.set;
        let j = prolongational_limit(sys, x, res, None)?.set;
        if !w.is_subset(&j) {
            stray = Some(format!("ω({}) leaves J", sys.space().point(x).id));
            break;
        }
    }
    out.push(Check::new(
        "limit set inside prolongation",
        stray.is_none(),
        stray,
        Budget::new(depth, scenario.uniform_points.len()),
        res,
    ));

    let omegas: Vec<PointSet> = testsets
        .iter()
        .map(|(_, t)| omega_limit(sys, t).map(|r| r.set))
        .collect::<Result<_, _>>()?;
    let sample = sys.filter().sample(0);
    let budget = Budget::new(0, sample.len() * testsets.len());

    let invariance = |exact: bool| -> Result<Option<String>, ScenarioError> {
        for ((name, _), w) in testsets.iter().zip(&omegas) {
            for s in sample {
                let img = sys.image(s, w)?;
                let ok = if exact {
                    equal_at(family, w, &img, res)
                } else {
                    dominated_at(family, w, &img, res)
                };
                if !ok {
                    let extra = img.difference(w);
                    let missing = w.difference(&img);
                    return Ok(Some(format!(
                        "s={s} on ω({name}): gains {:?}, loses {:?}",
                        sys.ids(&extra),
                        sys.ids(&missing)
                    )));
                }
            }
        }
        Ok(None)
    };
    if h1 {
        let bad = invariance(false)?;
        out.push(Check::new(
            "limit sets forward invariant (H1)",
            bad.is_none(),
            bad,
            budget,
            res,
        ));
    } else {
        out.push(Check::skip(
            "limit sets forward invariant (H1)",
            "unmet: H1",
            budget,
            res,
        ));
    }
    if h1 && h4 {
        let bad = invariance(true)?;
        out.push(Check::new(
            "limit sets invariant (H1, H4)",
            bad.is_none(),
            bad,
            budget,
            res,
        ));
    } else {
        let unmet: Vec<&str> = [("H1", h1), ("H4", h4)].iter().filter(|p| !p.1).map(|p| p.0).collect();
        out.push(Check::skip(
            "limit sets invariant (H1, H4)",
            format!("unmet: {}", unmet.join(", ")),
            budget,
            res,
        ));
    }

    // ω(B) lies in every closed set attracting B.
    let mut bad = None;
    let mut used = 0;
    for v in verdicts {
        let closed = family.closure_at(&v.set, family.len() - 1) == v.set;
        if !closed {
            continue;
        }
        for (name, r) in &v.attractions {
            if !r.attracts {
                continue;
            }
            used += 1;
            let i = testsets
                .iter()
                .position(|t| &t.0 == name)
                .expect("attraction on a test set");
            if !dominated_at(family, &v.set, &omegas[i], res) && bad.is_none() {
                bad = Some(format!("ω({name}) leaves {:?}", v.candidate));
            }
        }
    }
    out.push(Check::new(
        "limit set inside closed attracting sets",
        bad.is_none(),
        bad,
        Budget::exhaustive(used),
        res,
    ));

    let mut invariant_sets = testsets.clone();
    if let Some(e) = &scenario.expected {
        invariant_sets.push(("expected".into(), e.clone()));
    }
    out.extend(check_uniqueness(sys, constructed, alt, &invariant_sets, res)?);
    Ok(out)
}

fn scenario_checks(scenario: &Scenario, res: usize) -> Result<Vec<Check>, ScenarioError> {
    let model = match &scenario.config.space {
        SpaceConfig::FunctionSpace { model } => model,
        _ => return Ok(Vec::new()),
    };
    let Some(expected) = &scenario.expected else {
        return Ok(Vec::new());
    };
    match model {
        FunctionModel::ExpDecay { .. } => exp_decay_checks(scenario, expected, res),
        FunctionModel::IteratedContractions {
            fixed, lipschitz, args, ..
        } => contraction_checks(scenario, expected, res, fixed, *lipschitz, args),
        FunctionModel::Composition { lipschitz, .. } => composition_checks(scenario, expected, res, *lipschitz),
    }
}

/// The escape of `(k,k) f_k` from the stars of `i(0)`, with `f_k` the
/// largest sampled coefficient pair.
fn exp_decay_checks(scenario: &Scenario, expected: &PointSet, res: usize) -> Result<Vec<Check>, ScenarioError> {
    let sys = &scenario.system;
    let family = sys.family();
    let y = family.star(expected, 0);
    let r = attracts(sys, expected, &y, res)?;
    let budget = Budget::new(sys.filter().depth(), sys.filter().budget());
    let mut out = vec![Check::new(
        "limit set star not attracted",
        !r.attracts,
        Some(format!("levels {:?}", r.levels)),
        budget,
        res,
    )];
    let escape = r.escapes.iter().find(|e| e.index == 1.min(res));
    let (norm_ok, witness, image) = match escape {
        None => (false, "no escape at U_1".to_string(), None),
        Some(e) => {
            let v = sys.space().coords(e.image_index);
            let norm = (v[2] * v[2] + v[3] * v[3]).sqrt();
            let ok = (norm - 2.0 * 2f64.sqrt()).abs() <= 1e-12 && norm > 2.0;
            (
                ok,
                format!("{}·{} = {}, norm {norm}", e.element, e.point, e.image),
                Some(e.image_index),
            )
        }
    };
    out.push(Check::new("escape norm is 2√2", norm_ok, Some(witness), budget, res));
    let coarse = pointwise_covering(
        sys.space(),
        &PointwiseLevel {
            args: vec![1],
            eps: 1.0,
        },
    )?;
    let leaves = image.is_some_and(|p| !star_contains(&coarse, expected, p));
    out.push(Check::new(
        "escape leaves unit star at (1,1)",
        leaves,
        None,
        Budget::exhaustive(1),
        res,
    ));
    Ok(out)
}

fn star_contains(c: &Covering, y: &PointSet, p: usize) -> bool {
    c.star_of(y).contains(p)
}

/// Attraction level at the finest index against the bound `L^{n0} δ < ε`,
/// and `ω(X)` against the fixed points.
fn contraction_checks(
    scenario: &Scenario,
    expected: &PointSet,
    res: usize,
    fixed: &[f64],
    lipschitz: f64,
    args: &[f64],
) -> Result<Vec<Check>, ScenarioError> {
    let sys = &scenario.system;
    let eps = match &scenario.config.family {
        FamilyConfig::Pointwise { levels } => levels[res.min(levels.len() - 1)].eps,
        _ => return Ok(Vec::new()),
    };
    let delta = args
        .iter()
        .flat_map(|z| fixed.iter().map(move |x| (z - x).abs()))
        .fold(0.0, f64::max);
    let n0 = (0..).find(|&n| lipschitz.powi(n) * delta < eps).unwrap_or(0) as usize;
    let whole = sys.space().all();
    let r = attracts(sys, expected, &whole, res)?;
    let level = r.levels.get(res).copied().flatten();
    let budget = Budget::new(sys.filter().depth(), sys.filter().budget());
    let mut out = vec![Check::new(
        "attraction level within bound",
        level.is_some_and(|l| l <= n0),
        Some(format!("level {level:?}, bound n0={n0} (delta={delta}, eps={eps})")),
        budget,
        res,
    )];
    let w = omega_limit(sys, &whole)?;
    let same = w.set == *expected;
    out.push(Check::new(
        "limit set of X is the fixed points",
        same,
        Some(format!("{:?}", w.points)),
        budget,
        res,
    ));
    Ok(out)
}

/// Pairwise spread `|f(z) - g(z)| < 2K|z - 0| + 4δ` on every test set,
/// with `δ` the radius of the finest covering whose single star holds the set.
fn composition_checks(
    scenario: &Scenario,
    expected: &PointSet,
    res: usize,
    lipschitz: f64,
) -> Result<Vec<Check>, ScenarioError> {
    let sys = &scenario.system;
    let family = sys.family();
    let levels = match &scenario.config.family {
        FamilyConfig::Pointwise { levels } => levels,
        _ => return Ok(Vec::new()),
    };
    let zs = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0];
    let eval = |p: usize, z: f64| {
        let v = sys.space().coords(p);
        v[0] + (v[1] - v[0]) * z
    };
    let mut bad = None;
    let mut pairs = 0;
    for (name, t) in &scenario.testsets {
        let i = (0..=res.min(levels.len() - 1)).rev().find(|&i| {
            let c = family.covering(i);
            (0..sys.len()).any(|h| t.is_subset(c.point_star(h)))
        });
        let Some(i) = i else {
            bad.get_or_insert_with(|| format!("{name} lies in no single star"));
            continue;
        };
        let delta = levels[i].eps;
        let pts = t.to_vec();
        for &f in &pts {
            for &g in &pts {
                pairs += 1;
                for &z in &zs {
                    let spread = (eval(f, z) - eval(g, z)).abs();
                    let bound = 2.0 * lipschitz * z.abs() + 4.0 * delta;
                    if spread >= bound && bad.is_none() {
                        bad = Some(format!(
                            "{name}: |f(z)-g(z)| = {spread} >= {bound} at z={z} for {}, {}",
                            sys.space().point(f).id,
                            sys.space().point(g).id
                        ));
                    }
                }
            }
        }
    }
    let mut out = vec![Check::new(
        "spread bound",
        bad.is_none(),
        bad,
        Budget::exhaustive(pairs),
        res,
    )];
    let w = omega_limit(sys, &sys.space().all())?;
    let same = w.set == *expected;
    out.push(Check::new(
        "limit set of X is the fixed map",
        same,
        Some(format!("{:?}", w.points)),
        Budget::new(sys.filter().depth(), sys.filter().budget()),
        res,
    ));
    Ok(out)
}
