//! Global and global uniform attractors: construction from limit sets,
//! verification, uniqueness and the equivalence theorem with its hypotheses.

use serde::Serialize;
use thiserror::Error;

use crate::compactness::{is_bounded, is_compact};
use crate::dynamics::{
    attracts, omega_limit, prolongational_limit, AttractionReport, DynamicsError, HypothesisReport, System,
    TaxonomyReport,
};
use crate::pointset::PointSet;
use crate::proximity::{dominated_at, equal_at};
use crate::report::{Budget, Check, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AttractorError {
    #[error("test set {0} is not bounded")]
    UnboundedTestset(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttractorKind {
    Both,
    GlobalOnly,
    #[serde(rename = "global-uniform-only")]
    UniformOnly,
    Neither,
}

impl AttractorKind {
    pub fn from_verdicts(global: bool, uniform: bool) -> Self {
        match (global, uniform) {
            (true, true) => AttractorKind::Both,
            (true, false) => AttractorKind::GlobalOnly,
            (false, true) => AttractorKind::UniformOnly,
            (false, false) => AttractorKind::Neither,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorVerdict {
    pub candidate: Vec<String>,
    #[serde(skip)]
    pub set: PointSet,
    pub checks: Vec<Check>,
    /// Attraction of each test set, for the global verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub attractions: Vec<(String, AttractionReport)>,
}

impl AttractorVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `⋃ ω(Y)` over the supplied bounded test sets.
pub fn construct_candidate(system: &System, testsets: &[(String, PointSet)]) -> Result<PointSet, AttractorError> {
    let mut out = PointSet::empty(system.len());
    for (name, t) in testsets {
        if t.is_empty() || !is_bounded(t, system.family()).unwrap_or(false) {
            return Err(AttractorError::UnboundedTestset(name.clone()));
        }
        out.union_with(&omega_limit(system, t)?.set);
    }
    Ok(out)
}

fn compact_check(system: &System, c: &PointSet, cap: usize, res: usize) -> Check {
    let ok = is_compact(c, system.family(), cap);
    Check::new(
        "compact",
        ok,
        (!ok).then(|| format!("not covered by {cap} stars at some index")),
        Budget::exhaustive(system.family().len()),
        res,
    )
}

fn invariance_check(system: &System, c: &PointSet, res: usize) -> Result<Check, DynamicsError> {
    let sample = system.filter().sample(0);
    let mut witness = None;
    for s in sample {
        let img = system.image(s, c)?;
        if img != *c {
            let extra = img.difference(c);
            let missing = c.difference(&img);
            witness = Some(format!(
                "s={s}: gains {:?}, loses {:?}",
                system.ids(&extra),
                system.ids(&missing)
            ));
            break;
        }
    }
    Ok(Check::new(
        "invariant",
        witness.is_none(),
        witness,
        Budget::new(0, sample.len()),
        res,
    ))
}

/// Nonempty, closed, compact at `cap`, invariant for every sampled element,
/// and attracting every test set at `resolution`.
pub fn verify_global(
    system: &System,
    candidate: &PointSet,
    testsets: &[(String, PointSet)],
    cap: usize,
    resolution: usize,
) -> Result<AttractorVerdict, AttractorError> {
    let family = system.family();
    let depth = system.filter().depth();
    let mut checks = Vec::new();
    let nonempty = !candidate.is_empty();
    checks.push(Check::new(
        "nonempty",
        nonempty,
        (!nonempty).then(|| "candidate is empty".to_string()),
        Budget::exhaustive(1),
        resolution,
    ));
    let cls = family.closure_at(candidate, family.len() - 1);
    let closed = cls == *candidate;
    checks.push(Check::new(
        "closed",
        closed,
        (!closed).then(|| format!("closure adds {:?}", system.ids(&cls.difference(candidate)))),
        Budget::exhaustive(family.len()),
        resolution,
    ));
    checks.push(compact_check(system, candidate, cap, resolution));
    checks.push(invariance_check(system, candidate, resolution)?);
    let mut attractions = Vec::new();
    let mut witness = None;
    if nonempty {
        for (name, t) in testsets {
            let r = attracts(system, candidate, t, resolution)?;
            if !r.attracts && witness.is_none() {
                let e = &r.escapes[0];
                witness = Some(format!(
                    "{name}: at U_{} level {} {}·{} = {} escapes",
                    e.index, e.level, e.element, e.point, e.image
                ));
            }
            attractions.push((name.clone(), r));
        }
    } else {
        witness = Some("empty candidate attracts nothing".into());
    }
    checks.push(Check::new(
        "attracts test sets",
        witness.is_none(),
        witness,
        Budget::new(depth, testsets.len()),
        resolution,
    ));
    Ok(AttractorVerdict {
        candidate: system.ids(candidate),
        set: candidate.clone(),
        checks,
        attractions,
    })
}

/// Compact, invariant, and for each sampled point `J(x)` is nonempty and
/// lies within the candidate at `resolution`.
pub fn verify_uniform(
    system: &System,
    candidate: &PointSet,
    points: &PointSet,
    cap: usize,
    resolution: usize,
) -> Result<AttractorVerdict, AttractorError> {
    let family = system.family();
    let mut checks = vec![
        compact_check(system, candidate, cap, resolution),
        invariance_check(system, candidate, resolution)?,
    ];
    let mut empty = None;
    let mut outside = None;
    for x in points.iter() {
        let j = prolongational_limit(system, x, resolution, None)?;
        let id = &system.space().point(x).id;
        if j.set.is_empty() {
            empty.get_or_insert_with(|| format!("J({id}) is empty"));
        } else if !dominated_at(family, candidate, &j.set, resolution) {
            let stray: Vec<String> = j
                .set
                .iter()
                .filter(|&p| !dominated_at(family, candidate, &PointSet::singleton(system.len(), p), resolution))
                .map(|p| system.space().point(p).id.clone())
                .collect();
            outside.get_or_insert_with(|| format!("J({id}) contains {stray:?} outside the candidate"));
        }
    }
    let budget = Budget::new(system.filter().depth(), points.len());
    checks.push(Check::new(
        "prolongation nonempty",
        empty.is_none(),
        empty,
        budget,
        resolution,
    ));
    checks.push(Check::new(
        "prolongation inside",
        outside.is_none(),
        outside,
        budget,
        resolution,
    ));
    Ok(AttractorVerdict {
        candidate: system.ids(candidate),
        set: candidate.clone(),
        checks,
        attractions: Vec::new(),
    })
}

/// Two candidates coincide at `resolution`, and every supplied bounded
/// invariant set lies within the first.
pub fn check_uniqueness(
    system: &System,
    a1: &PointSet,
    a2: &PointSet,
    invariant_sets: &[(String, PointSet)],
    resolution: usize,
) -> Result<Vec<Check>, AttractorError> {
    let family = system.family();
    let same = equal_at(family, a1, a2, resolution);
    let mut out = vec![Check::new(
        "candidates coincide",
        same,
        (!same).then(|| format!("{:?} vs {:?}", system.ids(a1), system.ids(a2))),
        Budget::exhaustive(2),
        resolution,
    )];
    let mut bad = None;
    let mut used = 0;
    for (name, b) in invariant_sets {
        if b.is_empty() || !is_bounded(b, family).unwrap_or(false) {
            continue;
        }
        if invariance_check(system, b, resolution)?.verdict != Verdict::Pass {
            continue;
        }
        used += 1;
        if !dominated_at(family, a1, b, resolution) {
            bad.get_or_insert_with(|| format!("bounded invariant set {name} leaves the attractor"));
        }
    }
    out.push(Check::new(
        "bounded invariant sets inside",
        bad.is_none(),
        bad,
        Budget::exhaustive(used),
        resolution,
    ));
    Ok(out)
}

/// Everything the equivalence checks consume.
pub struct EquivalenceInput<'a> {
    pub global: &'a AttractorVerdict,
    pub uniform: &'a AttractorVerdict,
    pub taxonomy: &'a TaxonomyReport,
    pub hypotheses: &'a HypothesisReport,
    /// Declared: limit sets of bounded sets are invariant.
    pub omega_invariant: bool,
    /// Verdict on the candidate built from limit sets.
    pub constructed: &'a AttractorVerdict,
    pub resolution: usize,
}

fn implication(name: &str, premises: &[(&str, bool)], conclusion: bool, detail: &str, res: usize) -> Check {
    let unmet: Vec<&str> = premises.iter().filter(|p| !p.1).map(|p| p.0).collect();
    let budget = Budget::exhaustive(premises.len());
    if !unmet.is_empty() {
        return Check::skip(name, format!("unmet: {}", unmet.join(", ")), budget, res);
    }
    Check::new(name, conclusion, (!conclusion).then(|| detail.to_string()), budget, res)
}

/// The theorem-level implications, each evaluated only when its premises
/// hold; skipped checks name the unmet premises.
pub fn check_equivalence(input: &EquivalenceInput<'_>) -> Vec<Check> {
    let tx = input.taxonomy;
    let hy = input.hypotheses;
    let res = input.resolution;
    let global = input.global.passed();
    let uniform = input.uniform.passed();
    let eb = tx.passed("eventually bounded");
    let bd = tx.passed("bounded dissipative");
    let pd = tx.passed("point dissipative");
    let ac = tx.passed("asymptotically compact");
    let lc = tx.passed("limit compact");
    let ec = tx.passed("eventually compact");
    let h3 = hy.passed("H3");
    let h4 = hy.passed("H4");
    vec![
        implication(
            "global => uniform",
            &[("global", global)],
            uniform,
            "global attractor fails the uniform checks",
            res,
        ),
        implication(
            "global => eventually bounded, bounded dissipative, asymptotically compact",
            &[("global", global)],
            eb && bd && ac,
            "a taxonomy verdict fails under a global attractor",
            res,
        ),
        implication(
            "asymptotically compact => limit compact",
            &[("asymptotically compact", ac)],
            lc,
            "limit compactness fails",
            res,
        ),
        implication(
            "limit compact => asymptotically compact (complete space)",
            &[("limit compact", lc)],
            ac,
            "asymptotic compactness fails",
            res,
        ),
        implication(
            "uniform => global (converse)",
            &[
                ("H3", h3),
                ("eventually compact", ec),
                ("asymptotically compact", ac),
                ("uniform", uniform),
            ],
            global,
            "uniform attractor is not global",
            res,
        ),
        implication(
            "global <=> uniform (corollary)",
            &[
                ("H3", h3),
                ("H4", h4),
                ("eventually bounded", eb),
                ("eventually compact", ec),
            ],
            global == uniform,
            "global and uniform verdicts differ",
            res,
        ),
        implication(
            "point dissipative => global attractor exists",
            &[
                ("limit sets invariant", input.omega_invariant),
                ("H3", h3),
                ("H4", h4),
                ("eventually compact", ec),
                ("eventually bounded", eb),
                ("point dissipative", pd),
            ],
            input.constructed.passed(),
            "the limit-set candidate is not a global attractor",
            res,
        ),
        implication(
            "eventually compact, eventually bounded, H4 => asymptotically compact",
            &[("eventually compact", ec), ("eventually bounded", eb), ("H4", h4)],
            ac,
            "asymptotic compactness fails",
            res,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::fixtures::decay;

    #[test]
    fn decay_origin_is_global_and_uniform() {
        let sys = decay();
        let testsets: Vec<(String, PointSet)> = (0..sys.len())
            .map(|x| (format!("s{x}"), PointSet::singleton(sys.len(), x)))
            .collect();
        let c = construct_candidate(&sys, &testsets).unwrap();
        assert_eq!(c.to_vec(), vec![0]);
        let g = verify_global(&sys, &c, &testsets, 3, 5).unwrap();
        assert!(g.passed(), "{:?}", g.checks);
        let u = verify_uniform(&sys, &c, &sys.space().all(), 3, 5).unwrap();
        assert!(u.passed(), "{:?}", u.checks);
        assert_eq!(AttractorKind::from_verdicts(true, true), AttractorKind::Both);
    }

    #[test]
    fn empty_candidate_fails_nonempty() {
        let sys = decay();
        let e = PointSet::empty(sys.len());
        let g = verify_global(&sys, &e, &[("X".into(), sys.space().all())], 3, 5).unwrap();
        assert!(g.check("nonempty").unwrap().failed());
        assert!(g.check("attracts test sets").unwrap().failed());
    }

    #[test]
    fn uniqueness_flags_stray_invariant_set() {
        let sys = decay();
        let origin = PointSet::singleton(sys.len(), 0);
        let ok = check_uniqueness(&sys, &origin, &origin, &[("o".into(), origin.clone())], 5).unwrap();
        assert!(ok.iter().all(Check::passed));
        let one = sys.space().nearest(&[1.0]).unwrap().0;
        let fake = PointSet::singleton(sys.len(), one);
        let bad = check_uniqueness(&sys, &fake, &origin, &[("o".into(), origin.clone())], 5).unwrap();
        assert!(bad.iter().all(Check::failed));
    }
}
