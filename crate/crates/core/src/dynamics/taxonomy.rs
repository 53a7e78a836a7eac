//! Eventually bounded, bounded and point dissipative, asymptotically
//! compact, limit compact and eventually compact actions, verified over a
//! finite family of test sets.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compactness::{bounding_index, is_compact};
use crate::pointset::PointSet;
use crate::report::{Budget, Check};

use super::semigroup::Element;
use super::{absorbs, attracts, DynamicsError, System};

/// A declared sequence `t_k x_k` with `t_k ∈ A_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSequence {
    pub name: String,
    pub elements: Vec<Element>,
    pub points: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct TaxonomyOptions {
    pub cap: usize,
    pub resolution: usize,
    /// Set whose stars are tried first as absorbing sets.
    pub core: Option<PointSet>,
    pub sequences: Vec<WitnessSequence>,
    /// Declared `t` with `cls(tB)` compact for every test set `B`.
    pub eventual_witness: Option<Element>,
    /// Random sequences drawn per test set.
    pub random_sequences: usize,
    /// Extra terms with elements of the deepest level appended to each
    /// random sequence, so that a tail in a finite set must repeat a member.
    pub tail_extension: usize,
    pub seed: u64,
    /// Points whose singletons must be absorbed for point dissipativity.
    pub points: PointSet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyReport {
    pub checks: Vec<Check>,
}

impl TaxonomyReport {
    pub fn passed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn check_dissipativity(
    system: &System,
    testsets: &[(String, PointSet)],
    opts: &TaxonomyOptions,
) -> Result<TaxonomyReport, DynamicsError> {
    if testsets.is_empty() || testsets.iter().any(|(_, t)| t.is_empty()) {
        return Err(DynamicsError::EmptyInput);
    }
    let family = system.family();
    let depth = system.filter().depth();
    let res = opts.resolution.min(family.len() - 1);
    let budget = Budget::new(depth, system.filter().budget());
    let orbits: Vec<Vec<PointSet>> = testsets
        .iter()
        .map(|(_, t)| system.orbits(t))
        .collect::<Result<_, _>>()?;
    let bounded = |y: &PointSet| !y.is_empty() && matches!(bounding_index(y, family), Ok(Some(_)));
    let mut checks = Vec::new();

    let unbounded = testsets
        .iter()
        .zip(&orbits)
        .find(|(_, o)| !o.iter().any(&bounded))
        .map(|((n, _), _)| format!("orbits of {n} are unbounded at every level"));
    checks.push(Check::new(
        "eventually bounded",
        unbounded.is_none(),
        unbounded,
        budget,
        res,
    ));

    let mut candidates: Vec<(String, PointSet)> = Vec::new();
    if let Some(core) = &opts.core {
        if !core.is_empty() {
            for i in family.indices_at(res).collect::<Vec<_>>().into_iter().rev() {
                let d = family.star(core, i);
                if bounded(&d) {
                    candidates.push((format!("St[core,U_{i}]"), d));
                }
            }
        }
    }
    let whole = system.space().all();
    if bounded(&whole) {
        candidates.push(("X".into(), whole));
    }
    let absorbs_all = |d: &PointSet, sets: &mut dyn Iterator<Item = PointSet>| -> Result<bool, DynamicsError> {
        for z in sets {
            if absorbs(system, d, &z)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let mut found = None;
    for (name, d) in &candidates {
        if absorbs_all(d, &mut testsets.iter().map(|t| t.1.clone()))? {
            found = Some(name.clone());
            break;
        }
    }
    checks.push(Check::new(
        "bounded dissipative",
        found.is_some(),
        Some(found.map_or("no bounded candidate absorbs every test set".into(), |n| {
            format!("D={n}")
        })),
        budget,
        res,
    ));

    let mut found = None;
    for (name, d) in &candidates {
        let mut ok = true;
        for (_, t) in testsets {
            if !attracts(system, d, t, res)?.attracts {
                ok = false;
                break;
            }
        }
        if ok {
            found = Some(name.clone());
            break;
        }
    }
    checks.push(Check::new(
        "bounded dissipative (attraction form)",
        found.is_some(),
        Some(
            found.map_or("no bounded candidate attracts every test set".into(), |n| {
                format!("D={n}")
            }),
        ),
        budget,
        res,
    ));

    let mut found = None;
    for (name, d) in &candidates {
        let singles = opts.points.iter().map(|x| PointSet::singleton(system.len(), x));
        if absorbs_all(d, &mut singles.into_iter())? {
            found = Some(name.clone());
            break;
        }
    }
    checks.push(Check::new(
        "point dissipative",
        found.is_some(),
        Some(found.map_or("no bounded candidate absorbs every point".into(), |n| format!("D={n}"))),
        budget,
        res,
    ));

    // declared sequences first, so their escapes are the ones reported
    let mut sequences: Vec<(String, Vec<Element>, Vec<usize>)> = Vec::new();
    for w in &opts.sequences {
        let pts = w
            .points
            .iter()
            .map(|id| {
                system
                    .space()
                    .index_of(id)
                    .ok_or_else(|| DynamicsError::Incompatible(format!("unknown point {id}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if pts.len() != w.elements.len() {
            return Err(DynamicsError::Incompatible(format!(
                "sequence {} has mismatched lengths",
                w.name
            )));
        }
        for (k, e) in w.elements.iter().enumerate() {
            if !system.filter().contains(k, e) {
                return Err(DynamicsError::Incompatible(format!(
                    "sequence {}: element {e} is not in level {k}",
                    w.name
                )));
            }
        }
        sequences.push((w.name.clone(), w.elements.clone(), pts));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (name, t) in testsets {
        let members = t.to_vec();
        for r in 0..opts.random_sequences {
            let len = depth + 1 + opts.tail_extension;
            let elems: Vec<Element> = (0..len)
                .map(|k| {
                    system
                        .filter()
                        .raw(k.min(depth))
                        .choose(&mut rng)
                        .expect("nonempty level")
                        .clone()
                })
                .collect();
            let pts: Vec<usize> = (0..len)
                .map(|_| *members.choose(&mut rng).expect("nonempty test set"))
                .collect();
            sequences.push((format!("{name}#{r}"), elems, pts));
        }
    }
    let mut escape = None;
    for (name, elems, pts) in &sequences {
        let terms = elems
            .iter()
            .zip(pts)
            .map(|(e, &x)| system.apply(e, x))
            .collect::<Result<Vec<_>, _>>()?;
        let tail = &terms[terms.len() / 2..];
        for i in family.indices_at(res) {
            let c = family.covering(i);
            let mut hits = vec![0usize; c.len()];
            for &q in tail {
                for m in c.members_containing(q).iter() {
                    hits[m] += 1;
                }
            }
            if hits.iter().all(|&h| h < 2) {
                let ids: Vec<&str> = tail.iter().map(|&q| system.space().point(q).id.as_str()).collect();
                escape = Some(format!(
                    "{name}: tail [{}] has no two terms in one member of U_{i}",
                    ids.join(", ")
                ));
                break;
            }
        }
        if escape.is_some() {
            break;
        }
    }
    checks.push(Check::new(
        "asymptotically compact",
        escape.is_none(),
        escape,
        Budget::new(depth, sequences.len()),
        res,
    ));

    let mut bad = None;
    'lc: for ((name, _), o) in testsets.iter().zip(&orbits) {
        let deepest = &o[depth];
        for i in family.indices_at(res) {
            if family.covering(i).min_member_cover(deepest, opts.cap).is_none() {
                bad = Some(format!("A_{depth}{name} needs more than {} members of U_{i}", opts.cap));
                break 'lc;
            }
        }
    }
    checks.push(Check::new("limit compact", bad.is_none(), bad, budget, res));

    match &opts.eventual_witness {
        None => checks.push(Check::skip(
            "eventually compact",
            "no compactifying element declared",
            budget,
            res,
        )),
        Some(t) => {
            let mut bad = None;
            for (name, set) in testsets {
                let img = system.image(t, set)?;
                let cls = family.closure_at(&img, family.len() - 1);
                if !is_compact(&cls, family, opts.cap) {
                    bad = Some(format!("cls({t}{name}) is not compact at cap {}", opts.cap));
                    break;
                }
            }
            checks.push(Check::new(
                "eventually compact",
                bad.is_none(),
                bad.or(Some(format!("t={t}"))),
                budget,
                res,
            ));
        }
    }
    Ok(TaxonomyReport { checks })
}
