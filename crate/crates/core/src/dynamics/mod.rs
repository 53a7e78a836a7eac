//! Semigroup actions on a finite sample: orbits, limit sets, attraction,
//! the translation hypotheses and the dissipativity taxonomy.

mod hypotheses;
mod maps;
mod semigroup;
mod taxonomy;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::covering::{AdmissibleFamily, FamilyKind};
use crate::pointset::PointSet;
use crate::proximity::{converges_to_o, rho_semi};
use crate::report::{Budget, Check};
use crate::space::Space;

pub use hypotheses::{check_hypotheses, HypothesisFailure, HypothesisReport, DEFAULT_ENUMERATION_BOUND};
pub use maps::{PointMap, ScaleMap, TableMap};
pub use semigroup::{Element, FilterBasis, FilterSpec, SemigroupKind};
pub use taxonomy::{check_dissipativity, TaxonomyOptions, TaxonomyReport, WitnessSequence};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("input set is empty")]
    EmptyInput,
    #[error("filter level {0} is empty")]
    EmptyLevel(usize),
    #[error("filter levels are not nested: {element} sampled at level {level} misses a coarser level")]
    NestingViolation { level: usize, element: String },
    #[error("element {0} does not belong to the semigroup")]
    ForeignElement(String),
    #[error("snapping {element} applied to {point} moves {error} off the sample, tolerance {tolerance}")]
    SnapToleranceExceeded {
        element: String,
        point: String,
        error: f64,
        tolerance: f64,
    },
    #[error("incompatible input: {0}")]
    Incompatible(String),
    #[error("family and space have different sizes")]
    SpaceMismatch,
}

/// A semigroup acting on a sampled space, with its covering family and
/// filter basis. Images of every sampled element are tabulated on
/// construction.
#[derive(Debug, Clone)]
pub struct System {
    space: Space<f64>,
    family: AdmissibleFamily,
    filter: FilterBasis,
    map: Arc<dyn PointMap>,
    tables: HashMap<Element, Vec<usize>>,
    max_snap: f64,
}

impl PartialEq for System {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.family == other.family
            && self.filter == other.filter
            && self.tables == other.tables
    }
}

impl System {
    pub fn new(
        space: Space<f64>,
        family: AdmissibleFamily,
        filter: FilterBasis,
        map: Arc<dyn PointMap>,
        snap_tolerance: Option<f64>,
    ) -> Result<Self, DynamicsError> {
        if family.universe() != space.len() {
            return Err(DynamicsError::SpaceMismatch);
        }
        let mut tables = HashMap::new();
        let mut max_snap: f64 = 0.0;
        for e in filter.sample(0) {
            let mut row = Vec::with_capacity(space.len());
            for x in 0..space.len() {
                let (y, err) = map.apply(&space, e, x)?;
                if let Some(tol) = snap_tolerance {
                    if err > tol {
                        return Err(DynamicsError::SnapToleranceExceeded {
                            element: e.to_string(),
                            point: space.point(x).id.clone(),
                            error: err,
                            tolerance: tol,
                        });
                    }
                }
                max_snap = max_snap.max(err);
                row.push(y);
            }
            tables.insert(e.clone(), row);
        }
        Ok(System {
            space,
            family,
            filter,
            map,
            tables,
            max_snap,
        })
    }

    pub fn space(&self) -> &Space<f64> {
        &self.space
    }

    pub fn family(&self) -> &AdmissibleFamily {
        &self.family
    }

    pub fn filter(&self) -> &FilterBasis {
        &self.filter
    }

    pub fn semigroup(&self) -> &SemigroupKind {
        self.filter.semigroup()
    }

    pub fn max_snap_error(&self) -> f64 {
        self.max_snap
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// `s x`, from the table when `s` is sampled.
    pub fn apply(&self, s: &Element, x: usize) -> Result<usize, DynamicsError> {
        if let Some(row) = self.tables.get(s) {
            return Ok(row[x]);
        }
        if !self.semigroup().contains(s) {
            return Err(DynamicsError::ForeignElement(s.to_string()));
        }
        Ok(self.map.apply(&self.space, s, x)?.0)
    }

    /// Distance between the exact image of `x` under `s` and its snapped image.
    pub fn snap_error(&self, s: &Element, x: usize) -> Result<f64, DynamicsError> {
        Ok(self.map.apply(&self.space, s, x)?.1)
    }

    pub fn image(&self, s: &Element, y: &PointSet) -> Result<PointSet, DynamicsError> {
        let mut out = PointSet::empty(self.len());
        if let Some(row) = self.tables.get(s) {
            for x in y.iter() {
                out.insert(row[x]);
            }
        } else {
            for x in y.iter() {
                out.insert(self.apply(s, x)?);
            }
        }
        Ok(out)
    }

    /// `A_level Y` over the sample of `A_level`.
    pub fn orbit(&self, level: usize, y: &PointSet) -> Result<PointSet, DynamicsError> {
        if y.is_empty() {
            return Err(DynamicsError::EmptyInput);
        }
        let mut out = PointSet::empty(self.len());
        for e in self.filter.sample(level) {
            let row = &self.tables[e];
            for x in y.iter() {
                out.insert(row[x]);
            }
        }
        Ok(out)
    }

    /// `A_k Y` for every level `k = 0..=depth`, in one pass over the sample.
    pub fn orbits(&self, y: &PointSet) -> Result<Vec<PointSet>, DynamicsError> {
        if y.is_empty() {
            return Err(DynamicsError::EmptyInput);
        }
        let depth = self.filter.depth();
        let mut exact = vec![PointSet::empty(self.len()); depth + 1];
        for e in self.filter.sample(0) {
            let top = self.filter.top_level(e).unwrap_or(0);
            let row = &self.tables[e];
            for x in y.iter() {
                exact[top].insert(row[x]);
            }
        }
        for k in (0..depth).rev() {
            let deeper = exact[k + 1].clone();
            exact[k].union_with(&deeper);
        }
        Ok(exact)
    }

    /// Ids of the points of a set.
    pub fn ids(&self, y: &PointSet) -> Vec<String> {
        y.iter().map(|i| self.space.point(i).id.clone()).collect()
    }

    /// Resolves point ids into a set.
    pub fn set_of(&self, ids: &[String]) -> Result<PointSet, DynamicsError> {
        let mut out = PointSet::empty(self.len());
        for id in ids {
            let i = self
                .space
                .index_of(id)
                .ok_or_else(|| DynamicsError::Incompatible(format!("unknown point {id}")))?;
            out.insert(i);
        }
        Ok(out)
    }
}

/// A point of a limit set with an element and source whose image lies in
/// the point's star at the certified resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitWitness {
    pub point: String,
    pub element: Element,
    pub source: String,
    pub image: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitSetReport {
    pub points: Vec<String>,
    #[serde(skip)]
    pub set: PointSet,
    /// Covering index at which membership was certified.
    pub resolution: usize,
    /// Deepest filter level used.
    pub truncation: usize,
    pub witnesses: Vec<LimitWitness>,
}

/// `ω(Y) = ⋂_k cls(A_k Y)` with closures taken over the whole truncated family.
pub fn omega_limit(system: &System, y: &PointSet) -> Result<LimitSetReport, DynamicsError> {
    let family = system.family();
    let orbits = system.orbits(y)?;
    let res = family.len() - 1;
    let mut set = PointSet::full(system.len());
    for o in &orbits {
        set.intersect_with(&family.closure_at(o, res));
    }
    limit_report(system, set, y)
}

fn limit_report(system: &System, set: PointSet, sources: &PointSet) -> Result<LimitSetReport, DynamicsError> {
    let family = system.family();
    let finest = family.covering(family.finest());
    let depth = system.filter().depth();
    let mut witnesses = Vec::new();
    for p in set.iter() {
        let star = finest.point_star(p);
        let mut found = None;
        'search: for e in system.filter().sample(depth) {
            for x in sources.iter() {
                let img = system.apply(e, x)?;
                if star.contains(img) {
                    found = Some((e.clone(), x, img));
                    break 'search;
                }
            }
        }
        if let Some((e, x, img)) = found {
            witnesses.push(LimitWitness {
                point: system.space().point(p).id.clone(),
                element: e,
                source: system.space().point(x).id.clone(),
                image: system.space().point(img).id.clone(),
            });
        }
    }
    Ok(LimitSetReport {
        points: system.ids(&set),
        set,
        resolution: family.finest(),
        truncation: depth,
        witnesses,
    })
}

/// Forward prolongational limit set `J(x)`: limit points of divergent
/// orbits started from `St[x, U_i]`, `i <= perturb_depth`, optionally
/// intersected with `within`. On a chain the stars are nested, so the
/// intersection over `i` is the term at `perturb_depth`.
pub fn prolongational_limit(
    system: &System,
    x: usize,
    perturb_depth: usize,
    within: Option<&PointSet>,
) -> Result<LimitSetReport, DynamicsError> {
    let family = system.family();
    let single = PointSet::singleton(system.len(), x);
    let neighborhood = |i: usize| {
        let mut n = family.star(&single, i);
        if let Some(w) = within {
            n.intersect_with(w);
            n.insert(x);
        }
        n
    };
    match family.kind() {
        FamilyKind::Chain => {
            let i = perturb_depth.min(family.len() - 1);
            omega_limit(system, &neighborhood(i))
        }
        FamilyKind::Finite => {
            let mut set = PointSet::full(system.len());
            let mut union = PointSet::empty(system.len());
            for i in 0..family.len() {
                let n = neighborhood(i);
                set.intersect_with(&omega_limit(system, &n)?.set);
                union.union_with(&n);
            }
            limit_report(system, set, &union)
        }
    }
}

/// An element and point whose image escapes `St[Y, U_index]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Escape {
    pub index: usize,
    pub level: usize,
    pub element: Element,
    pub point: String,
    pub image: String,
    #[serde(skip)]
    pub point_index: usize,
    #[serde(skip)]
    pub image_index: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractionReport {
    pub resolution: usize,
    /// Least filter level absorbing `Z` into `St[Y, U_i]`, per index.
    pub levels: Vec<Option<usize>>,
    pub attracts: bool,
    /// Escape at the deepest level for every failing index.
    pub escapes: Vec<Escape>,
    /// Convergence of `ρ_Y(t_k Z)` along the tested divergent sequences.
    pub sequence_converges: bool,
    /// The level search and the sequence formulation give the same answer.
    pub agrees: bool,
}

/// Whether `Y` attracts `Z` at every index up to `resolution`, cross-checked
/// against the sequence formulation `ρ_Y(t_k Z) → O`.
pub fn attracts(
    system: &System,
    y: &PointSet,
    z: &PointSet,
    resolution: usize,
) -> Result<AttractionReport, DynamicsError> {
    if y.is_empty() || z.is_empty() {
        return Err(DynamicsError::EmptyInput);
    }
    let family = system.family();
    let filter = system.filter();
    let depth = filter.depth();
    let indices: Vec<usize> = family.indices_at(resolution).collect();
    let stars: Vec<PointSet> = indices.iter().map(|&i| family.star(y, i)).collect();
    let orbits = system.orbits(z)?;
    let mut levels = Vec::with_capacity(indices.len());
    let mut escapes = Vec::new();
    let mut sequences: Vec<Vec<Element>> = vec![(0..=depth).map(|k| filter.raw(k)[0].clone()).collect()];
    for (pos, &i) in indices.iter().enumerate() {
        let level = (0..=depth).find(|&k| orbits[k].is_subset(&stars[pos]));
        levels.push(level);
        if level.is_none() {
            let per_level = (0..=depth)
                .map(|k| farthest_escape(system, y, z, &stars[pos], i, k))
                .collect::<Result<Vec<_>, _>>()?;
            let per_level: Vec<Escape> = per_level.into_iter().map(|e| e.expect("level fails")).collect();
            sequences.push(per_level.iter().map(|e| e.element.clone()).collect());
            escapes.push(per_level[depth].clone());
        }
    }
    let attracts = levels.iter().all(Option::is_some);
    let mut sequence_converges = true;
    for seq in &sequences {
        let trace = seq
            .iter()
            .map(|t| {
                let img = system.image(t, z)?;
                rho_semi(family, y, &img).map_err(|_| DynamicsError::EmptyInput)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let conv = converges_to_o(family, &trace);
        if !indices.iter().all(|&i| conv.k0[i].is_some()) {
            sequence_converges = false;
        }
    }
    Ok(AttractionReport {
        resolution,
        levels,
        attracts,
        escapes,
        sequence_converges,
        agrees: attracts == sequence_converges,
    })
}

/// Escape from `target` at level `k` farthest from `Y`: fewest indices in
/// `ρ_Y(image)`, then largest distance to `Y`, then first in sample order.
fn farthest_escape(
    system: &System,
    y: &PointSet,
    z: &PointSet,
    target: &PointSet,
    index: usize,
    k: usize,
) -> Result<Option<Escape>, DynamicsError> {
    let family = system.family();
    let space = system.space();
    let mut best: Option<(usize, f64, Escape)> = None;
    for e in system.filter().sample(k) {
        for x in z.iter() {
            let img = system.apply(e, x)?;
            if target.contains(img) {
                continue;
            }
            let close = (0..family.len())
                .filter(|&i| family.covering(i).point_star(img).intersects(y))
                .count();
            let dist = y.iter().map(|p| space.distance(p, img)).fold(f64::INFINITY, f64::min);
            let better = match &best {
                None => true,
                Some((c, d, _)) => close < *c || (close == *c && dist > *d),
            };
            if better {
                best = Some((
                    close,
                    dist,
                    Escape {
                        index,
                        level: k,
                        element: e.clone(),
                        point: space.point(x).id.clone(),
                        image: space.point(img).id.clone(),
                        point_index: x,
                        image_index: img,
                    },
                ));
            }
        }
    }
    Ok(best.map(|b| b.2))
}

/// Least level `k` with `A_k Z ⊆ Y`.
pub fn absorbs(system: &System, y: &PointSet, z: &PointSet) -> Result<Option<usize>, DynamicsError> {
    if y.is_empty() || z.is_empty() {
        return Err(DynamicsError::EmptyInput);
    }
    let orbits = system.orbits(z)?;
    Ok((0..orbits.len()).find(|&k| orbits[k].is_subset(y)))
}

/// `s(tx) = (st)x` and `(st)u = s(tu)` on the first `per` sampled elements.
pub fn check_associativity(system: &System, per: usize) -> Result<Vec<Check>, DynamicsError> {
    let sg = system.semigroup();
    let elems: Vec<&Element> = system.filter().sample(0).iter().take(per).collect();
    let budget = Budget::new(0, elems.len());
    let mut action_witness = None;
    'act: for s in &elems {
        for t in &elems {
            let st = sg
                .compose(s, t)
                .ok_or_else(|| DynamicsError::ForeignElement(format!("{s}·{t}")))?;
            for x in 0..system.len() {
                let lhs = system.apply(s, system.apply(t, x)?)?;
                let rhs = system.apply(&st, x)?;
                if lhs != rhs {
                    action_witness = Some(format!(
                        "s={s} t={t} x={}: s(tx)={} (st)x={}",
                        system.space().point(x).id,
                        system.space().point(lhs).id,
                        system.space().point(rhs).id
                    ));
                    break 'act;
                }
            }
        }
    }
    let mut compose_witness = None;
    'comp: for s in &elems {
        for t in &elems {
            for u in &elems {
                let a = sg.compose(&sg.compose(s, t).unwrap(), u);
                let b = sg.compose(s, &sg.compose(t, u).unwrap());
                if a != b {
                    compose_witness = Some(format!("s={s} t={t} u={u}"));
                    break 'comp;
                }
            }
        }
    }
    Ok(vec![
        Check::new(
            "action associativity",
            action_witness.is_none(),
            action_witness,
            budget,
            0,
        ),
        Check::new(
            "semigroup associativity",
            compose_witness.is_none(),
            compose_witness,
            budget,
            0,
        ),
    ])
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::covering::metric_chain_family;
    use crate::space::MetricKind;

    /// Points `{0} ∪ {2^-e : e = 0..=10}` with `n x = 2^-n x` under `(N,+)`.
    pub fn decay() -> System {
        let mut coords = vec![vec![0.0]];
        coords.extend((0..=10).map(|e| vec![2f64.powi(-e)]));
        let space = Space::metric(coords, MetricKind::Euclidean).unwrap();
        let family = metric_chain_family(&space, 0.9, 5).unwrap();
        let filter = FilterBasis::new(FilterSpec::Tails, SemigroupKind::NatAdd, 12, 32).unwrap();
        let eps = 0.9 / 4f64.powi(5);
        System::new(space, family, filter, Arc::new(ScaleMap { factor: 0.5 }), Some(eps)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::decay;
    use super::*;

    fn one(sys: &System) -> PointSet {
        PointSet::singleton(sys.len(), sys.space().nearest(&[1.0]).unwrap().0)
    }

    #[test]
    fn decay_absorption_level() {
        let sys = decay();
        let ball = sys.space().ball(0, 0.1).unwrap();
        assert_eq!(absorbs(&sys, &ball, &one(&sys)).unwrap(), Some(4));
        let tiny = PointSet::singleton(sys.len(), 0);
        let everything = sys.space().all();
        assert_eq!(absorbs(&sys, &everything, &tiny).unwrap(), Some(0));
    }

    #[test]
    fn decay_omega_is_origin() {
        let sys = decay();
        let w = omega_limit(&sys, &one(&sys)).unwrap();
        assert_eq!(w.set.to_vec(), vec![0]);
        assert_eq!(w.witnesses.len(), 1);
        assert_eq!(w.truncation, 12);
    }

    #[test]
    fn orbit_levels_are_nested() {
        let sys = decay();
        let o = sys.orbits(&one(&sys)).unwrap();
        for k in 1..o.len() {
            assert!(o[k].is_subset(&o[k - 1]));
            assert_eq!(o[k], sys.orbit(k, &one(&sys)).unwrap());
        }
        assert!(o[0].contains(one(&sys).first().unwrap()));
    }

    #[test]
    fn origin_attracts_everything() {
        let sys = decay();
        let origin = PointSet::singleton(sys.len(), 0);
        let r = attracts(&sys, &origin, &sys.space().all(), 5).unwrap();
        assert!(r.attracts);
        assert!(r.agrees);
        let far = one(&sys);
        let r = attracts(&sys, &far, &origin, 5).unwrap();
        assert!(!r.attracts);
        assert!(r.agrees);
        assert!(!r.escapes.is_empty());
    }

    #[test]
    fn omega_inside_prolongation() {
        let sys = decay();
        for x in 0..sys.len() {
            let s = PointSet::singleton(sys.len(), x);
            let w = omega_limit(&sys, &s).unwrap();
            let j = prolongational_limit(&sys, x, 5, None).unwrap();
            assert!(w.set.is_subset(&j.set));
        }
    }

    #[test]
    fn decay_is_associative() {
        let sys = decay();
        let checks = check_associativity(&sys, 10).unwrap();
        assert!(checks.iter().all(Check::passed));
    }

    #[test]
    fn snap_tolerance_enforced() {
        let sys = decay();
        let filter = sys.filter().clone();
        let err = System::new(
            sys.space().clone(),
            sys.family().clone(),
            filter,
            Arc::new(ScaleMap { factor: 0.3 }),
            Some(1e-6),
        );
        assert!(matches!(err, Err(DynamicsError::SnapToleranceExceeded { .. })));
    }
}
