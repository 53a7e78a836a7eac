//! Open coverings, stars, refinement calculus and admissible covering families.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::pointset::PointSet;
use crate::report::{Budget, Check};
use crate::scalar::Scalar;
use crate::space::{Space, SpaceError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoveringError {
    #[error("input set is empty")]
    EmptyInput,
    #[error("coverings live on spaces of different size ({0} vs {1})")]
    SpaceMismatch(usize, usize),
    #[error("point {0} is not covered")]
    NotACover(usize),
    #[error("member {0} is not open in the space")]
    NotOpen(usize),
    #[error("chain level {0} is indistinguishable from level {1}")]
    DegenerateChain(usize, usize),
    #[error("level {fine} does not double-refine level {coarse}: members {pair:?}")]
    DoubleRefinementFailed {
        fine: usize,
        coarse: usize,
        pair: (usize, usize),
    },
    #[error("{count} opens exceed the enumeration guard of {limit}")]
    TooManyOpens { count: usize, limit: usize },
    #[error("operation is only defined for finite-kind families")]
    ChainKindUnsupported,
    #[error("operation needs a finite topological space")]
    NotFiniteTopology,
    #[error("family must contain at least one covering")]
    EmptyFamily,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A covering of the points `0..universe` by nonempty sets.
///
/// Members are deduplicated and stored in canonical order; the star of every
/// point is cached.
#[derive(Clone, PartialEq, Eq)]
pub struct Covering {
    universe: usize,
    members: Vec<PointSet>,
    point_stars: Vec<PointSet>,
    containing: Vec<PointSet>,
}

impl std::fmt::Debug for Covering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.members.iter()).finish()
    }
}

impl Covering {
    pub fn new(universe: usize, members: Vec<PointSet>) -> Result<Self, CoveringError> {
        let mut seen = HashSet::new();
        let mut uniq = Vec::new();
        for m in members {
            if m.universe() != universe {
                return Err(CoveringError::SpaceMismatch(universe, m.universe()));
            }
            if m.is_empty() {
                continue;
            }
            if seen.insert(m.clone()) {
                uniq.push(m);
            }
        }
        uniq.sort_by_cached_key(|m| m.to_vec());
        let mut covered = PointSet::empty(universe);
        for m in &uniq {
            covered.union_with(m);
        }
        if let Some(p) = covered.complement().first() {
            return Err(CoveringError::NotACover(p));
        }
        let mut containing = vec![PointSet::empty(uniq.len()); universe];
        for (i, m) in uniq.iter().enumerate() {
            for p in m.iter() {
                containing[p].insert(i);
            }
        }
        let point_stars = containing
            .iter()
            .map(|ms| {
                let mut s = PointSet::empty(universe);
                for i in ms.iter() {
                    s.union_with(&uniq[i]);
                }
                s
            })
            .collect();
        Ok(Covering {
            universe,
            members: uniq,
            point_stars,
            containing,
        })
    }

    pub fn whole(universe: usize) -> Self {
        Self::new(universe, vec![PointSet::full(universe)]).expect("whole space covers")
    }

    pub fn singletons(universe: usize) -> Self {
        Self::new(
            universe,
            (0..universe).map(|p| PointSet::singleton(universe, p)).collect(),
        )
        .expect("singletons cover")
    }

    /// Keeps only members not strictly contained in another member. Stars,
    /// refinement and double refinement are unchanged.
    pub fn reduced(&self) -> Covering {
        let keep: Vec<PointSet> = self
            .members
            .iter()
            .filter(|m| !self.members.iter().any(|o| o != *m && m.is_subset(o)))
            .cloned()
            .collect();
        Covering::new(self.universe, keep).expect("maximal members still cover")
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[PointSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn point_star(&self, x: usize) -> &PointSet {
        &self.point_stars[x]
    }

    /// Indices of members containing `x`.
    pub fn members_containing(&self, x: usize) -> &PointSet {
        &self.containing[x]
    }

    pub fn star(&self, y: &PointSet) -> Result<PointSet, CoveringError> {
        if y.universe() != self.universe {
            return Err(CoveringError::SpaceMismatch(self.universe, y.universe()));
        }
        if y.is_empty() {
            return Err(CoveringError::EmptyInput);
        }
        Ok(self.star_of(y))
    }

    /// Star without input validation; the star of the empty set is empty.
    pub fn star_of(&self, y: &PointSet) -> PointSet {
        let mut s = PointSet::empty(self.universe);
        for x in y.iter() {
            s.union_with(&self.point_stars[x]);
        }
        s
    }

    fn check_same(&self, other: &Covering) -> Result<(), CoveringError> {
        if self.universe != other.universe {
            Err(CoveringError::SpaceMismatch(self.universe, other.universe))
        } else {
            Ok(())
        }
    }

    /// Every member of `self` lies inside some member of `other`.
    pub fn refines(&self, other: &Covering) -> Result<bool, CoveringError> {
        self.check_same(other)?;
        Ok(self
            .members
            .iter()
            .all(|v| other.members.iter().any(|u| v.is_subset(u))))
    }

    /// For each member of `self`, the indices of members of `other` containing it.
    fn containers(&self, other: &Covering) -> Vec<PointSet> {
        self.members
            .iter()
            .map(|v| {
                PointSet::from_indices(
                    other.len(),
                    other
                        .members
                        .iter()
                        .enumerate()
                        .filter(|(_, u)| v.is_subset(u))
                        .map(|(i, _)| i),
                )
            })
            .collect()
    }

    /// First pair of intersecting members whose union fits in no member of `other`.
    pub fn double_refinement_failure(&self, other: &Covering) -> Result<Option<(usize, usize)>, CoveringError> {
        self.check_same(other)?;
        let cont = self.containers(other);
        for a in 0..self.len() {
            if cont[a].is_empty() {
                return Ok(Some((a, a)));
            }
            for b in a + 1..self.len() {
                if self.members[a].intersects(&self.members[b]) && !cont[a].intersects(&cont[b]) {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn double_refines(&self, other: &Covering) -> Result<bool, CoveringError> {
        Ok(self.double_refinement_failure(other)?.is_none())
    }

    /// Minimal number of members needed to cover `y`, searched up to `limit`.
    pub fn min_member_cover(&self, y: &PointSet, limit: usize) -> Option<usize> {
        let candidates: Vec<PointSet> = self.members.to_vec();
        crate::compactness::min_cover(y, &candidates, limit)
    }
}

/// `V ⩽ 2^-n U`: a witness chain of `n` successive double refinements from
/// `v` to `u` whose intermediate coverings come from `pool`.
pub fn n_refines(v: &Covering, u: &Covering, n: usize, pool: &[Covering]) -> Result<bool, CoveringError> {
    v.check_same(u)?;
    if n == 0 {
        return v.refines(u);
    }
    if n == 1 {
        return v.double_refines(u);
    }
    let mut frontier: Vec<usize> = Vec::new();
    for (i, w) in pool.iter().enumerate() {
        if v.double_refines(w)? {
            frontier.push(i);
        }
    }
    for _ in 0..n - 2 {
        let mut next = Vec::new();
        for (j, w) in pool.iter().enumerate() {
            let mut hit = false;
            for &i in &frontier {
                if pool[i].double_refines(w)? {
                    hit = true;
                    break;
                }
            }
            if hit {
                next.push(j);
            }
        }
        frontier = next;
    }
    for &i in &frontier {
        if pool[i].double_refines(u)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `U_0, U_1, ...` with each level double-refining its predecessor.
    Chain,
    /// An arbitrary finite family, typically all open coverings of a finite topology.
    Finite,
}

static NEXT_FAMILY_ID: AtomicU64 = AtomicU64::new(1);

/// An indexed family of coverings with precomputed refinement relations.
#[derive(Clone, Debug)]
pub struct AdmissibleFamily {
    kind: FamilyKind,
    universe: usize,
    coverings: Vec<Covering>,
    refine: Vec<PointSet>,
    double: Vec<PointSet>,
    id: u64,
}

impl PartialEq for AdmissibleFamily {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.coverings == other.coverings
    }
}

impl AdmissibleFamily {
    /// Builds a chain, verifying that every level double-refines the previous one.
    pub fn chain(coverings: Vec<Covering>) -> Result<Self, CoveringError> {
        if coverings.is_empty() {
            return Err(CoveringError::EmptyFamily);
        }
        let universe = coverings[0].universe();
        for c in &coverings {
            if c.universe() != universe {
                return Err(CoveringError::SpaceMismatch(universe, c.universe()));
            }
        }
        let discrete = Covering::singletons(universe);
        for i in 1..coverings.len() {
            if coverings[i] == coverings[i - 1] && coverings[i] != discrete {
                return Err(CoveringError::DegenerateChain(i, i - 1));
            }
            if let Some(pair) = coverings[i].double_refinement_failure(&coverings[i - 1])? {
                return Err(CoveringError::DoubleRefinementFailed {
                    fine: i,
                    coarse: i - 1,
                    pair,
                });
            }
        }
        let n = coverings.len();
        let mut refine = vec![PointSet::empty(n); n];
        let mut double = vec![PointSet::empty(n); n];
        for i in 0..n {
            for j in 0..n {
                if j < i {
                    // implied by the verified chain
                    refine[i].insert(j);
                    double[i].insert(j);
                } else {
                    if coverings[i].refines(&coverings[j])? {
                        refine[i].insert(j);
                    }
                    if coverings[i].double_refines(&coverings[j])? {
                        double[i].insert(j);
                    }
                }
            }
        }
        Ok(AdmissibleFamily {
            kind: FamilyKind::Chain,
            universe,
            coverings,
            refine,
            double,
            id: NEXT_FAMILY_ID.fetch_add(1, Ordering::Relaxed),
        })
    }

    /// Builds an unordered finite family with exhaustive relation tables.
    pub fn finite(coverings: Vec<Covering>) -> Result<Self, CoveringError> {
        if coverings.is_empty() {
            return Err(CoveringError::EmptyFamily);
        }
        let universe = coverings[0].universe();
        let n = coverings.len();
        let mut refine = vec![PointSet::empty(n); n];
        let mut double = vec![PointSet::empty(n); n];
        for i in 0..n {
            for j in 0..n {
                if coverings[i].refines(&coverings[j])? {
                    refine[i].insert(j);
                }
                if coverings[i].double_refines(&coverings[j])? {
                    double[i].insert(j);
                }
            }
        }
        Ok(AdmissibleFamily {
            kind: FamilyKind::Finite,
            universe,
            coverings,
            refine,
            double,
            id: NEXT_FAMILY_ID.fetch_add(1, Ordering::Relaxed),
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.coverings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coverings.is_empty()
    }

    pub fn coverings(&self) -> &[Covering] {
        &self.coverings
    }

    pub fn covering(&self, i: usize) -> &Covering {
        &self.coverings[i]
    }

    /// Index of the finest covering (the last chain level, or the finest
    /// covering of a finite family that refines every other one).
    pub fn finest(&self) -> usize {
        match self.kind {
            FamilyKind::Chain => self.len() - 1,
            FamilyKind::Finite => (0..self.len())
                .find(|&i| self.refine[i].is_full())
                .unwrap_or(self.len() - 1),
        }
    }

    /// `U_i` refines `U_j`.
    pub fn refines(&self, i: usize, j: usize) -> bool {
        self.refine[i].contains(j)
    }

    /// `U_i` double-refines `U_j`.
    pub fn double_refines(&self, i: usize, j: usize) -> bool {
        self.double[i].contains(j)
    }

    /// Indices `j` reachable from `i` by exactly `n` double refinements.
    pub fn n_refinement_targets(&self, i: usize, n: usize) -> PointSet {
        let mut cur = PointSet::singleton(self.len(), i);
        for _ in 0..n {
            let mut next = PointSet::empty(self.len());
            for a in cur.iter() {
                next.union_with(&self.double[a]);
            }
            cur = next;
        }
        cur
    }

    /// Indices considered at a resolution: every covering for finite
    /// families, `0..=r` for chains.
    pub fn indices_at(&self, resolution: usize) -> impl Iterator<Item = usize> {
        let end = match self.kind {
            FamilyKind::Chain => resolution.min(self.len() - 1) + 1,
            FamilyKind::Finite => self.len(),
        };
        0..end
    }

    pub fn star(&self, y: &PointSet, i: usize) -> PointSet {
        self.coverings[i].star_of(y)
    }

    /// `cls(Y) = ⋂ St[Y, U]` over the family.
    pub fn closure(&self, y: &PointSet) -> Result<PointSet, CoveringError> {
        if y.is_empty() {
            return Err(CoveringError::EmptyInput);
        }
        Ok(self.closure_at(y, self.len() - 1))
    }

    /// Closure restricted to the coverings considered at `resolution`.
    pub fn closure_at(&self, y: &PointSet, resolution: usize) -> PointSet {
        let mut out = PointSet::full(self.universe);
        for i in self.indices_at(resolution) {
            out.intersect_with(&self.coverings[i].star_of(y));
        }
        out
    }
}

/// `U_i = {B(x, eps0 * 4^-i) : x ∈ X}` for `i = 0..=depth`.
pub fn metric_chain_family<T: Scalar>(
    space: &Space<T>,
    eps0: T,
    depth: usize,
) -> Result<AdmissibleFamily, CoveringError> {
    if !space.is_metric() {
        return Err(SpaceError::NotMetricSpace.into());
    }
    let four = T::from_f64(4.0).unwrap();
    let mut coverings = Vec::with_capacity(depth + 1);
    let mut eps = eps0;
    for _ in 0..=depth {
        let balls = (0..space.len())
            .map(|c| space.ball(c, eps))
            .collect::<Result<Vec<_>, _>>()?;
        coverings.push(Covering::new(space.len(), balls)?);
        eps = eps / four;
    }
    AdmissibleFamily::chain(coverings)
}

/// Guard on the number of opens for covering enumeration.
pub const MAX_ENUMERATED_OPENS: usize = 12;

/// All open coverings of a finite topological space.
pub fn enumerate_open_coverings<T: Scalar>(space: &Space<T>) -> Result<Vec<Covering>, CoveringError> {
    let opens = space.opens().ok_or(CoveringError::NotFiniteTopology)?;
    if opens.len() > MAX_ENUMERATED_OPENS {
        return Err(CoveringError::TooManyOpens {
            count: opens.len(),
            limit: MAX_ENUMERATED_OPENS,
        });
    }
    let nonempty: Vec<&PointSet> = opens.iter().filter(|o| !o.is_empty()).collect();
    let n = space.len();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << nonempty.len()) {
        let members: Vec<PointSet> = (0..nonempty.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| nonempty[b].clone())
            .collect();
        let mut u = PointSet::empty(n);
        for m in &members {
            u.union_with(m);
        }
        if u.is_full() {
            out.push(Covering::new(n, members)?);
        }
    }
    Ok(out)
}

/// The family of all finite open coverings of a finite topological space.
pub fn finite_all_coverings_family<T: Scalar>(space: &Space<T>) -> Result<AdmissibleFamily, CoveringError> {
    AdmissibleFamily::finite(enumerate_open_coverings(space)?)
}

/// Adds every open covering that some member of the family refines.
pub fn replete_closure<T: Scalar>(
    family: &AdmissibleFamily,
    space: &Space<T>,
) -> Result<AdmissibleFamily, CoveringError> {
    if family.kind() != FamilyKind::Finite {
        return Err(CoveringError::ChainKindUnsupported);
    }
    let mut coverings = family.coverings().to_vec();
    for v in enumerate_open_coverings(space)? {
        if coverings.contains(&v) {
            continue;
        }
        let mut coarsened = false;
        for u in family.coverings() {
            if u.refines(&v)? {
                coarsened = true;
                break;
            }
        }
        if coarsened {
            coverings.push(v);
        }
    }
    AdmissibleFamily::finite(coverings)
}

/// Result of the admissibility and repleteness checks.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomReport {
    pub checks: Vec<Check>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| !c.failed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Checks the admissibility axioms and both repleteness conditions.
///
/// `test_opens` are the open sets used for the star-basis axiom; compact sets
/// range over singletons plus `extra_compacta`.
pub fn verify_admissible(
    family: &AdmissibleFamily,
    test_opens: &[PointSet],
    extra_compacta: &[PointSet],
) -> AxiomReport {
    let n = family.len();
    let res = family.finest();
    let budget = Budget::exhaustive(n);
    let mut checks = Vec::new();

    // axiom 1
    let missing: Vec<usize> = (0..n)
        .filter(|&u| !(0..n).any(|v| family.double_refines(v, u)))
        .collect();
    let truncation_only = family.kind() == FamilyKind::Chain && missing == [n - 1];
    let witness = match (missing.first(), truncation_only) {
        (None, _) => None,
        (Some(_), true) => Some(format!("finest level {} is the truncation boundary", n - 1)),
        (Some(u), false) => Some(format!("no covering double-refines U_{u}")),
    };
    checks.push(Check::new(
        "double-refinement existence",
        missing.is_empty() || truncation_only,
        witness,
        budget,
        res,
    ));

    // axiom 2
    let universe = family.universe();
    let mut compacta: Vec<PointSet> = (0..universe).map(|p| PointSet::singleton(universe, p)).collect();
    compacta.extend(extra_compacta.iter().filter(|k| !k.is_empty()).cloned());
    let mut basis_witness = None;
    'outer: for o in test_opens {
        for k in compacta.iter().filter(|k| k.is_subset(o)) {
            if !(0..n).any(|i| family.covering(i).star_of(k).is_subset(o)) {
                basis_witness = Some(format!("K={:?} O={:?}", k, o));
                break 'outer;
            }
        }
    }
    checks.push(Check::new(
        "star basis",
        basis_witness.is_none(),
        basis_witness,
        budget,
        res,
    ));

    // axiom 3
    let mut common = None;
    'a3: for u in 0..n {
        for v in 0..n {
            if !(0..n).any(|w| family.refines(w, u) && family.refines(w, v)) {
                common = Some(format!("U_{u}, U_{v}"));
                break 'a3;
            }
        }
    }
    checks.push(Check::new("common refinement", common.is_none(), common, budget, res));

    // replete 1
    let mut exhaust = None;
    for x in 0..universe {
        let mut u = PointSet::empty(universe);
        for c in family.coverings() {
            u.union_with(c.point_star(x));
        }
        if !u.is_full() {
            exhaust = Some(format!("x={x} misses {:?}", u.complement()));
            break;
        }
    }
    checks.push(Check::new(
        "replete: stars exhaust",
        exhaust.is_none(),
        exhaust,
        budget,
        res,
    ));

    // replete 2
    let mut coarse = None;
    'r2: for u in 0..n {
        for v in 0..n {
            if !(0..n).any(|w| family.double_refines(u, w) && family.double_refines(v, w)) {
                coarse = Some(format!("U_{u}, U_{v}"));
                break 'r2;
            }
        }
    }
    checks.push(Check::new(
        "replete: common double-coarsening",
        coarse.is_none(),
        coarse,
        budget,
        res,
    ));

    AxiomReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricKind;

    fn ps(n: usize, xs: &[usize]) -> PointSet {
        PointSet::from_indices(n, xs.iter().copied())
    }

    fn cov(n: usize, ms: &[&[usize]]) -> Covering {
        Covering::new(n, ms.iter().map(|m| ps(n, m)).collect()).unwrap()
    }

    #[test]
    fn star_of_zero() {
        let u = cov(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(u.star(&ps(3, &[0])).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(u.star(&ps(3, &[1])).unwrap().to_vec(), vec![0, 1, 2]);
        assert_eq!(u.star(&ps(3, &[])).unwrap_err(), CoveringError::EmptyInput);
    }

    #[test]
    fn whole_cover_star() {
        let u = Covering::whole(4);
        assert!(u.star(&ps(4, &[2])).unwrap().is_full());
    }

    #[test]
    fn refinement_examples() {
        let s = Covering::singletons(3);
        let u = cov(3, &[&[0, 1], &[1, 2]]);
        assert!(s.refines(&u).unwrap());
        assert!(!u.refines(&s).unwrap());
        assert!(u.refines(&u).unwrap());
        assert!(s.double_refines(&u).unwrap());
        assert!(!u.double_refines(&u).unwrap());
    }

    #[test]
    fn mismatch_rejected() {
        let a = Covering::whole(2);
        let b = Covering::whole(3);
        assert_eq!(a.refines(&b).unwrap_err(), CoveringError::SpaceMismatch(2, 3));
    }

    #[test]
    fn not_a_cover() {
        let err = Covering::new(3, vec![ps(3, &[0, 1])]).unwrap_err();
        assert_eq!(err, CoveringError::NotACover(2));
    }

    #[test]
    fn n_refines_with_empty_pool() {
        let s = Covering::singletons(3);
        let u = cov(3, &[&[0, 1], &[1, 2]]);
        assert!(n_refines(&s, &u, 1, &[]).unwrap());
        assert!(!n_refines(&s, &u, 2, &[]).unwrap());
        assert!(n_refines(&s, &u, 2, std::slice::from_ref(&s)).unwrap());
    }

    #[test]
    fn grid_chain_depth_five() {
        let space = Space::grid_1d(0.0, 0.01, 101).unwrap();
        let fam = metric_chain_family(&space, 1.0, 5).unwrap();
        assert_eq!(fam.len(), 6);
        for i in 1..6 {
            assert!(fam.covering(i).double_refines(fam.covering(i - 1)).unwrap());
        }
        let report = verify_admissible(&fam, &space.test_opens(), &[]);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn depth_zero_and_single_point() {
        let space = Space::grid_1d(0.0, 0.01, 101).unwrap();
        assert_eq!(metric_chain_family(&space, 1.0, 0).unwrap().len(), 1);
        let one = Space::metric(vec![vec![0.0]], MetricKind::Euclidean).unwrap();
        let fam = metric_chain_family(&one, 1.0, 3).unwrap();
        assert!(fam.coverings().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn truncated_chain_fails_star_basis() {
        let space = Space::grid_1d(0.0, 0.01, 101).unwrap();
        let fam = metric_chain_family(&space, 1.0, 0).unwrap();
        let target = PointSet::singleton(101, 50);
        let report = verify_admissible(&fam, &[target], &[]);
        assert!(report.check("star basis").unwrap().failed());
    }

    fn sierpinski() -> Space<f64> {
        Space::finite_topology(
            vec!["a".into(), "b".into()],
            vec![vec![], vec!["a".into()], vec!["a".into(), "b".into()]],
        )
        .unwrap()
    }

    fn discrete(n: usize) -> Space<f64> {
        let ids = (0..n).map(|i| format!("p{i}")).collect();
        let opens = (0u32..1 << n)
            .map(|m| PointSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
            .collect();
        Space::finite_topology_from_sets(ids, opens).unwrap()
    }

    #[test]
    fn discrete_two_points_all_coverings() {
        let space = discrete(2);
        let fam = finite_all_coverings_family(&space).unwrap();
        // nonempty opens {a},{b},{a,b}; covering subsets: 5
        assert_eq!(fam.len(), 5);
        let closed = space.closed_sets().unwrap();
        let report = verify_admissible(&fam, &space.test_opens(), &closed);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn sierpinski_coverings_contain_whole() {
        let space = sierpinski();
        let fam = finite_all_coverings_family(&space).unwrap();
        assert!(fam.coverings().iter().all(|c| c.members().iter().any(|m| m.is_full())));
        for c in fam.coverings() {
            assert!(c.point_star(1).is_full());
        }
        let a = PointSet::singleton(2, 0);
        assert_eq!(fam.closure(&a).unwrap(), space.topological_closure(&a).unwrap());
    }

    #[test]
    fn single_point_family() {
        let space = discrete(1);
        let fam = finite_all_coverings_family(&space).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(replete_closure(&fam, &space).unwrap(), fam);
    }

    #[test]
    fn replete_closure_of_finest() {
        let space = discrete(2);
        let finest = AdmissibleFamily::finite(vec![Covering::singletons(2)]).unwrap();
        let closed = replete_closure(&finest, &space).unwrap();
        assert_eq!(closed.len(), 5);
        let all = finite_all_coverings_family(&space).unwrap();
        assert_eq!(replete_closure(&all, &space).unwrap().len(), all.len());
    }

    #[test]
    fn too_many_opens() {
        let space = discrete(4);
        assert!(matches!(
            finite_all_coverings_family(&space),
            Err(CoveringError::TooManyOpens { .. })
        ));
    }

    #[test]
    fn closure_on_grid_is_point() {
        let space = Space::grid_1d(0.0, 0.01, 101).unwrap();
        let fam = metric_chain_family(&space, 1.0, 6).unwrap();
        let y = PointSet::singleton(101, 37);
        assert_eq!(fam.closure(&y).unwrap(), y);
        assert!(fam.closure(&space.all()).unwrap().is_full());
    }
}
