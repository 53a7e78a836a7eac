//! Boundedness, the star measure of noncompactness and the Cantor–Kuratowski harness.
//!
//! On a finite space every set admits a finite star cover, so the measure is
//! taken against a cardinality cap: a covering belongs to `alpha(Y)` when `Y`
//! is covered by at most `cap` of its point stars.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::covering::AdmissibleFamily;
use crate::pointset::PointSet;
use crate::proximity::{converges_to_o, PColl};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompactnessError {
    #[error("input set is empty")]
    EmptyInput,
    #[error("chain is not decreasing at position {0}")]
    NotDecreasing(usize),
    #[error("chain member {0} is not closed")]
    NotClosed(usize),
}

/// Default cap: a quarter of the space, rounded up.
pub fn default_cap(universe: usize) -> usize {
    universe.div_ceil(4).max(1)
}

/// Minimal number of `candidates` covering `target`, if it is at most `limit`.
///
/// Exact branch and bound: branch on the first uncovered point over the
/// maximal traces of candidates containing it.
pub fn min_cover(target: &PointSet, candidates: &[PointSet], limit: usize) -> Option<usize> {
    if target.is_empty() {
        return Some(0);
    }
    let traces: Vec<PointSet> = candidates
        .iter()
        .map(|c| c.intersection(target))
        .filter(|c| !c.is_empty())
        .collect();
    let mut covered = PointSet::empty(target.universe());
    for t in &traces {
        covered.union_with(t);
    }
    if !target.is_subset(&covered) {
        return None;
    }
    let max_size = traces.iter().map(PointSet::len).max().unwrap_or(1);
    let lower = target.len().div_ceil(max_size);
    let mut failed: HashMap<PointSet, usize> = HashMap::new();
    (lower..=limit).find(|&k| feasible(target, k, &traces, max_size, &mut failed))
}

fn feasible(
    uncovered: &PointSet,
    k: usize,
    traces: &[PointSet],
    max_size: usize,
    failed: &mut HashMap<PointSet, usize>,
) -> bool {
    let Some(p) = uncovered.first() else {
        return true;
    };
    if k == 0 || uncovered.len() > k * max_size {
        return false;
    }
    if failed.get(uncovered).is_some_and(|&f| f >= k) {
        return false;
    }
    let mut options: Vec<PointSet> = Vec::new();
    for t in traces.iter().filter(|t| t.contains(p)) {
        let o = t.intersection(uncovered);
        if options.iter().any(|q| o.is_subset(q)) {
            continue;
        }
        options.retain(|q| !q.is_subset(&o));
        options.push(o);
    }
    options.sort_by_key(|o| std::cmp::Reverse(o.len()));
    for o in &options {
        if feasible(&uncovered.difference(o), k - 1, traces, max_size, failed) {
            return true;
        }
    }
    let e = failed.entry(uncovered.clone()).or_insert(0);
    *e = (*e).max(k);
    false
}

/// Bounded: some covering relates every pair of points of `Y`.
pub fn is_bounded(y: &PointSet, family: &AdmissibleFamily) -> Result<bool, CompactnessError> {
    Ok(bounding_index(y, family)?.is_some())
}

/// First covering index relating every pair of points of `Y`.
pub fn bounding_index(y: &PointSet, family: &AdmissibleFamily) -> Result<Option<usize>, CompactnessError> {
    if y.is_empty() {
        return Err(CompactnessError::EmptyInput);
    }
    Ok((0..family.len()).find(|&i| {
        let c = family.covering(i);
        y.iter().all(|x| y.is_subset(c.point_star(x)))
    }))
}

/// Totally bounded: for each covering, finitely many point stars cover `Y`.
pub fn is_totally_bounded(y: &PointSet, family: &AdmissibleFamily) -> Result<bool, CompactnessError> {
    if y.is_empty() {
        return Err(CompactnessError::EmptyInput);
    }
    Ok(family.coverings().iter().all(|c| {
        let mut u = PointSet::empty(y.universe());
        for x in y.iter() {
            u.union_with(c.point_star(x));
        }
        y.is_subset(&u)
    }))
}

/// Star measure of noncompactness with a cardinality cap.
pub fn alpha(y: &PointSet, family: &AdmissibleFamily, cap: usize) -> Result<PColl, CompactnessError> {
    if y.is_empty() {
        return Err(CompactnessError::EmptyInput);
    }
    let idx = PointSet::from_indices(
        family.len(),
        (0..family.len()).filter(|&i| star_cover_number(y, family, i, cap).is_some()),
    );
    Ok(PColl::raw(family, idx))
}

/// Minimal number of point stars of `U_i` covering `Y`, up to `cap`.
pub fn star_cover_number(y: &PointSet, family: &AdmissibleFamily, i: usize, cap: usize) -> Option<usize> {
    let c = family.covering(i);
    let stars: Vec<PointSet> = (0..family.universe()).map(|x| c.point_star(x).clone()).collect();
    min_cover(y, &stars, cap)
}

/// Member-cover variant: coverings at which `Y` is covered by at most `cap`
/// members. Used for the bracket `alpha ≺ γ ≺ 1·alpha` and for limit compactness.
pub fn alpha_members(y: &PointSet, family: &AdmissibleFamily, cap: usize) -> Result<PColl, CompactnessError> {
    if y.is_empty() {
        return Err(CompactnessError::EmptyInput);
    }
    let idx = PointSet::from_indices(
        family.len(),
        (0..family.len()).filter(|&i| family.covering(i).min_member_cover(y, cap).is_some()),
    );
    Ok(PColl::raw(family, idx))
}

/// Compact at a cap: `alpha(Y) = O`.
pub fn is_compact(y: &PointSet, family: &AdmissibleFamily, cap: usize) -> bool {
    !y.is_empty() && alpha(y, family, cap).map(|a| a.is_full()).unwrap_or(false)
}

/// Cauchy at truncation: for every covering there is a tail of at least two
/// terms whose pairs all lie together in some member.
pub fn is_cauchy(seq: &[usize], family: &AdmissibleFamily) -> bool {
    if seq.len() < 2 {
        return !seq.is_empty();
    }
    family.coverings().iter().all(|c| {
        let last = seq.len() - 2;
        (0..=last).any(|t| {
            let tail = &seq[t..];
            tail.iter().all(|&a| tail.iter().all(|&b| c.point_star(a).contains(b)))
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CkClaim {
    NonemptyIntersection,
    HypothesisNotMet,
    /// Hypothesis met but the intersection is empty; never expected.
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct CkReport {
    pub claim: CkClaim,
    pub hypothesis_met: bool,
    pub alpha_trace: Vec<PColl>,
    pub intersection: Option<Vec<usize>>,
}

/// Checks that a decreasing chain of nonempty closed sets whose measure
/// converges to O has nonempty intersection.
pub fn cantor_kuratowski_check(
    chain: &[PointSet],
    family: &AdmissibleFamily,
    cap: usize,
) -> Result<CkReport, CompactnessError> {
    if chain.is_empty() {
        return Err(CompactnessError::EmptyInput);
    }
    for (k, f) in chain.iter().enumerate() {
        if f.is_empty() {
            return Err(CompactnessError::EmptyInput);
        }
        if k > 0 && !f.is_subset(&chain[k - 1]) {
            return Err(CompactnessError::NotDecreasing(k));
        }
        if family.closure_at(f, family.len() - 1) != *f {
            return Err(CompactnessError::NotClosed(k));
        }
    }
    let trace = chain
        .iter()
        .map(|f| alpha(f, family, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let met = converges_to_o(family, &trace).converges;
    if !met {
        return Ok(CkReport {
            claim: CkClaim::HypothesisNotMet,
            hypothesis_met: false,
            alpha_trace: trace,
            intersection: None,
        });
    }
    let mut inter = chain[0].clone();
    for f in &chain[1..] {
        inter.intersect_with(f);
    }
    Ok(CkReport {
        claim: if inter.is_empty() {
            CkClaim::Violation
        } else {
            CkClaim::NonemptyIntersection
        },
        hypothesis_met: true,
        alpha_trace: trace,
        intersection: Some(inter.to_vec()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{metric_chain_family, AdmissibleFamily};
    use crate::proximity::precedes;
    use crate::space::Space;

    fn grid() -> (Space<f64>, AdmissibleFamily) {
        let s = Space::grid_1d(0.0, 0.01, 101).unwrap();
        let f = metric_chain_family(&s, 1.0, 6).unwrap();
        (s, f)
    }

    #[test]
    fn min_cover_small() {
        let n = 5;
        let c = vec![
            PointSet::from_indices(n, [0, 1]),
            PointSet::from_indices(n, [1, 2, 3]),
            PointSet::from_indices(n, [3, 4]),
            PointSet::from_indices(n, [0, 4]),
        ];
        let all = PointSet::full(n);
        assert_eq!(min_cover(&all, &c, 5), Some(2));
        assert_eq!(min_cover(&all, &c, 1), None);
    }

    #[test]
    fn bounded_examples() {
        let (s, f) = grid();
        assert!(is_bounded(&PointSet::singleton(101, 3), &f).unwrap());
        assert!(is_bounded(&s.all(), &f).unwrap());
        let fine = AdmissibleFamily::chain(vec![f.covering(5).clone(), f.covering(6).clone()]).unwrap();
        assert!(!is_bounded(&PointSet::from_indices(101, [0, 100]), &fine).unwrap());
    }

    #[test]
    fn totally_bounded_on_finite() {
        let (s, f) = grid();
        assert!(is_totally_bounded(&s.all(), &f).unwrap());
    }

    #[test]
    fn alpha_small_set_is_full() {
        let (_, f) = grid();
        let y = PointSet::from_indices(101, [0, 40, 90]);
        assert!(alpha(&y, &f, 3).unwrap().is_full());
    }

    #[test]
    fn alpha_monotone_example() {
        let (_, f) = grid();
        let y = PointSet::from_indices(101, 0..30);
        let z = PointSet::from_indices(101, 0..80);
        let (ay, az) = (alpha(&y, &f, 8).unwrap(), alpha(&z, &f, 8).unwrap());
        assert!(precedes(&ay, &az).unwrap());
        assert!(!az.is_full());
    }

    #[test]
    fn cauchy_examples() {
        let (s, f) = grid();
        assert!(is_cauchy(&[3, 9, 5, 5, 5], &f));
        assert!(!is_cauchy(&[10, 60, 10, 60, 10, 60], &f));
        let decay: Vec<usize> = (0..12).map(|k| s.nearest(&[0.5f64.powi(k)]).unwrap().0).collect();
        assert!(is_cauchy(&decay, &f));
    }

    #[test]
    fn ck_shrinking_balls() {
        let (s, f) = grid();
        let chain: Vec<PointSet> = (0..6).map(|k| s.ball(50, 0.3 / (k + 1) as f64).unwrap()).collect();
        let r = cantor_kuratowski_check(&chain, &f, 26).unwrap();
        assert_eq!(r.claim, CkClaim::NonemptyIntersection);
        let shrink: Vec<PointSet> = (0..4).map(|k| s.ball(50, 0.1 / (10f64).powi(k)).unwrap()).collect();
        let r = cantor_kuratowski_check(&shrink, &f, 26).unwrap();
        assert_eq!(r.intersection, Some(vec![50]));
    }

    #[test]
    fn ck_constant_whole_space() {
        let (s, f) = grid();
        let chain = vec![s.all(); 4];
        let r = cantor_kuratowski_check(&chain, &f, 101).unwrap();
        assert_eq!(r.claim, CkClaim::NonemptyIntersection);
        assert!(r.alpha_trace.iter().all(PColl::is_full));
    }

    #[test]
    fn ck_hypothesis_not_met() {
        let (s, f) = grid();
        let chain = vec![s.all(), PointSet::from_indices(101, 0..60)];
        let r = cantor_kuratowski_check(&chain, &f, 10).unwrap();
        assert_eq!(r.claim, CkClaim::HypothesisNotMet);
    }

    #[test]
    fn ck_rejects_increasing() {
        let (s, f) = grid();
        let chain = vec![PointSet::singleton(101, 0), s.all()];
        assert_eq!(
            cantor_kuratowski_check(&chain, &f, 10).unwrap_err(),
            CompactnessError::NotDecreasing(1)
        );
    }

    #[test]
    fn member_variant_brackets_star_measure() {
        let (_, f) = grid();
        let y = PointSet::from_indices(101, 10..70);
        let a = alpha(&y, &f, 6).unwrap();
        let g = alpha_members(&y, &f, 6).unwrap();
        assert!(precedes(&a, &g).unwrap());
    }
}
