//! The poset P(O), the `n`-operation, convergence to O and the proximity
//! functions ρ(x,y), ρ(x,A), ρ_A(B).

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::covering::{AdmissibleFamily, FamilyKind};
use crate::pointset::PointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProximityError {
    #[error("collections belong to different families")]
    FamilyMismatch,
    #[error("input set is empty")]
    EmptyInput,
    #[error("index set is not upward hereditary: {0} present but coarser {1} missing")]
    NotHereditary(usize, usize),
}

/// Threshold encoding of a chain collection `{U_i : i <= t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Threshold {
    /// The empty collection, the top of P(O).
    Empty,
    Upto(usize),
    /// The whole family O, the bottom of P(O).
    All,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Empty => write!(f, "-1"),
            Threshold::Upto(t) => write!(f, "{t}"),
            Threshold::All => write!(f, "inf"),
        }
    }
}

/// An upward-hereditary subset of a family's covering indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PColl {
    family: u64,
    chain: bool,
    indices: PointSet,
}

impl PColl {
    pub fn full(family: &AdmissibleFamily) -> Self {
        PColl {
            family: family.id(),
            chain: family.kind() == FamilyKind::Chain,
            indices: PointSet::full(family.len()),
        }
    }

    pub fn empty(family: &AdmissibleFamily) -> Self {
        PColl {
            family: family.id(),
            chain: family.kind() == FamilyKind::Chain,
            indices: PointSet::empty(family.len()),
        }
    }

    /// Chain collection `{U_i : i <= t}`.
    pub fn upto(family: &AdmissibleFamily, t: usize) -> Self {
        let n = family.len();
        PColl {
            family: family.id(),
            chain: family.kind() == FamilyKind::Chain,
            indices: PointSet::from_indices(n, 0..=t.min(n - 1)),
        }
    }

    /// Validated construction from an explicit index set.
    pub fn new(family: &AdmissibleFamily, indices: PointSet) -> Result<Self, ProximityError> {
        for i in indices.iter() {
            for j in 0..family.len() {
                if family.refines(i, j) && !indices.contains(j) {
                    return Err(ProximityError::NotHereditary(i, j));
                }
            }
        }
        Ok(Self::raw(family, indices))
    }

    pub(crate) fn raw(family: &AdmissibleFamily, indices: PointSet) -> Self {
        PColl {
            family: family.id(),
            chain: family.kind() == FamilyKind::Chain,
            indices,
        }
    }

    pub fn family_id(&self) -> u64 {
        self.family
    }

    pub fn indices(&self) -> &PointSet {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(i)
    }

    /// True for the whole family O.
    pub fn is_full(&self) -> bool {
        self.indices.is_full()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Threshold form; `None` for finite-kind families or non-prefix sets.
    pub fn threshold(&self) -> Option<Threshold> {
        if !self.chain {
            return None;
        }
        if self.indices.is_full() {
            return Some(Threshold::All);
        }
        match self.indices.iter().last() {
            None => Some(Threshold::Empty),
            Some(t) if self.indices.len() == t + 1 => Some(Threshold::Upto(t)),
            Some(_) => None,
        }
    }

    fn same_family(&self, other: &PColl) -> Result<(), ProximityError> {
        if self.family == other.family {
            Ok(())
        } else {
            Err(ProximityError::FamilyMismatch)
        }
    }

    pub fn intersection(&self, other: &PColl) -> Result<PColl, ProximityError> {
        self.same_family(other)?;
        Ok(PColl {
            family: self.family,
            chain: self.chain,
            indices: self.indices.intersection(&other.indices),
        })
    }

    pub fn union(&self, other: &PColl) -> Result<PColl, ProximityError> {
        self.same_family(other)?;
        Ok(PColl {
            family: self.family,
            chain: self.chain,
            indices: self.indices.union(&other.indices),
        })
    }

    /// Same indices with index `i` removed; used by fault-injection hooks.
    pub fn without(&self, i: usize) -> PColl {
        let mut c = self.clone();
        c.indices.remove(i);
        c
    }
}

impl fmt::Debug for PColl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.threshold() {
            Some(t) => write!(f, "PColl(t={t})"),
            None => write!(f, "PColl({:?})", self.indices),
        }
    }
}

impl fmt::Display for PColl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.threshold() {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "{:?}", self.indices.to_vec()),
        }
    }
}

impl Serialize for PColl {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `E1 ≺ E2` iff `E1 ⊇ E2`.
pub fn precedes(e1: &PColl, e2: &PColl) -> Result<bool, ProximityError> {
    e1.same_family(e2)?;
    Ok(e2.indices.is_subset(&e1.indices))
}

/// `nE = {U : ∃ V ∈ E with V ⩽ 2^-n U}` using the family itself as witness pool.
pub fn n_op(family: &AdmissibleFamily, e: &PColl, n: usize) -> PColl {
    let mut out = PointSet::empty(family.len());
    for v in e.indices.iter() {
        out.union_with(&family.n_refinement_targets(v, n));
    }
    PColl::raw(family, out)
}

/// Per-index entry point of the tail on which an index stays in the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceTrace {
    pub converges: bool,
    /// `k0[i]`: first position from which `U_i` belongs to every later term.
    pub k0: Vec<Option<usize>>,
}

/// Convergence to O of a finite sequence: every index eventually stays in
/// the terms. On a finite sequence the tail may be the last term alone.
pub fn converges_to_o(family: &AdmissibleFamily, seq: &[PColl]) -> ConvergenceTrace {
    let n = family.len();
    let mut k0 = vec![None; n];
    if seq.is_empty() {
        return ConvergenceTrace { converges: false, k0 };
    }
    for (i, slot) in k0.iter_mut().enumerate() {
        let mut start = None;
        for k in (0..seq.len()).rev() {
            if seq[k].contains(i) {
                start = Some(k);
            } else {
                break;
            }
        }
        *slot = start;
    }
    ConvergenceTrace {
        converges: k0.iter().all(Option::is_some),
        k0,
    }
}

/// `ρ(x,y) = {U : y ∈ St[x,U]}`.
pub fn rho(family: &AdmissibleFamily, x: usize, y: usize) -> PColl {
    let idx = PointSet::from_indices(
        family.len(),
        (0..family.len()).filter(|&i| family.covering(i).point_star(x).contains(y)),
    );
    PColl::raw(family, idx)
}

/// `ρ(x,A) = ⋃_{y ∈ A} ρ(x,y)`.
pub fn rho_point_set(family: &AdmissibleFamily, x: usize, a: &PointSet) -> Result<PColl, ProximityError> {
    if a.is_empty() {
        return Err(ProximityError::EmptyInput);
    }
    let idx = PointSet::from_indices(
        family.len(),
        (0..family.len()).filter(|&i| family.covering(i).point_star(x).intersects(a)),
    );
    Ok(PColl::raw(family, idx))
}

/// `ρ_A(B) = ⋂_{b ∈ B} ρ(b,A)`: the coverings at which `B ⊆ St[A,U]`.
pub fn rho_semi(family: &AdmissibleFamily, a: &PointSet, b: &PointSet) -> Result<PColl, ProximityError> {
    if a.is_empty() || b.is_empty() {
        return Err(ProximityError::EmptyInput);
    }
    let idx = PointSet::from_indices(
        family.len(),
        (0..family.len()).filter(|&i| b.is_subset(&family.covering(i).star_of(a))),
    );
    Ok(PColl::raw(family, idx))
}

/// `ρ_A(B)` restricted to the indices considered at `resolution`: true when
/// every such index belongs to it.
pub fn dominated_at(family: &AdmissibleFamily, a: &PointSet, b: &PointSet, resolution: usize) -> bool {
    if b.is_empty() {
        return true;
    }
    if a.is_empty() {
        return false;
    }
    family
        .indices_at(resolution)
        .all(|i| b.is_subset(&family.covering(i).star_of(a)))
}

/// Mutual ρ-domination at a resolution.
pub fn equal_at(family: &AdmissibleFamily, a: &PointSet, b: &PointSet, resolution: usize) -> bool {
    dominated_at(family, a, b, resolution) && dominated_at(family, b, a, resolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::metric_chain_family;
    use crate::space::Space;

    fn grid() -> (Space<f64>, AdmissibleFamily) {
        let s = Space::grid_1d(0.0, 0.01, 101).unwrap();
        let f = metric_chain_family(&s, 1.0, 6).unwrap();
        (s, f)
    }

    /// Largest chain index with a center within eps of both points.
    fn brute_threshold(s: &Space<f64>, x: usize, y: usize) -> Threshold {
        let mut best = Threshold::Empty;
        for i in 0..=6 {
            let eps = 4f64.powi(-(i as i32));
            let ok = (0..s.len()).any(|c| s.distance(c, x) < eps && s.distance(c, y) < eps);
            if ok {
                best = if i == 6 { Threshold::All } else { Threshold::Upto(i) };
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn rho_of_0_and_01() {
        let (s, f) = grid();
        let r = rho(&f, 0, 10);
        assert_eq!(r.threshold(), Some(Threshold::Upto(2)));
        assert_eq!(r.threshold().unwrap(), brute_threshold(&s, 0, 10));
    }

    #[test]
    fn rho_diagonal_is_full() {
        let (_, f) = grid();
        assert!(rho(&f, 17, 17).is_full());
        assert!(!rho(&f, 17, 18).is_full());
    }

    #[test]
    fn order_extremes() {
        let (_, f) = grid();
        let o = PColl::full(&f);
        let e = rho(&f, 0, 50);
        let empty = PColl::empty(&f);
        assert!(precedes(&o, &e).unwrap());
        assert!(precedes(&e, &empty).unwrap());
        assert!(precedes(&e, &e).unwrap());
    }

    #[test]
    fn n_op_on_chain() {
        let (_, f) = grid();
        for n in 1..=6 {
            assert!(n_op(&f, &PColl::full(&f), n).is_full());
        }
        // levels 4..=6 are all singletons on a 0.01 grid
        let e = PColl::upto(&f, 3);
        assert_eq!(n_op(&f, &e, 2).threshold(), Some(Threshold::Upto(1)));
        assert!(n_op(&f, &PColl::upto(&f, 4), 2).is_full());
        assert!(n_op(&f, &PColl::empty(&f), 1).is_empty());
    }

    #[test]
    fn convergence_examples() {
        let (_, f) = grid();
        let seq: Vec<PColl> = (0..=6).map(|t| PColl::upto(&f, t)).collect();
        assert!(converges_to_o(&f, &seq).converges);
        let constant = vec![PColl::upto(&f, 0); 7];
        assert!(!converges_to_o(&f, &constant).converges);
        assert!(converges_to_o(&f, &vec![PColl::full(&f); 3]).converges);
    }

    #[test]
    fn rho_semi_examples() {
        let (s, f) = grid();
        let a = PointSet::singleton(101, 0);
        let b = PointSet::from_indices(101, [0, 100]);
        assert_eq!(rho_semi(&f, &a, &b).unwrap(), rho(&f, 100, 0));
        assert_eq!(rho(&f, 100, 0).threshold().unwrap(), brute_threshold(&s, 100, 0));
        assert!(rho_semi(&f, &b, &a).unwrap().is_full());
        assert!(rho_point_set(&f, 0, &b).unwrap().is_full());
    }

    #[test]
    fn family_mismatch() {
        let (_, f) = grid();
        let (_, g) = grid();
        assert_eq!(
            precedes(&PColl::full(&f), &PColl::full(&g)).unwrap_err(),
            ProximityError::FamilyMismatch
        );
    }
}
