//! Semigroup carriers, composition and nested filter bases.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// A semigroup element.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Element {
    Nat(u64),
    Ints(Vec<i64>),
    Real(f64),
    /// Word over generator indices; the last letter acts first.
    Word(Vec<u32>),
}

impl Element {
    /// Real element with the sign of zero normalized.
    pub fn real(c: f64) -> Self {
        Element::Real(if c == 0.0 { 0.0 } else { c })
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Element::Nat(a), Element::Nat(b)) => a == b,
            (Element::Ints(a), Element::Ints(b)) => a == b,
            (Element::Real(a), Element::Real(b)) => a.to_bits() == b.to_bits(),
            (Element::Word(a), Element::Word(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Element::Nat(n) => n.hash(state),
            Element::Ints(v) => v.hash(state),
            Element::Real(c) => c.to_bits().hash(state),
            Element::Word(w) => w.hash(state),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nat(n) => write!(f, "{n}"),
            Element::Ints(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Element::Real(c) => write!(f, "{c}"),
            Element::Word(w) => {
                let parts: Vec<String> = w.iter().map(|g| format!("g{g}")).collect();
                write!(f, "{}", parts.join("."))
            }
        }
    }
}

/// Carrier and operation of a semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemigroupKind {
    /// `(N, +)` including zero.
    NatAdd,
    /// Positive integers under multiplication.
    NatMul,
    /// `(N^dim, +)`.
    IntVecAdd { dim: usize },
    /// Reals `c` with `|c| <= bound` under multiplication.
    RealMul { bound: f64 },
    /// Nonempty words over `generators` letters under concatenation.
    Words { generators: u32 },
}

impl SemigroupKind {
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (SemigroupKind::NatAdd, Element::Nat(_)) => true,
            (SemigroupKind::NatMul, Element::Nat(n)) => *n >= 1,
            (SemigroupKind::IntVecAdd { dim }, Element::Ints(v)) => v.len() == *dim && v.iter().all(|&t| t >= 0),
            (SemigroupKind::RealMul { bound }, Element::Real(c)) => c.is_finite() && c.abs() <= *bound,
            (SemigroupKind::Words { generators }, Element::Word(w)) => {
                !w.is_empty() && w.iter().all(|&g| g < *generators)
            }
            _ => false,
        }
    }

    /// `st`: the element acting as `t` first, then `s`.
    pub fn compose(&self, s: &Element, t: &Element) -> Option<Element> {
        if !self.contains(s) || !self.contains(t) {
            return None;
        }
        match (self, s, t) {
            (SemigroupKind::NatAdd, Element::Nat(a), Element::Nat(b)) => a.checked_add(*b).map(Element::Nat),
            (SemigroupKind::NatMul, Element::Nat(a), Element::Nat(b)) => a.checked_mul(*b).map(Element::Nat),
            (SemigroupKind::IntVecAdd { .. }, Element::Ints(a), Element::Ints(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.checked_add(*y))
                .collect::<Option<Vec<_>>>()
                .map(Element::Ints),
            (SemigroupKind::RealMul { .. }, Element::Real(a), Element::Real(b)) => Some(Element::real(a * b)),
            (SemigroupKind::Words { .. }, Element::Word(a), Element::Word(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                Some(Element::Word(w))
            }
            _ => None,
        }
    }

    /// Some `a` with `s a = b`.
    pub fn solve_left(&self, b: &Element, s: &Element) -> Option<Element> {
        let a = match (self, b, s) {
            (SemigroupKind::Words { .. }, Element::Word(bw), Element::Word(sw)) => {
                if bw.len() > sw.len() && bw.starts_with(sw) {
                    Element::Word(bw[sw.len()..].to_vec())
                } else {
                    return None;
                }
            }
            _ => return self.solve_commutative(b, s),
        };
        self.contains(&a).then_some(a)
    }

    /// Some `a` with `a s = b`.
    pub fn solve_right(&self, b: &Element, s: &Element) -> Option<Element> {
        let a = match (self, b, s) {
            (SemigroupKind::Words { .. }, Element::Word(bw), Element::Word(sw)) => {
                if bw.len() > sw.len() && bw.ends_with(sw) {
                    Element::Word(bw[..bw.len() - sw.len()].to_vec())
                } else {
                    return None;
                }
            }
            _ => return self.solve_commutative(b, s),
        };
        self.contains(&a).then_some(a)
    }

    fn solve_commutative(&self, b: &Element, s: &Element) -> Option<Element> {
        if !self.contains(b) || !self.contains(s) {
            return None;
        }
        let a = match (b, s) {
            (Element::Nat(b), Element::Nat(s)) => match self {
                SemigroupKind::NatAdd => Element::Nat(b.checked_sub(*s)?),
                SemigroupKind::NatMul => {
                    if b % s != 0 {
                        return None;
                    }
                    Element::Nat(b / s)
                }
                _ => return None,
            },
            (Element::Ints(b), Element::Ints(s)) => Element::Ints(b.iter().zip(s).map(|(x, y)| x - y).collect()),
            (Element::Real(b), Element::Real(s)) => {
                if *s == 0.0 {
                    return (*b == 0.0).then(|| Element::real(0.0));
                }
                let a = b / s;
                if (a * s - b).abs() > 1e-12 * b.abs() {
                    return None;
                }
                Element::real(a)
            }
            _ => return None,
        };
        self.contains(&a).then_some(a)
    }
}

/// Shape of the nested levels `A_0 ⊇ A_1 ⊇ ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FilterSpec {
    /// `{n >= l}` for `(N,+)`, `{n >= max(l,1)}` for `(N,×)`, words of length `>= max(l,1)`.
    Tails,
    /// `{t : t_i >= l for all i}` on `N^dim`.
    VecTails,
    /// `{c^k : |c| <= bound, k >= max(l,1)}`; sampled through powers of `generators`.
    PowerContractions { generators: Vec<f64> },
    /// Explicit finite levels, which must be nested.
    Explicit { levels: Vec<Vec<Element>> },
}

/// A nested filter basis truncated at `depth`, with per-level samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBasis {
    spec: FilterSpec,
    semigroup: SemigroupKind,
    depth: usize,
    budget: usize,
    raw: Vec<Vec<Element>>,
    samples: Vec<Vec<Element>>,
    top: HashMap<Element, usize>,
}

impl FilterBasis {
    pub fn new(spec: FilterSpec, semigroup: SemigroupKind, depth: usize, budget: usize) -> Result<Self, DynamicsError> {
        let depth = match &spec {
            FilterSpec::Explicit { levels } => {
                if levels.is_empty() {
                    return Err(DynamicsError::EmptyLevel(0));
                }
                levels.len() - 1
            }
            _ => depth,
        };
        if budget == 0 {
            return Err(DynamicsError::EmptyLevel(0));
        }
        let mut fb = FilterBasis {
            spec,
            semigroup,
            depth,
            budget,
            raw: Vec::new(),
            samples: Vec::new(),
            top: HashMap::new(),
        };
        fb.raw = (0..=depth).map(|l| fb.raw_level(l)).collect::<Result<_, _>>()?;
        for (l, level) in fb.raw.iter().enumerate() {
            if level.is_empty() {
                return Err(DynamicsError::EmptyLevel(l));
            }
            for e in level {
                if !fb.semigroup.contains(e) {
                    return Err(DynamicsError::ForeignElement(e.to_string()));
                }
            }
        }
        if let FilterSpec::Explicit { levels } = &fb.spec {
            for l in 1..levels.len() {
                let parent: HashSet<&Element> = levels[l - 1].iter().collect();
                if let Some(e) = levels[l].iter().find(|e| !parent.contains(e)) {
                    return Err(DynamicsError::NestingViolation {
                        level: l,
                        element: e.to_string(),
                    });
                }
            }
            fb.samples = levels.clone();
        } else {
            for k in 0..=depth {
                let mut seen = HashSet::new();
                let mut s = Vec::new();
                for level in &fb.raw[k..] {
                    for e in level {
                        if seen.insert(e.clone()) {
                            s.push(e.clone());
                        }
                    }
                }
                fb.samples.push(s);
            }
        }
        for (k, level) in fb.samples.iter().enumerate() {
            for e in level {
                for j in 0..=k {
                    if !fb.contains(j, e) {
                        return Err(DynamicsError::NestingViolation {
                            level: k,
                            element: e.to_string(),
                        });
                    }
                }
                fb.top.insert(e.clone(), k);
            }
        }
        Ok(fb)
    }

    fn raw_level(&self, l: usize) -> Result<Vec<Element>, DynamicsError> {
        let b = self.budget;
        let out = match (&self.spec, &self.semigroup) {
            (FilterSpec::Tails, SemigroupKind::NatAdd) => (l as u64..).take(b).map(Element::Nat).collect(),
            (FilterSpec::Tails, SemigroupKind::NatMul) => (l.max(1) as u64..).take(b).map(Element::Nat).collect(),
            (FilterSpec::Tails, SemigroupKind::Words { generators }) => words_from_length(*generators, l.max(1), b),
            (FilterSpec::VecTails, SemigroupKind::IntVecAdd { dim }) => offsets(*dim, b)
                .into_iter()
                .map(|o| Element::Ints(o.into_iter().map(|x| x + l as i64).collect()))
                .collect(),
            (FilterSpec::PowerContractions { generators }, SemigroupKind::RealMul { .. }) => {
                powers(generators, l.max(1), b)
            }
            (FilterSpec::Explicit { levels }, _) => levels[l].clone(),
            (spec, sg) => {
                return Err(DynamicsError::Incompatible(format!(
                    "filter {spec:?} does not apply to semigroup {sg:?}"
                )))
            }
        };
        Ok(out)
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn semigroup(&self) -> &SemigroupKind {
        &self.semigroup
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Sample of `A_level`: the raw samples of this and every deeper level.
    pub fn sample(&self, level: usize) -> &[Element] {
        &self.samples[level.min(self.depth)]
    }

    /// Elements drawn for `level` itself.
    pub fn raw(&self, level: usize) -> &[Element] {
        &self.raw[level.min(self.depth)]
    }

    /// Deepest level whose sample contains `e`.
    pub fn top_level(&self, e: &Element) -> Option<usize> {
        self.top.get(e).copied()
    }

    /// Membership predicate of `A_level`, defined for every level.
    pub fn contains(&self, level: usize, e: &Element) -> bool {
        if !self.semigroup.contains(e) {
            return false;
        }
        match (&self.spec, e) {
            (FilterSpec::Tails, Element::Nat(n)) => match self.semigroup {
                SemigroupKind::NatMul => *n >= level.max(1) as u64,
                _ => *n >= level as u64,
            },
            (FilterSpec::Tails, Element::Word(w)) => w.len() >= level.max(1),
            (FilterSpec::VecTails, Element::Ints(v)) => v.iter().all(|&t| t >= level as i64),
            (FilterSpec::PowerContractions { .. }, Element::Real(c)) => {
                let bound = match self.semigroup {
                    SemigroupKind::RealMul { bound } => bound,
                    _ => return false,
                };
                let m = level.max(1) as i32;
                if *c == 0.0 {
                    true
                } else if *c > 0.0 {
                    *c <= bound.powi(m)
                } else {
                    let odd = if m % 2 == 1 { m } else { m + 1 };
                    c.abs() <= bound.powi(odd)
                }
            }
            (FilterSpec::Explicit { levels }, e) => levels[level.min(self.depth)].contains(e),
            _ => false,
        }
    }

    /// Exhaustive enumeration of `A_level` up to `bound` elements (integers
    /// up to `bound` for tails on `N`).
    pub fn enumerate_level(&self, level: usize, bound: usize) -> Vec<Element> {
        match (&self.spec, &self.semigroup) {
            (FilterSpec::Tails, SemigroupKind::NatAdd) => (level as u64..=bound as u64).map(Element::Nat).collect(),
            (FilterSpec::Tails, SemigroupKind::NatMul) => {
                (level.max(1) as u64..=bound as u64).map(Element::Nat).collect()
            }
            (FilterSpec::Tails, SemigroupKind::Words { generators }) => {
                words_from_length(*generators, level.max(1), bound)
            }
            (FilterSpec::VecTails, SemigroupKind::IntVecAdd { dim }) => {
                let mut w = 1usize;
                while (w + 1).checked_pow(*dim as u32).is_some_and(|c| c <= bound) {
                    w += 1;
                }
                box_vectors(*dim, w)
                    .into_iter()
                    .map(|o| Element::Ints(o.into_iter().map(|x| x + level as i64).collect()))
                    .collect()
            }
            (FilterSpec::PowerContractions { generators }, _) => powers(generators, level.max(1), bound),
            (FilterSpec::Explicit { levels }, _) => levels[level.min(self.depth)].iter().take(bound).cloned().collect(),
            _ => Vec::new(),
        }
    }

    /// `length` elements whose `k`-th block is drawn from `A_k`.
    pub fn divergent_sequence(&self, length: usize) -> Vec<Element> {
        let blocks = self.depth + 1;
        let per = length.div_ceil(blocks).max(1);
        let mut out = Vec::with_capacity(length);
        'outer: for k in 0..blocks {
            let level = &self.raw[k];
            for j in 0..per {
                if out.len() == length {
                    break 'outer;
                }
                out.push(level[j % level.len()].clone());
            }
        }
        out
    }
}

fn words_from_length(generators: u32, min_len: usize, count: usize) -> Vec<Element> {
    let mut out = Vec::new();
    if generators == 0 {
        return out;
    }
    let mut len = min_len;
    while out.len() < count {
        let mut w = vec![0u32; len];
        loop {
            out.push(Element::Word(w.clone()));
            if out.len() == count {
                return out;
            }
            let mut carry = true;
            let mut i = len;
            while carry && i > 0 {
                i -= 1;
                w[i] += 1;
                if w[i] < generators {
                    carry = false;
                } else {
                    w[i] = 0;
                }
            }
            if carry {
                break;
            }
        }
        len += 1;
    }
    out
}

/// Nonnegative offset vectors ordered by max-norm, then lexicographically.
fn offsets(dim: usize, count: usize) -> Vec<Vec<i64>> {
    let mut w = 1usize;
    while w.pow(dim as u32) < count {
        w += 1;
    }
    let mut all = box_vectors(dim, w);
    all.sort_by_key(|v| (v.iter().copied().max().unwrap_or(0), v.clone()));
    all.truncate(count);
    all
}

/// All vectors in `{0, ..., w-1}^dim` (at least the zero vector).
fn box_vectors(dim: usize, w: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * w);
        for v in &out {
            for x in 0..w.max(1) as i64 {
                let mut u = v.clone();
                u.push(x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn powers(generators: &[f64], min_exp: usize, count: usize) -> Vec<Element> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut k = min_exp as i32;
    while out.len() < count && k < min_exp as i32 + 2000 {
        for g in generators {
            let p = g.powi(k);
            if p == 0.0 || !p.is_finite() {
                continue;
            }
            let e = Element::real(p);
            if seen.insert(e.clone()) {
                out.push(e);
                if out.len() == count {
                    break;
                }
            }
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_and_solutions() {
        let w = SemigroupKind::Words { generators: 2 };
        let s = Element::Word(vec![1]);
        let b = Element::Word(vec![1, 0, 0]);
        assert_eq!(w.solve_left(&b, &s), Some(Element::Word(vec![0, 0])));
        assert_eq!(w.solve_right(&b, &s), None);
        let m = SemigroupKind::NatMul;
        assert_eq!(m.solve_right(&Element::Nat(7), &Element::Nat(2)), None);
        assert_eq!(m.solve_right(&Element::Nat(8), &Element::Nat(2)), Some(Element::Nat(4)));
        let r = SemigroupKind::RealMul { bound: 0.5 };
        assert_eq!(
            r.compose(&Element::real(0.5), &Element::real(-0.5)),
            Some(Element::real(-0.25))
        );
        assert_eq!(
            r.solve_left(&Element::real(0.25), &Element::real(0.5)),
            Some(Element::real(0.5))
        );
        assert_eq!(r.solve_left(&Element::real(0.5), &Element::real(0.5)), None);
    }

    #[test]
    fn tails_are_nested_and_sampled() {
        let f = FilterBasis::new(FilterSpec::Tails, SemigroupKind::NatAdd, 3, 4).unwrap();
        assert_eq!(
            f.raw(2),
            &[Element::Nat(2), Element::Nat(3), Element::Nat(4), Element::Nat(5)]
        );
        assert_eq!(f.sample(0).len(), 7);
        assert_eq!(f.top_level(&Element::Nat(1)), Some(1));
        let seq = f.divergent_sequence(8);
        assert_eq!(seq.len(), 8);
        assert_eq!(seq[0], Element::Nat(0));
        assert_eq!(seq[6], Element::Nat(3));
    }

    #[test]
    fn power_levels() {
        let sg = SemigroupKind::RealMul { bound: 0.5 };
        let f = FilterBasis::new(
            FilterSpec::PowerContractions {
                generators: vec![0.5, -0.5],
            },
            sg,
            3,
            6,
        )
        .unwrap();
        assert!(f.contains(2, &Element::real(0.25)));
        assert!(!f.contains(2, &Element::real(-0.25)));
        assert!(f.contains(2, &Element::real(-0.125)));
        assert!(f.contains(0, &Element::real(0.5)));
        assert!(!f.contains(0, &Element::real(0.75)));
    }

    #[test]
    fn explicit_nesting_violation() {
        let levels = vec![vec![Element::Nat(1)], vec![Element::Nat(2)]];
        let e = FilterBasis::new(FilterSpec::Explicit { levels }, SemigroupKind::NatAdd, 0, 1);
        assert!(matches!(e, Err(DynamicsError::NestingViolation { level: 1, .. })));
    }

    #[test]
    fn vec_tail_offsets() {
        let f = FilterBasis::new(FilterSpec::VecTails, SemigroupKind::IntVecAdd { dim: 2 }, 2, 4).unwrap();
        assert_eq!(f.raw(1)[0], Element::Ints(vec![1, 1]));
        assert_eq!(f.raw(1).len(), 4);
        assert_eq!(f.enumerate_level(3, 1000).len(), 31 * 31);
    }

    #[test]
    fn word_enumeration() {
        let ws = words_from_length(2, 1, 6);
        assert_eq!(ws.len(), 6);
        assert_eq!(ws[2], Element::Word(vec![0, 0]));
    }
}
