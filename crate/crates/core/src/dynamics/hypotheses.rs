//! The translation hypotheses between a filter basis and the semigroup:
//! H1 `sB ⊆ A`, H2 `Bs ⊆ A`, H3 `B ⊆ As`, H4 `B ⊆ sA`.

use serde::Serialize;

use crate::report::{Budget, Check};

use super::semigroup::{Element, FilterBasis, FilterSpec};

/// Default enumeration bound for each candidate level `B`.
pub const DEFAULT_ENUMERATION_BOUND: usize = 1000;

/// How far past `A_k` candidate levels `B` are searched for predicate filters.
const LEVEL_SEARCH: usize = 64;

/// A pair `(s, A_k)` with no witness level: the first counterexample found
/// in every candidate `B = A_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisFailure {
    pub hypothesis: String,
    pub s: Element,
    pub level: usize,
    pub counterexamples: Vec<(usize, Element)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub checks: Vec<Check>,
    pub failures: Vec<HypothesisFailure>,
}

impl HypothesisReport {
    pub fn passed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && c.passed())
    }
}

/// For each hypothesis, each sampled `s` (the first `s_count` elements of
/// `A_0`) and each level `A_k`, searches a level `B` whose enumeration up
/// to `bound` satisfies the inclusion.
pub fn check_hypotheses(filter: &FilterBasis, s_count: usize, bound: usize) -> HypothesisReport {
    let sg = filter.semigroup();
    let depth = filter.depth();
    let s_sample: Vec<Element> = filter
        .sample(0)
        .iter()
        .filter(|e| !matches!(e, Element::Real(c) if *c == 0.0))
        .take(s_count)
        .cloned()
        .collect();
    let last_candidate = |k: usize| match filter.spec() {
        FilterSpec::Explicit { .. } => depth,
        _ => k + LEVEL_SEARCH,
    };
    let max_level = last_candidate(depth);
    let enumerated: Vec<Vec<Element>> = (0..=max_level).map(|j| filter.enumerate_level(j, bound)).collect();
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    for h in 1..=4 {
        let name = format!("H{h}");
        let holds = |s: &Element, b: &Element, k: usize| -> bool {
            let a = match h {
                1 => sg.compose(s, b),
                2 => sg.compose(b, s),
                3 => sg.solve_right(b, s),
                _ => sg.solve_left(b, s),
            };
            a.is_some_and(|a| filter.contains(k, &a))
        };
        let mut first_failure: Option<HypothesisFailure> = None;
        for s in &s_sample {
            for k in 0..=depth {
                let mut counterexamples = Vec::new();
                let mut ok = false;
                for j in k..=last_candidate(k) {
                    match enumerated[j].iter().find(|b| !holds(s, b, k)) {
                        None => {
                            ok = true;
                            break;
                        }
                        Some(b) => counterexamples.push((j, b.clone())),
                    }
                }
                if !ok && first_failure.is_none() {
                    first_failure = Some(HypothesisFailure {
                        hypothesis: name.clone(),
                        s: s.clone(),
                        level: k,
                        counterexamples,
                    });
                }
            }
        }
        let witness = first_failure.as_ref().map(|f| {
            let (j, b) = &f.counterexamples[0];
            format!(
                "s={} A_{}: no level B works up to A_{}; in B=A_{j}: b={b}",
                f.s,
                f.level,
                f.counterexamples.last().map(|c| c.0).unwrap_or(*j)
            )
        });
        checks.push(Check::new(
            name,
            first_failure.is_none(),
            witness,
            Budget::new(depth, bound),
            0,
        ));
        failures.extend(first_failure);
    }
    HypothesisReport { checks, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::semigroup::SemigroupKind;

    #[test]
    fn additive_tails_pass_all() {
        let f = FilterBasis::new(FilterSpec::Tails, SemigroupKind::NatAdd, 6, 16).unwrap();
        let r = check_hypotheses(&f, 8, 200);
        assert!(r.checks.iter().all(Check::passed), "{:?}", r.checks);
    }

    #[test]
    fn multiplicative_tails_fail_h3_with_odd_witness() {
        let f = FilterBasis::new(FilterSpec::Tails, SemigroupKind::NatMul, 6, 16).unwrap();
        let r = check_hypotheses(&f, 8, 1000);
        assert!(r.passed("H1"));
        assert!(r.passed("H2"));
        assert!(!r.passed("H3"));
        let f3 = r.failures.iter().find(|f| f.hypothesis == "H3").unwrap();
        assert_eq!(f3.s, Element::Nat(2));
        for (_, b) in &f3.counterexamples {
            match b {
                Element::Nat(n) => assert_eq!(n % 2, 1),
                _ => panic!("unexpected element"),
            }
        }
    }
}
