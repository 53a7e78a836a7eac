use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use covdyn::compactness::{alpha, alpha_members};
use covdyn::covering::{metric_chain_family, Covering};
use covdyn::dynamics::{omega_limit, prolongational_limit, Element};
use covdyn::proximity::{n_op, precedes, rho, rho_semi};
use covdyn::scenarios::{build, builtin};
use covdyn::{MetricKind, PointSet, Space, Space32, Space64};

fn set(n: usize, bits: u32) -> PointSet {
    PointSet::from_indices(n, (0..n).filter(|&i| bits >> i & 1 == 1))
}

fn brute_closed(n: usize, fam: &[u32]) -> bool {
    let full = (1u32 << n) - 1;
    fam.contains(&0)
        && fam.contains(&full)
        && fam
            .iter()
            .all(|&a| fam.iter().all(|&b| fam.contains(&(a | b)) && fam.contains(&(a & b))))
}

/// A covering of `n` points: random members plus the singletons they miss.
fn covering(n: usize, members: &[u32]) -> Covering {
    let mut sets: Vec<PointSet> = members.iter().map(|&m| set(n, m)).filter(|s| !s.is_empty()).collect();
    for p in 0..n {
        if !sets.iter().any(|s| s.contains(p)) {
            sets.push(PointSet::singleton(n, p));
        }
    }
    Covering::new(n, sets).unwrap()
}

fn line(points: &[f64]) -> Space64 {
    Space::metric(points.iter().map(|&x| vec![x]).collect(), MetricKind::Euclidean).unwrap()
}

proptest! {
    #[test]
    fn balls_grow_with_radius(xs in vec(-5.0f64..5.0, 1..12), c in 0usize..12, r1 in 0.0f64..4.0, dr in 0.0f64..4.0) {
        let s = line(&xs);
        let c = c % s.len();
        let small = s.ball(c, r1).unwrap();
        let large = s.ball(c, r1 + dr).unwrap();
        prop_assert!(small.is_subset(&large));
        prop_assert!(small.contains(c) || r1 == 0.0);
    }

    #[test]
    fn single_precision_balls_agree(xs in vec(-5.0f32..5.0, 1..10), c in 0usize..10, r in 0.01f32..4.0) {
        let s32 = Space32::metric(xs.iter().map(|&x| vec![x]).collect(), MetricKind::Euclidean).unwrap();
        let s64 = line(&xs.iter().map(|&x| x as f64).collect::<Vec<_>>());
        let c = c % xs.len();
        let b32 = s32.ball(c, r).unwrap();
        // points whose distance is not within f32 rounding of the radius
        let clear: Vec<usize> = (0..xs.len())
            .filter(|&p| ((xs[p] as f64 - xs[c] as f64).abs() - r as f64).abs() > 1e-5)
            .collect();
        let b64 = s64.ball(c, r as f64).unwrap();
        for p in clear {
            prop_assert_eq!(b32.contains(p), b64.contains(p));
        }
    }

    #[test]
    fn topology_validation_matches_closure(n in 1usize..5, fam in btree_set(0u32..16, 0..10)) {
        let fam: Vec<u32> = fam.into_iter().filter(|&m| m < 1 << n).collect();
        let ids = (0..n).map(|i| format!("x{i}")).collect();
        let sets = fam.iter().map(|&m| set(n, m)).collect();
        let built = Space::<f64>::finite_topology_from_sets(ids, sets);
        prop_assert_eq!(built.is_ok(), brute_closed(n, &fam));
    }

    #[test]
    fn star_is_monotone_and_a_union(n in 1usize..9, members in vec(0u32..256, 1..6), y in 0u32..256, z in 0u32..256) {
        let c = covering(n, &members);
        let y = set(n, y);
        let z = set(n, z).union(&y);
        let sy = c.star_of(&y);
        prop_assert!(sy.is_subset(&c.star_of(&z)));
        let mut union = PointSet::empty(n);
        for p in y.iter() {
            union.union_with(c.point_star(p));
        }
        prop_assert_eq!(sy, union);
    }

    #[test]
    fn refinement_is_a_preorder(n in 1usize..7, a in vec(0u32..64, 1..5), b in vec(0u32..64, 1..5), c in vec(0u32..64, 1..5)) {
        let (a, b, c) = (covering(n, &a), covering(n, &b), covering(n, &c));
        prop_assert!(a.refines(&a).unwrap());
        if a.refines(&b).unwrap() && b.refines(&c).unwrap() {
            prop_assert!(a.refines(&c).unwrap());
        }
        if a.double_refines(&b).unwrap() {
            prop_assert!(a.refines(&b).unwrap());
        }
    }

    #[test]
    fn rho_is_symmetric_and_reflexive(xs in vec(0.0f64..1.0, 2..14), depth in 1usize..5) {
        let s = line(&xs);
        // consecutive coverings may coincide on a sparse sample
        let Ok(f) = metric_chain_family(&s, 1.0, depth) else { return Ok(()) };
        for x in 0..s.len() {
            prop_assert!(rho(&f, x, x).is_full());
            for y in 0..s.len() {
                prop_assert_eq!(rho(&f, x, y), rho(&f, y, x));
            }
        }
    }

    #[test]
    fn rho_of_sets_is_antitone(xs in vec(0.0f64..1.0, 2..14), a in 1u32..(1 << 14), b in 1u32..(1 << 14), extra in 0u32..(1 << 14)) {
        let s = line(&xs);
        let n = s.len();
        let Ok(f) = metric_chain_family(&s, 1.0, 3) else { return Ok(()) };
        let (a, b) = (set(n, a), set(n, b));
        prop_assume!(!a.is_empty() && !b.is_empty());
        let bigger = b.union(&set(n, extra));
        let small = rho_semi(&f, &a, &b).unwrap();
        let large = rho_semi(&f, &a, &bigger).unwrap();
        prop_assert!(precedes(&small, &large).unwrap());
    }

    #[test]
    fn measure_brackets(y in 1u64..u64::MAX, z in 0u64..u64::MAX, cap in 1usize..8) {
        let s = Space64::grid_1d(0.0, 0.02, 51).unwrap();
        let f = metric_chain_family(&s, 1.0, 4).unwrap();
        let y = PointSet::from_indices(51, (0..51).filter(|&i| y >> i & 1 == 1));
        prop_assume!(!y.is_empty());
        let z = y.union(&PointSet::from_indices(51, (0..51).filter(|&i| z >> i & 1 == 1)));
        let ay = alpha(&y, &f, cap).unwrap();
        let az = alpha(&z, &f, cap).unwrap();
        prop_assert!(precedes(&ay, &az).unwrap());
        let g = alpha_members(&y, &f, cap).unwrap();
        prop_assert!(precedes(&ay, &g).unwrap());
        prop_assert!(precedes(&g, &n_op(&f, &ay, 1)).unwrap());
        let cls = f.closure_at(&y, f.finest());
        let ac = alpha(&cls, &f, cap).unwrap();
        prop_assert!(precedes(&ay, &ac).unwrap());
        prop_assert!(precedes(&ac, &n_op(&f, &ay, 1)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn action_is_associative(s in 0u64..20, t in 0u64..20, x in 0usize..12) {
        let sc = build(builtin("decay").unwrap(), 0).unwrap();
        let sys = &sc.system;
        let x = x % sys.len();
        let (s, t) = (Element::Nat(s), Element::Nat(t));
        let st = sys.semigroup().compose(&s, &t).unwrap();
        let lhs = sys.apply(&s, sys.apply(&t, x).unwrap()).unwrap();
        prop_assert_eq!(lhs, sys.apply(&st, x).unwrap());
    }

    #[test]
    fn limit_set_lies_in_prolongation(name in prop::sample::select(vec!["decay", "grid", "composition", "iterated-contractions"]), x in 0usize..10_000, seed in 0u64..4) {
        let sc = build(builtin(name).unwrap(), seed).unwrap();
        let sys = &sc.system;
        let x = x % sys.len();
        let omega = omega_limit(sys, &PointSet::singleton(sys.len(), x)).unwrap();
        let finest = sys.family().finest();
        let j = prolongational_limit(sys, x, finest, Some(&sc.uniform_points)).unwrap();
        prop_assert!(omega.set.is_subset(&j.set));
    }
}
