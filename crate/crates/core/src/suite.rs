//! Property suite for the proximity, boundedness and measure propositions,
//! run exhaustively over points and over a supplied family of subsets.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compactness::{
    alpha, alpha_members, cantor_kuratowski_check, default_cap, is_bounded, is_totally_bounded, star_cover_number,
    CkClaim,
};
use crate::covering::{
    finite_all_coverings_family, metric_chain_family, verify_admissible, AdmissibleFamily, FamilyKind,
};
use crate::pointset::PointSet;
use crate::proximity::{converges_to_o, n_op, precedes, rho, rho_point_set, rho_semi, PColl};
use crate::report::{Budget, Check, Verdict};
use crate::space::Space;

/// Deliberate defects for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// `ρ(x,y)` loses its finest index whenever `x < y`.
    RhoAsymmetry,
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub cap: Option<usize>,
    /// Random subsets added to the interval family of each space.
    pub random_subsets: usize,
    /// Convergent and free sequences per point.
    pub sequences: usize,
    /// Random intermediate pairs for the two-step triangle law.
    pub quads: usize,
    /// Chains for each half of the Cantor–Kuratowski harness.
    pub ck_chains: usize,
    pub fault: Option<Fault>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            cap: None,
            random_subsets: 200,
            sequences: 4,
            quads: 20_000,
            ck_chains: 100,
            fault: None,
        }
    }
}

/// A space and family to run the suite on, with the subsets to quantify over.
#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub name: String,
    pub space: Space<f64>,
    pub family: AdmissibleFamily,
    pub subsets: Vec<PointSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceRun {
    pub name: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    /// One verdict per label, failing if any space fails it.
    pub summary: Vec<Check>,
    pub spaces: Vec<SpaceRun>,
    pub skipped: Vec<Skipped>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.summary.iter().all(|c| !c.failed())
    }

    pub fn label(&self, name: &str) -> Option<&Check> {
        self.summary.iter().find(|c| c.name == name)
    }
}

pub const LABELS: [&str; 17] = [
    "admissible",
    "P1-1",
    "P1-2",
    "P1-3",
    "P1-4",
    "P1-5",
    "R4-1",
    "R4-2",
    "R4-3",
    "R4-4",
    "R5",
    "R1",
    "R2",
    "P9-1",
    "P9-2",
    "P9-3",
    "P9-4",
];

/// The 101-point grid on `[0,1]` with the ratio-1/4 chain of depth 6.
/// Subsets: every interval with endpoints on multiples of four, plus random ones.
pub fn grid_input(seed: u64, random: usize) -> SuiteInput {
    let space = Space::grid_1d(0.0, 0.01, 101).expect("grid");
    let family = metric_chain_family(&space, 1.0, 6).expect("chain");
    let n = space.len();
    let mut subsets = Vec::new();
    for a in (0..n).step_by(4) {
        for b in (a..n).step_by(4) {
            subsets.push(PointSet::from_indices(n, a..=b));
        }
    }
    subsets.extend(random_subsets(n, random, 40, seed));
    SuiteInput {
        name: "grid-101".into(),
        space,
        family,
        subsets,
    }
}

fn random_subsets(n: usize, count: usize, max: usize, seed: u64) -> Vec<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=max.min(n));
            PointSet::from_indices(n, sample(&mut rng, n, size))
        })
        .collect()
}

/// Every topology on `n` labelled points.
pub fn topologies(n: usize) -> Vec<Vec<PointSet>> {
    let subsets: Vec<PointSet> = (0..1usize << n)
        .map(|m| PointSet::from_indices(n, (0..n).filter(|&i| m >> i & 1 == 1)))
        .collect();
    let full = (1usize << n) - 1;
    // proper nonempty subsets are optional
    let optional: Vec<usize> = (1..full).collect();
    let mut out = Vec::new();
    for choice in 0..1u64 << optional.len() {
        let mut opens = vec![subsets[0].clone(), subsets[full].clone()];
        for (bit, &m) in optional.iter().enumerate() {
            if choice >> bit & 1 == 1 {
                opens.push(subsets[m].clone());
            }
        }
        let closed = opens.iter().all(|a| {
            opens
                .iter()
                .all(|b| opens.contains(&a.union(b)) && opens.contains(&a.intersection(b)))
        });
        if closed {
            out.push(opens);
        }
    }
    out
}

/// Suite inputs for every topology on at most `max_points` points whose
/// family of all open coverings is admissible; the others are reported as skipped.
pub fn finite_topology_inputs(max_points: usize) -> (Vec<SuiteInput>, Vec<Skipped>) {
    let mut inputs = Vec::new();
    let mut skipped = Vec::new();
    for n in 1..=max_points {
        for (t, opens) in topologies(n).into_iter().enumerate() {
            let name = format!("top{n}-{t}");
            let ids = (0..n).map(|i| format!("x{i}")).collect();
            let space = Space::finite_topology_from_sets(ids, opens).expect("enumerated topology");
            let family = match finite_all_coverings_family(&space) {
                Ok(f) => f,
                Err(e) => {
                    skipped.push(Skipped {
                        name,
                        reason: e.to_string(),
                    });
                    continue;
                }
            };
            let all: Vec<PointSet> = (1..1usize << n)
                .map(|m| PointSet::from_indices(n, (0..n).filter(|&i| m >> i & 1 == 1)))
                .collect();
            let report = verify_admissible(&family, &space.test_opens(), &all);
            if let Some(c) = report.checks.iter().find(|c| c.failed()) {
                skipped.push(Skipped {
                    name,
                    reason: format!(
                        "family of all open coverings fails {}: {}",
                        c.name,
                        c.witness.clone().unwrap_or_default()
                    ),
                });
                continue;
            }
            inputs.push(SuiteInput {
                name,
                space,
                family,
                subsets: all,
            });
        }
    }
    (inputs, skipped)
}

/// ρ table with an optional injected defect.
struct RhoTable {
    n: usize,
    table: Vec<PColl>,
}

impl RhoTable {
    fn new(family: &AdmissibleFamily, fault: Option<Fault>) -> Self {
        let n = family.universe();
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut r = rho(family, x, y);
                if fault == Some(Fault::RhoAsymmetry) && x < y {
                    if let Some(top) = r.indices().iter().last() {
                        r = r.without(top);
                    }
                }
                table.push(r);
            }
        }
        RhoTable { n, table }
    }

    fn get(&self, x: usize, y: usize) -> &PColl {
        &self.table[x * self.n + y]
    }
}

struct Tally {
    name: &'static str,
    count: usize,
    witness: Option<String>,
    skip: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            count: 0,
            witness: None,
            skip: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.count += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn finish(self, res: usize) -> Check {
        let budget = Budget::exhaustive(self.count);
        match self.skip {
            Some(reason) => Check::skip(self.name, reason, budget, res),
            None => Check::new(self.name, self.witness.is_none(), self.witness, budget, res),
        }
    }
}

fn closure(input: &SuiteInput, a: &PointSet) -> PointSet {
    input
        .space
        .topological_closure(a)
        .unwrap_or_else(|| input.family.closure_at(a, input.family.len() - 1))
}

/// Sequences toward `x` (term `k` in the star of `U_min(k, finest)`) and
/// free random sequences.
fn sequences(input: &SuiteInput, x: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let family = &input.family;
    let n = input.space.len();
    let len = family.len() + 2;
    let mut out = Vec::new();
    for _ in 0..count {
        out.push(
            (0..len)
                .map(|k| {
                    let star = family.covering(k.min(family.len() - 1)).point_star(x).to_vec();
                    star[rng.gen_range(0..star.len())]
                })
                .collect(),
        );
        out.push((0..len).map(|_| rng.gen_range(0..n)).collect());
    }
    out
}

/// Eventually in every star of `x`, read directly from the coverings.
fn converges_directly(input: &SuiteInput, seq: &[usize], x: usize) -> bool {
    (0..input.family.len()).all(|i| {
        let star = input.family.covering(i).point_star(x);
        seq.iter().rev().take_while(|&&p| star.contains(p)).count() > 0
    })
}

fn ids(input: &SuiteInput, set: &PointSet) -> Vec<String> {
    set.iter().map(|p| input.space.point(p).id.clone()).collect()
}

/// Every labelled proposition on one space.
pub fn check_space(input: &SuiteInput, opts: &SuiteOptions) -> Vec<Check> {
    let space = &input.space;
    let family = &input.family;
    let n = space.len();
    let res = family.len() - 1;
    let cap = opts.cap.unwrap_or_else(|| default_cap(n));
    let rho = RhoTable::new(family, opts.fault);
    let id = |p: usize| space.point(p).id.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ n as u64);
    let mut checks = Vec::new();

    let axioms = verify_admissible(family, &space.test_opens(), &[]);
    let bad = axioms.checks.iter().find(|c| c.failed());
    checks.push(Check::new(
        "admissible",
        bad.is_none(),
        bad.map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())),
        Budget::exhaustive(axioms.checks.len()),
        res,
    ));

    let mut t = Tally::new("P1-1");
    for x in 0..n {
        for y in 0..n {
            t.record(rho.get(x, y) == rho.get(y, x), || {
                format!(
                    "ρ({},{}) = {} but ρ({},{}) = {}",
                    id(x),
                    id(y),
                    rho.get(x, y),
                    id(y),
                    id(x),
                    rho.get(y, x)
                )
            });
        }
    }
    checks.push(t.finish(res));

    let full = PColl::full(family);
    let mut t = Tally::new("P1-2");
    for x in 0..n {
        t.record(rho.get(x, x).is_full(), || format!("ρ({0},{0}) is not O", id(x)));
        for y in 0..n {
            t.record(precedes(&full, rho.get(x, y)).unwrap_or(false), || {
                format!("O does not precede ρ({},{})", id(x), id(y))
            });
        }
    }
    checks.push(t.finish(res));

    let mut t = Tally::new("P1-3");
    if space.is_hausdorff() {
        for x in 0..n {
            for y in 0..n {
                t.record(rho.get(x, y).is_full() == (x == y), || {
                    format!("ρ({},{}) = {}", id(x), id(y), rho.get(x, y))
                });
            }
        }
    } else {
        t.skip = Some("not Hausdorff".into());
    }
    checks.push(t.finish(res));

    let mut t = Tally::new("P1-4");
    for x in 0..n {
        for z in 0..n {
            let rxz = rho.get(x, z);
            for y in 0..n {
                let chain = rxz.intersection(rho.get(z, y)).expect("same family");
                t.record(
                    precedes(rho.get(x, y), &n_op(family, &chain, 1)).unwrap_or(false),
                    || {
                        format!(
                            "ρ({},{}) vs 1(ρ({},{}) ∩ ρ({},{}))",
                            id(x),
                            id(y),
                            id(x),
                            id(z),
                            id(z),
                            id(y)
                        )
                    },
                );
            }
        }
    }
    let quads = if n.pow(4) <= opts.quads { None } else { Some(opts.quads) };
    let two_step = |x: usize, z1: usize, z2: usize, y: usize, t: &mut Tally| {
        let chain = rho
            .get(x, z1)
            .intersection(rho.get(z1, z2))
            .and_then(|c| c.intersection(rho.get(z2, y)))
            .expect("same family");
        t.record(
            precedes(rho.get(x, y), &n_op(family, &chain, 2)).unwrap_or(false),
            || {
                format!(
                    "ρ({},{}) vs 2(ρ({},{}) ∩ ρ({},{}) ∩ ρ({},{}))",
                    id(x),
                    id(y),
                    id(x),
                    id(z1),
                    id(z1),
                    id(z2),
                    id(z2),
                    id(y)
                )
            },
        );
    };
    match quads {
        None => {
            for x in 0..n {
                for z1 in 0..n {
                    for z2 in 0..n {
                        for y in 0..n {
                            two_step(x, z1, z2, y, &mut t);
                        }
                    }
                }
            }
        }
        Some(q) => {
            for _ in 0..q {
                let p: Vec<usize> = (0..4).map(|_| rng.gen_range(0..n)).collect();
                two_step(p[0], p[1], p[2], p[3], &mut t);
            }
        }
    }
    checks.push(t.finish(res));

    let seqs: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
        .map(|x| (x, sequences(input, x, opts.sequences, &mut rng)))
        .collect();
    let mut t = Tally::new("P1-5");
    for (x, list) in &seqs {
        for s in list {
            let trace: Vec<PColl> = s.iter().map(|&p| rho.get(p, *x).clone()).collect();
            let via_rho = converges_to_o(family, &trace).converges;
            t.record(via_rho == converges_directly(input, s, *x), || {
                format!(
                    "sequence {:?} toward {}: ρ says {via_rho}",
                    s.iter().map(|&p| id(p)).collect::<Vec<_>>(),
                    id(*x)
                )
            });
        }
    }
    checks.push(t.finish(res));

    let subsets: Vec<(&PointSet, PointSet)> = input
        .subsets
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| (s, closure(input, s)))
        .collect();
    let mut r41 = Tally::new("R4-1");
    let mut r42 = Tally::new("R4-2");
    for (a, cls) in &subsets {
        for x in 0..n {
            let r = rho_point_set(family, x, a).expect("nonempty");
            r41.record(r.is_full() == cls.contains(x), || {
                format!("ρ({}, {:?}) = {r}, closure {:?}", id(x), ids(input, a), ids(input, cls))
            });
            let rc = rho_point_set(family, x, cls).expect("nonempty");
            r42.record(r == rc, || {
                format!(
                    "ρ({}, A) = {r} but ρ({}, cls A) = {rc} for A = {:?}",
                    id(x),
                    id(x),
                    ids(input, a)
                )
            });
        }
    }
    checks.push(r41.finish(res));
    checks.push(r42.finish(res));

    let bs: Vec<&PointSet> = subsets.iter().map(|s| s.0).take(40).collect();
    let mut r43 = Tally::new("R4-3");
    let mut r44 = Tally::new("R4-4");
    for (a, cls) in &subsets {
        for b in &bs {
            let r = rho_semi(family, a, b).expect("nonempty");
            let rc = rho_semi(family, cls, b).expect("nonempty");
            r43.record(r == rc, || {
                format!("ρ_A(B) = {r}, ρ_clsA(B) = {rc}, A = {:?}", ids(input, a))
            });
            r44.record(b.is_subset(cls) == r.is_full(), || {
                format!("B = {:?}, cls A = {:?}, ρ_A(B) = {r}", ids(input, b), ids(input, cls))
            });
        }
    }
    checks.push(r43.finish(res));
    checks.push(r44.finish(res));

    let mut t = Tally::new("R5");
    for (x, list) in &seqs {
        for s in list.iter().filter(|s| converges_directly(input, s, *x)) {
            for (a, cls) in subsets.iter().take(60) {
                let trace: Vec<PColl> = s
                    .iter()
                    .map(|&p| rho_semi(family, a, &PointSet::singleton(n, p)).expect("nonempty"))
                    .collect();
                let conv = converges_to_o(family, &trace).converges;
                t.record(conv == cls.contains(*x), || {
                    format!(
                        "limit {} of a sequence, A = {:?}: ρ_A converges {conv}",
                        id(*x),
                        ids(input, a)
                    )
                });
            }
        }
    }
    checks.push(t.finish(res));

    let mut r1 = Tally::new("R1");
    let mut r2 = Tally::new("R2");
    for (a, _) in &subsets {
        let bounded = is_bounded(a, family).unwrap_or(false);
        if is_totally_bounded(a, family).unwrap_or(false) {
            r1.record(bounded, || {
                format!("{:?} is totally bounded but not bounded", ids(input, a))
            });
        }
        if bounded {
            for i in 0..family.len() {
                let st = family.star(a, i);
                r2.record(is_bounded(&st, family).unwrap_or(false), || {
                    format!("St[{:?}, U_{i}] is unbounded", ids(input, a))
                });
            }
        }
    }
    checks.push(r1.finish(res));
    checks.push(r2.finish(res));

    // measure propositions on a bounded number of subsets
    let measured: Vec<&(&PointSet, PointSet)> = subsets.iter().take(240).collect();
    let alphas: Vec<PColl> = measured
        .iter()
        .map(|(y, _)| alpha(y, family, cap).expect("nonempty"))
        .collect();
    let mut p1 = Tally::new("P9-1");
    let mut p4 = Tally::new("P9-4");
    for ((y, cls), ay) in measured.iter().zip(&alphas) {
        let g = alpha_members(y, family, cap).expect("nonempty");
        let one = n_op(family, ay, 1);
        p1.record(
            precedes(ay, &g).unwrap_or(false) && precedes(&g, &one).unwrap_or(false),
            || format!("Y = {:?}: α = {ay}, γ = {g}, 1α = {one}", ids(input, y)),
        );
        let ac = alpha(cls, family, cap).expect("nonempty");
        p4.record(
            precedes(ay, &ac).unwrap_or(false) && precedes(&ac, &one).unwrap_or(false),
            || format!("Y = {:?}: α = {ay}, α(cls) = {ac}, 1α = {one}", ids(input, y)),
        );
    }
    let mut p2 = Tally::new("P9-2");
    let mut p3 = Tally::new("P9-3");
    let mut p3b = Tally::new("P9-3 cap bracket");
    for (i, (y, _)) in measured.iter().enumerate() {
        for (j, (z, _)) in measured.iter().enumerate().skip(i).take(6) {
            if y.is_subset(z) {
                p2.record(precedes(&alphas[i], &alphas[j]).unwrap_or(false), || {
                    format!("Y = {:?} ⊆ Z = {:?}", ids(input, y), ids(input, z))
                });
            }
            let u = y.union(z);
            p2.record(
                precedes(&alphas[i], &alpha(&u, family, cap).expect("nonempty")).unwrap_or(false),
                || format!("Y = {:?} ⊆ Y ∪ Z", ids(input, y)),
            );
            let au = alpha(&u, family, cap).expect("nonempty");
            let meet = alphas[i].intersection(&alphas[j]).expect("same family");
            let au_double = alpha(&u, family, 2 * cap).expect("nonempty");
            p3.record(au == meet, || {
                format!(
                    "Y = {:?}, Z = {:?}: α(Y∪Z) = {au}, α(Y)∩α(Z) = {meet}",
                    ids(input, y),
                    ids(input, z)
                )
            });
            p3b.record(
                precedes(&meet, &au).unwrap_or(false) && precedes(&au_double, &meet).unwrap_or(false),
                || {
                    format!(
                        "Y = {:?}, Z = {:?}: α(Y∪Z) = {au}, doubled cap {au_double}",
                        ids(input, y),
                        ids(input, z)
                    )
                },
            );
        }
    }
    checks.push(p1.finish(res));
    checks.push(p2.finish(res));
    checks.push(p3.finish(res));
    checks.push(p3b.finish(res));
    checks.push(p4.finish(res));
    checks
}

/// Decreasing closed chains: `count` whose measures converge to O, which
/// must have nonempty intersections, and `count` negative controls whose
/// last term needs more than `cap` stars, which must be reported as
/// hypothesis not met.
pub fn cantor_kuratowski_harness(input: &SuiteInput, cap: usize, count: usize, seed: u64) -> Vec<Check> {
    let family = &input.family;
    let n = input.space.len();
    let res = family.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let closed = |s: &PointSet| family.closure_at(s, res);
    let pick = |from: &PointSet, size: usize, rng: &mut ChaCha8Rng| {
        let pool = from.to_vec();
        let size = size.clamp(1, pool.len());
        PointSet::from_indices(n, sample(rng, pool.len(), size).into_iter().map(|i| pool[i]))
    };

    let mut positive = Tally::new("CK");
    for c in 0..count {
        let mut chain = vec![closed(&pick(
            &input.space.all(),
            rng.gen_range(cap + 1..=n.max(cap + 1)),
            &mut rng,
        ))];
        let steps = rng.gen_range(2..=6);
        for k in 1..=steps {
            let prev = chain.last().expect("nonempty chain");
            let size = if k == steps {
                rng.gen_range(1..=cap.min(prev.len()))
            } else {
                rng.gen_range(1..=prev.len())
            };
            let next = closed(&pick(prev, size, &mut rng));
            chain.push(next);
        }
        let report = cantor_kuratowski_check(&chain, family, cap);
        let mut oracle = input.space.all();
        for f in &chain {
            oracle.intersect_with(f);
        }
        let ok = match &report {
            Ok(r) => {
                r.claim == CkClaim::NonemptyIntersection
                    && r.intersection.as_deref() == Some(oracle.to_vec().as_slice())
                    && !oracle.is_empty()
            }
            Err(_) => false,
        };
        positive.record(ok, || format!("chain {c}: {:?}", report.map(|r| r.claim)));
    }

    let mut negative = Tally::new("CK negative controls");
    let mut made = 0;
    let mut tries = 0;
    while made < count && tries < count * 50 {
        tries += 1;
        let size = rng.gen_range(cap + 1..=n.max(cap + 1));
        let mut chain = vec![closed(&pick(&input.space.all(), size, &mut rng))];
        for _ in 0..rng.gen_range(1..=4) {
            let prev = chain.last().expect("nonempty chain");
            let size = rng.gen_range(cap + 1..=prev.len().max(cap + 1));
            chain.push(closed(&pick(prev, size, &mut rng)));
        }
        let last = chain.last().expect("nonempty chain");
        if star_cover_number(last, family, res, cap).is_some() {
            continue;
        }
        made += 1;
        let report = cantor_kuratowski_check(&chain, family, cap);
        negative.record(
            matches!(&report, Ok(r) if r.claim == CkClaim::HypothesisNotMet && r.intersection.is_none()),
            || format!("control {made}: {:?}", report.map(|r| r.claim)),
        );
    }
    if made < count {
        negative.skip = Some(format!("only {made} controls could be drawn"));
    }
    vec![positive.finish(res), negative.finish(res)]
}

/// Runs the suite on every input and folds the verdicts per label.
pub fn run_suite(inputs: &[SuiteInput], skipped: Vec<Skipped>, opts: &SuiteOptions) -> SuiteReport {
    let spaces: Vec<SpaceRun> = inputs
        .iter()
        .map(|input| SpaceRun {
            name: input.name.clone(),
            checks: check_space(input, opts),
        })
        .collect();
    let summary = fold(&spaces);
    SuiteReport {
        summary,
        spaces,
        skipped,
    }
}

fn fold(spaces: &[SpaceRun]) -> Vec<Check> {
    let mut names: Vec<&str> = Vec::new();
    for s in spaces {
        for c in &s.checks {
            if !names.contains(&c.name.as_str()) {
                names.push(&c.name);
            }
        }
    }
    names
        .into_iter()
        .map(|name| {
            let mut count = 0;
            let mut ran = 0;
            let mut failure = None;
            let mut res = 0;
            for s in spaces {
                for c in s.checks.iter().filter(|c| c.name == name) {
                    count += c.budget.per_level;
                    res = res.max(c.resolution);
                    if c.verdict != Verdict::Skip {
                        ran += 1;
                    }
                    if c.failed() && failure.is_none() {
                        failure = Some(format!("{}: {}", s.name, c.witness.clone().unwrap_or_default()));
                    }
                }
            }
            if ran == 0 {
                Check::skip(name, "skipped on every space", Budget::exhaustive(count), res)
            } else {
                Check::new(name, failure.is_none(), failure, Budget::exhaustive(count), res)
            }
        })
        .collect()
}

/// The standard inputs: the grid and every admissible topology on at most three points.
pub fn standard_inputs(seed: u64, random: usize) -> (Vec<SuiteInput>, Vec<Skipped>) {
    let (mut inputs, skipped) = finite_topology_inputs(3);
    inputs.insert(0, grid_input(seed, random));
    (inputs, skipped)
}

/// The full axiom suite on the standard inputs.
pub fn verify_axioms(opts: &SuiteOptions) -> SuiteReport {
    let (inputs, skipped) = standard_inputs(opts.seed, opts.random_subsets);
    verify_axioms_on(&inputs, skipped, opts)
}

/// Runs the suite, then the Cantor–Kuratowski harness on every chain family.
pub fn verify_axioms_on(inputs: &[SuiteInput], skipped: Vec<Skipped>, opts: &SuiteOptions) -> SuiteReport {
    let mut report = run_suite(inputs, skipped, opts);
    for (input, run) in inputs.iter().zip(report.spaces.iter_mut()) {
        if input.family.kind() != FamilyKind::Chain {
            continue;
        }
        let cap = opts.cap.unwrap_or_else(|| default_cap(input.space.len()));
        run.checks
            .extend(cantor_kuratowski_harness(input, cap, opts.ck_chains, opts.seed));
    }
    report.summary = fold(&report.spaces);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts() {
        assert_eq!(topologies(1).len(), 1);
        assert_eq!(topologies(2).len(), 4);
        assert_eq!(topologies(3).len(), 29);
    }

    #[test]
    fn small_topologies_fail_only_the_capped_union_law() {
        let (inputs, _) = finite_topology_inputs(2);
        let r = run_suite(&inputs, Vec::new(), &SuiteOptions::default());
        let failing: Vec<&str> = r.summary.iter().filter(|c| c.failed()).map(|c| c.name.as_str()).collect();
        assert_eq!(failing, ["P9-3"]);
        // two points, cap 1: each singleton fits, the pair does not
        let w = r.label("P9-3").unwrap().witness.as_deref().unwrap();
        assert!(w.contains("Y = [\"x0\"], Z = [\"x1\"]"), "{w}");
    }

    #[test]
    fn asymmetry_fault_breaks_symmetry() {
        let (inputs, _) = finite_topology_inputs(2);
        let opts = SuiteOptions {
            fault: Some(Fault::RhoAsymmetry),
            ..SuiteOptions::default()
        };
        let r = run_suite(&inputs, Vec::new(), &opts);
        assert!(r.label("P1-1").unwrap().failed());
    }
}
