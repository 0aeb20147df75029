//! Acceptance run: one timed PASS/FAIL line per criterion. Each criterion
//! passes only if its checks hold and it finishes inside its time limit.

mod common;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use galaxies_core::expr::Affine;
use galaxies_core::filters::{FilterVerdict, IndexSet, UltrafilterOracle};
use galaxies_core::galaxies0::{
    chain_thm42, is_principal, koenig_witness, limitedly_distant, partial_order_check, Budgets, Chain, Closeness, Limited,
    Principal,
};
use galaxies_core::galaxies1::{chain_thm112, classify_one_galaxies, classify_zero_galaxies, partial_order_check_1};
use galaxies_core::graphone::builtins as one;
use galaxies_core::graphone::solver::solve;
use galaxies_core::graphzero::builtins as zero;
use galaxies_core::graphzero::{edit_locality_violations, parse_edits, Dist0};
use galaxies_core::seq::{DefSeq, NodeTerm};
use galaxies_core::ultrapower::{comparison_set, hyper_triangle_check, hyperdistance, HyperOrdinal, Hypernode};
use galaxies_core::{Metric, NodeRef, Ordinal, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_force, grid_nodes};

const O: UltrafilterOracle = UltrafilterOracle::Frechet;

fn node(s: &str) -> NodeRef {
    s.parse().expect("literal node")
}

fn linear(m: &dyn Metric, fam: &str, params: &[(i64, i64)]) -> Result<Hypernode> {
    let t = NodeTerm::new(fam, params.iter().map(|&(s, c)| Affine::new(s, c)).collect());
    Hypernode::new(m, DefSeq::affine(t), &O)
}

fn constant(m: &dyn Metric, s: &str) -> Result<Hypernode> {
    Hypernode::constant(m, &node(s))
}

/// A random definable sequence over `families` (name, arity): a short
/// prefix of valid nodes, then one or two affine clauses. Retries until the
/// sequence binds to `m` and its first 64 terms are nodes of `m`.
fn random_hypernode(m: &dyn Metric, families: &[(&str, usize)], rng: &mut ChaCha8Rng) -> Hypernode {
    loop {
        let term = |rng: &mut ChaCha8Rng| {
            let (f, arity) = families[rng.gen_range(0..families.len())];
            NodeTerm::new(f, (0..arity).map(|_| Affine::new(rng.gen_range(-1..=3), rng.gen_range(-6..=9))).collect())
        };
        let period = rng.gen_range(1..=2);
        let tail: Vec<NodeTerm> = (0..period).map(|_| term(rng)).collect();
        let prefix = (0..rng.gen_range(0..=2))
            .map(|_| {
                let (f, arity) = families[rng.gen_range(0..families.len())];
                NodeRef::new(f, (0..arity).map(|_| rng.gen_range(0..=6)).collect())
            })
            .collect();
        let seq = DefSeq { prefix, period, tail };
        let Ok(h) = Hypernode::new(m, seq, &O) else { continue };
        if (0..64).all(|n| h.at(n).and_then(|v| m.check_node(&v)).is_ok()) {
            return h;
        }
    }
}

/// A random node of `m` with parameters in `-r..=r`.
fn random_node(m: &dyn Metric, families: &[(&str, usize)], r: i64, rng: &mut ChaCha8Rng) -> NodeRef {
    loop {
        let (f, arity) = families[rng.gen_range(0..families.len())];
        let v = NodeRef::new(f, (0..arity).map(|_| rng.gen_range(-r..=r)).collect());
        if m.check_node(&v).is_ok() {
            return v;
        }
    }
}

fn families0(g: &galaxies_core::graphzero::GraphPresentation) -> Vec<(&str, usize)> {
    g.families.iter().map(|f| (f.name.as_str(), f.slots.len())).collect()
}

fn families1(g: &galaxies_core::graphone::OneGraphPresentation) -> Vec<(&str, usize)> {
    let mut v: Vec<(&str, usize)> = g.one_nodes.iter().map(|f| (f.family.name.as_str(), f.family.slots.len())).collect();
    v.extend(families0(&g.zero_graph));
    v
}

/// The set `{n : d_n <= bound}` and its verdict.
fn within(d: &HyperOrdinal, bound: Ordinal) -> Result<(IndexSet, FilterVerdict)> {
    let over = comparison_set(d, &HyperOrdinal::constant(bound), Ordering::Greater)?;
    let s = over.complement();
    let v = O.verdict(&s)?;
    Ok((s, v))
}

fn chain_ok(ch: &Chain, m_max: usize) -> bool {
    ch.valid
        && ch.adjacent.iter().all(|a| a.answer == Closeness::Closer && a.all_witnesses_in() && a.witnesses.len() == m_max)
        && ch.distinct.iter().all(|(_, _, l)| *l == Limited::No)
}

type Outcome = Result<(bool, String)>;

fn ladder_bound(b: &Budgets) -> Outcome {
    let g = zero::builtin("grounded_ladder")?;
    let mut worst = 0;
    for k in 0..=64 {
        for l in 0..=64 {
            let (x, y) = (NodeRef::new("x", vec![k]), NodeRef::new("x", vec![l]));
            let want = match (k - l).abs() {
                0 => 0,
                1 => 1,
                _ => 2,
            };
            let found = g.dist_search(&x, &y, b.budget)?;
            if found != Ordinal::finite(want) || g.distance(&x, &y, b.budget)? != want {
                return Ok((false, format!("d({x}, {y}) = {found}, expected {want}")));
            }
            worst = worst.max(want);
        }
        if g.distance(&NodeRef::new("x", vec![k]), &node("g"), b.budget)? != 1 {
            return Ok((false, format!("x({k}) is not adjacent to g")));
        }
    }
    let fams = families0(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let (p, q) = (random_hypernode(&g, &fams, &mut rng), random_hypernode(&g, &fams, &mut rng));
        let d = hyperdistance(&g, &p, &q, b.budget)?;
        let (_, v) = within(&d, Ordinal::finite(2))?;
        let l = limitedly_distant(&g, &p, &q, &O, b)?.answer;
        if v != FilterVerdict::InFilter || !matches!(l, Limited::Yes(k) if k <= 2) {
            return Ok((false, format!("{} vs {}: verdict {v}, limited {l}", p.seq, q.seq)));
        }
    }
    Ok((true, format!("max pairwise distance {worst}; 50 hypernode pairs within 2")))
}

fn dichotomy(b: &Budgets) -> Outcome {
    let g = zero::builtin("grounded_ladder")?;
    let fams = families0(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut reps: Vec<Hypernode> = (0..12).map(|_| random_hypernode(&g, &fams, &mut rng)).collect();
    reps.push(constant(&g, "g")?);
    let r = classify_zero_galaxies(&g, &reps, &O, b)?;
    for h in &reps {
        if is_principal(&g, h, &O, b)? != Principal::Yes {
            return Ok((false, format!("{} is not principal", h.seq)));
        }
    }
    if r.classes.len() != 1 {
        return Ok((false, format!("grounded_ladder splits into {} galaxies", r.classes.len())));
    }
    let cases = [
        ("one_ended_path", "x(0)", "x", 1),
        ("endless_path", "x(0)", "x", 1),
        ("grid2d", "grid(0,0)", "grid", 2),
        ("ladder_with_tail", "x(0)", "t", 1),
    ];
    for (name, base, fam, arity) in cases {
        let g = zero::builtin(name)?;
        let params: Vec<(i64, i64)> = (0..arity).map(|i| (i64::from(i == 0), 0)).collect();
        let ch = chain_thm42(&g, &constant(&g, base)?, &linear(&g, fam, &params)?, 3, &O, b)?;
        if ch.handles.len() != 7 || !chain_ok(&ch, b.m_max as usize) {
            return Ok((false, format!("{name}: {} handles, valid={}", ch.handles.len(), ch.valid)));
        }
    }
    Ok((true, "one galaxy on grounded_ladder; four chains of 7 galaxies".into()))
}

fn koenig(b: &Budgets) -> Outcome {
    for (name, x0) in [("one_ended_path", "x(0)"), ("grid2d", "grid(0,0)")] {
        let g = zero::builtin(name)?;
        let x0 = node(x0);
        let w = koenig_witness(&g, &x0, 64)?;
        for n in 0..=64usize {
            let v = w.at(n)?;
            let d = g.bfs_distance(&x0, &v, b.budget)?;
            if d != Dist0::Finite(n as u64) {
                return Ok((false, format!("{name}: d({x0}, {v}) = {d:?}, expected {n}")));
            }
        }
        let p = is_principal(&g, &w, &O, b)?;
        if p != Principal::No {
            return Ok((false, format!("{name}: principal = {p}")));
        }
    }
    Ok((true, "d(x0, x_n) = n for n <= 64 on both graphs, nonprincipal".into()))
}

fn edit_locality(b: &Budgets) -> Outcome {
    let base = zero::builtin("grid2d")?;
    let sets = [
        "add:grid(0,0)/grid(2,3)",
        "add:grid(-4,1)/grid(3,-2);del:grid(5,5)/grid(6,5)",
        "add:grid(1,1)/grid(-1,-1);del:grid(0,7)/grid(0,8);add:grid(-8,-8)/grid(-6,-9)",
    ];
    let mut total = 0;
    for s in sets {
        let g = zero::builtin_with_edits("grid2d_edited", &parse_edits(s)?)?;
        let (compared, bad) = edit_locality_violations(&base, &g, &node("grid(0,0)"), 12, b.budget)?;
        if compared == 0 || !bad.is_empty() {
            return Ok((false, format!("{s}: {compared} pairs, {} differ, first {:?}", bad.len(), bad.first())));
        }
        total += compared;
    }
    Ok((true, format!("{total} pairs outside the envelopes agree over 3 edit sets")))
}

fn walks(b: &Budgets) -> Outcome {
    let mut exact = 0;
    for name in ["diamond_chain", "ladder_of_endless_paths"] {
        let g = one::builtin_truncated(name, 2)?;
        let nodes = grid_nodes(&g, -1, 2);
        for (i, x) in nodes.iter().enumerate() {
            for y in &nodes[i..] {
                let wd = g.wdistance(x, y, b.budget)?;
                let s = solve(&g, x, y, b.budget)?.dist;
                let bf = brute_force(&g, x, y, 3, 12);
                let short = wd.tau1 <= 3 && wd.tau0 <= 12;
                let ok = s == wd
                    && match bf {
                        Some(l) => short && l == wd || !short && l >= wd,
                        None => !short,
                    };
                if !ok {
                    return Ok((false, format!("{name}: d({x}, {y}) = {wd}, solver {s}, brute force {bf:?}")));
                }
                exact += usize::from(short);
            }
        }
    }
    Ok((true, format!("{exact} pairs equal to the shortest enumerated walk")))
}

fn ladder_of_paths(b: &Budgets) -> Outcome {
    let g = one::builtin("ladder_of_endless_paths")?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ones: Vec<Hypernode> = (0..12).map(|k| constant(&g, &format!("n1({k})"))).collect::<Result<_>>()?;
    ones.push(constant(&g, "g1")?);
    ones.extend((0..12).map(|_| random_hypernode(&g, &[("n1", 1)], &mut rng)));
    let mut zeros: Vec<Hypernode> = vec![];
    for k in 0..4 {
        for i in -2..=2 {
            zeros.push(constant(&g, &format!("h({k},{i})"))?);
            zeros.push(constant(&g, &format!("v({k},{i})"))?);
        }
    }
    zeros.extend((0..12).map(|_| random_hypernode(&g, &[("h", 2), ("v", 2)], &mut rng)));
    for (set, bound) in [(&ones, 4), (&zeros, 6)] {
        for (i, p) in set.iter().enumerate() {
            for q in &set[i + 1..] {
                let d = hyperdistance(&g, p, q, b.budget)?;
                let (s, _) = within(&d, Ordinal::omega_times(bound))?;
                if !s.same_set(&IndexSet::all()) {
                    return Ok((false, format!("d({}, {}) exceeds w*{bound} on some index", p.seq, q.seq)));
                }
            }
        }
    }
    let all: Vec<Hypernode> = ones.iter().chain(&zeros).cloned().collect();
    let r = classify_one_galaxies(&g, &all, &O, b)?;
    let ok = r.classes.len() == 1 && r.conflicts.is_empty();
    Ok((ok, format!("{} 1-hypernodes, {} 0-hypernodes, {} 1-galaxies", ones.len(), zeros.len(), r.classes.len())))
}

fn diamond_chain(g: &galaxies_core::graphone::OneGraphPresentation, b: &Budgets) -> Result<Chain> {
    chain_thm112(g, &constant(g, "x1(0)")?, &linear(g, "x1", &[(1, 0)])?, 2, &O, b)
}

fn one_third(b: &Budgets) -> Outcome {
    let g = one::builtin("diamond_chain")?;
    let ch = diamond_chain(&g, b)?;
    if ch.handles.len() != 5 || !chain_ok(&ch, b.m_max as usize) {
        return Ok((false, format!("{} handles, valid={}", ch.handles.len(), ch.valid)));
    }
    let x = node("x1(0)");
    let mut checked = 0;
    // handles 0 and 1 are the one-third points of handles 1 and 2
    for i in 0..2 {
        for n in 0..=64 {
            let u = ch.handles[i].representative.at(n)?;
            let v = ch.handles[i + 1].representative.at(n)?;
            let d = g.dist(&x, &v, b.budget)?;
            if d < Ordinal::omega_times(6) {
                continue;
            }
            let du = g.dist(&x, &u, b.budget)?.scale(3)?;
            if !(d <= du && du <= d.scale(2)?) {
                return Ok((false, format!("n = {n}: d(x, v) = {d}, 3 d(x, u) = {du}")));
            }
            checked += 1;
        }
    }
    Ok((checked > 0, format!("5 ordered galaxies; band holds at {checked} sampled indices")))
}

fn metric_axioms(b: &Budgets) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut counts = vec![];
    // nodes are drawn in canonical form: on 1-graphs, the maximal node
    let run = |m: &dyn Metric, pick: &dyn Fn(&mut ChaCha8Rng) -> NodeRef, triples: usize, rng: &mut ChaCha8Rng| -> Result<Option<String>> {
        for t in 0..triples {
            let (a, mid, c) = (pick(rng), pick(rng), pick(rng));
            let d = |p: &NodeRef, q: &NodeRef| m.dist(p, q, b.budget);
            let (ab, ba, bc, ac) = (d(&a, &mid)?, d(&mid, &a)?, d(&mid, &c)?, d(&a, &c)?);
            if ab != ba || (ab == Ordinal::ZERO) != (a == mid) || ac > ab.natural_sum(bc)? {
                return Ok(Some(format!("{}: {a}, {mid}, {c}", m.name())));
            }
            if m.rank() == 0 && t < 100 && m.dist_search(&a, &mid, b.budget)? != ab {
                return Ok(Some(format!("{}: closed form and search differ on {a}, {mid}", m.name())));
            }
        }
        Ok(None)
    };
    for name in zero::NAMES {
        let g = zero::builtin(name)?;
        let fams = families0(&g);
        if let Some(bad) = run(&g, &|r: &mut ChaCha8Rng| random_node(&g, &fams, 14, r), 500, &mut rng)? {
            return Ok((false, bad));
        }
        for _ in 0..10 {
            let hs: Vec<Hypernode> = (0..3).map(|_| random_hypernode(&g, &fams, &mut rng)).collect();
            let t = hyper_triangle_check(&g, &hs[0], &hs[1], &hs[2], 64, b.budget)?;
            if !t.pass {
                return Ok((false, format!("{name}: hypernode triangle fails at {:?}", t.pointwise_failures)));
            }
        }
        counts.push(format!("{name} 500"));
    }
    for name in one::NAMES {
        let g = one::builtin(name)?;
        let fams = families1(&g);
        let pick = |r: &mut ChaCha8Rng| g.maximal(&random_node(&g, &fams, 14, r)).expect("valid node");
        if let Some(bad) = run(&g, &pick, 200, &mut rng)? {
            return Ok((false, bad));
        }
        counts.push(format!("{name} 200"));
    }
    Ok((true, format!("no violations ({})", counts.join(", "))))
}

fn random_set(rng: &mut ChaCha8Rng) -> IndexSet {
    let prefix = (0..rng.gen_range(0..=6)).map(|_| rng.gen_bool(0.5)).collect();
    let period = (0..rng.gen_range(1..=6)).map(|_| rng.gen_bool(0.5)).collect();
    IndexSet::new(prefix, period).expect("nonempty period")
}

fn filter_algebra(_: &Budgets) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let oracles = [O, UltrafilterOracle::residue_chain(vec![(2, 0), (6, 4)])?];
    for i in 0..1000 {
        let (a, b) = (random_set(&mut rng), random_set(&mut rng));
        // the Frechet verdict is exactly finite / cofinite, checked on members
        let cofinite = (0..24).all(|n| a.contains(200 + n));
        let finite = (0..24).all(|n| !a.contains(200 + n));
        let want = if cofinite {
            FilterVerdict::InFilter
        } else if finite {
            FilterVerdict::NotInFilter
        } else {
            FilterVerdict::Undetermined
        };
        if O.verdict(&a)? != want {
            return Ok((false, format!("pair {i}: Frechet verdict on {a:?}")));
        }
        for o in &oracles {
            let (va, vb) = (o.verdict(&a)?, o.verdict(&b)?);
            let sup = a.union(&b);
            let monotone = !va.is_in() || o.verdict(&sup)?.is_in();
            let fip = !(va.is_in() && vb.is_in()) || o.verdict(&a.intersect(&b))?.is_in();
            let vc = o.verdict(&a.complement())?;
            let exclusive = !(va.is_in() && vc.is_in()) && (!va.is_determined() || vc == va.negate());
            if !(monotone && fip && exclusive && a.is_subset(&sup)) {
                return Ok((false, format!("pair {i}: {o:?} on {a:?}, {b:?}")));
            }
        }
    }
    Ok((true, "1000 pairs, two oracles, no violations".into()))
}

fn partial_order(b: &Budgets) -> Outcome {
    let mut triples = 0;
    let cases = [
        ("one_ended_path", "x(0)", "x", 1),
        ("endless_path", "x(0)", "x", 1),
        ("grid2d", "grid(0,0)", "grid", 2),
        ("ladder_with_tail", "x(0)", "t", 1),
    ];
    for (name, base, fam, arity) in cases {
        let g = zero::builtin(name)?;
        let params: Vec<(i64, i64)> = (0..arity).map(|i| (i64::from(i == 0), 0)).collect();
        let x = constant(&g, base)?;
        let ch = chain_thm42(&g, &x, &linear(&g, fam, &params)?, 3, &O, b)?;
        let reps: Vec<Hypernode> = ch.handles.iter().map(|h| h.representative.clone()).collect();
        let r = partial_order_check(&g, &reps, &x, &O, b)?;
        if !r.pass || !r.transitivity_violations.is_empty() {
            return Ok((false, format!("{name}: {:?}", r.transitivity_violations)));
        }
        triples += reps.len().pow(3);
    }
    let g = one::builtin("diamond_chain")?;
    let ch = diamond_chain(&g, b)?;
    let reps: Vec<Hypernode> = ch.handles.iter().map(|h| h.representative.clone()).collect();
    let r = partial_order_check_1(&g, &reps, &constant(&g, "x1(0)")?, &O, b)?;
    if !r.pass || !r.transitivity_violations.is_empty() {
        return Ok((false, format!("diamond_chain: {:?}", r.transitivity_violations)));
    }
    triples += reps.len().pow(3);
    // the two axes of the lattice lie at the same distance from the origin
    let g = zero::builtin("grid2d")?;
    let axes = [linear(&g, "grid", &[(1, 0), (0, 0)])?, linear(&g, "grid", &[(0, 0), (1, 0)])?];
    let r = partial_order_check(&g, &axes, &constant(&g, "grid(0,0)")?, &O, b)?;
    let ok = r.incomparable.contains(&(0, 1)) && r.closer[0][1] == Closeness::NotCloser && r.closer[1][0] == Closeness::NotCloser;
    Ok((ok, format!("{triples} triples transitive; axis pair incomparable: {ok}")))
}

type Criterion = (&'static str, u64, fn(&Budgets) -> Outcome);

const CRITERIA: [Criterion; 10] = [
    ("grounded_ladder distances are at most 2", 5, ladder_bound),
    ("one galaxy or a chain of galaxies", 30, dichotomy),
    ("sphere witnesses are geodesic and nonprincipal", 5, koenig),
    ("edits only change distances inside their envelope", 10, edit_locality),
    ("walk distances equal the shortest enumerated walk", 60, walks),
    ("ladder_of_endless_paths bounds and one 1-galaxy", 20, ladder_of_paths),
    ("rank-1 chain with one-third points", 30, one_third),
    ("metric axioms on random triples", 60, metric_axioms),
    ("filter algebra on random index sets", 5, filter_algebra),
    ("closer-than is a strict partial order", 10, partial_order),
];

fn main() {
    let bud = Budgets::default();
    let mut failed = 0;
    for (i, (claim, limit, f)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let res = f(&bud);
        let took = start.elapsed();
        let (pass, detail) = match res {
            Ok((p, d)) => (p, d),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = took < Duration::from_secs(*limit);
        let ok = pass && in_time;
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} {:>2} {claim} ({:.2}s < {limit}s): {detail}", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", CRITERIA.len());
        std::process::exit(1);
    }
}
