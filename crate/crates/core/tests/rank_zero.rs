//! Rank-0 distances and the index-set algebra, as properties.

use galaxies_core::expr::Affine;
use galaxies_core::filters::{FilterVerdict, IndexSet, UltrafilterOracle};
use galaxies_core::graphzero::builtins::{builtin, NAMES};
use galaxies_core::seq::{DefSeq, NodeTerm};
use galaxies_core::ultrapower::{hyperdistance, Hypernode};
use galaxies_core::{Metric, NodeRef};
use proptest::prelude::*;

fn index_set() -> impl Strategy<Value = IndexSet> {
    (prop::collection::vec(any::<bool>(), 0..8), prop::collection::vec(any::<bool>(), 1..7))
        .prop_map(|(pre, per)| IndexSet::new(pre, per).unwrap())
}

/// Sets whose period divides 12, all decided by the residue chain below.
fn divisible_set() -> impl Strategy<Value = IndexSet> {
    (prop::collection::vec(any::<bool>(), 0..8), prop::sample::select(vec![1usize, 2, 3, 4, 6, 12]))
        .prop_flat_map(|(pre, p)| prop::collection::vec(any::<bool>(), p).prop_map(move |per| IndexSet::new(pre.clone(), per).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn set_operations_act_pointwise(a in index_set(), b in index_set()) {
        let (u, i, c) = (a.union(&b), a.intersect(&b), a.complement());
        for n in 0..120 {
            prop_assert_eq!(u.contains(n), a.contains(n) || b.contains(n));
            prop_assert_eq!(i.contains(n), a.contains(n) && b.contains(n));
            prop_assert_eq!(c.contains(n), !a.contains(n));
        }
        prop_assert!(i.is_subset(&a) && a.is_subset(&u));
        prop_assert!(c.complement().same_set(&a));
    }

    #[test]
    fn residue_oracle_is_an_ultrafilter_on_periodic_sets(a in divisible_set(), b in divisible_set()) {
        let o = UltrafilterOracle::residue_chain(vec![(3, 1), (12, 7)]).unwrap();
        let (va, vb) = (o.verdict(&a).unwrap(), o.verdict(&b).unwrap());
        prop_assert!(va.is_determined());
        prop_assert_eq!(o.verdict(&a.complement()).unwrap(), va.negate());
        let both = o.verdict(&a.intersect(&b)).unwrap();
        prop_assert_eq!(both.is_in(), va.is_in() && vb.is_in());
        // the chain commits to n ≡ 7 (mod 12): membership far out decides
        prop_assert_eq!(va == FilterVerdict::InFilter, a.contains(12 * 40 + 7));
    }

    #[test]
    fn closed_forms_agree_with_search(name in prop::sample::select(NAMES.to_vec()), seed in any::<u64>()) {
        let g = builtin(name).unwrap();
        let nodes = g.sample_nodes(40);
        let a = &nodes[(seed % nodes.len() as u64) as usize];
        let b = &nodes[((seed >> 8) % nodes.len() as u64) as usize];
        prop_assert_eq!(g.dist(a, b, 64).unwrap(), g.dist_search(a, b, 64).unwrap(), "{} {} {}", name, a, b);
    }

    #[test]
    fn hyperdistance_matches_pointwise_distances(s in 0i64..4, c in 0i64..9, t in 0i64..4, e in 0i64..9) {
        let g = builtin("one_ended_path").unwrap();
        let o = UltrafilterOracle::Frechet;
        let seq = |s, c| DefSeq::affine(NodeTerm::new("x", vec![Affine::new(s, c)]));
        let (p, q) = (Hypernode::new(&g, seq(s, c), &o).unwrap(), Hypernode::new(&g, seq(t, e), &o).unwrap());
        let d = hyperdistance(&g, &p, &q, 64).unwrap();
        for n in 0..80 {
            let want = g.dist(&p.at(n).unwrap(), &q.at(n).unwrap(), 64).unwrap();
            prop_assert_eq!(d.at(n).unwrap(), want);
        }
    }
}

#[test]
fn grid_distance_is_the_l1_norm() {
    let g = builtin("grid2d").unwrap();
    for (i, j) in [(0, 0), (3, -4), (-7, 2), (12, 12)] {
        let v = NodeRef::new("grid", vec![i, j]);
        assert_eq!(g.distance(&"grid(0,0)".parse().unwrap(), &v, 64).unwrap(), (i.abs() + j.abs()) as u64);
    }
}
