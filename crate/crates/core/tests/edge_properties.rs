use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taylor_edges::absorption::{absorption_report, is_3_absorbing};
use taylor_edges::algebra::{for_each_tuple, is_tolerance, sg_closure, sg_of, subalgebra, BinaryRelation};
use taylor_edges::catalog;
use taylor_edges::csp::hs_closure;
use taylor_edges::edges::*;
use taylor_edges::terms::universal_meet;
use taylor_edges::{Caps, FiniteAlgebra, Subset};

fn catalog_members() -> Vec<FiniteAlgebra> {
    hs_closure(&catalog::seeds(), &Caps::default())
        .unwrap()
        .members
        .into_iter()
        .map(|m| m.algebra)
        .collect()
}

fn graph(alg: &FiniteAlgebra) -> EdgeGraph {
    compute_edges(alg, &EdgeConfig::default()).unwrap()
}

/// Term operations of arity k, by naive closure of the projections.
fn clone_oracle(alg: &FiniteAlgebra, k: usize) -> BTreeSet<Vec<usize>> {
    let n = alg.size;
    let mut points = Vec::new();
    for_each_tuple(n, k, |t| points.push(t.to_vec()));
    let mut set: BTreeSet<Vec<usize>> = (0..k).map(|i| points.iter().map(|p| p[i]).collect()).collect();
    loop {
        let current: Vec<Vec<usize>> = set.iter().cloned().collect();
        let before = set.len();
        for (op, o) in alg.ops.iter().enumerate() {
            let mut picks = Vec::new();
            for_each_tuple(current.len(), o.arity, |c| picks.push(c.to_vec()));
            for pick in picks {
                let t: Vec<usize> = (0..points.len())
                    .map(|p| {
                        let args: Vec<usize> = pick.iter().map(|&i| current[i][p]).collect();
                        alg.apply(op, &args)
                    })
                    .collect();
                set.insert(t);
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

fn absorbs_oracle(t: &[usize], n: usize, k: usize, b: &Subset) -> bool {
    let mut ok = true;
    let mut idx = 0;
    for_each_tuple(n, k, |args| {
        let outside = args.iter().filter(|&&x| !b.contains(x)).count();
        if outside <= 1 && !b.contains(t[idx]) {
            ok = false;
        }
        idx += 1;
    });
    ok
}

#[test]
fn edges_are_local_to_generated_subalgebras() {
    for alg in catalog_members() {
        let g = graph(&alg);
        for a in 0..alg.size {
            for b in 0..alg.size {
                if a == b {
                    continue;
                }
                let sg = sg_of(&alg, &[a, b]);
                let sub = subalgebra(&alg, &sg).unwrap();
                let h = graph(&sub);
                let pos = |x: usize| sg.iter().position(|y| y == x).unwrap();
                assert_eq!(g.has_as(a, b), h.has_as(pos(a), pos(b)), "{} {a} {b}", alg.name);
                assert_eq!(g.has_sm(a, b), h.has_sm(pos(a), pos(b)), "{} {a} {b}", alg.name);
            }
        }
    }
}

#[test]
fn absorption_matches_naive_clone() {
    let caps = Caps::default();
    for alg in catalog_members() {
        let n = alg.size;
        let g = graph(&alg);
        let report = absorption_report(&alg, &g, &caps).unwrap();
        let bin = clone_oracle(&alg, 2);
        let ter = clone_oracle(&alg, 3);
        for mask in 1u32..(1 << n) {
            let b = Subset::from_elems(n, (0..n).filter(|&i| mask >> i & 1 == 1));
            let class = report.class(&b.to_vec()).unwrap();
            assert_eq!(
                class.binary,
                bin.iter().any(|t| absorbs_oracle(t, n, 2, &b)),
                "{} {b}",
                alg.name
            );
            assert_eq!(
                class.ternary,
                ter.iter().any(|t| absorbs_oracle(t, n, 3, &b)),
                "{} {b}",
                alg.name
            );
            assert_eq!(class.ternary, is_3_absorbing(&alg, &b, &caps).unwrap().absorbing);
            assert_eq!(class.binary, g.is_closed(Flavor::Asm, &b), "{} {b}", alg.name);
        }
    }
}

#[test]
fn universal_meet_identities() {
    let caps = Caps::default();
    for alg in catalog_members() {
        let f = universal_meet(&alg, &caps).unwrap();
        let g = graph(&alg);
        let n = alg.size;
        for x in 0..n {
            for y in 0..n {
                let fxy = f.apply(0, x, y);
                assert_eq!(f.apply(0, x, fxy), fxy);
                assert_eq!(f.apply(0, fxy, x), fxy);
                assert!(fxy == x || g.has_s(x, fxy), "{}: f({x},{y}) = {fxy}", alg.name);
            }
        }
        for (a, b) in g.edges(Flavor::S) {
            assert_eq!((f.apply(0, a, b), f.apply(0, b, a)), (b, b));
        }
    }
}

#[test]
fn components_respect_edges() {
    for alg in catalog_members() {
        let g = graph(&alg);
        for flavor in Flavor::ALL {
            let d = component_analysis(&g, flavor);
            let rank: Vec<usize> = {
                let mut r = vec![0; d.components.len()];
                for (i, &c) in d.order.iter().enumerate() {
                    r[c] = i;
                }
                r
            };
            for (a, b) in g.edges(flavor) {
                let (ca, cb) = (d.component_of[a], d.component_of[b]);
                assert!(ca == cb || rank[ca] < rank[cb]);
            }
            let reach = g.adjacency(flavor).reflexive_transitive_closure();
            for c in &d.components {
                for &x in c {
                    for &y in c {
                        assert!(reach.get(x, y));
                    }
                }
            }
        }
    }
}

#[test]
fn hs_catalog_satisfies_axioms_and_theorems() {
    let caps = Caps::default();
    let algs = catalog_members();
    let graphs: Vec<EdgeGraph> = algs.iter().map(graph).collect();
    let pairs: Vec<(&FiniteAlgebra, &EdgeGraph)> = algs.iter().zip(&graphs).collect();
    let report = verify_edge_axioms(&pairs, &caps).unwrap();
    assert!(report.all_pass(), "{:#?}", report.failures());
    for (a, g) in &pairs {
        let t = verify_edge_theorems(a, g, &caps).unwrap();
        assert!(!t.any_failed(), "{}: {:#?}", a.name, t.failures());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifted_chains_stay_in_the_tolerance(seed in any::<u64>()) {
        let caps = Caps::default();
        let algs = catalog_members();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = &algs[rng.gen_range(0..algs.len())];
        let n = alg.size;
        let g = graph(alg);
        let f = universal_meet(alg, &caps).unwrap().operation();
        let gens: Vec<Vec<usize>> = (0..rng.gen_range(0..3)).map(|_| vec![rng.gen_range(0..n), rng.gen_range(0..n)]).collect();
        let mut seeds: Vec<Vec<usize>> = (0..n).map(|x| vec![x, x]).collect();
        for p in &gens {
            seeds.push(p.clone());
            seeds.push(vec![p[1], p[0]]);
        }
        let closed = taylor_edges::algebra::ProductView::power(alg, 2).sg(seeds, caps.closure);
        let s = BinaryRelation::from_pairs(n, n, closed.elems.iter().map(|p| (p[0], p[1])));
        prop_assert!(is_tolerance(alg, &s).unwrap());
        let len = rng.gen_range(1..4);
        let mut chain = vec![rng.gen_range(0..n)];
        while chain.len() < len {
            let last = *chain.last().unwrap();
            let nb: Vec<usize> = (0..n).filter(|&y| s.contains(last, y)).collect();
            chain.push(nb[rng.gen_range(0..nb.len())]);
        }
        let i = rng.gen_range(0..chain.len());
        let mut path = vec![chain[i]];
        for _ in 0..rng.gen_range(0..3) {
            let last = *path.last().unwrap();
            let nb: Vec<usize> = (0..n).filter(|&y| g.has_s(last, y)).collect();
            if nb.is_empty() { break; }
            path.push(nb[rng.gen_range(0..nb.len())]);
        }
        let out = shift_tolerance_chain(alg, &g, &s, &chain, i, &path, &f).unwrap();
        prop_assert!(out.reachable && out.in_tolerance, "{} {:?} {:?}", alg.name, chain, path);
        prop_assert_eq!(out.chain[i], *path.last().unwrap());
    }

    #[test]
    fn generated_subuniverses_are_closed(seed in any::<u64>()) {
        let algs = catalog_members();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = &algs[rng.gen_range(0..algs.len())];
        let gens: Vec<usize> = (0..rng.gen_range(1..=alg.size)).map(|_| rng.gen_range(0..alg.size)).collect();
        let s = sg_of(alg, &gens);
        prop_assert_eq!(sg_closure(alg, &s), s.clone());
        prop_assert!(gens.iter().all(|&x| s.contains(x)));
    }
}
