use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use taylor_edges::catalog;
use taylor_edges::csp::*;
use taylor_edges::{Caps, FiniteAlgebra, Partition};

const LIMIT: u128 = 1_000_000;

fn template_groups() -> Vec<Vec<FiniteAlgebra>> {
    let t = hs_closure(&catalog::seeds(), &Caps::default()).unwrap();
    let mut groups: BTreeMap<Vec<(String, usize)>, Vec<FiniteAlgebra>> = BTreeMap::new();
    for m in t.members {
        groups.entry(m.algebra.signature()).or_default().push(m.algebra);
    }
    groups.into_values().collect()
}

fn instance(seed: u64) -> Instance {
    let groups = template_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = &groups[(seed as usize) % groups.len()];
    random_instance(
        &mut rng,
        &format!("r{seed}"),
        group,
        &RandomShape::default(),
        &Caps::default(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimization_preserves_solutions(seed in any::<u64>()) {
        let inst = instance(seed);
        let before = brute_force_solve(&inst, LIMIT).unwrap();
        match kl_minimize(&inst, 2, 3).unwrap() {
            Minimized::Refined(r) => {
                prop_assert!(is_kl_minimal(&r, 2, 3));
                prop_assert_eq!(brute_force_solve(&r, LIMIT).unwrap(), before);
            }
            Minimized::Unsat { .. } => prop_assert!(before.is_empty()),
        }
    }

    #[test]
    fn retraction_preserves_solvability(seed in any::<u64>()) {
        let inst = instance(seed);
        let caps = Caps::default();
        let solvable = is_solvable(&inst, LIMIT).unwrap();
        let mut sets = vec![ConsistentMapSet::identity(&inst)];
        if let Some(s) = first_solution(&inst, LIMIT).unwrap() {
            sets.extend(solution_retractions(&inst, &s, &caps).unwrap());
        }
        for p in &sets {
            let report = consistent_maps(&inst, p, true, &caps).unwrap();
            let q = report.retraction.unwrap();
            prop_assert_eq!(is_solvable(&q.instance, LIMIT).unwrap(), solvable);
            for s in brute_force_solve(&q.instance, LIMIT).unwrap() {
                prop_assert!(inst.satisfies(&q.lift(&s)));
            }
        }
    }

    #[test]
    fn quotient_contains_images_of_solutions(seed in any::<u64>()) {
        let inst = instance(seed);
        let caps = Caps::default();
        let analysis = large_centralizer_analysis(&inst, &caps).unwrap();
        let congs: Vec<Option<Partition>> = analysis.iter().map(|a| a.monolith.clone()).collect();
        let q = quotient_instance(&inst, &congs).unwrap();
        let qs: BTreeSet<Vec<usize>> = brute_force_solve(&q, LIMIT).unwrap().into_iter().collect();
        for s in brute_force_solve(&inst, LIMIT).unwrap() {
            let img: Vec<usize> = s
                .iter()
                .enumerate()
                .map(|(v, &x)| congs[v].as_ref().map_or(x, |t| t.block_of(x)))
                .collect();
            prop_assert!(qs.contains(&img));
        }
        let discrete: Vec<Option<Partition>> = (0..inst.len()).map(|v| Some(Partition::discrete(inst.domain_size(v)))).collect();
        let same = quotient_instance(&inst, &discrete).unwrap();
        prop_assert_eq!(same.constraints, inst.constraints);
    }

    #[test]
    fn largecentred_maps_are_retractive_and_consistent(seed in any::<u64>()) {
        let inst = instance(seed);
        let caps = Caps::default();
        let analysis = large_centralizer_analysis(&inst, &caps).unwrap();
        let q = large_centralizer_quotient(&inst, &analysis).unwrap();
        let sols = solutions_through_points(&q, LIMIT).unwrap();
        match largecentred_retraction(&inst, &sols, &BTreeMap::new(), &caps) {
            Ok(r) => {
                prop_assert!(r.maps.is_retractive());
                prop_assert!(consistent_maps(&inst, &r.maps, false, &caps).is_ok());
                prop_assert_eq!(
                    is_solvable(&r.retraction.instance, LIMIT).unwrap(),
                    is_solvable(&inst, LIMIT).unwrap()
                );
            }
            Err(taylor_edges::Error::HypothesisUnmet(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn si_decomposition_is_faithful(seed in any::<u64>()) {
        let inst = instance(seed);
        let d = si_decompose(&inst, &Caps::default()).unwrap();
        let before = brute_force_solve(&inst, LIMIT).unwrap();
        let after = brute_force_solve(&d.instance, LIMIT).unwrap();
        prop_assert_eq!(before.iter().map(|s| d.project(s)).collect::<Vec<_>>(), after);
    }
}

#[test]
fn elimination_witnesses_replay() {
    let caps = Caps::default();
    let t = hs_closure(
        &[
            catalog::a1(),
            catalog::semilattice(),
            catalog::z2_minority(),
            catalog::majority(),
            catalog::z2_times_semilattice(),
        ],
        &caps,
    )
    .unwrap();
    for m in &t.members {
        if let Some(w) = maroti_witness(&m.algebra, &caps).unwrap() {
            assert!(w.replay(&m.algebra), "{}", m.algebra.name);
        }
    }
}

#[test]
fn a1_collapse_example() {
    let a1 = catalog::a1();
    let caps = Caps::default();
    let f = taylor_edges::terms::universal_meet(&a1, &caps).unwrap();
    let p: Vec<usize> = (0..4).map(|x| f.apply(0, x, 0)).collect();
    assert_eq!(p, vec![0; 4]);
    let inst = Instance::new(
        "a1",
        vec![a1],
        vec![Variable::new("x", 0), Variable::new("y", 0)],
        vec![Constraint::new(
            vec![0, 1],
            [vec![0, 0], vec![1, 2], vec![2, 1], vec![0, 3]],
        )],
    )
    .unwrap();
    let maps = ConsistentMapSet {
        maps: vec![p.clone(), p],
    };
    let r = consistent_maps(&inst, &maps, true, &caps).unwrap();
    assert_eq!(r.shrunk, vec![0, 1]);
    assert!(r.retraction.unwrap().instance.algebras.iter().all(|a| a.size == 1));
}
