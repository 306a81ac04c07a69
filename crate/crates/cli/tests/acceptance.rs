//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use taylor_edges::absorption::{absorbs, bounded_projectivity, is_2_absorbing, is_3_absorbing};
use taylor_edges::algebra::{validate_algebra, ProductView};
use taylor_edges::catalog;
use taylor_edges::csp::*;
use taylor_edges::edges::*;
use taylor_edges::terms::{free_algebra, taylor_report, universal_meet};
use taylor_edges::{Caps, Error, FiniteAlgebra, Subset, Tri};
use taylor_edges_cli::format::{emit_algebras, emit_instance, parse_algebras, parse_document, resolve_instance};
use taylor_edges_cli::{execute, RunConfig};

const LIMIT: u128 = 1_000_000;

/// Outcome of one criterion: pass/fail plus a one-line note.
type Outcome = Result<String, String>;

/// Name, time budget and check.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graph(alg: &FiniteAlgebra) -> EdgeGraph {
    compute_edges(alg, &EdgeConfig::default()).expect("edges")
}

fn seed_closure() -> Vec<FiniteAlgebra> {
    hs_closure(&catalog::seeds(), &Caps::default())
        .expect("closure")
        .members
        .into_iter()
        .map(|m| m.algebra)
        .collect()
}

/// The seed closure together with the closures of Z3 and Z2 x semilattice.
fn wide_catalog() -> Vec<FiniteAlgebra> {
    let mut seeds = catalog::seeds();
    seeds.push(catalog::z3_affine());
    seeds.push(catalog::z2_times_semilattice());
    hs_closure(&seeds, &Caps::default())
        .expect("closure")
        .members
        .into_iter()
        .map(|m| m.algebra)
        .collect()
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n)
        .flat_map(move |a| (0..n).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (1u32..(1 << n)).map(move |m| Subset::from_elems(n, (0..n).filter(|&i| m >> i & 1 == 1)))
}

fn two_element_edges() -> Outcome {
    let z2 = graph(&catalog::z2_minority());
    ensure(
        z2.edges(Flavor::As) == vec![(0, 1), (1, 0)] && z2.edges(Flavor::Sm).is_empty() && z2.is_exact(),
        || format!("Z2: as {:?}, sm {:?}", z2.edges(Flavor::As), z2.edges(Flavor::Sm)),
    )?;
    let maj = graph(&catalog::majority());
    ensure(
        maj.edges(Flavor::Sm) == vec![(0, 1), (1, 0)] && maj.edges(Flavor::As).is_empty() && maj.is_exact(),
        || {
            format!(
                "majority: as {:?}, sm {:?}",
                maj.edges(Flavor::As),
                maj.edges(Flavor::Sm)
            )
        },
    )?;
    let sl = catalog::semilattice();
    let bottom = (0..2)
        .find(|&z| (0..2).all(|x| sl.apply(0, &[x, z]) == z))
        .expect("absorbing element");
    let top = 1 - bottom;
    let g = graph(&sl);
    ensure(
        g.edges(Flavor::S) == vec![(top, bottom)]
            && g.edges(Flavor::As) == vec![(top, bottom)]
            && g.edges(Flavor::Sm) == vec![(top, bottom)]
            && !g.has_asm(bottom, top),
        || {
            format!(
                "semilattice: s {:?}, asm {:?}",
                g.edges(Flavor::S),
                g.edges(Flavor::Asm)
            )
        },
    )?;
    Ok("Z2 as-only, majority sm-only, semilattice single s-edge".into())
}

fn a1_example() -> Outcome {
    let a = catalog::a1();
    let caps = Caps::default();
    let v = validate_algebra(&a);
    ensure(v.is_valid() && v.idempotent, || format!("validation {:?}", v.issues))?;
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                ensure(a.apply(0, &[x, y, z]) == a.apply(0, &[y, z, x]), || {
                    format!("f not cyclic at ({x},{y},{z})")
                })?;
            }
        }
    }
    ensure(taylor_report(&a, &caps).has_taylor == Tri::Yes, || {
        "no Taylor term".into()
    })?;
    let g = graph(&a);
    let s_expected: Vec<(usize, usize)> = vec![(1, 0), (2, 0), (3, 0)];
    let as_only: Vec<(usize, usize)> = all_pairs(4).filter(|&(x, y)| x > 0 && y > 0).collect();
    let mut as_expected: Vec<(usize, usize)> = s_expected.iter().copied().chain(as_only.iter().copied()).collect();
    as_expected.sort();
    ensure(g.is_exact(), || "undecided pairs".into())?;
    ensure(g.edges(Flavor::S) == s_expected, || {
        format!("s-edges {:?}", g.edges(Flavor::S))
    })?;
    ensure(g.edges(Flavor::As) == as_expected, || {
        format!("as-edges {:?}", g.edges(Flavor::As))
    })?;
    ensure(g.edges(Flavor::Sm) == s_expected, || {
        format!("sm-edges {:?}", g.edges(Flavor::Sm))
    })?;
    let asm = component_analysis(&g, Flavor::Asm);
    let s = component_analysis(&g, Flavor::S);
    ensure(asm.is_weakly_connected(), || "asm not weakly connected".into())?;
    ensure(s.x_min == vec![0] && asm.x_min == vec![0], || {
        format!("s-min {:?}, asm-min {:?}", s.x_min, asm.x_min)
    })?;
    ensure(asm.components.contains(&vec![0]), || {
        "{0} is not a strong component".into()
    })?;
    let sources: Vec<&Vec<usize>> = asm.sources.iter().map(|&c| &asm.components[c]).collect();
    ensure(sources == vec![&vec![1, 2, 3]], || format!("sources {sources:?}"))?;
    let zero = Subset::from_elems(4, [0]);
    ensure(is_2_absorbing(&a, &g, &zero, &caps).expect("2-abs").absorbing, || {
        "{0} not 2-absorbing".into()
    })?;
    ensure(is_3_absorbing(&a, &zero, &caps).expect("3-abs").absorbing, || {
        "{0} not 3-absorbing".into()
    })?;
    let p = bounded_projectivity(&a, &zero, &caps).expect("projectivity");
    ensure(p.strongly_projective && p.verified_arity >= 3, || {
        format!("projectivity {p:?}")
    })?;
    Ok("edges, components and absorption of {0} exact".into())
}

fn verifier_and_mutations() -> Outcome {
    let caps = Caps::default();
    ensure(caps.relational_product == 16, || {
        "relational product cap is not 16".into()
    })?;
    let algs = seed_closure();
    let graphs: Vec<EdgeGraph> = algs.iter().map(graph).collect();
    let pairs: Vec<(&FiniteAlgebra, &EdgeGraph)> = algs.iter().zip(&graphs).collect();
    let report = verify_edge_axioms(&pairs, &caps).expect("axioms");
    ensure(report.all_pass(), || format!("axiom failures {:?}", report.failures()))?;
    for (a, g) in &pairs {
        let t = verify_edge_theorems(a, g, &caps).expect("theorems");
        ensure(!t.any_failed(), || format!("{}: {:?}", a.name, t.failures()))?;
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let targets: Vec<usize> = (0..algs.len()).filter(|&i| algs[i].size >= 2).collect();
    let mut detected = 0;
    let mut missed = Vec::new();
    for _ in 0..20 {
        let algebra = targets[rng.gen_range(0..targets.len())];
        let n = algs[algebra].size;
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let flavor = if rng.gen_bool(0.5) { Flavor::As } else { Flavor::Sm };
        let m = EdgeMutation { algebra, flavor, a, b };
        let mut mutated = graphs.clone();
        mutated[algebra] = apply_mutation(&graphs[algebra], &m);
        let pairs: Vec<(&FiniteAlgebra, &EdgeGraph)> = algs.iter().zip(&mutated).collect();
        let r = verify_edge_axioms(&pairs, &caps).expect("axioms");
        let t = verify_edge_theorems(&algs[algebra], &mutated[algebra], &caps).expect("theorems");
        let has_cx = r
            .checks
            .iter()
            .chain(&t.checks)
            .any(|c| matches!(&c.status, CheckStatus::Fail(cx) if !cx.algebras.is_empty()));
        if has_cx {
            detected += 1;
        } else {
            missed.push(format!("{} {:?}", algs[algebra].name, m));
        }
    }
    let elapsed = start.elapsed();
    ensure(missed.is_empty(), || format!("undetected mutations: {missed:?}"))?;
    ensure(elapsed < Duration::from_secs(10), || {
        format!("mutation run took {elapsed:?}")
    })?;
    Ok(format!(
        "{} algebras pass; {detected}/20 mutations detected in {:.2}s",
        algs.len(),
        elapsed.as_secs_f64()
    ))
}

fn absorption_cross_validation() -> Outcome {
    let caps = Caps::default();
    let mut compared = 0;
    let mut ternary_compared = 0;
    for alg in wide_catalog().iter().filter(|a| a.size <= 6) {
        let n = alg.size;
        let g = graph(alg);
        let f2 = free_algebra(alg, 2, caps.closure);
        let f3 = free_algebra(alg, 3, caps.closure);
        ensure(f2.complete && g.is_exact(), || {
            format!("{}: F(2) or edges incomplete", alg.name)
        })?;
        let square = ProductView::power(alg, 2);
        for b in nonempty_subsets(n) {
            let witness = f2.elements.iter().any(|t| absorbs(&t[..n * n], n, 2, &b));
            let closed = g.is_closed(Flavor::Asm, &b);
            ensure(witness == closed, || {
                format!("{} {b}: F(2) {witness}, asm-closed {closed}", alg.name)
            })?;
            let decided = is_2_absorbing(alg, &g, &b, &caps).expect("2-abs").absorbing;
            ensure(decided == witness, || {
                format!("{} {b}: library 2-absorption {decided}", alg.name)
            })?;
            compared += 1;
            let cross: Vec<Vec<usize>> = (0..n)
                .flat_map(|x| (0..n).map(move |y| vec![x, y]))
                .filter(|p| b.contains(p[0]) || b.contains(p[1]))
                .collect();
            let structural = square.is_closed(&cross);
            let decided3 = is_3_absorbing(alg, &b, &caps).expect("3-abs").absorbing;
            ensure(decided3 == structural, || {
                format!("{} {b}: library 3-absorption {decided3}", alg.name)
            })?;
            if f3.complete {
                let term = f3.elements.iter().any(|t| absorbs(&t[..n * n * n], n, 3, &b));
                ensure(term == structural, || {
                    format!("{} {b}: structural {structural}, ternary witness {term}", alg.name)
                })?;
                ternary_compared += 1;
            }
        }
    }
    Ok(format!(
        "{compared} subsets binary, {ternary_compared} ternary, zero disagreements"
    ))
}

fn universal_meet_identities() -> Outcome {
    let caps = Caps::default();
    let algs = wide_catalog();
    for alg in &algs {
        let n = alg.size;
        let f = universal_meet(alg, &caps).map_err(|e| format!("{}: {e}", alg.name))?;
        let f = |x: usize, y: usize| f.apply(0, x, y);
        for x in 0..n {
            for y in 0..n {
                ensure(f(x, f(x, y)) == f(x, y), || {
                    format!("{}: f(x,f(x,y)) at ({x},{y})", alg.name)
                })?;
                ensure(f(f(x, y), x) == f(x, y), || {
                    format!("{}: f(f(x,y),x) at ({x},{y})", alg.name)
                })?;
            }
        }
        for (a, b) in graph(alg).edges(Flavor::S) {
            ensure(f(a, b) == b && f(b, a) == b, || {
                format!("{}: s-edge {a}->{b}", alg.name)
            })?;
        }
    }
    Ok(format!("{} algebras", algs.len()))
}

fn smin_connected_and_shifts() -> Outcome {
    let caps = Caps::default();
    let algs = wide_catalog();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut samples = 0;
    for alg in &algs {
        let g = graph(alg);
        let smin = component_analysis(&g, Flavor::S).x_min;
        let reach = g.asm().reflexive_transitive_closure();
        for &x in &smin {
            for &y in &smin {
                ensure(reach.get(x, y), || format!("{}: {x} does not asm-reach {y}", alg.name))?;
            }
        }
        let r = sample_shift_chains(alg, &g, &mut rng, 100, &caps).map_err(|e| e.to_string())?;
        ensure(r.failures.is_empty(), || format!("{}: {:?}", alg.name, r.failures[0]))?;
        samples += r.samples;
    }
    Ok(format!("{} algebras, {samples} shifted chains", algs.len()))
}

fn signature_groups() -> Vec<Vec<FiniteAlgebra>> {
    let mut groups: BTreeMap<Vec<(String, usize)>, Vec<FiniteAlgebra>> = BTreeMap::new();
    for a in seed_closure() {
        groups.entry(a.signature()).or_default().push(a);
    }
    groups.into_values().collect()
}

fn random_instances(count: u64) -> Vec<Instance> {
    let groups = signature_groups();
    let caps = Caps::default();
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let group = &groups[(seed as usize) % groups.len()];
            random_instance(&mut rng, &format!("r{seed}"), group, &RandomShape::default(), &caps).expect("instance")
        })
        .collect()
}

fn csp_engine() -> Outcome {
    let caps = Caps::default();
    let mut retractions = 0;
    let mut unsat = 0;
    for inst in random_instances(200) {
        let before = brute_force_solve(&inst, LIMIT).map_err(|e| e.to_string())?;
        match kl_minimize(&inst, 2, 3).map_err(|e| e.to_string())? {
            Minimized::Refined(r) => {
                let after = brute_force_solve(&r, LIMIT).map_err(|e| e.to_string())?;
                ensure(after == before, || {
                    format!("{}: minimization changed the solutions", inst.name)
                })?;
            }
            Minimized::Unsat { .. } => {
                ensure(before.is_empty(), || {
                    format!("{}: minimization refuted a solvable instance", inst.name)
                })?;
            }
        }
        let solvable = !before.is_empty();
        unsat += usize::from(!solvable);
        let mut sets = vec![ConsistentMapSet::identity(&inst)];
        if let Some(s) = before.first() {
            sets.extend(solution_retractions(&inst, s, &caps).map_err(|e| e.to_string())?);
        }
        for p in &sets {
            ensure(p.is_retractive(), || {
                format!("{}: map set is not retractive", inst.name)
            })?;
            let q = consistent_maps(&inst, p, true, &caps)
                .map_err(|e| e.to_string())?
                .retraction
                .expect("apply");
            let q_solvable = is_solvable(&q.instance, LIMIT).map_err(|e| e.to_string())?;
            ensure(q_solvable == solvable, || {
                format!("{}: solvability changed under p", inst.name)
            })?;
            retractions += 1;
        }
    }
    Ok(format!(
        "200 instances ({unsat} unsatisfiable), {retractions} retractions"
    ))
}

/// Catalog algebras that are subdirectly irreducible with a large
/// centralizer and carry an s-edge.
fn qualifying_domains() -> Vec<String> {
    let caps = Caps::default();
    let mut out = Vec::new();
    for alg in wide_catalog() {
        let inst = Instance::new(&alg.name, vec![alg.clone()], vec![Variable::new("x", 0)], vec![]).expect("instance");
        let a = &large_centralizer_analysis(&inst, &caps).expect("analysis")[0];
        if a.is_large_centralizer && !graph(&alg).edges(Flavor::S).is_empty() {
            out.push(alg.name.clone());
        }
    }
    out
}

fn largecentred() -> Outcome {
    let caps = Caps::default();
    let mut applied = 0;
    let mut unmet = 0;
    let mut shrink_checked = 0;
    let mut final_checked = 0;
    for inst in random_instances(120) {
        let analysis = large_centralizer_analysis(&inst, &caps).map_err(|e| e.to_string())?;
        let q = large_centralizer_quotient(&inst, &analysis).map_err(|e| e.to_string())?;
        let sols = solutions_through_points(&q, LIMIT).map_err(|e| e.to_string())?;
        let r = match largecentred_retraction(&inst, &sols, &BTreeMap::new(), &caps) {
            Ok(r) => r,
            Err(Error::HypothesisUnmet(_)) => {
                unmet += 1;
                continue;
            }
            Err(e) => return Err(format!("{}: {e}", inst.name)),
        };
        applied += 1;
        ensure(r.maps.is_retractive(), || format!("{}: not retractive", inst.name))?;
        for c in &inst.constraints {
            for t in &c.tuples {
                let img: Vec<usize> = c.scope.iter().zip(t).map(|(&v, &x)| r.maps.maps[v][x]).collect();
                ensure(c.tuples.contains(&img), || {
                    format!("{}: {t:?} maps to {img:?}", inst.name)
                })?;
            }
        }
        if !r.vacuous {
            shrink_checked += r.shrunk.len();
            ensure(r.all_shrunk(), || {
                format!("{}: a large centralizer domain did not shrink", inst.name)
            })?;
            for c in &r.choices {
                let alg = &inst.algebras[inst.variables[c.variable].domain];
                let g = graph(alg);
                let absorbing = nonempty_subsets(alg.size)
                    .filter(|b| !b.is_full())
                    .find(|b| is_2_absorbing(alg, &g, b, &caps).map(|d| d.absorbing).unwrap_or(false));
                let Some(b) = absorbing else { continue };
                let targets = BTreeMap::from([(c.variable, b.clone())]);
                let t = largecentred_retraction(&inst, &sols, &targets, &caps).map_err(|e| e.to_string())?;
                let image = t.maps.image(c.variable);
                ensure(image.iter().all(|&x| b.contains(x)), || {
                    format!("{}: image {image:?} of {} is not inside {b}", inst.name, c.variable)
                })?;
                final_checked += 1;
            }
        }
    }
    let qualifying = qualifying_domains();
    let shrink = if shrink_checked > 0 {
        format!("strict shrink verified on {shrink_checked} domains")
    } else {
        "strict shrink: not exercised".into()
    };
    let final_clause = if final_checked > 0 {
        format!("final clause verified on {final_checked} domains")
    } else {
        "final clause: not exercised".into()
    };
    Ok(format!(
        "{applied} retractions retractive and consistent ({unmet} hypothesis unmet); \
         qualifying catalog domains: {}; {shrink}; {final_clause}",
        qualifying.len()
    ))
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn files(dir: &str, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(data_dir().join(dir))
        .expect("data directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    v.sort();
    v
}

fn round_trip_and_determinism() -> Outcome {
    let alg_files = files("algebras", "alg");
    ensure(alg_files.len() >= 4, || "catalog files missing".into())?;
    for p in &alg_files {
        let text = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
        let algs = parse_algebras(&text).map_err(|e| format!("{}: {e}", p.display()))?;
        ensure(emit_algebras(&algs) == text, || {
            format!("{}: emit(parse) differs", p.display())
        })?;
        let again = parse_algebras(&emit_algebras(&algs)).map_err(|e| e.to_string())?;
        ensure(again == algs, || format!("{}: parse(emit) differs", p.display()))?;
    }
    let seeds_text = emit_algebras(&catalog::seeds());
    ensure(
        parse_algebras(&seeds_text).map_err(|e| e.to_string())? == catalog::seeds(),
        || "built-in seeds do not round-trip".into(),
    )?;
    let inst_files = files("instances", "csp");
    for p in &inst_files {
        let text = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
        let doc = parse_document(&text).map_err(|e| e.to_string())?;
        let inst = resolve_instance(&doc.instances[0], &doc.algebras, catalog::by_name).map_err(|e| e.to_string())?;
        let emitted = emit_instance(&inst);
        let doc2 = parse_document(&emitted).map_err(|e| e.to_string())?;
        let inst2 = resolve_instance(&doc2.instances[0], &doc.algebras, catalog::by_name).map_err(|e| e.to_string())?;
        ensure(inst2 == inst && emit_instance(&inst2) == emitted, || {
            format!("{}: instance does not round-trip", p.display())
        })?;
    }
    let a1 = data_dir().join("algebras/A1.alg").display().to_string();
    let csp = data_dir().join("instances/a1-path.csp").display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["analyze".into(), a1.clone()],
        vec!["analyze".into(), a1.clone(), "--format".into(), "json".into()],
        vec!["edges".into(), a1.clone(), "--dot".into()],
        vec![
            "verify".into(),
            "semilattice".into(),
            "z2".into(),
            "majority".into(),
            a1.clone(),
            "--seed".into(),
            "9".into(),
        ],
        vec![
            "csp".into(),
            "minimize".into(),
            csp.clone(),
            "--format".into(),
            "json".into(),
        ],
        vec!["csp".into(), "solve".into(), csp],
        vec!["catalog".into()],
    ];
    let bin = env!("CARGO_BIN_EXE_taylor-edges");
    for args in &runs {
        let mut argv = vec!["taylor-edges".to_string()];
        argv.extend(args.iter().cloned());
        let config = RunConfig::from_args(&argv, None).map_err(|u| u.message)?;
        let first = execute(&config);
        let second = execute(&config);
        ensure(first == second, || format!("{args:?}: library runs differ"))?;
        let out1 = Process::new(bin)
            .args(args)
            .env_remove("TAYLOR_EDGES_CAPS")
            .output()
            .map_err(|e| e.to_string())?;
        let out2 = Process::new(bin)
            .args(args)
            .env_remove("TAYLOR_EDGES_CAPS")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out1.stdout == out2.stdout && out1.status == out2.status, || {
            format!("{args:?}: binary runs differ")
        })?;
        ensure(out1.stdout == first.output.as_bytes(), || {
            format!("{args:?}: binary and library differ")
        })?;
        ensure(out1.status.code() == Some(i32::from(first.status.code())), || {
            format!("{args:?}: exit code {:?}", out1.status.code())
        })?;
    }
    let distinct: BTreeSet<&Vec<String>> = runs.iter().collect();
    Ok(format!(
        "{} algebra files, {} instance files, {} commands byte-identical",
        alg_files.len(),
        inst_files.len(),
        distinct.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("two-element edges", Duration::from_secs(1), two_element_edges),
        ("A1 example", Duration::from_secs(5), a1_example),
        (
            "edge axiom verifier and mutations",
            Duration::from_secs(60),
            verifier_and_mutations,
        ),
        (
            "absorption cross-validation",
            Duration::from_secs(60),
            absorption_cross_validation,
        ),
        (
            "universal meet identities",
            Duration::from_secs(10),
            universal_meet_identities,
        ),
        (
            "s-min connectivity and shifted chains",
            Duration::from_secs(30),
            smin_connected_and_shifts,
        ),
        ("CSP minimization and retractions", Duration::from_secs(120), csp_engine),
        ("large centralizer retraction", Duration::from_secs(30), largecentred),
        (
            "round-trip and determinism",
            Duration::from_secs(60),
            round_trip_and_determinism,
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > *budget => Err(format!("took {elapsed:?}, budget {budget:?}")),
            o => o,
        };
        match outcome {
            Ok(note) => println!(
                "criterion {}: PASS  {name} [{:.2}s] {note}",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name} [{:.2}s] {why}",
                    i + 1,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
