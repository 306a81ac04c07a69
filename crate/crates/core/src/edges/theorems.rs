use super::axioms::{AxiomReport, CheckResult, CheckStatus, Counterexample};
use super::components::component_analysis;
use super::graph::{EdgeGraph, Flavor};
use crate::absorption::binary_absorption_witness;
use crate::algebra::{sg_of, FiniteAlgebra};
use crate::bitset::{BitMatrix, Subset};
use crate::caps::Caps;
use crate::error::Result;
use crate::terms::{free_algebra, TermOperation};

pub const THEOREM_NAMES: [&str; 7] = [
    "weakconnect",
    "sminconnected",
    "singleasmcomp",
    "noedge",
    "existsaterm",
    "2abscharacterization",
    "xmin-closed",
];

fn counterexample(alg: &FiniteAlgebra, elements: Vec<usize>, detail: String) -> Counterexample {
    Counterexample {
        algebras: vec![alg.name.clone()],
        elements,
        relation_generators: Vec::new(),
        detail,
    }
}

fn single(name: &str, ok: bool, cx: impl FnOnce() -> Counterexample) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail(cx()) },
        checked: 1,
        violations: usize::from(!ok),
    }
}

fn skipped(name: &str, reason: &str) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: CheckStatus::Skipped { reason: reason.into() },
        checked: 0,
        violations: 0,
    }
}

/// Structural consequences of the Edge Axioms, checked on one algebra.
pub fn verify_edge_theorems(alg: &FiniteAlgebra, edges: &EdgeGraph, caps: &Caps) -> Result<AxiomReport> {
    if !edges.is_exact() {
        let reason = format!("{} undecided edge pairs", edges.unknown.len());
        return Ok(AxiomReport {
            checks: THEOREM_NAMES.iter().map(|n| skipped(n, &reason)).collect(),
            notes: vec![reason],
        });
    }
    let n = alg.size;
    let asm = component_analysis(edges, Flavor::Asm);
    let s = component_analysis(edges, Flavor::S);
    let reach = edges.asm().reflexive_transitive_closure();
    let mut checks = Vec::new();

    checks.push(single("weakconnect", asm.is_weakly_connected(), || {
        counterexample(
            alg,
            asm.weak_components.iter().map(|c| c[0]).collect(),
            format!("asm graph has weak components {:?}", asm.weak_components),
        )
    }));

    let mut smin = CheckResult {
        name: "sminconnected".into(),
        status: CheckStatus::Pass,
        checked: 0,
        violations: 0,
    };
    for &a in &s.x_min {
        for &b in &s.x_min {
            smin.checked += 1;
            if !reach.get(a, b) {
                smin.violations += 1;
                if smin.status == CheckStatus::Pass {
                    smin.status = CheckStatus::Fail(counterexample(
                        alg,
                        vec![a, b],
                        format!("{a} and {b} lie in s-min but {b} is not asm-reachable from {a}"),
                    ));
                }
            }
        }
    }
    checks.push(smin);

    let asm_min = Subset::from_elems(n, asm.x_min.iter().copied());
    let s_min = Subset::from_elems(n, s.x_min.iter().copied());
    checks.push(single(
        "singleasmcomp",
        asm.sinks.len() == 1 && s_min.is_subset(&asm_min),
        || {
            counterexample(
                alg,
                asm.x_min.clone(),
                format!(
                    "asm-min {:?} has {} components; s-min is {:?}",
                    asm.x_min,
                    asm.sinks.len(),
                    s.x_min
                ),
            )
        },
    ));

    let s_edges = edges.edges(Flavor::S);
    let bad = s_edges.iter().find(|&&(a, b)| edges.has_asm(b, a));
    checks.push(CheckResult {
        name: "noedge".into(),
        status: match bad {
            None => CheckStatus::Pass,
            Some(&(a, b)) => CheckStatus::Fail(counterexample(
                alg,
                vec![a, b],
                format!("{a} -> {b} is an s-edge and {b} -> {a} is an asm-edge"),
            )),
        },
        checked: s_edges.len(),
        violations: usize::from(bad.is_some()),
    });

    checks.push(exists_a_term(alg, edges, caps));
    checks.push(absorption_characterization(alg, edges, caps));

    let mut closed = CheckResult {
        name: "xmin-closed".into(),
        status: CheckStatus::Pass,
        checked: 0,
        violations: 0,
    };
    for flavor in Flavor::ALL {
        let d = component_analysis(edges, flavor);
        let xmin = Subset::from_elems(n, d.x_min.iter().copied());
        let reach = edges.adjacency(flavor).reflexive_transitive_closure();
        closed.checked += 1;
        let escapes = !edges.is_closed(flavor, &xmin);
        let stranded = (0..n).find(|&a| !reach.row(a).intersects(&xmin));
        if escapes || stranded.is_some() {
            closed.violations += 1;
            if closed.status == CheckStatus::Pass {
                closed.status = CheckStatus::Fail(counterexample(
                    alg,
                    d.x_min.clone(),
                    format!(
                        "{}-min {:?} is not closed or not reachable from {:?}",
                        flavor.name(),
                        d.x_min,
                        stranded
                    ),
                ));
            }
        }
    }
    checks.push(closed);

    Ok(AxiomReport {
        checks,
        notes: Vec::new(),
    })
}

/// For every asm-edge a -> b, a term with essential first and last variables
/// sending (a, c2, ..., b) to b, searched at arities up to the projectivity cap.
fn exists_a_term(alg: &FiniteAlgebra, edges: &EdgeGraph, caps: &Caps) -> CheckResult {
    let name = "existsaterm";
    let targets = edges.edges(Flavor::Asm);
    if targets.is_empty() {
        return CheckResult {
            name: name.into(),
            status: CheckStatus::Pass,
            checked: 0,
            violations: 0,
        };
    }
    let top = caps.projectivity_arity.max(3);
    let mut pending = targets.clone();
    let mut incomplete = false;
    for m in 2..=top {
        let f = free_algebra(alg, m, caps.closure);
        incomplete |= !f.complete;
        let candidates: Vec<TermOperation> = (0..f.len())
            .map(|i| TermOperation {
                arity: m,
                size: alg.size,
                table: f.elements[i].clone(),
                tree: None,
            })
            .filter(|t| t.is_essential(0) && t.is_essential(m - 1))
            .collect();
        pending.retain(|&(a, b)| !candidates.iter().any(|t| witnesses(t, a, b)));
        if pending.is_empty() {
            break;
        }
    }
    let status = match pending.first() {
        None => CheckStatus::Pass,
        Some(&(a, b)) => CheckStatus::Skipped {
            reason: format!(
                "no witness for {a} -> {b} up to arity {top}{}",
                if incomplete { " (free algebra cap reached)" } else { "" }
            ),
        },
    };
    CheckResult {
        name: name.into(),
        status,
        checked: targets.len(),
        violations: 0,
    }
}

fn witnesses(t: &TermOperation, a: usize, b: usize) -> bool {
    let n = t.size;
    let inner = t.arity - 2;
    let mut args = vec![0; t.arity];
    args[0] = a;
    args[t.arity - 1] = b;
    let mut found = false;
    crate::algebra::for_each_tuple(n, inner, |c| {
        if !found {
            args[1..1 + inner].copy_from_slice(c);
            found = t.value(&args) == b;
        }
    });
    found
}

/// For every nonempty subset B: binary absorption, asm-closedness, and the
/// s-path criterion agree.
fn absorption_characterization(alg: &FiniteAlgebra, edges: &EdgeGraph, caps: &Caps) -> CheckResult {
    let name = "2abscharacterization";
    let n = alg.size;
    if n > caps.subset_size {
        return skipped(
            name,
            &format!("{n} elements exceed the subset cap {}", caps.subset_size),
        );
    }
    let f2 = free_algebra(alg, 2, caps.closure);
    if !f2.complete {
        return skipped(name, "F(2) closure cap reached");
    }
    let s_adj = edges.s();
    let sg: Vec<Vec<Subset>> = (0..n).map(|a| (0..n).map(|b| sg_of(alg, &[a, b])).collect()).collect();
    let mut result = CheckResult {
        name: name.into(),
        status: CheckStatus::Pass,
        checked: 0,
        violations: 0,
    };
    for mask in 1u64..(1u64 << n) {
        let b = Subset::from_elems(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        let absorbing = binary_absorption_witness(&f2, &b).is_some();
        let asm_closed = edges.is_closed(Flavor::Asm, &b);
        let criterion = s_path_criterion(&s_adj, &sg, &b);
        result.checked += 1;
        if absorbing != asm_closed || absorbing != criterion {
            result.violations += 1;
            if result.status == CheckStatus::Pass {
                result.status = CheckStatus::Fail(counterexample(
                    alg,
                    b.to_vec(),
                    format!("binary absorption {absorbing}, asm-closed {asm_closed}, s-path criterion {criterion}"),
                ));
            }
        }
    }
    result
}

/// B is s-closed and every a outside B reaches B along an s-path inside
/// Sg(a, b), for every b in B.
fn s_path_criterion(s_adj: &BitMatrix, sg: &[Vec<Subset>], b: &Subset) -> bool {
    if !b.iter().all(|x| s_adj.row(x).is_subset(b)) {
        return false;
    }
    let n = s_adj.rows();
    (0..n).filter(|&a| !b.contains(a)).all(|a| {
        b.iter().all(|y| {
            let within = &sg[a][y];
            let mut seen = Subset::from_elems(n, [a]);
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                if b.contains(x) {
                    return true;
                }
                for z in s_adj.row(x).iter() {
                    if within.contains(z) && seen.insert(z) {
                        stack.push(z);
                    }
                }
            }
            false
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::edges::{compute_edges, EdgeConfig};

    #[test]
    fn seeds_satisfy_theorems() {
        for alg in catalog::seeds() {
            let g = compute_edges(&alg, &EdgeConfig::default()).unwrap();
            let r = verify_edge_theorems(&alg, &g, &Caps::default()).unwrap();
            assert!(r.all_pass(), "{}: {:#?}", alg.name, r.checks);
        }
    }

    #[test]
    fn one_element_algebra_is_vacuous() {
        let t = catalog::trivial("f", 3);
        let g = compute_edges(&t, &EdgeConfig::default()).unwrap();
        assert!(verify_edge_theorems(&t, &g, &Caps::default()).unwrap().all_pass());
    }

    #[test]
    fn disconnected_graph_fails_weak_connectivity() {
        let z = catalog::z2_minority();
        let g = EdgeGraph::from_edges("z2", 2, [], []);
        let r = verify_edge_theorems(&z, &g, &Caps::default()).unwrap();
        assert!(r.get("weakconnect").unwrap().failed());
    }
}
