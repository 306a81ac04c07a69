use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::graph::{EdgeGraph, Flavor};
use crate::algebra::{
    affine_checks, enumerate_subuniverses, homomorphisms_between, product, sg_of, subalgebra, FiniteAlgebra,
    ProductView,
};
use crate::bitset::Subset;
use crate::caps::Caps;
use crate::error::Result;
use crate::terms::{local_structure, semilattice_towards};
use crate::Tri;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub algebras: Vec<String>,
    pub elements: Vec<usize>,
    /// Tuples generating the offending relation, if one is involved.
    pub relation_generators: Vec<Vec<usize>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    Pass,
    Fail(Counterexample),
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    /// Instances examined.
    pub checked: usize,
    pub violations: usize,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Pass,
            checked: 0,
            violations: 0,
        }
    }

    fn skipped(name: &str, reason: impl Into<String>) -> Self {
        CheckResult {
            status: CheckStatus::Skipped { reason: reason.into() },
            ..CheckResult::new(name)
        }
    }

    /// Records one instance; the first violation becomes the counterexample.
    fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.status == CheckStatus::Pass {
                self.status = CheckStatus::Fail(counterexample());
            }
        }
    }

    fn skip(&mut self, reason: impl Into<String>) {
        if self.status == CheckStatus::Pass {
            self.status = CheckStatus::Skipped { reason: reason.into() };
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.status, CheckStatus::Fail(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<CheckResult>,
    /// Coverage remarks, e.g. which products were enumerated exhaustively.
    pub notes: Vec<String>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(CheckResult::failed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.failed()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const AXIOM_NAMES: [&str; 11] = [
    "base-1",
    "base-2",
    "base-3",
    "stronger-base-1",
    "stronger-base-2",
    "stronger-base-3",
    "homomorphism-1",
    "homomorphism-2",
    "relational-1",
    "relational-2",
    "relational-3",
];

/// Facts about one algebra reused by several axioms.
struct Facts<'a> {
    alg: &'a FiniteAlgebra,
    edges: &'a EdgeGraph,
    /// Sg(a, b) for all a, b.
    sg: Vec<Vec<Subset>>,
}

impl<'a> Facts<'a> {
    fn new(alg: &'a FiniteAlgebra, edges: &'a EdgeGraph) -> Self {
        let n = alg.size;
        let sg = (0..n).map(|a| (0..n).map(|b| sg_of(alg, &[a, b])).collect()).collect();
        Facts { alg, edges, sg }
    }
}

/// A single flipped edge bit, used for mutation testing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMutation {
    /// Index into the catalog.
    pub algebra: usize,
    /// `As` or `Sm`.
    pub flavor: Flavor,
    pub a: usize,
    pub b: usize,
}

/// The graph with the edge bit named by `m` flipped.
pub fn apply_mutation(g: &EdgeGraph, m: &EdgeMutation) -> EdgeGraph {
    let mut out = g.clone();
    let adj = match m.flavor {
        Flavor::Sm => &mut out.sm_adj,
        _ => &mut out.as_adj,
    };
    if adj.get(m.a, m.b) {
        adj.clear(m.a, m.b);
    } else {
        adj.set(m.a, m.b);
    }
    out
}

/// Checks the Edge Axioms and the Stronger Base Axioms on a catalog of
/// algebras with their edge graphs. Axioms relating several algebras are
/// checked within each group of algebras sharing a signature.
pub fn verify_edge_axioms(catalog: &[(&FiniteAlgebra, &EdgeGraph)], caps: &Caps) -> Result<AxiomReport> {
    let mut notes = Vec::new();
    if let Some((alg, g)) = catalog.iter().find(|(_, g)| !g.is_exact()) {
        let reason = format!("edges of {} have {} undecided pairs", alg.name, g.unknown.len());
        return Ok(AxiomReport {
            checks: AXIOM_NAMES
                .iter()
                .map(|n| CheckResult::skipped(n, reason.clone()))
                .collect(),
            notes: vec![reason],
        });
    }
    let facts: Vec<Facts> = catalog.iter().map(|(a, g)| Facts::new(a, g)).collect();
    let mut checks: HashMap<&str, CheckResult> = AXIOM_NAMES.iter().map(|n| (*n, CheckResult::new(n))).collect();
    for f in &facts {
        base_axioms(f, caps, &mut checks)?;
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, f) in facts.iter().enumerate() {
        match groups.iter_mut().find(|g| facts[g[0]].alg.same_signature(f.alg)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    for group in &groups {
        for &i in group {
            for &j in group {
                homomorphism_axioms(&facts[i], &facts[j], caps, &mut checks)?;
                binary_relational_axioms(&facts[i], &facts[j], caps, &mut checks, &mut notes)?;
            }
        }
        for &i in group {
            for &j in group {
                for &k in group {
                    ternary_relational_axiom(&facts[i], &facts[j], &facts[k], caps, &mut checks);
                }
            }
        }
    }
    Ok(AxiomReport {
        checks: AXIOM_NAMES
            .iter()
            .map(|n| checks.remove(n).expect("all names present"))
            .collect(),
        notes,
    })
}

fn base_axioms(f: &Facts, caps: &Caps, checks: &mut HashMap<&str, CheckResult>) -> Result<()> {
    let (alg, g) = (f.alg, f.edges);
    let n = alg.size;
    let mut affine: HashMap<Subset, Tri> = HashMap::new();
    let mut majority: HashMap<Subset, bool> = HashMap::new();
    let cx = |a: usize, b: usize, detail: String| Counterexample {
        algebras: vec![alg.name.clone()],
        elements: vec![a, b],
        relation_generators: Vec::new(),
        detail,
    };
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let sg = &f.sg[a][b];
            if !affine.contains_key(sg) {
                let sub = subalgebra(alg, sg)?;
                affine.insert(sg.clone(), affine_checks(&sub, None, caps)?.is_affine);
                majority.insert(sg.clone(), local_structure(alg, sg, caps)?.has_majority_term);
            }
            match affine[sg] {
                Tri::Yes => {
                    checks.get_mut("base-1").unwrap().record(g.has_as(a, b), || {
                        cx(
                            a,
                            b,
                            format!("Sg({a},{b}) = {sg} is affine but {a} -> {b} is not an as-edge"),
                        )
                    });
                    checks.get_mut("stronger-base-1").unwrap().record(!g.has_sm(a, b), || {
                        cx(
                            a,
                            b,
                            format!("Sg({a},{b}) = {sg} is affine but {a} -> {b} is an sm-edge"),
                        )
                    });
                }
                Tri::Unknown => {
                    let reason = format!("affineness of Sg({a},{b}) in {} undecided", alg.name);
                    checks.get_mut("base-1").unwrap().skip(reason.clone());
                    checks.get_mut("stronger-base-1").unwrap().skip(reason);
                }
                Tri::No => {}
            }
            if majority[sg] {
                checks.get_mut("base-2").unwrap().record(g.has_sm(a, b), || {
                    cx(
                        a,
                        b,
                        format!("Sg({a},{b}) = {sg} has a majority term but {a} -> {b} is not an sm-edge"),
                    )
                });
                checks.get_mut("stronger-base-2").unwrap().record(!g.has_as(a, b), || {
                    cx(
                        a,
                        b,
                        format!("Sg({a},{b}) = {sg} has a majority term but {a} -> {b} is an as-edge"),
                    )
                });
            }
            let semilattice = semilattice_towards(alg, a, b, caps.closure)?;
            let s = g.has_s(a, b);
            if semilattice {
                checks.get_mut("base-3").unwrap().record(s, || {
                    cx(a, b, format!("a binary term is a semilattice on {{{a},{b}}} absorbing into {b}, but {a} -> {b} is not an s-edge"))
                });
            }
            let c = checks.get_mut("stronger-base-3").unwrap();
            c.record(semilattice || !s, || {
                cx(
                    a,
                    b,
                    format!(
                        "{a} -> {b} is an s-edge but no binary term is a semilattice on {{{a},{b}}} absorbing into {b}"
                    ),
                )
            });
            if s {
                c.record(!g.has_asm(b, a), || {
                    cx(a, b, format!("{a} -> {b} is an s-edge and {b} -> {a} is an asm-edge"))
                });
            }
        }
    }
    Ok(())
}

fn homomorphism_axioms(src: &Facts, dst: &Facts, caps: &Caps, checks: &mut HashMap<&str, CheckResult>) -> Result<()> {
    let homs = homomorphisms_between(src.alg, dst.alg, caps.search_space)?;
    let n = src.alg.size;
    let names = vec![src.alg.name.clone(), dst.alg.name.clone()];
    for h in &homs {
        for flavor in [Flavor::As, Flavor::Sm] {
            for (a, b) in src.edges.edges(flavor) {
                let (fa, fb) = (h.apply(a), h.apply(b));
                checks
                    .get_mut("homomorphism-1")
                    .unwrap()
                    .record(dst.edges.has(flavor, fa, fb), || Counterexample {
                        algebras: names.clone(),
                        elements: vec![a, b, fa, fb],
                        relation_generators: vec![h.map.clone()],
                        detail: format!(
                            "{a} -> {b} is an {} edge but its image {fa} -> {fb} under {:?} is not",
                            flavor.name(),
                            h.map
                        ),
                    });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let (fa, fb) = (h.apply(a), h.apply(b));
                if fa == fb {
                    continue;
                }
                let fibre: Vec<usize> = (0..n).filter(|&c| h.apply(c) == fb).collect();
                let minimal: Vec<usize> = fibre
                    .iter()
                    .copied()
                    .filter(|&c| {
                        let sc = &src.sg[a][c];
                        !fibre.iter().any(|&d| {
                            let sd = &src.sg[a][d];
                            sd != sc && sd.is_subset(sc)
                        })
                    })
                    .collect();
                for flavor in [Flavor::As, Flavor::Sm] {
                    if !dst.edges.has(flavor, fa, fb) {
                        continue;
                    }
                    for &b2 in &minimal {
                        checks.get_mut("homomorphism-2").unwrap().record(src.edges.has(flavor, a, b2), || {
                            Counterexample {
                                algebras: names.clone(),
                                elements: vec![a, b2, fa, fb],
                                relation_generators: vec![h.map.clone()],
                                detail: format!(
                                    "{fa} -> {fb} is an {} edge under {:?}, Sg({a},{b2}) is minimal in the fibre, but {a} -> {b2} is not",
                                    flavor.name(),
                                    h.map
                                ),
                            }
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn binary_relational_axioms(
    fa: &Facts,
    fb: &Facts,
    caps: &Caps,
    checks: &mut HashMap<&str, CheckResult>,
    notes: &mut Vec<String>,
) -> Result<()> {
    let (a, b) = (fa.alg, fb.alg);
    let m = b.size;
    let names = vec![a.name.clone(), b.name.clone()];
    let as_a = fa.edges.edges(Flavor::As);
    let as_b = fb.edges.edges(Flavor::As);
    let sm_b = fb.edges.edges(Flavor::Sm);
    let pair = |x: usize, y: usize| vec![x, y];
    let cx = |axiom: u8, a1: usize, a2: usize, b1: usize, b2: usize, gens: Vec<Vec<usize>>| Counterexample {
        algebras: names.clone(),
        elements: vec![a1, a2, b1, b2],
        relation_generators: gens,
        detail: format!(
            "relational axiom {axiom}: ({a2},{b2}) is missing from the subuniverse generated by the listed tuples"
        ),
    };
    if a.size * b.size <= caps.relational_product {
        let prod = product(a, b)?;
        let subs = enumerate_subuniverses(&prod, false, caps.relational_product)?.subuniverses;
        notes.push(format!(
            "{} x {}: {} subuniverses enumerated exhaustively",
            a.name,
            b.name,
            subs.len()
        ));
        let at = |x: usize, y: usize| x * m + y;
        for r in &subs {
            for &(a1, a2) in &as_a {
                for &(b1, b2) in &sm_b {
                    if r.contains(at(a1, b2)) && r.contains(at(a2, b1)) {
                        checks
                            .get_mut("relational-1")
                            .unwrap()
                            .record(r.contains(at(a2, b2)), || {
                                cx(1, a1, a2, b1, b2, vec![pair(a1, b2), pair(a2, b1)])
                            });
                    }
                }
                for &(b1, b2) in &as_b {
                    if r.contains(at(a1, b1)) && r.contains(at(a1, b2)) && r.contains(at(a2, b1)) {
                        checks
                            .get_mut("relational-2")
                            .unwrap()
                            .record(r.contains(at(a2, b2)), || {
                                cx(2, a1, a2, b1, b2, vec![pair(a1, b1), pair(a1, b2), pair(a2, b1)])
                            });
                    }
                }
            }
        }
    } else {
        notes.push(format!(
            "{} x {}: checked on the subuniverses generated by the premise tuples",
            a.name, b.name
        ));
        let view = ProductView::new(&[a, b])?;
        let generated = |gens: Vec<Vec<usize>>, target: Vec<usize>| -> Option<bool> {
            let closed = view.sg(gens, caps.closure);
            closed.complete.then(|| closed.elems.contains(&target))
        };
        for &(a1, a2) in &as_a {
            for &(b1, b2) in &sm_b {
                let gens = vec![pair(a1, b2), pair(a2, b1)];
                match generated(gens.clone(), pair(a2, b2)) {
                    Some(ok) => checks
                        .get_mut("relational-1")
                        .unwrap()
                        .record(ok, || cx(1, a1, a2, b1, b2, gens)),
                    None => checks.get_mut("relational-1").unwrap().skip("closure cap reached"),
                }
            }
            for &(b1, b2) in &as_b {
                let gens = vec![pair(a1, b1), pair(a1, b2), pair(a2, b1)];
                match generated(gens.clone(), pair(a2, b2)) {
                    Some(ok) => checks
                        .get_mut("relational-2")
                        .unwrap()
                        .record(ok, || cx(2, a1, a2, b1, b2, gens)),
                    None => checks.get_mut("relational-2").unwrap().skip("closure cap reached"),
                }
            }
        }
    }
    Ok(())
}

fn ternary_relational_axiom(fa: &Facts, fb: &Facts, fc: &Facts, caps: &Caps, checks: &mut HashMap<&str, CheckResult>) {
    let view = ProductView::new(&[fa.alg, fb.alg, fc.alg]).expect("group shares a signature");
    let names = vec![fa.alg.name.clone(), fb.alg.name.clone(), fc.alg.name.clone()];
    let (ea, eb, ec) = (
        fa.edges.edges(Flavor::Sm),
        fb.edges.edges(Flavor::Sm),
        fc.edges.edges(Flavor::Sm),
    );
    for &(a1, a2) in &ea {
        for &(b1, b2) in &eb {
            for &(c1, c2) in &ec {
                let gens = vec![vec![a1, b2, c2], vec![a2, b1, c2], vec![a2, b2, c1]];
                let closed = view.sg(gens.clone(), caps.closure);
                let check = checks.get_mut("relational-3").unwrap();
                if !closed.complete {
                    check.skip("closure cap reached");
                    continue;
                }
                check.record(closed.elems.contains(&vec![a2, b2, c2]), || Counterexample {
                    algebras: names.clone(),
                    elements: vec![a1, a2, b1, b2, c1, c2],
                    relation_generators: gens,
                    detail: format!("relational axiom 3: ({a2},{b2},{c2}) is missing from the generated subuniverse"),
                });
            }
        }
    }
}
