use serde::{Deserialize, Serialize};

use crate::algebra::{
    affine_checks, centralizer_condition, is_congruence, quotient, sg_of, subalgebra, FiniteAlgebra, Partition,
};
use crate::bitset::Subset;
use crate::caps::Caps;
use crate::edges::{compute_edges, EdgeConfig, EdgeGraph};
use crate::error::{Error, Result};
use crate::terms::{free_algebra, universal_meet, TermTree};
use crate::Tri;

/// A binary term t whose every t_b = t(b, -) is a non-surjective retraction,
/// with C = {c : t(-, c) is a permutation} generating a proper subuniverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationWitness {
    /// Row-major n × n table of t.
    pub table: Vec<usize>,
    pub term: TermTree,
    pub c: Vec<usize>,
    pub sg_c: Vec<usize>,
}

impl EliminationWitness {
    /// Re-checks the witness conditions on `alg`.
    pub fn replay(&self, alg: &FiniteAlgebra) -> bool {
        let n = alg.size;
        let ok_rows = (0..n).all(|b| row_is_proper_retraction(&self.table, n, b));
        let c: Vec<usize> = (0..n).filter(|&c| column_is_permutation(&self.table, n, c)).collect();
        let sg = sg_of(alg, &c);
        ok_rows && c == self.c && sg.to_vec() == self.sg_c && !sg.is_full()
    }
}

fn row_is_proper_retraction(t: &[usize], n: usize, b: usize) -> bool {
    let row = &t[b * n..(b + 1) * n];
    let idempotent = (0..n).all(|x| row[row[x]] == row[x]);
    let image = Subset::from_elems(n, row.iter().copied());
    idempotent && !image.is_full()
}

fn column_is_permutation(t: &[usize], n: usize, c: usize) -> bool {
    Subset::from_elems(n, (0..n).map(|x| t[x * n + c])).is_full()
}

/// Searches the binary term operations for an elimination witness, in the
/// order of the free algebra on two generators.
pub fn maroti_witness(alg: &FiniteAlgebra, caps: &Caps) -> Result<Option<EliminationWitness>> {
    let n = alg.size;
    let f2 = free_algebra(alg, 2, caps.closure);
    if !f2.complete {
        return Err(Error::cap(format!("F(2) of {}", alg.name), caps.closure));
    }
    for (i, raw) in f2.elements.iter().enumerate() {
        let table: Vec<usize> = raw.iter().map(|&x| x as usize).collect();
        if !(0..n).all(|b| row_is_proper_retraction(&table, n, b)) {
            continue;
        }
        let c: Vec<usize> = (0..n).filter(|&c| column_is_permutation(&table, n, c)).collect();
        let sg = sg_of(alg, &c);
        if !sg.is_full() {
            return Ok(Some(EliminationWitness {
                table,
                term: f2.tree(i),
                c,
                sg_c: sg.to_vec(),
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionReport {
    /// Every b in B has exactly one c in C with b ->s c.
    pub unique_target: bool,
    /// No two elements of B have an s-edge to the same c.
    pub injective: bool,
    /// f(b, c) is that unique target for every b in B and c in C.
    pub meet_agrees: bool,
    /// (b, c) pairs with b ->s c.
    pub s_edges: Vec<(usize, usize)>,
    pub violations: Vec<String>,
}

impl InjectionReport {
    pub fn holds(&self) -> bool {
        self.unique_target && self.injective && self.meet_agrees
    }
}

fn block_label(beta: &Partition, block: &[usize], what: &str) -> Result<usize> {
    let first = *block
        .first()
        .ok_or_else(|| Error::PreconditionViolated(format!("{what} is empty")))?;
    let label = beta.block_of(first);
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted != beta.block(label) {
        return Err(Error::PreconditionViolated(format!(
            "{what} = {block:?} is not a beta-block"
        )));
    }
    Ok(label)
}

/// Checks the hypotheses on β, η, B and C, then verifies the s-edges from B
/// to C exhaustively: each b has a unique target, targets are distinct, and
/// the universal meet term computes them.
pub fn sedge_injection_check(
    alg: &FiniteAlgebra,
    beta: &Partition,
    eta: &Partition,
    b_block: &[usize],
    c_block: &[usize],
    caps: &Caps,
) -> Result<InjectionReport> {
    let n = alg.size;
    for (name, p) in [("beta", beta), ("eta", eta)] {
        if p.size() != n || !is_congruence(alg, p) {
            return Err(Error::NotACongruence(format!("{name} = {p} on {}", alg.name)));
        }
    }
    let lb = block_label(beta, b_block, "B")?;
    let lc = block_label(beta, c_block, "C")?;
    if lb == lc {
        return Err(Error::PreconditionViolated("B and C are the same beta-block".into()));
    }
    let b: Vec<usize> = beta.block(lb);
    let c: Vec<usize> = beta.block(lc);
    if !eta.same(b[0], c[0]) {
        return Err(Error::HypothesisUnmet("B and C lie in different eta-blocks".into()));
    }
    for block in beta.blocks() {
        let sub = subalgebra(alg, &Subset::from_elems(n, block.iter().copied()))?;
        if affine_checks(&sub, None, caps)?.is_affine != Tri::Yes {
            return Err(Error::HypothesisUnmet(format!("beta-block {block:?} is not affine")));
        }
    }
    if !centralizer_condition(alg, eta, beta)? {
        return Err(Error::HypothesisUnmet("C(eta, beta; 0) fails".into()));
    }
    let config = EdgeConfig {
        caps: caps.clone(),
        ..EdgeConfig::default()
    };
    let top = compute_edges(&quotient(alg, beta)?, &config)?;
    if !top.has_s(lb, lc) {
        return Err(Error::HypothesisUnmet("B ->s C fails in the quotient by beta".into()));
    }
    let edges = compute_edges(alg, &config)?;
    let f = universal_meet(alg, caps)?;
    Ok(injection_conclusions(&edges, &b, &c, |x, y| f.apply(0, x, y)))
}

fn injection_conclusions(
    edges: &EdgeGraph,
    b: &[usize],
    c: &[usize],
    f: impl Fn(usize, usize) -> usize,
) -> InjectionReport {
    let mut violations = Vec::new();
    let s_edges: Vec<(usize, usize)> = b
        .iter()
        .flat_map(|&x| c.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| edges.has_s(x, y))
        .collect();
    let targets = |x: usize| s_edges.iter().filter(|e| e.0 == x).map(|e| e.1).collect::<Vec<_>>();
    let mut unique_target = true;
    let mut meet_agrees = true;
    for &x in b {
        let t = targets(x);
        if t.len() != 1 {
            unique_target = false;
            violations.push(format!("{x} has s-edges to {t:?} in C"));
        }
        for &y in c {
            let v = f(x, y);
            if t.len() != 1 || v != t[0] {
                meet_agrees = false;
                violations.push(format!("f({x}, {y}) = {v}, s-targets of {x} are {t:?}"));
            }
        }
    }
    let mut injective = true;
    for &y in c {
        let sources: Vec<usize> = s_edges.iter().filter(|e| e.1 == y).map(|e| e.0).collect();
        if sources.len() > 1 {
            injective = false;
            violations.push(format!("{sources:?} all have s-edges to {y}"));
        }
    }
    InjectionReport {
        unique_target,
        injective,
        meet_agrees,
        s_edges,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn two_element_seeds_have_no_witness() {
        let caps = Caps::default();
        assert!(maroti_witness(&catalog::semilattice(), &caps).unwrap().is_none());
        assert!(maroti_witness(&catalog::z2_minority(), &caps).unwrap().is_none());
        assert!(maroti_witness(&catalog::trivial("f", 3), &caps).unwrap().is_none());
    }

    #[test]
    fn product_with_semilattice_satisfies_injection() {
        let alg = catalog::z2_times_semilattice();
        let beta = Partition::from_labels(&[0, 1, 0, 1]);
        let eta = Partition::indiscrete(4);
        let r = sedge_injection_check(&alg, &beta, &eta, &[1, 3], &[0, 2], &Caps::default()).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert_eq!(r.s_edges, vec![(1, 0), (3, 2)]);
    }

    #[test]
    fn equal_blocks_are_rejected() {
        let alg = catalog::z2_times_semilattice();
        let beta = Partition::from_labels(&[0, 1, 0, 1]);
        let eta = Partition::indiscrete(4);
        assert!(matches!(
            sedge_injection_check(&alg, &beta, &eta, &[0, 2], &[2, 0], &Caps::default()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn discrete_beta_is_vacuous() {
        let alg = catalog::semilattice();
        let r = sedge_injection_check(
            &alg,
            &Partition::discrete(2),
            &Partition::indiscrete(2),
            &[1],
            &[0],
            &Caps::default(),
        )
        .unwrap();
        assert!(r.holds());
        assert_eq!(r.s_edges, vec![(1, 0)]);
    }
}
