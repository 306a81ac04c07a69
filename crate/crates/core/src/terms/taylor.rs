use serde::{Deserialize, Serialize};

use super::cyclic::cyclic_operations;
use super::operation::TermOperation;
use crate::algebra::{for_each_tuple, FiniteAlgebra};
use crate::caps::Caps;
use crate::closure::close;
use crate::Tri;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaylorReport {
    pub has_taylor: Tri,
    pub witness: Option<TermOperation>,
    /// Outcome of the cyclic-term search at each arity tried.
    pub arities_checked: Vec<(usize, Tri)>,
    /// Every cyclic operation found at the witness arity generates a clone
    /// containing all basic operations.
    pub minimal_taylor_bounded: Tri,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn least_prime_above(n: usize) -> usize {
    (n + 1..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// Whether the clone generated by `gens` contains `target`. All operations
/// live on the same carrier.
pub fn clone_contains(gens: &[&TermOperation], target: &TermOperation, cap: usize) -> Tri {
    let n = target.size;
    let k = target.arity;
    let seeds = (0..k).map(|i| TermOperation::projection(n, k, i).table);
    let arities: Vec<usize> = gens.iter().map(|g| g.arity).collect();
    let mut idx = Vec::new();
    let closed = close(
        seeds,
        &arities,
        cap,
        |op, args: &[&Vec<u8>]| {
            let g = gens[op];
            (0..args[0].len())
                .map(|pos| {
                    idx.clear();
                    idx.extend(args.iter().map(|t| t[pos] as usize));
                    g.value(&idx) as u8
                })
                .collect()
        },
        |t| *t == target.table,
    );
    if closed.stopped || closed.elems.contains(&target.table) {
        Tri::Yes
    } else if closed.complete {
        Tri::No
    } else {
        Tri::Unknown
    }
}

/// Searches cyclic terms at arities 2..=p, p the least prime above |A|.
pub fn taylor_report(alg: &FiniteAlgebra, caps: &Caps) -> TaylorReport {
    let top = least_prime_above(alg.size);
    let mut arities_checked = Vec::new();
    let mut witness = None;
    let mut has_taylor = Tri::Unknown;
    for p in 2..=top {
        let s = cyclic_operations(alg, p, caps.closure, true);
        if let Some(c) = s.operations.into_iter().next() {
            arities_checked.push((p, Tri::Yes));
            witness = Some(c);
            has_taylor = Tri::Yes;
            break;
        }
        let status = if s.complete { Tri::No } else { Tri::Unknown };
        arities_checked.push((p, status));
        if p == top && s.complete {
            has_taylor = Tri::No;
        }
    }
    let minimal_taylor_bounded = match (&witness, has_taylor) {
        (_, Tri::No) => Tri::No,
        (Some(w), _) => minimal_evidence(alg, w, caps),
        _ => Tri::Unknown,
    };
    TaylorReport {
        has_taylor,
        witness,
        arities_checked,
        minimal_taylor_bounded,
    }
}

fn minimal_evidence(alg: &FiniteAlgebra, witness: &TermOperation, caps: &Caps) -> Tri {
    let all = cyclic_operations(alg, witness.arity, caps.closure, false);
    let candidates = if all.operations.is_empty() {
        vec![witness.clone()]
    } else {
        all.operations
    };
    let mut result = if all.complete { Tri::Yes } else { Tri::Unknown };
    for c in &candidates {
        for op in 0..alg.ops.len() {
            match clone_contains(&[c], &TermOperation::basic(alg, op), caps.closure) {
                Tri::No => return Tri::No,
                Tri::Unknown => result = Tri::Unknown,
                Tri::Yes => {}
            }
        }
    }
    result
}

/// Whether a ternary table is a majority operation.
pub fn is_majority(t: &TermOperation) -> bool {
    let mut ok = t.arity == 3;
    if ok {
        for_each_tuple(t.size, 2, |xy| {
            let (x, y) = (xy[0], xy[1]);
            ok &= t.value(&[x, x, y]) == x && t.value(&[x, y, x]) == x && t.value(&[y, x, x]) == x;
        });
    }
    ok
}

/// Whether a ternary table is a Mal'cev operation.
pub fn is_malcev(t: &TermOperation) -> bool {
    let mut ok = t.arity == 3;
    if ok {
        for_each_tuple(t.size, 2, |xy| {
            let (x, y) = (xy[0], xy[1]);
            ok &= t.value(&[x, y, y]) == x && t.value(&[y, y, x]) == x;
        });
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn primes() {
        assert_eq!(least_prime_above(1), 2);
        assert_eq!(least_prime_above(2), 3);
        assert_eq!(least_prime_above(4), 5);
        assert_eq!(least_prime_above(7), 11);
    }

    #[test]
    fn a1_is_minimal_taylor_up_to_arity_three() {
        let r = taylor_report(&catalog::a1(), &Caps::default());
        assert_eq!(r.has_taylor, Tri::Yes);
        let w = r.witness.unwrap();
        assert_eq!(w.arity, 3);
        assert!(w.is_cyclic());
        assert_eq!(r.minimal_taylor_bounded, Tri::Yes);
    }

    #[test]
    fn projections_are_not_taylor() {
        let r = taylor_report(&catalog::projections(), &Caps::default());
        assert_eq!(r.has_taylor, Tri::No);
        assert_eq!(r.arities_checked.last(), Some(&(3, Tri::No)));
    }
}
