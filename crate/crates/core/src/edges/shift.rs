use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::EdgeGraph;
use crate::algebra::{is_tolerance, BinaryRelation, FiniteAlgebra, ProductView};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::terms::{universal_meet, TermOperation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedChain {
    /// d_0, ..., d_k.
    pub chain: Vec<usize>,
    /// Row j lists e_{j,0}, ..., e_{j,n}.
    pub trails: Vec<Vec<usize>>,
    /// c_j reaches d_j along s-edges for every j.
    pub reachable: bool,
    /// Consecutive d_j are related by S.
    pub in_tolerance: bool,
}

/// Moves a chain c_0, ..., c_k of S-related elements along the s-path
/// `path` from c_i to d_i, shifting every other c_j by
/// e_{j,l+1} = f(e_{j,l}, e_{i,l+1}).
pub fn shift_tolerance_chain(
    alg: &FiniteAlgebra,
    edges: &EdgeGraph,
    s: &BinaryRelation,
    chain: &[usize],
    i: usize,
    path: &[usize],
    f: &TermOperation,
) -> Result<ShiftedChain> {
    let n = alg.size;
    if f.arity != 2 || f.size != n {
        return Err(Error::ArityMismatch(format!(
            "f must be binary on {n} elements, found arity {} on {}",
            f.arity, f.size
        )));
    }
    if !is_tolerance(alg, s)? {
        return Err(Error::PreconditionViolated("S is not a tolerance".into()));
    }
    if chain.is_empty() || i >= chain.len() || chain.iter().any(|&c| c >= n) {
        return Err(Error::PreconditionViolated(format!(
            "chain {chain:?} with index {i} is not a chain over the carrier"
        )));
    }
    if let Some(w) = chain.windows(2).find(|w| !s.contains(w[0], w[1])) {
        return Err(Error::PreconditionViolated(format!(
            "({}, {}) in the chain is not in S",
            w[0], w[1]
        )));
    }
    if path.first() != Some(&chain[i]) {
        return Err(Error::PreconditionViolated(format!(
            "path {path:?} does not start at c_{i} = {}",
            chain[i]
        )));
    }
    if let Some(w) = path.windows(2).find(|w| w[0] != w[1] && !edges.has_s(w[0], w[1])) {
        return Err(Error::PreconditionViolated(format!(
            "{} -> {} on the path is not an s-edge",
            w[0], w[1]
        )));
    }
    let trails: Vec<Vec<usize>> = chain
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            if j == i {
                return path.to_vec();
            }
            let mut e = vec![c];
            for &next in &path[1..] {
                let last = *e.last().expect("nonempty");
                e.push(f.bin(last, next));
            }
            e
        })
        .collect();
    let shifted: Vec<usize> = trails.iter().map(|t| *t.last().expect("nonempty")).collect();
    let reach = edges.s().reflexive_transitive_closure();
    let reachable = chain.iter().zip(&shifted).all(|(&c, &d)| reach.get(c, d));
    let in_tolerance = shifted.windows(2).all(|w| s.contains(w[0], w[1]));
    Ok(ShiftedChain {
        chain: shifted,
        trails,
        reachable,
        in_tolerance,
    })
}

/// A sampled (tolerance, chain, s-path) triple that broke a post-condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftFailure {
    pub tolerance_generators: Vec<(usize, usize)>,
    pub chain: Vec<usize>,
    pub index: usize,
    pub path: Vec<usize>,
    pub shifted: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftSampleReport {
    pub algebra: String,
    pub samples: usize,
    pub failures: Vec<ShiftFailure>,
}

/// Draws `count` random triples: S generated by the diagonal and up to two
/// symmetric pairs, an S-chain of length 1 to 3, and an s-path of up to two
/// steps from one of its members. Each is shifted along the universal meet
/// term and checked for reachability, tolerance membership and endpoint.
pub fn sample_shift_chains<R: Rng>(
    alg: &FiniteAlgebra,
    edges: &EdgeGraph,
    rng: &mut R,
    count: usize,
    caps: &Caps,
) -> Result<ShiftSampleReport> {
    let n = alg.size;
    let f = universal_meet(alg, caps)?.operation();
    let square = ProductView::power(alg, 2);
    let mut failures = Vec::new();
    for _ in 0..count {
        let gens: Vec<(usize, usize)> = (0..rng.gen_range(0..3))
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        let mut seeds: Vec<Vec<usize>> = (0..n).map(|x| vec![x, x]).collect();
        for &(a, b) in &gens {
            seeds.push(vec![a, b]);
            seeds.push(vec![b, a]);
        }
        let closed = square.sg(seeds, caps.closure);
        if !closed.complete {
            return Err(Error::cap(format!("tolerance on {}", alg.name), caps.closure));
        }
        let s = BinaryRelation::from_pairs(n, n, closed.elems.iter().map(|p| (p[0], p[1])));
        let len = rng.gen_range(1..4);
        let mut chain = vec![rng.gen_range(0..n)];
        while chain.len() < len {
            let nb = s.right_neighbors(*chain.last().expect("nonempty")).to_vec();
            chain.push(nb[rng.gen_range(0..nb.len())]);
        }
        let i = rng.gen_range(0..chain.len());
        let mut path = vec![chain[i]];
        for _ in 0..rng.gen_range(0..3) {
            let last = *path.last().expect("nonempty");
            let nb: Vec<usize> = (0..n).filter(|&y| edges.has_s(last, y)).collect();
            if nb.is_empty() {
                break;
            }
            path.push(nb[rng.gen_range(0..nb.len())]);
        }
        let out = shift_tolerance_chain(alg, edges, &s, &chain, i, &path, &f)?;
        if !(out.reachable && out.in_tolerance && out.chain[i] == *path.last().expect("nonempty")) {
            failures.push(ShiftFailure {
                tolerance_generators: gens,
                chain,
                index: i,
                path,
                shifted: out.chain,
            });
        }
    }
    Ok(ShiftSampleReport {
        algebra: alg.name.clone(),
        samples: count,
        failures,
    })
}
