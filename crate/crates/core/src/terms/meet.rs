use serde::{Deserialize, Serialize};

use super::cyclic::family_cyclic;
use super::operation::TermOperation;
use super::taylor::least_prime_above;
use crate::algebra::{tuple_index, FiniteAlgebra};
use crate::caps::Caps;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetCertificate {
    /// f(x, f(x, y)) = f(x, y) on every member.
    pub absorbs: bool,
    /// f(f(x, y), x) = f(x, y) on every member.
    pub swaps: bool,
}

/// The binary term f built from a cyclic term, tabulated on each member of
/// a family with a common signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalMeet {
    pub base: Vec<String>,
    pub sizes: Vec<usize>,
    /// f on member j, row-major n_j × n_j.
    pub tables: Vec<Vec<u8>>,
    pub cyclic_arity: usize,
    /// Exponent k of t_k.
    pub t_exponent: usize,
    /// Exponent of the final iteration of q.
    pub q_exponent: usize,
    pub certificate: MeetCertificate,
}

impl UniversalMeet {
    #[inline]
    pub fn apply(&self, j: usize, x: usize, y: usize) -> usize {
        self.tables[j][x * self.sizes[j] + y] as usize
    }

    /// f on the first member.
    pub fn operation(&self) -> TermOperation {
        self.operation_on(0)
    }

    pub fn operation_on(&self, j: usize) -> TermOperation {
        TermOperation {
            arity: 2,
            size: self.sizes[j],
            table: self.tables[j].clone(),
            tree: None,
        }
    }
}

type Bin = Vec<Vec<u8>>;

fn compose_first(sizes: &[usize], outer: &Bin, inner: &Bin) -> Bin {
    sizes
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            (0..n * n)
                .map(|i| outer[j][(i / n) * n + inner[j][i] as usize])
                .collect()
        })
        .collect()
}

/// g(x, g(x, y)) = g(x, y) everywhere.
fn first_idempotent(sizes: &[usize], g: &Bin) -> bool {
    compose_first(sizes, g, g) == *g
}

/// Least k with t_k(x, t_k(x, y)) = t_k(x, y), where t_{i+1}(x,y) = t(x, t_i(x,y)).
fn idempotent_power(sizes: &[usize], t: &Bin, limit: usize) -> Result<(usize, Bin)> {
    let mut cur = t.clone();
    for k in 1..=limit {
        if first_idempotent(sizes, &cur) {
            return Ok((k, cur));
        }
        cur = compose_first(sizes, t, &cur);
    }
    Err(Error::cap("idempotent power of a binary term", limit))
}

/// f from a cyclic witness of the variety generated by `algs`.
pub fn universal_meet_family(algs: &[&FiniteAlgebra], caps: &Caps) -> Result<UniversalMeet> {
    let sizes: Vec<usize> = algs.iter().map(|a| a.size).collect();
    let product = sizes
        .iter()
        .fold(1usize, |acc, &n| acc.saturating_mul(n))
        .min(caps.closure);
    let top = least_prime_above(product);
    let mut found = None;
    for p in 2..=top {
        let (free, hits) = family_cyclic(algs, p, caps.closure, true)?;
        if let Some(&i) = hits.first() {
            found = Some((p, free.elements[i].clone()));
            break;
        }
        if !free.complete {
            break;
        }
    }
    let (p, c) = found
        .ok_or_else(|| Error::NoCyclicWitness(algs.iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join(", ")))?;
    let mut off = 0;
    let t: Bin = sizes
        .iter()
        .map(|&n| {
            let block = &c[off..off + n.pow(p as u32)];
            off += n.pow(p as u32);
            let mut args = vec![0; p];
            (0..n * n)
                .map(|i| {
                    args[0] = i / n;
                    for a in &mut args[1..] {
                        *a = i % n;
                    }
                    block[tuple_index(n, &args)]
                })
                .collect()
        })
        .collect();
    let (t_exponent, tk) = idempotent_power(&sizes, &t, caps.closure)?;
    let swapped: Bin = sizes
        .iter()
        .enumerate()
        .map(|(j, &n)| (0..n * n).map(|i| tk[j][(i % n) * n + i / n]).collect())
        .collect();
    let q = compose_first(&sizes, &tk, &swapped);
    let (q_exponent, f) = idempotent_power(&sizes, &q, caps.closure)?;
    let certificate = certify(&sizes, &f);
    Ok(UniversalMeet {
        base: algs.iter().map(|a| a.name.clone()).collect(),
        sizes,
        tables: f,
        cyclic_arity: p,
        t_exponent,
        q_exponent,
        certificate,
    })
}

pub fn universal_meet(alg: &FiniteAlgebra, caps: &Caps) -> Result<UniversalMeet> {
    universal_meet_family(&[alg], caps)
}

fn certify(sizes: &[usize], f: &Bin) -> MeetCertificate {
    let absorbs = first_idempotent(sizes, f);
    let swaps = sizes.iter().enumerate().all(|(j, &n)| {
        (0..n).all(|x| {
            (0..n).all(|y| {
                let fxy = f[j][x * n + y] as usize;
                f[j][fxy * n + x] as usize == fxy
            })
        })
    });
    MeetCertificate { absorbs, swaps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn semilattice_meet() {
        let m = universal_meet(&catalog::semilattice(), &Caps::default()).unwrap();
        assert_eq!(m.tables[0], vec![0, 0, 0, 1]);
        assert!(m.certificate.absorbs && m.certificate.swaps);
    }

    #[test]
    fn z2_meet_is_first_projection() {
        let m = universal_meet(&catalog::z2_minority(), &Caps::default()).unwrap();
        assert_eq!(m.tables[0], vec![0, 0, 1, 1]);
    }

    #[test]
    fn projections_have_no_witness() {
        assert!(matches!(
            universal_meet(&catalog::projections(), &Caps::default()),
            Err(Error::NoCyclicWitness(_))
        ));
    }
}
