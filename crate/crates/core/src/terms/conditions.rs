use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::free::free_algebra;
use super::operation::TermOperation;
use super::taylor::{is_majority, is_malcev};
use crate::algebra::{
    affine_checks, congruences, for_each_tuple, quotient, sg_of, subalgebra, FiniteAlgebra, Partition,
};
use crate::bitset::Subset;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::Tri;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub majority_condition: bool,
    pub minority_condition: bool,
    /// t(x, t(x,y,y), t(x,y,y)) = t(x,y,y).
    pub majority_identity: bool,
    /// t(t(x,y,y), y, y) = t(x,y,y).
    pub minority_identity: bool,
    pub majority_quotients: usize,
    pub affine_quotients: usize,
    /// First quotient on which t misbehaves: (a, b, congruence of Sg(a,b)).
    pub majority_failure: Option<(usize, usize, Partition)>,
    pub minority_failure: Option<(usize, usize, Partition)>,
}

/// A two-element algebra term equivalent to the majority algebra: every
/// basic operation is monotone and self-dual, and majority is a term.
fn is_majority_algebra(q: &FiniteAlgebra, caps: &Caps) -> Result<bool> {
    if q.size != 2 {
        return Ok(false);
    }
    for o in &q.ops {
        let mut ok = true;
        for_each_tuple(2, o.arity, |t| {
            let idx = crate::algebra::tuple_index(2, t);
            let flipped: Vec<usize> = t.iter().map(|x| 1 - x).collect();
            ok &= o.table[crate::algebra::tuple_index(2, &flipped)] == 1 - o.table[idx];
            for i in 0..t.len() {
                if t[i] == 0 {
                    let mut up = t.to_vec();
                    up[i] = 1;
                    ok &= o.table[crate::algebra::tuple_index(2, &up)] >= o.table[idx];
                }
            }
        });
        if !ok {
            return Ok(false);
        }
    }
    let f3 = free_algebra(q, 3, caps.closure);
    if !f3.complete {
        return Err(Error::cap(format!("F(3) of {}", q.name), caps.closure));
    }
    Ok((0..f3.len()).any(|i| is_majority(&f3.operation(i))))
}

fn restrict(t: &TermOperation, q_alg: &FiniteAlgebra, elems: &[usize], theta: &Partition) -> TermOperation {
    let reps = theta.representatives();
    let m = q_alg.size;
    let mut table = Vec::with_capacity(m * m * m);
    for_each_tuple(m, 3, |idx| {
        let args: Vec<usize> = idx.iter().map(|&i| elems[reps[i]]).collect();
        let v = t.value(&args);
        let local = elems.iter().position(|&e| e == v).expect("subuniverse is closed");
        table.push(theta.block_of(local) as u8);
    });
    TermOperation {
        arity: 3,
        size: m,
        table,
        tree: None,
    }
}

/// Majority and minority conditions for a ternary term operation `t`.
pub fn condition_checks(alg: &FiniteAlgebra, t: &TermOperation, caps: &Caps) -> Result<ConditionReport> {
    if t.arity != 3 || t.size != alg.size {
        return Err(Error::ArityMismatch(format!(
            "expected a ternary operation on {} elements",
            alg.size
        )));
    }
    let n = alg.size;
    let mut majority_identity = true;
    let mut minority_identity = true;
    for_each_tuple(n, 2, |xy| {
        let (x, y) = (xy[0], xy[1]);
        let txyy = t.value(&[x, y, y]);
        majority_identity &= t.value(&[x, txyy, txyy]) == txyy;
        minority_identity &= t.value(&[txyy, y, y]) == txyy;
    });
    let mut report = ConditionReport {
        majority_condition: majority_identity,
        minority_condition: minority_identity,
        majority_identity,
        minority_identity,
        majority_quotients: 0,
        affine_quotients: 0,
        majority_failure: None,
        minority_failure: None,
    };
    let mut seen: HashSet<Subset> = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            let s = sg_of(alg, &[a, b]);
            if !seen.insert(s.clone()) {
                continue;
            }
            let elems = s.to_vec();
            let sub = subalgebra(alg, &s)?;
            let cons = congruences(&sub, caps.congruence_size)?;
            for theta in cons.all.iter().filter(|p| !p.is_indiscrete()) {
                let q = quotient(&sub, theta)?;
                let tq = restrict(t, &q, &elems, theta);
                if is_majority_algebra(&q, caps)? {
                    report.majority_quotients += 1;
                    if !is_majority(&tq) && report.majority_failure.is_none() {
                        report.majority_condition = false;
                        report.majority_failure = Some((a, b, theta.clone()));
                    }
                }
                let aff = affine_checks(&q, None, caps)?;
                if aff.is_affine == Tri::Yes {
                    report.affine_quotients += 1;
                    if !is_malcev(&tq) && report.minority_failure.is_none() {
                        report.minority_condition = false;
                        report.minority_failure = Some((a, b, theta.clone()));
                    }
                }
            }
        }
    }
    Ok(report)
}
