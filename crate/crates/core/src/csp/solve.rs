use std::collections::BTreeMap;

use super::instance::Instance;
use crate::error::{Error, Result};

/// Backtracking over variables in index order. `visit` returns false to stop.
fn backtrack(inst: &Instance, limit: u128, mut visit: impl FnMut(&[usize]) -> bool) -> Result<()> {
    let space = inst.search_space();
    if space > limit {
        return Err(Error::LimitExceeded { space, limit });
    }
    let n = inst.len();
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in inst.constraints.iter().enumerate() {
        due[*c.scope.last().expect("nonempty scope")].push(i);
    }
    let sizes: Vec<usize> = (0..n).map(|v| inst.domain_size(v)).collect();
    let mut assignment = vec![0usize; n];
    let mut buf = Vec::new();
    let ok = |assignment: &[usize], v: usize, buf: &mut Vec<usize>| {
        due[v].iter().all(|&i| {
            let c = &inst.constraints[i];
            buf.clear();
            buf.extend(c.scope.iter().map(|&w| assignment[w]));
            c.tuples.contains(buf.as_slice())
        })
    };
    if n == 0 {
        visit(&assignment);
        return Ok(());
    }
    let mut v = 0usize;
    let mut fresh = true;
    loop {
        if fresh {
            assignment[v] = 0;
        } else {
            assignment[v] += 1;
        }
        if assignment[v] >= sizes[v] {
            if v == 0 {
                return Ok(());
            }
            v -= 1;
            fresh = false;
            continue;
        }
        if !ok(&assignment, v, &mut buf) {
            fresh = false;
            continue;
        }
        if v + 1 == n {
            if !visit(&assignment) {
                return Ok(());
            }
            fresh = false;
        } else {
            v += 1;
            fresh = true;
        }
    }
}

/// All solutions in lexicographic order.
pub fn brute_force_solve(inst: &Instance, limit: u128) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    backtrack(inst, limit, |s| {
        out.push(s.to_vec());
        true
    })?;
    Ok(out)
}

/// The lexicographically first solution.
pub fn first_solution(inst: &Instance, limit: u128) -> Result<Option<Vec<usize>>> {
    let mut out = None;
    backtrack(inst, limit, |s| {
        out = Some(s.to_vec());
        false
    })?;
    Ok(out)
}

pub fn is_solvable(inst: &Instance, limit: u128) -> Result<bool> {
    Ok(first_solution(inst, limit)?.is_some())
}

/// For every variable and every element of its domain, the lexicographically
/// first solution passing through that element, if any.
pub fn solutions_through_points(inst: &Instance, limit: u128) -> Result<BTreeMap<(usize, usize), Vec<usize>>> {
    let mut out = BTreeMap::new();
    backtrack(inst, limit, |s| {
        for (v, &x) in s.iter().enumerate() {
            out.entry((v, x)).or_insert_with(|| s.to_vec());
        }
        true
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::csp::{Constraint, Variable};

    fn xy(constraints: Vec<Constraint>) -> Instance {
        Instance::new(
            "t",
            vec![catalog::z2_minority()],
            vec![Variable::new("x", 0), Variable::new("y", 0)],
            constraints,
        )
        .unwrap()
    }

    #[test]
    fn equality_relation() {
        let inst = xy(vec![Constraint::new(vec![0, 1], [vec![0, 0], vec![1, 1]])]);
        assert_eq!(brute_force_solve(&inst, 100).unwrap(), vec![vec![0, 0], vec![1, 1]]);
        let pinned = xy(vec![
            Constraint::new(vec![0, 1], [vec![0, 0], vec![1, 1]]),
            Constraint::new(vec![0], [vec![0]]),
        ]);
        assert_eq!(brute_force_solve(&pinned, 100).unwrap(), vec![vec![0, 0]]);
    }

    #[test]
    fn merged_scopes_can_be_unsat() {
        let inst = xy(vec![
            Constraint::new(vec![0, 1], [vec![0, 1]]),
            Constraint::new(vec![0, 1], [vec![1, 0]]),
        ]);
        assert!(brute_force_solve(&inst, 100).unwrap().is_empty());
        assert!(!is_solvable(&inst, 100).unwrap());
    }

    #[test]
    fn limit_is_enforced() {
        let inst = xy(Vec::new());
        assert_eq!(brute_force_solve(&inst, 100).unwrap().len(), 4);
        assert!(matches!(
            brute_force_solve(&inst, 3),
            Err(Error::LimitExceeded { space: 4, limit: 3 })
        ));
    }
}
