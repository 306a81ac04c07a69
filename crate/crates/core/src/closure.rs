//! Semi-naive closure of a seed set under finitely many operations.
//!
//! Each round applies every operation only to argument tuples that contain at
//! least one element discovered in the previous round.

use std::collections::HashMap;
use std::hash::Hash;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Seed(usize),
    Op { op: usize, args: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct Closed<T> {
    /// Elements in discovery order, seeds first.
    pub elems: Vec<T>,
    pub origins: Vec<Origin>,
    /// True when the result is closed. False if the cap or the stop hook fired.
    pub complete: bool,
    /// True when the stop hook fired.
    pub stopped: bool,
}

impl<T: Eq + Hash> Closed<T> {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

/// Calls `f` on every tuple in `[0, cur)^arity` having at least one entry in
/// `[old, cur)`. Tuples are grouped by the position of their first new entry.
/// Returns false if `f` asked to stop.
pub fn for_each_tuple_with_new(arity: usize, old: usize, cur: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if old >= cur || arity == 0 {
        return true;
    }
    let mut lo = vec![0usize; arity];
    let mut hi = vec![0usize; arity];
    let mut t = vec![0usize; arity];
    for j in 0..arity {
        if j > 0 && old == 0 {
            break;
        }
        for p in 0..arity {
            let (l, h) = match p.cmp(&j) {
                std::cmp::Ordering::Less => (0, old),
                std::cmp::Ordering::Equal => (old, cur),
                std::cmp::Ordering::Greater => (0, cur),
            };
            lo[p] = l;
            hi[p] = h;
            t[p] = l;
        }
        'odometer: loop {
            if !f(&t) {
                return false;
            }
            let mut p = arity;
            loop {
                if p == 0 {
                    break 'odometer;
                }
                p -= 1;
                t[p] += 1;
                if t[p] < hi[p] {
                    continue 'odometer;
                }
                t[p] = lo[p];
            }
        }
    }
    true
}

/// Closes `seeds` under operations of the given arities. `apply(op, args)`
/// evaluates operation `op`. `stop` is called on each new element and may end
/// the computation early.
pub fn close<T, F, S>(
    seeds: impl IntoIterator<Item = T>,
    arities: &[usize],
    cap: usize,
    mut apply: F,
    mut stop: S,
) -> Closed<T>
where
    T: Clone + Eq + Hash,
    F: FnMut(usize, &[&T]) -> T,
    S: FnMut(&T) -> bool,
{
    let mut elems: Vec<T> = Vec::new();
    let mut origins = Vec::new();
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut stopped = false;
    let mut capped = false;
    for (i, s) in seeds.into_iter().enumerate() {
        if index.contains_key(&s) {
            continue;
        }
        if elems.len() >= cap {
            capped = true;
            break;
        }
        index.insert(s.clone(), elems.len());
        if stop(&s) {
            stopped = true;
        }
        elems.push(s);
        origins.push(Origin::Seed(i));
        if stopped {
            break;
        }
    }
    let mut old = 0;
    while !stopped && !capped && old < elems.len() {
        let cur = elems.len();
        let mut pending: Vec<T> = Vec::new();
        let mut pending_origins = Vec::new();
        for (op, &arity) in arities.iter().enumerate() {
            let ok = for_each_tuple_with_new(arity, old, cur, |tuple| {
                let args: Vec<&T> = tuple.iter().map(|&i| &elems[i]).collect();
                let v = apply(op, &args);
                if index.contains_key(&v) {
                    return true;
                }
                if cur + pending.len() >= cap {
                    capped = true;
                    return false;
                }
                index.insert(v.clone(), cur + pending.len());
                let halt = stop(&v);
                pending.push(v);
                pending_origins.push(Origin::Op {
                    op,
                    args: tuple.to_vec(),
                });
                if halt {
                    stopped = true;
                    return false;
                }
                true
            });
            if !ok {
                break;
            }
        }
        old = cur;
        elems.extend(pending);
        origins.extend(pending_origins);
    }
    Closed {
        elems,
        origins,
        complete: !stopped && !capped,
        stopped,
    }
}

/// Closure without an early-stop hook.
pub fn close_all<T, F>(seeds: impl IntoIterator<Item = T>, arities: &[usize], cap: usize, apply: F) -> Closed<T>
where
    T: Clone + Eq + Hash,
    F: FnMut(usize, &[&T]) -> T,
{
    close(seeds, arities, cap, apply, |_| false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_with_new_cover_exactly_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_tuple_with_new(3, 2, 4, |t| {
            assert!(seen.insert(t.to_vec()));
            true
        });
        assert_eq!(seen.len(), 64 - 8);
        assert!(seen.iter().all(|t| t.iter().any(|&x| x >= 2)));
    }

    #[test]
    fn closes_integers_mod_seven_under_addition() {
        let c = close_all([1u32], &[2], 100, |_, a| (a[0] + a[1]) % 7);
        assert!(c.complete);
        assert_eq!(c.len(), 7);
    }

    #[test]
    fn cap_marks_incomplete() {
        let c = close_all([1u32], &[2], 3, |_, a| (a[0] + a[1]) % 7);
        assert!(!c.complete);
        assert_eq!(c.len(), 3);
    }
}
