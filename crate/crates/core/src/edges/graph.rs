use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::{sg_of, subalgebra, tuple_index, FiniteAlgebra};
use crate::bitset::{BitMatrix, Subset};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::terms::{family_cyclic, free_algebra, least_prime_above, semilattice_towards, taylor_report};
use crate::Tri;

/// Which digraph to look at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    S,
    As,
    Sm,
    Asm,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [Flavor::S, Flavor::As, Flavor::Sm, Flavor::Asm];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::S => "s",
            Flavor::As => "as",
            Flavor::Sm => "sm",
            Flavor::Asm => "asm",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(Flavor::S),
            "as" => Ok(Flavor::As),
            "sm" => Ok(Flavor::Sm),
            "asm" => Ok(Flavor::Asm),
            _ => Err(Error::PreconditionViolated(format!("unknown edge flavor {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct EdgeConfig {
    /// Arities used in addition to the least prime above |Sg(a, b)|.
    pub extra_arities: Vec<usize>,
    pub caps: Caps,
}

/// Outcome of the edge test for one pair at one arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArityOutcome {
    Decided {
        as_edge: Tri,
        sm_edge: Tri,
        cyclic_terms: usize,
    },
    /// The subalgebra has no cyclic term operation of this arity.
    NoCyclic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairProvenance {
    pub a: usize,
    pub b: usize,
    /// Sg(a, b) in the original numbering.
    pub subuniverse: Vec<usize>,
    pub outcomes: Vec<(usize, ArityOutcome)>,
    pub as_edge: Tri,
    pub sm_edge: Tri,
    /// Decided arities that disagree with each other.
    pub discrepancy: bool,
}

/// The as- and sm-digraphs of an algebra. Loops are kept out of the
/// adjacency matrices; every element carries a loop of both colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeGraph {
    pub algebra: String,
    pub size: usize,
    pub as_adj: BitMatrix,
    pub sm_adj: BitMatrix,
    pub loops: Vec<usize>,
    /// Ordered pairs whose as or sm status could not be decided within caps.
    pub unknown: Vec<(usize, usize)>,
    pub provenance: Vec<PairProvenance>,
    pub discrepancies: Vec<(usize, usize)>,
}

impl EdgeGraph {
    /// A graph given directly by its edge lists.
    pub fn from_edges(
        algebra: impl Into<String>,
        size: usize,
        as_edges: impl IntoIterator<Item = (usize, usize)>,
        sm_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut as_adj = BitMatrix::new(size, size);
        let mut sm_adj = BitMatrix::new(size, size);
        for (a, b) in as_edges {
            if a != b {
                as_adj.set(a, b);
            }
        }
        for (a, b) in sm_edges {
            if a != b {
                sm_adj.set(a, b);
            }
        }
        EdgeGraph {
            algebra: algebra.into(),
            size,
            as_adj,
            sm_adj,
            loops: (0..size).collect(),
            unknown: Vec::new(),
            provenance: Vec::new(),
            discrepancies: Vec::new(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.unknown.is_empty()
    }

    pub fn s(&self) -> BitMatrix {
        self.as_adj.intersection(&self.sm_adj)
    }

    pub fn asm(&self) -> BitMatrix {
        self.as_adj.union(&self.sm_adj)
    }

    pub fn adjacency(&self, flavor: Flavor) -> BitMatrix {
        match flavor {
            Flavor::S => self.s(),
            Flavor::As => self.as_adj.clone(),
            Flavor::Sm => self.sm_adj.clone(),
            Flavor::Asm => self.asm(),
        }
    }

    /// Edge test including loops.
    pub fn has(&self, flavor: Flavor, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        match flavor {
            Flavor::S => self.has_s(a, b),
            Flavor::As => self.has_as(a, b),
            Flavor::Sm => self.has_sm(a, b),
            Flavor::Asm => self.has_asm(a, b),
        }
    }

    pub fn has_as(&self, a: usize, b: usize) -> bool {
        self.as_adj.get(a, b)
    }

    pub fn has_sm(&self, a: usize, b: usize) -> bool {
        self.sm_adj.get(a, b)
    }

    pub fn has_s(&self, a: usize, b: usize) -> bool {
        self.has_as(a, b) && self.has_sm(a, b)
    }

    pub fn has_asm(&self, a: usize, b: usize) -> bool {
        self.has_as(a, b) || self.has_sm(a, b)
    }

    /// Non-loop edges of a flavor, in lexicographic order.
    pub fn edges(&self, flavor: Flavor) -> Vec<(usize, usize)> {
        self.adjacency(flavor).pairs().collect()
    }

    /// Whether no `flavor` edge leaves `b`.
    pub fn is_closed(&self, flavor: Flavor, b: &Subset) -> bool {
        let adj = self.adjacency(flavor);
        b.iter().all(|x| adj.row(x).is_subset(b))
    }
}

/// Per-subuniverse data shared by every pair generating it.
struct Local {
    elems: Vec<usize>,
    sub: FiniteAlgebra,
    /// F(2) tables, or None if the closure hit its cap.
    f2: Option<Vec<Vec<u8>>>,
    /// Cyclic tables per arity and whether F(p) was complete.
    cyclic: BTreeMap<usize, (Vec<Vec<u8>>, bool)>,
    sg: HashMap<(usize, usize), Subset>,
}

impl Local {
    fn new(alg: &FiniteAlgebra, b: &Subset, cap: usize) -> Result<Self> {
        let sub = subalgebra(alg, b)?;
        let f = free_algebra(&sub, 2, cap);
        let f2 = f.complete.then_some(f.elements);
        Ok(Local {
            elems: b.to_vec(),
            sub,
            f2,
            cyclic: BTreeMap::new(),
            sg: HashMap::new(),
        })
    }

    fn local(&self, x: usize) -> usize {
        self.elems.binary_search(&x).expect("element of the subuniverse")
    }

    fn cyclic(&mut self, p: usize, cap: usize) -> Result<&(Vec<Vec<u8>>, bool)> {
        if !self.cyclic.contains_key(&p) {
            let (free, hits) = family_cyclic(&[&self.sub], p, cap, false)?;
            let tables = hits.into_iter().map(|i| free.elements[i].clone()).collect();
            self.cyclic.insert(p, (tables, free.complete));
        }
        Ok(&self.cyclic[&p])
    }

    /// Whether `target` lies in Sg(x, y), all in local numbering.
    fn in_sg(&mut self, x: usize, y: usize, target: usize) -> bool {
        let key = (x.min(y), x.max(y));
        let sub = &self.sub;
        self.sg
            .entry(key)
            .or_insert_with(|| sg_of(sub, &[key.0, key.1]))
            .contains(target)
    }
}

fn evaluate_pair(local: &mut Local, a: usize, b: usize, p: usize, cap: usize) -> Result<ArityOutcome> {
    let n = local.sub.size;
    let (la, lb) = (local.local(a), local.local(b));
    let (tables, complete) = local.cyclic(p, cap)?.clone();
    if tables.is_empty() {
        return Ok(if complete {
            ArityOutcome::NoCyclic
        } else {
            ArityOutcome::Decided {
                as_edge: Tri::Unknown,
                sm_edge: Tri::Unknown,
                cyclic_terms: 0,
            }
        });
    }
    let open = if complete { Tri::Yes } else { Tri::Unknown };
    let mut args = vec![la; p];
    args[p - 1] = lb;
    let mut as_holds = true;
    for c in &tables {
        let v = c[tuple_index(n, &args)] as usize;
        if !local.in_sg(la, v, lb) {
            as_holds = false;
            break;
        }
    }
    let as_edge = if as_holds { open } else { Tri::No };
    let sm_edge = match local.f2.clone() {
        None => Tri::Unknown,
        Some(f2) => {
            let mut values = Vec::new();
            for c in &tables {
                for k in 1..=p / 2 {
                    let t: Vec<usize> = (0..p).map(|i| if i < k { la } else { lb }).collect();
                    values.push(c[tuple_index(n, &t)] as usize);
                }
            }
            values.sort_unstable();
            values.dedup();
            let mut holds = true;
            'outer: for t in &f2 {
                for &v in &values {
                    let w = t[lb * n + v] as usize;
                    if !local.in_sg(la, w, lb) {
                        holds = false;
                        break 'outer;
                    }
                }
            }
            if holds {
                open
            } else {
                Tri::No
            }
        }
    };
    Ok(ArityOutcome::Decided {
        as_edge,
        sm_edge,
        cyclic_terms: tables.len(),
    })
}

/// The as- and sm-digraphs, computed pair by pair inside Sg(a, b).
pub fn compute_edges(alg: &FiniteAlgebra, config: &EdgeConfig) -> Result<EdgeGraph> {
    if let Some(&p) = config.extra_arities.iter().find(|&&p| p < 2) {
        return Err(Error::PreconditionViolated(format!("cyclic arity {p} is below 2")));
    }
    if taylor_report(alg, &config.caps).has_taylor == Tri::No {
        return Err(Error::PreconditionViolated(format!("{} has no Taylor term", alg.name)));
    }
    let n = alg.size;
    let cap = config.caps.closure;
    let mut locals: HashMap<Subset, Local> = HashMap::new();
    let mut graph = EdgeGraph::from_edges(alg.name.clone(), n, [], []);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let sg = sg_of(alg, &[a, b]);
            if !locals.contains_key(&sg) {
                locals.insert(sg.clone(), Local::new(alg, &sg, cap)?);
            }
            let local = locals.get_mut(&sg).expect("inserted above");
            let mut arities = vec![least_prime_above(local.elems.len())];
            arities.extend(config.extra_arities.iter().copied());
            arities.sort_unstable();
            arities.dedup();
            let mut outcomes = Vec::new();
            let (mut as_edge, mut sm_edge) = (Tri::Yes, Tri::Yes);
            let mut decided = Vec::new();
            for &p in &arities {
                let o = evaluate_pair(local, a, b, p, cap)?;
                if let ArityOutcome::Decided {
                    as_edge: x, sm_edge: y, ..
                } = o
                {
                    as_edge = as_edge.and(x);
                    sm_edge = sm_edge.and(y);
                    decided.push((x, y));
                }
                outcomes.push((p, o));
            }
            if decided.is_empty() {
                as_edge = Tri::Unknown;
                sm_edge = Tri::Unknown;
            }
            let definite: Vec<_> = decided
                .iter()
                .filter(|(x, y)| *x != Tri::Unknown && *y != Tri::Unknown)
                .collect();
            let discrepancy = definite.windows(2).any(|w| w[0] != w[1]);
            if as_edge == Tri::Yes {
                graph.as_adj.set(a, b);
            }
            if sm_edge == Tri::Yes {
                graph.sm_adj.set(a, b);
            }
            if as_edge == Tri::Unknown || sm_edge == Tri::Unknown {
                graph.unknown.push((a, b));
            }
            if discrepancy {
                graph.discrepancies.push((a, b));
            }
            if as_edge != Tri::Unknown && sm_edge != Tri::Unknown {
                let s = as_edge.is_yes() && sm_edge.is_yes();
                let semilattice = semilattice_towards(alg, a, b, cap)?;
                if s != semilattice {
                    return Err(Error::SEdgeMismatch {
                        a,
                        b,
                        detail: if s {
                            "no binary term acts as a semilattice absorbing into the target".into()
                        } else {
                            "a semilattice term exists but the pair carries no s-edge".into()
                        },
                    });
                }
            }
            graph.provenance.push(PairProvenance {
                a,
                b,
                subuniverse: local.elems.clone(),
                outcomes,
                as_edge,
                sm_edge,
                discrepancy,
            });
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn edges(alg: &FiniteAlgebra) -> EdgeGraph {
        compute_edges(alg, &EdgeConfig::default()).unwrap()
    }

    #[test]
    fn two_element_seeds() {
        let z = edges(&catalog::z2_minority());
        assert_eq!(z.edges(Flavor::As), vec![(0, 1), (1, 0)]);
        assert!(z.edges(Flavor::Sm).is_empty());
        let m = edges(&catalog::majority());
        assert_eq!(m.edges(Flavor::Sm), vec![(0, 1), (1, 0)]);
        assert!(m.edges(Flavor::As).is_empty());
        let s = edges(&catalog::semilattice());
        assert_eq!(s.edges(Flavor::S), vec![(1, 0)]);
        assert_eq!(s.edges(Flavor::Asm), vec![(1, 0)]);
    }

    #[test]
    fn a1_edges() {
        let g = edges(&catalog::a1());
        assert!(g.is_exact());
        assert_eq!(g.edges(Flavor::S), vec![(1, 0), (2, 0), (3, 0)]);
        let mut expected_as = vec![(1, 0), (2, 0), (3, 0)];
        for i in 1..4 {
            for j in 1..4 {
                if i != j {
                    expected_as.push((i, j));
                }
            }
        }
        expected_as.sort();
        assert_eq!(g.edges(Flavor::As), expected_as);
    }

    #[test]
    fn extra_arities_without_cyclic_terms_are_ignored() {
        let cfg = EdgeConfig {
            extra_arities: vec![2],
            ..EdgeConfig::default()
        };
        let g = compute_edges(&catalog::z2_minority(), &cfg).unwrap();
        assert_eq!(g.edges(Flavor::As), vec![(0, 1), (1, 0)]);
        assert!(g.edges(Flavor::Sm).is_empty());
        assert!(matches!(g.provenance[0].outcomes[0], (2, ArityOutcome::NoCyclic)));
    }

    #[test]
    fn projections_are_rejected() {
        assert!(matches!(
            compute_edges(&catalog::projections(), &EdgeConfig::default()),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
