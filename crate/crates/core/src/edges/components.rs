use std::cmp::Reverse;
use std::collections::BinaryHeap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use super::graph::{EdgeGraph, Flavor};
use crate::algebra::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDecomposition {
    pub flavor: Flavor,
    /// Strong components, each ascending, numbered by least element.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Edges between distinct components, ascending.
    pub condensation: Vec<(usize, usize)>,
    /// Components in topological order, ties broken by component number.
    pub order: Vec<usize>,
    pub sinks: Vec<usize>,
    pub sources: Vec<usize>,
    /// Union of the sink components, ascending.
    pub x_min: Vec<usize>,
    pub weak_components: Vec<Vec<usize>>,
}

impl ComponentDecomposition {
    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components.len() <= 1
    }
}

pub fn component_analysis(edges: &EdgeGraph, flavor: Flavor) -> ComponentDecomposition {
    let n = edges.size;
    let adj = edges.adjacency(flavor);
    let mut g: DiGraph<usize, ()> = DiGraph::new();
    let nodes: Vec<_> = (0..n).map(|x| g.add_node(x)).collect();
    for (a, b) in adj.pairs() {
        g.add_edge(nodes[a], nodes[b], ());
    }
    let mut components: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|i| g[i]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    components.sort();
    let mut component_of = vec![0; n];
    for (i, c) in components.iter().enumerate() {
        for &x in c {
            component_of[x] = i;
        }
    }
    let mut condensation: Vec<(usize, usize)> = adj
        .pairs()
        .map(|(a, b)| (component_of[a], component_of[b]))
        .filter(|(x, y)| x != y)
        .collect();
    condensation.sort_unstable();
    condensation.dedup();
    let k = components.len();
    let mut out_deg = vec![0usize; k];
    let mut in_deg = vec![0usize; k];
    for &(x, y) in &condensation {
        out_deg[x] += 1;
        in_deg[y] += 1;
    }
    let sinks: Vec<usize> = (0..k).filter(|&c| out_deg[c] == 0).collect();
    let sources: Vec<usize> = (0..k).filter(|&c| in_deg[c] == 0).collect();
    let mut remaining = in_deg.clone();
    let mut heap: BinaryHeap<Reverse<usize>> = sources.iter().map(|&c| Reverse(c)).collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse(c)) = heap.pop() {
        order.push(c);
        for &(x, y) in &condensation {
            if x == c {
                remaining[y] -= 1;
                if remaining[y] == 0 {
                    heap.push(Reverse(y));
                }
            }
        }
    }
    let mut x_min: Vec<usize> = sinks.iter().flat_map(|&c| components[c].iter().copied()).collect();
    x_min.sort_unstable();
    let weak = Partition::generated_by(n, adj.pairs());
    ComponentDecomposition {
        flavor,
        components,
        component_of,
        condensation,
        order,
        sinks,
        sources,
        x_min,
        weak_components: weak.blocks(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::edges::{compute_edges, EdgeConfig};

    #[test]
    fn a1_components() {
        let g = compute_edges(&catalog::a1(), &EdgeConfig::default()).unwrap();
        let d = component_analysis(&g, Flavor::Asm);
        assert_eq!(d.components, vec![vec![0], vec![1, 2, 3]]);
        assert_eq!(d.sinks, vec![0]);
        assert_eq!(d.sources, vec![1]);
        assert_eq!(d.x_min, vec![0]);
        assert_eq!(d.order, vec![1, 0]);
        assert!(d.is_weakly_connected());
        assert_eq!(component_analysis(&g, Flavor::S).x_min, vec![0]);
    }

    #[test]
    fn edgeless_graph() {
        let g = EdgeGraph::from_edges("e", 3, [], []);
        let d = component_analysis(&g, Flavor::Asm);
        assert_eq!(d.sinks, vec![0, 1, 2]);
        assert_eq!(d.x_min, vec![0, 1, 2]);
        assert_eq!(d.weak_components.len(), 3);
    }
}
