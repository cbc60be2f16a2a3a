//! The quantum Bruhat graph `D(M)`: an edge `lambda -> mu` for every positive
//! entry `M[mu][lambda]`.

use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::C1Matrix;
use crate::partitions::OddPartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub target: usize,
    /// The edge lowers the weight, i.e. comes from a `q` term.
    pub quantum: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumBruhatGraph {
    vertices: Vec<OddPartition>,
    edges: Vec<Vec<Edge>>,
}

impl QuantumBruhatGraph {
    pub fn from_edges(vertices: Vec<OddPartition>, edges: Vec<Vec<Edge>>) -> Self {
        assert_eq!(vertices.len(), edges.len());
        QuantumBruhatGraph { vertices, edges }
    }

    pub fn vertices(&self) -> &[OddPartition] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.edges[v]
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges[v].iter().map(|e| e.target)
    }

    pub fn position(&self, lambda: &OddPartition) -> Option<usize> {
        self.vertices.iter().position(|p| p == lambda)
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_neighbors(from).any(|t| t == to)
    }
}

pub fn build_graph(c1: &C1Matrix) -> QuantumBruhatGraph {
    let edges = (0..c1.size())
        .map(|j| {
            let w = c1.basis[j].weight();
            c1.out_neighbors(j)
                .into_iter()
                .map(|i| Edge {
                    target: i,
                    quantum: c1.basis[i].weight() != w + 1,
                })
                .collect()
        })
        .collect();
    QuantumBruhatGraph {
        vertices: c1.basis.clone(),
        edges,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub strongly_connected: bool,
    /// Strongly connected components as vertex index lists.
    pub components: Vec<Vec<usize>>,
}

/// Tarjan's algorithm with an explicit stack.
pub fn strongly_connected_components(graph: &QuantumBruhatGraph) -> Vec<Vec<usize>> {
    let n = graph.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next edge to inspect)
        let mut work = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut next)) = work.last_mut() {
            if let Some(edge) = graph.edges[v].get(*next) {
                *next += 1;
                let w = edge.target;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }
    components
}

/// A graph with one vertex counts as strongly connected; an empty graph does too.
pub fn strongly_connected(graph: &QuantumBruhatGraph) -> Connectivity {
    let components = strongly_connected_components(graph);
    Connectivity {
        strongly_connected: components.len() <= 1,
        components,
    }
}

fn bfs_levels(graph: &QuantumBruhatGraph, root: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; graph.vertex_count()];
    level[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for v in graph.out_neighbors(u) {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Index of imprimitivity (gcd of cycle lengths) using BFS levels from `root`:
/// the gcd over all edges `(u, v)` of `|level(u) + 1 - level(v)|`.
pub fn period_from(graph: &QuantumBruhatGraph, root: usize) -> Result<usize> {
    let conn = strongly_connected(graph);
    if !conn.strongly_connected || graph.vertex_count() == 0 {
        return Err(Error::NotStronglyConnected {
            components: conn.components.len(),
        });
    }
    let level = bfs_levels(graph, root);
    let mut g = 0;
    for u in 0..graph.vertex_count() {
        let lu = level[u].expect("strongly connected") as i64;
        for v in graph.out_neighbors(u) {
            let lv = level[v].expect("strongly connected") as i64;
            g = gcd(g, (lu + 1 - lv).unsigned_abs() as usize);
        }
    }
    // 0 when the graph has no cycle at all.
    Ok(g)
}

pub fn period(graph: &QuantumBruhatGraph) -> Result<usize> {
    period_from(graph, 0)
}

/// Writes the graph in DOT. Quantum edges are dashed.
pub fn export_dot<W: Write>(graph: &QuantumBruhatGraph, mut out: W) -> Result<()> {
    writeln!(out, "digraph quantum_bruhat {{")?;
    writeln!(out, "  node [shape=box];")?;
    for (i, v) in graph.vertices.iter().enumerate() {
        writeln!(out, "  v{i} [label=\"({v})\"];")?;
    }
    for (u, edges) in graph.edges.iter().enumerate() {
        for e in edges {
            if e.quantum {
                writeln!(out, "  v{u} -> v{} [style=dashed, label=\"q\"];", e.target)?;
            } else {
                writeln!(out, "  v{u} -> v{};", e.target)?;
            }
        }
    }
    writeln!(out, "}}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::WindowPolicy;
    use crate::operator::build_c1_matrix;
    use crate::partitions::Shape;

    fn shape(k: i64, n: i64) -> Shape {
        Shape::new(k, n).unwrap()
    }

    fn graph_for(k: i64, n: i64) -> QuantumBruhatGraph {
        build_graph(&build_c1_matrix(shape(k, n), WindowPolicy::Standard))
    }

    fn neighbors(g: &QuantumBruhatGraph, parts: &[i32]) -> Vec<String> {
        let s = shape(2, 2);
        let v = g.position(&OddPartition::new(&s, parts.to_vec()).unwrap()).unwrap();
        let mut out: Vec<String> = g.out_neighbors(v).map(|t| g.vertices()[t].to_string()).collect();
        out.sort();
        out
    }

    #[test]
    fn ig25_neighbourhoods() {
        let g = graph_for(2, 2);
        assert_eq!(neighbors(&g, &[1, 0]), vec!["2,0", "3,-1"]);
        assert_eq!(neighbors(&g, &[3, 2]), vec!["2,0", "3,-1"]);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 13);
    }

    #[test]
    fn projective_space_is_a_cycle() {
        let g = graph_for(1, 2);
        for v in 0..5 {
            let outs: Vec<usize> = g.out_neighbors(v).collect();
            assert_eq!(outs, vec![(v + 1) % 5]);
        }
        assert_eq!(period(&g).unwrap(), 5);
    }

    #[test]
    fn edges_match_matrix_pattern() {
        for n in 1..=5 {
            for k in 1..=n {
                let m = build_c1_matrix(shape(k, n), WindowPolicy::Standard);
                let g = build_graph(&m);
                for i in 0..m.size() {
                    for j in 0..m.size() {
                        assert_eq!(g.has_edge(j, i), m.get(i, j) > 0);
                    }
                }
            }
        }
    }

    #[test]
    fn connectivity_and_period() {
        assert!(strongly_connected(&graph_for(2, 2)).strongly_connected);
        assert!(strongly_connected(&graph_for(3, 4)).strongly_connected);
        assert_eq!(period(&graph_for(2, 2)).unwrap(), 4);
        assert_eq!(period(&graph_for(1, 1)).unwrap(), 3);
        assert_eq!(period(&graph_for(4, 5)).unwrap(), 8);
    }

    #[test]
    fn period_independent_of_root() {
        for (k, n) in [(2, 3), (3, 4), (2, 5)] {
            let g = graph_for(k, n);
            let p0 = period(&g).unwrap();
            for root in 0..g.vertex_count() {
                assert_eq!(period_from(&g, root).unwrap(), p0);
            }
        }
    }

    #[test]
    fn degenerate_graphs() {
        let s = shape(1, 1);
        let single = QuantumBruhatGraph::from_edges(vec![OddPartition::zero(&s)], vec![vec![]]);
        assert!(strongly_connected(&single).strongly_connected);
        let empty = QuantumBruhatGraph::from_edges(vec![], vec![]);
        assert!(strongly_connected(&empty).strongly_connected);
        assert!(period(&empty).is_err());
    }

    #[test]
    fn reducible_graph_is_rejected() {
        let s = shape(1, 2);
        let v: Vec<OddPartition> = (0..3)
            .map(|p| OddPartition::new(&s, vec![p]).unwrap())
            .collect();
        let e = |t| Edge {
            target: t,
            quantum: false,
        };
        // 0 <-> 1, 1 -> 2, 2 has no way back.
        let g = QuantumBruhatGraph::from_edges(v, vec![vec![e(1)], vec![e(0), e(2)], vec![]]);
        let c = strongly_connected(&g);
        assert!(!c.strongly_connected);
        assert_eq!(c.components.len(), 2);
        assert!(matches!(
            period(&g),
            Err(Error::NotStronglyConnected { components: 2 })
        ));
    }

    #[test]
    fn dot_output() {
        let mut buf = Vec::new();
        export_dot(&graph_for(1, 1), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.matches("->").count(), 3);
        assert_eq!(text.matches("[label=").count(), 3);
        assert_eq!(text.matches("dashed").count(), 1);

        let mut buf = Vec::new();
        export_dot(&graph_for(2, 2), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.matches("->").count(), 13);
        assert!(text.contains("label=\"(3,-1)\""));

        let mut buf = Vec::new();
        export_dot(&QuantumBruhatGraph::from_edges(vec![], vec![]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("digraph") && text.trim_end().ends_with('}'));
    }

    #[test]
    fn dot_write_failure_propagates() {
        struct Broken;
        impl Write for Broken {
            fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
                Err(std::io::Error::other("disk full"))
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        assert!(matches!(export_dot(&graph_for(1, 1), Broken), Err(Error::Io(_))));
    }
}
