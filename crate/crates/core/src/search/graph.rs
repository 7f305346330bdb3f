use std::sync::Arc;

use rayon::prelude::*;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::matchings::{Family, Universe};
use crate::predicates::Predicate;

/// Default limit on compatibility-graph vertices (about 50 MB of adjacency).
pub const DEFAULT_GRAPH_CAP: usize = 20_000;

/// A simple undirected graph as adjacency bit rows. Every vertex is adjacent
/// to itself.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<BitSet>,
}

impl Graph {
    /// `n` vertices, no edges besides the loops.
    pub fn new(n: usize) -> Self {
        Graph {
            rows: (0..n).map(|v| BitSet::from_indices(n, [v])).collect(),
        }
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            rows: vec![BitSet::full(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.rows[a].insert(b);
        self.rows[b].insert(a);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    /// Neighbours other than `v` itself.
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count() - 1
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(a, &u)| vertices[a + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    /// The graph with vertex `order[i]` renamed to `i`.
    pub(crate) fn permuted(&self, order: &[usize]) -> Graph {
        let n = self.len();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let rows = order
            .iter()
            .map(|&v| BitSet::from_indices(n, self.rows[v].iter().map(|u| pos[u])))
            .collect();
        Graph { rows }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.len())
            .finish_non_exhaustive()
    }
}

/// The compatibility graph of a universe under a pairwise predicate: its
/// cliques are exactly the families satisfying the predicate.
#[derive(Debug, Clone)]
pub struct CompatGraph {
    universe: Arc<Universe>,
    predicate: Predicate,
    graph: Graph,
}

impl CompatGraph {
    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn predicate(&self) -> Predicate {
        self.predicate
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The family whose members are the given vertices.
    pub fn family(&self, vertices: &[usize]) -> Family {
        Family::from_indices(&self.universe, vertices.iter().copied()).expect("vertices index the universe")
    }

    /// Whether a family of this universe is a clique.
    pub fn is_clique(&self, family: &Family) -> bool {
        let v: Vec<usize> = family.indices().collect();
        self.graph.is_clique(&v)
    }
}

/// Adjacency bytes for `n` vertices.
fn predicted_bytes(n: usize) -> u128 {
    n as u128 * n.div_ceil(64) as u128 * 8
}

/// Builds the graph on `universe` joining every predicate-compatible pair.
/// Rows are computed in parallel on `workers` threads (0 = all cores).
pub fn build_compat_graph(
    universe: &Arc<Universe>,
    predicate: Predicate,
    cap: usize,
    workers: usize,
) -> Result<CompatGraph> {
    let n = universe.len();
    if n > cap {
        return Err(Error::GraphTooLarge {
            vertices: n,
            cap,
            bytes: predicted_bytes(n),
        });
    }
    let items = universe.items();
    let upper = || -> Vec<Vec<usize>> {
        (0..n)
            .into_par_iter()
            .map(|a| {
                ((a + 1)..n)
                    .filter(|&b| predicate.holds(&items[a], &items[b]))
                    .collect()
            })
            .collect()
    };
    let upper = with_workers(workers, upper)?;
    let mut graph = Graph::new(n);
    for (a, row) in upper.into_iter().enumerate() {
        for b in row {
            graph.add_edge(a, b);
        }
    }
    Ok(CompatGraph {
        universe: Arc::clone(universe),
        predicate,
        graph,
    })
}

/// Runs `f` on a pool of `workers` threads, or on the global pool when `workers` is 0.
pub(crate) fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchings::PartStructure;

    fn uni(s: &[usize], r: usize) -> Arc<Universe> {
        Arc::new(Universe::enumerate(&PartStructure::new(s.to_vec()).unwrap(), r, 10_000).unwrap())
    }

    #[test]
    fn edge_sharing_graph_on_k33() {
        let u = uni(&[3, 3], 2);
        let g = build_compat_graph(&u, Predicate::intersecting(1), DEFAULT_GRAPH_CAP, 2).unwrap();
        assert_eq!(g.graph().len(), 18);
        for a in 0..18 {
            let expected = (0..18)
                .filter(|&b| b != a && u.get(a).edges().iter().any(|e| u.get(b).edges().contains(e)))
                .count();
            assert_eq!(g.graph().degree(a), expected);
            // each 2-matching shares an edge with 3 others through each of its 2 edges
            assert_eq!(expected, 6);
        }
    }

    #[test]
    fn permutations_of_three() {
        let u = uni(&[3, 3], 3);
        let g = build_compat_graph(&u, Predicate::intersecting(1), DEFAULT_GRAPH_CAP, 1).unwrap();
        let perm = |m: &crate::matchings::Matching| -> Vec<u32> { m.edges().iter().map(|e| e.coord(1)).collect() };
        for a in 0..6 {
            for b in 0..6 {
                let agree = perm(u.get(a)).iter().zip(perm(u.get(b))).any(|(x, y)| *x == y);
                assert_eq!(g.graph().adjacent(a, b), agree);
            }
        }
    }

    #[test]
    fn singleton_and_cap() {
        let u = uni(&[1, 1], 1);
        let g = build_compat_graph(&u, Predicate::intersecting(1), 10, 0).unwrap();
        assert_eq!(g.graph().len(), 1);
        let big = uni(&[3, 3, 3], 2);
        match build_compat_graph(&big, Predicate::intersecting(1), 100, 0) {
            Err(Error::GraphTooLarge { vertices, bytes, .. }) => {
                assert_eq!(vertices, 108);
                assert_eq!(bytes, 108 * 2 * 8);
            }
            other => panic!("expected a cap error, got {other:?}"),
        }
    }

    #[test]
    fn weak_graphs_equal_plain_for_two_parts() {
        let u = uni(&[4, 4], 4);
        for t in 1..=2 {
            let plain = build_compat_graph(&u, Predicate::intersecting(t), DEFAULT_GRAPH_CAP, 0).unwrap();
            let weak = build_compat_graph(&u, Predicate::weakly_intersecting(t), DEFAULT_GRAPH_CAP, 0).unwrap();
            assert_eq!(plain.graph(), weak.graph());
            let plain = build_compat_graph(&u, Predicate::set_intersecting(t), DEFAULT_GRAPH_CAP, 0).unwrap();
            let weak = build_compat_graph(&u, Predicate::weakly_set_intersecting(t), DEFAULT_GRAPH_CAP, 0).unwrap();
            assert_eq!(plain.graph(), weak.graph());
        }
    }
}
