//! Exact maximum clique by branch and bound on bit rows.
//!
//! The size is found first, with top-level branches explored in parallel
//! against a shared best-so-far. The witness is then the lexicographically
//! smallest maximum clique (by vertex index), found by a sequential search,
//! so it does not depend on the number of workers.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::graph::{with_workers, Graph};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_MAXIMA_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueOptions {
    /// Threads for the search (0 = all cores).
    pub workers: usize,
    pub node_budget: u64,
}

impl Default for CliqueOptions {
    fn default() -> Self {
        CliqueOptions {
            workers: 0,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Budget {
    limit: u64,
    used: AtomicU64,
    exceeded: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
        }
    }

    /// Counts one node; false once the budget is gone.
    #[inline]
    fn tick(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        !self.exceeded.load(Ordering::Relaxed)
    }

    fn check(&self) -> Result<()> {
        if self.exceeded.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded { budget: self.limit });
        }
        Ok(())
    }
}

/// Greedy sequential colouring of `p`: vertices in colour order with the
/// colour count reached so far.
fn colour_sort(g: &Graph, p: &BitSet, order: &mut Vec<(usize, usize)>) {
    order.clear();
    let mut uncoloured = p.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = q.first() {
            q.remove(v);
            q.difference_with(g.row(v));
            uncoloured.remove(v);
            order.push((v, colour));
        }
    }
}

/// Smallest-last order reversed: each vertex has at most `degeneracy`
/// neighbours before it. Ties go to the lowest index.
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("vertex left");
        removed[v] = true;
        seq.push(v);
        for u in g.row(v).iter() {
            if u != v && !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    seq.reverse();
    seq
}

fn expand(g: &Graph, size: usize, p: BitSet, best: &AtomicUsize, budget: &Budget) {
    if !budget.tick() {
        return;
    }
    let mut order = Vec::new();
    colour_sort(g, &p, &mut order);
    let mut p = p;
    for &(v, colour) in order.iter().rev() {
        if size + colour <= best.load(Ordering::Relaxed) {
            return;
        }
        let mut next = p.intersection(g.row(v));
        next.remove(v);
        if next.is_empty() {
            best.fetch_max(size + 1, Ordering::Relaxed);
        } else {
            expand(g, size + 1, next, best, budget);
        }
        p.remove(v);
    }
}

fn clique_number(g: &Graph, lower: usize, opts: &CliqueOptions) -> Result<usize> {
    let n = g.len();
    if n == 0 {
        return Ok(0);
    }
    let order = degeneracy_order(g);
    let h = g.permuted(&order);
    let best = AtomicUsize::new(lower.max(1));
    let budget = Budget::new(opts.node_budget);
    with_workers(opts.workers, || {
        (0..n).into_par_iter().for_each(|i| {
            if i < best.load(Ordering::Relaxed) {
                return;
            }
            // candidates: neighbours of i placed before it
            let mut p = h.row(i).clone();
            p.remove(i);
            for j in i..n {
                if p.contains(j) {
                    p.remove(j);
                }
            }
            if p.count() < best.load(Ordering::Relaxed) {
                return;
            }
            if p.is_empty() {
                best.fetch_max(1, Ordering::Relaxed);
            } else {
                expand(&h, 1, p, &best, &budget);
            }
        })
    })?;
    budget.check()?;
    Ok(best.into_inner())
}

/// Depth-first search over cliques in increasing vertex order. Calls `found`
/// on each clique of size `target`; stops when it returns false.
struct Lister<'a> {
    g: &'a Graph,
    target: usize,
    budget: &'a Budget,
}

impl Lister<'_> {
    fn bound(&self, p: &BitSet) -> usize {
        let mut order = Vec::new();
        colour_sort(self.g, p, &mut order);
        order.last().map_or(0, |&(_, c)| c)
    }

    fn walk(&self, r: &mut Vec<usize>, p: &BitSet, found: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if r.len() == self.target {
            return found(r);
        }
        if !self.budget.tick() {
            return false;
        }
        let need = self.target - r.len();
        if p.count() < need || self.bound(p) < need {
            return true;
        }
        for v in p.iter() {
            let mut next = p.intersection(self.g.row(v));
            // only later vertices, so each clique is reached once
            for u in next.clone().iter() {
                if u <= v {
                    next.remove(u);
                } else {
                    break;
                }
            }
            r.push(v);
            let go_on = self.walk(r, &next, found);
            r.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// The lexicographically smallest clique of size `target`.
fn first_clique(g: &Graph, target: usize, budget: &Budget) -> Option<Vec<usize>> {
    if target == 0 {
        return Some(Vec::new());
    }
    let lister = Lister { g, target, budget };
    let mut witness = None;
    lister.walk(&mut Vec::new(), &BitSet::full(g.len()), &mut |c| {
        witness = Some(c.to_vec());
        false
    });
    witness
}

/// Maximum clique size and the lexicographically smallest maximum clique.
pub fn max_clique(g: &Graph, opts: &CliqueOptions) -> Result<(usize, Vec<usize>)> {
    max_clique_seeded(g, 0, opts)
}

/// As [`max_clique`], with a clique size known to be attainable used as the
/// starting lower bound.
pub fn max_clique_seeded(g: &Graph, lower: usize, opts: &CliqueOptions) -> Result<(usize, Vec<usize>)> {
    if lower > g.len() {
        return Err(Error::Internal(format!(
            "lower bound {lower} exceeds the {} vertices",
            g.len()
        )));
    }
    let omega = clique_number(g, lower, opts)?;
    let budget = Budget::new(opts.node_budget);
    let witness = first_clique(g, omega, &budget);
    budget.check()?;
    let witness = witness.ok_or_else(|| {
        Error::Internal(format!("no clique of size {omega} found in the witness pass"))
    })?;
    Ok((omega, witness))
}

/// Every clique of exactly `size` vertices, in lexicographic order.
/// More than `cap` of them is an error carrying the count reached.
pub fn all_max_cliques(g: &Graph, size: usize, cap: usize, opts: &CliqueOptions) -> Result<Vec<Vec<usize>>> {
    let n = g.len();
    if size == 0 {
        return Ok(vec![Vec::new()]);
    }
    let budget = Budget::new(opts.node_budget);
    let count = AtomicUsize::new(0);
    let per_root: Vec<Vec<Vec<usize>>> = with_workers(opts.workers, || {
        (0..n)
            .into_par_iter()
            .map(|v| {
                let mut out = Vec::new();
                if count.load(Ordering::Relaxed) > cap {
                    return out;
                }
                let mut p = g.row(v).clone();
                for u in 0..=v {
                    p.remove(u);
                }
                let lister = Lister { g, target: size, budget: &budget };
                lister.walk(&mut vec![v], &p, &mut |c| {
                    out.push(c.to_vec());
                    count.fetch_add(1, Ordering::Relaxed) < cap
                });
                out
            })
            .collect()
    })?;
    let total = count.load(Ordering::Relaxed);
    if total > cap {
        return Err(Error::MaximaOverflow { cap, partial: total });
    }
    budget.check()?;
    Ok(per_root.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive oracle: every vertex subset, largest cliques.
    fn naive(g: &Graph) -> (usize, Vec<Vec<usize>>) {
        let n = g.len();
        let mut best = 0;
        let mut all = Vec::new();
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if !g.is_clique(&vs) {
                continue;
            }
            if vs.len() > best {
                best = vs.len();
                all.clear();
            }
            if vs.len() == best {
                all.push(vs);
            }
        }
        all.sort();
        (best, all)
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
        let mut g = Graph::new(n);
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_bool(density) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for round in 0..60 {
            let n = 1 + round % 14;
            let g = random_graph(&mut rng, n, [0.2, 0.5, 0.8][round % 3]);
            let (omega, all) = naive(&g);
            let opts = CliqueOptions::default();
            let (size, witness) = max_clique(&g, &opts).unwrap();
            assert_eq!(size, omega);
            assert_eq!(witness, all[0]);
            assert_eq!(all_max_cliques(&g, omega, 10_000, &opts).unwrap(), all);
        }
    }

    #[test]
    fn structured_graphs() {
        let opts = CliqueOptions::default();
        assert_eq!(max_clique(&Graph::complete(7), &opts).unwrap(), (7, (0..7).collect()));
        assert_eq!(all_max_cliques(&Graph::complete(7), 7, 5, &opts).unwrap().len(), 1);
        assert_eq!(max_clique(&Graph::new(5), &opts).unwrap(), (1, vec![0]));
        assert_eq!(max_clique(&Graph::new(0), &opts).unwrap().0, 0);
        // two disjoint triangles joined by one edge
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
        assert_eq!(max_clique(&g, &opts).unwrap(), (3, vec![0, 1, 2]));
        assert_eq!(all_max_cliques(&g, 3, 10, &opts).unwrap(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }

    #[test]
    fn caps_and_budget() {
        let opts = CliqueOptions::default();
        match all_max_cliques(&Graph::new(6), 1, 3, &opts) {
            Err(Error::MaximaOverflow { cap: 3, partial }) => assert!(partial > 3),
            other => panic!("expected overflow, got {other:?}"),
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 60, 0.7);
        let tight = CliqueOptions { workers: 1, node_budget: 5 };
        assert!(matches!(max_clique(&g, &tight), Err(Error::BudgetExceeded { budget: 5 })));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_graph(&mut rng, 40, 0.6);
            let one = CliqueOptions { workers: 1, ..Default::default() };
            let four = CliqueOptions { workers: 4, ..Default::default() };
            let (s1, w1) = max_clique(&g, &one).unwrap();
            assert_eq!(max_clique(&g, &four).unwrap(), (s1, w1));
            assert_eq!(
                all_max_cliques(&g, s1, 100_000, &one).unwrap(),
                all_max_cliques(&g, s1, 100_000, &four).unwrap()
            );
        }
    }

    #[test]
    fn seeded_lower_bound() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]);
        let opts = CliqueOptions::default();
        assert_eq!(max_clique_seeded(&g, 3, &opts).unwrap(), (3, vec![0, 1, 2]));
        assert!(max_clique_seeded(&g, 5, &opts).is_err());
    }
}
