//! Matchings of complete k-partite k-graphs and the projection operators on them.
//!
//! Vertices are 1-based within each part; part indices are 0-based.

mod family;
mod universe;

pub use family::{partition_by_reduction, restrict_family, Degeneracy, Family, FamilyDoc, FamilyForm};
pub use universe::{Universe, UniverseHeader, DEFAULT_UNIVERSE_CAP};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A vertex label inside one part, `1..=n_i`.
pub type Vertex = u32;

/// Part sizes `(n_1, ..., n_k)` of `K_{N_1,...,N_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartStructure {
    sizes: Vec<usize>,
}

impl PartStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return domain("a part structure needs at least one part");
        }
        if sizes.contains(&0) {
            return domain("every part must have at least one vertex");
        }
        if sizes.iter().any(|&n| n > Vertex::MAX as usize) {
            return domain("part size exceeds the vertex label range");
        }
        Ok(PartStructure { sizes })
    }

    /// `k` parts all of size `n`.
    pub fn uniform(k: usize, n: usize) -> Result<Self> {
        Self::new(vec![n; k])
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, part: usize) -> usize {
        self.sizes[part]
    }

    pub fn min_size(&self) -> usize {
        *self.sizes.iter().min().expect("non-empty")
    }

    /// The structure with part `j` removed.
    pub fn without(&self, j: usize) -> Result<Self> {
        self.check_part(j)?;
        if self.k() == 1 {
            return domain("cannot drop the only part");
        }
        let mut sizes = self.sizes.clone();
        sizes.remove(j);
        Self::new(sizes)
    }

    /// The two-part structure `(n_i, n_j)`.
    pub fn pair(&self, i: usize, j: usize) -> Result<Self> {
        self.check_part(i)?;
        self.check_part(j)?;
        Self::new(vec![self.sizes[i], self.sizes[j]])
    }

    pub(crate) fn check_part(&self, i: usize) -> Result<()> {
        if i >= self.k() {
            return domain(format!("part index {i} out of range for k = {}", self.k()));
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for PartStructure {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PartStructure> for Vec<usize> {
    fn from(p: PartStructure) -> Self {
        p.sizes
    }
}

impl fmt::Display for PartStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.sizes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for PartStructure {
    type Err = Error;

    /// Parses a comma list such as `3,3,3` (surrounding parentheses allowed).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let sizes = s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad part size {x:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

/// One edge: a k-tuple with one vertex per part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Edge(Vec<Vertex>);

impl Edge {
    pub fn new(coords: Vec<Vertex>) -> Self {
        Edge(coords)
    }

    pub fn coords(&self) -> &[Vertex] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coord(&self, part: usize) -> Vertex {
        self.0[part]
    }
}

impl From<&[Vertex]> for Edge {
    fn from(c: &[Vertex]) -> Self {
        Edge(c.to_vec())
    }
}

/// A set of pairwise coordinate-disjoint edges, stored in canonical
/// (lexicographically sorted) order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    arity: usize,
    edges: Vec<Edge>,
}

impl Matching {
    /// Validates disjointness and canonicalises.
    pub fn new(arity: usize, mut edges: Vec<Edge>) -> Result<Self> {
        if arity == 0 {
            return domain("edges need at least one coordinate");
        }
        if let Some(e) = edges.iter().find(|e| e.arity() != arity) {
            return domain(format!("edge {:?} does not have arity {arity}", e.coords()));
        }
        edges.sort();
        for part in 0..arity {
            let mut seen: Vec<Vertex> = edges.iter().map(|e| e.coord(part)).collect();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return domain(format!("edges share a vertex in part {part}"));
            }
        }
        Ok(Matching { arity, edges })
    }

    /// Builds a matching from literal tuples; the arity is taken from the first tuple.
    pub fn from_tuples<T: AsRef<[Vertex]>>(tuples: &[T]) -> Result<Self> {
        let Some(first) = tuples.first() else {
            return domain("cannot infer the arity of an empty tuple list; use Matching::empty");
        };
        let arity = first.as_ref().len();
        Self::new(arity, tuples.iter().map(|t| Edge::from(t.as_ref())).collect())
    }

    pub fn empty(arity: usize) -> Self {
        Matching {
            arity,
            edges: Vec::new(),
        }
    }

    /// Trusted constructor for enumeration, which emits canonical edge lists.
    pub(crate) fn from_canonical(arity: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Matching { arity, edges }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// Checks that every coordinate lies inside its part.
    pub fn check_in(&self, parts: &PartStructure) -> Result<()> {
        if self.arity != parts.k() {
            return domain(format!(
                "matching of arity {} used with {} parts",
                self.arity,
                parts.k()
            ));
        }
        for e in &self.edges {
            for (i, &x) in e.coords().iter().enumerate() {
                if x == 0 || x as usize > parts.size(i) {
                    return domain(format!("vertex {x} is not in part {i} of {parts}"));
                }
            }
        }
        Ok(())
    }

    /// Number of shared edges.
    pub fn common_edges(&self, other: &Matching) -> usize {
        let (mut a, mut b, mut n) = (0, 0, 0);
        while a < self.edges.len() && b < other.edges.len() {
            match self.edges[a].cmp(&other.edges[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    a += 1;
                    b += 1;
                }
            }
        }
        n
    }

    fn check_part(&self, i: usize) -> Result<()> {
        if i >= self.arity {
            return domain(format!("part index {i} out of range for arity {}", self.arity));
        }
        Ok(())
    }

    /// `P^i_j = {(x_i, x_j) : x ∈ P}`.
    pub fn project_pair(&self, i: usize, j: usize) -> Result<PairProjection> {
        self.check_part(i)?;
        self.check_part(j)?;
        if i == j {
            return domain("a pair projection needs two distinct parts");
        }
        Ok(self.project_pair_unchecked(i, j))
    }

    pub(crate) fn project_pair_unchecked(&self, i: usize, j: usize) -> PairProjection {
        let mut pairs: Vec<(Vertex, Vertex)> =
            self.edges.iter().map(|e| (e.coord(i), e.coord(j))).collect();
        pairs.sort_unstable();
        PairProjection {
            parts: (i, j),
            pairs,
        }
    }

    /// `P^i`: the projections onto `(i, j)` for every `j != i`, in increasing `j`.
    pub fn project_all(&self, i: usize) -> Result<Vec<PairProjection>> {
        self.check_part(i)?;
        Ok((0..self.arity)
            .filter(|&j| j != i)
            .map(|j| self.project_pair_unchecked(i, j))
            .collect())
    }

    /// `R_j(P)`: removes coordinate `j` from every edge.
    pub fn drop_part(&self, j: usize) -> Result<Matching> {
        self.check_part(j)?;
        if self.arity == 1 {
            return domain("cannot drop the only part of a matching");
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| {
                let mut c = e.0.clone();
                c.remove(j);
                Edge(c)
            })
            .collect();
        edges.sort();
        Ok(Matching {
            arity: self.arity - 1,
            edges,
        })
    }

    /// `V_i(P)`, sorted.
    pub fn vertex_shadow(&self, i: usize) -> Result<Vec<Vertex>> {
        self.check_part(i)?;
        Ok(self.shadow_unchecked(i))
    }

    pub(crate) fn shadow_unchecked(&self, i: usize) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.edges.iter().map(|e| e.coord(i)).collect();
        v.sort_unstable();
        v
    }

    /// `R^i_j(P)`: the tuple `P^i` with the entry for part `j` removed.
    pub fn reduced_projection(&self, i: usize, j: usize) -> Result<ReducedProjection> {
        self.check_part(i)?;
        self.check_part(j)?;
        if i == j {
            return domain("a reduced projection needs two distinct parts");
        }
        let entries = (0..self.arity)
            .filter(|&l| l != i && l != j)
            .map(|l| self.project_pair_unchecked(i, l))
            .collect();
        Ok(ReducedProjection { i, j, entries })
    }
}

impl Serialize for Matching {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.edges.serialize(s)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, e) in self.edges.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (i, x) in e.coords().iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

/// `P^i_j`: a generalised permutation in `P_{r, N_i, N_j}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairProjection {
    /// Source parts `(i, j)`.
    pub parts: (usize, usize),
    /// Pairs `(x_i, x_j)`, sorted.
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl PairProjection {
    /// The projection as a two-part matching.
    pub fn to_matching(&self) -> Matching {
        Matching::from_canonical(
            2,
            self.pairs.iter().map(|&(a, b)| Edge(vec![a, b])).collect(),
        )
    }

    /// Shadow on the first (`i`) side.
    pub fn first_shadow(&self) -> Vec<Vertex> {
        self.pairs.iter().map(|p| p.0).collect()
    }
}

/// `R^i_j(P)`: the projections `P^i_l` for every `l` other than `i` and `j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ReducedProjection {
    pub i: usize,
    pub j: usize,
    pub entries: Vec<PairProjection>,
}

impl ReducedProjection {
    /// Builds `(R_j(P))^i` by first dropping part `j` and then projecting.
    /// Agrees with [`Matching::reduced_projection`].
    pub fn via_drop(p: &Matching, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return domain("a reduced projection needs two distinct parts");
        }
        let dropped = p.drop_part(j)?;
        let i_red = if i > j { i - 1 } else { i };
        let entries = (0..dropped.arity())
            .filter(|&l| l != i_red)
            .map(|l| {
                let mut pp = dropped.project_pair_unchecked(i_red, l);
                let l_orig = if l >= j { l + 1 } else { l };
                pp.parts = (i, l_orig);
                pp
            })
            .collect();
        Ok(ReducedProjection { i, j, entries })
    }

    /// `V_i(X)`, the common first-side shadow of the entries (None when `k = 2`).
    pub fn shadow(&self) -> Option<Vec<Vertex>> {
        self.entries.first().map(|e| {
            let mut s = e.first_shadow();
            s.sort_unstable();
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(t: &[&[Vertex]]) -> Matching {
        Matching::from_tuples(t).unwrap()
    }

    #[test]
    fn canonical_order_and_validation() {
        let p = m(&[&[2, 2], &[1, 3]]);
        assert_eq!(p.edges()[0].coords(), &[1, 3]);
        assert!(Matching::from_tuples(&[&[1, 1][..], &[1, 2]]).is_err());
        assert!(Matching::from_tuples(&[&[1, 1][..], &[2, 2, 2]]).is_err());
    }

    #[test]
    fn project_pair_examples() {
        let p = m(&[&[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(p.project_pair(0, 2).unwrap().pairs, vec![(1, 1), (2, 2)]);
        let q = m(&[&[1, 1, 4], &[2, 4, 2], &[4, 3, 3]]);
        assert_eq!(
            q.project_pair(0, 1).unwrap().pairs,
            vec![(1, 1), (2, 4), (4, 3)]
        );
        let s = m(&[&[1, 2]]);
        assert_eq!(s.project_pair(1, 0).unwrap().pairs, vec![(2, 1)]);
        assert!(p.project_pair(1, 1).is_err());
    }

    #[test]
    fn drop_part_examples() {
        let p = m(&[&[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(p.drop_part(1).unwrap(), m(&[&[1, 1], &[2, 2]]));
        let q = m(&[&[1, 2], &[2, 1]]);
        assert_eq!(q.drop_part(1).unwrap(), m(&[&[1], &[2]]));
        assert!(m(&[&[3]]).drop_part(0).is_err());
    }

    #[test]
    fn reduced_projection_routes_agree() {
        let q = m(&[&[1, 1, 4], &[2, 4, 2], &[4, 3, 3]]);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(
                        q.reduced_projection(i, j).unwrap(),
                        ReducedProjection::via_drop(&q, i, j).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn shadows() {
        let p = m(&[&[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(p.vertex_shadow(1).unwrap(), vec![1, 2]);
        let q = m(&[&[1, 1, 4], &[2, 4, 2], &[4, 3, 3]]);
        assert_eq!(q.vertex_shadow(2).unwrap(), vec![2, 3, 4]);
        assert_eq!(m(&[&[3, 1]]).vertex_shadow(0).unwrap(), vec![3]);
    }

    #[test]
    fn part_structure_parse() {
        let p: PartStructure = "3, 3,4".parse().unwrap();
        assert_eq!(p.sizes(), &[3, 3, 4]);
        assert_eq!(p.to_string(), "(3,3,4)");
        assert!("3,0".parse::<PartStructure>().is_err());
        assert!("".parse::<PartStructure>().is_err());
    }
}
