//! Named extremal families built as concrete subfamilies of an enumerated universe.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinat::combinations;
use crate::error::{domain, Result};
use crate::matchings::{Degeneracy, Edge, Family, Matching, PartStructure, Universe, Vertex};

/// Centre of a star: `t` disjoint edges, or a box of per-part `t`-sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Centre {
    Edges(Vec<Edge>),
    Box(Vec<Vec<Vertex>>),
}

impl Centre {
    pub fn t(&self) -> usize {
        match self {
            Centre::Edges(e) => e.len(),
            Centre::Box(sides) => sides.first().map_or(0, Vec::len),
        }
    }

    /// Whether `m` belongs to the star with this centre.
    pub fn admits(&self, m: &Matching) -> bool {
        match self {
            Centre::Edges(edges) => edges.iter().all(|e| m.contains_edge(e)),
            Centre::Box(sides) => edges_in_box(m, sides) == sides[0].len(),
        }
    }
}

impl fmt::Display for Centre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Vertex]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            Centre::Edges(edges) => {
                let parts: Vec<String> = edges.iter().map(|e| format!("({})", join(e.coords()))).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Centre::Box(sides) => {
                let parts: Vec<String> = sides.iter().map(|s| format!("{{{}}}", join(s))).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// Number of edges of `m` lying inside the box.
pub fn edges_in_box(m: &Matching, sides: &[Vec<Vertex>]) -> usize {
    m.edges()
        .iter()
        .filter(|e| sides.iter().enumerate().all(|(i, s)| s.contains(&e.coord(i))))
        .count()
}

fn check_t(universe: &Universe, t: usize) -> Result<()> {
    if t == 0 {
        return domain("a star needs t >= 1");
    }
    let min_r = universe.sizes()[0];
    if t > min_r {
        return domain(format!("t = {t} exceeds the smallest matching size {min_r}"));
    }
    Ok(())
}

fn check_side(side: &[Vertex], n: usize, t: usize, part: usize) -> Result<()> {
    if side.len() != t {
        return domain(format!("side {part} has {} vertices, expected {t}", side.len()));
    }
    let mut sorted = side.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != t {
        return domain(format!("side {part} repeats a vertex"));
    }
    if sorted.iter().any(|&x| x == 0 || x as usize > n) {
        return domain(format!("side {part} leaves part {part} of size {n}"));
    }
    Ok(())
}

/// All matchings containing every centre edge.
pub fn t_star(universe: &Arc<Universe>, centre: &[Edge]) -> Result<Family> {
    let parts = universe.parts();
    let c = Matching::new(parts.k(), centre.to_vec())?;
    c.check_in(parts)?;
    let t = c.len();
    check_t(universe, t)?;
    let degeneracy = universe
        .uniform_r()
        .and_then(|r| Degeneracy::for_star(parts, r, t));
    let edges = c.edges().to_vec();
    Ok(Family::filter(universe, |m| edges.iter().all(|e| m.contains_edge(e))).with_degeneracy(degeneracy))
}

/// All matchings with exactly `t` edges inside the box `C_1 x ... x C_k`.
pub fn t_set_star(universe: &Arc<Universe>, sides: &[Vec<Vertex>]) -> Result<Family> {
    let parts = universe.parts();
    if sides.len() != parts.k() {
        return domain(format!("box has {} sides for {} parts", sides.len(), parts.k()));
    }
    let t = sides[0].len();
    check_t(universe, t)?;
    for (i, s) in sides.iter().enumerate() {
        check_side(s, parts.size(i), t, i)?;
    }
    let degeneracy = universe
        .uniform_r()
        .and_then(|r| Degeneracy::for_set_star(parts, r, t));
    Ok(Family::filter(universe, |m| edges_in_box(m, sides) == t).with_degeneracy(degeneracy))
}

pub fn star_from_centre(universe: &Arc<Universe>, centre: &Centre) -> Result<Family> {
    match centre {
        Centre::Edges(e) => t_star(universe, e),
        Centre::Box(b) => t_set_star(universe, b),
    }
}

/// A centre in the projection onto (last part, part `j`): either `t` pairs
/// `(first[s], second[s])`, or the box `first x second`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCentre {
    pub first: Vec<Vertex>,
    pub second: Vec<Vertex>,
}

impl PairCentre {
    pub fn new(first: Vec<Vertex>, second: Vec<Vertex>) -> Self {
        PairCentre { first, second }
    }

    pub fn from_pairs(pairs: &[(Vertex, Vertex)]) -> Self {
        PairCentre {
            first: pairs.iter().map(|p| p.0).collect(),
            second: pairs.iter().map(|p| p.1).collect(),
        }
    }
}

/// The largest family whose projections onto (last part, `j`) all contain
/// (or, with `set_variant`, meet in exactly `t` pairs) the given centres,
/// one centre per part `j` before the last.
pub fn semi_star(universe: &Arc<Universe>, centres: &[PairCentre], set_variant: bool) -> Result<Family> {
    let parts = universe.parts();
    let k = parts.k();
    if k < 2 {
        return domain("a semi-star needs at least two parts");
    }
    if centres.len() != k - 1 {
        return domain(format!("expected {} centres, got {}", k - 1, centres.len()));
    }
    let t = centres[0].first.len();
    check_t(universe, t)?;
    let last = k - 1;
    for (j, c) in centres.iter().enumerate() {
        check_side(&c.first, parts.size(last), t, last)?;
        check_side(&c.second, parts.size(j), t, j)?;
    }
    let fam = if set_variant {
        Family::filter(universe, |m| {
            centres.iter().enumerate().all(|(j, c)| {
                m.edges()
                    .iter()
                    .filter(|e| c.first.contains(&e.coord(last)) && c.second.contains(&e.coord(j)))
                    .count()
                    == t
            })
        })
    } else {
        Family::filter(universe, |m| {
            centres.iter().enumerate().all(|(j, c)| {
                c.first.iter().zip(&c.second).all(|(&a, &b)| {
                    m.edges()
                        .iter()
                        .any(|e| e.coord(last) == a && e.coord(j) == b)
                })
            })
        })
    };
    Ok(fam)
}

/// Size of the union of the centres' shadows on the last part.
pub fn semi_star_spread(centres: &[PairCentre]) -> usize {
    let mut u: Vec<Vertex> = centres.iter().flat_map(|c| c.first.iter().copied()).collect();
    u.sort_unstable();
    u.dedup();
    u.len()
}

fn k1_universe(n: usize, sizes: &[usize], cap: usize) -> Result<Arc<Universe>> {
    let parts = PartStructure::new(vec![n])?;
    Ok(Arc::new(Universe::enumerate_levels(&parts, sizes, cap)?))
}

/// `{F ⊆ [n], |F| = r : |F ∩ [t+2i]| >= t+i}` as a one-part family.
pub fn ak_family(n: usize, r: usize, t: usize, i: usize, cap: usize) -> Result<Family> {
    if t == 0 {
        return domain("t must be at least 1");
    }
    if t + 2 * i > n {
        return domain(format!("t + 2i = {} exceeds n = {n}", t + 2 * i));
    }
    if r > n {
        return domain(format!("r = {r} exceeds n = {n}"));
    }
    let u = k1_universe(n, &[r], cap)?;
    let frame = (t + 2 * i) as Vertex;
    Ok(Family::filter(&u, |m| {
        m.edges().iter().filter(|e| e.coord(0) <= frame).count() >= t + i
    }))
}

/// Permutations of `[n]` with at least `t+i` fixed points in `[t+2i]`, as
/// perfect matchings `{(x, σ(x))}` of `K_{n,n}`.
pub fn gi_family(n: usize, t: usize, i: usize, cap: usize) -> Result<Family> {
    if t == 0 {
        return domain("t must be at least 1");
    }
    if t + 2 * i > n {
        return domain(format!("t + 2i = {} exceeds n = {n}", t + 2 * i));
    }
    let parts = PartStructure::uniform(2, n)?;
    let u = Arc::new(Universe::enumerate(&parts, n, cap)?);
    let frame = (t + 2 * i) as Vertex;
    Ok(Family::filter(&u, |m| {
        m.edges()
            .iter()
            .filter(|e| e.coord(0) <= frame && e.coord(0) == e.coord(1))
            .count()
            >= t + i
    }))
}

/// The matching `{(x, ..., x) : x ≤ min part}`.
pub fn diagonal(parts: &PartStructure) -> Matching {
    let edges = (1..=parts.min_size() as Vertex)
        .map(|x| Edge::new(vec![x; parts.k()]))
        .collect();
    Matching::new(parts.k(), edges).expect("diagonal edges are disjoint")
}

/// `{P : |P ∩ H| >= t+i}` where `H` holds the first `t+2i` edges of `base`
/// (canonical order; the diagonal when `base` is `None`).
pub fn hi_family(universe: &Arc<Universe>, t: usize, i: usize, base: Option<&Matching>) -> Result<Family> {
    let parts = universe.parts();
    let default;
    let base = match base {
        Some(b) => {
            b.check_in(parts)?;
            if b.len() != parts.min_size() {
                return domain(format!(
                    "base has {} edges, expected a matching of size {}",
                    b.len(),
                    parts.min_size()
                ));
            }
            b
        }
        None => {
            default = diagonal(parts);
            &default
        }
    };
    if t == 0 {
        return domain("t must be at least 1");
    }
    let l = t + 2 * i;
    if l > base.len() {
        return domain(format!("t + 2i = {l} exceeds the base size {}", base.len()));
    }
    let frame = Matching::new(parts.k(), base.edges()[..l].to_vec())?;
    Ok(Family::filter(universe, |m| m.common_edges(&frame) >= t + i))
}

/// `2^[n]` as the one-part universe with levels `0..=n` (or `1..=n`).
pub fn katona_universe(n: usize, include_empty: bool, cap: usize) -> Result<Arc<Universe>> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    let lo = usize::from(!include_empty);
    let sizes: Vec<usize> = (lo..=n).collect();
    k1_universe(n, &sizes, cap)
}

/// `{A : |A| >= l}`, or `{A : |A - {x}| >= l}` when `x` is given.
pub fn katona_family_in(universe: &Arc<Universe>, l: usize, x: Option<Vertex>) -> Result<Family> {
    let parts = universe.parts();
    if parts.k() != 1 {
        return domain("a subset family needs a one-part universe");
    }
    let n = parts.size(0);
    if l > n {
        return domain(format!("l = {l} exceeds n = {n}"));
    }
    if let Some(x) = x {
        if x == 0 || x as usize > n {
            return domain(format!("x = {x} is not in [{n}]"));
        }
    }
    Ok(Family::filter(universe, |m| {
        let size = m.len() - x.map_or(0, |x| usize::from(m.edges().iter().any(|e| e.coord(0) == x)));
        size >= l
    }))
}

/// Katona's families over the full power set of `[n]`.
pub fn katona_family(n: usize, l: usize, x: Option<Vertex>, cap: usize) -> Result<Family> {
    let u = katona_universe(n, true, cap)?;
    katona_family_in(&u, l, x)
}

/// The Klein four-group as perfect matchings of `K_{4,4}`, identity first.
pub fn klein_group() -> Vec<Matching> {
    [[1, 2, 3, 4], [2, 1, 4, 3], [3, 4, 1, 2], [4, 3, 2, 1]]
        .iter()
        .map(|images| {
            let tuples: Vec<[Vertex; 2]> = images
                .iter()
                .enumerate()
                .map(|(x, &y)| [x as Vertex + 1, y])
                .collect();
            Matching::from_tuples(&tuples).expect("permutation")
        })
        .collect()
}

/// Perfect matchings of `K_{4,...,4}` (k parts) whose projection onto
/// parts `(0, j)` is in the Klein group for every `j`.
pub fn klein_family(k: usize, cap: usize) -> Result<Family> {
    if k < 2 {
        return domain("the Klein family needs k >= 2");
    }
    let parts = PartStructure::uniform(k, 4)?;
    let u = Arc::new(Universe::enumerate(&parts, 4, cap)?);
    let group: Vec<Vec<(Vertex, Vertex)>> = klein_group()
        .iter()
        .map(|m| m.project_pair_unchecked(0, 1).pairs)
        .collect();
    Ok(Family::filter(&u, |m| {
        (1..k).all(|j| group.contains(&m.project_pair_unchecked(0, j).pairs))
    }))
}

/// The union over the levels `sizes` of the stars with the given centre.
pub fn non_uniform_star(parts: &PartStructure, sizes: &[usize], centre: &[Edge], cap: usize) -> Result<Family> {
    let u = Arc::new(Universe::enumerate_levels(parts, sizes, cap)?);
    t_star(&u, centre)
}

/// A frame matching `H` of size `t+2i` for which a family equals `{P : |P ∩ H| >= t+i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HFrame {
    pub i: usize,
    pub frame: Matching,
}

/// Searches for a frame `H` (any matching of size `t+2i`, `i >= 1`) that
/// describes `family` exactly. Gives up with `Ok(None)` after `limit` candidates.
pub fn find_h_frame(family: &Family, t: usize, limit: usize) -> Result<Option<HFrame>> {
    let universe = family.universe();
    let parts = universe.parts();
    if family.is_empty() || t == 0 {
        return Ok(None);
    }
    let size = family.len();
    let mut tried = 0usize;
    for i in 1.. {
        let l = t + 2 * i;
        if l > parts.min_size() {
            break;
        }
        let frames = Universe::enumerate(parts, l, limit.saturating_sub(tried).max(1));
        let Ok(frames) = frames else {
            return Ok(None);
        };
        for h in frames.items() {
            tried += 1;
            if tried > limit {
                return Ok(None);
            }
            // every member must meet the frame; cheap rejection first
            if family.members().any(|m| m.common_edges(h) < t + i) {
                continue;
            }
            let count = universe
                .items()
                .iter()
                .filter(|m| m.common_edges(h) >= t + i)
                .count();
            if count == size {
                return Ok(Some(HFrame { i, frame: h.clone() }));
            }
        }
    }
    Ok(None)
}

/// Every `t`-subset of `edges`, as a centre.
pub(crate) fn edge_centres(edges: &[Edge], t: usize) -> impl Iterator<Item = Vec<Edge>> + '_ {
    combinations(edges.len(), t).map(move |c| c.iter().map(|&x| edges[x].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{ak_family_size, gi_size, katona_sizes, semi_star_size, t_set_star_size, t_star_size};
    use crate::matchings::DEFAULT_UNIVERSE_CAP;
    use crate::predicates::{family_satisfies, Predicate};

    const CAP: usize = DEFAULT_UNIVERSE_CAP;

    fn ps(s: &[usize]) -> PartStructure {
        PartStructure::new(s.to_vec()).unwrap()
    }

    fn uni(s: &[usize], r: usize) -> Arc<Universe> {
        Arc::new(Universe::enumerate(&ps(s), r, CAP).unwrap())
    }

    fn e(c: &[Vertex]) -> Edge {
        Edge::new(c.to_vec())
    }

    /// Brute-force count of members containing all given edges.
    fn count_containing(u: &Universe, edges: &[Edge]) -> usize {
        u.items()
            .iter()
            .filter(|m| edges.iter().all(|x| m.edges().contains(x)))
            .count()
    }

    #[test]
    fn t_star_sizes() {
        let u = uni(&[3, 3], 2);
        let s = t_star(&u, &[e(&[1, 1])]).unwrap();
        assert_eq!(s.len(), 4);
        let u3 = uni(&[3, 3, 3], 2);
        let s3 = t_star(&u3, &[e(&[1, 1, 1])]).unwrap();
        assert_eq!(s3.len(), count_containing(&u3, &[e(&[1, 1, 1])]));
        assert_eq!(s3.len(), 8);
        assert!(family_satisfies(&s3, &Predicate::intersecting(1)));
        let full = t_star(&u, &[e(&[1, 2]), e(&[2, 3])]).unwrap();
        assert_eq!(full.len(), 1);
        assert!(t_star(&u, &[e(&[1, 1]), e(&[1, 2])]).is_err());
        assert!(t_star(&u, &[e(&[1, 1]), e(&[2, 2]), e(&[3, 3])]).is_err());
    }

    #[test]
    fn t_star_matches_formula_on_grid() {
        for (s, r, t) in [
            (&[3, 3][..], 2, 1),
            (&[3, 4], 3, 2),
            (&[4, 4], 3, 1),
            (&[3, 3, 3], 3, 2),
            (&[4, 4, 4], 2, 1),
        ] {
            let u = uni(s, r);
            let centre: Vec<Edge> = (1..=t as Vertex).map(|x| e(&vec![x; s.len()])).collect();
            let f = t_star(&u, &centre).unwrap();
            assert_eq!(f.len().to_string(), t_star_size(&ps(s), r, t).unwrap().to_string());
        }
    }

    #[test]
    fn set_star_sizes() {
        let u = uni(&[4, 4], 4);
        let s = t_set_star(&u, &[vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.degeneracy(), Some(Degeneracy::ComplementaryBoxes));
        assert!(family_satisfies(&s, &Predicate::set_intersecting(2)));
        let u3 = uni(&[4, 4, 4], 4);
        let s3 = t_set_star(&u3, &[vec![1, 2], vec![1, 2], vec![1, 2]]).unwrap();
        assert_eq!(s3.len(), 16);
        let u5 = uni(&[5, 4, 5], 3);
        let s5 = t_set_star(&u5, &[vec![1, 3], vec![2, 4], vec![5, 1]]).unwrap();
        assert_eq!(s5.len().to_string(), t_set_star_size(&ps(&[5, 4, 5]), 3, 2).unwrap().to_string());
        assert!(t_set_star(&u, &[vec![1, 1], vec![1, 2]]).is_err());
        assert!(t_set_star(&u, &[vec![1, 2]]).is_err());
        // t = r: every member lies inside the box
        let u2 = uni(&[3, 3], 2);
        let all_in = t_set_star(&u2, &[vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(all_in.len(), 2);
    }

    #[test]
    fn semi_star_sizes() {
        let u = uni(&[3, 3, 3], 2);
        // shadows {1} and {2} on the last part: u = 2
        let c = [PairCentre::from_pairs(&[(1, 1)]), PairCentre::from_pairs(&[(2, 1)])];
        let f = semi_star(&u, &c, false).unwrap();
        assert_eq!(semi_star_spread(&c), 2);
        assert_eq!(f.len(), 4);
        assert_eq!(f.len().to_string(), semi_star_size(&ps(&[3, 3, 3]), 2, 1, 2, false).unwrap().to_string());
        // aligned shadows collapse to a star
        let c = [PairCentre::from_pairs(&[(1, 1)]), PairCentre::from_pairs(&[(1, 2)])];
        let g = semi_star(&u, &c, false).unwrap();
        assert_eq!(g, t_star(&u, &[e(&[1, 2, 1])]).unwrap());

        let u44 = uni(&[4, 4], 3);
        let c = [PairCentre::new(vec![1, 2], vec![3, 4])];
        let h = semi_star(&u44, &c, true).unwrap();
        assert_eq!(h.len().to_string(), semi_star_size(&ps(&[4, 4]), 3, 2, 2, true).unwrap().to_string());
        assert!(semi_star(&u44, &[], true).is_err());
    }

    #[test]
    fn ak_and_gi() {
        let f = ak_family(5, 3, 2, 1, CAP).unwrap();
        assert_eq!(f.len(), 4);
        assert!(family_satisfies(&f, &Predicate::intersecting(2)));
        let g = ak_family(6, 3, 2, 1, CAP).unwrap();
        assert_eq!(g.len().to_string(), ak_family_size(6, 3, 2, 1).unwrap().to_string());
        let star = ak_family(6, 3, 2, 0, CAP).unwrap();
        let u = Arc::clone(star.universe());
        assert_eq!(star, t_star(&u, &[e(&[1]), e(&[2])]).unwrap());
        assert!(ak_family(4, 3, 2, 2, CAP).is_err());

        assert_eq!(gi_family(4, 2, 1, CAP).unwrap().len(), 1);
        let g0 = gi_family(5, 2, 0, CAP).unwrap();
        assert_eq!(g0.len(), 6);
        assert_eq!(g0.len().to_string(), gi_size(5, 2, 0).unwrap().to_string());
        assert!(family_satisfies(&gi_family(5, 1, 1, CAP).unwrap(), &Predicate::intersecting(1)));
    }

    #[test]
    fn hi_family_cases() {
        let u = uni(&[3, 3], 2);
        let h = hi_family(&u, 1, 1, None).unwrap();
        assert_eq!(h.len(), 3);
        assert!(family_satisfies(&h, &Predicate::intersecting(1)));
        let h0 = hi_family(&u, 1, 0, None).unwrap();
        assert_eq!(h0, t_star(&u, &[e(&[1, 1])]).unwrap());
        let u44 = uni(&[4, 4], 3);
        let h44 = hi_family(&u44, 1, 1, None).unwrap();
        let frame = diagonal(&ps(&[4, 4]));
        let frame3: Vec<Edge> = frame.edges()[..3].to_vec();
        let brute = u44
            .items()
            .iter()
            .filter(|m| frame3.iter().filter(|x| m.edges().contains(x)).count() >= 2)
            .count();
        assert_eq!(h44.len(), brute);
        assert!(hi_family(&u, 1, 2, None).is_err());
        let bad = Matching::from_tuples(&[[1, 1]]).unwrap();
        assert!(hi_family(&u, 1, 1, Some(&bad)).is_err());
    }

    #[test]
    fn katona_cases() {
        assert_eq!(katona_family(5, 3, None, CAP).unwrap().len(), 16);
        assert_eq!(katona_family(6, 4, None, CAP).unwrap().len(), 22);
        assert_eq!(katona_family(4, 0, None, CAP).unwrap().len(), 16);
        for n in 2..=6 {
            for l in 0..=n {
                let (a, ax) = katona_sizes(n, l).unwrap();
                assert_eq!(katona_family(n, l, None, CAP).unwrap().len().to_string(), a.to_string());
                assert_eq!(katona_family(n, l, Some(1), CAP).unwrap().len().to_string(), ax.to_string());
            }
        }
        assert!(katona_family(3, 4, None, CAP).is_err());
    }

    #[test]
    fn klein_cases() {
        let k2 = klein_family(2, CAP).unwrap();
        assert_eq!(k2.len(), 4);
        assert!(family_satisfies(&k2, &Predicate::set_intersecting(2)));
        let k3 = klein_family(3, CAP).unwrap();
        assert_eq!(k3.len(), 16);
        assert!(family_satisfies(&k3, &Predicate::weakly_set_intersecting(2)));
        assert!(!family_satisfies(&k3, &Predicate::set_intersecting(2)));
        let diag = Matching::from_tuples(&[[1, 1, 1], [2, 2, 2], [3, 3, 3], [4, 4, 4]]).unwrap();
        let w = Matching::from_tuples(&[[1, 2, 3], [2, 1, 4], [3, 4, 1], [4, 3, 2]]).unwrap();
        assert!(k3.contains(&diag) && k3.contains(&w));
        assert!(klein_family(1, CAP).is_err());
    }

    #[test]
    fn non_uniform_stars() {
        let f = non_uniform_star(&ps(&[3, 3]), &[1, 2], &[e(&[1, 1])], CAP).unwrap();
        assert_eq!(f.len(), 5);
        let g = non_uniform_star(&ps(&[3, 3, 3]), &[1, 2], &[e(&[1, 1, 1])], CAP).unwrap();
        assert_eq!(g.len(), 9);
        assert!(non_uniform_star(&ps(&[3, 3]), &[1, 2], &[e(&[1, 1]), e(&[2, 2])], CAP).is_err());
    }

    #[test]
    fn h_frames() {
        let u = uni(&[3, 3], 2);
        let h = hi_family(&u, 1, 1, None).unwrap();
        let found = find_h_frame(&h, 1, 1000).unwrap().unwrap();
        assert_eq!(found.i, 1);
        assert_eq!(found.frame, diagonal(&ps(&[3, 3])));
        let star = t_star(&u, &[e(&[1, 1])]).unwrap();
        assert_eq!(find_h_frame(&star, 1, 1000).unwrap(), None);
    }

    #[test]
    fn centre_membership() {
        let m = Matching::from_tuples(&[[1, 1], [2, 3]]).unwrap();
        assert!(Centre::Edges(vec![e(&[2, 3])]).admits(&m));
        assert!(Centre::Box(vec![vec![1, 2], vec![1, 3]]).admits(&m));
        assert!(!Centre::Box(vec![vec![1, 2], vec![1, 2]]).admits(&m));
        assert_eq!(Centre::Box(vec![vec![1, 2], vec![3, 4]]).to_string(), "{1,2}x{3,4}");
    }
}
