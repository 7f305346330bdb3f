//! Pairwise intersection predicates and family-level checks.

mod classify;

pub use classify::{
    classify_star, projection_family, projection_is_set_star, projection_is_star, set_star_centres,
    star_centres, StarClassification, StarKind,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinat::combinations;
use crate::error::{domain, Error, Result};
use crate::matchings::{Family, Matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateKind {
    Intersecting,
    WeaklyIntersecting,
    SetIntersecting,
    WeaklySetIntersecting,
}

impl PredicateKind {
    pub fn name(self) -> &'static str {
        match self {
            PredicateKind::Intersecting => "intersecting",
            PredicateKind::WeaklyIntersecting => "weakly-intersecting",
            PredicateKind::SetIntersecting => "set-intersecting",
            PredicateKind::WeaklySetIntersecting => "weakly-set-intersecting",
        }
    }

    pub fn is_weak(self) -> bool {
        matches!(
            self,
            PredicateKind::WeaklyIntersecting | PredicateKind::WeaklySetIntersecting
        )
    }

    pub fn is_set(self) -> bool {
        matches!(
            self,
            PredicateKind::SetIntersecting | PredicateKind::WeaklySetIntersecting
        )
    }
}

/// A pairwise intersection condition with its threshold, written `kind:t`
/// (for example `weakly-set-intersecting:2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Predicate {
    pub kind: PredicateKind,
    pub t: usize,
}

impl Predicate {
    pub fn new(kind: PredicateKind, t: usize) -> Result<Self> {
        if t == 0 {
            return domain("predicate threshold t must be at least 1");
        }
        Ok(Predicate { kind, t })
    }

    pub fn intersecting(t: usize) -> Self {
        Predicate::new(PredicateKind::Intersecting, t).expect("t >= 1")
    }

    pub fn weakly_intersecting(t: usize) -> Self {
        Predicate::new(PredicateKind::WeaklyIntersecting, t).expect("t >= 1")
    }

    pub fn set_intersecting(t: usize) -> Self {
        Predicate::new(PredicateKind::SetIntersecting, t).expect("t >= 1")
    }

    pub fn weakly_set_intersecting(t: usize) -> Self {
        Predicate::new(PredicateKind::WeaklySetIntersecting, t).expect("t >= 1")
    }

    /// The non-weak counterpart.
    pub fn plain(self) -> Self {
        let kind = match self.kind {
            PredicateKind::WeaklyIntersecting => PredicateKind::Intersecting,
            PredicateKind::WeaklySetIntersecting => PredicateKind::SetIntersecting,
            k => k,
        };
        Predicate { kind, t: self.t }
    }

    /// Evaluates the predicate on two matchings of equal arity. Pairs whose
    /// sizes cannot meet the threshold are simply incompatible.
    pub fn holds(&self, p: &Matching, q: &Matching) -> bool {
        debug_assert_eq!(p.arity(), q.arity());
        let t = self.t;
        match self.kind {
            PredicateKind::Intersecting => p.common_edges(q) >= t,
            PredicateKind::WeaklyIntersecting => weakly_intersects_raw(p, q, t),
            PredicateKind::SetIntersecting => set_intersects_raw(p, q, &all_parts(p.arity()), t),
            PredicateKind::WeaklySetIntersecting => weakly_set_intersects_raw(p, q, t),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.name(), self.t)
    }
}

impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, t) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("predicate {s:?} is not of the form kind:t")))?;
        let kind = match kind.trim() {
            "intersecting" | "t-intersecting" => PredicateKind::Intersecting,
            "weakly-intersecting" | "weakly-t-intersecting" => PredicateKind::WeaklyIntersecting,
            "set-intersecting" | "t-set-intersecting" => PredicateKind::SetIntersecting,
            "weakly-set-intersecting" | "weakly-t-set-intersecting" => {
                PredicateKind::WeaklySetIntersecting
            }
            other => return Err(Error::Parse(format!("unknown predicate kind {other:?}"))),
        };
        let t = t
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad threshold in predicate {s:?}")))?;
        Predicate::new(kind, t).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl TryFrom<String> for Predicate {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Predicate> for String {
    fn from(p: Predicate) -> String {
        p.to_string()
    }
}

fn all_parts(k: usize) -> Vec<usize> {
    (0..k).collect()
}

fn same_arity(p: &Matching, q: &Matching) -> Result<()> {
    if p.arity() != q.arity() {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

/// Number of pairs shared by `P^i_j` and `Q^i_j`.
fn common_pairs(p: &Matching, q: &Matching, i: usize, j: usize) -> usize {
    p.edges()
        .iter()
        .filter(|e| {
            q.edges()
                .iter()
                .any(|f| f.coord(i) == e.coord(i) && f.coord(j) == e.coord(j))
        })
        .count()
}

fn weakly_intersects_raw(p: &Matching, q: &Matching, t: usize) -> bool {
    let k = p.arity();
    if k <= 2 {
        return p.common_edges(q) >= t;
    }
    (0..k).all(|i| ((i + 1)..k).all(|j| common_pairs(p, q, i, j) >= t))
}

/// Set-intersection restricted to the coordinates in `parts`.
///
/// `P` and `Q` t-set-intersect iff some t edges of each have identical
/// shadows on every part. Once the t edges of `P` are chosen, the lead-part
/// shadow forces which edges of `Q` must match, so only subsets of `P` are
/// enumerated.
pub(crate) fn set_intersects_raw(p: &Matching, q: &Matching, parts: &[usize], t: usize) -> bool {
    if t > p.len() || t > q.len() {
        return false;
    }
    if t == 0 {
        return true;
    }
    let lead = parts[0];
    let candidates: Vec<_> = p
        .edges()
        .iter()
        .filter(|e| {
            parts
                .iter()
                .all(|&i| q.edges().iter().any(|f| f.coord(i) == e.coord(i)))
        })
        .collect();
    if candidates.len() < t {
        return false;
    }
    let mut a = Vec::with_capacity(t);
    let mut b = Vec::with_capacity(t);
    'subsets: for pick in combinations(candidates.len(), t) {
        let chosen: Vec<_> = pick.iter().map(|&c| candidates[c]).collect();
        let forced: Vec<_> = q
            .edges()
            .iter()
            .filter(|f| chosen.iter().any(|e| e.coord(lead) == f.coord(lead)))
            .collect();
        debug_assert_eq!(forced.len(), t);
        for &i in &parts[1..] {
            a.clear();
            b.clear();
            a.extend(chosen.iter().map(|e| e.coord(i)));
            b.extend(forced.iter().map(|f| f.coord(i)));
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                continue 'subsets;
            }
        }
        return true;
    }
    false
}

fn weakly_set_intersects_raw(p: &Matching, q: &Matching, t: usize) -> bool {
    let k = p.arity();
    if k <= 2 {
        return set_intersects_raw(p, q, &all_parts(k), t);
    }
    (0..k).all(|i| ((i + 1)..k).all(|j| set_intersects_raw(p, q, &[i, j], t)))
}

/// `|P ∩ Q| >= t` as edge sets.
pub fn intersects_t(p: &Matching, q: &Matching, t: usize) -> Result<bool> {
    same_arity(p, q)?;
    Ok(p.common_edges(q) >= t)
}

/// `|P^i_j ∩ Q^i_j| >= t` for all distinct parts. For `k <= 2` this is plain t-intersection.
pub fn weakly_intersects_t(p: &Matching, q: &Matching, t: usize) -> Result<bool> {
    same_arity(p, q)?;
    Ok(weakly_intersects_raw(p, q, t))
}

/// Whether some box of per-part t-sets holds exactly t edges of each matching.
pub fn set_intersects_t(p: &Matching, q: &Matching, t: usize) -> Result<bool> {
    same_arity(p, q)?;
    if t > p.len() || t > q.len() {
        return domain(format!(
            "t = {t} exceeds a matching size ({} or {})",
            p.len(),
            q.len()
        ));
    }
    Ok(set_intersects_raw(p, q, &all_parts(p.arity()), t))
}

/// Every pair projection t-set-intersects. This projection-level reading is
/// the working definition; for `k <= 2` it is plain t-set-intersection.
pub fn weakly_set_intersects_t(p: &Matching, q: &Matching, t: usize) -> Result<bool> {
    same_arity(p, q)?;
    if t > p.len() || t > q.len() {
        return domain(format!(
            "t = {t} exceeds a matching size ({} or {})",
            p.len(),
            q.len()
        ));
    }
    Ok(weakly_set_intersects_raw(p, q, t))
}

/// Every unordered pair of distinct members satisfies the predicate.
pub fn family_satisfies(family: &Family, pred: &Predicate) -> bool {
    let members: Vec<&Matching> = family.members().collect();
    members
        .iter()
        .enumerate()
        .all(|(a, p)| members[a + 1..].iter().all(|q| pred.holds(p, q)))
}

/// Every `P ∈ G`, `Q ∈ H` t-set-intersect.
pub fn cross_set_intersecting(g: &Family, h: &Family, t: usize) -> Result<bool> {
    let (ug, uh) = (g.universe(), h.universe());
    if ug.parts().k() != uh.parts().k() {
        return Err(Error::UniverseMismatch);
    }
    if ug.sizes() != uh.sizes() {
        return domain(format!(
            "matching sizes differ: {:?} vs {:?}",
            ug.sizes(),
            uh.sizes()
        ));
    }
    let parts = all_parts(ug.parts().k());
    Ok(g
        .members()
        .all(|p| h.members().all(|q| set_intersects_raw(p, q, &parts, t))))
}
