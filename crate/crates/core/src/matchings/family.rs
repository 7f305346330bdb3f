use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Edge, Matching, PairProjection, PartStructure, ReducedProjection, Universe, Vertex};
use crate::bitset::BitSet;
use crate::error::{domain, Error, Result};

/// Parameter sets where a star's centre is not unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degeneracy {
    /// `r = t + 1` and every part has `t + 1` vertices: a t-star has a single
    /// member and any t of its edges serve as a centre.
    SingleMemberStar,
    /// `r = 2t` and every part has `2t` vertices: a t-set-star's box and its
    /// complementary box describe the same family.
    ComplementaryBoxes,
}

impl Degeneracy {
    pub fn for_star(parts: &PartStructure, r: usize, t: usize) -> Option<Self> {
        (r == t + 1 && parts.sizes().iter().all(|&n| n == t + 1)).then_some(Degeneracy::SingleMemberStar)
    }

    pub fn for_set_star(parts: &PartStructure, r: usize, t: usize) -> Option<Self> {
        (r == 2 * t && parts.sizes().iter().all(|&n| n == 2 * t))
            .then_some(Degeneracy::ComplementaryBoxes)
    }
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::SingleMemberStar => f.write_str("single-member-star"),
            Degeneracy::ComplementaryBoxes => f.write_str("complementary-boxes"),
        }
    }
}

/// A subfamily of a universe, stored as a membership bit vector.
#[derive(Clone)]
pub struct Family {
    universe: Arc<Universe>,
    bits: BitSet,
    degeneracy: Option<Degeneracy>,
}

impl Family {
    pub fn empty(universe: &Arc<Universe>) -> Self {
        Family {
            universe: Arc::clone(universe),
            bits: BitSet::new(universe.len()),
            degeneracy: None,
        }
    }

    pub fn full(universe: &Arc<Universe>) -> Self {
        Family {
            universe: Arc::clone(universe),
            bits: BitSet::full(universe.len()),
            degeneracy: None,
        }
    }

    pub fn from_bits(universe: &Arc<Universe>, bits: BitSet) -> Result<Self> {
        if bits.len() != universe.len() {
            return domain(format!(
                "bit vector of length {} for a universe of {}",
                bits.len(),
                universe.len()
            ));
        }
        Ok(Family {
            universe: Arc::clone(universe),
            bits,
            degeneracy: None,
        })
    }

    pub fn from_indices(universe: &Arc<Universe>, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut f = Family::empty(universe);
        for i in indices {
            if i >= universe.len() {
                return domain(format!("index {i} outside a universe of {}", universe.len()));
            }
            f.bits.insert(i);
        }
        Ok(f)
    }

    pub fn from_matchings<'m>(
        universe: &Arc<Universe>,
        members: impl IntoIterator<Item = &'m Matching>,
    ) -> Result<Self> {
        let mut f = Family::empty(universe);
        for m in members {
            let i = universe
                .index_of(m)
                .ok_or_else(|| Error::Domain(format!("{m} is not in the universe")))?;
            f.bits.insert(i);
        }
        Ok(f)
    }

    /// Every member of the universe satisfying `keep`.
    pub fn filter(universe: &Arc<Universe>, mut keep: impl FnMut(&Matching) -> bool) -> Self {
        let bits = BitSet::from_indices(
            universe.len(),
            universe
                .items()
                .iter()
                .enumerate()
                .filter(|(_, m)| keep(m))
                .map(|(i, _)| i),
        );
        Family {
            universe: Arc::clone(universe),
            bits,
            degeneracy: None,
        }
    }

    pub fn with_degeneracy(mut self, d: Option<Degeneracy>) -> Self {
        self.degeneracy = d;
        self
    }

    pub fn degeneracy(&self) -> Option<Degeneracy> {
        self.degeneracy
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn insert(&mut self, idx: usize) {
        self.bits.insert(idx);
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn contains(&self, m: &Matching) -> bool {
        self.universe
            .index_of(m)
            .is_some_and(|i| self.bits.contains(i))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn members(&self) -> impl Iterator<Item = &Matching> + '_ {
        self.bits.iter().map(|i| self.universe.get(i))
    }

    /// Errors unless both families index the same universe.
    pub fn check_same_universe(&self, other: &Family) -> Result<()> {
        if Arc::ptr_eq(&self.universe, &other.universe) || self.universe.same_shape(&other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    /// Edges contained in every member (all edges of the first member when
    /// the family has one element; empty for an empty family).
    pub fn common_edges(&self) -> Vec<Edge> {
        let mut members = self.members();
        let Some(first) = members.next() else {
            return Vec::new();
        };
        let mut common: Vec<Edge> = first.edges().to_vec();
        for m in members {
            common.retain(|e| m.contains_edge(e));
            if common.is_empty() {
                break;
            }
        }
        common
    }

    pub fn to_doc(&self, form: FamilyForm) -> FamilyDoc {
        let header = self.universe.header();
        let (members, matchings) = match form {
            FamilyForm::Indices => (Some(self.indices().collect()), None),
            FamilyForm::Matchings => (
                None,
                Some(
                    self.members()
                        .map(|m| m.edges().iter().map(|e| e.coords().to_vec()).collect())
                        .collect(),
                ),
            ),
        };
        FamilyDoc {
            parts: header.parts,
            r: header.r,
            sizes: header.sizes,
            count: header.count,
            members,
            matchings,
        }
    }

    /// Rebuilds a family from either serialised form; the header must match `universe`.
    pub fn from_doc(universe: &Arc<Universe>, doc: &FamilyDoc) -> Result<Self> {
        let header = universe.header();
        if doc.parts != header.parts || doc.r != header.r || doc.sizes != header.sizes || doc.count != header.count {
            return Err(Error::UniverseMismatch);
        }
        match (&doc.members, &doc.matchings) {
            (Some(idx), None) => Family::from_indices(universe, idx.iter().copied()),
            (None, Some(ms)) => {
                let k = universe.parts().k();
                let ms = ms
                    .iter()
                    .map(|tuples| {
                        Matching::new(k, tuples.iter().map(|t| Edge::new(t.clone())).collect())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Family::from_matchings(universe, ms.iter())
            }
            _ => Err(Error::Parse("family needs exactly one of `members` or `matchings`".into())),
        }
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.check_same_universe(other).is_ok() && self.bits == other.bits
    }
}

impl Eq for Family {}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Family")
            .field("parts", self.universe.parts())
            .field("sizes", &self.universe.sizes())
            .field("members", &self.bits)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyForm {
    Indices,
    Matchings,
}

/// Serialised family: universe header plus sorted member indices or explicit matchings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub parts: PartStructure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matchings: Option<Vec<Vec<Vec<Vertex>>>>,
}

/// `F_{|X}`: pair projections `P^i_j` of the members whose reduced projection is `x`.
pub fn restrict_family(
    family: &Family,
    i: usize,
    j: usize,
    x: &ReducedProjection,
) -> Result<Vec<PairProjection>> {
    if x.i != i || x.j != j {
        return domain("reduced projection was taken for different parts");
    }
    let mut out = Vec::new();
    for p in family.members() {
        if &p.reduced_projection(i, j)? == x {
            out.push(p.project_pair_unchecked(i, j));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Groups the members of a family by `R^i_j`, giving every non-empty `F_{|X}` at once.
pub fn partition_by_reduction(
    family: &Family,
    i: usize,
    j: usize,
) -> Result<BTreeMap<ReducedProjection, Vec<PairProjection>>> {
    let mut groups: BTreeMap<ReducedProjection, Vec<PairProjection>> = BTreeMap::new();
    for p in family.members() {
        groups
            .entry(p.reduced_projection(i, j)?)
            .or_default()
            .push(p.project_pair_unchecked(i, j));
    }
    for v in groups.values_mut() {
        v.sort();
        v.dedup();
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchings::DEFAULT_UNIVERSE_CAP;

    fn universe(parts: &[usize], r: usize) -> Arc<Universe> {
        Arc::new(
            Universe::enumerate(&PartStructure::new(parts.to_vec()).unwrap(), r, DEFAULT_UNIVERSE_CAP)
                .unwrap(),
        )
    }

    #[test]
    fn restriction_of_full_universe_partitions_it() {
        let u = universe(&[3, 3, 3], 2);
        let f = Family::full(&u);
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let groups = partition_by_reduction(&f, i, j).unwrap();
                let total: usize = groups.values().map(Vec::len).sum();
                assert_eq!(total, 108);
                let (x, members) = groups.iter().next().unwrap();
                assert_eq!(&restrict_family(&f, i, j, x).unwrap(), members);
            }
        }
    }

    #[test]
    fn singleton_has_one_reduction() {
        let u = universe(&[3, 3, 3], 2);
        let f = Family::from_indices(&u, [17]).unwrap();
        let groups = partition_by_reduction(&f, 0, 2).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups.values().next().unwrap().len(), 1);
    }

    #[test]
    fn restriction_stays_inside_shadow() {
        // members of a 1-star restricted by X live in P_{r, V_i(X), N_j}
        let u = universe(&[3, 3, 3], 2);
        let e = Edge::new(vec![1, 1, 1]);
        let f = Family::filter(&u, |m| m.contains_edge(&e));
        for (x, group) in partition_by_reduction(&f, 0, 1).unwrap() {
            let shadow = x.shadow().unwrap();
            assert!(!group.is_empty());
            for pp in group {
                let mut s = pp.first_shadow();
                s.sort_unstable();
                assert_eq!(s, shadow);
            }
        }
    }

    #[test]
    fn doc_round_trip_both_forms() {
        let u = universe(&[3, 3], 2);
        let f = Family::from_indices(&u, [0, 4, 17]).unwrap();
        for form in [FamilyForm::Indices, FamilyForm::Matchings] {
            let doc = f.to_doc(form);
            let json = serde_json::to_string(&doc).unwrap();
            let back: FamilyDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(Family::from_doc(&u, &back).unwrap(), f);
        }
        let other = universe(&[3, 4], 2);
        assert!(matches!(
            Family::from_doc(&other, &f.to_doc(FamilyForm::Indices)),
            Err(Error::UniverseMismatch)
        ));
    }

    #[test]
    fn mixing_universes_is_an_error() {
        let a = Family::full(&universe(&[3, 3], 2));
        let b = Family::full(&universe(&[3, 3], 1));
        assert!(matches!(a.check_same_universe(&b), Err(Error::UniverseMismatch)));
        let c = Family::full(&universe(&[3, 3], 2));
        assert!(a.check_same_universe(&c).is_ok());
    }
}
