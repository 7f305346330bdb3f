use std::io::{BufRead, Write};
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Edge, Matching, PartStructure, Vertex};
use crate::combinat::count_matchings;
use crate::error::{domain, Error, Result};

/// Default upper bound on the number of matchings a universe may hold.
pub const DEFAULT_UNIVERSE_CAP: usize = 1_000_000;

/// All matchings of `K_{N_1,...,N_k}` whose sizes lie in a level set `R`.
///
/// Items are grouped by level (ascending size) and sorted lexicographically
/// inside a level, so an index identifies a matching stably across runs.
#[derive(Debug, Clone)]
pub struct Universe {
    parts: PartStructure,
    sizes: Vec<usize>,
    items: Vec<Matching>,
    // offsets[l]..offsets[l + 1] is the index range of level sizes[l]
    offsets: Vec<usize>,
}

/// First line of the line-delimited universe format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseHeader {
    pub parts: PartStructure,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    pub count: usize,
}

impl Universe {
    /// `P_{r, N_k}`.
    pub fn enumerate(parts: &PartStructure, r: usize, cap: usize) -> Result<Universe> {
        Self::enumerate_levels(parts, &[r], cap)
    }

    /// `P_{R, N_k}`, the disjoint union of the levels in `sizes`.
    pub fn enumerate_levels(parts: &PartStructure, sizes: &[usize], cap: usize) -> Result<Universe> {
        let mut sizes = sizes.to_vec();
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.is_empty() {
            return domain("a universe needs at least one matching size");
        }
        let mut predicted = BigUint::from(0u32);
        for &r in &sizes {
            predicted += count_matchings(parts, r)?;
        }
        match predicted.to_usize() {
            Some(p) if p <= cap => {}
            _ => return Err(Error::UniverseTooLarge { predicted, cap }),
        }
        let mut items = Vec::new();
        let mut offsets = vec![0];
        for &r in &sizes {
            Enumerator::new(parts, r).run(&mut items);
            offsets.push(items.len());
        }
        Ok(Universe {
            parts: parts.clone(),
            sizes,
            items,
            offsets,
        })
    }

    pub fn parts(&self) -> &PartStructure {
        &self.parts
    }

    /// The level set `R`, ascending.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn uniform_r(&self) -> Option<usize> {
        match self.sizes.as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    /// The matching size of a uniform universe.
    pub fn r(&self) -> Result<usize> {
        self.uniform_r()
            .ok_or_else(|| Error::Domain("operation needs a single-level universe".into()))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Matching] {
        &self.items
    }

    pub fn get(&self, idx: usize) -> &Matching {
        &self.items[idx]
    }

    pub fn level_range(&self, r: usize) -> Option<Range<usize>> {
        let l = self.sizes.iter().position(|&s| s == r)?;
        Some(self.offsets[l]..self.offsets[l + 1])
    }

    pub fn index_of(&self, m: &Matching) -> Option<usize> {
        if m.arity() != self.parts.k() {
            return None;
        }
        let range = self.level_range(m.len())?;
        self.items[range.clone()]
            .binary_search(m)
            .ok()
            .map(|i| range.start + i)
    }

    /// Same part structure and level set; indices then coincide.
    pub fn same_shape(&self, other: &Universe) -> bool {
        self.parts == other.parts && self.sizes == other.sizes
    }

    pub fn header(&self) -> UniverseHeader {
        let (r, sizes) = match self.uniform_r() {
            Some(r) => (Some(r), None),
            None => (None, Some(self.sizes.clone())),
        };
        UniverseHeader {
            parts: self.parts.clone(),
            r,
            sizes,
            count: self.len(),
        }
    }

    /// Writes the header line followed by one JSON array of k-tuples per matching.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, &self.header())?;
        writeln!(w)?;
        for m in &self.items {
            serde_json::to_writer(&mut w, m)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// Reads and validates the format written by [`Universe::write_jsonl`].
    pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Universe> {
        let mut lines = reader.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Parse("empty universe file".into()))??;
        let header: UniverseHeader = serde_json::from_str(&header_line)?;
        let sizes = match (&header.r, &header.sizes) {
            (Some(r), None) => vec![*r],
            (None, Some(s)) => s.clone(),
            _ => return Err(Error::Parse("header needs exactly one of `r` or `sizes`".into())),
        };
        let k = header.parts.k();
        let mut items = Vec::with_capacity(header.count);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let tuples: Vec<Vec<Vertex>> = serde_json::from_str(&line)?;
            let m = Matching::new(k, tuples.into_iter().map(Edge::new).collect())?;
            m.check_in(&header.parts)?;
            items.push(m);
        }
        if items.len() != header.count {
            return Err(Error::Parse(format!(
                "header announces {} matchings, file holds {}",
                header.count,
                items.len()
            )));
        }
        let mut sorted_sizes = sizes.clone();
        sorted_sizes.sort_unstable();
        sorted_sizes.dedup();
        let mut offsets = vec![0];
        let mut cursor = 0;
        for &r in &sorted_sizes {
            let expected = count_matchings(&header.parts, r)?
                .to_usize()
                .ok_or_else(|| Error::Parse("level too large".into()))?;
            let level = items
                .get(cursor..cursor + expected)
                .ok_or_else(|| Error::Parse(format!("level {r} is incomplete")))?;
            if level.iter().any(|m| m.len() != r) || level.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!(
                    "level {r} is not in canonical order or has wrong sizes"
                )));
            }
            cursor += expected;
            offsets.push(cursor);
        }
        if cursor != items.len() {
            return Err(Error::Parse("trailing matchings outside the level set".into()));
        }
        Ok(Universe {
            parts: header.parts,
            sizes: sorted_sizes,
            items,
            offsets,
        })
    }
}

/// Depth-first enumeration of one level: edges are placed in increasing order
/// of their first coordinate, and each further coordinate is chosen among the
/// still-unused vertices of its part.
struct Enumerator<'a> {
    sizes: &'a [usize],
    r: usize,
    used: Vec<Vec<bool>>,
    coords: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl<'a> Enumerator<'a> {
    fn new(parts: &'a PartStructure, r: usize) -> Self {
        let sizes = parts.sizes();
        Enumerator {
            sizes,
            r,
            used: sizes.iter().map(|&n| vec![false; n + 1]).collect(),
            coords: vec![0; sizes.len()],
            edges: Vec::with_capacity(r),
        }
    }

    fn run(mut self, out: &mut Vec<Matching>) {
        self.place_edge(0, out);
    }

    fn place_edge(&mut self, prev_first: usize, out: &mut Vec<Matching>) {
        let step = self.edges.len();
        if step == self.r {
            out.push(Matching::from_canonical(self.sizes.len(), self.edges.clone()));
            return;
        }
        // leave room for the remaining edges' strictly larger first coordinates
        let last = self.sizes[0] - (self.r - step - 1);
        for x in (prev_first + 1)..=last {
            self.coords[0] = x as Vertex;
            self.fill_part(1, out);
        }
    }

    fn fill_part(&mut self, part: usize, out: &mut Vec<Matching>) {
        if part == self.sizes.len() {
            self.edges.push(Edge(self.coords.clone()));
            let first = self.coords[0] as usize;
            let saved = self.coords.clone();
            self.place_edge(first, out);
            self.coords = saved;
            self.edges.pop();
            return;
        }
        for y in 1..=self.sizes[part] {
            if !self.used[part][y] {
                self.used[part][y] = true;
                self.coords[part] = y as Vertex;
                self.fill_part(part + 1, out);
                self.used[part][y] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &[usize]) -> PartStructure {
        PartStructure::new(s.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let u = Universe::enumerate(&ps(&[2, 2]), 2, DEFAULT_UNIVERSE_CAP).unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(u.get(0), &Matching::from_tuples(&[[1, 1], [2, 2]]).unwrap());
        assert_eq!(Universe::enumerate(&ps(&[3, 3]), 1, 100).unwrap().len(), 9);
        assert_eq!(Universe::enumerate(&ps(&[3, 3, 3]), 2, 1000).unwrap().len(), 108);
    }

    #[test]
    fn cap_is_enforced_with_prediction() {
        match Universe::enumerate(&ps(&[3, 3, 3]), 2, 100) {
            Err(Error::UniverseTooLarge { predicted, cap }) => {
                assert_eq!(predicted, BigUint::from(108u32));
                assert_eq!(cap, 100);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn levels_and_lookup() {
        let u = Universe::enumerate_levels(&ps(&[3, 3]), &[2, 1], 1000).unwrap();
        assert_eq!(u.sizes(), &[1, 2]);
        assert_eq!(u.len(), 27);
        assert_eq!(u.level_range(2), Some(9..27));
        for (i, m) in u.items().iter().enumerate() {
            assert_eq!(u.index_of(m), Some(i));
        }
        let k1 = Universe::enumerate_levels(&ps(&[3]), &[0, 1, 2, 3], 100).unwrap();
        assert_eq!(k1.len(), 8);
        assert!(k1.get(0).is_empty());
    }

    #[test]
    fn jsonl_round_trip_and_rejects_tampering() {
        let u = Universe::enumerate_levels(&ps(&[3, 2]), &[1, 2], 1000).unwrap();
        let mut buf = Vec::new();
        u.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(r#"{"parts":[3,2],"sizes":[1,2],"count":12}"#));
        let back = Universe::read_jsonl(&buf[..]).unwrap();
        assert!(back.same_shape(&u));
        assert_eq!(back.items(), u.items());

        let mut lines: Vec<&str> = text.lines().collect();
        lines.swap(1, 2);
        let swapped = lines.join("\n");
        assert!(Universe::read_jsonl(swapped.as_bytes()).is_err());
    }
}
