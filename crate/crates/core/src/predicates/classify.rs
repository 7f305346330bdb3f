use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::constructions::{edge_centres, star_from_centre, Centre};
use crate::error::Result;
use crate::matchings::{Degeneracy, Family, PartStructure, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarKind {
    Star,
    SetStar,
    WeakStar,
    WeakSetStar,
    None,
}

impl StarKind {
    /// Label with the threshold filled in, e.g. `weak-2-set-star`.
    pub fn label(self, t: usize) -> String {
        match self {
            StarKind::Star => format!("{t}-star"),
            StarKind::SetStar => format!("{t}-set-star"),
            StarKind::WeakStar => format!("weak-{t}-star"),
            StarKind::WeakSetStar => format!("weak-{t}-set-star"),
            StarKind::None => "none".to_string(),
        }
    }
}

/// What kind of star a family is, with every centre that realises it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarClassification {
    pub t: usize,
    /// Strongest label: star, then set-star, then the weak variants.
    pub kind: StarKind,
    pub star_centres: Vec<Centre>,
    pub set_star_centres: Vec<Centre>,
    pub weak_star: bool,
    pub weak_set_star: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<Degeneracy>,
}

impl StarClassification {
    pub fn is_star(&self) -> bool {
        !self.star_centres.is_empty()
    }

    pub fn is_set_star(&self) -> bool {
        !self.set_star_centres.is_empty()
    }

    pub fn label(&self) -> String {
        self.kind.label(self.t)
    }
}

impl fmt::Display for StarClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())?;
        let centres = match self.kind {
            StarKind::Star => &self.star_centres,
            StarKind::SetStar => &self.set_star_centres,
            _ => return Ok(()),
        };
        let shown: Vec<String> = centres.iter().map(|c| c.to_string()).collect();
        write!(f, " centre {}", shown.join(" | "))
    }
}

/// Centres `C` such that `family` is exactly the t-star with centre `C`.
pub fn star_centres(family: &Family, t: usize) -> Result<Vec<Centre>> {
    if family.is_empty() || t == 0 || t > family.universe().sizes()[0] {
        return Ok(Vec::new());
    }
    let common = family.common_edges();
    let mut out = Vec::new();
    for centre in edge_centres(&common, t) {
        let c = Centre::Edges(centre);
        if star_from_centre(family.universe(), &c)?.bits() == family.bits() {
            out.push(c);
        }
    }
    Ok(out)
}

/// Boxes `C` such that `family` is exactly the t-set-star with centre `C`.
///
/// Every member of a set-star puts exactly t edges in the box, and those
/// edges span it, so candidate boxes come from t-subsets of one member.
pub fn set_star_centres(family: &Family, t: usize) -> Result<Vec<Centre>> {
    let universe = family.universe();
    if family.is_empty() || t == 0 || t > universe.sizes()[0] {
        return Ok(Vec::new());
    }
    let k = universe.parts().k();
    let first = family.members().next().expect("non-empty");
    let mut boxes: Vec<Vec<Vec<u32>>> = edge_centres(first.edges(), t)
        .map(|edges| {
            (0..k)
                .map(|i| {
                    let mut side: Vec<u32> = edges.iter().map(|e| e.coord(i)).collect();
                    side.sort_unstable();
                    side
                })
                .collect()
        })
        .collect();
    boxes.sort();
    boxes.dedup();
    let mut out = Vec::new();
    for b in boxes {
        let c = Centre::Box(b);
        if family.members().all(|m| c.admits(m)) && star_from_centre(universe, &c)?.bits() == family.bits() {
            out.push(c);
        }
    }
    Ok(out)
}

/// `F^i_j = {P^i_j : P in F}` as a family of the two-part universe with the same levels.
pub fn projection_family(family: &Family, i: usize, j: usize, target: &Arc<Universe>) -> Result<Family> {
    let projected: Vec<_> = family
        .members()
        .map(|m| m.project_pair(i, j).map(|p| p.to_matching()))
        .collect::<Result<_>>()?;
    Family::from_matchings(target, projected.iter())
}

struct PairUniverses {
    sizes: Vec<usize>,
    cache: HashMap<(usize, usize), Arc<Universe>>,
}

impl PairUniverses {
    fn new(sizes: &[usize]) -> Self {
        PairUniverses {
            sizes: sizes.to_vec(),
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, parts: &PartStructure, i: usize, j: usize) -> Result<Arc<Universe>> {
        let key = (parts.size(i), parts.size(j));
        if let Some(u) = self.cache.get(&key) {
            return Ok(Arc::clone(u));
        }
        let u = Arc::new(Universe::enumerate_levels(&parts.pair(i, j)?, &self.sizes, usize::MAX)?);
        self.cache.insert(key, Arc::clone(&u));
        Ok(u)
    }
}

fn every_projection(
    family: &Family,
    mut test: impl FnMut(&Family) -> Result<bool>,
) -> Result<bool> {
    let universe = family.universe();
    let parts = universe.parts();
    let k = parts.k();
    let mut pairs = PairUniverses::new(universe.sizes());
    for i in 0..k {
        for j in (i + 1)..k {
            let target = pairs.get(parts, i, j)?;
            if !test(&projection_family(family, i, j, &target)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every projection `F^i_j` is a full t-star of its two-part universe.
pub fn projection_is_star(family: &Family, t: usize) -> Result<bool> {
    if family.universe().parts().k() <= 2 {
        return Ok(!star_centres(family, t)?.is_empty());
    }
    every_projection(family, |p| Ok(!star_centres(p, t)?.is_empty()))
}

/// Every projection `F^i_j` is a full t-set-star of its two-part universe.
pub fn projection_is_set_star(family: &Family, t: usize) -> Result<bool> {
    if family.universe().parts().k() <= 2 {
        return Ok(!set_star_centres(family, t)?.is_empty());
    }
    every_projection(family, |p| Ok(!set_star_centres(p, t)?.is_empty()))
}

/// Classifies `family` against the t-star, t-set-star and weak variants of
/// its own universe. All valid centres are returned, so degenerate
/// parameter sets show up as several centres.
pub fn classify_star(family: &Family, t: usize) -> Result<StarClassification> {
    let star_centres = star_centres(family, t)?;
    let set_star_centres = set_star_centres(family, t)?;
    let k = family.universe().parts().k();
    let (weak_star, weak_set_star) = if k <= 2 {
        (!star_centres.is_empty(), !set_star_centres.is_empty())
    } else if family.is_empty() {
        (false, false)
    } else {
        (projection_is_star(family, t)?, projection_is_set_star(family, t)?)
    };
    let kind = if !star_centres.is_empty() {
        StarKind::Star
    } else if !set_star_centres.is_empty() {
        StarKind::SetStar
    } else if weak_star {
        StarKind::WeakStar
    } else if weak_set_star {
        StarKind::WeakSetStar
    } else {
        StarKind::None
    };
    let degeneracy = family.universe().uniform_r().and_then(|r| {
        let parts = family.universe().parts();
        match kind {
            StarKind::Star | StarKind::WeakStar => Degeneracy::for_star(parts, r, t),
            StarKind::SetStar | StarKind::WeakSetStar => Degeneracy::for_set_star(parts, r, t),
            StarKind::None => None,
        }
    });
    Ok(StarClassification {
        t,
        kind,
        star_centres,
        set_star_centres,
        weak_star,
        weak_set_star,
        degeneracy,
    })
}
