use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::clique::{all_max_cliques, max_clique_seeded, CliqueOptions, DEFAULT_MAXIMA_CAP, DEFAULT_NODE_BUDGET};
use super::graph::{build_compat_graph, DEFAULT_GRAPH_CAP};
use crate::combinat::{t_set_star_size, t_star_size, BigCount};
use crate::constructions::{t_set_star, t_star};
use crate::error::{Error, Result};
use crate::matchings::{Edge, Family, PartStructure, Universe, Vertex, DEFAULT_UNIVERSE_CAP};
use crate::predicates::{classify_star, family_satisfies, Predicate, StarClassification, StarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundStatus {
    MatchesStarBound,
    ExceedsStarBound,
    BelowStarBound,
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundStatus::MatchesStarBound => "MATCHES_STAR_BOUND",
            BoundStatus::ExceedsStarBound => "EXCEEDS_STAR_BOUND",
            BoundStatus::BelowStarBound => "BELOW_STAR_BOUND",
        })
    }
}

/// Number of maximum families, or `overflow` past the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximaCount {
    Exact(usize),
    Overflow,
}

impl fmt::Display for MaximaCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaximaCount::Exact(n) => write!(f, "{n}"),
            MaximaCount::Overflow => f.write_str("overflow"),
        }
    }
}

impl Serialize for MaximaCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MaximaCount::Exact(n) => s.serialize_u64(*n as u64),
            MaximaCount::Overflow => s.serialize_str("overflow"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalOptions {
    pub universe_cap: usize,
    pub graph_cap: usize,
    pub node_budget: u64,
    pub maxima_cap: usize,
    pub workers: usize,
    /// Enumerate and classify every maximum family.
    pub all_maxima: bool,
    /// Start the search from the size of a star, which is always feasible.
    pub seed_with_star: bool,
}

impl Default for ExtremalOptions {
    fn default() -> Self {
        ExtremalOptions {
            universe_cap: DEFAULT_UNIVERSE_CAP,
            graph_cap: DEFAULT_GRAPH_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            maxima_cap: DEFAULT_MAXIMA_CAP,
            workers: 0,
            all_maxima: false,
            seed_with_star: false,
        }
    }
}

impl ExtremalOptions {
    fn clique(&self) -> CliqueOptions {
        CliqueOptions {
            workers: self.workers,
            node_budget: self.node_budget,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximumSummary {
    pub members: Vec<usize>,
    pub classification: StarClassification,
}

/// Outcome of one exact maximum-family computation.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub parts: PartStructure,
    pub sizes: Vec<usize>,
    pub predicate: Predicate,
    /// Set for the weakly set-intersecting predicate, whose definition is inferred.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inferred_definition: bool,
    pub universe_size: usize,
    pub max_size: usize,
    #[serde(serialize_with = "as_decimal")]
    pub star_bound: BigCount,
    pub status: BoundStatus,
    #[serde(serialize_with = "as_matchings")]
    pub witness: Family,
    pub witness_classification: StarClassification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_maxima_count: Option<MaximaCount>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub maxima: Vec<MaximumSummary>,
    /// Number of maxima per classification label.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tally: BTreeMap<String, usize>,
}

pub(crate) fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn as_matchings<S: Serializer>(f: &Family, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(f.members())
}

impl ExtremalReport {
    /// Whether every enumerated maximum has the given kind.
    pub fn all_maxima_are(&self, kind: StarKind) -> bool {
        matches!(self.all_maxima_count, Some(MaximaCount::Exact(_)))
            && self.maxima.iter().all(|m| m.classification.kind == kind)
    }

    /// One-line summary such as `max=4, status=MATCHES_STAR_BOUND, star_bound=4`.
    pub fn headline(&self) -> String {
        format!(
            "max={}, status={}, star_bound={}",
            self.max_size, self.status, self.star_bound
        )
    }

    /// `maxima=9, all 1-stars` or a per-label breakdown.
    pub fn maxima_line(&self) -> Option<String> {
        let count = self.all_maxima_count?;
        let detail = match self.tally.len() {
            0 => String::new(),
            1 => {
                let (label, _) = self.tally.iter().next().expect("one entry");
                if label == "none" {
                    ", all non-star".to_string()
                } else {
                    format!(", all {label}s")
                }
            }
            _ => {
                let parts: Vec<String> = self.tally.iter().map(|(l, n)| format!("{l}: {n}")).collect();
                format!(", {}", parts.join(", "))
            }
        };
        Some(format!("maxima={count}{detail}"))
    }
}

/// The size of the star the predicate's bound refers to, summed over the
/// levels that can hold one.
pub fn star_bound(parts: &PartStructure, sizes: &[usize], pred: &Predicate) -> Result<BigCount> {
    let mut total = BigCount::zero();
    for &r in sizes.iter().filter(|&&r| r >= pred.t) {
        total += if pred.kind.is_set() {
            t_set_star_size(parts, r, pred.t)?
        } else {
            t_star_size(parts, r, pred.t)?
        };
    }
    Ok(total)
}

/// A feasible star for the predicate: diagonal centre edges or a diagonal box.
fn reference_star(universe: &Arc<Universe>, pred: &Predicate) -> Result<Option<Family>> {
    let parts = universe.parts();
    let t = pred.t;
    if t > universe.sizes()[0] || t > parts.min_size() {
        return Ok(None);
    }
    let f = if pred.kind.is_set() {
        let side: Vec<Vertex> = (1..=t as Vertex).collect();
        t_set_star(universe, &vec![side; parts.k()])?
    } else {
        let centre: Vec<Edge> = (1..=t as Vertex).map(|x| Edge::new(vec![x; parts.k()])).collect();
        t_star(universe, &centre)?
    };
    Ok(Some(f))
}

/// Exact maximum family of `P_{R, parts}` under `pred`, compared with the star bound.
pub fn extremal(parts: &PartStructure, sizes: &[usize], pred: Predicate, opts: &ExtremalOptions) -> Result<ExtremalReport> {
    let universe = Arc::new(Universe::enumerate_levels(parts, sizes, opts.universe_cap)?);
    let graph = build_compat_graph(&universe, pred, opts.graph_cap, opts.workers)?;
    let bound = star_bound(parts, universe.sizes(), &pred)?;

    let mut lower = 0;
    if opts.seed_with_star {
        if let Some(star) = reference_star(&universe, &pred)? {
            if !graph.is_clique(&star) {
                return Err(Error::Internal(format!("the reference star is not {pred}")));
            }
            lower = star.len();
        }
    }
    let (max_size, witness_idx) = max_clique_seeded(graph.graph(), lower, &opts.clique())?;
    let witness = graph.family(&witness_idx);
    if !family_satisfies(&witness, &pred) {
        return Err(Error::Internal("witness fails the predicate".into()));
    }

    let status = match BigCount::from(max_size).cmp(&bound) {
        std::cmp::Ordering::Equal => BoundStatus::MatchesStarBound,
        std::cmp::Ordering::Greater => BoundStatus::ExceedsStarBound,
        std::cmp::Ordering::Less => {
            return Err(Error::Internal(format!(
                "clique maximum {max_size} is below the feasible star size {bound}"
            )))
        }
    };

    let witness_classification = classify_star(&witness, pred.t)?;
    let mut all_maxima_count = None;
    let mut maxima = Vec::new();
    let mut tally = BTreeMap::new();
    if opts.all_maxima {
        match all_max_cliques(graph.graph(), max_size, opts.maxima_cap, &opts.clique()) {
            Ok(cliques) => {
                all_maxima_count = Some(MaximaCount::Exact(cliques.len()));
                for members in cliques {
                    let fam = graph.family(&members);
                    let classification = classify_star(&fam, pred.t)?;
                    *tally.entry(classification.label()).or_insert(0) += 1;
                    maxima.push(MaximumSummary { members, classification });
                }
            }
            Err(Error::MaximaOverflow { .. }) => all_maxima_count = Some(MaximaCount::Overflow),
            Err(e) => return Err(e),
        }
    }

    Ok(ExtremalReport {
        parts: parts.clone(),
        sizes: universe.sizes().to_vec(),
        predicate: pred,
        inferred_definition: pred.kind == crate::predicates::PredicateKind::WeaklySetIntersecting && parts.k() >= 3,
        universe_size: universe.len(),
        max_size,
        star_bound: bound,
        status,
        witness,
        witness_classification,
        all_maxima_count,
        maxima,
        tally,
    })
}
