//! Exact computation of maximum intersecting families of matchings in
//! complete k-partite k-graphs.

pub mod bitset;
pub mod combinat;
pub mod constructions;
pub mod error;
pub mod harness;
pub mod matchings;
pub mod predicates;
pub mod search;

pub use error::{Error, Result};
pub use matchings::{Edge, Family, Matching, PartStructure, Universe};
pub use predicates::{classify_star, Predicate, PredicateKind, StarKind};
pub use search::{extremal, ExtremalOptions, ExtremalReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/matchings.md")]
    mod matchings {}
    #[doc = include_str!("../../../book/src/predicates.md")]
    mod predicates {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/campaigns.md")]
    mod campaigns {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
