//! Folksonomy construction from user-specified broader/narrower relations.
//!
//! Many users organize content into shallow two-level hierarchies (a
//! collection holding several sets). This crate aggregates those personal
//! hierarchies into one concept graph:
//!
//! 1. [`corpus`] loads `(user, collection, set)` records.
//! 2. [`normalize`] turns names into stemmed concept terms.
//! 3. [`aggregate`] delegates each collection→set relation onto term pairs,
//!    counts distinct supporting users per direction and resolves conflicts
//!    under a hard or soft constraint.
//! 4. [`graph`] prunes overly broad concepts by their smoothed out/in-degree
//!    ratio, links the rest and extracts role-annotated subgraphs.
//!
//! [`baseline`] implements the co-occurrence subsumption model used for
//! comparison, [`synth`] generates corpora with a planted taxonomy and
//! [`pipeline`] wires everything into reproducible runs with on-disk
//! artifacts.

pub mod aggregate;
pub mod baseline;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod normalize;
pub mod pipeline;
pub mod synth;

pub use aggregate::{Constraint, RelationSet, RelationTally, Tallies};
pub use corpus::{Corpus, CorpusStats, InputFormat, LoadReport, RawRecord};
pub use error::{Error, Result};
pub use graph::{ConceptGraph, PruneConfig, Role, SubgraphView};
pub use normalize::{NormalizerConfig, Term};
