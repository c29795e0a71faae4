//! Extractive key point summaries for collections of arguments.
//!
//! The pipeline embeds a topic's arguments, groups them with agglomerative
//! clustering, and picks one representative per cluster by counting how many
//! cluster-mates a pair matcher says it matches. The evaluation side scores
//! any summary by how many reference key points it covers, how redundant it
//! is, and (for comparison) ROUGE. A sampler builds pseudo-summaries with a
//! known coverage so that metrics themselves can be checked.
//!
//! ```
//! use kpsum::selection::score_ssf;
//!
//! // three matches, ten words, exponent five
//! assert!((score_ssf(3, 10, 5.0).unwrap() - 24.3).abs() < 1e-12);
//! ```

pub mod clustering;
pub mod corpus;
pub mod coverage_datasets;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod matching;
pub mod pipeline;
pub mod selection;
pub mod text;

mod remote;

pub use error::{Error, ErrorKind, Result};
pub use remote::RemoteConfig;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/corpus.md")]
mod book_corpus {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/backends.md")]
mod book_backends {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/clustering.md")]
mod book_clustering {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/selection.md")]
mod book_selection {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/evaluation.md")]
mod book_evaluation {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coverage-datasets.md")]
mod book_coverage_datasets {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
