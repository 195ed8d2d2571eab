//! Syntax-driven sentence simplification.
//!
//! A complex sentence, given as tokens plus a Penn Treebank constituency
//! parse, is split into one or more core sentences and a set of
//! self-contained context sentences built from the peripheral constituents
//! (relative clauses, appositives, participial phrases, leading phrases,
//! attributions, parentheticals). A small POS-pattern relation extractor
//! then turns the simplified sentences into layered
//! `predicate(subject; object)` tuples.
//!
//! Module map:
//!
//! - [`treebank`]: bracketed tree reader/writer and annotated-sentence ingestion.
//! - [`treepattern`]: Tregex-style tree pattern language.
//! - [`simplifier`]: rule catalog and the simplification engine.
//! - [`extractor`]: relation tuples and core/context layering.
//! - [`cli`]: the JSON Lines pipeline behind the `disembed` binary.

pub mod cli;
pub mod extractor;
pub mod simplifier;
pub mod text;
pub mod treebank;
pub mod treepattern;

pub use treebank::{parse_ptb, render_ptb, AnnotatedSentence, ParseNode, Span, Token};
pub use extractor::{extract_tuples, link_layers, Extraction, Layer};
pub use simplifier::{simplify, Catalog, SimplificationResult, SimplifyConfig};
pub use treepattern::{match_pattern, parse_pattern, MatchResult, TreePattern};
