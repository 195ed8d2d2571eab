//! Rule catalog and the simplification engine.
//!
//! A sentence is first split into clauses. Each clause is then run through
//! the disembedding rules in priority order: every surviving match yields a
//! context sentence and contributes its token positions to the set that is
//! deleted from the clause to form the core sentence. Generated contexts are
//! re-annotated as flat trees and offered to the rules again until nothing
//! changes.

mod catalog;
mod engine;
mod extract;
mod paraphrase;
mod reduce;
mod split;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::treebank::Token;
use crate::treepattern::TreePattern;

pub use catalog::{load_catalog, Catalog, CatalogEntry, CatalogError, DEFAULT_CATALOG};
pub use engine::{re_annotate, simplify};
pub use extract::{r_extract, r_extract_with, ExtractionMatch};
pub use paraphrase::{infer_copula, r_paraphrase};
pub use reduce::reduce_core;
pub use split::split_clauses;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    RelativeClauseNonrestrictive,
    AppositiveNonrestrictive,
    AppositiveRestrictive,
    ParticipialPhrase,
    AdjectiveAdverbPhrase,
    PrepositionalPhrase,
    LeadNounPhrase,
    Attribution,
    Parenthetical,
    ClauseSplit,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::RelativeClauseNonrestrictive,
        Family::AppositiveNonrestrictive,
        Family::AppositiveRestrictive,
        Family::ParticipialPhrase,
        Family::AdjectiveAdverbPhrase,
        Family::PrepositionalPhrase,
        Family::LeadNounPhrase,
        Family::Attribution,
        Family::Parenthetical,
        Family::ClauseSplit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::RelativeClauseNonrestrictive => "RELATIVE_CLAUSE_NONRESTRICTIVE",
            Family::AppositiveNonrestrictive => "APPOSITIVE_NONRESTRICTIVE",
            Family::AppositiveRestrictive => "APPOSITIVE_RESTRICTIVE",
            Family::ParticipialPhrase => "PARTICIPIAL_PHRASE",
            Family::AdjectiveAdverbPhrase => "ADJECTIVE_ADVERB_PHRASE",
            Family::PrepositionalPhrase => "PREPOSITIONAL_PHRASE",
            Family::LeadNounPhrase => "LEAD_NOUN_PHRASE",
            Family::Attribution => "ATTRIBUTION",
            Family::Parenthetical => "PARENTHETICAL",
            Family::ClauseSplit => "CLAUSE_SPLIT",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == wanted)
            .ok_or_else(|| format!("unknown rule family `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    /// The antecedent becomes the subject of the context sentence.
    AntecedentLink,
    /// "This" plus a copula is put in front of the constituent.
    ComplementInsert,
}

/// How a match turns into positions and a context sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParaphraseRecipe {
    pub strategy: Strategy,
    /// Capture whose node is the extracted constituent.
    pub delete: String,
    /// Further captures deleted with it, and delimiter tags (`,` `:` `-LRB-`
    /// `-RRB-`) absorbed when adjacent.
    pub trim: Vec<String>,
}

/// Delimiter tags a recipe may list in `trim`.
pub const DELIMITER_TAGS: [&str; 4] = [",", ":", "-LRB-", "-RRB-"];

#[derive(Debug, Clone)]
pub struct SimplificationRule {
    pub name: String,
    pub family: Family,
    pub priority: i64,
    pub pattern: TreePattern,
    pub recipe: ParaphraseRecipe,
}

impl SimplificationRule {
    pub fn is_split(&self) -> bool {
        self.family == Family::ClauseSplit
    }

    /// Capture names listed in `trim`, in order.
    pub fn trim_captures(&self) -> impl Iterator<Item = &str> {
        self.recipe
            .trim
            .iter()
            .map(String::as_str)
            .filter(|t| !DELIMITER_TAGS.contains(t))
    }

    pub fn trims(&self, tag: &str) -> bool {
        self.recipe.trim.iter().any(|t| t == tag)
    }
}

/// Where a token of a generated sentence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenOrigin {
    /// The token at this index of the input sentence.
    Source(usize),
    /// A second copy of an input token, e.g. a subject shared by two clauses.
    Copied(usize),
    /// A word the engine added.
    Inserted,
}

impl TokenOrigin {
    pub fn source(self) -> Option<usize> {
        match self {
            TokenOrigin::Source(i) => Some(i),
            _ => None,
        }
    }

    /// Origin of this token one level further out, given the origins of the
    /// sentence it was indexed against.
    pub(crate) fn through(self, outer: &[TokenOrigin]) -> TokenOrigin {
        match self {
            TokenOrigin::Source(i) => outer[i],
            TokenOrigin::Copied(i) => match outer[i] {
                TokenOrigin::Source(j) | TokenOrigin::Copied(j) => TokenOrigin::Copied(j),
                TokenOrigin::Inserted => TokenOrigin::Inserted,
            },
            TokenOrigin::Inserted => TokenOrigin::Inserted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreSentence {
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub origin: Vec<TokenOrigin>,
    /// Indices dropped while repairing delimiters after deletion.
    pub dropped: Vec<usize>,
}

impl CoreSentence {
    /// Input indices that survive in this core.
    pub fn source_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.origin.iter().filter_map(|o| o.source())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextSentence {
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
    pub rule: String,
    pub family: Family,
    /// Id of the core sentence or context this one elaborates.
    pub attached_to: String,
}

/// Kind of a trace entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceKind {
    /// A rule match that produced a context.
    Rule(Family),
    /// A clause split; only delimiters are recorded.
    Split,
    /// Punctuation dropped while tidying a core.
    Repair,
}

/// One step of a simplification run.
///
/// In round 1 indices refer to the input sentence; in later rounds they
/// refer to the tokens of the context named by `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: String,
    pub kind: TraceKind,
    pub target: String,
    pub round: usize,
    pub positions: BTreeSet<usize>,
    pub delimiters: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplificationResult {
    pub id: String,
    pub input: String,
    pub cores: Vec<CoreSentence>,
    pub contexts: Vec<ContextSentence>,
    pub trace: Vec<TraceEntry>,
    /// Rounds run, counting the one over the clauses.
    pub rounds: usize,
}

impl SimplificationResult {
    pub fn core(&self, id: &str) -> Option<&CoreSentence> {
        self.cores.iter().find(|c| c.id == id)
    }

    pub fn context(&self, id: &str) -> Option<&ContextSentence> {
        self.contexts.iter().find(|c| c.id == id)
    }

    /// Follows `attached_to` links up to the core a context belongs to.
    pub fn root_core(&self, context: &ContextSentence) -> Option<&CoreSentence> {
        let mut target = context.attached_to.as_str();
        for _ in 0..=self.contexts.len() {
            if let Some(core) = self.core(target) {
                return Some(core);
            }
            target = self.context(target)?.attached_to.as_str();
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyConfig {
    /// Upper bound on rounds, the clause round included.
    pub max_iterations: usize,
    /// Reporting verbs accepted by attribution rules, lowercase.
    pub speech_verbs: Vec<String>,
}

pub const DEFAULT_SPEECH_VERBS: &[&str] = &[
    "say", "says", "said", "state", "states", "stated", "report", "reports", "reported", "claim",
    "claims", "claimed", "announce", "announces", "announced", "argue", "argues", "argued", "add",
    "adds", "added", "explain", "explains", "explained", "note", "notes", "noted", "tell", "tells",
    "told", "believe", "believes", "believed", "think", "thinks", "thought", "insist", "insists",
    "insisted", "warn", "warns", "warned",
];

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig {
            max_iterations: 10,
            speech_verbs: DEFAULT_SPEECH_VERBS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("no fixpoint after {} rounds", .0.rounds)]
    IterationLimitExceeded(Box<SimplificationResult>),
    #[error("deleting the matched positions leaves an empty core")]
    EmptyCore,
    #[error("rule `{0}` links to an antecedent but the match has none")]
    MissingAntecedent(String),
    #[error("max_iterations must be at least 1")]
    InvalidConfig,
}
