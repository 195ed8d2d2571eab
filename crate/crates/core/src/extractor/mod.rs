//! POS-pattern relation extraction over simplified sentences.
//!
//! Predicates follow the `V | V P | V W* P` shape: a verb group, optionally
//! closed by a preposition. Arguments are noun-phrase-like token runs found
//! on either side of the predicate. [`link_layers`] then sorts tuples into
//! the core layer and numbered context layers.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::simplifier::SimplificationResult;
use crate::text::detokenize;
use crate::treebank::{Span, Token};

/// Subject text given to context tuples whose subject is the inserted "This".
pub const CORE_FACT: &str = "CORE FACT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    CoreFact,
    /// 1-based position of the context in the simplification result.
    Context(usize),
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Layer::CoreFact => f.write_str("CORE_FACT"),
            Layer::Context(k) => write!(f, "CONTEXT({k})"),
        }
    }
}

impl std::str::FromStr for Layer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "CORE_FACT" {
            return Ok(Layer::CoreFact);
        }
        s.strip_prefix("CONTEXT(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|k| k.parse().ok())
            .map(Layer::Context)
            .ok_or_else(|| format!("bad layer `{s}`"))
    }
}

/// A token span of a sentence and its surface text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Argument {
    pub span: Span,
    pub text: String,
}

impl Argument {
    fn new(tokens: &[Token], span: Span) -> Self {
        Argument {
            span,
            text: detokenize(&tokens[span.indices()].iter().map(|t| t.text.as_str()).collect::<Vec<_>>()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub subject: Argument,
    pub predicate: Argument,
    pub object: Option<Argument>,
    /// Unset until [`link_layers`] runs.
    pub layer: Option<Layer>,
    /// Core sentence a context tuple belongs to.
    pub attached_to: Option<String>,
}

impl fmt::Display for Extraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}", self.predicate.text, self.subject.text)?;
        if let Some(o) = &self.object {
            write!(f, "; {}", o.text)?;
        }
        f.write_str(")")
    }
}

/// Anything that turns one sentence's tokens into tuples.
pub trait RelationExtractor {
    fn extract(&self, tokens: &[Token]) -> Vec<Extraction>;
}

/// The built-in POS-pattern extractor.
#[derive(Debug, Clone, Copy, Default)]
pub struct PosPatternExtractor;

impl RelationExtractor for PosPatternExtractor {
    fn extract(&self, tokens: &[Token]) -> Vec<Extraction> {
        extract_tuples(tokens)
    }
}

const BE: &[&str] = &["be", "is", "are", "was", "were", "been", "being", "am", "'s", "'re", "'m"];
const LIGHT: &[&str] = &[
    "have", "has", "had", "having", "make", "makes", "made", "making", "take", "takes", "took", "taken", "taking",
    "give", "gives", "gave", "given", "giving", "get", "gets", "got", "gotten", "getting", "do", "does", "did",
    "done",
];

fn is_verb(t: &Token) -> bool {
    t.is_verb()
}

fn is_prep(t: &Token) -> bool {
    matches!(t.pos.as_str(), "IN" | "TO")
}

fn is_nominal(t: &Token) -> bool {
    let p = t.pos.as_str();
    p.starts_with("NN") || p.starts_with("JJ") || matches!(p, "DT" | "PDT" | "PRP" | "PRP$" | "CD" | "POS" | "$")
}

/// W in `V W* P`.
fn is_filler(t: &Token) -> bool {
    let p = t.pos.as_str();
    p.starts_with("NN") || p.starts_with("JJ") || p.starts_with("RB") || matches!(p, "DT" | "PRP" | "PRP$")
}

fn has_lemma(t: &Token, forms: &[&str]) -> bool {
    forms.contains(&t.text.to_lowercase().as_str())
}

/// Verbs with interleaved adverbs, "to" and particles, ending on a verb
/// (or a trailing particle).
fn verb_group(tokens: &[Token], start: usize) -> usize {
    let mut last = start;
    let mut k = start + 1;
    while k < tokens.len() {
        let t = &tokens[k];
        if is_verb(t) {
            last = k;
        } else if !matches!(t.pos.as_str(), "RB" | "TO" | "RP") {
            break;
        }
        k += 1;
    }
    let mut end = last + 1;
    if tokens.get(end).is_some_and(|t| t.pos == "RP") {
        end += 1;
    }
    end
}

/// The predicate starting at `start`: V, V P or (light verbs) V W* P.
fn predicate(tokens: &[Token], start: usize) -> Span {
    let end = verb_group(tokens, start);
    let head = &tokens[end - 1];
    let next = tokens.get(end);
    if next.is_some_and(is_prep) && !has_lemma(head, BE) {
        return Span::new(start, end + 1);
    }
    if has_lemma(head, LIGHT) {
        let mut k = end;
        while tokens.get(k).is_some_and(is_filler) {
            k += 1;
        }
        if k > end && tokens.get(k).is_some_and(is_prep) {
            return Span::new(start, k + 1);
        }
    }
    Span::new(start, end)
}

/// Nominal run ending right before `end`, skipping one comma-enclosed
/// insert (an appositive) and adverbs next to the predicate.
fn subject(tokens: &[Token], end: usize) -> Option<Span> {
    let mut j = end;
    while j > 0 && tokens[j - 1].pos.starts_with("RB") {
        j -= 1;
    }
    if j > 0 && tokens[j - 1].pos == "," {
        let open = tokens[..j - 1].iter().rposition(|t| t.pos == ",")?;
        if open + 1 == j - 1 || tokens[open + 1..j - 1].iter().any(is_verb) {
            return None;
        }
        j = open;
    }
    let stop = j;
    if stop == 0 || !is_nominal(&tokens[stop - 1]) {
        return None;
    }
    if tokens[stop - 1].pos == "PRP" {
        return Some(Span::new(stop - 1, stop));
    }
    let mut i = stop;
    while i > 0 && is_nominal(&tokens[i - 1]) && !(tokens[i - 1].pos == "PRP" && i != stop) {
        i -= 1;
    }
    Some(Span::new(i, stop))
}

fn grounded_in_time(t: &Token) -> bool {
    matches!(t.ne.as_str(), "DATE" | "TIME")
}

/// Nominal run after the predicate, with prepositional extensions; a
/// phrase about a date or time ends it.
fn object(tokens: &[Token], start: usize) -> Option<Span> {
    let nominal_run = |from: usize| {
        let mut k = from;
        while tokens
            .get(k)
            .is_some_and(|t| is_nominal(t) || t.pos.starts_with("RB"))
        {
            if k > from && tokens[k].pos == "PRP" {
                break;
            }
            k += 1;
        }
        k
    };
    let mut k = start;
    if tokens.get(k).is_some_and(is_prep) {
        k += 1;
    }
    let end = nominal_run(k);
    if end == k {
        return None;
    }
    let mut k = end;
    while tokens.get(k).is_some_and(is_prep) {
        let e = nominal_run(k + 1);
        if e == k + 1 || tokens[k + 1..e].iter().any(grounded_in_time) {
            break;
        }
        k = e;
    }
    Some(Span::new(start, k))
}

/// Extracts `predicate(subject; object)` tuples from one tagged sentence.
/// A predicate without a subject yields no tuple.
pub fn extract_tuples(tokens: &[Token]) -> Vec<Extraction> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !is_verb(&tokens[i]) {
            i += 1;
            continue;
        }
        let pred = predicate(tokens, i);
        i = pred.end;
        let Some(subj) = subject(tokens, pred.start) else {
            continue;
        };
        let obj = object(tokens, pred.end);
        out.push(Extraction {
            subject: Argument::new(tokens, subj),
            predicate: Argument::new(tokens, pred),
            object: obj.map(|o| Argument::new(tokens, o)),
            layer: None,
            attached_to: None,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("context `{0}` is not attached to any core sentence")]
    DanglingAttachment(String),
}

/// Assigns layers: tuples of core sentences become core facts, tuples of the
/// k-th context become `CONTEXT(k)` and point at the core the context
/// belongs to. A context subject that is the inserted "This" is replaced by
/// [`CORE_FACT`].
///
/// `raw` maps core and context ids to their unlinked tuples.
pub fn link_layers(
    result: &SimplificationResult,
    raw: &BTreeMap<String, Vec<Extraction>>,
) -> Result<Vec<Extraction>, LinkError> {
    let mut out = Vec::new();
    for core in &result.cores {
        for e in raw.get(&core.id).into_iter().flatten() {
            out.push(Extraction {
                layer: Some(Layer::CoreFact),
                attached_to: None,
                ..e.clone()
            });
        }
    }
    for (k, ctx) in result.contexts.iter().enumerate() {
        let core = result
            .root_core(ctx)
            .ok_or_else(|| LinkError::DanglingAttachment(ctx.id.clone()))?;
        for e in raw.get(&ctx.id).into_iter().flatten() {
            let mut e = e.clone();
            if e.subject.span == Span::new(0, 1) && e.subject.text == "This" {
                e.subject.text = CORE_FACT.to_string();
            }
            e.layer = Some(Layer::Context(k + 1));
            e.attached_to = Some(core.id.clone());
            out.push(e);
        }
    }
    Ok(out)
}

/// Runs the extractor over every sentence of `result` and links the layers.
pub fn extract_layered(
    result: &SimplificationResult,
    extractor: &dyn RelationExtractor,
) -> Result<Vec<Extraction>, LinkError> {
    let mut raw = BTreeMap::new();
    for c in &result.cores {
        raw.insert(c.id.clone(), extractor.extract(&c.tokens));
    }
    for c in &result.contexts {
        raw.insert(c.id.clone(), extractor.extract(&c.tokens));
    }
    link_layers(result, &raw)
}
