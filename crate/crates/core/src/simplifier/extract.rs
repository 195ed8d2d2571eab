use std::collections::{BTreeMap, BTreeSet};

use super::{Family, SimplificationRule, SimplifyConfig, Strategy};
use crate::treebank::{AnnotatedSentence, ParseNode, Span};
use crate::treepattern::match_pattern;

/// One application site of a rule: the constituent to disembed and the
/// token positions it removes from the clause.
#[derive(Debug, Clone)]
pub struct ExtractionMatch<'a> {
    pub rule: String,
    pub family: Family,
    pub constituent: &'a ParseNode,
    pub antecedent: Option<&'a ParseNode>,
    pub captures: BTreeMap<String, &'a ParseNode>,
    /// Everything deleted from the clause, delimiters included.
    pub positions: BTreeSet<usize>,
    /// The absorbed punctuation within `positions`.
    pub delimiters: BTreeSet<usize>,
}

impl ExtractionMatch<'_> {
    /// Positions without the absorbed delimiters.
    pub fn marked(&self) -> BTreeSet<usize> {
        self.positions.difference(&self.delimiters).copied().collect()
    }

    /// The marked positions as an interval, when they are contiguous.
    pub fn marked_span(&self) -> Option<Span> {
        let m = self.marked();
        let (first, last) = (*m.first()?, *m.last()?);
        (last - first + 1 == m.len()).then(|| Span::new(first, last + 1))
    }

    fn extent(&self) -> Span {
        let m = self.marked();
        Span::new(*m.first().unwrap_or(&0), m.last().map_or(0, |l| l + 1))
    }
}

/// Matches `rule` against `s` with the default configuration.
pub fn r_extract<'a>(rule: &SimplificationRule, s: &'a AnnotatedSentence) -> Vec<ExtractionMatch<'a>> {
    r_extract_with(rule, s, &SimplifyConfig::default())
}

/// Matches `rule` against `s`, applies the family guards, absorbs
/// delimiters and drops overlapping matches (outermost, then leftmost wins).
/// Results are ordered by position.
pub fn r_extract_with<'a>(
    rule: &SimplificationRule,
    s: &'a AnnotatedSentence,
    config: &SimplifyConfig,
) -> Vec<ExtractionMatch<'a>> {
    let tree = s.tree();
    let mut found: Vec<ExtractionMatch<'a>> = match_pattern(&rule.pattern, tree)
        .into_iter()
        .filter_map(|m| build(rule, s, m.captures, config))
        .collect();

    found.sort_by_key(|m| {
        let e = m.extent();
        (std::cmp::Reverse(e.len()), e.start)
    });
    let mut kept: Vec<ExtractionMatch<'a>> = Vec::new();
    let mut taken = BTreeSet::new();
    for m in found {
        if m.positions.iter().any(|p| taken.contains(p)) {
            continue;
        }
        if kept.iter().any(|k| std::ptr::eq(k.constituent, m.constituent)) {
            continue;
        }
        taken.extend(m.positions.iter().copied());
        kept.push(m);
    }
    kept.sort_by_key(|m| m.extent().start);
    kept
}

fn build<'a>(
    rule: &SimplificationRule,
    s: &'a AnnotatedSentence,
    captures: BTreeMap<String, &'a ParseNode>,
    config: &SimplifyConfig,
) -> Option<ExtractionMatch<'a>> {
    let tree = s.tree();
    let tokens = s.tokens();
    let constituent = *captures.get(&rule.recipe.delete)?;
    if !rule.is_split() && constituent.span() == tree.span() {
        return None;
    }
    let antecedent = captures.get("ant").copied();

    let mut positions: BTreeSet<usize> = constituent.span().indices().collect();
    for name in rule.trim_captures() {
        positions.extend(captures.get(name)?.span().indices());
    }
    let first = *positions.first()?;
    let last = *positions.last()?;
    let extent = Span::new(first, last + 1);

    if let Some(ant) = antecedent {
        if ant.span().indices().any(|i| positions.contains(&i)) {
            return None;
        }
    }

    match rule.family {
        Family::AppositiveNonrestrictive => {
            let parent = parent_of(tree, constituent)?;
            if parent
                .children()
                .iter()
                .any(|c| c.label() == "CC" || c.label() == "CONJP")
            {
                return None;
            }
        }
        Family::AppositiveRestrictive => {
            let ant = antecedent?;
            if ant.span().start != constituent.span().end {
                return None;
            }
            let title_last = &tokens[constituent.span().end - 1];
            let ant_last = &tokens[ant.span().end - 1];
            if title_last.pos == "POS" {
                return None;
            }
            if ant_last.ne != "PERSON" && !matches!(title_last.pos.as_str(), "NNP" | "NNPS") {
                return None;
            }
        }
        Family::Attribution => {
            if let Some(verb) = captures.get("verb") {
                let word = verb.yield_words().join(" ").to_lowercase();
                if !config.speech_verbs.contains(&word) {
                    return None;
                }
            }
            if let Some(quote) = captures.get("quote") {
                if quote.span().end > constituent.span().start {
                    return None;
                }
            }
        }
        Family::PrepositionalPhrase => {
            if let Some(obj) = captures.get("obj") {
                let grounded = tokens[obj.span().indices()]
                    .iter()
                    .any(|t| matches!(t.ne.as_str(), "DATE" | "TIME" | "LOCATION"));
                if !grounded {
                    return None;
                }
            }
        }
        _ => {}
    }

    let mut delimiters = BTreeSet::new();
    let pos_at = |i: usize| tokens.get(i).map(|t| t.pos.as_str());
    let left = extent.start.checked_sub(1);
    if rule.trims(",") {
        let left_comma = left.filter(|&i| pos_at(i) == Some(","));
        let right_comma = Some(extent.end).filter(|&i| pos_at(i) == Some(","));
        let at_start = extent.start == 0;
        match (left_comma, right_comma) {
            (Some(l), r) => {
                delimiters.insert(l);
                delimiters.extend(r);
            }
            (None, Some(r)) if at_start => {
                delimiters.insert(r);
            }
            _ => return None,
        }
    }
    if rule.trims(":") {
        delimiters.extend(left.filter(|&i| pos_at(i) == Some(":")));
        delimiters.extend(Some(extent.end).filter(|&i| pos_at(i) == Some(":")));
    }
    if rule.trims("-LRB-") {
        delimiters.extend(left.filter(|&i| pos_at(i) == Some("-LRB-")));
    }
    if rule.trims("-RRB-") {
        delimiters.extend(Some(extent.end).filter(|&i| pos_at(i) == Some("-RRB-")));
    }
    if let Some(ant) = antecedent {
        if delimiters.iter().any(|d| ant.span().contains(*d)) {
            return None;
        }
    }
    positions.extend(delimiters.iter().copied());

    if rule.recipe.strategy == Strategy::AntecedentLink && antecedent.is_none() {
        log::warn!("rule {} matched without an antecedent", rule.name);
    }
    Some(ExtractionMatch {
        rule: rule.name.clone(),
        family: rule.family,
        constituent,
        antecedent,
        captures,
        positions,
        delimiters,
    })
}

/// The parent of `node` within `root`, found by identity.
pub(crate) fn parent_of<'a>(root: &'a ParseNode, node: &ParseNode) -> Option<&'a ParseNode> {
    root.preorder()
        .into_iter()
        .find(|n| n.children().iter().any(|c| std::ptr::eq(c, node)))
}
