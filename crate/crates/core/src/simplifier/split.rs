use std::collections::BTreeSet;

use super::{Catalog, SimplificationRule, Strategy, TokenOrigin};
use crate::text::detokenize;
use crate::treebank::{AnnotatedSentence, ParseNode, Token};
use crate::treepattern::match_pattern;

/// A clause cut out of an input sentence, with the origin of every token.
#[derive(Debug, Clone)]
pub(crate) struct Clause {
    pub sentence: AnnotatedSentence,
    pub origin: Vec<TokenOrigin>,
}

/// Conjunctions and separators dropped by one split.
#[derive(Debug, Clone)]
pub(crate) struct SplitRecord {
    pub rule: String,
    pub delimiters: BTreeSet<usize>,
}

/// Splits coordinated clauses using the clause-split rules of the default
/// catalog. Returns `[s]` when nothing applies.
pub fn split_clauses(s: &AnnotatedSentence) -> Vec<AnnotatedSentence> {
    split_with(s, &Catalog::default_catalog())
        .0
        .into_iter()
        .map(|c| c.sentence)
        .collect()
}

pub(crate) fn split_with(s: &AnnotatedSentence, catalog: &Catalog) -> (Vec<Clause>, Vec<SplitRecord>) {
    let rules: Vec<&SimplificationRule> = catalog.split_rules().collect();
    let whole = Clause {
        sentence: s.clone(),
        origin: (0..s.len()).map(TokenOrigin::Source).collect(),
    };
    let mut clauses = Vec::new();
    let mut records = Vec::new();
    split_rec(whole, &rules, &mut clauses, &mut records);
    (clauses, records)
}

fn split_rec(clause: Clause, rules: &[&SimplificationRule], out: &mut Vec<Clause>, records: &mut Vec<SplitRecord>) {
    for rule in rules {
        if let Some((parts, delims)) = try_split(rule, &clause.sentence) {
            records.push(SplitRecord {
                rule: rule.name.clone(),
                delimiters: delims.iter().filter_map(|&d| clause.origin[d].source()).collect(),
            });
            for part in parts {
                let origin = part.origin.iter().map(|o| o.through(&clause.origin)).collect();
                split_rec(
                    Clause {
                        sentence: part.sentence,
                        origin,
                    },
                    rules,
                    out,
                    records,
                );
            }
            return;
        }
    }
    out.push(clause);
}

fn is_final_punct(n: &ParseNode) -> bool {
    n.is_leaf() && n.label() == "."
}

fn has_child(n: &ParseNode, label: &str) -> bool {
    n.children().iter().any(|c| c.label() == label)
}

fn try_split(rule: &SimplificationRule, s: &AnnotatedSentence) -> Option<(Vec<Clause>, Vec<usize>)> {
    let root = s.tree();
    let m = match_pattern(&rule.pattern, root)
        .into_iter()
        .find(|m| std::ptr::eq(m.anchor, root))?;
    let coord = m.capture(&rule.recipe.delete)?;
    match rule.recipe.strategy {
        Strategy::ComplementInsert if std::ptr::eq(coord, root) => coordinate(s),
        Strategy::AntecedentLink => shared_subject(s, m.capture("ant")?, coord),
        _ => None,
    }
}

/// Top-level children minus a trailing period, and the period if present.
fn body_and_period(root: &ParseNode) -> (&[ParseNode], Option<&ParseNode>) {
    match root.children().split_last() {
        Some((last, body)) if is_final_punct(last) => (body, Some(last)),
        _ => (root.children(), None),
    }
}

/// `(S (S ..) (, ,) (CC and) (S ..) (. .))` and `(S (S ..) (: ;) (S ..) (. .))`.
fn coordinate(s: &AnnotatedSentence) -> Option<(Vec<Clause>, Vec<usize>)> {
    let (body, period) = body_and_period(s.tree());
    let conjuncts: Vec<&ParseNode> = body.iter().filter(|c| c.label() == "S").collect();
    let joiners_ok = body
        .iter()
        .all(|c| matches!(c.label(), "S" | "CC" | "," | ":"));
    if conjuncts.len() < 2 || !joiners_ok || body.first()?.label() != "S" {
        return None;
    }
    if !conjuncts.iter().all(|c| has_child(c, "VP")) {
        return None;
    }
    let delims = body
        .iter()
        .filter(|c| c.label() != "S")
        .flat_map(|c| c.span().indices())
        .collect();
    let last = conjuncts.len() - 1;
    let parts = conjuncts
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let pieces = c.children().iter().map(|n| (n, false)).collect();
            build(s, pieces, period.filter(|_| k == last))
        })
        .collect::<Option<Vec<_>>>()?;
    Some((parts, delims))
}

/// `(S (NP ..) (VP (VP ..) (CC and) (VP ..)) (. .))`; the subject is copied
/// into every conjunct after the first.
fn shared_subject(s: &AnnotatedSentence, subject: &ParseNode, vp: &ParseNode) -> Option<(Vec<Clause>, Vec<usize>)> {
    let (body, period) = body_and_period(s.tree());
    if body.len() != 2 || !std::ptr::eq(&body[0], subject) || !std::ptr::eq(&body[1], vp) {
        return None;
    }
    let conjuncts: Vec<&ParseNode> = vp.children().iter().filter(|c| c.label() == "VP").collect();
    let joiners_ok = vp.children().iter().all(|c| matches!(c.label(), "VP" | "CC" | ","));
    if conjuncts.len() < 2 || !joiners_ok || vp.children()[0].label() != "VP" {
        return None;
    }
    let delims = vp
        .children()
        .iter()
        .filter(|c| c.label() != "VP")
        .flat_map(|c| c.span().indices())
        .collect();
    let last = conjuncts.len() - 1;
    let parts = conjuncts
        .iter()
        .enumerate()
        .map(|(k, c)| build(s, vec![(subject, k > 0), (*c, false)], period.filter(|_| k == last)))
        .collect::<Option<Vec<_>>>()?;
    Some((parts, delims))
}

/// A new `S` over the given subtrees, closed by the source period or a
/// synthetic one. The flag marks subtrees whose tokens are copies.
fn build(s: &AnnotatedSentence, pieces: Vec<(&ParseNode, bool)>, period: Option<&ParseNode>) -> Option<Clause> {
    let mut children: Vec<ParseNode> = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut origin = Vec::new();
    for (node, copied) in pieces {
        children.push(node.clone());
        for i in node.span().indices() {
            tokens.push(s.tokens()[i].clone());
            origin.push(if copied { TokenOrigin::Copied(i) } else { TokenOrigin::Source(i) });
        }
    }
    match period {
        Some(p) => {
            children.push(p.clone());
            tokens.push(s.tokens()[p.span().start].clone());
            origin.push(TokenOrigin::Source(p.span().start));
        }
        None => {
            children.push(ParseNode::leaf(".", "."));
            tokens.push(Token::new(0, ".", "."));
            origin.push(TokenOrigin::Inserted);
        }
    }
    let tree = ParseNode::branch("S", children);
    let text = detokenize(&tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>());
    let sentence = AnnotatedSentence::new(s.id(), text, tree, tokens).ok()?;
    Some(Clause { sentence, origin })
}
