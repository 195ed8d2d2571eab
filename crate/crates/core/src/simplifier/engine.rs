use std::collections::BTreeSet;

use super::split::split_with;
use super::{
    r_extract_with, r_paraphrase, reduce_core, Catalog, ContextSentence, Family, SimplificationResult, SimplifyConfig,
    SimplifyError, TokenOrigin, TraceEntry, TraceKind,
};
use crate::treebank::{AnnotatedSentence, ParseNode};

/// A rule application inside one sentence, indices local to it.
struct Applied {
    rule: String,
    family: Family,
    positions: BTreeSet<usize>,
    delimiters: BTreeSet<usize>,
    context: ContextSentence,
}

/// Runs every disembedding rule over `s` in priority order. A match is
/// skipped when it overlaps positions already taken or would leave the
/// sentence without a word (or without a verb, if it had one), and when
/// its context would just restate the sentence.
fn disembed(
    s: &AnnotatedSentence,
    catalog: &Catalog,
    config: &SimplifyConfig,
) -> Result<(Vec<Applied>, BTreeSet<usize>), SimplifyError> {
    let tokens = s.tokens();
    let had_verb = tokens.iter().any(|t| t.is_verb());
    let mut claimed = BTreeSet::new();
    let mut applied = Vec::new();
    for rule in catalog.disembedding_rules() {
        for m in r_extract_with(rule, s, config) {
            if m.positions.iter().any(|p| claimed.contains(p)) {
                continue;
            }
            let mut left = tokens
                .iter()
                .filter(|t| !claimed.contains(&t.index) && !m.positions.contains(&t.index));
            let ok = if had_verb {
                left.any(|t| t.is_verb())
            } else {
                left.any(|t| !t.is_punct())
            };
            if !ok {
                continue;
            }
            let context = r_paraphrase(rule, &m, s)?;
            if context.text == s.text() {
                continue;
            }
            claimed.extend(m.positions.iter().copied());
            applied.push(Applied {
                rule: rule.name.clone(),
                family: rule.family,
                positions: m.marked(),
                delimiters: m.delimiters.clone(),
                context,
            });
        }
    }
    Ok((applied, claimed))
}

fn map_source(local: &BTreeSet<usize>, origin: &[TokenOrigin]) -> BTreeSet<usize> {
    local.iter().filter_map(|&i| origin[i].source()).collect()
}

/// Adds a context unless one with the same text exists; returns its index.
fn push_context(result: &mut SimplificationResult, mut ctx: ContextSentence, attached_to: &str) -> Option<usize> {
    if result.contexts.iter().any(|c| c.text == ctx.text) {
        return None;
    }
    ctx.id = format!("context-{}", result.contexts.len() + 1);
    ctx.attached_to = attached_to.to_string();
    result.contexts.push(ctx);
    Some(result.contexts.len() - 1)
}

/// Simplifies one sentence.
///
/// Round 1 splits the sentence into clauses and disembeds each clause into
/// a core and its contexts. Every later round offers the contexts produced
/// by the previous one, as flat trees, to the disembedding rules again; a
/// context that matches is itself reduced and gains contexts of its own.
/// When contexts are still pending after `max_iterations` rounds the partial
/// result comes back inside [`SimplifyError::IterationLimitExceeded`].
pub fn simplify(
    s: &AnnotatedSentence,
    catalog: &Catalog,
    config: &SimplifyConfig,
) -> Result<SimplificationResult, SimplifyError> {
    if config.max_iterations == 0 {
        return Err(SimplifyError::InvalidConfig);
    }
    let mut result = SimplificationResult {
        id: s.id().to_string(),
        input: s.text().to_string(),
        cores: Vec::new(),
        contexts: Vec::new(),
        trace: Vec::new(),
        rounds: 1,
    };

    let (clauses, splits) = split_with(s, catalog);
    for rec in splits {
        result.trace.push(TraceEntry {
            rule: rec.rule,
            kind: TraceKind::Split,
            target: s.id().to_string(),
            round: 1,
            positions: BTreeSet::new(),
            delimiters: rec.delimiters,
        });
    }

    let mut frontier = Vec::new();
    for (n, clause) in clauses.iter().enumerate() {
        let core_id = format!("core-{}", n + 1);
        let (applied, claimed) = disembed(&clause.sentence, catalog, config)?;
        let mut core = reduce_core(&clause.sentence, &claimed)?;
        for a in applied {
            result.trace.push(TraceEntry {
                rule: a.rule,
                kind: TraceKind::Rule(a.family),
                target: core_id.clone(),
                round: 1,
                positions: map_source(&a.positions, &clause.origin),
                delimiters: map_source(&a.delimiters, &clause.origin),
            });
            frontier.extend(push_context(&mut result, a.context, &core_id));
        }
        if !core.dropped.is_empty() {
            let dropped: BTreeSet<usize> = core.dropped.iter().copied().collect();
            result.trace.push(TraceEntry {
                rule: "core-repair".into(),
                kind: TraceKind::Repair,
                target: core_id.clone(),
                round: 1,
                positions: BTreeSet::new(),
                delimiters: map_source(&dropped, &clause.origin),
            });
            core.dropped = dropped.iter().filter_map(|&i| clause.origin[i].source()).collect();
        }
        core.origin = core.origin.iter().map(|o| o.through(&clause.origin)).collect();
        core.id = core_id;
        result.cores.push(core);
    }

    let mut round = 1;
    while !frontier.is_empty() {
        if round >= config.max_iterations {
            result.rounds = round;
            return Err(SimplifyError::IterationLimitExceeded(Box::new(result)));
        }
        round += 1;
        let mut next = Vec::new();
        for idx in frontier {
            let flat = re_annotate(&result.contexts[idx]);
            let (applied, claimed) = disembed(&flat, catalog, config)?;
            if applied.is_empty() {
                continue;
            }
            let Ok(reduced) = reduce_core(&flat, &claimed) else {
                continue;
            };
            let ctx_id = result.contexts[idx].id.clone();
            result.contexts[idx].text = reduced.text;
            result.contexts[idx].tokens = reduced.tokens;
            for a in applied {
                result.trace.push(TraceEntry {
                    rule: a.rule,
                    kind: TraceKind::Rule(a.family),
                    target: ctx_id.clone(),
                    round,
                    positions: a.positions,
                    delimiters: a.delimiters,
                });
                next.extend(push_context(&mut result, a.context, &ctx_id));
            }
            if !reduced.dropped.is_empty() {
                result.trace.push(TraceEntry {
                    rule: "core-repair".into(),
                    kind: TraceKind::Repair,
                    target: ctx_id.clone(),
                    round,
                    positions: BTreeSet::new(),
                    delimiters: reduced.dropped.into_iter().collect(),
                });
            }
        }
        frontier = next;
    }
    result.rounds = round;
    Ok(result)
}

/// A flat `S` over the tokens of a generated sentence; no re-parse.
pub fn re_annotate(c: &ContextSentence) -> AnnotatedSentence {
    let leaves = c
        .tokens
        .iter()
        .map(|t| ParseNode::leaf(t.pos.clone(), t.text.clone()))
        .collect();
    let tree = ParseNode::branch("S", leaves);
    AnnotatedSentence::new(c.id.clone(), c.text.clone(), tree, c.tokens.clone())
        .expect("generated tokens align with their own leaves")
}
