//! Checks that every simplification result must pass. Each returns a
//! description of the first violation.

use std::collections::BTreeMap;

use disembed::simplifier::{
    r_extract, re_annotate, simplify, Catalog, ContextSentence, SimplificationResult, SimplifyConfig, SimplifyError,
    TraceKind,
};
use disembed::{render_ptb, AnnotatedSentence};

/// Every input token is accounted for exactly once: kept in a core, taken
/// by a first-round rule, or dropped as a delimiter.
pub fn ledger(s: &AnnotatedSentence, r: &SimplificationResult) -> Result<(), String> {
    let mut seen: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for c in &r.cores {
        for i in c.source_indices() {
            seen.entry(i).or_default().push(format!("{} text", c.id));
        }
    }
    for t in r.trace.iter().filter(|t| t.round == 1) {
        if matches!(t.kind, TraceKind::Rule(_)) {
            for &i in &t.positions {
                seen.entry(i).or_default().push(format!("{} positions", t.rule));
            }
        }
        for &i in &t.delimiters {
            seen.entry(i).or_default().push(format!("{} delimiters", t.rule));
        }
    }
    for i in 0..s.len() {
        match seen.get(&i).map(Vec::as_slice) {
            Some([_]) => {}
            None | Some([]) => return Err(format!("{}: token {i} unaccounted for", s.id())),
            Some(many) => return Err(format!("{}: token {i} claimed by {many:?}", s.id())),
        }
    }
    if let Some(extra) = seen.keys().find(|&&i| i >= s.len()) {
        return Err(format!("{}: index {extra} out of range", s.id()));
    }
    Ok(())
}

/// Contexts carry a verb and end with a period.
pub fn contexts_well_formed(r: &SimplificationResult) -> Result<(), String> {
    for c in &r.contexts {
        if !c.tokens.iter().any(|t| t.is_verb()) {
            return Err(format!("{}: context without verb: {}", r.id, c.text));
        }
        if !c.text.ends_with('.') {
            return Err(format!("{}: context without period: {}", r.id, c.text));
        }
    }
    Ok(())
}

/// First-round rule applications on the same clause take disjoint tokens.
pub fn disjoint(r: &SimplificationResult) -> Result<(), String> {
    let rules: Vec<_> = r
        .trace
        .iter()
        .filter(|t| matches!(t.kind, TraceKind::Rule(_)))
        .collect();
    for (i, a) in rules.iter().enumerate() {
        for b in &rules[i + 1..] {
            if a.target == b.target && a.round == b.round && !a.positions.is_disjoint(&b.positions) {
                return Err(format!("{}: {} and {} overlap", r.id, a.rule, b.rule));
            }
        }
    }
    Ok(())
}

/// No rule fires on a flat tree of any produced core.
pub fn cores_are_fixpoints(r: &SimplificationResult, catalog: &Catalog) -> Result<(), String> {
    for core in &r.cores {
        let as_context = ContextSentence {
            id: core.id.clone(),
            text: core.text.clone(),
            tokens: core.tokens.clone(),
            rule: String::new(),
            family: disembed::simplifier::Family::ClauseSplit,
            attached_to: String::new(),
        };
        let flat = re_annotate(&as_context);
        for rule in catalog.rules() {
            if !r_extract(rule, &flat).is_empty() {
                return Err(format!("{}: {} still matches core `{}`", r.id, rule.name, core.text));
            }
        }
    }
    Ok(())
}

/// Runs every check on one sentence, including termination and a rerun.
pub fn check_sentence(s: &AnnotatedSentence, catalog: &Catalog) -> Result<SimplificationResult, String> {
    let config = SimplifyConfig::default();
    let r = match simplify(s, catalog, &config) {
        Ok(r) => r,
        Err(SimplifyError::IterationLimitExceeded(_)) => {
            return Err(format!("{}: no fixpoint within {} rounds ({})", s.id(), config.max_iterations, render_ptb(s.tree())))
        }
        Err(e) => return Err(format!("{}: {e}", s.id())),
    };
    if r.rounds > config.max_iterations {
        return Err(format!("{}: {} rounds", s.id(), r.rounds));
    }
    ledger(s, &r)?;
    contexts_well_formed(&r)?;
    disjoint(&r)?;
    cores_are_fixpoints(&r, catalog)?;
    let again = simplify(s, catalog, &config).map_err(|e| e.to_string())?;
    if again != r {
        return Err(format!("{}: second run differs", s.id()));
    }
    Ok(r)
}
