use std::collections::BTreeSet;

use super::{CoreSentence, SimplifyError, TokenOrigin};
use crate::text::{capitalize_first, detokenize};
use crate::treebank::{AnnotatedSentence, Token};

fn is_comma_like(pos: &str) -> bool {
    matches!(pos, "," | ":")
}

fn is_final(pos: &str, text: &str) -> bool {
    pos == "." || matches!(text, "." | "!" | "?")
}

/// Deletes the positions in `p` from `s` and tidies what is left: no
/// leading or doubled commas, no comma before the final period, a final
/// period present and the first word capitalized.
///
/// `origin` entries are indices into `s`; `dropped` lists the surviving
/// indices removed by the tidying.
pub fn reduce_core(s: &AnnotatedSentence, p: &BTreeSet<usize>) -> Result<CoreSentence, SimplifyError> {
    let tokens = s.tokens();
    let mut keep: Vec<usize> = (0..tokens.len()).filter(|i| !p.contains(i)).collect();
    let mut dropped = Vec::new();
    let pos = |i: usize| tokens[i].pos.as_str();

    while keep.first().is_some_and(|&i| is_comma_like(pos(i))) {
        dropped.push(keep.remove(0));
    }
    let mut k = 1;
    while k < keep.len() {
        let (a, b) = (keep[k - 1], keep[k]);
        let doubled = is_comma_like(pos(a)) && is_comma_like(pos(b));
        let before_final = is_comma_like(pos(a)) && is_final(pos(b), &tokens[b].text);
        if doubled {
            dropped.push(keep.remove(k));
        } else if before_final {
            dropped.push(keep.remove(k - 1));
        } else {
            k += 1;
        }
    }
    while keep.last().is_some_and(|&i| is_comma_like(pos(i))) {
        dropped.push(keep.pop().unwrap_or_default());
    }
    if !keep.iter().any(|&i| !tokens[i].is_punct()) {
        return Err(SimplifyError::EmptyCore);
    }
    dropped.sort_unstable();

    let mut out: Vec<Token> = Vec::with_capacity(keep.len() + 1);
    let mut origin = Vec::with_capacity(keep.len() + 1);
    for (n, &i) in keep.iter().enumerate() {
        let mut t = tokens[i].clone();
        t.index = n;
        if n == 0 {
            t.text = capitalize_first(&t.text);
        }
        out.push(t);
        origin.push(TokenOrigin::Source(i));
    }
    if !out.last().is_some_and(|t| is_final(&t.pos, &t.text)) {
        out.push(Token::new(out.len(), ".", "."));
        origin.push(TokenOrigin::Inserted);
    }
    let text = detokenize(&out.iter().map(|t| t.text.as_str()).collect::<Vec<_>>());
    Ok(CoreSentence {
        id: String::new(),
        text,
        tokens: out,
        origin,
        dropped,
    })
}
