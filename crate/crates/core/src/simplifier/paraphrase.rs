use super::{ContextSentence, ExtractionMatch, Family, SimplificationRule, SimplifyError, Strategy};
use crate::text::{capitalize_first, detokenize, lowercase_first};
use crate::treebank::{is_verb_tag, AnnotatedSentence, ParseNode, Span, Token};

/// A token on its way into a generated sentence.
#[derive(Debug, Clone)]
struct Piece {
    token: Token,
    /// Came from the first position of the source clause.
    initial: bool,
}

impl Piece {
    fn source(s: &AnnotatedSentence, i: usize) -> Piece {
        Piece {
            token: s.tokens()[i].clone(),
            initial: i == 0,
        }
    }

    fn inserted(text: &str, pos: &str) -> Piece {
        Piece {
            token: Token::new(0, text, pos),
            initial: false,
        }
    }
}

fn pieces(s: &AnnotatedSentence, idx: impl IntoIterator<Item = usize>) -> Vec<Piece> {
    idx.into_iter().map(|i| Piece::source(s, i)).collect()
}

fn is_bracket(pos: &str) -> bool {
    matches!(pos, "-LRB-" | "-RRB-" | "-LCB-" | "-RCB-" | "-LSB-" | "-RSB-")
}

fn is_proper(t: &Token) -> bool {
    matches!(t.pos.as_str(), "NNP" | "NNPS") || t.text == "I"
}

/// Fixes casing and final punctuation; renumbers the tokens.
fn finish(mut ps: Vec<Piece>) -> Vec<Token> {
    let edge = |p: &Piece| matches!(p.token.pos.as_str(), "," | ":" | "." | "''" | "``");
    while ps.last().is_some_and(edge) {
        ps.pop();
    }
    while ps.first().is_some_and(edge) {
        ps.remove(0);
    }
    let mut out: Vec<Token> = Vec::with_capacity(ps.len() + 1);
    for (i, p) in ps.into_iter().enumerate() {
        let mut t = p.token;
        if i == 0 {
            t.text = capitalize_first(&t.text);
        } else if p.initial && !is_proper(&t) {
            t.text = lowercase_first(&t.text);
        }
        t.index = i;
        out.push(t);
    }
    out.push(Token::new(out.len(), ".", "."));
    out
}

fn context(rule: &SimplificationRule, tokens: Vec<Token>) -> ContextSentence {
    ContextSentence {
        id: String::new(),
        text: detokenize(&tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>()),
        tokens,
        rule: rule.name.clone(),
        family: rule.family,
        attached_to: String::new(),
    }
}

/// The head verb of the main clause: the first verb directly under the
/// top-level VP, following nested VPs. Flat trees fall back to the first
/// verb of the sentence.
fn matrix_verb(s: &AnnotatedSentence) -> Option<&Token> {
    let tree = s.tree();
    let mut vp = tree
        .children()
        .iter()
        .find(|c| c.label() == "VP")
        .or_else(|| tree.preorder().into_iter().find(|n| n.label() == "VP"));
    while let Some(node) = vp {
        if let Some(leaf) = node
            .children()
            .iter()
            .find(|c| c.is_leaf() && is_verb_tag(c.label()))
        {
            return s.tokens().get(leaf.span().start);
        }
        vp = node.children().iter().find(|c| c.label() == "VP");
    }
    s.tokens().iter().find(|t| t.is_verb())
}

fn plural_head(tokens: &[Token]) -> bool {
    let mut head: Option<&Token> = None;
    for t in tokens {
        let nominal = t.pos.starts_with("NN") || t.pos == "PRP" || t.pos == "CD";
        if nominal {
            head = Some(t);
        } else if head.is_some() && matches!(t.pos.as_str(), "IN" | "," | "WDT" | "WP" | "TO") {
            break;
        } else if t.pos == "CC" && head.is_some() {
            return true;
        }
    }
    head.is_some_and(|h| {
        matches!(h.pos.as_str(), "NNS" | "NNPS")
            || matches!(h.text.to_lowercase().as_str(), "we" | "they" | "us" | "them")
    })
}

/// Copula agreeing in tense with the main verb of `s` and in number with
/// the antecedent; singular when there is none, "is" when `s` has no verb.
pub fn infer_copula(s: &AnnotatedSentence, antecedent: Option<Span>) -> Token {
    let past = matrix_verb(s).is_some_and(|v| matches!(v.pos.as_str(), "VBD" | "VBN"));
    let plural = antecedent.is_some_and(|a| plural_head(&s.tokens()[a.indices()]));
    let (text, pos) = match (past, plural) {
        (true, false) => ("was", "VBD"),
        (true, true) => ("were", "VBD"),
        (false, false) => ("is", "VBZ"),
        (false, true) => ("are", "VBP"),
    };
    Token::new(0, text, pos)
}

fn copula_piece(s: &AnnotatedSentence, antecedent: Option<Span>) -> Piece {
    Piece {
        token: infer_copula(s, antecedent),
        initial: false,
    }
}

/// Builds the context sentence for one match.
pub fn r_paraphrase(
    rule: &SimplificationRule,
    m: &ExtractionMatch<'_>,
    s: &AnnotatedSentence,
) -> Result<ContextSentence, SimplifyError> {
    let body: Vec<usize> = m
        .marked()
        .into_iter()
        .filter(|&i| !is_bracket(&s.tokens()[i].pos))
        .collect();

    let tokens = match rule.recipe.strategy {
        Strategy::ComplementInsert if rule.family == Family::Attribution => {
            let mut ps: Vec<Piece> = body
                .iter()
                .filter(|&&i| s.tokens()[i].pos != "IN")
                .map(|&i| Piece::source(s, i))
                .collect();
            ps.push(Piece::inserted("this", "DT"));
            finish(ps)
        }
        Strategy::ComplementInsert => {
            let mut ps = vec![Piece::inserted("This", "DT"), copula_piece(s, None)];
            ps.extend(pieces(s, body));
            finish(ps)
        }
        Strategy::AntecedentLink => {
            let ant = m.antecedent.ok_or_else(|| SimplifyError::MissingAntecedent(rule.name.clone()))?;
            let linked = if rule.family == Family::RelativeClauseNonrestrictive {
                relative_clause(s, m.constituent, ant)
            } else {
                None
            };
            let ps = linked.unwrap_or_else(|| {
                let mut ps = pieces(s, ant.span().indices());
                ps.push(copula_piece(s, Some(ant.span())));
                if rule.family == Family::AppositiveRestrictive {
                    if let Some(article) = article_for(&s.tokens()[m.constituent.span().indices()]) {
                        ps.push(Piece::inserted(article, "DT"));
                    }
                }
                ps.extend(pieces(s, body.iter().copied()));
                ps
            });
            let tokens = finish(ps);
            if tokens.iter().any(Token::is_verb) {
                tokens
            } else {
                let mut ps = pieces(s, ant.span().indices());
                ps.push(copula_piece(s, Some(ant.span())));
                ps.extend(pieces(s, body));
                finish(ps)
            }
        }
    };
    Ok(context(rule, tokens))
}

/// "a"/"an" for a bare title NP, `None` when it already has a determiner.
fn article_for(title: &[Token]) -> Option<&'static str> {
    let first = title.first()?;
    if matches!(first.pos.as_str(), "DT" | "PRP$" | "CD" | "PDT") || title.iter().any(|t| t.pos == "POS") {
        return None;
    }
    let vowel = first
        .text
        .chars()
        .next()
        .is_some_and(|c| "aeiouAEIOU".contains(c));
    Some(if vowel { "an" } else { "a" })
}

/// Rewrites a wh-clause around its antecedent:
/// "which welcomed X" → ANT welcomed X; "which he bought" → he bought ANT;
/// "whose father ruled" → ANT 's father ruled; "where he lived" → he lived in ANT.
fn relative_clause(s: &AnnotatedSentence, sbar: &ParseNode, ant: &ParseNode) -> Option<Vec<Piece>> {
    let wh = sbar.children().first()?;
    let rest: Vec<&ParseNode> = sbar.children()[1..].iter().collect();
    let rest_idx: Vec<usize> = rest.iter().flat_map(|n| n.span().indices()).collect();
    let ant_ps = || pieces(s, ant.span().indices());
    let wh_tokens = &s.tokens()[wh.span().indices()];

    if let Some(k) = wh_tokens.iter().position(|t| t.pos == "WP$") {
        let mut ps = ant_ps();
        ps.push(Piece::inserted("'s", "POS"));
        ps.extend(pieces(s, wh.span().start + k + 1..wh.span().end));
        ps.extend(pieces(s, rest_idx));
        return Some(ps);
    }
    if wh.label() == "WHADVP" || wh.label() == "WHPP" {
        let mut ps = pieces(s, rest_idx);
        let prep = wh_tokens
            .iter()
            .find(|t| matches!(t.pos.as_str(), "IN" | "TO"))
            .cloned()
            .unwrap_or_else(|| Token::new(0, "in", "IN"));
        ps.push(Piece {
            token: prep,
            initial: false,
        });
        ps.extend(ant_ps());
        return Some(ps);
    }

    let clause = rest.iter().find(|n| n.label() == "S")?;
    let subject = clause.children().iter().position(|c| c.label() == "NP");
    let vp = clause.children().iter().position(|c| c.label() == "VP")?;
    match subject {
        Some(np) if np < vp => {
            // object relative: the antecedent fills the gap after the verbs
            let vp_node = &clause.children()[vp];
            let vp_idx: Vec<usize> = vp_node.span().indices().collect();
            // verbs with interleaved adverbs and particles, ending on a verb or particle
            let run = vp_idx
                .iter()
                .take_while(|&&i| {
                    let p = s.tokens()[i].pos.as_str();
                    is_verb_tag(p) || matches!(p, "RB" | "TO" | "RP")
                })
                .count();
            let group = vp_idx[..run]
                .iter()
                .rposition(|&i| {
                    let p = s.tokens()[i].pos.as_str();
                    is_verb_tag(p) || p == "RP"
                })
                .map_or(0, |k| k + 1);
            let mut ps = pieces(s, clause.span().start..vp_node.span().start);
            ps.extend(pieces(s, vp_idx[..group].iter().copied()));
            ps.extend(ant_ps());
            ps.extend(pieces(s, vp_idx[group..].iter().copied()));
            ps.extend(pieces(s, vp_node.span().end..clause.span().end));
            Some(ps)
        }
        _ => {
            let mut ps = ant_ps();
            ps.extend(pieces(s, rest_idx));
            Some(ps)
        }
    }
}
