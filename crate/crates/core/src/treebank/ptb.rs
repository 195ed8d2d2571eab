use std::borrow::Cow;

use thiserror::Error;

use super::ParseNode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PtbError {
    #[error("empty tree string")]
    EmptyInput,
    #[error("unbalanced brackets at byte {position}")]
    UnbalancedBrackets { position: usize },
    #[error("empty constituent at byte {position}")]
    EmptyConstituent { position: usize },
    #[error("trailing garbage after tree at byte {position}")]
    TrailingGarbage { position: usize },
    #[error("unexpected `{found}` at byte {position}")]
    UnexpectedToken { position: usize, found: String },
}

const ESCAPES: [(&str, &str); 6] = [
    ("-LRB-", "("),
    ("-RRB-", ")"),
    ("-LCB-", "{"),
    ("-RCB-", "}"),
    ("-LSB-", "["),
    ("-RSB-", "]"),
];

/// Decodes a PTB bracket escape (`-LRB-` to `(` etc.); other text is returned as is.
pub fn decode_ptb_token(text: &str) -> Cow<'_, str> {
    ESCAPES
        .iter()
        .find(|(esc, _)| *esc == text)
        .map_or(Cow::Borrowed(text), |(_, raw)| Cow::Borrowed(*raw))
}

/// Inverse of [`decode_ptb_token`].
pub fn encode_ptb_token(text: &str) -> Cow<'_, str> {
    ESCAPES
        .iter()
        .find(|(_, raw)| *raw == text)
        .map_or(Cow::Borrowed(text), |(esc, _)| Cow::Borrowed(*esc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lex<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and its byte offset, without consuming it.
    fn peek(&mut self) -> Option<(usize, Lex<'a>)> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let c = rest.chars().next()?;
        Some(match c {
            '(' => (self.pos, Lex::Open),
            ')' => (self.pos, Lex::Close),
            _ => {
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                (self.pos, Lex::Atom(&rest[..len]))
            }
        })
    }

    fn bump(&mut self, tok: Lex<'a>) {
        self.pos += match tok {
            Lex::Open | Lex::Close => 1,
            Lex::Atom(a) => a.len(),
        };
    }
}

/// Parses one bracketed tree such as `(ROOT (S (NP (NNP Obama)) (VP (VBD signed))))`.
pub fn parse_ptb(src: &str) -> Result<ParseNode, PtbError> {
    let mut lx = Lexer { src, pos: 0 };
    match lx.peek() {
        None => return Err(PtbError::EmptyInput),
        Some((_, Lex::Open)) => {}
        Some((position, Lex::Close)) => return Err(PtbError::UnbalancedBrackets { position }),
        Some((position, Lex::Atom(a))) => {
            return Err(PtbError::UnexpectedToken {
                position,
                found: a.to_string(),
            })
        }
    }
    let mut tree = parse_node(&mut lx, true)?;
    match lx.peek() {
        None => {}
        Some((position, Lex::Close)) => return Err(PtbError::UnbalancedBrackets { position }),
        Some((position, _)) => return Err(PtbError::TrailingGarbage { position }),
    }

    let strip = matches!(tree.label(), "ROOT" | "TOP" | "")
        && tree.children().len() == 1
        && !tree.children()[0].is_leaf();
    if strip {
        let wrapper = tree.label().to_string();
        let mut inner = tree.children.pop().expect("single child");
        inner.set_functional_root(Some(wrapper));
        tree = inner;
    }
    tree.respan(0);
    Ok(tree)
}

fn parse_node(lx: &mut Lexer<'_>, top: bool) -> Result<ParseNode, PtbError> {
    let (open_at, _) = lx.peek().expect("caller saw an open bracket");
    lx.bump(Lex::Open);

    let label = match lx.peek() {
        None => return Err(PtbError::UnbalancedBrackets { position: open_at }),
        Some((_, Lex::Close)) => return Err(PtbError::EmptyConstituent { position: open_at }),
        Some((_, Lex::Atom(a))) => {
            lx.bump(Lex::Atom(a));
            a.to_string()
        }
        Some((position, Lex::Open)) if !top => {
            return Err(PtbError::UnexpectedToken {
                position,
                found: "(".to_string(),
            })
        }
        // "( (S ...))": unlabeled wrapper written by some parsers
        Some((_, Lex::Open)) => String::new(),
    };

    match lx.peek() {
        None => Err(PtbError::UnbalancedBrackets { position: open_at }),
        Some((_, Lex::Close)) => Err(PtbError::EmptyConstituent { position: open_at }),
        Some((_, Lex::Atom(word))) => {
            lx.bump(Lex::Atom(word));
            match lx.peek() {
                Some((_, Lex::Close)) => {
                    lx.bump(Lex::Close);
                    if label.is_empty() {
                        return Err(PtbError::UnexpectedToken {
                            position: open_at,
                            found: word.to_string(),
                        });
                    }
                    Ok(ParseNode::leaf(label, decode_ptb_token(word)))
                }
                None => Err(PtbError::UnbalancedBrackets { position: open_at }),
                Some((position, Lex::Atom(a))) => Err(PtbError::UnexpectedToken {
                    position,
                    found: a.to_string(),
                }),
                Some((position, Lex::Open)) => Err(PtbError::UnexpectedToken {
                    position,
                    found: "(".to_string(),
                }),
            }
        }
        Some((_, Lex::Open)) => {
            let mut children = Vec::new();
            loop {
                match lx.peek() {
                    None => return Err(PtbError::UnbalancedBrackets { position: open_at }),
                    Some((_, Lex::Close)) => {
                        lx.bump(Lex::Close);
                        break;
                    }
                    Some((_, Lex::Open)) => children.push(parse_node(lx, false)?),
                    Some((position, Lex::Atom(a))) => {
                        return Err(PtbError::UnexpectedToken {
                            position,
                            found: a.to_string(),
                        })
                    }
                }
            }
            Ok(ParseNode::branch(label, children))
        }
    }
}

/// Canonical single-space bracketed form.
pub fn render_ptb(tree: &ParseNode) -> String {
    let mut out = String::new();
    match tree.functional_root() {
        Some(wrapper) => {
            out.push('(');
            out.push_str(wrapper);
            out.push(' ');
            render_into(tree, &mut out);
            out.push(')');
        }
        None => render_into(tree, &mut out),
    }
    out
}

fn render_into(node: &ParseNode, out: &mut String) {
    out.push('(');
    out.push_str(node.label());
    if let Some(text) = node.leaf_text() {
        out.push(' ');
        out.push_str(&encode_ptb_token(text));
    }
    for c in node.children() {
        out.push(' ');
        render_into(c, out);
    }
    out.push(')');
}
