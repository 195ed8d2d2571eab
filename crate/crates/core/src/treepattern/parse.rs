use std::collections::HashSet;

use regex::Regex;
use thiserror::Error;

use super::{LabelTest, PatternNode, Relation, TreePattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern syntax error at byte {position}: {message}")]
    PatternSyntaxError { position: usize, message: String },
    #[error("capture `{0}` declared more than once")]
    DuplicateCapture(String),
}

fn syntax(position: usize, message: impl Into<String>) -> PatternError {
    PatternError::PatternSyntaxError {
        position,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Rel(Relation),
    Bang,
    Eq,
    Open,
    Close,
    Pipe,
    Regex(String),
    Lit(String),
}

fn is_literal_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '<' | '>' | '.' | '$' | '!' | '=' | '(' | ')' | '|' | '/')
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, PatternError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let c = src[i..].chars().next().expect("in bounds");
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        let next = bytes.get(i + 1).copied();
        let (tok, len) = match c {
            '<' => match next {
                Some(b'<') => (Tok::Rel(Relation::AncestorOf), 2),
                Some(b'1') => (Tok::Rel(Relation::LeftmostChild), 2),
                Some(b'-') => (Tok::Rel(Relation::RightmostChild), 2),
                _ => (Tok::Rel(Relation::ParentOf), 1),
            },
            '>' => match next {
                Some(b'>') => (Tok::Rel(Relation::DescendantOf), 2),
                _ => (Tok::Rel(Relation::ChildOf), 1),
            },
            '.' => match next {
                Some(b'.') => (Tok::Rel(Relation::Precedes), 2),
                _ => (Tok::Rel(Relation::ImmediatelyPrecedes), 1),
            },
            '$' => (Tok::Rel(Relation::SisterOf), 1),
            '!' => (Tok::Bang, 1),
            '=' => (Tok::Eq, 1),
            '(' => (Tok::Open, 1),
            ')' => (Tok::Close, 1),
            '|' => (Tok::Pipe, 1),
            '/' => {
                let mut body = String::new();
                let mut j = i + 1;
                let mut closed = false;
                while j < src.len() {
                    let d = src[j..].chars().next().expect("in bounds");
                    if d == '\\' && src[j + 1..].starts_with('/') {
                        body.push('/');
                        j += 2;
                        continue;
                    }
                    if d == '/' {
                        closed = true;
                        j += 1;
                        break;
                    }
                    body.push(d);
                    j += d.len_utf8();
                }
                if !closed {
                    return Err(syntax(start, "unterminated regular expression"));
                }
                (Tok::Regex(body), j - i)
            }
            _ => {
                let len = src[i..]
                    .find(|c: char| !is_literal_char(c))
                    .unwrap_or(src.len() - i);
                (Tok::Lit(src[i..i + len].to_string()), len)
            }
        };
        out.push((start, tok));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.at + k).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn pattern(&mut self) -> Result<PatternNode, PatternError> {
        let mut head = self.node()?;
        while let Some(Tok::Rel(rel)) = self.peek() {
            let rel = *rel;
            self.at += 1;
            let target = self.node()?;
            head.relations.push((rel, target));
        }
        Ok(head)
    }

    /// True when the upcoming `(` starts a label alternation rather than a group.
    fn at_alternation(&self) -> bool {
        let mut k = 1;
        loop {
            match (self.peek_at(k), self.peek_at(k + 1)) {
                (Some(Tok::Lit(_)), Some(Tok::Close)) => return true,
                (Some(Tok::Lit(_)), Some(Tok::Pipe)) => k += 2,
                _ => return false,
            }
        }
    }

    fn node(&mut self) -> Result<PatternNode, PatternError> {
        if self.peek() == Some(&Tok::Open) && !self.at_alternation() {
            self.at += 1;
            let inner = self.pattern()?;
            if self.peek() != Some(&Tok::Close) {
                return Err(syntax(self.position(), "expected `)` closing the group"));
            }
            self.at += 1;
            return Ok(inner);
        }

        let negated = if self.peek() == Some(&Tok::Bang) {
            self.at += 1;
            true
        } else {
            false
        };
        let test = self.label_test()?;
        let mut node = PatternNode::new(test);
        node.negated = negated;
        if self.peek() == Some(&Tok::Eq) {
            self.at += 1;
            let position = self.position();
            match self.peek() {
                Some(Tok::Lit(name)) if is_identifier(name) => {
                    node.capture = Some(name.clone());
                    self.at += 1;
                }
                _ => return Err(syntax(position, "expected a capture name after `=`")),
            }
        }
        Ok(node)
    }

    fn label_test(&mut self) -> Result<LabelTest, PatternError> {
        let position = self.position();
        match self.peek().cloned() {
            Some(Tok::Lit(l)) => {
                self.at += 1;
                Ok(if l == "__" { LabelTest::Any } else { LabelTest::Literal(l) })
            }
            Some(Tok::Regex(body)) => {
                self.at += 1;
                Regex::new(&format!("^(?:{body})$"))
                    .map(LabelTest::Regex)
                    .map_err(|e| syntax(position, format!("bad regular expression: {e}")))
            }
            Some(Tok::Open) if self.at_alternation() => {
                self.at += 1;
                let mut labels = Vec::new();
                loop {
                    match self.peek().cloned() {
                        Some(Tok::Lit(l)) => labels.push(l),
                        _ => return Err(syntax(self.position(), "expected a label")),
                    }
                    self.at += 1;
                    match self.peek() {
                        Some(Tok::Pipe) => self.at += 1,
                        Some(Tok::Close) => {
                            self.at += 1;
                            break;
                        }
                        _ => return Err(syntax(self.position(), "expected `|` or `)`")),
                    }
                }
                Ok(LabelTest::Alternation(labels))
            }
            Some(_) => Err(syntax(position, "expected a label test")),
            None => Err(syntax(position, "unexpected end of pattern")),
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the concrete pattern syntax described in the module docs.
pub fn parse_pattern(src: &str) -> Result<TreePattern, PatternError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty pattern"));
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let root = p.pattern()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.position(), "unexpected input after pattern"));
    }
    let pattern = TreePattern::new(root);
    let mut seen = HashSet::new();
    for name in pattern.captures() {
        if !seen.insert(name) {
            return Err(PatternError::DuplicateCapture(name.to_string()));
        }
    }
    Ok(pattern)
}
