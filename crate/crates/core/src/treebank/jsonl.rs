//! Annotated JSON Lines input: one sentence per line.
//!
//! ```text
//! {"id": "s1", "text": "Obama signed.", "tokens": [{"t": "Obama", "p": "NNP", "n": "PERSON"}, ...], "parse": "(ROOT ...)"}
//! ```

use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_ptb, render_ptb, AnnotatedSentence, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("line {line}: {cause}")]
    MalformedRecord { line: usize, cause: String },
}

impl RecordError {
    pub fn line(&self) -> usize {
        match self {
            RecordError::MalformedRecord { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub t: String,
    pub p: String,
    #[serde(default = "outside")]
    pub n: String,
}

fn outside() -> String {
    "O".to_string()
}

/// Wire form of an annotated sentence. Unknown fields are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedRecord {
    pub id: String,
    #[serde(default)]
    pub text: Option<String>,
    pub tokens: Vec<TokenRecord>,
    pub parse: String,
}

impl AnnotatedRecord {
    pub fn into_sentence(self) -> Result<AnnotatedSentence, String> {
        let tree = parse_ptb(&self.parse).map_err(|e| format!("parse: {e}"))?;
        let tokens = self
            .tokens
            .into_iter()
            .enumerate()
            .map(|(i, t)| Token::new(i, t.t, t.p).with_ne(t.n))
            .collect();
        let s = super::attach_annotations(tree, tokens).map_err(|e| e.to_string())?;
        let text = self.text.unwrap_or_else(|| s.text().to_string());
        Ok(s.with_id(self.id).with_text(text))
    }

    pub fn from_sentence(s: &AnnotatedSentence) -> Self {
        AnnotatedRecord {
            id: s.id().to_string(),
            text: Some(s.text().to_string()),
            tokens: s
                .tokens()
                .iter()
                .map(|t| TokenRecord {
                    t: t.text.clone(),
                    p: t.pos.clone(),
                    n: t.ne.clone(),
                })
                .collect(),
            parse: render_ptb(s.tree()),
        }
    }
}

/// Parses one JSONL line into a sentence.
pub fn parse_record_line(line: &str) -> Result<AnnotatedSentence, String> {
    let record: AnnotatedRecord = serde_json::from_str(line).map_err(|e| format!("json: {e}"))?;
    record.into_sentence()
}

/// Lazily reads annotated sentences; blank lines are skipped and a bad
/// line yields an error item without ending the stream.
pub fn read_annotated_jsonl<R: BufRead>(reader: R) -> AnnotatedRecords<R> {
    AnnotatedRecords {
        lines: reader.lines(),
        line: 0,
    }
}

pub struct AnnotatedRecords<R> {
    lines: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Iterator for AnnotatedRecords<R> {
    type Item = Result<AnnotatedSentence, RecordError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let raw = self.lines.next()?;
            self.line += 1;
            let line = self.line;
            let raw = match raw {
                Ok(raw) => raw,
                Err(e) => {
                    return Some(Err(RecordError::MalformedRecord {
                        line,
                        cause: format!("io: {e}"),
                    }))
                }
            };
            if raw.trim().is_empty() {
                continue;
            }
            return Some(
                parse_record_line(&raw).map_err(|cause| RecordError::MalformedRecord { line, cause }),
            );
        }
    }
}
