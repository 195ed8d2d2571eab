use thiserror::Error;

use super::{decode_ptb_token, ParseNode, Token};
use crate::text::detokenize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("tree has {leaves} leaves but {tokens} tokens were given")]
    LengthMismatch { leaves: usize, tokens: usize },
    #[error("token {index}: leaf text `{leaf}` differs from token text `{token}`")]
    TokenTextMismatch {
        index: usize,
        leaf: String,
        token: String,
    },
    #[error("token {index}: {reason}")]
    InvalidToken { index: usize, reason: String },
}

/// A preterminal label that disagreed with the token's POS tag and was overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationWarning {
    pub index: usize,
    pub tree_pos: String,
    pub token_pos: String,
}

/// Tokens aligned one-to-one with the leaves of a constituency tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSentence {
    id: String,
    text: String,
    tokens: Vec<Token>,
    tree: ParseNode,
    warnings: Vec<AnnotationWarning>,
}

impl AnnotatedSentence {
    /// Validates and aligns; `text` is the raw input sentence.
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        tree: ParseNode,
        tokens: Vec<Token>,
    ) -> Result<Self, AnnotationError> {
        let mut s = attach_annotations(tree, tokens)?;
        s.id = id.into();
        s.text = text.into();
        Ok(s)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// The raw sentence text as given in the input record.
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn tree(&self) -> &ParseNode {
        &self.tree
    }

    pub fn warnings(&self) -> &[AnnotationWarning] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub(crate) fn with_text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Detokenized surface form of the tokens.
    pub fn surface(&self) -> String {
        detokenize(&self.tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>())
    }

    /// Words of `span` joined with spaces, for diagnostics and tests.
    pub fn span_text(&self, span: super::Span) -> String {
        detokenize(
            &self.tokens[span.indices()]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>(),
        )
    }
}

/// Merges token annotations into a tree.
///
/// Token POS tags win over preterminal labels; every override is recorded
/// as a warning. Token indices are renumbered to their positions.
pub fn attach_annotations(
    mut tree: ParseNode,
    mut tokens: Vec<Token>,
) -> Result<AnnotatedSentence, AnnotationError> {
    tree.respan(0);
    let leaf_count = tree.span().len();
    if leaf_count != tokens.len() {
        return Err(AnnotationError::LengthMismatch {
            leaves: leaf_count,
            tokens: tokens.len(),
        });
    }

    let mut warnings = Vec::new();
    for (index, (leaf, token)) in tree.leaves_mut().into_iter().zip(tokens.iter_mut()).enumerate() {
        token.index = index;
        token.text = decode_ptb_token(&token.text).into_owned();
        if token.text.is_empty() || token.text.chars().any(char::is_whitespace) {
            return Err(AnnotationError::InvalidToken {
                index,
                reason: format!("token text `{}` is empty or contains whitespace", token.text),
            });
        }
        if token.pos.is_empty() {
            return Err(AnnotationError::InvalidToken {
                index,
                reason: "empty POS tag".to_string(),
            });
        }
        if token.ne.is_empty() {
            token.ne = "O".to_string();
        }
        let leaf_text = leaf.leaf_text().unwrap_or_default();
        if leaf_text != token.text {
            return Err(AnnotationError::TokenTextMismatch {
                index,
                leaf: leaf_text.to_string(),
                token: token.text.clone(),
            });
        }
        if leaf.label() != token.pos {
            warnings.push(AnnotationWarning {
                index,
                tree_pos: leaf.label().to_string(),
                token_pos: token.pos.clone(),
            });
            leaf.set_label(token.pos.clone());
        }
    }

    let text = detokenize(&tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>());
    Ok(AnnotatedSentence {
        id: String::new(),
        text,
        tokens,
        tree,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::parse_ptb;

    fn toks(words: &[(&str, &str)]) -> Vec<Token> {
        words
            .iter()
            .enumerate()
            .map(|(i, (w, p))| Token::new(i, *w, *p))
            .collect()
    }

    #[test]
    fn matching_tokens_attach() {
        let tree = parse_ptb("(NP (DT the) (NN cat))").unwrap();
        let s = attach_annotations(tree, toks(&[("the", "DT"), ("cat", "NN")])).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.warnings().is_empty());
        assert_eq!(s.tokens()[1].ne, "O");
        assert_eq!(s.surface(), "the cat");
    }

    #[test]
    fn length_mismatch() {
        let tree = parse_ptb("(NP (DT the) (NN cat))").unwrap();
        let err = attach_annotations(tree, toks(&[("the", "DT"), ("cat", "NN"), (".", ".")])).unwrap_err();
        assert_eq!(err, AnnotationError::LengthMismatch { leaves: 2, tokens: 3 });
    }

    #[test]
    fn text_mismatch() {
        let tree = parse_ptb("(NP (DT the) (NN cat))").unwrap();
        let err = attach_annotations(tree, toks(&[("the", "DT"), ("dog", "NN")])).unwrap_err();
        assert!(matches!(err, AnnotationError::TokenTextMismatch { index: 1, .. }));
    }

    #[test]
    fn token_pos_overrides_tree() {
        let tree = parse_ptb("(NP (DT the) (VB cat))").unwrap();
        let s = attach_annotations(tree, toks(&[("the", "DT"), ("cat", "NN")])).unwrap();
        assert_eq!(s.tree().children()[1].label(), "NN");
        assert_eq!(
            s.warnings(),
            &[AnnotationWarning {
                index: 1,
                tree_pos: "VB".into(),
                token_pos: "NN".into()
            }]
        );
    }

    #[test]
    fn escaped_brackets_align_with_raw_tokens() {
        let tree = parse_ptb("(PRN (-LRB- -LRB-) (NNP X) (-RRB- -RRB-))").unwrap();
        let s = attach_annotations(tree, toks(&[("-LRB-", "-LRB-"), ("X", "NNP"), (")", "-RRB-")])).unwrap();
        assert_eq!(s.tokens()[0].text, "(");
        assert_eq!(s.surface(), "(X)");
    }

    #[test]
    fn invalid_tokens() {
        let tree = parse_ptb("(NP (DT the) (NN cat))").unwrap();
        let err = attach_annotations(tree, toks(&[("the", ""), ("cat", "NN")])).unwrap_err();
        assert!(matches!(err, AnnotationError::InvalidToken { index: 0, .. }));
    }
}
