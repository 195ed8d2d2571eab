//! Penn Treebank bracketed trees and annotated sentences.
//!
//! Trees are read with [`parse_ptb`] and written back with [`render_ptb`].
//! A functional top node (`ROOT`, `TOP` or the empty label used by some
//! parsers) is stripped on ingestion and remembered on the returned root, so
//! rendering reproduces the input bracket for bracket.
//!
//! Leaf text is stored decoded: `-LRB-` becomes `(` and so on. Rendering
//! re-escapes brackets, which keeps the round trip exact for well-formed
//! treebank input.

mod annotated;
mod jsonl;
mod ptb;

use std::fmt;

pub use annotated::{attach_annotations, AnnotatedSentence, AnnotationError, AnnotationWarning};
pub use jsonl::{parse_record_line, read_annotated_jsonl, AnnotatedRecord, AnnotatedRecords, RecordError, TokenRecord};
pub use ptb::{decode_ptb_token, encode_ptb_token, parse_ptb, render_ptb, PtbError};

/// Half-open interval of token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index < self.end
    }

    /// True when `other` lies inside `self`.
    pub fn covers(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

/// One token of an annotated sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub text: String,
    pub pos: String,
    pub ne: String,
}

impl Token {
    /// A token without a named-entity tag.
    pub fn new(index: usize, text: impl Into<String>, pos: impl Into<String>) -> Self {
        Token {
            index,
            text: text.into(),
            pos: pos.into(),
            ne: "O".to_string(),
        }
    }

    pub fn with_ne(mut self, ne: impl Into<String>) -> Self {
        self.ne = ne.into();
        self
    }

    pub fn is_verb(&self) -> bool {
        is_verb_tag(&self.pos)
    }

    pub fn is_punct(&self) -> bool {
        is_punct_tag(&self.pos)
    }
}

/// Verb tags: `VB`, `VBD`, `VBG`, `VBN`, `VBP`, `VBZ` and modals.
pub fn is_verb_tag(pos: &str) -> bool {
    pos.starts_with("VB") || pos == "MD"
}

/// Punctuation tags of the Penn Treebank tagset.
pub fn is_punct_tag(pos: &str) -> bool {
    matches!(
        pos,
        "," | "." | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "-LCB-" | "-RCB-" | "-LSB-" | "-RSB-" | "#"
            | "$"
    )
}

/// A node of a constituency tree.
///
/// Leaves are preterminals: the label is the POS tag and `leaf_text` holds
/// the word. Every node knows the token span it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseNode {
    label: String,
    children: Vec<ParseNode>,
    leaf_text: Option<String>,
    span: Span,
    functional_root: Option<String>,
}

impl ParseNode {
    /// A preterminal covering a single token at index 0.
    pub fn leaf(label: impl Into<String>, text: impl Into<String>) -> Self {
        ParseNode {
            label: label.into(),
            children: Vec::new(),
            leaf_text: Some(text.into()),
            span: Span::new(0, 1),
            functional_root: None,
        }
    }

    /// An internal node; spans are recomputed so the node starts at token 0.
    ///
    /// Panics if `children` is empty.
    pub fn branch(label: impl Into<String>, children: Vec<ParseNode>) -> Self {
        assert!(!children.is_empty(), "internal parse node without children");
        let mut node = ParseNode {
            label: label.into(),
            children,
            leaf_text: None,
            span: Span::default(),
            functional_root: None,
        };
        node.respan(0);
        node
    }

    /// Recomputes spans of the whole subtree starting at `start`; returns the end.
    pub(crate) fn respan(&mut self, start: usize) -> usize {
        if self.children.is_empty() {
            self.span = Span::new(start, start + 1);
            return start + 1;
        }
        let mut at = start;
        for child in &mut self.children {
            at = child.respan(at);
        }
        self.span = Span::new(start, at);
        at
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn children(&self) -> &[ParseNode] {
        &self.children
    }

    /// Surface text of a leaf, `None` for internal nodes.
    pub fn leaf_text(&self) -> Option<&str> {
        self.leaf_text.as_deref()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn span(&self) -> Span {
        self.span
    }

    /// The token interval covered by this node.
    pub fn node_positions(&self) -> Span {
        self.span
    }

    /// Label of a stripped `ROOT`/`TOP` wrapper, if the input had one.
    pub fn functional_root(&self) -> Option<&str> {
        self.functional_root.as_deref()
    }

    pub(crate) fn set_functional_root(&mut self, label: Option<String>) {
        self.functional_root = label;
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&ParseNode> {
        let mut out = Vec::with_capacity(self.span.len());
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a ParseNode>) {
        if self.is_leaf() {
            out.push(self);
        } else {
            for c in &self.children {
                c.collect_leaves(out);
            }
        }
    }

    pub(crate) fn leaves_mut(&mut self) -> Vec<&mut ParseNode> {
        fn walk<'a>(n: &'a mut ParseNode, out: &mut Vec<&'a mut ParseNode>) {
            if n.children.is_empty() {
                out.push(n);
            } else {
                for c in n.children.iter_mut() {
                    walk(c, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// All nodes in document order (preorder, parents before children).
    pub fn preorder(&self) -> Vec<&ParseNode> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(n.children.iter().rev());
        }
        out
    }

    /// Number of nodes in the subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ParseNode::size).sum::<usize>()
    }

    /// Leaf texts of the subtree, in order.
    pub fn yield_words(&self) -> Vec<&str> {
        self.leaves().into_iter().filter_map(|l| l.leaf_text()).collect()
    }
}

impl fmt::Display for ParseNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_ptb(self))
    }
}
