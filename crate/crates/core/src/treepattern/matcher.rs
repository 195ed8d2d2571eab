use std::collections::BTreeMap;

use super::{PatternNode, Relation, TreePattern};
use crate::treebank::ParseNode;

/// One anchored match with its captures.
#[derive(Debug, Clone)]
pub struct MatchResult<'a> {
    pub anchor: &'a ParseNode,
    pub captures: BTreeMap<String, &'a ParseNode>,
}

impl<'a> MatchResult<'a> {
    pub fn capture(&self, name: &str) -> Option<&'a ParseNode> {
        self.captures.get(name).copied()
    }
}

impl PartialEq for MatchResult<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.anchor, other.anchor)
            && self.captures.len() == other.captures.len()
            && self
                .captures
                .iter()
                .zip(&other.captures)
                .all(|((ka, a), (kb, b))| ka == kb && std::ptr::eq(*a, *b))
    }
}

/// A tree indexed in preorder for repeated matching.
pub struct Matcher<'a> {
    nodes: Vec<&'a ParseNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// preorder index one past the last descendant
    subtree_end: Vec<usize>,
}

impl<'a> Matcher<'a> {
    pub fn new(tree: &'a ParseNode) -> Self {
        let mut m = Matcher {
            nodes: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            subtree_end: Vec::new(),
        };
        m.index(tree, None);
        m
    }

    fn index(&mut self, node: &'a ParseNode, parent: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(node);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.subtree_end.push(0);
        for c in node.children() {
            let cid = self.index(c, Some(id));
            self.children[id].push(cid);
        }
        self.subtree_end[id] = self.nodes.len();
        id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Every anchor in document order with the first satisfying assignment
    /// of its captures.
    pub fn matches(&self, pattern: &TreePattern) -> Vec<MatchResult<'a>> {
        let mut out = Vec::new();
        for anchor in 0..self.nodes.len() {
            let mut captures = BTreeMap::new();
            if self.satisfy(pattern.root(), anchor, &mut captures) {
                out.push(MatchResult {
                    anchor: self.nodes[anchor],
                    captures,
                });
            }
        }
        out
    }

    fn satisfy(
        &self,
        pnode: &PatternNode,
        at: usize,
        captures: &mut BTreeMap<String, &'a ParseNode>,
    ) -> bool {
        if !pnode.accepts(self.nodes[at].label()) {
            return false;
        }
        let mark = captures.clone();
        for (rel, target) in &pnode.relations {
            let found = self
                .candidates(*rel, at)
                .into_iter()
                .any(|cand| {
                    let before = captures.clone();
                    if self.satisfy(target, cand, captures) {
                        true
                    } else {
                        *captures = before;
                        false
                    }
                });
            if !found {
                *captures = mark;
                return false;
            }
        }
        if let Some(name) = &pnode.capture {
            captures.insert(name.clone(), self.nodes[at]);
        }
        true
    }

    /// Nodes standing in `rel` to node `at`, in preorder.
    fn candidates(&self, rel: Relation, at: usize) -> Vec<usize> {
        let span = self.nodes[at].span();
        match rel {
            Relation::ParentOf => self.children[at].clone(),
            Relation::AncestorOf => (at + 1..self.subtree_end[at]).collect(),
            Relation::ChildOf => self.parent[at].into_iter().collect(),
            Relation::DescendantOf => {
                let mut up = Vec::new();
                let mut cur = self.parent[at];
                while let Some(p) = cur {
                    up.push(p);
                    cur = self.parent[p];
                }
                up.reverse();
                up
            }
            Relation::ImmediatelyPrecedes => (0..self.nodes.len())
                .filter(|&j| self.nodes[j].span().start == span.end)
                .collect(),
            Relation::Precedes => (0..self.nodes.len())
                .filter(|&j| self.nodes[j].span().start >= span.end)
                .collect(),
            Relation::SisterOf => match self.parent[at] {
                Some(p) => self.children[p].iter().copied().filter(|&j| j != at).collect(),
                None => Vec::new(),
            },
            Relation::LeftmostChild => self.children[at].first().copied().into_iter().collect(),
            Relation::RightmostChild => self.children[at].last().copied().into_iter().collect(),
        }
    }
}

/// Matches `pattern` against every node of `tree`.
pub fn match_pattern<'a>(pattern: &TreePattern, tree: &'a ParseNode) -> Vec<MatchResult<'a>> {
    Matcher::new(tree).matches(pattern)
}
