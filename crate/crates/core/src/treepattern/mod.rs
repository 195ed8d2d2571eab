//! A Tregex-style tree pattern language.
//!
//! ```text
//! pattern   := node (rel node)*
//! node      := "(" pattern ")" | ["!"] labeltest ["=" name]
//! rel       := "<" | "<<" | ">" | ">>" | "." | ".." | "$" | "<1" | "<-"
//! labeltest := LITERAL | "/" REGEX "/" | "(" LITERAL ("|" LITERAL)* ")"
//! ```
//!
//! All relations following a node constrain that node; a parenthesised
//! sub-pattern is a node carrying its own relations, so
//! `SBAR=rc > (NP <1 NP=ant) $ /,/` reads "an SBAR whose parent NP has an
//! NP first child, and which has a comma sister".
//!
//! `A < B` means A is the parent of B, `A << B` an ancestor; `>` and `>>`
//! are the inverses. `A . B` holds when B starts right where A ends, `A .. B`
//! when B starts at or after A's end. `A $ B` means B is another child of
//! A's parent; `A <1 B` and `A <- B` name A's first and last child.
//!
//! Regex label tests are anchored to the whole label. `!` negates the label
//! test of one node. `__` matches any label.

mod matcher;
mod parse;

use std::fmt;

use regex::Regex;

pub use matcher::{match_pattern, MatchResult, Matcher};
pub use parse::{parse_pattern, PatternError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `<`
    ParentOf,
    /// `<<`
    AncestorOf,
    /// `>`
    ChildOf,
    /// `>>`
    DescendantOf,
    /// `.`
    ImmediatelyPrecedes,
    /// `..`
    Precedes,
    /// `$`
    SisterOf,
    /// `<1`
    LeftmostChild,
    /// `<-`
    RightmostChild,
}

impl Relation {
    pub const ALL: [Relation; 9] = [
        Relation::ParentOf,
        Relation::AncestorOf,
        Relation::ChildOf,
        Relation::DescendantOf,
        Relation::ImmediatelyPrecedes,
        Relation::Precedes,
        Relation::SisterOf,
        Relation::LeftmostChild,
        Relation::RightmostChild,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::ParentOf => "<",
            Relation::AncestorOf => "<<",
            Relation::ChildOf => ">",
            Relation::DescendantOf => ">>",
            Relation::ImmediatelyPrecedes => ".",
            Relation::Precedes => "..",
            Relation::SisterOf => "$",
            Relation::LeftmostChild => "<1",
            Relation::RightmostChild => "<-",
        }
    }
}

#[derive(Debug, Clone)]
pub enum LabelTest {
    Any,
    Literal(String),
    Alternation(Vec<String>),
    Regex(Regex),
}

impl LabelTest {
    pub fn accepts(&self, label: &str) -> bool {
        match self {
            LabelTest::Any => true,
            LabelTest::Literal(l) => l == label,
            LabelTest::Alternation(ls) => ls.iter().any(|l| l == label),
            LabelTest::Regex(re) => re.is_match(label),
        }
    }
}

impl PartialEq for LabelTest {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (LabelTest::Any, LabelTest::Any) => true,
            (LabelTest::Literal(a), LabelTest::Literal(b)) => a == b,
            (LabelTest::Alternation(a), LabelTest::Alternation(b)) => a == b,
            (LabelTest::Regex(a), LabelTest::Regex(b)) => a.as_str() == b.as_str(),
            _ => false,
        }
    }
}

impl fmt::Display for LabelTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelTest::Any => f.write_str("__"),
            LabelTest::Literal(l) => f.write_str(l),
            LabelTest::Alternation(ls) => write!(f, "({})", ls.join("|")),
            LabelTest::Regex(re) => {
                // stored anchored as ^(?:..)$
                let s = re.as_str();
                let inner = s
                    .strip_prefix("^(?:")
                    .and_then(|s| s.strip_suffix(")$"))
                    .unwrap_or(s);
                write!(f, "/{}/", inner.replace('/', "\\/"))
            }
        }
    }
}

/// One node of a pattern: a label test plus relations to further nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternNode {
    pub test: LabelTest,
    pub negated: bool,
    pub capture: Option<String>,
    pub relations: Vec<(Relation, PatternNode)>,
}

impl PatternNode {
    pub fn new(test: LabelTest) -> Self {
        PatternNode {
            test,
            negated: false,
            capture: None,
            relations: Vec::new(),
        }
    }

    pub fn accepts(&self, label: &str) -> bool {
        self.test.accepts(label) != self.negated
    }

    fn collect_captures<'a>(&'a self, out: &mut Vec<&'a str>) {
        if let Some(c) = &self.capture {
            out.push(c);
        }
        for (_, n) in &self.relations {
            n.collect_captures(out);
        }
    }

    /// Number of pattern nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.relations.iter().map(|(_, n)| n.size()).sum::<usize>()
    }
}

impl fmt::Display for PatternNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "{}", self.test)?;
        if let Some(c) = &self.capture {
            write!(f, "={c}")?;
        }
        for (rel, node) in &self.relations {
            if node.relations.is_empty() {
                write!(f, " {} {}", rel.symbol(), node)?;
            } else {
                write!(f, " {} ({})", rel.symbol(), node)?;
            }
        }
        Ok(())
    }
}

/// A parsed pattern; the root node is what a match is anchored on.
#[derive(Debug, Clone, PartialEq)]
pub struct TreePattern {
    root: PatternNode,
}

impl TreePattern {
    pub fn new(root: PatternNode) -> Self {
        TreePattern { root }
    }

    pub fn root(&self) -> &PatternNode {
        &self.root
    }

    /// Capture names in pattern order.
    pub fn captures(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.root.collect_captures(&mut out);
        out
    }

    pub fn declares(&self, name: &str) -> bool {
        self.captures().contains(&name)
    }

    /// Number of relation constraints.
    pub fn constraint_count(&self) -> usize {
        self.root.size() - 1
    }
}

impl fmt::Display for TreePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}
