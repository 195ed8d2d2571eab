//! Exhaustive-assignment matcher used to check the library matcher, plus
//! generators for the random trees and patterns it is run on.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use disembed::{match_pattern, parse_pattern, ParseNode};

const PHRASES: &[&str] = &["S", "NP", "VP", "PP", "SBAR"];
const TAGS: &[&str] = &["DT", "NN", "NNP", "VBD", "VBZ", "IN", ",", "."];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Parent,
    Ancestor,
    Child,
    Descendant,
    Adjacent,
    Precedes,
    Sister,
    First,
    Last,
}

const RELS: [Rel; 9] = [
    Rel::Parent,
    Rel::Ancestor,
    Rel::Child,
    Rel::Descendant,
    Rel::Adjacent,
    Rel::Precedes,
    Rel::Sister,
    Rel::First,
    Rel::Last,
];

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Parent => "<",
            Rel::Ancestor => "<<",
            Rel::Child => ">",
            Rel::Descendant => ">>",
            Rel::Adjacent => ".",
            Rel::Precedes => "..",
            Rel::Sister => "$",
            Rel::First => "<1",
            Rel::Last => "<-",
        }
    }
}

/// Label tests; regexes come from a fixed list with hand-written meaning.
#[derive(Debug, Clone)]
pub enum Test {
    Any,
    Lit(&'static str),
    Alt(Vec<&'static str>),
    Re(usize),
}

const REGEXES: &[&str] = &["VB.?", "N.*", ",", "S|VP", "[A-Z]+P"];

fn regex_accepts(which: usize, label: &str) -> bool {
    match which {
        0 => label.starts_with("VB") && label.len() <= 3,
        1 => label.starts_with('N'),
        2 => label == ",",
        3 => label == "S" || label == "VP",
        _ => label.len() >= 2 && label.ends_with('P') && label.chars().all(|c| c.is_ascii_uppercase()),
    }
}

impl Test {
    fn accepts(&self, label: &str) -> bool {
        match self {
            Test::Any => true,
            Test::Lit(l) => *l == label,
            Test::Alt(ls) => ls.contains(&label),
            Test::Re(i) => regex_accepts(*i, label),
        }
    }

    fn render(&self) -> String {
        match self {
            Test::Any => "__".into(),
            Test::Lit(l) => l.to_string(),
            Test::Alt(ls) => format!("({})", ls.join("|")),
            Test::Re(i) => format!("/{}/", REGEXES[*i]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PNode {
    pub test: Test,
    pub negated: bool,
    pub capture: Option<String>,
    pub rels: Vec<(Rel, PNode)>,
}

impl PNode {
    pub fn render(&self) -> String {
        let mut s = String::new();
        if self.negated {
            s.push('!');
        }
        s += &self.test.render();
        if let Some(c) = &self.capture {
            s += &format!("={c}");
        }
        for (rel, n) in &self.rels {
            let inner = n.render();
            if n.rels.is_empty() {
                s += &format!(" {} {inner}", rel.symbol());
            } else {
                s += &format!(" {} ({inner})", rel.symbol());
            }
        }
        s
    }

    fn accepts(&self, label: &str) -> bool {
        self.test.accepts(label) != self.negated
    }

    /// Pattern nodes in depth-first order with the index of their parent
    /// and the relation to it.
    fn flatten<'a>(&'a self, parent: Option<(usize, Rel)>, out: &mut Vec<(&'a PNode, Option<(usize, Rel)>)>) {
        let me = out.len();
        out.push((self, parent));
        for (rel, n) in &self.rels {
            n.flatten(Some((me, *rel)), out);
        }
    }
}

/// A tree as parallel arrays in preorder.
pub struct Flat<'a> {
    pub nodes: Vec<&'a ParseNode>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    start: Vec<usize>,
    end: Vec<usize>,
}

impl<'a> Flat<'a> {
    pub fn new(tree: &'a ParseNode) -> Self {
        let mut f = Flat {
            nodes: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
            start: Vec::new(),
            end: Vec::new(),
        };
        let mut next_leaf = 0;
        f.walk(tree, None, &mut next_leaf);
        f
    }

    fn walk(&mut self, n: &'a ParseNode, parent: Option<usize>, next_leaf: &mut usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(n);
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.start.push(*next_leaf);
        self.end.push(0);
        if n.leaf_text().is_some() {
            *next_leaf += 1;
        }
        for c in n.children() {
            let cid = self.walk(c, Some(id), next_leaf);
            self.children[id].push(cid);
        }
        self.end[id] = *next_leaf;
        id
    }

    fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = self.parent[b];
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.parent[p];
        }
        false
    }

    fn holds(&self, rel: Rel, a: usize, b: usize) -> bool {
        match rel {
            Rel::Parent => self.parent[b] == Some(a),
            Rel::Ancestor => self.is_ancestor(a, b),
            Rel::Child => self.parent[a] == Some(b),
            Rel::Descendant => self.is_ancestor(b, a),
            Rel::Adjacent => self.start[b] == self.end[a],
            Rel::Precedes => self.start[b] >= self.end[a],
            Rel::Sister => a != b && self.parent[a].is_some() && self.parent[a] == self.parent[b],
            Rel::First => self.children[a].first() == Some(&b),
            Rel::Last => self.children[a].last() == Some(&b),
        }
    }
}

/// One anchor and its captures, as preorder node indices.
pub type OracleMatch = (usize, BTreeMap<String, usize>);

/// Every anchor, in preorder, with the lexicographically first complete
/// assignment of pattern nodes (pattern nodes in depth-first order, tree
/// nodes in preorder).
pub fn brute_force(pattern: &PNode, flat: &Flat) -> Vec<OracleMatch> {
    let mut pnodes = Vec::new();
    pattern.flatten(None, &mut pnodes);
    let n = flat.nodes.len();
    let mut out = Vec::new();
    for anchor in 0..n {
        let mut assign = vec![anchor];
        if search(&pnodes, flat, &mut assign) {
            let caps = pnodes
                .iter()
                .zip(&assign)
                .filter_map(|((p, _), &t)| p.capture.clone().map(|c| (c, t)))
                .collect();
            out.push((anchor, caps));
        }
    }
    out
}

fn search(pnodes: &[(&PNode, Option<(usize, Rel)>)], flat: &Flat, assign: &mut Vec<usize>) -> bool {
    let k = assign.len();
    if k == 1 && !pnodes[0].0.accepts(flat.nodes[assign[0]].label()) {
        return false;
    }
    if k == pnodes.len() {
        return true;
    }
    let (p, parent) = pnodes[k];
    let (pi, rel) = parent.expect("only the first pattern node has no parent");
    for t in 0..flat.nodes.len() {
        if p.accepts(flat.nodes[t].label()) && flat.holds(rel, assign[pi], t) {
            assign.push(t);
            if search(pnodes, flat, assign) {
                return true;
            }
            assign.pop();
        }
    }
    false
}

/// A random tree of at most `max_nodes` nodes.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize) -> ParseNode {
    let mut budget = max_nodes.max(2) - 1;
    let label = *PHRASES.choose(rng).unwrap_or(&"S");
    grow(rng, label, &mut budget, 0)
}

fn grow<R: Rng>(rng: &mut R, label: &str, budget: &mut usize, depth: usize) -> ParseNode {
    let mut kids = Vec::new();
    let want = rng.gen_range(1..=3);
    for _ in 0..want {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        if depth < 3 && *budget > 0 && rng.gen_bool(0.45) {
            let l = *PHRASES.choose(rng).unwrap_or(&"NP");
            kids.push(grow(rng, l, budget, depth + 1));
        } else {
            let t = *TAGS.choose(rng).unwrap_or(&"NN");
            kids.push(ParseNode::leaf(t, "w"));
        }
    }
    if kids.is_empty() {
        return ParseNode::leaf(*TAGS.choose(rng).unwrap_or(&"NN"), "w");
    }
    ParseNode::branch(label, kids)
}

fn random_test<R: Rng>(rng: &mut R) -> Test {
    let labels: Vec<&'static str> = PHRASES.iter().chain(TAGS.iter().filter(|t| t.chars().all(char::is_alphabetic))).copied().collect();
    match rng.gen_range(0..10) {
        0 => Test::Any,
        1 | 2 => Test::Re(rng.gen_range(0..REGEXES.len())),
        3 => Test::Alt(labels.choose_multiple(rng, 2).copied().collect()),
        _ => Test::Lit(labels.choose(rng).unwrap_or(&"NP")),
    }
}

/// A random pattern with at most `max_constraints` relations.
pub fn random_pattern<R: Rng>(rng: &mut R, max_constraints: usize) -> PNode {
    let mut budget = rng.gen_range(1..=max_constraints);
    let mut next_capture = 0;
    pattern_node(rng, &mut budget, &mut next_capture)
}

fn pattern_node<R: Rng>(rng: &mut R, budget: &mut usize, next_capture: &mut usize) -> PNode {
    let test = random_test(rng);
    let negated = !matches!(test, Test::Any) && rng.gen_bool(0.1);
    let capture = rng.gen_bool(0.4).then(|| {
        *next_capture += 1;
        format!("c{next_capture}")
    });
    let mut rels = Vec::new();
    while *budget > 0 && (rels.is_empty() || rng.gen_bool(0.5)) {
        *budget -= 1;
        let rel = *RELS.choose(rng).unwrap_or(&Rel::Parent);
        let sub = if *budget > 0 && rng.gen_bool(0.4) {
            pattern_node(rng, budget, next_capture)
        } else {
            let mut zero = 0;
            pattern_node(rng, &mut zero, next_capture)
        };
        rels.push((rel, sub));
    }
    PNode {
        test,
        negated,
        capture,
        rels,
    }
}

/// Compares the matcher with exhaustive search; returns (pairs with a
/// match, disagreements).
pub fn compare(seed: u64, trees: usize, patterns: usize) -> (usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trees: Vec<_> = (0..trees).map(|_| random_tree(&mut rng, 12)).collect();
    let patterns: Vec<_> = (0..patterns).map(|_| random_pattern(&mut rng, 4)).collect();
    let mut nonempty = 0;
    let mut bad = Vec::new();
    for p in &patterns {
        let src = p.render();
        let compiled = parse_pattern(&src).unwrap_or_else(|e| panic!("`{src}`: {e}"));
        for t in &trees {
            let flat = Flat::new(t);
            let index = |n: &disembed::ParseNode| flat.nodes.iter().position(|m| std::ptr::eq(*m, n)).unwrap();
            let got: Vec<_> = match_pattern(&compiled, t)
                .into_iter()
                .map(|m| (index(m.anchor), m.captures.iter().map(|(k, v)| (k.clone(), index(v))).collect()))
                .collect();
            let want = brute_force(p, &flat);
            if !want.is_empty() {
                nonempty += 1;
            }
            if got != want {
                bad.push(format!("`{src}` on {}: got {got:?}, want {want:?}", disembed::render_ptb(t)));
            }
        }
    }
    (nonempty, bad)
}
