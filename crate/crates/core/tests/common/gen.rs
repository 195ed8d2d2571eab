//! Random annotated sentences built from a small grammar that exercises
//! every rule family.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use disembed::treebank::attach_annotations;
use disembed::{AnnotatedSentence, ParseNode, Token};

const PEOPLE: &[&str] = &["Obama", "Maria", "Goerne", "Keyes", "Blair"];
const PLACES: &[&str] = &["Paris", "Vienna", "Boston", "Lisbon"];
const NOUNS: &[&str] = &["bill", "city", "program", "team", "report", "bridge", "museum"];
const ADJS: &[&str] = &["new", "large", "German", "old"];
const TRANSITIVE: &[&str] = &["signed", "visited", "praised", "built", "offered"];
const INTRANSITIVE: &[&str] = &["arrived", "left", "won", "grew"];
const SPEECH: &[&str] = &["said", "reported", "claimed"];
const YEARS: &[&str] = &["1990", "2004", "2010", "2013"];

fn leaf(pos: &str, word: &str) -> ParseNode {
    ParseNode::leaf(pos, word)
}

fn br(label: &str, children: Vec<ParseNode>) -> ParseNode {
    ParseNode::branch(label, children)
}

pub struct SentenceGen {
    rng: ChaCha8Rng,
}

impl SentenceGen {
    pub fn new(seed: u64) -> Self {
        SentenceGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn pick(&mut self, xs: &[&'static str]) -> &'static str {
        xs.choose(&mut self.rng).copied().unwrap_or("x")
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn name(&mut self) -> ParseNode {
        let w = if self.chance(0.6) { self.pick(PEOPLE) } else { self.pick(PLACES) };
        br("NP", vec![leaf("NNP", w)])
    }

    fn common(&mut self) -> ParseNode {
        let mut kids = vec![leaf("DT", "the")];
        if self.chance(0.4) {
            kids.push(leaf("JJ", self.pick(ADJS)));
        }
        kids.push(leaf("NN", self.pick(NOUNS)));
        br("NP", kids)
    }

    fn plain_np(&mut self) -> ParseNode {
        if self.chance(0.5) {
            self.name()
        } else {
            self.common()
        }
    }

    fn year_pp(&mut self) -> ParseNode {
        br("PP", vec![leaf("IN", "in"), br("NP", vec![leaf("CD", self.pick(YEARS))])])
    }

    fn place_pp(&mut self) -> ParseNode {
        br("PP", vec![leaf("IN", "in"), br("NP", vec![leaf("NNP", self.pick(PLACES))])])
    }

    /// A noun phrase, possibly carrying an embedded constituent.
    fn np(&mut self, depth: usize) -> ParseNode {
        let base = self.plain_np();
        if depth == 0 || self.chance(0.45) {
            return base;
        }
        match self.rng.gen_range(0..5) {
            0 => {
                let app = self.np(depth - 1);
                br("NP", vec![base, leaf(",", ","), app, leaf(",", ",")])
            }
            1 => {
                let wh = if self.chance(0.5) { leaf("WDT", "which") } else { leaf("WP", "who") };
                let vp = self.vp(depth - 1);
                let rc = br("SBAR", vec![br("WHNP", vec![wh]), br("S", vec![vp])]);
                br("NP", vec![base, leaf(",", ","), rc, leaf(",", ",")])
            }
            2 => {
                let head = if self.chance(0.5) { leaf("VBN", "known") } else { leaf("VBG", "facing") };
                let part = br("VP", vec![head, self.place_pp()]);
                br("NP", vec![base, leaf(",", ","), part, leaf(",", ",")])
            }
            3 => {
                let inner = self.name();
                let prn = br("PRN", vec![leaf("-LRB-", "-LRB-"), inner, leaf("-RRB-", "-RRB-")]);
                br("NP", vec![base, prn])
            }
            _ => {
                let title = br("NP", vec![leaf("JJ", "former"), leaf("NN", "mayor")]);
                let who = br("NP", vec![leaf("NNP", self.pick(PEOPLE))]);
                br("NP", vec![title, who])
            }
        }
    }

    fn vp(&mut self, depth: usize) -> ParseNode {
        let mut kids = if self.chance(0.7) {
            vec![leaf("VBD", self.pick(TRANSITIVE)), self.np(depth)]
        } else {
            vec![leaf("VBD", self.pick(INTRANSITIVE))]
        };
        if self.chance(0.3) {
            kids.push(self.year_pp());
        }
        br("VP", kids)
    }

    /// Subject plus predicate, without final punctuation.
    fn clause(&mut self, depth: usize) -> Vec<ParseNode> {
        let subj = self.np(depth);
        let vp = self.vp(depth);
        vec![subj, vp]
    }

    fn front(&mut self) -> Option<ParseNode> {
        match self.rng.gen_range(0..6) {
            0 => Some(self.year_pp()),
            1 => Some(br("ADVP", vec![leaf("RB", "However")])),
            2 => Some(br("NP", vec![leaf("DT", "A"), leaf("NN", "week"), leaf("RB", "later")])),
            _ => None,
        }
    }

    fn tree(&mut self) -> ParseNode {
        let depth = self.rng.gen_range(0..3);
        let mut kids = Vec::new();
        if let Some(f) = self.front() {
            kids.push(f);
            kids.push(leaf(",", ","));
        }
        match self.rng.gen_range(0..6) {
            0 => {
                let a = br("S", self.clause(depth));
                let b = br("S", self.clause(depth));
                kids.extend([a, leaf(",", ","), leaf("CC", "and"), b]);
            }
            1 => {
                let inner = br("S", self.clause(depth));
                let sbar = br("SBAR", vec![leaf("IN", "that"), inner]);
                let vp = br("VP", vec![leaf("VBD", self.pick(SPEECH)), sbar]);
                kids.extend([br("NP", vec![leaf("PRP", "He")]), vp]);
            }
            2 => {
                let subj = self.np(depth);
                let a = self.vp(0);
                let b = self.vp(0);
                kids.extend([subj, br("VP", vec![a, leaf("CC", "and"), b])]);
            }
            _ => kids.extend(self.clause(depth)),
        }
        kids.push(leaf(".", "."));
        br("ROOT", vec![br("S", kids)])
    }

    /// The next sentence, named `gen-<n>`.
    pub fn sentence(&mut self, n: usize) -> AnnotatedSentence {
        let tree = disembed::parse_ptb(&disembed::render_ptb(&self.tree())).expect("generated trees are well formed");
        let tokens = tree
            .leaves()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let w = l.leaf_text().unwrap_or_default();
                let ne = if PEOPLE.contains(&w) {
                    "PERSON"
                } else if PLACES.contains(&w) {
                    "LOCATION"
                } else if YEARS.contains(&w) {
                    "DATE"
                } else {
                    "O"
                };
                Token::new(i, w, l.label()).with_ne(ne)
            })
            .collect();
        attach_annotations(tree, tokens)
            .expect("tokens come from the leaves")
            .with_id(format!("gen-{n}"))
    }
}

/// `count` sentences from a fixed seed.
pub fn sentences(seed: u64, count: usize) -> Vec<AnnotatedSentence> {
    let mut g = SentenceGen::new(seed);
    (0..count).map(|n| g.sentence(n)).collect()
}
