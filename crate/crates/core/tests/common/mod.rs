#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use disembed::treebank::read_annotated_jsonl;
use disembed::AnnotatedSentence;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load(name: &str) -> Vec<AnnotatedSentence> {
    let file = File::open(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    read_annotated_jsonl(BufReader::new(file))
        .map(|r| r.unwrap_or_else(|e| panic!("{name}: {e}")))
        .collect()
}

pub fn by_id(name: &str, id: &str) -> AnnotatedSentence {
    load(name)
        .into_iter()
        .find(|s| s.id() == id)
        .unwrap_or_else(|| panic!("no sentence `{id}` in {name}"))
}

/// Every fixture sentence shipped with the tests.
pub fn all_fixtures() -> Vec<AnnotatedSentence> {
    ["golden.jsonl", "golden_extra.jsonl", "corpus.jsonl"]
        .iter()
        .flat_map(|f| load(f))
        .collect()
}

pub mod gen;
pub mod oracle;
pub mod props;
