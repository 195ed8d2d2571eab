use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Family, ParaphraseRecipe, SimplificationRule, Strategy, DELIMITER_TAGS};
use crate::treepattern::{parse_pattern, PatternError};

/// The catalog shipped with the crate.
pub const DEFAULT_CATALOG: &str = include_str!("../../catalog/default.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("catalog schema: {0}")]
    CatalogSchemaError(String),
    #[error("duplicate rule name `{0}`")]
    DuplicateRuleName(String),
    #[error("rule `{rule}` uses capture `{name}` that its pattern does not declare")]
    UnknownCapture { rule: String, name: String },
    #[error("rule `{rule}`: {source}")]
    InvalidPattern { rule: String, source: PatternError },
}

/// Wire form of one catalog entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub family: Family,
    pub priority: i64,
    pub pattern: String,
    pub strategy: Strategy,
    pub delete: String,
    #[serde(default)]
    pub trim: Vec<String>,
}

/// Rules ordered by priority; equal priorities keep document order.
#[derive(Debug, Clone)]
pub struct Catalog {
    rules: Vec<SimplificationRule>,
}

impl Catalog {
    pub fn default_catalog() -> Catalog {
        load_catalog(DEFAULT_CATALOG).expect("shipped catalog is valid")
    }

    pub fn rules(&self) -> &[SimplificationRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&SimplificationRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn families(&self) -> BTreeSet<Family> {
        self.rules.iter().map(|r| r.family).collect()
    }

    pub fn split_rules(&self) -> impl Iterator<Item = &SimplificationRule> {
        self.rules.iter().filter(|r| r.is_split())
    }

    pub fn disembedding_rules(&self) -> impl Iterator<Item = &SimplificationRule> {
        self.rules.iter().filter(|r| !r.is_split())
    }

    /// Keeps only rules of the given families.
    pub fn restrict(&self, families: &BTreeSet<Family>) -> Catalog {
        Catalog {
            rules: self
                .rules
                .iter()
                .filter(|r| families.contains(&r.family))
                .cloned()
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::default_catalog()
    }
}

/// Parses and validates a catalog document (a JSON array of entries).
pub fn load_catalog(src: &str) -> Result<Catalog, CatalogError> {
    let entries: Vec<CatalogEntry> =
        serde_json::from_str(src).map_err(|e| CatalogError::CatalogSchemaError(e.to_string()))?;
    if entries.is_empty() {
        return Err(CatalogError::CatalogSchemaError("catalog has no rules".into()));
    }
    let families: HashSet<Family> = entries.iter().map(|e| e.family).collect();
    if !families.contains(&Family::ClauseSplit) || families.len() < 2 {
        return Err(CatalogError::CatalogSchemaError(
            "a catalog needs CLAUSE_SPLIT and at least one disembedding family".into(),
        ));
    }

    let mut names = HashSet::new();
    let mut rules = Vec::with_capacity(entries.len());
    for e in entries {
        if !names.insert(e.name.clone()) {
            return Err(CatalogError::DuplicateRuleName(e.name));
        }
        let pattern = parse_pattern(&e.pattern).map_err(|source| CatalogError::InvalidPattern {
            rule: e.name.clone(),
            source,
        })?;
        let unknown = |name: &str| CatalogError::UnknownCapture {
            rule: e.name.clone(),
            name: name.to_string(),
        };
        if e.strategy == Strategy::AntecedentLink && !pattern.declares("ant") {
            return Err(unknown("ant"));
        }
        if !pattern.declares(&e.delete) {
            return Err(unknown(&e.delete));
        }
        for t in &e.trim {
            if !DELIMITER_TAGS.contains(&t.as_str()) && !pattern.declares(t) {
                return Err(unknown(t));
            }
        }
        rules.push(SimplificationRule {
            name: e.name,
            family: e.family,
            priority: e.priority,
            pattern,
            recipe: ParaphraseRecipe {
                strategy: e.strategy,
                delete: e.delete,
                trim: e.trim,
            },
        });
    }
    rules.sort_by_key(|r| r.priority);
    Ok(Catalog { rules })
}
