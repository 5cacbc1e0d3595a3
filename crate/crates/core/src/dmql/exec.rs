//! Query execution against a catalog of named datasets and hierarchies.

use std::collections::HashMap;

use super::parser::{DmqlQuery, Task};
use crate::dataset::{norm, Aggregate, Dataset, Value};
use crate::entropy::RelevancePolicy;
use crate::error::{Error, Result};
use crate::hierarchy::ConceptHierarchy;
use crate::induction::{build_tree, DecisionTree, InductionConfig, Mode, PrioritySpec};
use crate::restructure::{height_balance, node_merge, PriorityAssignment};
use crate::rules::{compare_trees, extract_rules, ClassificationRule, ComparisonReport};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub dataset: Dataset,
    pub hierarchies: Vec<ConceptHierarchy>,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: HashMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn new() -> Self {
        Catalog::default()
    }

    pub fn insert(&mut self, name: &str, entry: CatalogEntry) {
        self.entries.insert(norm(name), entry);
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.get(&norm(name))
    }
}

/// Defaults for knobs the query language does not spell.
#[derive(Debug, Clone)]
pub struct ExecDefaults {
    pub epsilon: f64,
    pub kappa: f64,
    pub relevance: Option<RelevancePolicy>,
    /// Numeric columns to carry (summed) through generalization.
    pub aggregates: HashMap<String, Aggregate>,
}

impl Default for ExecDefaults {
    fn default() -> Self {
        ExecDefaults {
            epsilon: 0.0,
            kappa: 1.0,
            relevance: Some(RelevancePolicy::Threshold(0.5)),
            aggregates: HashMap::new(),
        }
    }
}

impl ExecDefaults {
    pub fn with_sum(mut self, attr: &str) -> Self {
        self.aggregates.insert(norm(attr), Aggregate::Sum);
        self
    }
}

#[derive(Debug, Clone)]
pub enum QueryOutput {
    Generalized(Dataset),
    Classified {
        baseline: DecisionTree,
        tree: DecisionTree,
        rules: Vec<ClassificationRule>,
        report: ComparisonReport,
        merge_log: Vec<String>,
    },
}

#[derive(Debug, Clone)]
pub struct QueryResult {
    pub output: QueryOutput,
    pub warnings: Vec<String>,
}

pub fn execute(q: &DmqlQuery, catalog: &Catalog, defaults: &ExecDefaults) -> Result<QueryResult> {
    let entry = catalog
        .get(&q.source_dataset)
        .ok_or_else(|| Error::UnknownDataset(q.source_dataset.clone()))?;
    let mut warnings = Vec::new();

    // Bindings validate hierarchy coverage; they never restrict execution.
    for (name, values) in &q.bindings {
        for v in values {
            let known = entry
                .hierarchies
                .iter()
                .any(|h| h.contains(v) && h.levels.len() > 1);
            if !known {
                warnings.push(format!(
                    "binding {}: value '{}' not covered by any hierarchy",
                    name, v
                ));
            }
        }
    }

    match q.task {
        Task::Generalize => Ok(QueryResult {
            output: QueryOutput::Generalized(run_generalize(q, entry, defaults)?),
            warnings,
        }),
        Task::ClassifyTree => {
            let output = run_classify(q, entry, defaults, &mut warnings)?;
            Ok(QueryResult { output, warnings })
        }
    }
}

fn run_generalize(q: &DmqlQuery, entry: &CatalogEntry, defaults: &ExecDefaults) -> Result<Dataset> {
    let replace = q.replace_clause.as_ref().unwrap();
    let targets: Vec<String> = replace.target_values.iter().map(|v| norm(v)).collect();
    // The hierarchy that knows every replacement value is the one being
    // ascended.
    let h = entry
        .hierarchies
        .iter()
        .find(|h| h.levels.len() > 1 && targets.iter().all(|t| h.level_of(t).is_some()))
        .ok_or_else(|| Error::NoMatchingHierarchy(replace.target_values.clone()))?;
    let mut d = entry.dataset.clone();
    let attr_idx = d.attr_index(&h.attribute)?;
    let mut column = Vec::with_capacity(d.len());
    for t in d.tuples() {
        let raw = t[attr_idx].as_nominal().ok_or_else(|| Error::UncoveredValue {
            attribute: h.attribute.clone(),
            value: t[attr_idx].render(),
        })?;
        let mut v = raw.to_string();
        // Ascend until the value lands in the replacement set.
        loop {
            if targets.contains(&norm(&v)) {
                break;
            }
            let up = h.ascend(&v, 1)?;
            if norm(&up) == norm(&v) {
                return Err(Error::UncoveredValue {
                    attribute: h.attribute.clone(),
                    value: raw.to_string(),
                });
            }
            v = up;
        }
        column.push(Value::nominal(&v));
    }
    d = d.replace_column(attr_idx, column);
    d.rename_attribute(attr_idx, &replace.new_attribute);
    // Project onto the relevance list; aggregated numeric columns ride along.
    let mut keep = q.relevance.clone();
    for a in d.schema() {
        if defaults.aggregates.contains_key(&norm(&a.name)) {
            keep.push(a.name.clone());
        }
    }
    d.project(&keep, false, &defaults.aggregates)
}

fn run_classify(
    q: &DmqlQuery,
    entry: &CatalogEntry,
    defaults: &ExecDefaults,
    warnings: &mut Vec<String>,
) -> Result<QueryOutput> {
    let mut d = entry.dataset.clone();
    let class_attr = q.relevance.first().expect("validated nonempty relevance");
    d.set_class(class_attr)?;

    let mut clauses = q.priorities.clone();
    clauses.sort_by_key(|p| p.rank);
    let mut pa = PriorityAssignment::new(clauses.len() as u32);
    let mut priorities = Vec::new();
    for p in &clauses {
        let idx = d
            .attr_index(&p.attribute)
            .map_err(|_| Error::UnknownPriorityAttribute(p.attribute.clone()))?;
        let observed = d.distinct_values(idx);
        for v in &p.value_order {
            if !observed.iter().any(|(k, _)| *k == norm(v)) {
                warnings.push(format!(
                    "priority {}: value '{}' not present in the data",
                    p.attribute, v
                ));
            }
        }
        pa = pa.with_rank(&p.attribute, p.rank);
        priorities.push(PrioritySpec {
            attribute: p.attribute.clone(),
            value_order: p.value_order.clone(),
        });
    }

    let base_cfg = InductionConfig {
        mode: Mode::BaselineGain,
        priorities: Vec::new(),
        epsilon: defaults.epsilon,
        kappa: defaults.kappa,
        relevance: defaults.relevance,
    };
    let baseline = build_tree(&d, &base_cfg)?;

    let cfg = InductionConfig {
        mode: Mode::Priority,
        priorities,
        ..base_cfg
    };
    let built = build_tree(&d, &cfg)?;
    let merged = node_merge(&built, &pa);
    let tree = height_balance(&merged.tree);
    let rules = extract_rules(&tree);
    let requested: Vec<String> = clauses.iter().map(|p| p.attribute.clone()).collect();
    let report = compare_trees(&baseline, &tree, &requested);
    Ok(QueryOutput::Classified {
        baseline,
        tree,
        rules,
        report,
        merge_log: merged.log,
    })
}
