//! Decision tree construction: recursive partitioning with gain-based or
//! priority-based split selection, exception/classification thresholds, and
//! roll-up / drill-down of individual nodes against a concept hierarchy.

use crate::dataset::{norm, AttributeKind, AttributeRole, ClassDistribution, Dataset, Value};
use crate::entropy::{expected_info, info_gain, relevance_filter, RelevancePolicy};
use crate::error::{Error, Result};
use crate::hierarchy::ConceptHierarchy;

#[derive(Debug, Clone, PartialEq)]
pub enum BranchLabel {
    /// Set of nominal values routed down this branch.
    Values(Vec<String>),
    LessEq(f64),
    Greater(f64),
}

impl BranchLabel {
    pub fn matches(&self, v: &Value) -> bool {
        match self {
            BranchLabel::Values(vals) => match v.as_nominal() {
                Some(s) => vals.iter().any(|x| norm(x) == norm(s)),
                None => vals.iter().any(|x| x == &v.render()),
            },
            BranchLabel::LessEq(t) => v.as_numeric().map(|x| x <= *t).unwrap_or(false),
            BranchLabel::Greater(t) => v.as_numeric().map(|x| x > *t).unwrap_or(false),
        }
    }

    pub fn render(&self) -> String {
        match self {
            BranchLabel::Values(vals) if vals.len() == 1 => vals[0].clone(),
            BranchLabel::Values(vals) => format!("{{{}}}", vals.join(",")),
            BranchLabel::LessEq(t) => format!("<= {}", t),
            BranchLabel::Greater(t) => format!("> {}", t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub label: BranchLabel,
    pub child: DecisionNode,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecisionNode {
    Internal {
        test_attribute: String,
        branches: Vec<Branch>,
    },
    Leaf {
        distribution: ClassDistribution,
    },
}

impl DecisionNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self, DecisionNode::Leaf { .. })
    }

    pub fn height(&self) -> usize {
        match self {
            DecisionNode::Leaf { .. } => 0,
            DecisionNode::Internal { branches, .. } => {
                1 + branches.iter().map(|b| b.child.height()).max().unwrap_or(0)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DecisionNode::Leaf { .. } => 1,
            DecisionNode::Internal { branches, .. } => {
                branches.iter().map(|b| b.child.leaf_count()).sum()
            }
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            DecisionNode::Leaf { .. } => 0,
            DecisionNode::Internal { branches, .. } => {
                1 + branches.iter().map(|b| b.child.internal_count()).sum::<usize>()
            }
        }
    }

    /// Sum of all leaf distributions below (the data that entered this node).
    pub fn aggregate_distribution(&self) -> ClassDistribution {
        match self {
            DecisionNode::Leaf { distribution } => distribution.clone(),
            DecisionNode::Internal { branches, .. } => {
                let mut out = ClassDistribution::new();
                for b in branches {
                    out.merge(&b.child.aggregate_distribution());
                }
                out
            }
        }
    }

    /// Test attributes appearing anywhere in this subtree.
    pub fn attributes_used(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_attributes(&mut out);
        out
    }

    fn collect_attributes(&self, out: &mut Vec<String>) {
        if let DecisionNode::Internal {
            test_attribute,
            branches,
        } = self
        {
            if !out.iter().any(|a| norm(a) == norm(test_attribute)) {
                out.push(test_attribute.clone());
            }
            for b in branches {
                b.child.collect_attributes(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    BaselineGain,
    Priority,
}

/// One user-priority attribute, optionally with an explicit branch order.
#[derive(Debug, Clone, PartialEq)]
pub struct PrioritySpec {
    pub attribute: String,
    pub value_order: Vec<String>,
}

impl PrioritySpec {
    pub fn new(attribute: &str) -> Self {
        PrioritySpec {
            attribute: attribute.to_string(),
            value_order: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InductionConfig {
    pub mode: Mode,
    pub priorities: Vec<PrioritySpec>,
    /// Exception threshold: subsets holding less than this fraction of the
    /// total training count become leaves.
    pub epsilon: f64,
    /// Classification threshold: a subset whose majority-class frequency
    /// reaches this fraction becomes a leaf.
    pub kappa: f64,
    /// Relevance pre-filter applied to non-priority attributes before
    /// induction; priority attributes are always exempt.
    pub relevance: Option<RelevancePolicy>,
}

impl Default for InductionConfig {
    fn default() -> Self {
        InductionConfig {
            mode: Mode::BaselineGain,
            priorities: Vec::new(),
            epsilon: 0.0,
            kappa: 1.0,
            relevance: Some(RelevancePolicy::Threshold(0.5)),
        }
    }
}

impl InductionConfig {
    pub fn baseline() -> Self {
        InductionConfig::default()
    }

    pub fn priority(priorities: Vec<PrioritySpec>) -> Self {
        InductionConfig {
            mode: Mode::Priority,
            priorities,
            ..InductionConfig::default()
        }
    }

    fn priority_names(&self) -> Vec<String> {
        self.priorities.iter().map(|p| p.attribute.clone()).collect()
    }
}

/// A built tree plus the configuration it was grown with, so later
/// restructuring can rebuild subtrees under the same thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    pub root: DecisionNode,
    pub config: InductionConfig,
    pub total_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Split {
    Nominal(String),
    Numeric(String, f64),
}

impl Split {
    pub fn attribute(&self) -> &str {
        match self {
            Split::Nominal(a) | Split::Numeric(a, _) => a,
        }
    }
}

/// Best binary threshold split for a numeric column: candidates are the
/// midpoints of consecutive sorted distinct values.
pub fn split_numeric(d: &Dataset, attr: &str) -> Result<(f64, f64)> {
    let idx = d.attr_index(attr)?;
    let mut values: Vec<f64> = d
        .tuples()
        .iter()
        .filter_map(|t| t[idx].as_numeric())
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    if values.len() < 2 {
        return Err(Error::NoNumericSplit(attr.to_string()));
    }
    let ci = d.class_index();
    let class_info = expected_info(&d.class_distribution().counts())?;
    let total = d.total_count() as f64;
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for w in values.windows(2) {
        let t = (w[0] + w[1]) / 2.0;
        let mut low = ClassDistribution::new();
        let mut high = ClassDistribution::new();
        for (tuple, &c) in d.tuples().iter().zip(d.counts()) {
            let x = tuple[idx].as_numeric().unwrap_or(f64::NAN);
            let label = match &tuple[ci] {
                Value::Nominal(s) => s.clone(),
                v => v.render(),
            };
            if x <= t {
                low.add(&label, c);
            } else {
                high.add(&label, c);
            }
        }
        let e = (low.total() as f64 / total) * expected_info(&low.counts())?
            + (high.total() as f64 / total) * expected_info(&high.counts())?;
        let gain = class_info - e;
        if gain > best.1 {
            best = (t, gain);
        }
    }
    Ok(best)
}

/// Split-attribute gain usable for both nominal and numeric columns.
fn split_gain(d: &Dataset, attr: &str, kind: AttributeKind) -> Result<Option<(Split, f64)>> {
    match kind {
        AttributeKind::Nominal => {
            let idx = d.attr_index(attr)?;
            if d.distinct_values(idx).len() < 2 {
                return Ok(None);
            }
            let g = info_gain(d, attr)?;
            Ok(Some((Split::Nominal(attr.to_string()), g)))
        }
        AttributeKind::Numeric => match split_numeric(d, attr) {
            Ok((t, g)) => Ok(Some((Split::Numeric(attr.to_string(), t), g))),
            Err(Error::NoNumericSplit(_)) => Ok(None),
            Err(e) => Err(e),
        },
    }
}

/// Choose the attribute to split a subset on, or `None` to make a leaf.
pub fn select_split(
    d: &Dataset,
    remaining: &[String],
    cfg: &InductionConfig,
    used_priorities: usize,
) -> Result<Option<Split>> {
    let kind_of = |name: &str| -> Result<AttributeKind> {
        Ok(d.schema()[d.attr_index(name)?].kind)
    };
    if cfg.mode == Mode::Priority {
        for p in cfg.priorities.iter().skip(used_priorities) {
            let key = norm(&p.attribute);
            if !remaining.iter().any(|r| norm(r) == key) {
                continue;
            }
            // A priority attribute splits regardless of gain, as long as it
            // actually partitions the subset.
            if let Some((split, _)) = split_gain(d, &p.attribute, kind_of(&p.attribute)?)? {
                return Ok(Some(split));
            }
        }
    }
    let priority_keys: Vec<String> = cfg.priority_names().iter().map(|s| norm(s)).collect();
    let mut best: Option<(Split, f64)> = None;
    for name in remaining {
        if priority_keys.contains(&norm(name)) {
            // Unconsumed priority attributes were handled above; consumed
            // ones are no longer in `remaining`.
            if cfg.mode == Mode::Priority {
                continue;
            }
        }
        if let Some((split, gain)) = split_gain(d, name, kind_of(name)?)? {
            // Strictly-greater keeps schema order on ties.
            if gain > best.as_ref().map(|(_, g)| *g).unwrap_or(0.0) {
                best = Some((split, gain));
            }
        }
    }
    Ok(best.map(|(s, _)| s))
}

/// Grow a decision tree per the configured mode and thresholds.
pub fn build_tree(d: &Dataset, cfg: &InductionConfig) -> Result<DecisionTree> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for p in &cfg.priorities {
        if d.attr_index(&p.attribute).is_err() {
            return Err(Error::UnknownPriorityAttribute(p.attribute.clone()));
        }
    }
    let priority_names = cfg.priority_names();
    let mut remaining: Vec<String> = match cfg.relevance {
        Some(policy) => relevance_filter(d, policy, &priority_names)?,
        None => d
            .schema()
            .iter()
            .filter(|a| a.role != AttributeRole::Class)
            .map(|a| a.name.clone())
            .collect(),
    };
    // Keep schema order for deterministic tie-breaks.
    remaining.sort_by_key(|name| d.attr_index(name).unwrap_or(usize::MAX));
    let total = d.total_count();
    let root = build_node(d, &remaining, cfg, 0, total)?;
    Ok(DecisionTree {
        root,
        config: cfg.clone(),
        total_count: total,
    })
}

fn build_node(
    d: &Dataset,
    remaining: &[String],
    cfg: &InductionConfig,
    used_priorities: usize,
    total: u64,
) -> Result<DecisionNode> {
    let distribution = d.class_distribution();
    let subset = distribution.total();
    let pure = distribution.entries().len() == 1;
    let fraction = subset as f64 / total as f64;
    let majority_fraction = distribution.majority().1 as f64 / subset as f64;
    if pure || fraction < cfg.epsilon || majority_fraction >= cfg.kappa {
        return Ok(DecisionNode::Leaf { distribution });
    }
    match select_split(d, remaining, cfg, used_priorities)? {
        None => Ok(DecisionNode::Leaf { distribution }),
        Some(split) => grow_internal(d, &split, remaining, cfg, used_priorities, total),
    }
}

/// Build an internal node for `split`, partitioning `d` into its children.
pub(crate) fn grow_internal(
    d: &Dataset,
    split: &Split,
    remaining: &[String],
    cfg: &InductionConfig,
    used_priorities: usize,
    total: u64,
) -> Result<DecisionNode> {
    let attr = split.attribute();
    let idx = d.attr_index(attr)?;
    let next_used = cfg
        .priorities
        .iter()
        .skip(used_priorities)
        .position(|p| norm(&p.attribute) == norm(attr))
        .map(|off| used_priorities + off + 1)
        .unwrap_or(used_priorities);
    let branches = match split {
        Split::Nominal(_) => {
            let next_remaining: Vec<String> = remaining
                .iter()
                .filter(|r| norm(r) != norm(attr))
                .cloned()
                .collect();
            let mut order: Vec<(String, Value)> = Vec::new();
            let observed = d.distinct_values(idx);
            // An explicit priority value list fixes branch order; unlisted
            // observed values append in first-seen order.
            if let Some(p) = cfg
                .priorities
                .iter()
                .find(|p| norm(&p.attribute) == norm(attr) && !p.value_order.is_empty())
            {
                for v in &p.value_order {
                    if let Some(entry) = observed.iter().find(|(k, _)| *k == norm(v)) {
                        order.push(entry.clone());
                    }
                }
            }
            for entry in &observed {
                if !order.iter().any(|(k, _)| k == &entry.0) {
                    order.push(entry.clone());
                }
            }
            let mut out = Vec::new();
            for (key, display) in order {
                let rows: Vec<usize> = (0..d.len())
                    .filter(|&i| d.value(i, idx).key() == key)
                    .collect();
                let child_data = d.filter_rows(&rows);
                let child = build_node(&child_data, &next_remaining, cfg, next_used, total)?;
                out.push(Branch {
                    label: BranchLabel::Values(vec![display.render()]),
                    child,
                });
            }
            out
        }
        Split::Numeric(_, t) => {
            let t = *t;
            let mut out = Vec::new();
            let sides = [
                (BranchLabel::LessEq(t), true),
                (BranchLabel::Greater(t), false),
            ];
            for (label, low_side) in sides {
                let rows: Vec<usize> = (0..d.len())
                    .filter(|&i| {
                        d.value(i, idx)
                            .as_numeric()
                            .map(|x| if low_side { x <= t } else { x > t })
                            .unwrap_or(false)
                    })
                    .collect();
                if rows.is_empty() {
                    continue;
                }
                let child_data = d.filter_rows(&rows);
                let child = build_node(&child_data, remaining, cfg, next_used, total)?;
                out.push(Branch { label, child });
            }
            out
        }
    };
    Ok(DecisionNode::Internal {
        test_attribute: attr.to_string(),
        branches,
    })
}

/// Locate the node at `path` (branch labels matched by value membership).
fn node_at_path<'a>(node: &'a DecisionNode, path: &[String]) -> Option<&'a DecisionNode> {
    match path.split_first() {
        None => Some(node),
        Some((step, rest)) => match node {
            DecisionNode::Leaf { .. } => None,
            DecisionNode::Internal { branches, .. } => branches
                .iter()
                .find(|b| b.label.matches(&Value::nominal(step)))
                .and_then(|b| node_at_path(&b.child, rest)),
        },
    }
}

fn replace_at_path(node: &DecisionNode, path: &[String], new: DecisionNode) -> DecisionNode {
    match path.split_first() {
        None => new,
        Some((step, rest)) => match node {
            DecisionNode::Leaf { .. } => node.clone(),
            DecisionNode::Internal {
                test_attribute,
                branches,
            } => DecisionNode::Internal {
                test_attribute: test_attribute.clone(),
                branches: branches
                    .iter()
                    .map(|b| {
                        if b.label.matches(&Value::nominal(step)) {
                            Branch {
                                label: b.label.clone(),
                                child: replace_at_path(&b.child, rest, new.clone()),
                            }
                        } else {
                            b.clone()
                        }
                    })
                    .collect(),
            },
        },
    }
}

/// Rows of `d` that reach the node at `path`, and the attributes tested
/// along the way.
fn rows_reaching(
    tree: &DecisionTree,
    d: &Dataset,
    path: &[String],
) -> Result<(Vec<usize>, Vec<String>)> {
    let mut rows: Vec<usize> = (0..d.len()).collect();
    let mut node = &tree.root;
    let mut tested = Vec::new();
    for step in path {
        match node {
            DecisionNode::Leaf { .. } => return Err(Error::BadNodePath(path.to_vec())),
            DecisionNode::Internal {
                test_attribute,
                branches,
            } => {
                let idx = d.attr_index(test_attribute)?;
                let branch = branches
                    .iter()
                    .find(|b| b.label.matches(&Value::nominal(step)))
                    .ok_or_else(|| Error::BadNodePath(path.to_vec()))?;
                rows.retain(|&i| branch.label.matches(d.value(i, idx)));
                tested.push(test_attribute.clone());
                node = &branch.child;
            }
        }
    }
    Ok((rows, tested))
}

fn rebuild_subtree(
    tree: &DecisionTree,
    d: &Dataset,
    path: &[String],
    ascend_with: Option<&ConceptHierarchy>,
) -> Result<DecisionTree> {
    let target = node_at_path(&tree.root, path).ok_or_else(|| Error::BadNodePath(path.to_vec()))?;
    let attr = match target {
        DecisionNode::Leaf { .. } => return Err(Error::LeafNode(path.to_vec())),
        DecisionNode::Internal { test_attribute, .. } => test_attribute.clone(),
    };
    let (rows, tested) = rows_reaching(tree, d, path)?;
    let mut subset = d.filter_rows(&rows);
    let idx = subset.attr_index(&attr)?;
    if let Some(h) = ascend_with {
        let mut column = Vec::with_capacity(subset.len());
        for t in subset.tuples() {
            let v = t[idx].as_nominal().ok_or_else(|| Error::UncoveredValue {
                attribute: attr.clone(),
                value: t[idx].render(),
            })?;
            if !h.contains(v) {
                return Err(Error::UncoveredValue {
                    attribute: attr.clone(),
                    value: v.to_string(),
                });
            }
            column.push(Value::nominal(&h.ascend(v, 1)?));
        }
        subset = subset.replace_column(idx, column);
    }
    let remaining: Vec<String> = subset
        .schema()
        .iter()
        .filter(|a| a.role != AttributeRole::Class)
        .map(|a| a.name.clone())
        .filter(|n| !tested.iter().any(|t| norm(t) == norm(n)))
        .collect();
    let used = tree
        .config
        .priorities
        .iter()
        .take_while(|p| {
            tested.iter().any(|t| norm(t) == norm(&p.attribute))
                || norm(&p.attribute) == norm(&attr)
        })
        .count();
    let new_node = grow_internal(
        &subset,
        &Split::Nominal(attr.clone()),
        &remaining,
        &tree.config,
        used,
        tree.total_count,
    )?;
    Ok(DecisionTree {
        root: replace_at_path(&tree.root, path, new_node),
        config: tree.config.clone(),
        total_count: tree.total_count,
    })
}

/// Replace the node's branch values with their ancestors one level up and
/// re-partition its data at the new abstraction level.
pub fn rollup_node(
    tree: &DecisionTree,
    d: &Dataset,
    path: &[String],
    h: &ConceptHierarchy,
) -> Result<DecisionTree> {
    rebuild_subtree(tree, d, path, Some(h))
}

/// Rebuild the node from the retained primitive tuples, restoring the
/// pre-roll-up partition.
pub fn drilldown_node(tree: &DecisionTree, d: &Dataset, path: &[String]) -> Result<DecisionTree> {
    rebuild_subtree(tree, d, path, None)
}
