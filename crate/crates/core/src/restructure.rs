//! Post-construction tree surgery: merging of equivalent low-priority
//! sibling subtrees, height balancing by child reordering, and the
//! priority-driven rebuild that reallocates gain ranks to user attributes.
//!
//! Every transform here is checked against a path-preservation contract:
//! the predicted class of every training tuple must not change.

use std::collections::HashMap;

use crate::dataset::{norm, Dataset};
use crate::error::{Error, Result};
use crate::induction::{
    build_tree, Branch, BranchLabel, DecisionNode, DecisionTree, Mode, PrioritySpec,
};

/// User priority ranks (1 = most important) plus the checkpoint below which
/// an attribute is protected from merging. Unranked attributes are treated
/// as least important.
#[derive(Debug, Clone, Default)]
pub struct PriorityAssignment {
    ranks: HashMap<String, u32>,
    names: Vec<String>,
    pub checkpoint: u32,
}

impl PriorityAssignment {
    pub fn new(checkpoint: u32) -> Self {
        PriorityAssignment {
            checkpoint,
            ..PriorityAssignment::default()
        }
    }

    pub fn with_rank(mut self, attr: &str, rank: u32) -> Self {
        assert!(rank >= 1, "ranks start at 1");
        let prev = self.ranks.insert(norm(attr), rank);
        assert!(prev.is_none(), "duplicate rank assignment for attribute");
        assert!(
            !self.ranks.values().filter(|r| **r == rank).nth(1).is_some(),
            "ranks must be unique"
        );
        self.names.push(attr.to_string());
        self
    }

    pub fn rank_of(&self, attr: &str) -> u32 {
        self.ranks.get(&norm(attr)).copied().unwrap_or(u32::MAX)
    }

    /// Rank at or under the checkpoint means the attribute may not be merged
    /// away.
    pub fn protected(&self, attr: &str) -> bool {
        self.rank_of(attr) <= self.checkpoint
    }

    /// Ranked attribute names, most important first.
    pub fn ordered_attributes(&self) -> Vec<String> {
        let mut out = self.names.clone();
        out.sort_by_key(|n| self.rank_of(n));
        out
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub tree: DecisionTree,
    /// One line per decision: `merged <parent>/<values>` or
    /// `refused <parent>/<values>: priority`.
    pub log: Vec<String>,
}

/// Structural equivalence used by NodeMerge: same test attribute and branch
/// shape all the way down, with leaf pairs agreeing on their majority class.
fn equivalent(a: &DecisionNode, b: &DecisionNode) -> bool {
    match (a, b) {
        (DecisionNode::Leaf { distribution: da }, DecisionNode::Leaf { distribution: db }) => {
            norm(da.majority().0) == norm(db.majority().0)
        }
        (
            DecisionNode::Internal {
                test_attribute: ta,
                branches: ba,
            },
            DecisionNode::Internal {
                test_attribute: tb,
                branches: bb,
            },
        ) => {
            norm(ta) == norm(tb)
                && ba.len() == bb.len()
                && ba
                    .iter()
                    .zip(bb)
                    .all(|(x, y)| same_label(&x.label, &y.label) && equivalent(&x.child, &y.child))
        }
        _ => false,
    }
}

fn same_label(a: &BranchLabel, b: &BranchLabel) -> bool {
    match (a, b) {
        (BranchLabel::Values(va), BranchLabel::Values(vb)) => {
            let mut ka: Vec<String> = va.iter().map(|v| norm(v)).collect();
            let mut kb: Vec<String> = vb.iter().map(|v| norm(v)).collect();
            ka.sort();
            kb.sort();
            ka == kb
        }
        (BranchLabel::LessEq(x), BranchLabel::LessEq(y))
        | (BranchLabel::Greater(x), BranchLabel::Greater(y)) => x == y,
        _ => false,
    }
}

/// Sum two equivalent subtrees, pooling leaf counts.
fn sum_nodes(a: &DecisionNode, b: &DecisionNode) -> DecisionNode {
    match (a, b) {
        (DecisionNode::Leaf { distribution: da }, DecisionNode::Leaf { distribution: db }) => {
            let mut merged = da.clone();
            merged.merge(db);
            DecisionNode::Leaf {
                distribution: merged,
            }
        }
        (
            DecisionNode::Internal {
                test_attribute,
                branches: ba,
            },
            DecisionNode::Internal { branches: bb, .. },
        ) => DecisionNode::Internal {
            test_attribute: test_attribute.clone(),
            branches: ba
                .iter()
                .zip(bb)
                .map(|(x, y)| Branch {
                    label: x.label.clone(),
                    child: sum_nodes(&x.child, &y.child),
                })
                .collect(),
        },
        _ => unreachable!("sum_nodes called on non-equivalent shapes"),
    }
}

fn label_values(label: &BranchLabel) -> String {
    match label {
        BranchLabel::Values(v) => v.join(","),
        other => other.render(),
    }
}

fn merge_node(node: &DecisionNode, pa: &PriorityAssignment, log: &mut Vec<String>) -> DecisionNode {
    let DecisionNode::Internal {
        test_attribute,
        branches,
    } = node
    else {
        return node.clone();
    };
    // Bottom-up: children first.
    let mut branches: Vec<Branch> = branches
        .iter()
        .map(|b| Branch {
            label: b.label.clone(),
            child: merge_node(&b.child, pa, log),
        })
        .collect();
    let parent_protected = pa.protected(test_attribute);
    'scan: loop {
        for i in 0..branches.len() {
            for j in (i + 1)..branches.len() {
                if !equivalent(&branches[i].child, &branches[j].child) {
                    continue;
                }
                let pair_values = format!(
                    "{},{}",
                    label_values(&branches[i].label),
                    label_values(&branches[j].label)
                );
                let subtree_protected = branches[i]
                    .child
                    .attributes_used()
                    .iter()
                    .chain(branches[j].child.attributes_used().iter())
                    .any(|a| pa.protected(a));
                if parent_protected || subtree_protected {
                    let line = format!("refused {}/{}: priority", test_attribute, pair_values);
                    if !log.contains(&line) {
                        log.push(line);
                    }
                    continue;
                }
                let merged_child = sum_nodes(&branches[i].child, &branches[j].child);
                let merged_label = match (&branches[i].label, &branches[j].label) {
                    (BranchLabel::Values(a), BranchLabel::Values(b)) => {
                        let mut vals = a.clone();
                        for v in b {
                            if !vals.iter().any(|x| norm(x) == norm(v)) {
                                vals.push(v.clone());
                            }
                        }
                        BranchLabel::Values(vals)
                    }
                    _ => continue, // numeric sides never merge
                };
                log.push(format!("merged {}/{}", test_attribute, pair_values));
                branches[j] = Branch {
                    label: merged_label,
                    child: merged_child,
                };
                branches.remove(i);
                continue 'scan;
            }
        }
        break;
    }
    DecisionNode::Internal {
        test_attribute: test_attribute.clone(),
        branches,
    }
}

/// NodeMerge: bottom-up merging of equivalent sibling subtrees whose
/// attributes are all below the priority checkpoint.
pub fn node_merge(tree: &DecisionTree, pa: &PriorityAssignment) -> MergeOutcome {
    let mut log = Vec::new();
    let root = merge_node(&tree.root, pa, &mut log);
    MergeOutcome {
        tree: DecisionTree {
            root,
            config: tree.config.clone(),
            total_count: tree.total_count,
        },
        log,
    }
}

/// Height spread among an internal node's children (leaf height = 0).
pub fn balance_factor(node: &DecisionNode) -> Result<usize> {
    match node {
        DecisionNode::Leaf { .. } => Err(Error::LeafNode(Vec::new())),
        DecisionNode::Internal { branches, .. } => {
            let heights: Vec<usize> = branches.iter().map(|b| b.child.height()).collect();
            let max = heights.iter().max().copied().unwrap_or(0);
            let min = heights.iter().min().copied().unwrap_or(0);
            Ok(max - min)
        }
    }
}

fn balance_node(node: &DecisionNode) -> DecisionNode {
    let DecisionNode::Internal {
        test_attribute,
        branches,
    } = node
    else {
        return node.clone();
    };
    let mut branches: Vec<Branch> = branches
        .iter()
        .map(|b| Branch {
            label: b.label.clone(),
            child: balance_node(&b.child),
        })
        .collect();
    let heights: Vec<usize> = branches.iter().map(|b| b.child.height()).collect();
    let spread = heights.iter().max().unwrap_or(&0) - heights.iter().min().unwrap_or(&0);
    if spread > 1 {
        // Stable sort keeps branch value order on equal heights.
        branches.sort_by(|a, b| b.child.height().cmp(&a.child.height()));
    }
    DecisionNode::Internal {
        test_attribute: test_attribute.clone(),
        branches,
    }
}

/// HeightBalance: deepest subtrees first at every imbalanced node. Only the
/// child ordering changes; the rule set is untouched.
pub fn height_balance(tree: &DecisionTree) -> DecisionTree {
    DecisionTree {
        root: balance_node(&tree.root),
        config: tree.config.clone(),
        total_count: tree.total_count,
    }
}

/// HeightBalancePriority: rebuild the tree from its training data so that
/// ranked user attributes split first (ascending rank), gain-ranked
/// attributes after, under the tree's original thresholds; then balance.
pub fn height_balance_priority(
    tree: &DecisionTree,
    d: &Dataset,
    pa: &PriorityAssignment,
) -> Result<DecisionTree> {
    let ordered = pa.ordered_attributes();
    for attr in &ordered {
        if d.attr_index(attr).is_err() {
            return Err(Error::UnknownPriorityAttribute(attr.clone()));
        }
    }
    let priorities: Vec<PrioritySpec> = ordered
        .iter()
        .map(|name| {
            // Carry over any explicit value order the tree already had.
            tree.config
                .priorities
                .iter()
                .find(|p| norm(&p.attribute) == norm(name))
                .cloned()
                .unwrap_or_else(|| PrioritySpec::new(name))
        })
        .collect();
    let cfg = crate::induction::InductionConfig {
        mode: Mode::Priority,
        priorities,
        ..tree.config.clone()
    };
    let rebuilt = build_tree(d, &cfg)?;
    Ok(height_balance(&rebuilt))
}
