//! IF...THEN rule extraction, tuple classification, and baseline-vs-priority
//! tree comparison reports.

use crate::dataset::{norm, ClassDistribution, Dataset};
use crate::induction::{BranchLabel, DecisionNode, DecisionTree};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRule {
    /// Path conditions in root-to-leaf order; attributes are distinct.
    pub conditions: Vec<(String, BranchLabel)>,
    pub conclusion: String,
    /// Total count of the leaf the rule came from.
    pub support: u64,
    /// Majority count / leaf total.
    pub confidence: f64,
}

impl ClassificationRule {
    /// `IF a=v AND b in {x,y} THEN c [support, confidence]`
    pub fn render(&self) -> String {
        let body = if self.conditions.is_empty() {
            "true".to_string()
        } else {
            self.conditions
                .iter()
                .map(|(attr, label)| match label {
                    BranchLabel::Values(vals) if vals.len() == 1 => {
                        format!("{}={}", attr, vals[0])
                    }
                    BranchLabel::Values(vals) => format!("{} in {{{}}}", attr, vals.join(",")),
                    BranchLabel::LessEq(t) => format!("{} <= {}", attr, t),
                    BranchLabel::Greater(t) => format!("{} > {}", attr, t),
                })
                .collect::<Vec<_>>()
                .join(" AND ")
        };
        format!(
            "IF {} THEN {} [{}, {:.3}]",
            body, self.conclusion, self.support, self.confidence
        )
    }

    /// Order-insensitive identity used for rule-set comparison.
    pub fn key(&self) -> String {
        let mut conds: Vec<String> = self
            .conditions
            .iter()
            .map(|(attr, label)| {
                let label = match label {
                    BranchLabel::Values(vals) => {
                        let mut keys: Vec<String> = vals.iter().map(|v| norm(v)).collect();
                        keys.sort();
                        keys.join("|")
                    }
                    other => other.render(),
                };
                format!("{}={}", norm(attr), label)
            })
            .collect();
        conds.sort();
        format!("{} => {}", conds.join(" & "), norm(&self.conclusion))
    }
}

fn walk(
    node: &DecisionNode,
    path: &mut Vec<(String, BranchLabel)>,
    out: &mut Vec<ClassificationRule>,
) {
    match node {
        DecisionNode::Leaf { distribution } => {
            let (label, majority) = distribution.majority();
            out.push(ClassificationRule {
                conditions: path.clone(),
                conclusion: label.to_string(),
                support: distribution.total(),
                confidence: majority as f64 / distribution.total() as f64,
            });
        }
        DecisionNode::Internal {
            test_attribute,
            branches,
        } => {
            for b in branches {
                path.push((test_attribute.clone(), b.label.clone()));
                walk(&b.child, path, out);
                path.pop();
            }
        }
    }
}

/// One rule per leaf, root-to-leaf traversal order.
pub fn extract_rules(tree: &DecisionTree) -> Vec<ClassificationRule> {
    let mut out = Vec::new();
    walk(&tree.root, &mut Vec::new(), &mut out);
    out
}

/// Route one dataset row down the tree. On a branch miss (value unseen at
/// build time) or an attribute missing from the schema, the answer is the
/// aggregate distribution of the deepest node reached.
pub fn classify_tuple(node: &DecisionNode, d: &Dataset, row: usize) -> ClassDistribution {
    match node {
        DecisionNode::Leaf { distribution } => distribution.clone(),
        DecisionNode::Internal {
            test_attribute,
            branches,
        } => {
            let Ok(idx) = d.attr_index(test_attribute) else {
                return node.aggregate_distribution();
            };
            let value = d.value(row, idx);
            match branches.iter().find(|b| b.label.matches(value)) {
                Some(b) => classify_tuple(&b.child, d, row),
                None => node.aggregate_distribution(),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeMetrics {
    pub height: usize,
    pub internal_nodes: usize,
    pub leaves: usize,
    pub rule_count: usize,
    pub attributes_used: Vec<String>,
}

fn metrics(tree: &DecisionTree) -> TreeMetrics {
    TreeMetrics {
        height: tree.root.height(),
        internal_nodes: tree.root.internal_count(),
        leaves: tree.root.leaf_count(),
        rule_count: extract_rules(tree).len(),
        attributes_used: tree.root.attributes_used(),
    }
}

#[derive(Debug, Clone)]
pub struct AttributeCoverage {
    pub attribute: String,
    pub covered_in_a: bool,
    pub covered_in_b: bool,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub a: TreeMetrics,
    pub b: TreeMetrics,
    pub only_in_a: Vec<ClassificationRule>,
    pub only_in_b: Vec<ClassificationRule>,
    pub requested: Vec<AttributeCoverage>,
}

/// Compare two trees over the same schema; an attribute is "pruned" in a
/// tree iff no internal node tests it.
pub fn compare_trees(
    a: &DecisionTree,
    b: &DecisionTree,
    requested_attrs: &[String],
) -> ComparisonReport {
    let rules_a = extract_rules(a);
    let rules_b = extract_rules(b);
    let keys_a: Vec<String> = rules_a.iter().map(|r| r.key()).collect();
    let keys_b: Vec<String> = rules_b.iter().map(|r| r.key()).collect();
    let covered = |tree: &DecisionTree, attr: &str| {
        tree.root
            .attributes_used()
            .iter()
            .any(|u| norm(u) == norm(attr))
    };
    ComparisonReport {
        a: metrics(a),
        b: metrics(b),
        only_in_a: rules_a
            .iter()
            .filter(|r| !keys_b.contains(&r.key()))
            .cloned()
            .collect(),
        only_in_b: rules_b
            .iter()
            .filter(|r| !keys_a.contains(&r.key()))
            .cloned()
            .collect(),
        requested: requested_attrs
            .iter()
            .map(|attr| AttributeCoverage {
                attribute: attr.clone(),
                covered_in_a: covered(a, attr),
                covered_in_b: covered(b, attr),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{AttributeDescriptor, Value};
    use crate::induction::{build_tree, InductionConfig, PrioritySpec};
    use crate::restructure::height_balance;
    use crate::samples;

    fn priority_tree() -> (Dataset, DecisionTree) {
        let d = samples::table3();
        let cfg = InductionConfig::priority(vec![PrioritySpec::new("country")]);
        let tree = build_tree(&d, &cfg).unwrap();
        (d, tree)
    }

    #[test]
    fn single_leaf_tree_yields_a_condition_free_rule() {
        let schema = vec![
            AttributeDescriptor::nominal("x"),
            AttributeDescriptor::class("c"),
        ];
        let d = Dataset::with_counts(
            schema,
            vec![vec![Value::nominal("v"), Value::nominal("High")]],
            vec![7],
        )
        .unwrap();
        let tree = build_tree(&d, &InductionConfig::baseline()).unwrap();
        let rules = extract_rules(&tree);
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].conditions.len(), 0);
        assert_eq!(rules[0].conclusion, "High");
        assert_eq!(rules[0].support, 7);
        assert_eq!(rules[0].render(), "IF true THEN High [7, 1.000]");
    }

    #[test]
    fn cuba_rule_has_support_three() {
        let (_, tree) = priority_tree();
        let rules = extract_rules(&tree);
        let cuba = rules
            .iter()
            .find(|r| {
                r.conditions.len() == 1
                    && matches!(&r.conditions[0].1, BranchLabel::Values(v) if v[0].eq_ignore_ascii_case("cuba"))
            })
            .expect("cuba rule");
        assert_eq!(norm(&cuba.conclusion), "low");
        assert_eq!(cuba.support, 3);
        assert_eq!(cuba.confidence, 1.0);
    }

    #[test]
    fn rule_count_equals_leaf_count() {
        let (_, tree) = priority_tree();
        assert_eq!(extract_rules(&tree).len(), tree.root.leaf_count());
    }

    #[test]
    fn rule_supports_sum_to_total_count() {
        let (d, tree) = priority_tree();
        let total: u64 = extract_rules(&tree).iter().map(|r| r.support).sum();
        assert_eq!(total, d.total_count());
    }

    #[test]
    fn training_tuples_reach_leaves_containing_their_class() {
        let (d, tree) = priority_tree();
        let ci = d.class_index();
        for row in 0..d.len() {
            let dist = classify_tuple(&tree.root, &d, row);
            let label = d.value(row, ci).render();
            assert!(dist.count(&label) > 0);
        }
    }

    #[test]
    fn cuba_tuple_classifies_to_the_cuba_leaf() {
        let (d, tree) = priority_tree();
        // Row 0 is (Illiterate, Cuba, Low).
        let dist = classify_tuple(&tree.root, &d, 0);
        assert_eq!(dist.count("Low"), 3);
        assert_eq!(dist.total(), 3);
    }

    #[test]
    fn unseen_value_falls_back_to_the_aggregate() {
        let (d, tree) = priority_tree();
        let mut tuples = d.tuples().to_vec();
        tuples[0][1] = Value::nominal("Peru");
        let d2 = Dataset::new(d.schema().to_vec(), tuples).unwrap();
        let dist = classify_tuple(&tree.root, &d2, 0);
        assert_eq!(dist.count("Low"), 5);
        assert_eq!(dist.count("Medium"), 5);
        assert_eq!(dist.count("High"), 7);
    }

    #[test]
    fn balancing_keeps_the_rule_multiset() {
        let (_, tree) = priority_tree();
        let balanced = height_balance(&tree);
        let mut before: Vec<String> = extract_rules(&tree).iter().map(|r| r.key()).collect();
        let mut after: Vec<String> = extract_rules(&balanced).iter().map(|r| r.key()).collect();
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn comparison_flags_pruned_country() {
        let d = samples::table3();
        let baseline = build_tree(&d, &InductionConfig::baseline()).unwrap();
        let (_, priority) = priority_tree();
        let report = compare_trees(&baseline, &priority, &["country".to_string()]);
        assert!(!report.requested[0].covered_in_a);
        assert!(report.requested[0].covered_in_b);
        assert!(report.b.rule_count >= 4);
    }

    #[test]
    fn tree_compared_with_itself_has_an_empty_diff() {
        let (_, tree) = priority_tree();
        let report = compare_trees(&tree, &tree, &[]);
        assert!(report.only_in_a.is_empty());
        assert!(report.only_in_b.is_empty());
    }
}
