//! Rule induction over relational data: attribute-oriented generalization,
//! entropy-based relevance analysis, decision-tree construction with
//! user-assigned attribute priorities, tree restructuring, rule extraction,
//! and a small query language that drives the whole pipeline.

pub mod dataset;
pub mod dmql;
pub mod entropy;
pub mod error;
pub mod hierarchy;
pub mod induction;
pub mod restructure;
pub mod rules;
pub mod samples;

pub use dataset::{
    Aggregate, AttributeDescriptor, AttributeKind, AttributeRole, ClassDistribution, Dataset,
    Value,
};
pub use entropy::{
    attribute_expected_info, expected_info, info_gain, relevance_filter, score_attributes,
    uncertainty_coefficient, AttributeScore, RelevancePolicy,
};
pub use error::{Error, Result};
pub use hierarchy::{aoi, generalize_attribute, load_hierarchy, AoiConfig, ConceptHierarchy};
pub use induction::{
    build_tree, drilldown_node, rollup_node, BranchLabel, DecisionNode, DecisionTree,
    InductionConfig, Mode, PrioritySpec,
};
pub use restructure::{
    balance_factor, height_balance, height_balance_priority, node_merge, MergeOutcome,
    PriorityAssignment,
};
pub use rules::{
    classify_tuple, compare_trees, extract_rules, ClassificationRule, ComparisonReport,
    TreeMetrics,
};
