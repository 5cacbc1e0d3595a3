//! Concept hierarchies and attribute-oriented induction.
//!
//! A hierarchy maps each primitive value upward through named levels
//! (e.g. USA.east -> USA -> World). Generalization ascends a column until
//! its distinct-value count drops under the generalization threshold, then
//! re-merges identical tuples while accumulating counts.

use std::collections::HashMap;

use crate::dataset::{norm, Aggregate, AttributeKind, AttributeRole, Dataset, Value};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConceptHierarchy {
    pub attribute: String,
    /// Level names, primitive first.
    pub levels: Vec<String>,
    parent: HashMap<String, String>,
    level_of: HashMap<String, usize>,
}

impl ConceptHierarchy {
    pub fn contains(&self, value: &str) -> bool {
        self.levels.len() == 1 || self.level_of.contains_key(&norm(value))
    }

    pub fn level_of(&self, value: &str) -> Option<usize> {
        self.level_of.get(&norm(value)).copied()
    }

    /// Ancestor `steps` levels up, clamped at the top level.
    pub fn ascend(&self, value: &str, steps: usize) -> Result<String> {
        if self.levels.len() == 1 {
            // Single-level hierarchy: every value is its own top concept.
            return Ok(value.trim().to_string());
        }
        if !self.contains(value) {
            return Err(Error::UnknownValue(value.to_string()));
        }
        let mut cur = value.trim().to_string();
        for _ in 0..steps {
            match self.parent.get(&norm(&cur)) {
                Some(p) => cur = p.clone(),
                None => break,
            }
        }
        Ok(cur)
    }
}

/// Parse the line-oriented hierarchy format:
///
/// ```text
/// attribute: region
/// levels: region, country, world
/// USA.east -> USA
/// USA -> World
/// ```
pub fn load_hierarchy(spec: &str) -> Result<ConceptHierarchy> {
    let mut attribute = String::new();
    let mut levels: Vec<String> = Vec::new();
    let mut parent: HashMap<String, String> = HashMap::new();
    let mut children: Vec<String> = Vec::new();

    for line in spec.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = strip_header(line, "attribute:") {
            attribute = rest.to_string();
        } else if let Some(rest) = strip_header(line, "levels:") {
            levels = rest
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
        } else if let Some((child, par)) = line.split_once("->") {
            let child = child.trim();
            let par = par.trim();
            if child.is_empty() || par.is_empty() {
                return Err(Error::BadHierarchyLine(line.to_string()));
            }
            let key = norm(child);
            if let Some(existing) = parent.get(&key) {
                if norm(existing) != norm(par) {
                    return Err(Error::DuplicateParent(child.to_string()));
                }
            }
            parent.insert(key, par.to_string());
            children.push(child.to_string());
        } else {
            return Err(Error::BadHierarchyLine(line.to_string()));
        }
    }
    if levels.is_empty() {
        levels = vec!["primitive".to_string()];
    }

    // Every value must reach a parentless (top) value without cycling.
    let mut level_of: HashMap<String, usize> = HashMap::new();
    let limit = parent.len() + 1;
    let mut all_values: Vec<String> = children.clone();
    for p in parent.values() {
        all_values.push(p.clone());
    }
    for v in &all_values {
        let mut cur = norm(v);
        let mut dist = 0usize;
        while let Some(p) = parent.get(&cur) {
            cur = norm(p);
            dist += 1;
            if dist > limit {
                return Err(Error::HierarchyCycle(v.clone()));
            }
        }
        if dist >= levels.len() {
            return Err(Error::LevelOverflow(v.clone()));
        }
        let top = levels.len() - 1;
        level_of.insert(norm(v), top - dist);
    }
    // A value sitting below the top with no parent chain is unreachable.
    for (v, lvl) in &level_of {
        if *lvl > 0 && !parent.contains_key(v) && levels.len() > 1 && *lvl != levels.len() - 1 {
            return Err(Error::OrphanValue(v.clone()));
        }
    }

    Ok(ConceptHierarchy {
        attribute,
        levels,
        parent,
        level_of,
    })
}

fn strip_header<'a>(line: &'a str, head: &str) -> Option<&'a str> {
    let lower = line.to_lowercase();
    lower.starts_with(head).then(|| line[head.len()..].trim())
}

/// Per-attribute generalization thresholds and numeric aggregation rules.
#[derive(Debug, Clone)]
pub struct AoiConfig {
    pub default_threshold: usize,
    thresholds: HashMap<String, usize>,
    aggregates: HashMap<String, Aggregate>,
}

impl Default for AoiConfig {
    fn default() -> Self {
        AoiConfig {
            default_threshold: 4,
            thresholds: HashMap::new(),
            aggregates: HashMap::new(),
        }
    }
}

impl AoiConfig {
    pub fn with_threshold(mut self, attr: &str, threshold: usize) -> Self {
        assert!(threshold >= 1, "generalization threshold must be >= 1");
        self.thresholds.insert(norm(attr), threshold);
        self
    }

    pub fn with_aggregate(mut self, attr: &str, rule: Aggregate) -> Self {
        self.aggregates.insert(norm(attr), rule);
        self
    }

    pub fn threshold_for(&self, attr: &str) -> usize {
        self.thresholds
            .get(&norm(attr))
            .copied()
            .unwrap_or(self.default_threshold)
    }

    pub fn aggregate_for(&self, attr: &str) -> Option<Aggregate> {
        self.aggregates.get(&norm(attr)).copied()
    }

    pub fn aggregates(&self) -> &HashMap<String, Aggregate> {
        &self.aggregates
    }
}

/// Ascend one column until its distinct count fits the threshold (or the top
/// level is reached), then merge identical tuples.
pub fn generalize_attribute(
    d: &Dataset,
    attr: &str,
    h: &ConceptHierarchy,
    threshold: usize,
    aggregates: &HashMap<String, Aggregate>,
) -> Result<Dataset> {
    let idx = d.attr_index(attr)?;
    let mut current = d.clone();
    loop {
        let distinct = current.distinct_values(idx).len();
        let at_top = current.tuples().iter().all(|t| {
            t[idx]
                .as_nominal()
                .and_then(|v| h.level_of(v))
                .map(|l| l == h.levels.len() - 1)
                .unwrap_or(false)
        });
        if distinct <= threshold || at_top {
            break;
        }
        let mut column = Vec::with_capacity(current.len());
        for t in current.tuples() {
            let v = t[idx].as_nominal().ok_or_else(|| Error::UncoveredValue {
                attribute: attr.to_string(),
                value: t[idx].render(),
            })?;
            if !h.contains(v) {
                return Err(Error::UncoveredValue {
                    attribute: attr.to_string(),
                    value: v.to_string(),
                });
            }
            column.push(Value::nominal(&h.ascend(v, 1)?));
        }
        current = current.replace_column(idx, column);
    }
    Ok(current.merge_with_aggregates(aggregates))
}

/// Attribute-oriented induction over a whole dataset: generalize each nominal
/// attribute against its hierarchy, remove over-wide attributes with no
/// hierarchy, drop numeric attributes with no aggregation rule, and merge.
pub fn aoi(d: &Dataset, hierarchies: &[ConceptHierarchy], config: &AoiConfig) -> Result<Dataset> {
    let mut current = d.clone();
    let names: Vec<(String, AttributeKind, AttributeRole)> = current
        .schema()
        .iter()
        .map(|a| (a.name.clone(), a.kind, a.role))
        .collect();
    for (name, kind, role) in names {
        if role == AttributeRole::Class {
            continue;
        }
        match kind {
            AttributeKind::Numeric => {
                if config.aggregate_for(&name).is_none() {
                    current = current.remove_attribute(&name)?;
                }
            }
            AttributeKind::Nominal => {
                let threshold = config.threshold_for(&name);
                let idx = current.attr_index(&name)?;
                let distinct = current.distinct_values(idx).len();
                let h = hierarchies.iter().find(|h| norm(&h.attribute) == norm(&name));
                match h {
                    Some(h) => {
                        current =
                            generalize_attribute(&current, &name, h, threshold, config.aggregates())?;
                    }
                    None if distinct > threshold => {
                        current = current.remove_attribute(&name)?;
                    }
                    None => {}
                }
            }
        }
    }
    Ok(current.merge_with_aggregates(config.aggregates()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn region_hierarchy_loads() {
        let h = samples::region_hierarchy();
        assert_eq!(h.levels.len(), 3);
        assert_eq!(h.ascend("USA.east", 1).unwrap(), "USA");
        assert_eq!(h.ascend("USA.east", 2).unwrap(), "World");
        assert_eq!(h.ascend("india.SOUTH", 1).unwrap(), "India");
    }

    #[test]
    fn ascend_zero_is_identity() {
        let h = samples::region_hierarchy();
        assert_eq!(h.ascend("China.west", 0).unwrap(), "China.west");
    }

    #[test]
    fn ascend_clamps_at_the_top() {
        let h = samples::region_hierarchy();
        assert_eq!(h.ascend("Cuba.north", 99).unwrap(), "World");
    }

    #[test]
    fn unknown_value_is_an_error() {
        let h = samples::region_hierarchy();
        assert!(matches!(
            h.ascend("Atlantis", 1),
            Err(Error::UnknownValue(_))
        ));
    }

    #[test]
    fn cycle_is_detected() {
        let spec = "attribute: x\nlevels: a, b\na -> b\nb -> a\n";
        assert!(matches!(
            load_hierarchy(spec),
            Err(Error::HierarchyCycle(_)) | Err(Error::LevelOverflow(_))
        ));
    }

    #[test]
    fn duplicate_child_mapping_is_an_error() {
        let spec = "attribute: x\nlevels: a, b\nv -> p\nv -> q\n";
        assert!(matches!(
            load_hierarchy(spec),
            Err(Error::DuplicateParent(_))
        ));
    }

    #[test]
    fn single_level_hierarchy_ascend_is_identity() {
        let h = load_hierarchy("attribute: edu\nlevels: edu\n").unwrap();
        assert_eq!(h.levels.len(), 1);
        assert_eq!(h.ascend("anything", 5).unwrap(), "anything");
    }

    #[test]
    fn region_generalizes_to_four_countries() {
        let d = samples::table1();
        let h = samples::region_hierarchy();
        let out = generalize_attribute(&d, "region", &h, 4, &HashMap::new()).unwrap();
        let idx = out.attr_index("region").unwrap();
        let mut vals: Vec<String> = out
            .distinct_values(idx)
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        vals.sort();
        assert_eq!(vals, ["china", "cuba", "india", "usa"]);
        assert_eq!(out.total_count(), 15);
    }

    #[test]
    fn wide_threshold_leaves_data_unchanged() {
        let d = samples::table1();
        let h = samples::region_hierarchy();
        let out = generalize_attribute(&d, "region", &h, 100, &HashMap::new()).unwrap();
        // No ascension happens; only the one duplicated row pair merges.
        assert_eq!(out.len(), 14);
        assert_eq!(out.total_count(), 15);
    }

    #[test]
    fn threshold_one_reaches_world() {
        let d = samples::table1();
        let h = samples::region_hierarchy();
        let out = generalize_attribute(&d, "region", &h, 1, &HashMap::new()).unwrap();
        let idx = out.attr_index("region").unwrap();
        let vals = out.distinct_values(idx);
        assert_eq!(vals.len(), 1);
        assert_eq!(vals[0].0, "world");
        assert_eq!(out.total_count(), 15);
    }

    #[test]
    fn distinct_count_is_monotone_under_ascension() {
        let d = samples::table1();
        let h = samples::region_hierarchy();
        let idx = d.attr_index("region").unwrap();
        let mut prev = d.distinct_values(idx).len();
        for threshold in [8, 4, 1] {
            let out = generalize_attribute(&d, "region", &h, threshold, &HashMap::new()).unwrap();
            let n = out.distinct_values(out.attr_index("region").unwrap()).len();
            assert!(n <= prev);
            prev = n;
        }
    }

    #[test]
    fn aoi_reproduces_graduate_school_china_row() {
        let d = samples::table1();
        let h = samples::region_hierarchy();
        let config = AoiConfig::default()
            .with_threshold("region", 4)
            .with_threshold("avg_edu_level", 8)
            .with_aggregate("family_income_per_year", Aggregate::Sum);
        let out = aoi(&d, &[h], &config).unwrap();
        assert_eq!(out.total_count(), 15);
        let edu = out.attr_index("avg_edu_level").unwrap();
        let region = out.attr_index("region").unwrap();
        let income = out.attr_index("family_income_per_year").unwrap();
        let row = out
            .tuples()
            .iter()
            .position(|t| t[edu].key() == "graduate school" && t[region].key() == "china")
            .expect("generalized row present");
        assert_eq!(out.counts()[row], 3);
        assert_eq!(out.tuples()[row][income].as_numeric(), Some(114000.0));
    }

    #[test]
    fn aoi_without_hierarchies_only_merges() {
        let d = samples::table3();
        let config = AoiConfig::default().with_threshold("avg_edu_level", 100);
        let out = aoi(&d, &[], &config).unwrap();
        assert_eq!(out.total_count(), 17);
        assert_eq!(out.len(), 11); // plain identical-tuple merge
    }

    #[test]
    fn aoi_drops_wide_attribute_without_hierarchy() {
        let d = samples::table1();
        // 8 distinct education values, threshold 4, no hierarchy -> removed.
        let config = AoiConfig::default()
            .with_threshold("avg_edu_level", 4)
            .with_threshold("region", 4);
        let h = samples::region_hierarchy();
        let out = aoi(&d, &[h], &config).unwrap();
        assert!(out.attr_index("avg_edu_level").is_err());
        assert_eq!(out.total_count(), 15);
        assert!(out.len() <= 9);
    }

    #[test]
    fn aoi_is_idempotent_on_its_own_output() {
        let d = samples::table1();
        let h = samples::region_hierarchy();
        let config = AoiConfig::default()
            .with_threshold("region", 4)
            .with_threshold("avg_edu_level", 8)
            .with_aggregate("family_income_per_year", Aggregate::Sum);
        let once = aoi(&d, &[h.clone()], &config).unwrap();
        let twice = aoi(&once, &[h], &config).unwrap();
        assert_eq!(once.len(), twice.len());
        assert_eq!(once.total_count(), twice.total_count());
    }
}
