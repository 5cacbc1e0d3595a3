//! Typed tabular training data with a per-tuple count column.
//!
//! Every generalization and merge operation preserves the total count, so
//! entropy scores computed on generalized data match the raw data.

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeKind {
    Nominal,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttributeRole {
    Regular,
    Class,
}

#[derive(Debug, Clone)]
pub struct AttributeDescriptor {
    pub name: String,
    pub kind: AttributeKind,
    pub role: AttributeRole,
}

impl AttributeDescriptor {
    pub fn nominal(name: &str) -> Self {
        AttributeDescriptor {
            name: name.to_string(),
            kind: AttributeKind::Nominal,
            role: AttributeRole::Regular,
        }
    }

    pub fn numeric(name: &str) -> Self {
        AttributeDescriptor {
            name: name.to_string(),
            kind: AttributeKind::Numeric,
            role: AttributeRole::Regular,
        }
    }

    pub fn class(name: &str) -> Self {
        AttributeDescriptor {
            name: name.to_string(),
            kind: AttributeKind::Nominal,
            role: AttributeRole::Class,
        }
    }
}

/// Normalized form used for nominal comparison: trimmed, lowercased.
pub fn norm(s: &str) -> String {
    s.trim().to_lowercase()
}

#[derive(Debug, Clone)]
pub enum Value {
    Nominal(String),
    Numeric(f64),
}

impl Value {
    pub fn nominal(s: &str) -> Self {
        Value::Nominal(s.trim().to_string())
    }

    /// Identity key: nominal values compare case-insensitively, numerics by bits.
    pub fn key(&self) -> String {
        match self {
            Value::Nominal(s) => norm(s),
            Value::Numeric(x) => format!("#{}", x.to_bits()),
        }
    }

    pub fn as_nominal(&self) -> Option<&str> {
        match self {
            Value::Nominal(s) => Some(s),
            Value::Numeric(_) => None,
        }
    }

    pub fn as_numeric(&self) -> Option<f64> {
        match self {
            Value::Numeric(x) => Some(*x),
            Value::Nominal(_) => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Value::Nominal(s) => s.clone(),
            Value::Numeric(x) => {
                if x.fract() == 0.0 && x.abs() < 1e15 {
                    format!("{}", *x as i64)
                } else {
                    format!("{}", x)
                }
            }
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

/// Class label counts, kept in first-seen order so majority ties break
/// deterministically by declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassDistribution {
    entries: Vec<(String, u64)>,
}

impl ClassDistribution {
    pub fn new() -> Self {
        ClassDistribution::default()
    }

    pub fn add(&mut self, label: &str, count: u64) {
        let k = norm(label);
        for (l, c) in &mut self.entries {
            if norm(l) == k {
                *c += count;
                return;
            }
        }
        self.entries.push((label.trim().to_string(), count));
    }

    pub fn merge(&mut self, other: &ClassDistribution) {
        for (l, c) in &other.entries {
            self.add(l, *c);
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn count(&self, label: &str) -> u64 {
        let k = norm(label);
        self.entries
            .iter()
            .find(|(l, _)| norm(l) == k)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    /// Majority class; ties break toward the earliest-seen label.
    pub fn majority(&self) -> (&str, u64) {
        let mut best: Option<(&str, u64)> = None;
        for (l, c) in &self.entries {
            match best {
                Some((_, bc)) if *c <= bc => {}
                _ => best = Some((l, *c)),
            }
        }
        best.expect("empty class distribution")
    }

    pub fn counts(&self) -> Vec<u64> {
        self.entries.iter().map(|(_, c)| *c).collect()
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same label set with the same counts, order-insensitive.
    pub fn same_counts(&self, other: &ClassDistribution) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(l, c)| other.count(l) == *c)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(l, c)| format!("{}:{}", l, c))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Numeric column aggregation rule used when tuples merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Sum,
    None,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    schema: Vec<AttributeDescriptor>,
    tuples: Vec<Vec<Value>>,
    counts: Vec<u64>,
}

impl Dataset {
    pub fn new(schema: Vec<AttributeDescriptor>, tuples: Vec<Vec<Value>>) -> Result<Self> {
        let counts = vec![1; tuples.len()];
        Dataset::with_counts(schema, tuples, counts)
    }

    pub fn with_counts(
        schema: Vec<AttributeDescriptor>,
        tuples: Vec<Vec<Value>>,
        counts: Vec<u64>,
    ) -> Result<Self> {
        let mut seen = HashMap::new();
        for a in &schema {
            if seen.insert(norm(&a.name), ()).is_some() {
                return Err(Error::DuplicateAttribute(a.name.clone()));
            }
        }
        let classes = schema
            .iter()
            .filter(|a| a.role == AttributeRole::Class)
            .count();
        if classes != 1 {
            return Err(Error::ClassCount(classes));
        }
        if tuples.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, t) in tuples.iter().enumerate() {
            if t.len() != schema.len() {
                return Err(Error::ArityMismatch {
                    row: i + 1,
                    expected: schema.len(),
                    found: t.len(),
                });
            }
        }
        assert_eq!(tuples.len(), counts.len());
        Ok(Dataset {
            schema,
            tuples,
            counts,
        })
    }

    pub fn schema(&self) -> &[AttributeDescriptor] {
        &self.schema
    }

    pub fn tuples(&self) -> &[Vec<Value>] {
        &self.tuples
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn attr_index(&self, name: &str) -> Result<usize> {
        let k = norm(name);
        self.schema
            .iter()
            .position(|a| norm(&a.name) == k)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn class_index(&self) -> usize {
        self.schema
            .iter()
            .position(|a| a.role == AttributeRole::Class)
            .expect("schema validated to hold one class attribute")
    }

    pub fn class_attribute(&self) -> &AttributeDescriptor {
        &self.schema[self.class_index()]
    }

    /// Reassign the class role to `name` (the old class becomes regular).
    pub fn set_class(&mut self, name: &str) -> Result<()> {
        let idx = self.attr_index(name)?;
        let old = self.class_index();
        self.schema[old].role = AttributeRole::Regular;
        self.schema[idx].role = AttributeRole::Class;
        Ok(())
    }

    pub fn value(&self, row: usize, attr: usize) -> &Value {
        &self.tuples[row][attr]
    }

    /// Distinct value keys of a column, in first-seen order, paired with a
    /// display value.
    pub fn distinct_values(&self, attr: usize) -> Vec<(String, Value)> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for t in &self.tuples {
            let k = t[attr].key();
            if seen.insert(k.clone(), ()).is_none() {
                out.push((k, t[attr].clone()));
            }
        }
        out
    }

    pub fn class_distribution(&self) -> ClassDistribution {
        let ci = self.class_index();
        let mut dist = ClassDistribution::new();
        for (t, c) in self.tuples.iter().zip(&self.counts) {
            match &t[ci] {
                Value::Nominal(s) => dist.add(s, *c),
                Value::Numeric(x) => dist.add(&Value::Numeric(*x).render(), *c),
            }
        }
        dist
    }

    /// Merge tuples identical on every attribute, summing counts.
    pub fn merge_identical_tuples(&self) -> Dataset {
        self.merge_with_aggregates(&HashMap::new())
    }

    /// Merge tuples identical on all attributes except the aggregated numeric
    /// columns, which are combined per rule. Counts always sum.
    pub fn merge_with_aggregates(&self, aggregates: &HashMap<String, Aggregate>) -> Dataset {
        let agg: Vec<Option<Aggregate>> = self
            .schema
            .iter()
            .map(|a| aggregates.get(&norm(&a.name)).copied())
            .collect();
        let mut index: HashMap<Vec<String>, usize> = HashMap::new();
        let mut tuples: Vec<Vec<Value>> = Vec::new();
        let mut counts: Vec<u64> = Vec::new();
        for (t, c) in self.tuples.iter().zip(&self.counts) {
            let key: Vec<String> = t
                .iter()
                .zip(&agg)
                .map(|(v, a)| match a {
                    Some(Aggregate::Sum) => String::new(),
                    _ => v.key(),
                })
                .collect();
            match index.get(&key) {
                Some(&i) => {
                    counts[i] += c;
                    for (j, a) in agg.iter().enumerate() {
                        if let Some(Aggregate::Sum) = a {
                            let prev = tuples[i][j].as_numeric().unwrap_or(0.0);
                            let add = t[j].as_numeric().unwrap_or(0.0);
                            tuples[i][j] = Value::Numeric(prev + add);
                        }
                    }
                }
                None => {
                    index.insert(key, tuples.len());
                    tuples.push(t.clone());
                    counts.push(*c);
                }
            }
        }
        Dataset {
            schema: self.schema.clone(),
            tuples,
            counts,
        }
    }

    /// Drop a non-class column and re-merge.
    pub fn remove_attribute(&self, name: &str) -> Result<Dataset> {
        let idx = self.attr_index(name)?;
        if self.schema[idx].role == AttributeRole::Class {
            return Err(Error::ClassAttribute(name.to_string()));
        }
        let schema: Vec<_> = self
            .schema
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, a)| a.clone())
            .collect();
        let tuples: Vec<Vec<Value>> = self
            .tuples
            .iter()
            .map(|t| {
                t.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != idx)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let d = Dataset {
            schema,
            tuples,
            counts: self.counts.clone(),
        };
        Ok(d.merge_identical_tuples())
    }

    /// Keep only the named columns (class column is always kept when
    /// `keep_class`); re-merges with the given aggregates.
    pub fn project(
        &self,
        keep: &[String],
        keep_class: bool,
        aggregates: &HashMap<String, Aggregate>,
    ) -> Result<Dataset> {
        let keep_keys: Vec<String> = keep.iter().map(|s| norm(s)).collect();
        for (k, name) in keep_keys.iter().zip(keep) {
            if !self.schema.iter().any(|a| norm(&a.name) == *k) {
                return Err(Error::UnknownAttribute(name.clone()));
            }
        }
        let mut schema = Vec::new();
        let mut idxs = Vec::new();
        for (i, a) in self.schema.iter().enumerate() {
            let wanted = keep_keys.contains(&norm(&a.name))
                || (keep_class && a.role == AttributeRole::Class);
            if wanted {
                schema.push(a.clone());
                idxs.push(i);
            }
        }
        // Projection may drop the class column; synthesize one so the
        // invariant of exactly one class attribute keeps holding.
        if !schema.iter().any(|a| a.role == AttributeRole::Class) {
            if let Some(last) = schema.last_mut() {
                last.role = AttributeRole::Class;
            }
        }
        let tuples: Vec<Vec<Value>> = self
            .tuples
            .iter()
            .map(|t| idxs.iter().map(|&i| t[i].clone()).collect())
            .collect();
        let d = Dataset {
            schema,
            tuples,
            counts: self.counts.clone(),
        };
        Ok(d.merge_with_aggregates(aggregates))
    }

    /// Subset of rows, counts carried over.
    pub fn filter_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            tuples: rows.iter().map(|&i| self.tuples[i].clone()).collect(),
            counts: rows.iter().map(|&i| self.counts[i]).collect(),
        }
    }

    /// Replace a nominal column's values in place (used by roll-up).
    pub fn replace_column(&self, attr: usize, values: Vec<Value>) -> Dataset {
        assert_eq!(values.len(), self.tuples.len());
        let mut tuples = self.tuples.clone();
        for (t, v) in tuples.iter_mut().zip(values) {
            t[attr] = v;
        }
        Dataset {
            schema: self.schema.clone(),
            tuples,
            counts: self.counts.clone(),
        }
    }

    pub fn rename_attribute(&mut self, attr: usize, new_name: &str) {
        self.schema[attr].name = new_name.trim().to_string();
    }
}

/// Parse a numeric field, tolerating a leading currency sign and
/// thousands separators ("$ 899", "$120,000").
pub fn parse_numeric(raw: &str) -> Option<f64> {
    let cleaned: String = raw
        .trim()
        .trim_start_matches('$')
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .collect();
    let x: f64 = cleaned.parse().ok()?;
    x.is_finite().then_some(x)
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    for ch in line.chars() {
        match ch {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => {
                fields.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    fields.push(cur.trim().to_string());
    fields
}

/// Load comma-separated text with a header row against a declared schema.
/// Header order must match the schema (names compared case-insensitively).
pub fn load_dataset(source: &str, schema: Vec<AttributeDescriptor>) -> Result<Dataset> {
    let mut lines = source.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(Error::EmptyInput)?;
    let head_fields = split_csv_line(header);
    if head_fields.len() != schema.len() {
        return Err(Error::ArityMismatch {
            row: 0,
            expected: schema.len(),
            found: head_fields.len(),
        });
    }
    let mut tuples = Vec::new();
    for (rowno, line) in lines.enumerate() {
        let fields = split_csv_line(line);
        if fields.len() != schema.len() {
            return Err(Error::ArityMismatch {
                row: rowno + 1,
                expected: schema.len(),
                found: fields.len(),
            });
        }
        let mut tuple = Vec::with_capacity(schema.len());
        for (field, attr) in fields.iter().zip(&schema) {
            let v = match attr.kind {
                AttributeKind::Nominal => Value::nominal(field),
                AttributeKind::Numeric => {
                    Value::Numeric(parse_numeric(field).ok_or_else(|| Error::BadNumeric {
                        row: rowno + 1,
                        attribute: attr.name.clone(),
                        value: field.clone(),
                    })?)
                }
            };
            tuple.push(v);
        }
        tuples.push(tuple);
    }
    if tuples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Dataset::new(schema, tuples)
}

/// Parse a sidecar schema declaration: one `name:kind[:class]` line per
/// attribute, `kind` in {nominal, numeric}.
pub fn parse_schema(text: &str) -> Result<Vec<AttributeDescriptor>> {
    let mut schema = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(':').map(|p| p.trim()).collect();
        if parts.len() < 2 || parts.len() > 3 {
            return Err(Error::BadSchemaLine(line.to_string()));
        }
        let kind = match norm(parts[1]).as_str() {
            "nominal" => AttributeKind::Nominal,
            "numeric" => AttributeKind::Numeric,
            _ => return Err(Error::BadSchemaLine(line.to_string())),
        };
        let role = match parts.get(2) {
            Some(r) if norm(r) == "class" => AttributeRole::Class,
            Some(_) => return Err(Error::BadSchemaLine(line.to_string())),
            None => AttributeRole::Regular,
        };
        schema.push(AttributeDescriptor {
            name: parts[0].to_string(),
            kind,
            role,
        });
    }
    let classes = schema
        .iter()
        .filter(|a| a.role == AttributeRole::Class)
        .count();
    if classes != 1 {
        return Err(Error::ClassCount(classes));
    }
    Ok(schema)
}
