//! Information-theoretic attribute scoring: expected information I,
//! partition expected information E(A), information gain, and the
//! uncertainty coefficient U(A) used for relevance filtering.
//!
//! All logarithms are base 2; results are in bits.

use std::collections::HashMap;

use crate::dataset::{norm, AttributeRole, Dataset};
use crate::error::{Error, Result};

/// Expected information I(p1, ..., pm) = -sum (pi/p) log2 (pi/p).
/// Zero counts contribute nothing.
pub fn expected_info(counts: &[u64]) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyInput);
    }
    let p = total as f64;
    let mut info = 0.0;
    for &c in counts {
        if c > 0 {
            let frac = c as f64 / p;
            info -= frac * frac.log2();
        }
    }
    Ok(info)
}

/// E(A): count-weighted average class entropy over the partition induced by
/// the attribute's distinct values.
pub fn attribute_expected_info(d: &Dataset, attr: &str) -> Result<f64> {
    let idx = d.attr_index(attr)?;
    if d.schema()[idx].role == AttributeRole::Class {
        return Err(Error::ClassAttribute(attr.to_string()));
    }
    let ci = d.class_index();
    // value key -> class label key -> weighted count
    let mut partitions: HashMap<String, HashMap<String, u64>> = HashMap::new();
    for (t, &c) in d.tuples().iter().zip(d.counts()) {
        let part = partitions.entry(t[idx].key()).or_default();
        *part.entry(t[ci].key()).or_insert(0) += c;
    }
    let total = d.total_count() as f64;
    let mut e = 0.0;
    for part in partitions.values() {
        let counts: Vec<u64> = part.values().copied().collect();
        let subset: u64 = counts.iter().sum();
        e += (subset as f64 / total) * expected_info(&counts)?;
    }
    Ok(e)
}

/// Gain(A) = I(class) - E(A).
pub fn info_gain(d: &Dataset, attr: &str) -> Result<f64> {
    let class_info = expected_info(&d.class_distribution().counts())?;
    Ok(class_info - attribute_expected_info(d, attr)?)
}

/// U(A) = Gain(A) / I(class); 0 when the class is already pure.
pub fn uncertainty_coefficient(d: &Dataset, attr: &str) -> Result<f64> {
    let class_info = expected_info(&d.class_distribution().counts())?;
    if class_info == 0.0 {
        return Ok(0.0);
    }
    let u = (class_info - attribute_expected_info(d, attr)?) / class_info;
    // Guard against float round-off drifting just outside the unit interval.
    Ok(u.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttributeScore {
    pub attribute: String,
    pub expected: f64,
    pub gain: f64,
    pub uncertainty: f64,
}

/// Score every non-class attribute.
pub fn score_attributes(d: &Dataset) -> Result<Vec<AttributeScore>> {
    let class_info = expected_info(&d.class_distribution().counts())?;
    let mut out = Vec::new();
    for a in d.schema() {
        if a.role == AttributeRole::Class {
            continue;
        }
        let e = attribute_expected_info(d, &a.name)?;
        let gain = class_info - e;
        let uncertainty = if class_info == 0.0 {
            0.0
        } else {
            (gain / class_info).clamp(0.0, 1.0)
        };
        out.push(AttributeScore {
            attribute: a.name.clone(),
            expected: e,
            gain,
            uncertainty,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelevancePolicy {
    TopN(usize),
    Threshold(f64),
}

/// Attributes retained by relevance analysis, sorted by descending U(A)
/// (ties by schema order). Protected attributes are always kept.
pub fn relevance_filter(
    d: &Dataset,
    policy: RelevancePolicy,
    protected: &[String],
) -> Result<Vec<String>> {
    let scores = score_attributes(d)?;
    let protected_keys: Vec<String> = protected.iter().map(|s| norm(s)).collect();
    let mut ranked: Vec<(usize, &AttributeScore)> = scores.iter().enumerate().collect();
    ranked.sort_by(|(ia, a), (ib, b)| {
        b.uncertainty
            .partial_cmp(&a.uncertainty)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(ia.cmp(ib))
    });
    let mut kept: Vec<String> = Vec::new();
    for (rank, (_, s)) in ranked.iter().enumerate() {
        let is_protected = protected_keys.contains(&norm(&s.attribute));
        let passes = match policy {
            RelevancePolicy::TopN(n) => rank < n,
            RelevancePolicy::Threshold(t) => s.uncertainty > t || t == 0.0,
        };
        if passes || is_protected {
            kept.push(s.attribute.clone());
        }
    }
    Ok(kept)
}
