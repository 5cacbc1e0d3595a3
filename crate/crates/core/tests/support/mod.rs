//! Shared helpers for the integration suites: a small random-dataset
//! generator and an independent brute-force entropy oracle.

use entrotree::dataset::{AttributeDescriptor, Dataset, Value};
use rand::rngs::StdRng;
use rand::Rng;

/// Random nominal dataset: up to `max_attrs` regular attributes with up to
/// `max_values` values each, up to `max_classes` class labels, and up to
/// `max_tuples` tuples.
pub fn random_dataset(
    rng: &mut StdRng,
    max_tuples: usize,
    max_attrs: usize,
    max_values: usize,
    max_classes: usize,
) -> Dataset {
    let n_attrs = rng.gen_range(1..=max_attrs);
    let n_values: Vec<usize> = (0..n_attrs).map(|_| rng.gen_range(2..=max_values)).collect();
    let n_classes = rng.gen_range(1..=max_classes);
    let n_tuples = rng.gen_range(1..=max_tuples);

    let mut schema: Vec<AttributeDescriptor> = (0..n_attrs)
        .map(|i| AttributeDescriptor::nominal(&format!("a{i}")))
        .collect();
    schema.push(AttributeDescriptor::class("class"));

    let tuples: Vec<Vec<Value>> = (0..n_tuples)
        .map(|_| {
            let mut row: Vec<Value> = (0..n_attrs)
                .map(|i| Value::nominal(&format!("v{}", rng.gen_range(0..n_values[i]))))
                .collect();
            row.push(Value::nominal(&format!("c{}", rng.gen_range(0..n_classes))));
            row
        })
        .collect();
    Dataset::new(schema, tuples).expect("generator invariants hold")
}

fn entropy_of(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let p = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / p;
            -f * f.log2()
        })
        .sum()
}

/// Brute-force gain and uncertainty for one attribute: materialize every
/// partition histogram with plain hash maps and sum entropies directly.
pub fn oracle_gain_uncertainty(d: &Dataset, attr: &str) -> (f64, f64) {
    use std::collections::HashMap;
    let idx = d.attr_index(attr).unwrap();
    let ci = d.class_index();
    let mut class_hist: HashMap<String, u64> = HashMap::new();
    let mut partitions: HashMap<String, HashMap<String, u64>> = HashMap::new();
    for (t, &c) in d.tuples().iter().zip(d.counts()) {
        *class_hist.entry(t[ci].key()).or_insert(0) += c;
        *partitions
            .entry(t[idx].key())
            .or_default()
            .entry(t[ci].key())
            .or_insert(0) += c;
    }
    let total = d.total_count() as f64;
    let class_counts: Vec<u64> = class_hist.values().copied().collect();
    let class_info = entropy_of(&class_counts);
    let mut e = 0.0;
    for hist in partitions.values() {
        let counts: Vec<u64> = hist.values().copied().collect();
        let subset: u64 = counts.iter().sum();
        e += subset as f64 / total * entropy_of(&counts);
    }
    let gain = class_info - e;
    let u = if class_info == 0.0 {
        0.0
    } else {
        (gain / class_info).clamp(0.0, 1.0)
    };
    (gain, u)
}
