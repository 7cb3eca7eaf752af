//! Partition agreement and the edge-collapse transforms used to feed
//! binary block models.

use std::collections::HashMap;

use crate::error::{Result, RsmError};
use crate::network::TypedNetwork;

/// Two labelings of the same vertices. Label values are arbitrary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionPair<'a> {
    labels_a: &'a [usize],
    labels_b: &'a [usize],
}

impl<'a> PartitionPair<'a> {
    pub fn new(labels_a: &'a [usize], labels_b: &'a [usize]) -> Result<Self> {
        if labels_a.len() != labels_b.len() {
            return Err(RsmError::LengthMismatch(labels_a.len(), labels_b.len()));
        }
        if labels_a.is_empty() {
            return Err(RsmError::Usage("partitions must be non-empty".into()));
        }
        Ok(Self { labels_a, labels_b })
    }

    pub fn adjusted_rand_index(&self) -> f64 {
        let mut table: HashMap<(usize, usize), u64> = HashMap::new();
        let mut rows: HashMap<usize, u64> = HashMap::new();
        let mut cols: HashMap<usize, u64> = HashMap::new();
        for (&a, &b) in self.labels_a.iter().zip(self.labels_b) {
            *table.entry((a, b)).or_default() += 1;
            *rows.entry(a).or_default() += 1;
            *cols.entry(b).or_default() += 1;
        }
        let pairs = |n: u64| (n * n.saturating_sub(1) / 2) as f64;
        let index: f64 = table.values().map(|&n| pairs(n)).sum();
        let sum_a: f64 = rows.values().map(|&n| pairs(n)).sum();
        let sum_b: f64 = cols.values().map(|&n| pairs(n)).sum();
        let total = pairs(self.labels_a.len() as u64);
        let expected = if total > 0.0 {
            sum_a * sum_b / total
        } else {
            0.0
        };
        let max = 0.5 * (sum_a + sum_b);
        let denom = max - expected;
        if denom == 0.0 {
            // both partitions trivial in the same way
            return 1.0;
        }
        (index - expected) / denom
    }
}

/// Adjusted Rand index between two labelings.
pub fn adjusted_rand_index(labels_a: &[usize], labels_b: &[usize]) -> Result<f64> {
    Ok(PartitionPair::new(labels_a, labels_b)?.adjusted_rand_index())
}

/// Keeps only edge presence: every edge becomes type 1.
pub fn collapse_presence(net: &TypedNetwork) -> TypedNetwork {
    let x = net.edge_types().mapv(|c| u32::from(c != 0));
    net.with_edge_types(1, x)
}

/// Keeps only the edges of type `c` (1-based code), as type 1.
pub fn collapse_by_type(net: &TypedNetwork, c: u32) -> Result<TypedNetwork> {
    if c == 0 || c as usize > net.n_types() {
        return Err(RsmError::InvalidParams(format!(
            "type {c} outside 1..={}",
            net.n_types()
        )));
    }
    let x = net.edge_types().mapv(|v| u32::from(v == c));
    Ok(net.with_edge_types(1, x))
}
