// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Partition similarity: NMI, Rand and Jaccard indices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Pair counts and contingency table of two partitions of the same set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionCounts {
    /// Pairs together in both partitions.
    pub n11: u64,
    /// Pairs together in the first partition only.
    pub n10: u64,
    /// Pairs together in the second partition only.
    pub n01: u64,
    /// Pairs separated in both partitions.
    pub n00: u64,
    /// Nonzero cells `(community in first, community in second) -> count`.
    pub contingency: BTreeMap<(usize, usize), u64>,
    pub first_sizes: Vec<u64>,
    pub second_sizes: Vec<u64>,
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

impl ConfusionCounts {
    pub fn new(first: &Partition, second: &Partition) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::Domain(format!(
                "partitions cover {} and {} vertices",
                first.len(),
                second.len()
            )));
        }
        let mut contingency = BTreeMap::new();
        for (&a, &b) in first.assignment().iter().zip(second.assignment()) {
            *contingency.entry((a, b)).or_insert(0u64) += 1;
        }
        let first_sizes: Vec<u64> = first.sizes().into_iter().map(|s| s as u64).collect();
        let second_sizes: Vec<u64> = second.sizes().into_iter().map(|s| s as u64).collect();
        let n11: u64 = contingency.values().map(|&c| choose2(c)).sum();
        let together_first: u64 = first_sizes.iter().map(|&s| choose2(s)).sum();
        let together_second: u64 = second_sizes.iter().map(|&s| choose2(s)).sum();
        let n10 = together_first - n11;
        let n01 = together_second - n11;
        let n00 = choose2(first.len() as u64) - n11 - n10 - n01;
        Ok(ConfusionCounts {
            n11,
            n10,
            n01,
            n00,
            contingency,
            first_sizes,
            second_sizes,
        })
    }

    pub fn total_pairs(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }
}

fn entropy(sizes: &[u64], n: f64) -> f64 {
    sizes
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `2I/(H_A + H_B)`.
///
/// Two single-community partitions score 1. If exactly one side has zero
/// entropy the score is 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    let counts = ConfusionCounts::new(a, b)?;
    let n = a.len() as f64;
    if a.is_empty() {
        return Ok(1.0);
    }
    let (ha, hb) = (entropy(&counts.first_sizes, n), entropy(&counts.second_sizes, n));
    if ha + hb == 0.0 {
        return Ok(1.0);
    }
    let mutual: f64 = counts
        .contingency
        .iter()
        .map(|(&(i, j), &c)| {
            let c = c as f64;
            let expected = counts.first_sizes[i] as f64 * counts.second_sizes[j] as f64;
            c / n * (c * n / expected).ln()
        })
        .sum();
    Ok((2.0 * mutual / (ha + hb)).clamp(0.0, 1.0))
}

/// Fraction of vertex pairs on which the partitions agree. 1 for fewer than
/// two vertices.
pub fn rand_index(a: &Partition, b: &Partition) -> Result<f64> {
    let c = ConfusionCounts::new(a, b)?;
    let total = c.total_pairs();
    if total == 0 {
        return Ok(1.0);
    }
    Ok((c.n11 + c.n00) as f64 / total as f64)
}

/// `n11 / (n11 + n10 + n01)`. 1 when neither partition joins any pair.
pub fn jaccard_index(a: &Partition, b: &Partition) -> Result<f64> {
    let c = ConfusionCounts::new(a, b)?;
    let joined = c.n11 + c.n10 + c.n01;
    if joined == 0 {
        return Ok(1.0);
    }
    Ok(c.n11 as f64 / joined as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Similarity {
    pub nmi: f64,
    pub rand: f64,
    pub jaccard: f64,
}

/// All three scores at once.
pub fn similarity(a: &Partition, b: &Partition) -> Result<Similarity> {
    Ok(Similarity {
        nmi: nmi(a, b)?,
        rand: rand_index(a, b)?,
        jaccard: jaccard_index(a, b)?,
    })
}
