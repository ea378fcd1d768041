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

//! Expected degrees and samplers for the generative null models.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::QualityModel;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;
use crate::stats::PartitionStats;

/// Symmetric matrix of DCSBM block rates `p_qr`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRates {
    k: usize,
    rates: Vec<f64>,
}

impl BlockRates {
    pub fn new(k: usize) -> Self {
        BlockRates {
            k,
            rates: vec![0.0; k * k],
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.k
    }

    pub fn get(&self, q: usize, r: usize) -> f64 {
        self.rates[q * self.k + r]
    }

    pub fn set(&mut self, q: usize, r: usize, rate: f64) {
        self.rates[q * self.k + r] = rate;
        self.rates[r * self.k + q] = rate;
    }
}

/// Maximum-likelihood DCSBM rates `p_qr = 2m·m(C_q, C_r)/(D(C_q)·D(C_r))`,
/// where the diagonal weight is `D_in`. Blocks without degree get rate 0.
pub fn dcsbm_optimal_rates(stats: &PartitionStats) -> BlockRates {
    let k = stats.num_communities();
    let two_m = 2.0 * stats.weight;
    let mut rates = BlockRates::new(k);
    for q in 0..k {
        for r in q..k {
            let denom = stats.community_degrees[q] * stats.community_degrees[r];
            if denom > 0.0 {
                rates.set(q, r, two_m * stats.inter(q, r) / denom);
            }
        }
    }
    rates
}

fn community_degrees(degrees: &[f64], partition: &Partition) -> Vec<f64> {
    let mut totals = vec![0.0; partition.num_communities()];
    for (v, &d) in degrees.iter().enumerate() {
        totals[partition.community_of(v)] += d;
    }
    totals
}

fn check_len(graph_len: usize, partition: &Partition) -> Result<()> {
    if graph_len != partition.len() {
        return Err(Error::Validation(format!(
            "partition covers {} vertices, graph has {graph_len}",
            partition.len()
        )));
    }
    Ok(())
}

/// Expected degree of each vertex in the DCSBM with the given block rates.
pub fn expected_degrees_block(
    graph: &Graph,
    partition: &Partition,
    rates: &BlockRates,
) -> Result<Vec<f64>> {
    check_len(graph.vertex_count(), partition)?;
    if rates.num_blocks() != partition.num_communities() {
        return Err(Error::Validation(format!(
            "{} block rates for {} communities",
            rates.num_blocks(),
            partition.num_communities()
        )));
    }
    let two_m = 2.0 * graph.total_weight();
    let totals = community_degrees(graph.degrees(), partition);
    Ok(graph
        .degrees()
        .iter()
        .enumerate()
        .map(|(v, &d)| {
            let q = partition.community_of(v);
            let mass: f64 = totals
                .iter()
                .enumerate()
                .map(|(r, &dr)| dr * rates.get(q, r))
                .sum();
            d * mass / two_m
        })
        .collect())
}

/// Expected degree of each vertex when edges are redrawn from `model`.
///
/// Loops count twice, as in the observed degree. PPM has no loops.
pub fn expected_degrees(
    graph: &Graph,
    partition: &Partition,
    model: &QualityModel,
) -> Result<Vec<f64>> {
    check_len(graph.vertex_count(), partition)?;
    model.validate()?;
    let two_m = 2.0 * graph.total_weight();
    let sizes = partition.sizes();
    let totals = community_degrees(graph.degrees(), partition);
    let total: f64 = totals.iter().sum();
    let n = graph.vertex_count() as f64;
    let degree_of = |v: usize| graph.degree(v);
    let out = (0..graph.vertex_count()).map(|v| {
        let c = partition.community_of(v);
        (degree_of(v), sizes[c] as f64, totals[c])
    });
    match *model {
        QualityModel::Ppm { p_in, p_out } => Ok(out
            .map(|(_, size, _)| p_in * (size - 1.0) + p_out * (n - size))
            .collect()),
        QualityModel::Dcppm { p_in, p_out } => Ok(out
            .map(|(d, _, dc)| d * (dc * p_in + (total - dc) * p_out) / two_m)
            .collect()),
        QualityModel::Ilfr { mu } => Ok(out
            .map(|(d, _, dc)| {
                if dc > 0.0 {
                    d * ((1.0 - mu) + mu * total / two_m)
                } else {
                    0.0
                }
            })
            .collect()),
        other => Err(Error::Domain(format!(
            "{} does not define edge rates",
            other.kind()
        ))),
    }
}

/// Draws a multigraph from `model` with independent Poisson multiplicities
/// for every vertex pair. Loops get half the pair rate, except under PPM
/// which has none.
pub fn sample_null_model(
    degrees: &[f64],
    partition: &Partition,
    model: &QualityModel,
    seed: u64,
) -> Result<Graph> {
    check_len(degrees.len(), partition)?;
    model.validate()?;
    let n = degrees.len();
    let two_m: f64 = degrees.iter().sum();
    let totals = community_degrees(degrees, partition);
    let rate: Box<dyn Fn(usize, usize) -> f64> = match *model {
        QualityModel::Ppm { p_in, p_out } => Box::new(move |i, j| {
            if i == j {
                0.0
            } else if partition.community_of(i) == partition.community_of(j) {
                p_in
            } else {
                p_out
            }
        }),
        QualityModel::Dcppm { p_in, p_out } => Box::new(move |i, j| {
            let p = if partition.community_of(i) == partition.community_of(j) {
                p_in
            } else {
                p_out
            };
            degrees[i] * degrees[j] * p / two_m
        }),
        QualityModel::Ilfr { mu } => {
            let totals = totals.clone();
            Box::new(move |i, j| {
                let c = partition.community_of(i);
                let mut scale = mu / two_m;
                if c == partition.community_of(j) {
                    scale += (1.0 - mu) / totals[c];
                }
                degrees[i] * degrees[j] * scale
            })
        }
        other => {
            return Err(Error::Domain(format!(
                "{} does not define edge rates",
                other.kind()
            )))
        }
    };
    if two_m <= 0.0 && !matches!(model, QualityModel::Ppm { .. }) {
        return Graph::from_weighted_edges(n, std::iter::empty());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut lambda = rate(i, j);
            if i == j {
                lambda /= 2.0;
            }
            if !(lambda > 0.0 && lambda.is_finite()) {
                continue;
            }
            let count: f64 = Poisson::new(lambda)
                .map_err(|e| Error::Domain(e.to_string()))?
                .sample(&mut rng);
            if count > 0.0 {
                edges.push((i, j, count));
            }
        }
    }
    Graph::from_weighted_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::Dataset;
    use crate::models::estimate_dcppm;
    use crate::stats::compute_stats;

    #[test]
    fn ilfr_preserves_degrees_exactly() {
        let d = Dataset::Karate.load();
        for mu in [0.01, 0.128, 0.5, 0.9] {
            let exp = expected_degrees(&d.graph, &d.ground_truth, &QualityModel::Ilfr { mu }).unwrap();
            for (v, e) in exp.iter().enumerate() {
                let dv = d.graph.degree(v);
                assert!((e - dv).abs() <= 4.0 * f64::EPSILON * dv, "{v}: {e} vs {dv}");
            }
        }
    }

    #[test]
    fn dcppm_with_unit_rates_is_configuration_model() {
        let d = Dataset::Dolphins.load();
        let model = QualityModel::Dcppm {
            p_in: 1.0,
            p_out: 1.0,
        };
        let exp = expected_degrees(&d.graph, &d.ground_truth, &model).unwrap();
        for (v, e) in exp.iter().enumerate() {
            assert!((e - d.graph.degree(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn dcppm_fitted_rates_shift_degrees() {
        let d = Dataset::Karate.load();
        let stats = compute_stats(&d.graph, &d.ground_truth);
        assert_ne!(stats.community_degrees[0], stats.community_degrees[1]);
        let (p_in, p_out) = estimate_dcppm(&stats).unwrap();
        let exp = expected_degrees(&d.graph, &d.ground_truth, &QualityModel::Dcppm { p_in, p_out })
            .unwrap();
        let worst = exp
            .iter()
            .enumerate()
            .map(|(v, e)| (e - d.graph.degree(v)).abs())
            .fold(0.0, f64::max);
        assert!(worst > 0.1, "{worst}");
    }

    #[test]
    fn optimal_block_rates_preserve_degrees() {
        let d = Dataset::Karate.load();
        let stats = compute_stats(&d.graph, &d.ground_truth);
        let rates = dcsbm_optimal_rates(&stats);
        let exp = expected_degrees_block(&d.graph, &d.ground_truth, &rates).unwrap();
        for (v, e) in exp.iter().enumerate() {
            assert!((e - d.graph.degree(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn unsupported_kind_is_rejected() {
        let d = Dataset::Karate.load();
        let model = QualityModel::Modularity { resolution: 1.0 };
        assert!(matches!(
            expected_degrees(&d.graph, &d.ground_truth, &model),
            Err(Error::Domain(_))
        ));
        assert!(sample_null_model(d.graph.degrees(), &d.ground_truth, &model, 1).is_err());
    }

    #[test]
    fn ilfr_samples_match_degrees() {
        let d = Dataset::Karate.load();
        let model = QualityModel::Ilfr { mu: 0.128 };
        let n = d.graph.vertex_count();
        let samples = 10_000;
        let mut sum = vec![0.0; n];
        let mut sum_sq = vec![0.0; n];
        for s in 0..samples {
            let g = sample_null_model(d.graph.degrees(), &d.ground_truth, &model, s).unwrap();
            for v in 0..n {
                sum[v] += g.degree(v);
                sum_sq[v] += g.degree(v) * g.degree(v);
            }
        }
        let k = samples as f64;
        for v in 0..n {
            let mean = sum[v] / k;
            let var = sum_sq[v] / k - mean * mean;
            let se = (var / k).sqrt();
            assert!(
                (mean - d.graph.degree(v)).abs() <= 3.0 * se,
                "vertex {v}: mean {mean}, degree {}, se {se}",
                d.graph.degree(v));
        }
    }

    #[test]
    fn ppm_edge_count_mean() {
        let n = 20;
        let partition = Partition::from_assignment((0..n).map(|v| v % 3));
        let p = 0.1;
        let model = QualityModel::Ppm { p_in: p, p_out: p };
        let samples = 4000;
        let counts: Vec<f64> = (0..samples)
            .map(|s| {
                sample_null_model(&vec![1.0; n], &partition, &model, s)
                    .unwrap()
                    .total_weight()
            })
            .collect();
        let k = samples as f64;
        let mean = counts.iter().sum::<f64>() / k;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let expected = (n * (n - 1) / 2) as f64 * p;
        assert!((mean - expected).abs() <= 3.0 * (var / k).sqrt(), "{mean} vs {expected}");
    }

    #[test]
    fn vanishing_mixing_keeps_communities_apart() {
        let g = crate::graph::tests::two_triangles();
        let partition = Partition::from_assignment([0, 0, 0, 1, 1, 1]);
        let model = QualityModel::Ilfr { mu: 1.0 / 24.0 * 1e-6 };
        let mut crossing = 0.0;
        for seed in 0..200 {
            let s = sample_null_model(g.degrees(), &partition, &model, seed).unwrap();
            crossing += compute_stats(&s, &partition).weight_out;
        }
        assert!(crossing <= 1.0);
    }
}
