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

//! Sufficient statistics of a (graph, partition) pair.

use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::partition::Partition;

/// Every aggregate the quality functions need.
///
/// Pair counts are taken over base vertices, so statistics computed on a
/// contracted graph agree with the ones computed on the original graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionStats {
    /// Number of base vertices.
    pub vertices: usize,
    /// Total edge weight `m`.
    pub weight: f64,
    /// Intra-community edge weight.
    pub weight_in: f64,
    /// Inter-community edge weight.
    pub weight_out: f64,
    /// `n(n-1)/2`.
    pub pairs: f64,
    /// Intra-community vertex pairs.
    pub pairs_in: f64,
    pub pairs_out: f64,
    /// Base vertex count per community.
    pub community_sizes: Vec<usize>,
    /// `D(C)`, degree sum per community.
    pub community_degrees: Vec<f64>,
    /// `D_in(C)`, twice the intra weight of each community.
    pub community_internal: Vec<f64>,
    /// Weight between communities `q <= r`; the diagonal holds `D_in(C)`.
    pub inter_weight: BTreeMap<(usize, usize), f64>,
    /// `Σ d(i) log d(i)` over base vertices.
    pub sum_dlogd: f64,
}

impl PartitionStats {
    pub fn num_communities(&self) -> usize {
        self.community_sizes.len()
    }

    /// `Σ_C D(C)²`.
    pub fn sum_sq_degree(&self) -> f64 {
        self.community_degrees.iter().map(|d| d * d).sum()
    }

    /// Weight between communities `q` and `r`, symmetric in its arguments.
    pub fn inter(&self, q: usize, r: usize) -> f64 {
        self.inter_weight
            .get(&(q.min(r), q.max(r)))
            .copied()
            .unwrap_or(0.0)
    }
}

fn half_pairs(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

pub fn compute_stats(graph: &Graph, partition: &Partition) -> PartitionStats {
    assert_eq!(partition.len(), graph.vertex_count(), "partition does not cover graph");
    let k = partition.num_communities();
    let mut community_sizes = vec![0usize; k];
    let mut community_degrees = vec![0.0; k];
    let mut community_internal = vec![0.0; k];
    for v in 0..graph.vertex_count() {
        let c = partition.community_of(v);
        community_sizes[c] += graph.size(v);
        community_degrees[c] += graph.degree(v);
    }

    let mut weight_in = 0.0;
    let mut inter_weight: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for &(u, v, w) in graph.edges() {
        let (a, b) = (partition.community_of(u), partition.community_of(v));
        if a == b {
            weight_in += w;
            community_internal[a] += 2.0 * w;
            *inter_weight.entry((a, a)).or_insert(0.0) += 2.0 * w;
        } else {
            *inter_weight.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
        }
    }

    let vertices = graph.base_vertex_count();
    let pairs = half_pairs(vertices);
    let pairs_in: f64 = community_sizes.iter().map(|&s| half_pairs(s)).sum();
    let weight = graph.total_weight();
    PartitionStats {
        vertices,
        weight,
        weight_in,
        weight_out: weight - weight_in,
        pairs,
        pairs_in,
        pairs_out: pairs - pairs_in,
        community_sizes,
        community_degrees,
        community_internal,
        inter_weight,
        sum_dlogd: graph.sum_dlogd(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_triangles() -> Graph {
        Graph::from_simple_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn two_triangles_by_hand() {
        let s = compute_stats(&two_triangles(), &Partition::from_assignment([0, 0, 0, 1, 1, 1]));
        assert_eq!(s.weight, 6.0);
        assert_eq!(s.weight_in, 6.0);
        assert_eq!(s.weight_out, 0.0);
        assert_eq!(s.pairs, 15.0);
        assert_eq!(s.pairs_in, 6.0);
        assert_eq!(s.pairs_out, 9.0);
        assert_eq!(s.community_degrees, vec![6.0, 6.0]);
        assert_eq!(s.community_internal, vec![6.0, 6.0]);
        assert_eq!(s.inter(0, 1), 0.0);
    }

    #[test]
    fn singletons_have_no_intra() {
        let g = two_triangles();
        let s = compute_stats(&g, &Partition::singletons(6));
        assert_eq!(s.weight_in, 0.0);
        assert_eq!(s.pairs_in, 0.0);
        assert!(s.community_internal.iter().all(|&d| d == 0.0));
    }

    fn random_instance() -> impl Strategy<Value = (Graph, Partition)> {
        (2usize..=12).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let np = pairs.len();
            (
                proptest::collection::vec(any::<bool>(), np),
                proptest::collection::vec(0usize..4, n),
            )
                .prop_map(move |(keep, labels)| {
                    let edges: Vec<_> = pairs
                        .iter()
                        .zip(&keep)
                        .filter(|(_, &k)| k)
                        .map(|(&e, _)| e)
                        .collect();
                    (
                        Graph::from_simple_edges(n, &edges).unwrap(),
                        Partition::from_assignment(labels),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn matches_pairwise_enumeration((g, p) in random_instance()) {
            let n = g.vertex_count();
            let s = compute_stats(&g, &p);
            let mut adj = vec![vec![0.0; n]; n];
            for &(u, v, w) in g.edges() {
                adj[u][v] += w;
                adj[v][u] += w;
            }
            let (mut w_in, mut w_out, mut p_in, mut p_all) = (0.0, 0.0, 0.0, 0.0);
            let k = p.num_communities();
            let mut dc = vec![0.0; k];
            let mut din = vec![0.0; k];
            for i in 0..n {
                for j in 0..n {
                    dc[p.community_of(i)] += adj[i][j];
                    if p.community_of(i) == p.community_of(j) {
                        din[p.community_of(i)] += adj[i][j];
                    }
                }
                for j in i + 1..n {
                    p_all += 1.0;
                    if p.community_of(i) == p.community_of(j) {
                        p_in += 1.0;
                        w_in += adj[i][j];
                    } else {
                        w_out += adj[i][j];
                    }
                }
            }
            prop_assert_eq!(s.weight_in, w_in);
            prop_assert_eq!(s.weight_out, w_out);
            prop_assert_eq!(s.pairs_in, p_in);
            prop_assert_eq!(s.pairs, p_all);
            prop_assert_eq!(&s.community_degrees, &dc);
            prop_assert_eq!(&s.community_internal, &din);
            let total: f64 = s.community_degrees.iter().sum();
            prop_assert_eq!(total, 2.0 * s.weight);
            for c in 0..k {
                prop_assert!(s.community_internal[c] <= s.community_degrees[c]);
                prop_assert_eq!(s.inter(c, c), s.community_internal[c]);
            }
        }

        #[test]
        fn contraction_preserves_aggregates((g, p) in random_instance()) {
            let s = compute_stats(&g, &p);
            let c = g.contract(&p);
            let sc = compute_stats(&c, &Partition::singletons(c.vertex_count()));
            prop_assert_eq!(sc.weight, s.weight);
            prop_assert_eq!(&sc.community_degrees, &s.community_degrees);
            prop_assert_eq!(&sc.community_internal, &s.community_internal);
            prop_assert_eq!(sc.pairs_in, s.pairs_in);
            prop_assert_eq!(sc.pairs, s.pairs);
            prop_assert_eq!(sc.sum_dlogd, s.sum_dlogd);
        }
    }
}
