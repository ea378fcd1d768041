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

//! Multi-level Louvain optimization for any fixed-parameter quality model.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::likelihood::{ilfr_community_term, ilfrs_community_term};
use crate::models::QualityModel;
use crate::partition::Partition;
use crate::stats::compute_stats;

/// A level ends once a pass gains less than this fraction of the quality.
const MIN_RELATIVE_PASS_GAIN: f64 = 1e-9;

/// Local-move state on one level of the hierarchy.
///
/// Community ids are slots `0..n`; a slot may become empty during passes.
#[derive(Debug, Clone)]
pub struct LouvainState<'g> {
    graph: &'g Graph,
    model: QualityModel,
    assignment: Vec<usize>,
    comm_degree: Vec<f64>,
    comm_internal: Vec<f64>,
    comm_size: Vec<usize>,
    weight_in: f64,
    pairs_in: f64,
    sum_sq_degree: f64,
    pairs: f64,
    // scratch for neighbour weights, indexed by community
    neighbor_weight: Vec<f64>,
    touched: Vec<usize>,
}

/// Aggregate changes caused by moving one vertex between communities.
struct MoveDelta {
    weight_in: f64,
    pairs_in: f64,
    sum_sq: f64,
    from: (f64, f64, f64, f64),
    to: (f64, f64, f64, f64),
}

impl<'g> LouvainState<'g> {
    /// Starts from the singleton partition of `graph`.
    pub fn new(graph: &'g Graph, model: QualityModel) -> Result<Self> {
        Self::with_partition(graph, model, &Partition::singletons(graph.vertex_count()))
    }

    /// Starts from an arbitrary partition. Community ids are taken from the
    /// normalized partition.
    pub fn with_partition(graph: &'g Graph, model: QualityModel, partition: &Partition) -> Result<Self> {
        model.validate()?;
        if graph.total_weight() <= 0.0 {
            return Err(Error::Validation("graph has no edges".into()));
        }
        let n = graph.vertex_count();
        if partition.len() != n {
            return Err(Error::Validation(format!(
                "partition covers {} vertices, graph has {n}",
                partition.len()
            )));
        }
        let stats = compute_stats(graph, partition);
        let slots = n.max(partition.num_communities());
        let mut comm_degree = stats.community_degrees.clone();
        let mut comm_internal = stats.community_internal.clone();
        let mut comm_size = stats.community_sizes.clone();
        comm_degree.resize(slots, 0.0);
        comm_internal.resize(slots, 0.0);
        comm_size.resize(slots, 0);
        Ok(LouvainState {
            graph,
            model,
            assignment: partition.assignment().to_vec(),
            comm_degree,
            comm_internal,
            comm_size,
            weight_in: stats.weight_in,
            pairs_in: stats.pairs_in,
            sum_sq_degree: stats.sum_sq_degree(),
            pairs: stats.pairs,
            neighbor_weight: vec![0.0; slots],
            touched: Vec::new(),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn model(&self) -> &QualityModel {
        &self.model
    }

    pub fn community_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    /// Number of community slots, including empty ones.
    pub fn num_slots(&self) -> usize {
        self.comm_degree.len()
    }

    pub fn community_degree(&self, c: usize) -> f64 {
        self.comm_degree[c]
    }

    pub fn community_internal(&self, c: usize) -> f64 {
        self.comm_internal[c]
    }

    pub fn community_size(&self, c: usize) -> usize {
        self.comm_size[c]
    }

    pub fn weight_in(&self) -> f64 {
        self.weight_in
    }

    pub fn pairs_in(&self) -> f64 {
        self.pairs_in
    }

    pub fn sum_sq_degree(&self) -> f64 {
        self.sum_sq_degree
    }

    /// Current partition with normalized ids.
    pub fn partition(&self) -> Partition {
        Partition::from_assignment(self.assignment.iter().copied())
    }

    /// Quality of the current partition, recomputed from scratch.
    pub fn quality(&self) -> f64 {
        self.model
            .evaluate(&compute_stats(self.graph, &self.partition()))
            .expect("model validated at construction")
    }

    fn check(&self, vertex: usize, target: usize) -> Result<()> {
        if vertex >= self.graph.vertex_count() {
            return Err(Error::Domain(format!("unknown vertex {vertex}")));
        }
        if target >= self.num_slots() {
            return Err(Error::Domain(format!("unknown community {target}")));
        }
        Ok(())
    }

    fn weights_to(&self, vertex: usize, a: usize, b: usize) -> (f64, f64) {
        let (mut to_a, mut to_b) = (0.0, 0.0);
        for &(u, w) in self.graph.neighbors(vertex) {
            let c = self.assignment[u];
            if c == a {
                to_a += w;
            } else if c == b {
                to_b += w;
            }
        }
        (to_a, to_b)
    }

    fn delta(&self, vertex: usize, target: usize, to_from: f64, to_target: f64) -> MoveDelta {
        let from = self.assignment[vertex];
        let d = self.graph.degree(vertex);
        let l = self.graph.loop_weight(vertex);
        let s = self.graph.size(vertex) as f64;
        let (da, db) = (self.comm_degree[from], self.comm_degree[target]);
        let (ia, ib) = (self.comm_internal[from], self.comm_internal[target]);
        let (sa, sb) = (self.comm_size[from] as f64, self.comm_size[target] as f64);
        MoveDelta {
            weight_in: to_target - to_from,
            pairs_in: s * sb - s * (sa - s),
            sum_sq: 2.0 * d * (db - da) + 2.0 * d * d,
            from: (ia, da, ia - 2.0 * (to_from + l), da - d),
            to: (ib, db, ib + 2.0 * (to_target + l), db + d),
        }
    }

    fn gain_of(&self, delta: &MoveDelta) -> f64 {
        let m = self.graph.total_weight();
        let two_m = 2.0 * m;
        let pair = |f: &dyn Fn(f64, f64) -> f64| {
            let (ia, da, ia2, da2) = delta.from;
            let (ib, db, ib2, db2) = delta.to;
            (f(ia2, da2) - f(ia, da)) + (f(ib2, db2) - f(ib, db))
        };
        match self.model {
            QualityModel::SimpleModularity { resolution } => {
                let expected = if self.pairs > 0.0 {
                    delta.pairs_in * m / self.pairs
                } else {
                    0.0
                };
                (delta.weight_in - resolution * expected) / m
            }
            QualityModel::Modularity { resolution } => {
                delta.weight_in / m - resolution * delta.sum_sq / (4.0 * m * m)
            }
            QualityModel::Ppm { p_in, p_out } => {
                delta.weight_in * (p_in.ln() - p_out.ln()) - delta.pairs_in * (p_in - p_out)
            }
            QualityModel::Dcppm { p_in, p_out } => {
                delta.weight_in * (p_in.ln() - p_out.ln()) - (p_in - p_out) / (4.0 * m) * delta.sum_sq
            }
            QualityModel::Ilfr { mu } => {
                pair(&|i, d| ilfr_community_term(i, d, mu, two_m))
                    - delta.weight_in * (mu.ln() - two_m.ln())
            }
            QualityModel::Ilfrs { mu } => {
                delta.weight_in * ((1.0 - mu).ln() - mu.ln() + two_m.ln())
                    - pair(&|i, d| ilfrs_community_term(i, d))
            }
        }
    }

    /// Change in quality if `vertex` moved to community `target`.
    pub fn move_gain(&self, vertex: usize, target: usize) -> Result<f64> {
        self.check(vertex, target)?;
        let from = self.assignment[vertex];
        if from == target {
            return Ok(0.0);
        }
        let (to_from, to_target) = self.weights_to(vertex, from, target);
        Ok(self.gain_of(&self.delta(vertex, target, to_from, to_target)))
    }

    /// Moves `vertex` to `target` and returns the gain.
    pub fn apply_move(&mut self, vertex: usize, target: usize) -> Result<f64> {
        self.check(vertex, target)?;
        let from = self.assignment[vertex];
        if from == target {
            return Ok(0.0);
        }
        let (to_from, to_target) = self.weights_to(vertex, from, target);
        let delta = self.delta(vertex, target, to_from, to_target);
        let gain = self.gain_of(&delta);
        self.commit(vertex, target, &delta);
        Ok(gain)
    }

    fn commit(&mut self, vertex: usize, target: usize, delta: &MoveDelta) {
        let from = self.assignment[vertex];
        let s = self.graph.size(vertex);
        self.weight_in += delta.weight_in;
        self.pairs_in += delta.pairs_in;
        self.sum_sq_degree += delta.sum_sq;
        (self.comm_internal[from], self.comm_degree[from]) = (delta.from.2, delta.from.3);
        (self.comm_internal[target], self.comm_degree[target]) = (delta.to.2, delta.to.3);
        self.comm_size[from] -= s;
        self.comm_size[target] += s;
        self.assignment[vertex] = target;
    }

    /// Best strictly positive move for `vertex` among neighbouring
    /// communities, ties going to the lowest id.
    fn best_move(&mut self, vertex: usize) -> Option<(usize, f64, MoveDelta)> {
        let from = self.assignment[vertex];
        for &(u, w) in self.graph.neighbors(vertex) {
            let c = self.assignment[u];
            if self.neighbor_weight[c] == 0.0 && !self.touched.contains(&c) {
                self.touched.push(c);
            }
            self.neighbor_weight[c] += w;
        }
        let mut candidates = std::mem::take(&mut self.touched);
        candidates.sort_unstable();
        let to_from = self.neighbor_weight[from];
        let mut best: Option<(usize, f64, MoveDelta)> = None;
        for &c in &candidates {
            if c == from {
                continue;
            }
            let delta = self.delta(vertex, c, to_from, self.neighbor_weight[c]);
            let gain = self.gain_of(&delta);
            if gain > 0.0 && best.as_ref().is_none_or(|b| gain > b.1) {
                best = Some((c, gain, delta));
            }
        }
        for &c in &candidates {
            self.neighbor_weight[c] = 0.0;
        }
        candidates.clear();
        self.touched = candidates;
        best
    }

    /// Runs local-move passes until one accepts no move. Returns the number
    /// of accepted moves and their total gain.
    pub fn optimize(&mut self, rng: &mut ChaCha8Rng) -> (usize, f64) {
        let mut order: Vec<usize> = (0..self.graph.vertex_count()).collect();
        let scale = self.quality().abs().max(1.0);
        let (mut moves, mut total) = (0, 0.0);
        loop {
            order.shuffle(rng);
            let (mut pass_moves, mut pass_gain) = (0, 0.0);
            for &v in &order {
                if let Some((target, gain, delta)) = self.best_move(v) {
                    self.commit(v, target, &delta);
                    pass_moves += 1;
                    pass_gain += gain;
                }
            }
            moves += pass_moves;
            total += pass_gain;
            if pass_moves == 0 || pass_gain <= MIN_RELATIVE_PASS_GAIN * scale {
                return (moves, total);
            }
        }
    }
}

/// Louvain optimization of `model` on `graph`, deterministic in `seed`.
pub fn louvain(graph: &Graph, model: &QualityModel, seed: u64) -> Result<Partition> {
    let levels = louvain_levels(graph, model, seed)?;
    Ok(levels
        .into_iter()
        .last()
        .unwrap_or_else(|| Partition::singletons(graph.vertex_count())))
}

/// Like [`louvain`], but returns the flattened partition reached at the end
/// of every level that moved at least one vertex.
pub fn louvain_levels(graph: &Graph, model: &QualityModel, seed: u64) -> Result<Vec<Partition>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = Partition::singletons(graph.vertex_count());
    let mut level = graph.clone();
    let mut levels = Vec::new();
    loop {
        let mut state = LouvainState::new(&level, *model)?;
        let (moves, _) = state.optimize(&mut rng);
        if moves == 0 {
            return Ok(levels);
        }
        let upper = state.partition();
        flat = flat.compose(&upper);
        levels.push(flat.clone());
        if upper.num_communities() == level.vertex_count() {
            return Ok(levels);
        }
        level = level.contract(&upper);
    }
}
