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

//! LFR-style benchmark graphs with planted communities.
//!
//! Degrees and community sizes follow truncated power laws, vertices are
//! placed so that their internal degree fits their community, and edges are
//! wired by configuration-model matching followed by rewiring.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

const SIZE_ATTEMPTS: usize = 1000;
const REWIRE_BUDGET_PER_EDGE: usize = 10;
const GRAPHICAL_ATTEMPTS: usize = 50;

struct Draw {
    sizes: Vec<usize>,
    cap: usize,
    degrees: Vec<usize>,
    internal: Vec<usize>,
    community: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfrConfig {
    pub n: usize,
    /// Exponent of the degree distribution.
    pub degree_exponent: f64,
    pub mean_degree: f64,
    /// Defaults to `min(n − 1, 10·mean_degree)`.
    pub max_degree: Option<usize>,
    /// Exponent of the community size distribution.
    pub size_exponent: f64,
    pub min_community: usize,
    pub max_community: usize,
    /// Target fraction of each vertex's edges leaving its community.
    pub mixing: f64,
    pub seed: u64,
}

impl Default for LfrConfig {
    fn default() -> Self {
        LfrConfig {
            n: 1000,
            degree_exponent: 2.5,
            mean_degree: 30.0,
            max_degree: None,
            size_exponent: 1.5,
            min_community: 20,
            max_community: 100,
            mixing: 0.2,
            seed: 0,
        }
    }
}

impl LfrConfig {
    pub fn max_degree(&self) -> usize {
        self.max_degree.unwrap_or_else(|| {
            let cap = (10.0 * self.mean_degree).floor() as usize;
            cap.min(self.n.saturating_sub(1))
        })
    }

    /// Largest degree whose rounded internal share still fits in a
    /// community of `largest` vertices.
    pub fn degree_cap(&self, largest: usize) -> usize {
        let cap = self.max_degree();
        if self.mixing >= 1.0 {
            return cap;
        }
        let fit = ((largest as f64 - 0.5) / (1.0 - self.mixing)).ceil() as usize - 1;
        cap.min(fit)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.min_community == 0 {
            return fail("minimum community size must be positive".into());
        }
        if self.n < self.min_community {
            return fail(format!(
                "n = {} is smaller than the minimum community size {}",
                self.n, self.min_community
            ));
        }
        if self.min_community > self.max_community || self.max_community > self.n {
            return fail(format!(
                "community size bounds [{}, {}] do not fit n = {}",
                self.min_community, self.max_community, self.n
            ));
        }
        if !(0.0..=1.0).contains(&self.mixing) {
            return fail(format!("mixing {} is outside [0, 1]", self.mixing));
        }
        if !(self.degree_exponent > 1.0) || !(self.size_exponent > 1.0) {
            return fail("power-law exponents must exceed 1".into());
        }
        let d_max = self.max_degree();
        if !(self.mean_degree >= 1.0 && self.mean_degree < d_max as f64) || d_max + 1 > self.n {
            return fail(format!(
                "mean degree {} must lie in [1, {d_max}) with maximum degree below n",
                self.mean_degree
            ));
        }
        Ok(())
    }
}

/// Continuous power law with density `∝ x^−g` on `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
struct PowerLaw {
    lo: f64,
    hi: f64,
    g: f64,
}

impl PowerLaw {
    fn cdf(&self, x: f64) -> f64 {
        let e = 1.0 - self.g;
        let x = x.clamp(self.lo, self.hi);
        (x.powf(e) - self.lo.powf(e)) / (self.hi.powf(e) - self.lo.powf(e))
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.hi <= self.lo {
            return self.lo;
        }
        let e = 1.0 - self.g;
        let (a, b) = (self.lo.powf(e), self.hi.powf(e));
        let u: f64 = rng.gen();
        (a + u * (b - a)).powf(1.0 / e).clamp(self.lo, self.hi)
    }

    /// Draw rounded half-up to an integer.
    fn sample_rounded(&self, rng: &mut impl Rng) -> usize {
        (self.sample(rng) + 0.5).floor() as usize
    }

    /// Exact mean of the rounded variable.
    fn rounded_mean(&self) -> f64 {
        if self.hi <= self.lo {
            return (self.lo + 0.5).floor();
        }
        let first = (self.lo + 0.5).floor() as usize;
        let last = (self.hi + 0.5).floor() as usize;
        (first..=last)
            .map(|k| {
                let k = k as f64;
                k * (self.cdf(k + 0.5) - self.cdf(k - 0.5))
            })
            .sum()
    }
}

/// Lower cutoff `x_lo` such that rounded draws on `[x_lo, cap]` have mean
/// `target`.
fn calibrate_lower(g: f64, cap: f64, target: f64) -> Result<f64> {
    let mean = |lo: f64| PowerLaw { lo, hi: cap, g }.rounded_mean();
    if target > cap || mean(1.0) > target * 1.02 {
        return Err(Error::Config(format!(
            "mean degree {target} cannot be reached with maximum degree {cap}"
        )));
    }
    if mean(cap) <= target {
        return Ok(cap);
    }
    let (mut a, mut b) = (1.0, cap);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mean(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-9 {
            break;
        }
    }
    let lo = 0.5 * (a + b);
    if (mean(lo) - target).abs() > 0.02 * target {
        return Err(Error::Config(format!(
            "mean degree {target} cannot be calibrated below maximum degree {cap}"
        )));
    }
    Ok(lo)
}

/// Degree sequence from a rounded power law whose mean matches the target,
/// capped so internal degrees fit the largest admissible community. The
/// total is made even by nudging one vertex.
pub fn sample_degrees(config: &LfrConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    config.validate()?;
    sample_degrees_capped(config, config.degree_cap(config.max_community), rng)
}

fn sample_degrees_capped(config: &LfrConfig, cap: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let lo = calibrate_lower(config.degree_exponent, cap as f64, config.mean_degree)?;
    let law = PowerLaw {
        lo,
        hi: cap as f64,
        g: config.degree_exponent,
    };
    let mut degrees: Vec<usize> = (0..config.n).map(|_| law.sample_rounded(rng)).collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        let v = rng.gen_range(0..config.n);
        if degrees[v] < cap {
            degrees[v] += 1;
        } else {
            degrees[v] -= 1;
        }
    }
    Ok(degrees)
}

/// Community sizes from a rounded power law, summing to exactly `n`.
pub fn sample_community_sizes(config: &LfrConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    config.validate()?;
    let law = PowerLaw {
        lo: config.min_community as f64,
        hi: config.max_community as f64,
        g: config.size_exponent,
    };
    for _ in 0..SIZE_ATTEMPTS {
        let mut sizes = Vec::new();
        let mut total = 0;
        while total < config.n {
            let s = law.sample_rounded(rng);
            sizes.push(s);
            total += s;
        }
        let last = sizes.pop().expect("at least one draw");
        let rest = config.n - (total - last);
        if rest >= config.min_community {
            sizes.push(rest);
            return Ok(sizes);
        }
    }
    Err(Error::Config(format!(
        "no community size list in [{}, {}] sums to {} after {SIZE_ATTEMPTS} attempts",
        config.min_community, config.max_community, config.n
    )))
}

fn internal_degree(degree: usize, mixing: f64) -> usize {
    ((1.0 - mixing) * degree as f64 + 0.5).floor() as usize
}

/// Largest violation of the Erdős–Gallai inequalities by a degree sequence
/// sorted in decreasing order; 0 when the sequence is graphical up to parity.
fn eg_deficit(degrees: &[usize]) -> usize {
    let s = degrees.len();
    let mut prefix = vec![0usize; s + 1];
    for (i, &d) in degrees.iter().enumerate() {
        prefix[i + 1] = prefix[i] + d;
    }
    // `at_least` counts entries `>= k`; it only shrinks as `k` grows.
    let mut at_least = s;
    let mut worst = 0;
    for k in 1..=s {
        while at_least > 0 && degrees[at_least - 1] < k {
            at_least -= 1;
        }
        let tail = if at_least <= k {
            prefix[s] - prefix[k]
        } else {
            (at_least - k) * k + prefix[s] - prefix[at_least]
        };
        worst = worst.max(prefix[k].saturating_sub(k * (k - 1) + tail));
    }
    worst
}

#[cfg(test)]
fn graphical(degrees: &[usize]) -> bool {
    eg_deficit(degrees) == 0
}

fn deficit_of(members: &[usize], internal: &[usize]) -> usize {
    let mut seq: Vec<usize> = members.iter().map(|&v| internal[v]).collect();
    seq.sort_unstable_by(|a, b| b.cmp(a));
    eg_deficit(&seq)
}

/// Swaps vertices between communities until every internal degree
/// sequence is graphical or no swap helps. A swap moves a vertex out of a
/// failing community in exchange for one with a smaller internal degree,
/// and is kept when the failing community's deficit drops while the other
/// community stays graphical.
/// Returns the total deficit left.
fn balance(community: &mut [usize], internal: &[usize], sizes: &[usize], rng: &mut ChaCha8Rng) -> usize {
    let mut members = vec![Vec::new(); sizes.len()];
    for (v, &c) in community.iter().enumerate() {
        members[c].push(v);
    }
    let mut deficit: Vec<usize> = members.iter().map(|m| deficit_of(m, internal)).collect();
    for _ in 0..community.len() {
        let Some(a) = (0..sizes.len()).find(|&c| deficit[c] > 0) else {
            return 0;
        };
        let mut out: Vec<usize> = members[a].clone();
        out.sort_by(|&x, &y| internal[y].cmp(&internal[x]));
        let mut others: Vec<usize> = (0..sizes.len()).filter(|&c| c != a).collect();
        others.shuffle(rng);
        let mut done = false;
        'search: for &h in out.iter().take(8) {
            for &b in &others {
                if sizes[b] <= internal[h] {
                    continue;
                }
                let mut ins = members[b].clone();
                ins.shuffle(rng);
                for w in ins {
                    if internal[w] >= internal[h] || internal[w] >= sizes[a] {
                        continue;
                    }
                    let mut na = members[a].clone();
                    let mut nb = members[b].clone();
                    let ia = na.iter().position(|&x| x == h).expect("member");
                    let ib = nb.iter().position(|&x| x == w).expect("member");
                    na[ia] = w;
                    nb[ib] = h;
                    let (da, db) = (deficit_of(&na, internal), deficit_of(&nb, internal));
                    if da < deficit[a] && db == 0 {
                        community[h] = b;
                        community[w] = a;
                        members[a] = na;
                        members[b] = nb;
                        deficit[a] = da;
                        deficit[b] = db;
                        done = true;
                        break 'search;
                    }
                }
            }
        }
        if !done {
            break;
        }
    }
    deficit.iter().sum()
}

/// Places vertices into communities so that every internal degree is below
/// the community size. Vertices go in decreasing internal degree to a
/// random eligible community, weighted by free capacity. A vertex that fits
/// nowhere goes to the largest community with room, and its internal degree
/// is cut to that size minus one.
fn place(internal: &mut [usize], sizes: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..internal.len()).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| internal[b].cmp(&internal[a]));
    let mut free = sizes.to_vec();
    let mut community = vec![0; internal.len()];
    for &v in &order {
        let eligible: Vec<usize> = (0..sizes.len())
            .filter(|&c| free[c] > 0 && sizes[c] > internal[v])
            .collect();
        let capacity: usize = eligible.iter().map(|&c| free[c]).sum();
        let chosen = if capacity == 0 {
            let largest = (0..sizes.len())
                .filter(|&c| free[c] > 0)
                .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
                .expect("sizes sum to n");
            internal[v] = sizes[largest] - 1;
            largest
        } else {
            let mut pick = rng.gen_range(0..capacity);
            *eligible
                .iter()
                .find(|&&c| {
                    if pick < free[c] {
                        true
                    } else {
                        pick -= free[c];
                        false
                    }
                })
                .expect("pick below capacity")
        };
        free[chosen] -= 1;
        community[v] = chosen;
    }
    community
}

/// True when every vertex can get a community larger than its internal
/// degree.
fn placeable(internal: &[usize], sizes: &[usize]) -> bool {
    let mut demand = internal.to_vec();
    demand.sort_unstable_by(|a, b| b.cmp(a));
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let (mut room, mut next) = (0, 0);
    for (placed, &d) in demand.iter().enumerate() {
        while next < sizes.len() && sizes[next] > d {
            room += sizes[next];
            next += 1;
        }
        if placed >= room {
            return false;
        }
    }
    true
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Random stub matching followed by degree-preserving swaps that remove
/// loops, repeated pairs and, for the external pool, pairs inside a
/// community.
struct Wiring<'a> {
    community: &'a [usize],
    adjacency: Vec<Vec<usize>>,
    counts: BTreeMap<(usize, usize), u32>,
    swaps: usize,
}

impl<'a> Wiring<'a> {
    fn new(community: &'a [usize]) -> Self {
        Wiring {
            community,
            adjacency: vec![Vec::new(); community.len()],
            counts: BTreeMap::new(),
            swaps: 0,
        }
    }

    fn count(&self, u: usize, v: usize) -> u32 {
        self.counts.get(&key(u, v)).copied().unwrap_or(0)
    }

    fn bad(&self, (u, v): (usize, usize), external: bool) -> bool {
        u == v || self.count(u, v) > 1 || (external && self.community[u] == self.community[v])
    }

    /// Whether `u–v` may be added to the pool without breaking simplicity.
    fn allowed(&self, u: usize, v: usize, external: bool) -> bool {
        u != v && self.count(u, v) == 0 && (self.community[u] != self.community[v]) == external
    }

    fn add(&mut self, (u, v): (usize, usize)) {
        *self.counts.entry(key(u, v)).or_insert(0) += 1;
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
    }

    fn remove(&mut self, (u, v): (usize, usize)) {
        let k = key(u, v);
        let c = self.counts.get_mut(&k).expect("edge present");
        *c -= 1;
        if *c == 0 {
            self.counts.remove(&k);
        }
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.adjacency[a].iter().position(|&x| x == b).expect("edge present");
            self.adjacency[a].swap_remove(pos);
        }
    }

    fn match_stubs(&mut self, mut stubs: Vec<usize>, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
        stubs.shuffle(rng);
        let edges: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        for &e in &edges {
            self.add(e);
        }
        edges
    }

    /// Replaces bad edge `u–v` and a pool edge `w–y` by `u–w` and `v–y`.
    ///
    /// Internal pools search every candidate in random order; the external
    /// pool samples a single candidate per call.
    fn try_swap(
        &mut self,
        (u, v): (usize, usize),
        members: &[usize],
        external: bool,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let (u, v) = if rng.gen::<bool>() { (u, v) } else { (v, u) };
        let mut candidates: Vec<usize> = if external {
            vec![rng.gen_range(0..self.community.len())]
        } else {
            members.iter().copied().filter(|&w| w != v && self.allowed(u, w, false)).collect()
        };
        candidates.shuffle(rng);
        for w in candidates {
            if w == v || !self.allowed(u, w, external) {
                continue;
            }
            let mut ends = self.adjacency[w].clone();
            if external {
                ends = ends.choose(rng).into_iter().copied().collect();
            } else {
                ends.shuffle(rng);
            }
            for y in ends {
                let pool_edge = (self.community[w] != self.community[y]) == external;
                if pool_edge && key(u, w) != key(v, y) && self.allowed(v, y, external) {
                    self.remove((u, v));
                    self.remove((w, y));
                    self.add((u, w));
                    self.add((v, y));
                    self.swaps += 1;
                    return true;
                }
            }
        }
        false
    }

    /// Repairs every bad edge of one matched pool, spending at most
    /// `budget` swap attempts. Edges still bad afterwards are dropped;
    /// their number is returned.
    fn repair(
        &mut self,
        matched: &[(usize, usize)],
        members: &[usize],
        external: bool,
        mut budget: usize,
        rng: &mut ChaCha8Rng,
    ) -> usize {
        let mut dropped = 0;
        for &e in matched {
            while self.count(e.0, e.1) > 0 && self.bad(e, external) && budget > 0 {
                budget -= 1;
                self.try_swap(e, members, external, rng);
            }
            if self.count(e.0, e.1) > 0 && self.bad(e, external) {
                self.remove(e);
                dropped += 1;
            }
        }
        dropped
    }

    /// Replaces the internal edges of `members` by a Havel–Hakimi
    /// realization of `target` followed by random degree-preserving swaps.
    /// Returns the stubs left over when `target` is not graphical, as
    /// `(vertex, count)` pairs.
    fn rebuild(
        &mut self,
        members: &[usize],
        target: &[usize],
        budget: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<(usize, usize)> {
        let c = self.community[members[0]];
        let old: Vec<(usize, usize)> = self
            .counts
            .iter()
            .filter(|(&(u, v), _)| self.community[u] == c && self.community[v] == c)
            .flat_map(|(&e, &k)| std::iter::repeat_n(e, k as usize))
            .collect();
        for e in old {
            self.remove(e);
        }

        let mut residual: Vec<(usize, usize)> = members.iter().map(|&v| (target[v], v)).collect();
        let mut edges = Vec::new();
        loop {
            residual.sort_unstable_by(|a, b| b.cmp(a));
            let (r, u) = residual[0];
            if r == 0 {
                break;
            }
            if r >= residual.len() || residual[r].0 == 0 {
                break;
            }
            residual[0].0 = 0;
            for slot in residual.iter_mut().skip(1).take(r) {
                slot.0 -= 1;
                edges.push((u, slot.1));
            }
        }
        let unrealized: Vec<(usize, usize)> =
            residual.iter().filter(|&&(r, _)| r > 0).map(|&(r, v)| (v, r)).collect();
        for &e in &edges {
            self.add(e);
        }

        for _ in 0..budget {
            if edges.len() < 2 {
                break;
            }
            let i = rng.gen_range(0..edges.len());
            let j = rng.gen_range(0..edges.len());
            if i == j {
                continue;
            }
            let ((a, b), (x, y)) = (edges[i], edges[j]);
            let (p, q) = if rng.gen::<bool>() { ((a, x), (b, y)) } else { ((a, y), (b, x)) };
            if key(p.0, p.1) != key(q.0, q.1)
                && self.allowed(p.0, p.1, false)
                && self.allowed(q.0, q.1, false)
            {
                self.remove(edges[i]);
                self.remove(edges[j]);
                self.add(p);
                self.add(q);
                edges[i] = p;
                edges[j] = q;
                self.swaps += 1;
            }
        }
        unrealized
    }

    fn into_edges(self) -> Vec<(usize, usize)> {
        self.counts.into_keys().collect()
    }
}

/// Summary of a generated benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LfrMetadata {
    pub n: usize,
    pub edges: usize,
    pub communities: usize,
    pub target_mixing: f64,
    pub realized_mixing: f64,
    pub target_mean_degree: f64,
    pub realized_mean_degree: f64,
    pub degree_cap: usize,
    pub swaps: usize,
    pub dropped_edges: usize,
    /// Internal stubs moved to the external pool because the community's
    /// internal degree sequence was not graphical.
    pub rerouted_stubs: usize,
    /// Set when the rewiring budget ran out and edges had to be dropped.
    pub warning: bool,
}

#[derive(Debug, Clone)]
pub struct LfrBenchmark {
    pub graph: Graph,
    pub partition: Partition,
    /// Sampled degree of every vertex before rewiring.
    pub degrees: Vec<usize>,
    /// Community sizes in sampling order.
    pub community_sizes: Vec<usize>,
    pub metadata: LfrMetadata,
}

/// Generates a simple graph and its planted partition.
///
/// Community sizes are drawn first so the degree cap can follow the largest
/// community actually drawn; draws whose vertices cannot all be placed are
/// repeated.
pub fn generate(config: &LfrConfig) -> Result<LfrBenchmark> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // Draws are repeated until every vertex fits (see `placeable`) and every
    // community's internal degree sequence is graphical after balancing.
    // Failing that, the draw with the smallest deficit is kept.
    let mut best: Option<((bool, usize), Draw)> = None;
    let mut placed_attempts = 0;
    for _ in 0..SIZE_ATTEMPTS {
        let sizes = sample_community_sizes(config, &mut rng)?;
        let cap = config.degree_cap(*sizes.iter().max().expect("n > 0"));
        let Ok(degrees) = sample_degrees_capped(config, cap, &mut rng) else {
            continue;
        };
        let mut internal: Vec<usize> =
            degrees.iter().map(|&d| internal_degree(d, config.mixing)).collect();
        let fits = placeable(&internal, &sizes);
        if !fits && best.is_some() {
            continue;
        }
        let mut community = place(&mut internal, &sizes, &mut rng);
        let left = balance(&mut community, &internal, &sizes, &mut rng);
        let score = (!fits, left);
        if best.as_ref().is_none_or(|(b, _)| score < *b) {
            best = Some((score, Draw { sizes, cap, degrees, internal, community }));
        }
        if fits {
            placed_attempts += 1;
        }
        if score == (false, 0) || placed_attempts >= GRAPHICAL_ATTEMPTS {
            break;
        }
    }
    let Draw { sizes, cap, degrees: sampled, mut internal, community } = best
        .map(|(_, draw)| draw)
        .ok_or_else(|| {
            Error::Config(format!(
                "mean degree {} cannot be reached with communities of at most {}",
                config.mean_degree, config.max_community
            ))
        })?;
    let mut degrees = sampled.clone();

    let mut members = vec![Vec::new(); sizes.len()];
    for (v, &c) in community.iter().enumerate() {
        members[c].push(v);
    }
    for group in &members {
        if group.iter().map(|&v| internal[v]).sum::<usize>() % 2 == 1 {
            // Lowering the largest entry keeps a graphical sequence graphical.
            let v = group
                .iter()
                .max_by_key(|&&v| internal[v])
                .expect("odd sum has a positive term");
            internal[*v] -= 1;
            // Without mixing the leftover stub is dropped instead of
            // crossing to another community.
            if config.mixing == 0.0 {
                degrees[*v] -= 1;
            }
        }
    }

    let mut wiring = Wiring::new(&community);
    let mut dropped = 0;
    let mut rerouted = 0;
    for group in &members {
        let stubs: Vec<usize> = group.iter().flat_map(|&v| std::iter::repeat_n(v, internal[v])).collect();
        let matched = wiring.match_stubs(stubs, &mut rng);
        let budget = REWIRE_BUDGET_PER_EDGE * matched.len();
        if wiring.repair(&matched, group, false, budget, &mut rng) > 0 {
            // Stubs a non-graphical sequence cannot use inside the
            // community go to the external pool instead.
            for (v, left) in wiring.rebuild(group, &internal, budget, &mut rng) {
                internal[v] -= left;
                rerouted += left;
            }
        }
    }
    let stubs: Vec<usize> = (0..config.n)
        .flat_map(|v| std::iter::repeat_n(v, degrees[v] - internal[v]))
        .collect();
    let matched = wiring.match_stubs(stubs, &mut rng);
    let budget = REWIRE_BUDGET_PER_EDGE * matched.len();
    dropped += wiring.repair(&matched, &[], true, budget, &mut rng);

    let swaps = wiring.swaps;
    let edges = wiring.into_edges();
    let graph = Graph::from_simple_edges(config.n, &edges)?;
    let crossing = edges.iter().filter(|&&(u, v)| community[u] != community[v]).count();
    let m = edges.len();
    let metadata = LfrMetadata {
        n: config.n,
        edges: m,
        communities: sizes.len(),
        target_mixing: config.mixing,
        realized_mixing: if m > 0 { crossing as f64 / m as f64 } else { 0.0 },
        target_mean_degree: config.mean_degree,
        realized_mean_degree: 2.0 * m as f64 / config.n as f64,
        degree_cap: cap,
        swaps,
        dropped_edges: dropped,
        rerouted_stubs: rerouted,
        warning: dropped > 0,
    };
    Ok(LfrBenchmark {
        graph,
        partition: Partition::from_assignment(community),
        degrees: sampled,
        community_sizes: sizes,
        metadata,
    })
}
