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

//! Parameter search around Louvain: the iterative and maximization
//! strategies.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::louvain::louvain;
use crate::models::{fit, fit_clamped, EstimatedParams, Fit, ModelKind};
use crate::partition::Partition;
use crate::stats::compute_stats;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterativeConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub detect_cycles: bool,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        IterativeConfig {
            max_iterations: 50,
            tolerance: 1e-4,
            detect_cycles: true,
        }
    }
}

impl IterativeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Resolutions tried for PPM and DCPPM.
    pub gamma_grid: Vec<f64>,
    /// Mixing values tried for ILFR and ILFRS.
    pub mu_grid: Vec<f64>,
    pub seeds_per_point: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            gamma_grid: log_grid(0.1, 10.0, 40),
            mu_grid: (1..=39).map(|i| i as f64 * 0.025).collect(),
            seeds_per_point: 1,
        }
    }
}

/// `points` values spaced evenly in log scale from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

impl GridConfig {
    pub fn grid_for(&self, kind: ModelKind) -> &[f64] {
        if kind.uses_mixing() {
            &self.mu_grid
        } else {
            &self.gamma_grid
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds_per_point == 0 {
            return Err(Error::Config("seeds_per_point must be at least 1".into()));
        }
        if self.gamma_grid.is_empty() || self.mu_grid.is_empty() {
            return Err(Error::Config("parameter grids must be non-empty".into()));
        }
        if let Some(g) = self.gamma_grid.iter().find(|&&g| !(g > 0.0 && g.is_finite())) {
            return Err(Error::Config(format!("resolution {g} is not positive")));
        }
        if let Some(m) = self.mu_grid.iter().find(|&&m| !(m > 0.0 && m < 1.0)) {
            return Err(Error::Config(format!("mixing value {m} is outside (0, 1)")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Converged,
    Cycle,
    MaxIters,
    GridExhausted,
    ConvergedDegenerate,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::Cycle => "cycle",
            StopReason::MaxIters => "max-iters",
            StopReason::GridExhausted => "grid-exhausted",
            StopReason::ConvergedDegenerate => "converged-degenerate",
        }
    }
}

/// One Louvain run inside a strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Resolution or mixing value handed to Louvain.
    pub param: f64,
    pub seed: u64,
    pub communities: usize,
    /// `None` when the partition admits no estimate.
    pub loglik: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyResult {
    pub kind: ModelKind,
    pub partition: Partition,
    /// Parameters estimated from `partition`.
    pub params: EstimatedParams,
    pub loglik: f64,
    /// Parameter handed to the Louvain run that produced `partition`.
    pub search_param: f64,
    pub evaluations: usize,
    pub stop_reason: StopReason,
    /// Highest log-likelihood among all runs.
    pub best_loglik: f64,
    pub trace: Vec<TracePoint>,
}

fn require_likelihood(kind: ModelKind) -> Result<()> {
    if kind.is_likelihood() {
        Ok(())
    } else {
        Err(Error::Config(format!("{kind} is not a likelihood model")))
    }
}

/// The value Louvain needs next: the equivalent resolution for PPM and
/// DCPPM, the mixing parameter otherwise.
fn next_param(kind: ModelKind, fit: &Fit) -> Option<f64> {
    if kind.uses_mixing() {
        fit.params.mu
    } else {
        fit.params.gamma
    }
}

fn seen_key(param: f64) -> i64 {
    (param * 1e6).round() as i64
}

/// Alternates Louvain with re-estimation of the model parameters.
///
/// Returns the partition of the final iteration; the best log-likelihood
/// seen along the way is kept in `best_loglik`.
pub fn run_iterative(
    graph: &Graph,
    kind: ModelKind,
    config: &IterativeConfig,
    seed: u64,
) -> Result<StrategyResult> {
    require_likelihood(kind)?;
    config.validate()?;
    let mut param = if kind.uses_mixing() { 0.5 } else { 1.0 };
    let mut seen = HashSet::new();
    let mut degenerate_streak = 0;
    let mut trace = Vec::new();
    let mut best_loglik = f64::NEG_INFINITY;
    let mut iteration = 0;
    loop {
        iteration += 1;
        let partition = louvain(graph, &kind.objective(param), seed)?;
        let fitted = fit_clamped(kind, &compute_stats(graph, &partition))?;
        trace.push(TracePoint {
            param,
            seed,
            communities: partition.num_communities(),
            loglik: Some(fitted.loglik),
        });
        best_loglik = best_loglik.max(fitted.loglik);
        degenerate_streak = if fitted.degenerate { degenerate_streak + 1 } else { 0 };

        let next = next_param(kind, &fitted);
        let stop = match next {
            None => Some(StopReason::ConvergedDegenerate),
            Some(_) if degenerate_streak >= 2 => Some(StopReason::ConvergedDegenerate),
            Some(p) if (p - param).abs() < config.tolerance => Some(StopReason::Converged),
            Some(p) if config.detect_cycles && !seen.insert(seen_key(p)) => Some(StopReason::Cycle),
            Some(_) if iteration >= config.max_iterations => Some(StopReason::MaxIters),
            Some(_) => None,
        };
        if let Some(stop_reason) = stop {
            return Ok(StrategyResult {
                kind,
                partition,
                params: fitted.params,
                loglik: fitted.loglik,
                search_param: param,
                evaluations: iteration,
                stop_reason,
                best_loglik,
                trace,
            });
        }
        param = next.expect("checked above");
    }
}

/// Runs Louvain at every grid point and keeps the partition whose fitted
/// likelihood is highest. Ties go to the earlier grid point.
pub fn run_maximization(
    graph: &Graph,
    kind: ModelKind,
    config: &GridConfig,
    seed: u64,
) -> Result<StrategyResult> {
    require_likelihood(kind)?;
    config.validate()?;
    let jobs: Vec<(f64, u64)> = config
        .grid_for(kind)
        .iter()
        .flat_map(|&p| (0..config.seeds_per_point as u64).map(move |s| (p, seed.wrapping_add(s))))
        .collect();
    let runs: Vec<(TracePoint, Partition, Option<Fit>)> = jobs
        .par_iter()
        .map(|&(param, run_seed)| -> Result<_> {
            let partition = louvain(graph, &kind.objective(param), run_seed)?;
            let fitted = match fit(kind, &compute_stats(graph, &partition)) {
                Ok(f) => Some(f),
                Err(Error::DegeneratePartition(_)) => None,
                Err(e) => return Err(e),
            };
            let point = TracePoint {
                param,
                seed: run_seed,
                communities: partition.num_communities(),
                loglik: fitted.map(|f| f.loglik),
            };
            Ok((point, partition, fitted))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<usize> = None;
    for (i, (_, _, fitted)) in runs.iter().enumerate() {
        if let Some(f) = fitted {
            if best.is_none_or(|b| f.loglik > runs[b].2.expect("kept").loglik) {
                best = Some(i);
            }
        }
    }
    let best = best.ok_or(Error::NoValidPartition)?;
    let trace: Vec<TracePoint> = runs.iter().map(|r| r.0).collect();
    let (point, partition, fitted) = runs.into_iter().nth(best).expect("index in range");
    let fitted = fitted.expect("kept");
    Ok(StrategyResult {
        kind,
        partition,
        params: fitted.params,
        loglik: fitted.loglik,
        search_param: point.param,
        evaluations: trace.len(),
        stop_reason: StopReason::GridExhausted,
        best_loglik: fitted.loglik,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::param_floor;

    #[test]
    fn default_grids() {
        let g = GridConfig::default();
        assert_eq!(g.gamma_grid.len(), 40);
        assert!((g.gamma_grid[0] - 0.1).abs() < 1e-12);
        assert!((g.gamma_grid[39] - 10.0).abs() < 1e-9);
        assert_eq!(g.mu_grid.len(), 39);
        assert!((g.mu_grid[0] - 0.025).abs() < 1e-12);
        assert!((g.mu_grid[38] - 0.975).abs() < 1e-12);
        g.validate().unwrap();
    }

    #[test]
    fn two_triangles_ilfrs_iterative() {
        let g = crate::graph::tests::two_triangles();
        let r = run_iterative(&g, ModelKind::Ilfrs, &IterativeConfig::default(), 0).unwrap();
        assert_eq!(r.partition.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(r.params.mu, Some(param_floor(6.0)));
        assert!(r.evaluations <= 3);
        assert_eq!(r.stop_reason, StopReason::Converged);
    }

    #[test]
    fn rejects_modularity_kinds_and_bad_configs() {
        let g = crate::graph::tests::two_triangles();
        assert!(run_iterative(&g, ModelKind::Modularity, &IterativeConfig::default(), 0).is_err());
        let bad = IterativeConfig {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(matches!(run_iterative(&g, ModelKind::Ppm, &bad, 0), Err(Error::Config(_))));
        let empty = GridConfig {
            mu_grid: vec![],
            ..Default::default()
        };
        assert!(matches!(run_maximization(&g, ModelKind::Ilfr, &empty, 0), Err(Error::Config(_))));
    }

    #[test]
    fn all_degenerate_grid_is_an_error() {
        // A single edge always ends up as one community under PPM.
        let g = Graph::from_simple_edges(2, &[(0, 1)]).unwrap();
        let grid = GridConfig {
            gamma_grid: vec![0.5, 1.0],
            ..Default::default()
        };
        assert!(matches!(
            run_maximization(&g, ModelKind::Ppm, &grid, 0),
            Err(Error::NoValidPartition)
        ));
    }

    #[test]
    fn iteration_cap_holds() {
        let d = crate::datasets::Dataset::Karate.load();
        let config = IterativeConfig {
            max_iterations: 2,
            tolerance: 1e-300,
            detect_cycles: false,
        };
        let r = run_iterative(&d.graph, ModelKind::Ilfr, &config, 0).unwrap();
        assert!(r.evaluations <= 2);
    }
}
