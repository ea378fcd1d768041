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


//! Single detection runs and their records.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::louvain::louvain;
use crate::metrics::{similarity, Similarity};
use crate::models::{fit_clamped, modularity, EstimatedParams, ModelKind, QualityModel};
use crate::partition::Partition;
use crate::stats::compute_stats;
use crate::strategy::{
    run_iterative, run_maximization, GridConfig, IterativeConfig, StopReason, TracePoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Iterative,
    Max,
    Fixed,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Iterative => "iterative",
            Strategy::Max => "max",
            Strategy::Fixed => "fixed",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "iterative" => Ok(Strategy::Iterative),
            "max" | "maximization" => Ok(Strategy::Max),
            "fixed" => Ok(Strategy::Fixed),
            other => Err(Error::Domain(format!("unknown strategy {other:?}"))),
        }
    }
}

/// What to run: a model, a strategy, and the parameter for fixed runs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub model: ModelKind,
    pub strategy: Strategy,
    /// Resolution for PPM, DCPPM and the modularities, `μ` for ILFR and
    /// ILFRS. Only read by [`Strategy::Fixed`].
    pub param: Option<f64>,
    pub seed: u64,
    pub iterative: IterativeConfig,
    pub grid: GridConfig,
}

impl RunSpec {
    pub fn new(model: ModelKind, strategy: Strategy, seed: u64) -> Self {
        RunSpec {
            model,
            strategy,
            param: None,
            seed,
            iterative: IterativeConfig::default(),
            grid: GridConfig::default(),
        }
    }

    pub fn with_param(mut self, param: f64) -> Self {
        self.param = Some(param);
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.strategy {
            Strategy::Fixed => {
                if self.param.is_none() {
                    return Err(Error::Config("a fixed run needs a parameter".into()));
                }
            }
            Strategy::Iterative | Strategy::Max => {
                if !self.model.is_likelihood() {
                    return Err(Error::Config(format!(
                        "{} has no parameters to fit; use the fixed strategy",
                        self.model
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Summary of one detection run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub dataset: String,
    pub model: ModelKind,
    pub strategy: Strategy,
    pub seed: u64,
    /// Parameter handed to the Louvain run that produced the partition.
    pub search_param: f64,
    /// Parameters fitted to the partition; empty for the modularities.
    pub params: EstimatedParams,
    /// Log-likelihood at the fitted parameters; absent for the modularities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loglik: Option<f64>,
    /// Objective value for the modularities at the given resolution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quality: Option<f64>,
    /// Standard modularity at resolution 1.
    pub modularity: f64,
    pub communities: usize,
    pub evaluations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_reason: Option<StopReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_loglik: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<Similarity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TracePoint>,
}

pub struct Detection {
    pub partition: Partition,
    pub record: RunRecord,
}

/// Runs one detection and summarizes it. `dataset` is only copied into the
/// record; `ground_truth`, when given, is compared with the result.
pub fn detect(
    graph: &Graph,
    spec: &RunSpec,
    dataset: &str,
    ground_truth: Option<&Partition>,
) -> Result<Detection> {
    spec.validate()?;
    if let Some(truth) = ground_truth {
        if truth.len() != graph.vertex_count() {
            return Err(Error::Validation(format!(
                "ground truth covers {} vertices, graph has {}",
                truth.len(),
                graph.vertex_count()
            )));
        }
    }
    let model = spec.model;
    let (partition, mut record) = match spec.strategy {
        Strategy::Fixed => {
            let param = spec.param.expect("validated");
            let objective = model.objective(param);
            objective.validate()?;
            let partition = louvain(graph, &objective, spec.seed)?;
            let stats = compute_stats(graph, &partition);
            let (params, loglik, quality) = if model.is_likelihood() {
                let fitted = fit_clamped(model, &stats)?;
                (fitted.params, Some(fitted.loglik), None)
            } else {
                let params = EstimatedParams {
                    gamma: Some(param),
                    ..EstimatedParams::default()
                };
                (params, None, Some(objective.evaluate(&stats)?))
            };
            let record = RunRecord {
                dataset: dataset.to_owned(),
                model,
                strategy: spec.strategy,
                seed: spec.seed,
                search_param: param,
                params,
                loglik,
                quality,
                modularity: 0.0,
                communities: 0,
                evaluations: 1,
                stop_reason: None,
                best_loglik: None,
                ground_truth: None,
                wall_time_s: None,
                trace: Vec::new(),
            };
            (partition, record)
        }
        Strategy::Iterative | Strategy::Max => {
            let result = if spec.strategy == Strategy::Iterative {
                run_iterative(graph, model, &spec.iterative, spec.seed)?
            } else {
                run_maximization(graph, model, &spec.grid, spec.seed)?
            };
            let record = RunRecord {
                dataset: dataset.to_owned(),
                model,
                strategy: spec.strategy,
                seed: spec.seed,
                search_param: result.search_param,
                params: result.params,
                loglik: Some(result.loglik),
                quality: None,
                modularity: 0.0,
                communities: 0,
                evaluations: result.evaluations,
                stop_reason: Some(result.stop_reason),
                best_loglik: Some(result.best_loglik),
                ground_truth: None,
                wall_time_s: None,
                trace: result.trace,
            };
            (result.partition, record)
        }
    };
    record.modularity = modularity(&compute_stats(graph, &partition), 1.0);
    record.communities = partition.num_communities();
    if let Some(truth) = ground_truth {
        record.ground_truth = Some(similarity(&partition, truth)?);
    }
    Ok(Detection { partition, record })
}

/// One row of the log-likelihood table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoglikRow {
    pub model: ModelKind,
    pub params: EstimatedParams,
    pub value: f64,
    /// Set when a parameter had to be floored because its estimate was
    /// undefined on this partition.
    pub degenerate: bool,
}

/// Every quality function on a fixed partition: the four likelihoods at
/// their fitted parameters, then both modularities at resolution 1.
pub fn loglik_table(graph: &Graph, partition: &Partition) -> Result<Vec<LoglikRow>> {
    if partition.len() != graph.vertex_count() {
        return Err(Error::Validation(format!(
            "partition covers {} vertices, graph has {}",
            partition.len(),
            graph.vertex_count()
        )));
    }
    let stats = compute_stats(graph, partition);
    let mut rows = Vec::with_capacity(6);
    for model in ModelKind::LIKELIHOODS {
        let fitted = fit_clamped(model, &stats)?;
        rows.push(LoglikRow {
            model,
            params: fitted.params,
            value: fitted.loglik,
            degenerate: fitted.degenerate,
        });
    }
    for quality in [
        QualityModel::SimpleModularity { resolution: 1.0 },
        QualityModel::Modularity { resolution: 1.0 },
    ] {
        rows.push(LoglikRow {
            model: quality.kind(),
            params: EstimatedParams {
                gamma: Some(1.0),
                ..EstimatedParams::default()
            },
            value: quality.evaluate(&stats)?,
            degenerate: false,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::Dataset;
    use crate::graph::tests::two_triangles;

    #[test]
    fn fixed_needs_param() {
        let g = two_triangles();
        let spec = RunSpec::new(ModelKind::Ilfr, Strategy::Fixed, 0);
        assert!(matches!(detect(&g, &spec, "t", None), Err(Error::Config(_))));
    }

    #[test]
    fn modularity_only_fixed() {
        let g = two_triangles();
        let spec = RunSpec::new(ModelKind::Modularity, Strategy::Max, 0);
        assert!(matches!(detect(&g, &spec, "t", None), Err(Error::Config(_))));
        let spec = RunSpec::new(ModelKind::Modularity, Strategy::Fixed, 0).with_param(1.0);
        let run = detect(&g, &spec, "t", None).unwrap();
        assert_eq!(run.record.communities, 2);
        assert_eq!(run.record.quality, Some(run.record.modularity));
    }

    #[test]
    fn two_triangles_ilfrs_max() {
        let g = two_triangles();
        let truth = Partition::from_assignment([0, 0, 0, 1, 1, 1]);
        let spec = RunSpec::new(ModelKind::Ilfrs, Strategy::Max, 3);
        let run = detect(&g, &spec, "t", Some(&truth)).unwrap();
        assert_eq!(run.partition.num_communities(), 2);
        assert_eq!(run.record.ground_truth.unwrap().nmi, 1.0);
    }

    #[test]
    fn table_rows_in_order() {
        let d = Dataset::Karate.load();
        let rows = loglik_table(&d.graph, &d.ground_truth).unwrap();
        let names: Vec<_> = rows.iter().map(|r| r.model.name()).collect();
        assert_eq!(names, ["ppm", "dcppm", "ilfr", "ilfrs", "simple", "modularity"]);
        assert!((rows[0].value + 206.12).abs() < 0.01);
        assert!((rows[5].value - 0.3715).abs() < 0.0005);
    }
}
