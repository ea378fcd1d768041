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


//! Repeated runs over generated benchmarks.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lfr::{generate, LfrBenchmark, LfrConfig};
use crate::models::ModelKind;
use crate::run::{detect, RunRecord, RunSpec, Strategy};

/// Column names of [`write_csv`], in order.
pub const CSV_HEADER: &str = "mu_target,repeat,graph_seed,model,strategy,n,edges,realized_mixing,\
true_communities,communities,search_param,p_in,p_out,mu,gamma,loglik,modularity,nmi,rand,jaccard,\
stop_reason,evaluations,wall_time_s,error";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mixing: Vec<f64>,
    /// Everything but `mixing` and `seed` is shared by all benchmarks.
    pub lfr: LfrConfig,
    pub models: Vec<ModelKind>,
    /// Strategies for the likelihood models. The modularities always run
    /// once at resolution 1.
    pub strategies: Vec<Strategy>,
    pub repeats: usize,
    pub seed: u64,
    pub jobs: usize,
    pub timing: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if self.mixing.is_empty() || self.models.is_empty() || self.strategies.is_empty() {
            return Err(Error::Config("mixing, model and strategy lists must be non-empty".into()));
        }
        if self.strategies.contains(&Strategy::Fixed) {
            return Err(Error::Config("sweeps support the iterative and max strategies".into()));
        }
        for &mixing in &self.mixing {
            LfrConfig {
                mixing,
                ..self.lfr.clone()
            }
            .validate()?;
        }
        Ok(())
    }

    fn runs(&self) -> Vec<(ModelKind, Strategy)> {
        let mut runs = Vec::new();
        for &model in &self.models {
            if model.is_likelihood() {
                runs.extend(self.strategies.iter().map(|&s| (model, s)));
            } else {
                runs.push((model, Strategy::Fixed));
            }
        }
        runs.sort();
        runs.dedup();
        runs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mixing: f64,
    pub repeat: usize,
    pub graph_seed: u64,
    pub model: ModelKind,
    pub strategy: Strategy,
    pub n: usize,
    pub edges: usize,
    pub realized_mixing: Option<f64>,
    pub true_communities: Option<usize>,
    pub record: Option<RunRecord>,
    pub error: Option<String>,
}

/// Runs every model and strategy on `repeats` benchmarks per mixing value.
/// Failed runs are kept as rows with an error message. Rows come back sorted
/// by mixing value, repeat, model and strategy.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut mixing = config.mixing.clone();
    mixing.sort_by(f64::total_cmp);
    mixing.dedup();
    let graphs: Vec<(f64, usize, u64)> = mixing
        .iter()
        .flat_map(|&mu| (0..config.repeats).map(move |r| (mu, r)))
        .map(|(mu, r)| (mu, r, config.seed.wrapping_add(r as u64)))
        .collect();
    let runs = config.runs();
    Ok(pool.install(|| {
        let benchmarks: Vec<Result<LfrBenchmark>> = graphs
            .par_iter()
            .map(|&(mixing, _, seed)| {
                generate(&LfrConfig {
                    mixing,
                    seed,
                    ..config.lfr.clone()
                })
            })
            .collect();
        let jobs: Vec<(usize, ModelKind, Strategy)> = (0..graphs.len())
            .flat_map(|g| runs.iter().map(move |&(m, s)| (g, m, s)))
            .collect();
        jobs.par_iter()
            .map(|&(g, model, strategy)| {
                let (mixing, repeat, graph_seed) = graphs[g];
                let mut row = SweepRow {
                    mixing,
                    repeat,
                    graph_seed,
                    model,
                    strategy,
                    n: config.lfr.n,
                    edges: 0,
                    realized_mixing: None,
                    true_communities: None,
                    record: None,
                    error: None,
                };
                let bench = match &benchmarks[g] {
                    Ok(bench) => bench,
                    Err(e) => {
                        row.error = Some(e.to_string());
                        return row;
                    }
                };
                row.edges = bench.metadata.edges;
                row.realized_mixing = Some(bench.metadata.realized_mixing);
                row.true_communities = Some(bench.partition.num_communities());
                let mut spec = RunSpec::new(model, strategy, graph_seed);
                if strategy == Strategy::Fixed {
                    spec.param = Some(1.0);
                }
                let start = Instant::now();
                let name = format!("lfr-mu{mixing}-r{repeat}");
                match detect(&bench.graph, &spec, &name, Some(&bench.partition)) {
                    Ok(run) => {
                        let mut record = run.record;
                        record.trace.clear();
                        if config.timing {
                            record.wall_time_s = Some(start.elapsed().as_secs_f64());
                        }
                        row.record = Some(record);
                    }
                    Err(e) => row.error = Some(e.to_string()),
                }
                row
            })
            .collect()
    }))
}

fn opt<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes rows under [`CSV_HEADER`]. Missing values are empty fields.
pub fn write_csv<W: Write>(out: &mut W, rows: &[SweepRow]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let rec = row.record.as_ref();
        let params = rec.map(|r| r.params).unwrap_or_default();
        let truth = rec.and_then(|r| r.ground_truth);
        let fields = [
            row.mixing.to_string(),
            row.repeat.to_string(),
            row.graph_seed.to_string(),
            row.model.to_string(),
            row.strategy.to_string(),
            row.n.to_string(),
            row.edges.to_string(),
            opt(row.realized_mixing),
            opt(row.true_communities),
            opt(rec.map(|r| r.communities)),
            opt(rec.map(|r| r.search_param)),
            opt(params.p_in),
            opt(params.p_out),
            opt(params.mu),
            opt(params.gamma),
            opt(rec.and_then(|r| r.loglik)),
            opt(rec.map(|r| r.modularity)),
            opt(truth.map(|t| t.nmi)),
            opt(truth.map(|t| t.rand)),
            opt(truth.map(|t| t.jaccard)),
            opt(rec.and_then(|r| r.stop_reason).map(|s| s.name())),
            opt(rec.map(|r| r.evaluations)),
            opt(rec.and_then(|r| r.wall_time_s)),
            row.error.as_deref().unwrap_or("").replace([',', '\n'], ";"),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            mixing: vec![0.3, 0.1],
            lfr: LfrConfig {
                n: 200,
                mean_degree: 10.0,
                min_community: 10,
                max_community: 40,
                ..LfrConfig::default()
            },
            models: vec![ModelKind::Ilfrs, ModelKind::Modularity],
            strategies: vec![Strategy::Max, Strategy::Iterative],
            repeats: 2,
            seed: 5,
            jobs: 3,
            timing: false,
        }
    }

    #[test]
    fn rows_sorted_and_complete() {
        let rows = run_sweep(&small()).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 3);
        assert_eq!(rows[0].mixing, 0.1);
        assert_eq!(rows[0].model, ModelKind::Modularity);
        assert!(rows.iter().all(|r| r.error.is_none() && r.record.is_some()));
        let mut csv = Vec::new();
        write_csv(&mut csv, &rows).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let width = CSV_HEADER.split(',').count();
        assert!(text.lines().all(|l| l.split(',').count() == width));
    }

    #[test]
    fn job_count_does_not_change_output() {
        let one = run_sweep(&SweepConfig { jobs: 1, ..small() }).unwrap();
        let many = run_sweep(&small()).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(run_sweep(&SweepConfig { repeats: 0, ..small() }).is_err());
        assert!(run_sweep(&SweepConfig { strategies: vec![Strategy::Fixed], ..small() }).is_err());
        let mut c = small();
        c.lfr.min_community = 2000;
        assert!(run_sweep(&c).is_err());
    }
}
