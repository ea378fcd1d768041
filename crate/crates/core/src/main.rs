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


use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use lognull::datasets::Dataset;
use lognull::io::{load_edge_list, load_labeled_partition, load_partition, write_edge_list, write_partition, VertexLabels};
use lognull::lfr::{generate, LfrConfig};
use lognull::metrics::similarity;
use lognull::models::ModelKind;
use lognull::run::{detect, loglik_table, RunSpec, Strategy};
use lognull::sweep::{run_sweep, write_csv, SweepConfig};
use lognull::{Error, Graph, Partition};

const BUILTIN_PREFIX: &str = "builtin:";

/// Community detection with planted-partition and ILFR null models.
///
/// Graph arguments are edge-list files (`u v` per line, `#` comments) or one
/// of `builtin:karate`, `builtin:dolphins`, `builtin:football`. Partition
/// files hold `vertex community` per line.
///
/// Exit codes: 0 success, 1 usage, 2 invalid data or configuration,
/// 3 runtime failure.
#[derive(Parser)]
#[command(name = "lognull", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities and print a JSON run record.
    Detect(DetectArgs),
    /// Print every quality function of a partition as CSV.
    Loglik(LoglikArgs),
    /// Generate an LFR benchmark graph.
    Generate(GenerateArgs),
    /// Compare two partitions (NMI, Rand, Jaccard) as CSV.
    Eval(EvalArgs),
    /// Run detections over LFR benchmarks and write a CSV of run records.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct DetectArgs {
    graph: String,
    #[arg(long, value_parser = parse_model)]
    model: ModelKind,
    #[arg(long, value_parser = parse_strategy)]
    strategy: Strategy,
    /// Resolution (ppm, dcppm, modularity, simple) or mixing (ilfr, ilfrs).
    #[arg(long, required_if_eq("strategy", "fixed"))]
    param: Option<f64>,
    #[arg(long, env = "LOGNULL_SEED", default_value_t = 0)]
    seed: u64,
    /// Where to write the partition.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Partition to compare against. Built-in graphs default to their own.
    #[arg(long)]
    ground_truth: Option<String>,
    /// Record wall time (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
    /// Include the per-run trace in the record.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct LoglikArgs {
    graph: String,
    partition: String,
}

#[derive(Args, Clone)]
struct LfrArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 2.5)]
    degree_exponent: f64,
    #[arg(long, default_value_t = 30.0)]
    mean_degree: f64,
    /// Defaults to min(n - 1, 10 * mean degree).
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long, default_value_t = 1.5)]
    size_exponent: f64,
    #[arg(long, default_value_t = 20)]
    smin: usize,
    #[arg(long, default_value_t = 100)]
    smax: usize,
}

impl LfrArgs {
    fn config(&self, mixing: f64, seed: u64) -> LfrConfig {
        LfrConfig {
            n: self.n,
            degree_exponent: self.degree_exponent,
            mean_degree: self.mean_degree,
            max_degree: self.max_degree,
            size_exponent: self.size_exponent,
            min_community: self.smin,
            max_community: self.smax,
            mixing,
            seed,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    lfr: LfrArgs,
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    #[arg(long, env = "LOGNULL_SEED", default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.edges, PREFIX.truth and PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    first: String,
    second: String,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    lfr: LfrArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    mu_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = parse_model,
          default_value = "ppm,dcppm,ilfr,ilfrs,modularity")]
    models: Vec<ModelKind>,
    #[arg(long, value_delimiter = ',', value_parser = parse_strategy, default_value = "iterative,max")]
    strategies: Vec<Strategy>,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    repeats: u64,
    /// Parallel runs; defaults to the number of CPUs.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long, env = "LOGNULL_SEED", default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Parse { .. } | Error::Validation(_) | Error::Config(_) | Error::Domain(_) => 2,
        _ => 3,
    }
}

struct LoadedGraph {
    name: String,
    graph: Graph,
    labels: VertexLabels,
    truth: Option<Partition>,
}

fn builtin(name: &str) -> lognull::Result<Dataset> {
    Dataset::ALL
        .into_iter()
        .find(|d| d.name() == name)
        .ok_or_else(|| Error::Validation(format!("unknown built-in dataset {name:?}")))
}

fn read(path: &str) -> lognull::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("{path}: {e}")))
}

fn load_graph(arg: &str) -> lognull::Result<LoadedGraph> {
    if let Some(name) = arg.strip_prefix(BUILTIN_PREFIX) {
        let d = builtin(name)?.load();
        return Ok(LoadedGraph {
            name: name.to_owned(),
            graph: d.graph,
            labels: d.labels,
            truth: Some(d.ground_truth),
        });
    }
    let (graph, labels) = load_edge_list(&read(arg)?)?;
    let name = Path::new(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_owned());
    Ok(LoadedGraph {
        name,
        graph,
        labels,
        truth: None,
    })
}

fn partition_text(arg: &str) -> lognull::Result<String> {
    match arg.strip_prefix(BUILTIN_PREFIX) {
        Some(name) => Ok(builtin(name)?.ground_truth_text().to_owned()),
        None => read(arg),
    }
}

fn create(path: &Path) -> lognull::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn cmd_detect(args: DetectArgs) -> lognull::Result<()> {
    let start = Instant::now();
    let loaded = load_graph(&args.graph)?;
    let truth = match &args.ground_truth {
        Some(path) => Some(load_partition(&partition_text(path)?, &loaded.labels)?),
        None => loaded.truth,
    };
    let mut spec = RunSpec::new(args.model, args.strategy, args.seed);
    spec.param = args.param;
    let mut run = detect(&loaded.graph, &spec, &loaded.name, truth.as_ref())?;
    if let Some(path) = &args.out {
        let mut out = create(path)?;
        write_partition(&mut out, &run.partition, &loaded.labels)?;
        out.flush()?;
    }
    if !args.trace {
        run.record.trace.clear();
    }
    if args.timing {
        run.record.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, &run.record).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_loglik(args: LoglikArgs) -> lognull::Result<()> {
    let loaded = load_graph(&args.graph)?;
    let partition = load_partition(&partition_text(&args.partition)?, &loaded.labels)?;
    let rows = loglik_table(&loaded.graph, &partition)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "model,p_in,p_out,mu,gamma,value")?;
    for row in rows {
        let p = row.params;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.model,
            opt(p.p_in),
            opt(p.p_out),
            opt(p.mu),
            opt(p.gamma),
            row.value
        )?;
        if row.degenerate {
            eprintln!("warning: {} parameters floored on a degenerate partition", row.model);
        }
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn cmd_generate(args: GenerateArgs) -> lognull::Result<()> {
    let config = args.lfr.config(args.mu, args.seed);
    let bench = generate(&config)?;
    let labels = VertexLabels::numeric(config.n);
    let mut edges = create(&with_suffix(&args.out, ".edges"))?;
    write_edge_list(&mut edges, &bench.graph, &labels)?;
    edges.flush()?;
    let mut truth = create(&with_suffix(&args.out, ".truth"))?;
    write_partition(&mut truth, &bench.partition, &labels)?;
    truth.flush()?;
    let report = serde_json::json!({
        "config": config,
        "metadata": bench.metadata,
    });
    let text = serde_json::to_string_pretty(&report).map_err(io::Error::from)?;
    std::fs::write(with_suffix(&args.out, ".json"), format!("{text}\n"))?;
    if bench.metadata.warning {
        eprintln!(
            "warning: {} edges could not be placed",
            bench.metadata.dropped_edges
        );
    }
    println!("{text}");
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> lognull::Result<()> {
    let (labels, first) = load_labeled_partition(&partition_text(&args.first)?)?;
    let second = load_partition(&partition_text(&args.second)?, &labels)?;
    let s = similarity(&first, &second)?;
    println!("nmi,rand,jaccard");
    println!("{},{},{}", s.nmi, s.rand, s.jaccard);
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> lognull::Result<()> {
    let jobs = args
        .jobs
        .map(|j| j as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let config = SweepConfig {
        mixing: args.mu_list,
        lfr: args.lfr.config(0.0, args.seed),
        models: args.models,
        strategies: args.strategies,
        repeats: args.repeats as usize,
        seed: args.seed,
        jobs,
        timing: args.timing,
    };
    let rows = run_sweep(&config)?;
    for row in &rows {
        if let Some(e) = &row.error {
            eprintln!(
                "warning: mu={} repeat={} {} {}: {e}",
                row.mixing, row.repeat, row.model, row.strategy
            );
        }
    }
    match &args.out {
        Some(path) => {
            let mut out = create(path)?;
            write_csv(&mut out, &rows)?;
            out.flush()?;
        }
        None => write_csv(&mut io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Command::Detect(args) = &cli.command {
        if !args.model.is_likelihood() && args.strategy != Strategy::Fixed {
            let _ = Cli::command()
                .error(
                    ErrorKind::ArgumentConflict,
                    format!("--model {} only supports --strategy fixed", args.model),
                )
                .print();
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Detect(args) => cmd_detect(args),
        Command::Loglik(args) => cmd_loglik(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
