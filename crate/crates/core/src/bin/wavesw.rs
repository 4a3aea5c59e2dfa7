//! Command-line front end: align FASTA pair files, sweep synthetic
//! benchmarks, simulate read pairs, and report batch statistics.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use wavesw::batch::{cost_stats, length_histogram, run_batch_binned};
use wavesw::bench::{rows_to_tsv, run_sweep, SweepConfig};
use wavesw::engine::{AlignmentTask, Engine, EngineConfig};
use wavesw::readsim::{generate_pair_texts, generate_reference, LengthSpec, SimProfile};
use wavesw::scoring::ScoringScheme;
use wavesw::seqpack::{read_fasta, write_fasta, PackedSequence};

/// Exit code 2: bad input or flags. Exit code 1: internal failure.
enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

#[derive(Parser)]
#[command(
    name = "wavesw",
    version,
    about = "Batch pairwise local alignment over 4-bit packed sequences",
    long_about = "Batch pairwise local alignment (seed extension) with an \
anti-diagonal wavefront engine, a strip-by-strip baseline engine, and a \
full-table oracle, all instrumented with boundary-traffic counters.\n\n\
Gap flags are literal: --gap-open is charged in full on the first base of \
a gap and --gap-extend on each further base. For BWA-MEM-style (open=6, \
extend=1) semantics pass --gap-open 7 --gap-extend 1."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScoringArgs {
    /// Match score (>= 1)
    #[arg(long = "match", default_value_t = 1, allow_negative_numbers = true)]
    match_score: i32,
    /// Mismatch score (<= -1)
    #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
    mismatch: i32,
    /// Full penalty on the first base of a gap (alpha)
    #[arg(long, default_value_t = 6)]
    gap_open: i32,
    /// Penalty per continued gap base (beta)
    #[arg(long, default_value_t = 1)]
    gap_extend: i32,
}

impl ScoringArgs {
    fn scheme(&self) -> Result<ScoringScheme, CliError> {
        ScoringScheme::new(
            self.match_score,
            self.mismatch,
            self.gap_open,
            self.gap_extend,
        )
        .map_err(|e| CliError::input(e.to_string()))
    }
}

#[derive(Args)]
struct EngineArgs {
    /// Aligner: wavefront, baseline, or oracle
    #[arg(long, default_value = "wavefront")]
    engine: String,
    /// Lanes per lockstep group (1, 2, 4, 8, 16, or 32)
    #[arg(long, default_value_t = 16)]
    group_size: usize,
    /// Worker threads (default: logical cores)
    #[arg(long)]
    threads: Option<usize>,
}

impl EngineArgs {
    fn config(&self) -> Result<EngineConfig, CliError> {
        let engine = Engine::from_str(&self.engine).map_err(CliError::Input)?;
        EngineConfig::new(engine, self.group_size).map_err(|e| CliError::input(e.to_string()))
    }

    fn threads(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Align FASTA pair files (record i of --query pairs with record i of
    /// --target); prints one TSV row per pair: id, score, end_query,
    /// end_target.
    Align {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        engine: EngineArgs,
        /// Write run metrics (wall time, counters, imbalance) as JSON
        #[arg(long)]
        json_metrics: Option<PathBuf>,
        /// Histogram bin width used in the JSON metrics
        #[arg(long, default_value_t = 50)]
        bin: usize,
    },
    /// Throughput sweep over synthetic equal-length batches; prints a TSV
    /// table with one row per (length, engine).
    Bench {
        /// Comma-separated read lengths in bp
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "64,128,256,512,1024,2048,4096"
        )]
        lengths: Vec<usize>,
        /// Pairs per batch
        #[arg(long, default_value_t = 5000)]
        batch: usize,
        /// Repetitions to average
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Comma-separated engines to sweep
        #[arg(long, value_delimiter = ',', default_value = "wavefront,baseline")]
        engines: Vec<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Generate paired FASTA files <out>.query.fasta / <out>.target.fasta.
    Simulate {
        /// Number of pairs
        #[arg(long)]
        count: usize,
        /// Fixed read length in bp
        #[arg(long, default_value_t = 250, conflicts_with = "length_range")]
        length: usize,
        /// Uniform length range MIN,MAX in bp
        #[arg(long, value_delimiter = ',')]
        length_range: Option<Vec<usize>>,
        /// Per-base substitution rate
        #[arg(long, default_value_t = 0.01)]
        sub_rate: f64,
        /// Per-base insertion rate
        #[arg(long, default_value_t = 0.001)]
        ins_rate: f64,
        /// Per-base deletion rate
        #[arg(long, default_value_t = 0.001)]
        del_rate: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Reference length in bp (0 = four times the max read length)
        #[arg(long, default_value_t = 0)]
        ref_length: usize,
        /// Output path prefix
        #[arg(long)]
        out: PathBuf,
    },
    /// Length histograms and load-imbalance statistics for a pair of FASTA
    /// files; histogram TSV on stdout, imbalance JSON via --json.
    Stats {
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Histogram bin width in bp
        #[arg(long, default_value_t = 25)]
        bin: usize,
        /// Write imbalance statistics as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn read_fasta_file(path: &Path) -> Result<Vec<(String, PackedSequence)>, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    read_fasta(BufReader::new(file))
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_pairs(query: &Path, target: &Path) -> Result<(Vec<String>, Vec<AlignmentTask>), CliError> {
    let queries = read_fasta_file(query)?;
    let targets = read_fasta_file(target)?;
    if queries.len() != targets.len() {
        return Err(CliError::input(format!(
            "record count mismatch: {} has {} records, {} has {}",
            query.display(),
            queries.len(),
            target.display(),
            targets.len()
        )));
    }
    if queries.is_empty() {
        return Err(CliError::input("no records in input"));
    }
    let mut names = Vec::with_capacity(queries.len());
    let mut tasks = Vec::with_capacity(queries.len());
    for (i, ((name, q), (_, t))) in queries.into_iter().zip(targets).enumerate() {
        names.push(name);
        tasks.push(AlignmentTask::new(i as u64, q, t));
    }
    Ok((names, tasks))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file =
        File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::to_writer_pretty(BufWriter::new(file), value)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(())
}

fn cmd_align(
    query: &Path,
    target: &Path,
    scoring: &ScoringArgs,
    engine: &EngineArgs,
    json_metrics: Option<&Path>,
    bin: usize,
) -> Result<(), CliError> {
    let scheme = scoring.scheme()?;
    let config = engine.config()?;
    if bin == 0 {
        return Err(CliError::input("bin width must be >= 1"));
    }
    let (names, tasks) = load_pairs(query, target)?;
    let workers = engine.threads();
    let report = run_batch_binned(&tasks, &scheme, &config, workers, bin)
        .map_err(|e| CliError::input(e.to_string()))?;

    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    for (name, result) in names.iter().zip(&report.results) {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            name, result.score, result.end_query, result.end_target
        )
        .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::Internal(e.to_string()))?;

    if let Some(path) = json_metrics {
        write_json(path, &report.metrics(&config, workers))?;
    }
    Ok(())
}

fn cmd_bench(
    lengths: Vec<usize>,
    batch: usize,
    reps: usize,
    engines: Vec<String>,
    seed: u64,
    scoring: &ScoringArgs,
    engine: &EngineArgs,
) -> Result<(), CliError> {
    let mut sweep_engines = Vec::new();
    for name in engines {
        let e = Engine::from_str(&name).map_err(CliError::Input)?;
        if e == Engine::Oracle {
            return Err(CliError::input(
                "the oracle is not benchmarked; use --engine oracle with align",
            ));
        }
        sweep_engines.push(e);
    }
    // Validate the group size eagerly, before any batch is generated.
    EngineConfig::new(Engine::Wavefront, engine.group_size)
        .map_err(|e| CliError::input(e.to_string()))?;
    let config = SweepConfig {
        lengths,
        batch,
        reps,
        scheme: scoring.scheme()?,
        group_size: engine.group_size,
        engines: sweep_engines,
        threads: engine.threads(),
        seed,
    };
    let rows = run_sweep(&config).map_err(|e| CliError::input(e.to_string()))?;
    print!("{}", rows_to_tsv(&rows));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    count: usize,
    length: usize,
    length_range: Option<Vec<usize>>,
    sub_rate: f64,
    ins_rate: f64,
    del_rate: f64,
    seed: u64,
    ref_length: usize,
    out: &Path,
) -> Result<(), CliError> {
    let length = match length_range {
        Some(range) => {
            let [min, max] = range[..] else {
                return Err(CliError::input("--length-range takes exactly MIN,MAX"));
            };
            LengthSpec::Range { min, max }
        }
        None => LengthSpec::Fixed(length),
    };
    let profile = SimProfile {
        length,
        count,
        sub_rate,
        ins_rate,
        del_rate,
        seed,
    };
    profile
        .validate()
        .map_err(|e| CliError::input(e.to_string()))?;
    let ref_length = if ref_length == 0 {
        4 * length.max()
    } else {
        ref_length
    };
    let reference =
        generate_reference(ref_length, seed).map_err(|e| CliError::input(e.to_string()))?;
    let pairs =
        generate_pair_texts(&reference, &profile).map_err(|e| CliError::input(e.to_string()))?;

    let mut queries = Vec::with_capacity(pairs.len());
    let mut targets = Vec::with_capacity(pairs.len());
    for (i, pair) in pairs.into_iter().enumerate() {
        queries.push((format!("sim{i}"), pair.query));
        targets.push((format!("sim{i}"), pair.target));
    }
    for (suffix, records) in [("query", &queries), ("target", &targets)] {
        let path = out.with_extension("").with_file_name(format!(
            "{}.{suffix}.fasta",
            out.file_name().and_then(|n| n.to_str()).unwrap_or("pairs")
        ));
        let file =
            File::create(&path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut writer = BufWriter::new(file);
        write_fasta(&mut writer, records).map_err(|e| CliError::Internal(e.to_string()))?;
        writer
            .flush()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    Ok(())
}

fn cmd_stats(query: &Path, target: &Path, bin: usize, json: Option<&Path>) -> Result<(), CliError> {
    if bin == 0 {
        return Err(CliError::input("bin width must be >= 1"));
    }
    let (_, tasks) = load_pairs(query, target)?;
    let histograms = length_histogram(&tasks, bin).map_err(|e| CliError::input(e.to_string()))?;
    print!("{}", histograms.to_tsv());

    if let Some(path) = json {
        let (costs, imbalance) = cost_stats(&tasks);
        #[derive(serde::Serialize)]
        struct StatsJson {
            task_count: usize,
            total_cost_blocks: u64,
            imbalance: wavesw::batch::ImbalanceStats,
        }
        write_json(
            path,
            &StatsJson {
                task_count: tasks.len(),
                total_cost_blocks: costs.iter().sum(),
                imbalance,
            },
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Align {
            query,
            target,
            scoring,
            engine,
            json_metrics,
            bin,
        } => cmd_align(
            &query,
            &target,
            &scoring,
            &engine,
            json_metrics.as_deref(),
            bin,
        ),
        Command::Bench {
            lengths,
            batch,
            reps,
            engines,
            seed,
            scoring,
            engine,
        } => cmd_bench(lengths, batch, reps, engines, seed, &scoring, &engine),
        Command::Simulate {
            count,
            length,
            length_range,
            sub_rate,
            ins_rate,
            del_rate,
            seed,
            ref_length,
            out,
        } => cmd_simulate(
            count,
            length,
            length_range,
            sub_rate,
            ins_rate,
            del_rate,
            seed,
            ref_length,
            &out,
        ),
        Command::Stats {
            query,
            target,
            bin,
            json,
        } => cmd_stats(&query, &target, bin, json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::FAILURE
        }
    }
}
