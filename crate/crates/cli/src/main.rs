//! `cbqoa` command-line front end: generate hard instances, compute seeds,
//! run the pipeline on one instance or a directory, and summarize results.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use cbqoa::bench::{
    self, export_results, gen_hard_instances, instance_seed, run_pipeline, BenchmarkSpec, BetaTable,
    PipelineConfig, RunRecord, MANIFEST_FILE, RECORDS_FILE, SEED_LABEL,
};
use cbqoa::opt::CvarConfig;
use cbqoa::seeds::{solve_sdp, SdpConfig};
use cbqoa::{ProblemInstance, ProblemKind};

#[derive(Parser, Debug)]
#[command(name = "cbqoa", version, about = "Classically-boosted quantum optimization toolkit")]
struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "CBQOA_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate instances on which the classical seed rarely succeeds.
    Gen(GenArgs),
    /// Solve the relaxation and round it to a seed.
    Seed(SeedArgs),
    /// Run the full pipeline on one instance.
    Solve(SolveArgs),
    /// Run the pipeline on every instance in a directory (resumable).
    Bench(BenchArgs),
    /// Summarize exported results per algorithm.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Problem {
    #[value(name = "3sat")]
    Max3sat,
    Bisection,
}

impl From<Problem> for ProblemKind {
    fn from(p: Problem) -> Self {
        match p {
            Problem::Max3sat => ProblemKind::Max3sat,
            Problem::Bisection => ProblemKind::MaxBisection,
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Variables (3SAT) or vertices (bisection).
    #[arg(long)]
    vars: Option<usize>,
    #[arg(long)]
    clauses: Option<usize>,
    #[arg(long)]
    edge_prob: Option<f64>,
    /// β threshold of the hardness filter.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    cutoff: f64,
    /// Roundings per POGS estimate.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 2000)]
    sdp_iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SeedArgs {
    instance: PathBuf,
    /// Roundings; the best one is reported.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Roundings for the POGS estimate (0 to skip).
    #[arg(long, default_value_t = 0)]
    pogs_trials: usize,
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    #[arg(long, default_value_t = 2000)]
    sdp_iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Trotter repetitions for transposition walks.
    #[arg(long, default_value_t = 3)]
    trotter: usize,
    /// Cost bins for the fast simulator.
    #[arg(long, default_value_t = 1000)]
    bins: usize,
    /// Roundings for the classical POGS estimate.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Repetition count for the repeated POGS column (default 10 for 3SAT,
    /// 5 for bisection).
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    #[arg(long, default_value_t = 200)]
    iterations: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,
    #[arg(long, default_value_t = 2000)]
    sdp_iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl PipelineArgs {
    fn config(&self, kind: ProblemKind) -> PipelineConfig {
        let mut cfg = PipelineConfig::for_kind(kind);
        cfg.depth = self.depth;
        cfg.cvar = CvarConfig { alpha: self.alpha };
        cfg.circuit.trotter_steps = self.trotter;
        cfg.num_bins = self.bins;
        cfg.pogs_trials = self.trials;
        if let Some(k) = self.k {
            cfg.repetitions = k;
        }
        if let Some(t) = &self.thresholds {
            cfg.thresholds = t.clone();
        }
        cfg.adam.iterations = self.iterations;
        cfg.adam.restarts = self.restarts;
        cfg.adam.learning_rate = self.learning_rate;
        cfg.sdp.iterations = self.sdp_iterations;
        cfg.rng_seed = self.seed;
        cfg
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Directory of instance `.json` files.
    dir: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Directory written by `bench`.
    dir: PathBuf,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(anyhow::Error),
    Guard(String),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Guard(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

fn is_validation(e: &cbqoa::Error) -> bool {
    use cbqoa::Error::*;
    match e {
        Instance { source, .. } => is_validation(source),
        LengthMismatch { .. } | Capacity { .. } | Degenerate | Infeasible(_) | IndexOutOfRange { .. }
        | InvalidParameter(_) | InvalidInstance(_) | KindMismatch(_) | Io(_) | Json(_) | Csv(_) => true,
        NotNormalized(_) | NonFinite { .. } | EmptySupport => false,
    }
}

impl From<cbqoa::Error> for Failure {
    fn from(e: cbqoa::Error) -> Self {
        if is_validation(&e) {
            Failure::Usage(e.into())
        } else {
            Failure::Internal(e.into())
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn internal(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Internal(e.into())
}

fn read_instance(path: &Path) -> Result<ProblemInstance, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    ProblemInstance::from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> CmdResult {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())).map_err(usage),
        None => io::stdout().write_all(bytes).map_err(internal),
    }
}

#[derive(Serialize)]
struct GenManifest<'a> {
    spec: &'a BenchmarkSpec,
    attempts: u64,
    rejection_rate: f64,
    guard_tripped: bool,
    files: Vec<String>,
    /// Seed POGS estimate of each accepted instance.
    estimates: Vec<f64>,
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let mut spec = BenchmarkSpec::for_kind(a.problem.into());
    spec.count = a.count;
    if let Some(v) = a.vars {
        spec.num_vars = v;
    }
    if let Some(c) = a.clauses {
        spec.num_clauses = c;
    }
    if let Some(p) = a.edge_prob {
        spec.edge_prob = p;
    }
    if let Some(t) = a.threshold {
        spec.threshold = t;
    }
    spec.pogs_cutoff = a.cutoff;
    spec.rounding_trials = a.trials;
    spec.sdp = SdpConfig { iterations: a.sdp_iterations, ..SdpConfig::default() };
    spec.rng_seed = a.seed;
    if spec.count == 0 {
        return Err(usage(anyhow!("--count must be >= 1")));
    }
    spec.validate()?;

    let report = gen_hard_instances(&spec)?;
    fs::create_dir_all(&a.out).map_err(usage)?;
    let mut files = Vec::new();
    for (i, c) in report.accepted.iter().enumerate() {
        let name = format!("{i:04}-{}.json", c.instance.content_id());
        fs::write(a.out.join(&name), c.instance.to_json() + "\n").map_err(usage)?;
        files.push(name);
    }
    let manifest = GenManifest {
        spec: &spec,
        attempts: report.attempts,
        rejection_rate: report.rejection_rate,
        guard_tripped: report.guard_tripped,
        files,
        estimates: report.accepted.iter().map(|c| c.estimate.pogs).collect(),
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(internal)?;
    fs::write(a.out.join(MANIFEST_FILE), text + "\n").map_err(usage)?;
    log::info!(
        "{} instances after {} attempts (rejection rate {:.3})",
        report.accepted.len(),
        report.attempts,
        report.rejection_rate
    );
    if report.guard_tripped {
        return Err(Failure::Guard(format!(
            "only {} of {} instances found within {} attempts",
            report.accepted.len(),
            spec.count,
            report.attempts
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct SeedReport {
    instance_id: String,
    seed: String,
    cost: f64,
    beta: f64,
    objective: f64,
    residual: f64,
    converged: bool,
    pogs: Vec<SeedPogs>,
}

#[derive(Serialize)]
struct SeedPogs {
    threshold: f64,
    pogs: f64,
    std_err: f64,
    trials: usize,
}

fn cmd_seed(a: SeedArgs) -> CmdResult {
    use rand::SeedableRng;
    let inst = read_instance(&a.instance)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let cfg = SdpConfig { iterations: a.sdp_iterations, rng_seed: a.seed, ..SdpConfig::default() };
    let sol = solve_sdp(&inst, &cfg)?;
    let seed = sol.best_of(&inst, a.trials, &mut rng)?;
    let table = BetaTable::new(&inst)?;
    let thresholds = a
        .thresholds
        .unwrap_or_else(|| PipelineConfig::for_kind(inst.kind()).thresholds);
    let pogs = if a.pogs_trials > 0 {
        bench::seed_pogs(&inst, &sol, &table, &thresholds, a.pogs_trials, &mut rng)?
            .into_iter()
            .zip(&thresholds)
            .map(|(e, &t)| SeedPogs { threshold: t, pogs: e.pogs, std_err: e.std_err, trials: e.trials })
            .collect()
    } else {
        vec![]
    };
    let report = SeedReport {
        instance_id: inst.content_id(),
        seed: seed.to_string(),
        cost: inst.evaluate_cost(&seed)?,
        beta: table.beta(&seed)?,
        objective: sol.objective,
        residual: sol.residual,
        converged: sol.converged,
        pogs,
    };
    let bytes = match a.format {
        Format::Json => (serde_json::to_string_pretty(&report).map_err(internal)? + "\n").into_bytes(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["instance_id", "seed", "cost", "beta", "threshold", "pogs", "std_err"])
                .map_err(internal)?;
            let base = [report.instance_id.clone(), report.seed.clone(), report.cost.to_string(), report.beta.to_string()];
            if report.pogs.is_empty() {
                w.write_record(base.iter().cloned().chain(["".into(), "".into(), "".into()]))
                    .map_err(internal)?;
            }
            for p in &report.pogs {
                w.write_record(base.iter().cloned().chain([
                    p.threshold.to_string(),
                    p.pogs.to_string(),
                    p.std_err.to_string(),
                ]))
                .map_err(internal)?;
            }
            w.into_inner().map_err(internal)?
        }
    };
    write_out(None, &bytes)
}

fn record_bytes(records: &[RunRecord], format: Format) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Json => {
            let v = if records.len() == 1 {
                serde_json::to_string_pretty(&records[0])
            } else {
                serde_json::to_string_pretty(records)
            };
            Ok((v.map_err(internal)? + "\n").into_bytes())
        }
        Format::Csv => {
            let mut buf = Vec::new();
            bench::write_csv(records, &mut buf)?;
            Ok(buf)
        }
    }
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let inst = read_instance(&a.instance)?;
    let cfg = a.pipeline.config(inst.kind());
    let record = run_pipeline(&inst, &cfg)?;
    write_out(a.out.as_deref(), &record_bytes(&[record], a.format)?)
}

/// Instance files in `dir`, sorted by name. Position in this list fixes
/// each instance's pipeline seed.
fn instance_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))
        .map_err(usage)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n != MANIFEST_FILE))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let files = instance_files(&a.dir)?;
    if files.is_empty() {
        return Err(usage(anyhow!("no instance files in {}", a.dir.display())));
    }
    let instances: Vec<ProblemInstance> = files.iter().map(|f| read_instance(f)).collect::<Result<_, _>>()?;
    let kind = instances[0].kind();
    if instances.iter().any(|i| i.kind() != kind) {
        return Err(usage(anyhow!("instances in {} mix problem kinds", a.dir.display())));
    }
    let base = a.pipeline.config(kind);
    base.validate()?;
    fs::create_dir_all(&a.out).map_err(usage)?;

    let records_path = a.out.join(RECORDS_FILE);
    let mut done: Vec<RunRecord> = if records_path.exists() {
        bench::read_records(&records_path)?
    } else {
        vec![]
    };
    let done_ids: BTreeSet<String> = done.iter().map(|r| r.instance_id.clone()).collect();
    let todo: Vec<(usize, &ProblemInstance)> = instances
        .iter()
        .enumerate()
        .filter(|(_, i)| !done_ids.contains(&i.content_id()))
        .collect();
    log::info!("{} of {} instances already done", instances.len() - todo.len(), instances.len());

    let sink = Mutex::new(
        fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&records_path)
            .map_err(usage)?,
    );
    let fresh: Vec<(usize, RunRecord)> = todo
        .par_iter()
        .map(|&(i, inst)| {
            let cfg = PipelineConfig { rng_seed: instance_seed(base.rng_seed, i), ..base.clone() };
            let r = run_pipeline(inst, &cfg)?;
            let mut f = sink.lock().expect("record sink poisoned");
            writeln!(f, "{}", r.to_json()).map_err(cbqoa::Error::from)?;
            log::info!("finished {} in {:.1}s", r.instance_id, r.wall_time_secs);
            Ok((i, r))
        })
        .collect::<Result<_, cbqoa::Error>>()?;
    done.extend(fresh.into_iter().map(|(_, r)| r));

    // final export in directory order, independent of completion order
    let order: Vec<String> = instances.iter().map(|i| i.content_id()).collect();
    done.sort_by_key(|r| order.iter().position(|id| *id == r.instance_id).unwrap_or(usize::MAX));
    done.dedup_by(|a, b| a.instance_id == b.instance_id);
    export_results(&done, &base, &a.out)?;
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    algorithm: String,
    threshold: f64,
    instances: usize,
    mean: f64,
    std_err: f64,
    median: f64,
    /// Fraction of instances where the algorithm's POGS beats the seed's.
    beats_seed: f64,
}

fn cmd_compare(a: CompareArgs) -> CmdResult {
    let records = bench::read_records(&a.dir.join(RECORDS_FILE))?;
    if records.is_empty() {
        return Err(usage(anyhow!("no records in {}", a.dir.display())));
    }
    let mut keys: Vec<(String, f64)> = Vec::new();
    for e in &records[0].pogs {
        if a.threshold.is_none_or(|t| t == e.threshold) {
            keys.push((e.algorithm.clone(), e.threshold));
        }
    }
    if keys.is_empty() {
        return Err(usage(anyhow!("no results at the requested threshold")));
    }
    let mut rows = Vec::new();
    for (alg, x) in keys {
        let vals: Vec<f64> = records
            .iter()
            .map(|r| r.pogs_of(&alg, x).ok_or_else(|| usage(anyhow!("{} lacks {alg} at {x}", r.instance_id))))
            .collect::<Result<_, _>>()?;
        let seeds: Vec<f64> = records.iter().map(|r| r.pogs_of(SEED_LABEL, x).unwrap_or(f64::NAN)).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = if vals.len() > 1 {
            vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = vals.clone();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len();
        let median = if m % 2 == 1 { sorted[m / 2] } else { 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]) };
        let wins = vals.iter().zip(&seeds).filter(|(v, s)| v > s).count();
        rows.push(Summary {
            algorithm: alg,
            threshold: x,
            instances: m,
            mean,
            std_err: (var / n).sqrt(),
            median,
            beats_seed: wins as f64 / n,
        });
    }
    let bytes = match a.format {
        Format::Json => (serde_json::to_string_pretty(&rows).map_err(internal)? + "\n").into_bytes(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(internal)?;
            }
            w.into_inner().map_err(internal)?
        }
    };
    write_out(None, &bytes)
}

fn run(cli: Cli) -> CmdResult {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(usage(anyhow!("--workers must be >= 1")));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().map_err(internal)?;
    }
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Seed(a) => cmd_seed(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Compare(a) => cmd_compare(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) | Failure::Internal(e) => eprintln!("error: {e:#}"),
                Failure::Guard(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
