//! Hard-instance generation, POGS metrics, the end-to-end pipeline and
//! result export.
//!
//! Quantum POGS values are exact masses of the simulated output
//! distribution. Classical POGS values are Monte Carlo estimates and carry a
//! standard error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fast_sim::DEFAULT_NUM_BINS;
use crate::mixer::{build_family, WalkParams};
use crate::opt::{
    tune_ansatz_params, tune_walk_params, AdamConfig, AnsatzObjective, CvarConfig, SimBackend,
};
use crate::problem::{
    BitString, Clause, Edge, Max3SatInstance, MaxBisectionInstance, ProblemInstance, ProblemKind,
    Quality,
};
use crate::seeds::{solve_sdp, SdpConfig, SdpSolution};
use crate::sim::{feasible_uniform_state, walk_state, AnsatzParams, CircuitConfig, StateVector};

/// File names written by [`export_results`].
pub const CSV_FILE: &str = "results.csv";
pub const RECORDS_FILE: &str = "records.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Column order of the results CSV.
pub const CSV_COLUMNS: [&str; 8] = [
    "instance_id",
    "problem",
    "algorithm",
    "threshold",
    "pogs",
    "std_err",
    "k",
    "pogs_repeated",
];

/// β of every support element, indexed like the statevector.
#[derive(Clone, Debug)]
pub struct BetaTable {
    quality: Quality,
    betas: Vec<Option<f64>>,
}

impl BetaTable {
    pub fn new(instance: &ProblemInstance) -> Result<Self> {
        let quality = Quality::new(instance)?;
        let feas = instance.feasibility();
        let betas = (0..1usize << instance.num_vars())
            .map(|x| {
                if feas.contains(x) {
                    quality.beta(instance.cost_index(x)).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(BetaTable { quality, betas })
    }

    pub fn quality(&self) -> &Quality {
        &self.quality
    }

    /// `None` for infeasible strings.
    pub fn beta_index(&self, x: usize) -> Option<f64> {
        self.betas.get(x).copied().flatten()
    }

    pub fn beta(&self, x: &BitString) -> Result<f64> {
        self.beta_index(x.index())
            .ok_or_else(|| Error::Infeasible(x.to_string()))
    }
}

/// Probability mass on infeasible strings tolerated by the exact POGS.
const INFEASIBLE_TOL: f64 = 1e-9;

/// Mass of strings with `β >= threshold` in a per-index probability vector.
pub fn pogs_from_probabilities(probs: &[f64], table: &BetaTable, threshold: f64) -> Result<f64> {
    if probs.len() != table.betas.len() {
        return Err(Error::LengthMismatch {
            expected: table.betas.len(),
            found: probs.len(),
        });
    }
    let mut good = 0.0;
    let mut infeasible = 0.0;
    for (p, b) in probs.iter().zip(&table.betas) {
        match b {
            Some(b) if *b >= threshold => good += p,
            Some(_) => {}
            None => infeasible += p,
        }
    }
    if infeasible > INFEASIBLE_TOL {
        return Err(Error::Infeasible(format!(
            "distribution puts mass {infeasible:e} on infeasible strings"
        )));
    }
    Ok(good.clamp(0.0, 1.0))
}

/// Exact POGS of a distribution over bitstrings.
pub fn pogs_exact(
    distribution: &BTreeMap<BitString, f64>,
    table: &BetaTable,
    threshold: f64,
) -> Result<f64> {
    let mut good = 0.0;
    for (x, &p) in distribution {
        match table.beta_index(x.index()) {
            Some(b) if b >= threshold => good += p,
            Some(_) => {}
            None if p > INFEASIBLE_TOL => return Err(Error::Infeasible(x.to_string())),
            None => {}
        }
    }
    Ok(good.clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PogsEstimate {
    pub pogs: f64,
    pub std_err: f64,
    pub trials: usize,
}

/// Fraction of `trials` samples with `β >= threshold`.
pub fn pogs_monte_carlo<R, S>(
    mut sampler: S,
    table: &BetaTable,
    threshold: f64,
    trials: usize,
    rng: &mut R,
) -> Result<PogsEstimate>
where
    R: Rng + ?Sized,
    S: FnMut(&mut R) -> Result<BitString>,
{
    let betas = sample_betas(&mut sampler, table, trials, rng)?;
    Ok(estimate_from_betas(&betas, threshold))
}

fn sample_betas<R, S>(sampler: &mut S, table: &BetaTable, trials: usize, rng: &mut R) -> Result<Vec<f64>>
where
    R: Rng + ?Sized,
    S: FnMut(&mut R) -> Result<BitString>,
{
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    (0..trials).map(|_| table.beta(&sampler(rng)?)).collect()
}

/// POGS estimate from sampled β values.
pub fn estimate_from_betas(betas: &[f64], threshold: f64) -> PogsEstimate {
    let trials = betas.len();
    let hits = betas.iter().filter(|&&b| b >= threshold).count();
    let pogs = hits as f64 / trials as f64;
    PogsEstimate {
        pogs,
        std_err: (pogs * (1.0 - pogs) / trials as f64).sqrt(),
        trials,
    }
}

/// `1 - (1 - pogs)^k`.
pub fn pogs_repeated(pogs: f64, k: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&pogs) {
        return Err(Error::InvalidParameter(format!("pogs must be in [0, 1], got {pogs}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    Ok(1.0 - (1.0 - pogs).powi(k as i32))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub kind: ProblemKind,
    pub count: usize,
    /// Variables (3SAT) or vertices (bisection).
    pub num_vars: usize,
    /// 3SAT only.
    pub num_clauses: usize,
    /// Bisection only.
    pub edge_prob: f64,
    /// β threshold used by the hardness filter.
    pub threshold: f64,
    pub pogs_cutoff: f64,
    pub rounding_trials: usize,
    pub sdp: SdpConfig,
    pub rng_seed: u64,
}

impl BenchmarkSpec {
    pub fn max3sat() -> Self {
        BenchmarkSpec {
            kind: ProblemKind::Max3sat,
            count: 100,
            num_vars: 16,
            num_clauses: 200,
            edge_prob: 0.0,
            threshold: 0.7,
            pogs_cutoff: 0.05,
            rounding_trials: 10_000,
            sdp: SdpConfig::default(),
            rng_seed: 0,
        }
    }

    pub fn max_bisection() -> Self {
        BenchmarkSpec {
            kind: ProblemKind::MaxBisection,
            count: 100,
            num_vars: 12,
            num_clauses: 0,
            edge_prob: 0.5,
            threshold: 0.99,
            pogs_cutoff: 0.05,
            rounding_trials: 10_000,
            sdp: SdpConfig::default(),
            rng_seed: 0,
        }
    }

    pub fn for_kind(kind: ProblemKind) -> Self {
        match kind {
            ProblemKind::Max3sat => Self::max3sat(),
            ProblemKind::MaxBisection => Self::max_bisection(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.threshold <= 1.0) {
            return bad(format!("threshold must be <= 1, got {}", self.threshold));
        }
        if !(self.pogs_cutoff > 0.0 && self.pogs_cutoff < 1.0) {
            return bad(format!("cutoff must be in (0, 1), got {}", self.pogs_cutoff));
        }
        if self.rounding_trials == 0 {
            return bad("rounding trials must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.edge_prob) {
            return bad(format!("edge probability must be in [0, 1], got {}", self.edge_prob));
        }
        match self.kind {
            ProblemKind::Max3sat if self.num_vars < 3 => bad("3SAT needs at least 3 variables".into()),
            ProblemKind::MaxBisection if self.num_vars < 2 || self.num_vars % 2 != 0 => {
                bad("bisection needs a positive even vertex count".into())
            }
            _ => Ok(()),
        }?;
        if self.num_vars > crate::problem::MAX_VARS {
            return Err(Error::Capacity {
                n: self.num_vars,
                max: crate::problem::MAX_VARS,
            });
        }
        self.sdp.validate()
    }
}

/// Derive an independent stream seed from a base seed and an index.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random 3SAT instance: each clause has three distinct variables, each
/// negated with probability 1/2, weight `U[0, 1]`.
pub fn random_max3sat<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Max3SatInstance> {
    if n < 3 {
        return Err(Error::InvalidParameter("need at least 3 variables".into()));
    }
    let clauses = (0..m)
        .map(|_| {
            let vars = rand::seq::index::sample(rng, n, 3);
            let mut labels = [0usize; 3];
            for (l, v) in labels.iter_mut().zip(vars.iter()) {
                *l = if rng.random::<bool>() { v + 1 + n } else { v + 1 };
            }
            Clause::new(labels, rng.random::<f64>())
        })
        .collect();
    Max3SatInstance::new(n, clauses)
}

/// Erdős–Rényi graph `G(n, p)` with weights `U[-1, 1]`.
pub fn random_bisection<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<MaxBisectionInstance> {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.random::<f64>() < p {
                edges.push(Edge {
                    a,
                    b,
                    weight: rng.random_range(-1.0..=1.0),
                });
            }
        }
    }
    MaxBisectionInstance::new(n, edges)
}

pub fn random_instance<R: Rng + ?Sized>(spec: &BenchmarkSpec, rng: &mut R) -> Result<ProblemInstance> {
    Ok(match spec.kind {
        ProblemKind::Max3sat => random_max3sat(spec.num_vars, spec.num_clauses, rng)?.into(),
        ProblemKind::MaxBisection => random_bisection(spec.num_vars, spec.edge_prob, rng)?.into(),
    })
}

/// Estimated POGS of single roundings of a solved relaxation.
pub fn seed_pogs<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    solution: &SdpSolution,
    table: &BetaTable,
    thresholds: &[f64],
    trials: usize,
    rng: &mut R,
) -> Result<Vec<PogsEstimate>> {
    let mut sampler = |r: &mut R| solution.round(instance, r);
    let betas = sample_betas(&mut sampler, table, trials, rng)?;
    Ok(thresholds.iter().map(|&x| estimate_from_betas(&betas, x)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardCandidate {
    pub instance: ProblemInstance,
    pub attempt: u64,
    pub estimate: PogsEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenReport {
    pub spec: BenchmarkSpec,
    pub accepted: Vec<HardCandidate>,
    pub attempts: u64,
    pub rejection_rate: f64,
    /// The attempt limit (100 × count) was reached before `count` instances.
    pub guard_tripped: bool,
}

impl GenReport {
    pub fn instances(&self) -> Vec<ProblemInstance> {
        self.accepted.iter().map(|c| c.instance.clone()).collect()
    }
}

/// One generation attempt. Returns the instance and its seed POGS estimate.
pub fn evaluate_attempt(spec: &BenchmarkSpec, attempt: u64) -> Result<(ProblemInstance, PogsEstimate)> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.rng_seed, attempt));
    let instance = random_instance(spec, &mut rng)?;
    let sdp = SdpConfig {
        rng_seed: rng.random(),
        ..spec.sdp.clone()
    };
    let table = match BetaTable::new(&instance) {
        Ok(t) => t,
        // all costs equal: β undefined, never hard
        Err(Error::Degenerate) => {
            return Ok((
                instance,
                PogsEstimate {
                    pogs: 1.0,
                    std_err: 0.0,
                    trials: 0,
                },
            ))
        }
        Err(e) => return Err(e),
    };
    let solution = solve_sdp(&instance, &sdp)?;
    let est = seed_pogs(
        &instance,
        &solution,
        &table,
        &[spec.threshold],
        spec.rounding_trials,
        &mut rng,
    )?;
    Ok((instance, est[0]))
}

/// Keep generating instances until `count` have seed POGS below the cutoff,
/// or until `100 × count` attempts. Attempts are evaluated in parallel in
/// fixed chunks and accepted in attempt order, so the result does not depend
/// on the thread count.
pub fn gen_hard_instances(spec: &BenchmarkSpec) -> Result<GenReport> {
    spec.validate()?;
    const CHUNK: u64 = 16;
    let limit = 100 * spec.count as u64;
    let mut accepted = Vec::new();
    let mut attempts = 0u64;
    while accepted.len() < spec.count && attempts < limit {
        let end = (attempts + CHUNK).min(limit);
        let results: Vec<(ProblemInstance, PogsEstimate)> = (attempts..end)
            .into_par_iter()
            .map(|a| evaluate_attempt(spec, a))
            .collect::<Result<_>>()?;
        for (a, (instance, estimate)) in (attempts..end).zip(results) {
            attempts = a + 1;
            if estimate.pogs < spec.pogs_cutoff {
                accepted.push(HardCandidate {
                    instance,
                    attempt: a,
                    estimate,
                });
                if accepted.len() == spec.count {
                    break;
                }
            }
        }
    }
    let guard_tripped = accepted.len() < spec.count;
    if guard_tripped {
        log::warn!(
            "generator guard tripped: {} of {} instances after {attempts} attempts",
            accepted.len(),
            spec.count
        );
    }
    let rejection_rate = if attempts == 0 {
        0.0
    } else {
        1.0 - accepted.len() as f64 / attempts as f64
    };
    Ok(GenReport {
        spec: spec.clone(),
        accepted,
        attempts,
        rejection_rate,
        guard_tripped,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Largest ansatz depth; every depth `1..=depth` is tuned.
    pub depth: usize,
    pub cvar: CvarConfig,
    pub adam: AdamConfig,
    pub circuit: CircuitConfig,
    pub num_bins: usize,
    /// Roundings whose best becomes the walk seed.
    pub seed_trials: usize,
    /// Roundings used to estimate the seed algorithm's POGS.
    pub pogs_trials: usize,
    pub thresholds: Vec<f64>,
    /// Repetition count `k` for the repeated POGS column.
    pub repetitions: u32,
    pub sdp: SdpConfig,
    pub rng_seed: u64,
}

impl PipelineConfig {
    pub fn for_kind(kind: ProblemKind) -> Self {
        let (thresholds, repetitions) = match kind {
            ProblemKind::Max3sat => (vec![0.7, 0.8], 10),
            ProblemKind::MaxBisection => (vec![0.99], 5),
        };
        PipelineConfig {
            depth: 3,
            cvar: CvarConfig::default(),
            adam: AdamConfig::default(),
            circuit: CircuitConfig::default(),
            num_bins: DEFAULT_NUM_BINS,
            seed_trials: 1,
            pogs_trials: 10_000,
            thresholds,
            repetitions,
            sdp: SdpConfig::default(),
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cvar.validate()?;
        self.adam.validate()?;
        self.sdp.validate()?;
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.num_bins == 0 {
            return bad("number of bins must be >= 1");
        }
        if self.seed_trials == 0 || self.pogs_trials == 0 {
            return bad("rounding trials must be >= 1");
        }
        if self.circuit.trotter_steps == 0 {
            return bad("trotter steps must be >= 1");
        }
        if self.repetitions == 0 {
            return bad("repetition k must be >= 1");
        }
        if self.thresholds.iter().any(|t| !(*t <= 1.0)) {
            return bad("thresholds must be <= 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthResult {
    pub depth: usize,
    pub params: AnsatzParams,
    pub cvar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PogsEntry {
    pub algorithm: String,
    pub threshold: f64,
    pub pogs: f64,
    /// Present for sampled (classical) estimates.
    pub std_err: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub problem: ProblemKind,
    pub rng_seed: u64,
    pub seed: BitString,
    pub seed_beta: f64,
    pub walk: WalkParams,
    pub walk_cvar: f64,
    pub cbqoa: Vec<DepthResult>,
    pub gm_qaoa: Vec<DepthResult>,
    pub pogs: Vec<PogsEntry>,
    pub repetitions: u32,
    pub wall_time_secs: f64,
}

impl RunRecord {
    pub fn pogs_of(&self, algorithm: &str, threshold: f64) -> Option<f64> {
        self.pogs
            .iter()
            .find(|e| e.algorithm == algorithm && e.threshold == threshold)
            .map(|e| e.pogs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn cbqoa_label(p: usize) -> String {
    format!("cbqoa_{p}")
}

pub fn gm_qaoa_label(p: usize) -> String {
    format!("gm_qaoa_{p}")
}

pub const SEED_LABEL: &str = "seed";

fn exact_entries(
    label: &str,
    state: &StateVector,
    table: &BetaTable,
    thresholds: &[f64],
) -> Result<Vec<PogsEntry>> {
    let probs = state.probabilities();
    thresholds
        .iter()
        .map(|&x| {
            Ok(PogsEntry {
                algorithm: label.to_string(),
                threshold: x,
                pogs: pogs_from_probabilities(&probs, table, x)?,
                std_err: None,
            })
        })
        .collect()
}

/// Tune depths `1..=depth` with warm starts; returns per-depth results and
/// final exact states.
fn tune_depths(
    objective: &AnsatzObjective,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<Vec<(DepthResult, StateVector)>> {
    let mut out: Vec<(DepthResult, StateVector)> = Vec::with_capacity(cfg.depth);
    for p in 1..=cfg.depth {
        let adam = AdamConfig {
            rng_seed: derive_seed(seed, p as u64),
            ..cfg.adam.clone()
        };
        let warm = out.last().map(|(r, _)| r.params.clone());
        let tuned = tune_ansatz_params(objective, p, &cfg.cvar, &adam, warm.as_ref())?;
        let state = objective.final_state(&tuned.params)?;
        out.push((
            DepthResult {
                depth: p,
                params: tuned.params,
                cvar: tuned.cvar,
            },
            state,
        ));
    }
    Ok(out)
}

/// Seed → walk tuning → ansatz tuning → exact evaluation, plus the GM-QAOA
/// baseline at the same depths. Errors carry the instance id.
pub fn run_pipeline(instance: &ProblemInstance, cfg: &PipelineConfig) -> Result<RunRecord> {
    let id = instance.content_id();
    run_pipeline_inner(instance, cfg, &id).map_err(|e| e.with_instance(&id))
}

fn run_pipeline_inner(instance: &ProblemInstance, cfg: &PipelineConfig, id: &str) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let table = BetaTable::new(instance)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let sdp = SdpConfig {
        rng_seed: rng.random(),
        ..cfg.sdp.clone()
    };
    let solution = solve_sdp(instance, &sdp)?;
    let seed = solution.best_of(instance, cfg.seed_trials, &mut rng)?;
    let seed_beta = table.beta(&seed)?;
    let seed_est = seed_pogs(instance, &solution, &table, &cfg.thresholds, cfg.pogs_trials, &mut rng)?;
    let mut pogs: Vec<PogsEntry> = cfg
        .thresholds
        .iter()
        .zip(&seed_est)
        .map(|(&x, e)| PogsEntry {
            algorithm: SEED_LABEL.into(),
            threshold: x,
            pogs: e.pogs,
            std_err: Some(e.std_err),
        })
        .collect();

    let family = build_family(instance, &seed)?;
    let walk_adam = AdamConfig {
        rng_seed: rng.random(),
        ..cfg.adam.clone()
    };
    let walk = tune_walk_params(instance, &seed, &family, &cfg.cvar, &walk_adam, &cfg.circuit)?;
    let psi = walk_state(instance, &seed, walk.params, &cfg.circuit)?;
    pogs.extend(exact_entries(&cbqoa_label(0), &psi, &table, &cfg.thresholds)?);

    let diagonal = instance.ising_diagonal()?;
    let support = instance.feasible_indices()?;
    let backend = SimBackend::FastBinned {
        num_bins: cfg.num_bins,
    };
    let cb_seed: u64 = rng.random();
    let gm_seed: u64 = rng.random();

    let cb_obj = AnsatzObjective::new(psi, diagonal.clone(), &support, backend)?;
    let cb = tune_depths(&cb_obj, cfg, cb_seed)?;
    for (r, state) in &cb {
        pogs.extend(exact_entries(&cbqoa_label(r.depth), state, &table, &cfg.thresholds)?);
    }

    let gm_obj = AnsatzObjective::new(feasible_uniform_state(instance)?, diagonal, &support, backend)?;
    let gm = tune_depths(&gm_obj, cfg, gm_seed)?;
    for (r, state) in &gm {
        pogs.extend(exact_entries(&gm_qaoa_label(r.depth), state, &table, &cfg.thresholds)?);
    }

    Ok(RunRecord {
        instance_id: id.to_string(),
        problem: instance.kind(),
        rng_seed: cfg.rng_seed,
        seed,
        seed_beta,
        walk: walk.params,
        walk_cvar: walk.cvar,
        cbqoa: cb.into_iter().map(|(r, _)| r).collect(),
        gm_qaoa: gm.into_iter().map(|(r, _)| r).collect(),
        pogs,
        repetitions: cfg.repetitions,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Pipeline seed for the instance at `index` of a sorted batch.
pub fn instance_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// Run the pipeline over a batch in parallel. Instance `i` uses seed
/// `cfg.rng_seed + i`, so results do not depend on the worker count.
pub fn run_batch(instances: &[ProblemInstance], cfg: &PipelineConfig) -> Result<Vec<RunRecord>> {
    instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let c = PipelineConfig {
                rng_seed: instance_seed(cfg.rng_seed, i),
                ..cfg.clone()
            };
            run_pipeline(inst, &c)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub instance_id: String,
    pub problem: ProblemKind,
    pub algorithm: String,
    pub threshold: f64,
    pub pogs: f64,
    pub std_err: Option<f64>,
    pub k: u32,
    pub pogs_repeated: f64,
}

pub fn csv_rows(records: &[RunRecord]) -> Result<Vec<CsvRow>> {
    let mut rows = Vec::new();
    for r in records {
        for e in &r.pogs {
            rows.push(CsvRow {
                instance_id: r.instance_id.clone(),
                problem: r.problem,
                algorithm: e.algorithm.clone(),
                threshold: e.threshold,
                pogs: e.pogs,
                std_err: e.std_err,
                k: r.repetitions,
                pogs_repeated: pogs_repeated(e.pogs, r.repetitions)?,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in csv_rows(records)? {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: PipelineConfig,
    pub columns: Vec<String>,
    /// `(instance id, pipeline seed)` in record order.
    pub runs: Vec<(String, u64)>,
}

/// Write `results.csv`, `records.jsonl` and `manifest.json` into `dir`.
pub fn export_results(records: &[RunRecord], cfg: &PipelineConfig, dir: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records to export".into()));
    }
    fs::create_dir_all(dir)?;
    write_csv(records, fs::File::create(dir.join(CSV_FILE))?)?;
    let mut jsonl = String::new();
    for r in records {
        jsonl.push_str(&r.to_json());
        jsonl.push('\n');
    }
    fs::write(dir.join(RECORDS_FILE), jsonl)?;
    let manifest = Manifest {
        config: cfg.clone(),
        columns: CSV_COLUMNS.iter().map(|s| s.to_string()).collect(),
        runs: records.iter().map(|r| (r.instance_id.clone(), r.rng_seed)).collect(),
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

/// Records from a `records.jsonl` file; blank lines are skipped.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>> {
    let f = BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    for line in f.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(RunRecord::from_json(&line)?);
        }
    }
    Ok(out)
}

pub fn import_results(dir: &Path) -> Result<(Manifest, Vec<RunRecord>)> {
    let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join(MANIFEST_FILE))?)?;
    Ok((manifest, read_records(&dir.join(RECORDS_FILE))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_formula() {
        assert!((pogs_repeated(0.2, 3).unwrap() - 0.488).abs() < 1e-12);
        assert_eq!(pogs_repeated(0.37, 1).unwrap(), 0.37);
        assert_eq!(pogs_repeated(1.0, 7).unwrap(), 1.0);
        assert!(pogs_repeated(1.2, 1).is_err());
        assert!(pogs_repeated(0.5, 0).is_err());
    }

    #[test]
    fn spec_defaults_validate() {
        BenchmarkSpec::max3sat().validate().unwrap();
        BenchmarkSpec::max_bisection().validate().unwrap();
        let mut s = BenchmarkSpec::max_bisection();
        s.num_vars = 7;
        assert!(s.validate().is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
    }
}
