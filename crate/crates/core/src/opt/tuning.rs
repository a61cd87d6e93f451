//! CVaR-driven tuning of the walk parameters `(t, θ)` and of the layer
//! parameters `(β, γ)`.
//!
//! Every tuner evaluates a set of candidate starting points (a fixed
//! baseline that reproduces the untouched initial state, an optional warm
//! start, `restarts` random draws, and for the walk the best points of a
//! coarse `(t, θ)` grid), runs ADAM from each, and keeps the best point
//! seen. Restarts run in parallel and are merged by
//! `(cvar, candidate order)`, so results do not depend on thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::adam::{adam_minimize, AdamConfig, OptResult};
use super::cvar::{cvar_sorted, CvarConfig};
use crate::error::{Error, Result};
use crate::fast_sim::{bin_costs, eta_from_state, BinnedState, CostBinning};
use crate::mixer::{PermutationFamily, WalkParams};
use crate::problem::{BitString, ProblemInstance};
use crate::sim::{run_layers, AnsatzParams, CircuitConfig, StateVector};

/// Support elements sorted by cost, so the lower tail of any state's cost
/// distribution is a single linear scan.
#[derive(Clone, Debug)]
pub struct SortedSupport {
    entries: Vec<(usize, f64)>,
}

impl SortedSupport {
    pub fn new(cost_diagonal: &[f64], support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut entries: Vec<(usize, f64)> = support
            .iter()
            .map(|&x| {
                cost_diagonal
                    .get(x)
                    .map(|&f| (x, f))
                    .ok_or(Error::IndexOutOfRange {
                        index: x,
                        n: cost_diagonal.len(),
                    })
            })
            .collect::<Result<_>>()?;
        entries.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        Ok(SortedSupport { entries })
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn min_cost(&self) -> f64 {
        self.entries[0].1
    }

    pub fn max_cost(&self) -> f64 {
        self.entries[self.entries.len() - 1].1
    }

    /// `CVaR_α` of the cost of a measurement of `state`.
    pub fn cvar(&self, state: &StateVector, alpha: f64) -> f64 {
        let amps = state.amplitudes();
        cvar_sorted(self.entries.iter().map(|&(x, f)| (f, amps[x].norm_sqr())), alpha)
    }
}

const WALK_GRID_T: usize = 8;
const WALK_GRID_THETA: usize = 9;
const WALK_GRID_THETA_MAX: f64 = 6.0;
/// Grid points that become extra ADAM starts.
const WALK_GRID_STARTS: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkTuning {
    pub params: WalkParams,
    pub cvar: f64,
    /// CVaR at `(t, θ) = (0, 0)`, i.e. `f(z)`.
    pub baseline_cvar: f64,
    /// Trace of the restart that produced `params` (empty for the baseline).
    pub trace: Vec<(usize, f64)>,
}

fn walk_cvar(
    start: &StateVector,
    family: &PermutationFamily,
    support: &SortedSupport,
    steps: usize,
    alpha: f64,
    t: f64,
    theta: f64,
) -> f64 {
    let mut s = start.clone();
    match s.apply_walk(family, theta, t, steps) {
        Ok(()) => support.cvar(&s, alpha),
        Err(_) => f64::NAN,
    }
}

/// Minimize `CVaR_α(f(X_{t,θ}))` for `X_{t,θ}` measured from `e^{iA_θ t}|z>`.
pub fn tune_walk_params(
    instance: &ProblemInstance,
    z: &BitString,
    family: &PermutationFamily,
    cvar_cfg: &CvarConfig,
    adam_cfg: &AdamConfig,
    circuit: &CircuitConfig,
) -> Result<WalkTuning> {
    cvar_cfg.validate()?;
    adam_cfg.validate()?;
    if !instance.is_feasible(z)? {
        return Err(Error::Infeasible(z.to_string()));
    }
    let diag = instance.ising_diagonal()?;
    let support = SortedSupport::new(&diag, &instance.feasible_indices()?)?;
    let start = StateVector::basis(instance.num_vars(), z)?;
    let alpha = cvar_cfg.alpha;
    let steps = circuit.trotter_steps;
    let objective =
        |x: &[f64]| walk_cvar(&start, family, &support, steps, alpha, x[0], x[1]);

    let baseline_cvar = objective(&[0.0, 0.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(adam_cfg.rng_seed);
    let mut inits: Vec<[f64; 2]> = (0..adam_cfg.restarts)
        .map(|_| {
            let t = PI - rng.random::<f64>() * PI; // (0, π]
            let theta = rng.random_range(-2.0..=2.0);
            [t, theta]
        })
        .collect();
    // The CVaR surface is flat over much of the plane (the lower tail stays
    // at z), so random starts alone often stall. Add the best grid points.
    let grid: Vec<[f64; 2]> = (1..=WALK_GRID_T)
        .flat_map(|i| {
            (0..WALK_GRID_THETA).map(move |j| {
                let t = PI * i as f64 / WALK_GRID_T as f64;
                let theta = -WALK_GRID_THETA_MAX
                    + 2.0 * WALK_GRID_THETA_MAX * j as f64 / (WALK_GRID_THETA - 1) as f64;
                [t, theta]
            })
        })
        .collect();
    let mut scored: Vec<(f64, usize)> = grid
        .par_iter()
        .map(|x| objective(x))
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    inits.extend(scored.iter().take(WALK_GRID_STARTS).map(|&(_, i)| grid[i]));
    let runs: Vec<OptResult> = inits
        .par_iter()
        .map(|init| adam_minimize(objective, init, adam_cfg))
        .collect::<Result<_>>()?;

    let mut best = WalkTuning {
        params: WalkParams { t: 0.0, theta: 0.0 },
        cvar: baseline_cvar,
        baseline_cvar,
        trace: vec![],
    };
    for run in runs {
        if run.best_value < best.cvar {
            best.params = WalkParams {
                t: run.best_params[0],
                theta: run.best_params[1],
            };
            best.cvar = run.best_value;
            best.trace = run.trace;
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SimBackend {
    Statevector,
    FastBinned { num_bins: usize },
}

/// Everything needed to evaluate the layered ansatz around a fixed initial
/// state `|ψ>`: the cost diagonal, the support of `|ψ>`, and (for the binned
/// backend) the precomputed binning.
#[derive(Clone, Debug)]
pub struct AnsatzObjective {
    psi: StateVector,
    diagonal: Vec<f64>,
    support: SortedSupport,
    gamma_scale: f64,
    backend: SimBackend,
    binned: Option<(CostBinning, BinnedState)>,
}

impl AnsatzObjective {
    pub fn new(
        psi: StateVector,
        diagonal: Vec<f64>,
        support: &[usize],
        backend: SimBackend,
    ) -> Result<Self> {
        if diagonal.len() != psi.amplitudes().len() {
            return Err(Error::LengthMismatch {
                expected: psi.amplitudes().len(),
                found: diagonal.len(),
            });
        }
        let sorted = SortedSupport::new(&diagonal, support)?;
        let range = sorted.max_cost() - sorted.min_cost();
        let gamma_scale = if range > 0.0 { range } else { 1.0 };
        let binned = match backend {
            SimBackend::Statevector => None,
            SimBackend::FastBinned { num_bins } => {
                let binning = bin_costs(&diagonal, support, num_bins)?;
                let state = eta_from_state(&psi, &binning)?;
                Some((binning, state))
            }
        };
        Ok(AnsatzObjective {
            psi,
            diagonal,
            support: sorted,
            gamma_scale,
            backend,
            binned,
        })
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn support(&self) -> &SortedSupport {
        &self.support
    }

    pub fn backend(&self) -> SimBackend {
        self.backend
    }

    /// Cost range over the support. Tuners search over `γ · scale` so that
    /// the initial range `(-π, π]` spans phase spreads up to `π`.
    pub fn gamma_scale(&self) -> f64 {
        self.gamma_scale
    }

    pub fn final_state(&self, params: &AnsatzParams) -> Result<StateVector> {
        run_layers(&self.psi, &self.diagonal, params)
    }

    /// `CVaR_α` of the output cost under the configured backend.
    pub fn cvar(&self, params: &AnsatzParams, alpha: f64) -> Result<f64> {
        match &self.binned {
            None => Ok(self.support.cvar(&self.final_state(params)?, alpha)),
            Some((binning, state)) => {
                let evolved = state.evolve(binning, params)?;
                Ok(cvar_sorted(evolved.distribution(binning), alpha))
            }
        }
    }

    fn unpack(&self, x: &[f64]) -> AnsatzParams {
        let p = x.len() / 2;
        AnsatzParams {
            betas: x[..p].to_vec(),
            gammas: x[p..].iter().map(|g| g / self.gamma_scale).collect(),
        }
    }

    fn pack(&self, params: &AnsatzParams) -> Vec<f64> {
        params
            .betas
            .iter()
            .copied()
            .chain(params.gammas.iter().map(|g| g * self.gamma_scale))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnsatzTuning {
    pub params: AnsatzParams,
    pub cvar: f64,
    /// Objective with all-zero parameters, i.e. the CVaR of `|ψ>` itself.
    pub initial_cvar: f64,
    pub trace: Vec<(usize, f64)>,
}

/// Minimize `CVaR_α` of the depth-`p` ansatz output. `warm_start`, when
/// given, is padded with identity layers to depth `p` and tried as an extra
/// starting point.
pub fn tune_ansatz_params(
    objective: &AnsatzObjective,
    p: usize,
    cvar_cfg: &CvarConfig,
    adam_cfg: &AdamConfig,
    warm_start: Option<&AnsatzParams>,
) -> Result<AnsatzTuning> {
    cvar_cfg.validate()?;
    adam_cfg.validate()?;
    if p == 0 {
        return Err(Error::InvalidParameter("ansatz depth must be >= 1".into()));
    }
    let alpha = cvar_cfg.alpha;
    let eval = |x: &[f64]| objective.cvar(&objective.unpack(x), alpha).unwrap_or(f64::NAN);

    let zeros = AnsatzParams::zeros(p);
    let initial_cvar = objective.cvar(&zeros, alpha)?;

    let mut inits: Vec<Vec<f64>> = Vec::new();
    if let Some(w) = warm_start {
        if w.depth() > p {
            return Err(Error::InvalidParameter(format!(
                "warm start depth {} exceeds target depth {p}",
                w.depth()
            )));
        }
        inits.push(objective.pack(&w.padded(p - w.depth())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(adam_cfg.rng_seed);
    for _ in 0..adam_cfg.restarts {
        inits.push((0..2 * p).map(|_| PI - rng.random::<f64>() * 2.0 * PI).collect());
    }
    let runs: Vec<OptResult> = inits
        .par_iter()
        .map(|init| adam_minimize(eval, init, adam_cfg))
        .collect::<Result<_>>()?;

    let mut best = AnsatzTuning {
        params: zeros,
        cvar: initial_cvar,
        initial_cvar,
        trace: vec![],
    };
    for run in runs {
        if run.best_value < best.cvar {
            best.params = objective.unpack(&run.best_params);
            best.cvar = run.best_value;
            best.trace = run.trace;
        }
    }
    Ok(best)
}

/// Write an optimizer trace as CSV with header `iteration,cvar`.
pub fn write_trace_csv<W: std::io::Write>(trace: &[(usize, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "cvar"])?;
    for &(it, v) in trace {
        w.write_record([it.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
