//! Binned simulation of reflection-mixer circuits.
//!
//! Replacing `f` by the bin-centre function `f̃` makes every layer act on the
//! `M`-dimensional span of the normalized bin components `|ψ_j>` of the
//! initial state, so a depth-`p` circuit reduces to a recursion on `M`
//! complex coefficients. Building the binning costs one pass over the
//! support; each evaluation afterwards is `O(M p)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{AnsatzParams, StateVector};

/// Default number of bins.
pub const DEFAULT_NUM_BINS: usize = 1000;
/// Upper clamp applied by [`choose_num_bins`].
pub const MAX_NUM_BINS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostBinning {
    /// Lower end, `min f` over the support.
    pub a: f64,
    /// Strict upper bound, slightly above `max f`.
    pub b: f64,
    pub num_bins: usize,
    pub delta: f64,
    /// `(basis index, bin)` for every support element, in support order.
    pub assignment: Vec<(usize, usize)>,
}

impl CostBinning {
    /// `f̃_j = a + (j + 1/2) Δ`.
    pub fn bin_cost(&self, j: usize) -> f64 {
        self.a + (j as f64 + 0.5) * self.delta
    }

    pub fn bin_costs(&self) -> Vec<f64> {
        (0..self.num_bins).map(|j| self.bin_cost(j)).collect()
    }

    /// Copy of `cost_diagonal` with support entries replaced by `f̃(x)`.
    pub fn binned_diagonal(&self, cost_diagonal: &[f64]) -> Vec<f64> {
        let mut out = cost_diagonal.to_vec();
        for &(x, j) in &self.assignment {
            out[x] = self.bin_cost(j);
        }
        out
    }
}

/// Partition the support into `M` equal-width cost bins
/// `S_j = {x : a + jΔ <= f(x) < a + (j+1)Δ}`.
pub fn bin_costs(cost_diagonal: &[f64], support: &[usize], num_bins: usize) -> Result<CostBinning> {
    if num_bins == 0 {
        return Err(Error::InvalidParameter("number of bins must be >= 1".into()));
    }
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in support {
        let f = *cost_diagonal.get(x).ok_or(Error::IndexOutOfRange {
            index: x,
            n: cost_diagonal.len(),
        })?;
        lo = lo.min(f);
        hi = hi.max(f);
    }
    // b must strictly exceed max f; the margin is negligible next to Δ
    let margin = 1e-9 * (hi - lo).max(lo.abs().max(hi.abs())).max(1.0);
    let b = hi + margin;
    let delta = (b - lo) / num_bins as f64;
    let assignment = support
        .iter()
        .map(|&x| {
            let j = ((cost_diagonal[x] - lo) / delta).floor() as usize;
            (x, j.min(num_bins - 1))
        })
        .collect();
    Ok(CostBinning {
        a: lo,
        b,
        num_bins,
        delta,
        assignment,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedState {
    /// Current coefficients `η_j^(t)`.
    pub eta: Vec<Complex64>,
    /// Bin weights of the initial state, `η_j = sqrt(Σ_{x ∈ S_j} |α_x|²)`.
    pub base_eta: Vec<f64>,
}

/// Decompose `psi` over the bins; the result starts at `η^(0) = η`.
pub fn eta_from_state(psi: &StateVector, binning: &CostBinning) -> Result<BinnedState> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(norm));
    }
    let amps = psi.amplitudes();
    let mut mass = vec![0.0; binning.num_bins];
    for &(x, j) in &binning.assignment {
        mass[j] += amps[x].norm_sqr();
    }
    let base_eta: Vec<f64> = mass.into_iter().map(f64::sqrt).collect();
    Ok(BinnedState {
        eta: base_eta.iter().map(|&e| Complex64::new(e, 0.0)).collect(),
        base_eta,
    })
}

/// Bin weights for a state whose probability per support element is known,
/// e.g. the uniform state over `F`.
pub fn eta_from_probabilities(probabilities: &[f64], binning: &CostBinning) -> BinnedState {
    let mut mass = vec![0.0; binning.num_bins];
    for &(x, j) in &binning.assignment {
        mass[j] += probabilities[x];
    }
    let base_eta: Vec<f64> = mass.into_iter().map(f64::sqrt).collect();
    BinnedState {
        eta: base_eta.iter().map(|&e| Complex64::new(e, 0.0)).collect(),
        base_eta,
    }
}

impl BinnedState {
    /// Apply the `p` layers:
    /// `η_j^(t) = η_j^(t-1) e^{-i f̃_j γ_t} + (e^{-iβ_t} - 1) η_j Σ_k η_k η_k^(t-1) e^{-i f̃_k γ_t}`.
    pub fn evolve(&self, binning: &CostBinning, params: &AnsatzParams) -> Result<BinnedState> {
        let m = binning.num_bins;
        if self.eta.len() != m || self.base_eta.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: self.eta.len(),
            });
        }
        let costs = binning.bin_costs();
        let mut eta = self.eta.clone();
        for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
            let mut overlap = Complex64::new(0.0, 0.0);
            for j in 0..m {
                eta[j] *= Complex64::from_polar(1.0, -costs[j] * gamma);
                overlap += self.base_eta[j] * eta[j];
            }
            let coef = (Complex64::from_polar(1.0, -beta) - 1.0) * overlap;
            for j in 0..m {
                eta[j] += coef * self.base_eta[j];
            }
        }
        Ok(BinnedState {
            eta,
            base_eta: self.base_eta.clone(),
        })
    }

    pub fn total_probability(&self) -> f64 {
        self.eta.iter().map(|e| e.norm_sqr()).sum()
    }

    /// `(f̃_j, |η_j|²)` for every bin.
    pub fn distribution(&self, binning: &CostBinning) -> Vec<(f64, f64)> {
        self.eta
            .iter()
            .enumerate()
            .map(|(j, e)| (binning.bin_cost(j), e.norm_sqr()))
            .collect()
    }
}

pub fn evolve_binned(
    binned: &BinnedState,
    binning: &CostBinning,
    params: &AnsatzParams,
) -> Result<BinnedState> {
    binned.evolve(binning, params)
}

pub fn binned_distribution(binned: &BinnedState, binning: &CostBinning) -> Vec<(f64, f64)> {
    binned.distribution(binning)
}

/// `M = ceil(p (b-a)² / (α ε))`, clamped to `[1, MAX_NUM_BINS]`.
pub fn choose_num_bins(p: usize, a: f64, b: f64, alpha: f64, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must be in (0, 1], got {alpha}")));
    }
    if !(b >= a) {
        return Err(Error::InvalidParameter(format!("need a <= b, got a={a}, b={b}")));
    }
    let m = (p as f64 * (b - a).powi(2) / (alpha * epsilon)).ceil();
    Ok((m as usize).clamp(1, MAX_NUM_BINS))
}
