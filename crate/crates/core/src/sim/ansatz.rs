use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::mixer::{build_family, WalkParams};
use crate::problem::{BitString, ProblemInstance};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl AnsatzParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return Err(Error::LengthMismatch {
                expected: betas.len(),
                found: gammas.len(),
            });
        }
        Ok(AnsatzParams { betas, gammas })
    }

    pub fn zeros(p: usize) -> Self {
        AnsatzParams {
            betas: vec![0.0; p],
            gammas: vec![0.0; p],
        }
    }

    pub fn depth(&self) -> usize {
        self.betas.len()
    }

    /// Same parameters followed by `extra` identity layers.
    pub fn padded(&self, extra: usize) -> Self {
        let mut out = self.clone();
        out.betas.extend(std::iter::repeat_n(0.0, extra));
        out.gammas.extend(std::iter::repeat_n(0.0, extra));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitConfig {
    /// Trotter repetitions `N` for walks that are not implemented exactly.
    pub trotter_steps: usize,
}

impl Default for CircuitConfig {
    fn default() -> Self {
        CircuitConfig { trotter_steps: 3 }
    }
}

/// Walk state `|ψ> = e^{iA_θ t}|z>` for the instance's standard family.
pub fn walk_state(
    instance: &ProblemInstance,
    z: &BitString,
    walk: WalkParams,
    config: &CircuitConfig,
) -> Result<StateVector> {
    let family = build_family(instance, z)?;
    let mut state = StateVector::basis(instance.num_vars(), z)?;
    state.apply_walk(&family, walk.theta, walk.t, config.trotter_steps)?;
    Ok(state)
}

/// Apply `p` layers (phase separator `γ_l`, then reflection phase `β_l`
/// about `psi`) to `psi` and return every intermediate state, starting
/// with `psi` itself.
pub fn layer_states(
    psi: &StateVector,
    cost_diagonal: &[f64],
    params: &AnsatzParams,
) -> Result<Vec<StateVector>> {
    let mut states = Vec::with_capacity(params.depth() + 1);
    let mut phi = psi.clone();
    states.push(phi.clone());
    for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
        phi.apply_phase_separator(cost_diagonal, gamma)?;
        phi.apply_rank1_mixer(psi, beta)?;
        states.push(phi.clone());
    }
    Ok(states)
}

/// `e^{-iβ_p|ψ><ψ|} e^{-iγ_p H_f} ... e^{-iβ_1|ψ><ψ|} e^{-iγ_1 H_f} |ψ>`.
pub fn run_layers(
    psi: &StateVector,
    cost_diagonal: &[f64],
    params: &AnsatzParams,
) -> Result<StateVector> {
    let mut phi = psi.clone();
    for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
        phi.apply_phase_separator(cost_diagonal, gamma)?;
        phi.apply_rank1_mixer(psi, beta)?;
    }
    Ok(phi)
}

pub fn cbqoa_ansatz(
    instance: &ProblemInstance,
    z: &BitString,
    walk: WalkParams,
    params: &AnsatzParams,
    config: &CircuitConfig,
) -> Result<StateVector> {
    let psi = walk_state(instance, z, walk, config)?;
    run_layers(&psi, &instance.ising_diagonal()?, params)
}

/// `|F> = |F|^{-1/2} Σ_{x ∈ F} |x>`.
pub fn feasible_uniform_state(instance: &ProblemInstance) -> Result<StateVector> {
    StateVector::uniform_over(instance.num_vars(), &instance.feasible_indices()?)
}

/// Grover-mixer QAOA: the same layers with `|ψ>` replaced by `|F>`.
pub fn gm_qaoa_ansatz(instance: &ProblemInstance, params: &AnsatzParams) -> Result<StateVector> {
    let psi = feasible_uniform_state(instance)?;
    run_layers(&psi, &instance.ising_diagonal()?, params)
}
