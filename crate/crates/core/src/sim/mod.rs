//! Statevector simulation of CBQOA and GM-QAOA circuits.

mod ansatz;
mod state;

pub use ansatz::{
    cbqoa_ansatz, feasible_uniform_state, gm_qaoa_ansatz, layer_states, run_layers, walk_state,
    AnsatzParams, CircuitConfig,
};
pub use state::{xy_schedule, StateVector, PROB_CUTOFF};
