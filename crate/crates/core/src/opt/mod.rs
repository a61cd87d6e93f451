//! CVaR objective and ADAM-based parameter tuning.

mod adam;
mod cvar;
mod tuning;

pub use adam::{adam_minimize, AdamConfig, OptResult};
pub use cvar::{cvar_discrete, cvar_sorted, CvarConfig};
pub use tuning::{
    tune_ansatz_params, tune_walk_params, write_trace_csv, AnsatzObjective, AnsatzTuning,
    SimBackend, SortedSupport, WalkTuning,
};
