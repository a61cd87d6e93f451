//! Classically-boosted quantum optimization at desk scale.
//!
//! A classical approximation algorithm supplies a feasible seed `z`; a
//! feasibility-preserving quantum walk spreads it into `|ψ> = e^{iA_θ t}|z>`;
//! alternating phase separators and reflections about `|ψ>` then amplify
//! good solutions. Everything is simulated exactly on state vectors of up
//! to 24 qubits, with a binned shortcut for the tuning loop.

pub mod bench;
pub mod error;
pub mod fast_sim;
pub mod mixer;
pub mod opt;
pub mod problem;
pub mod seeds;
pub mod sim;

pub use error::{Error, Result};
pub use problem::{BitString, ProblemInstance, ProblemKind};
