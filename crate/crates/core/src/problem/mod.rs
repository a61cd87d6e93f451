//! Problem instances, cost functions, feasibility structure and solution
//! quality metrics.
//!
//! Both problems are phrased as minimization of a cost `f` over a feasible
//! set `F ⊆ {0,1}^n`: Max 3SAT uses `f = -(satisfied weight)` on all strings,
//! Max Bisection uses `f = -(cut weight)` restricted to strings of Hamming
//! weight `n/2`. The same polynomial is used on infeasible strings so the
//! cost diagonal is total.

mod bisection;
mod bitstring;
mod max3sat;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use bisection::{Edge, MaxBisectionInstance};
pub use bitstring::{bit_mask, BitString, MAX_VARS};
pub use max3sat::{Clause, Max3SatInstance};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Max3sat,
    MaxBisection,
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProblemKind::Max3sat => "max3sat",
            ProblemKind::MaxBisection => "max_bisection",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub enum ProblemInstance {
    Max3Sat(Max3SatInstance),
    MaxBisection(MaxBisectionInstance),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum RawInstance {
    Max3sat(max3sat::RawMax3Sat),
    MaxBisection(bisection::RawBisection),
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Ok(match raw {
            RawInstance::Max3sat(r) => ProblemInstance::Max3Sat(r.try_into()?),
            RawInstance::MaxBisection(r) => ProblemInstance::MaxBisection(r.try_into()?),
        })
    }
}

impl From<ProblemInstance> for RawInstance {
    fn from(inst: ProblemInstance) -> Self {
        match &inst {
            ProblemInstance::Max3Sat(i) => RawInstance::Max3sat(i.into()),
            ProblemInstance::MaxBisection(i) => RawInstance::MaxBisection(i.into()),
        }
    }
}

impl From<Max3SatInstance> for ProblemInstance {
    fn from(i: Max3SatInstance) -> Self {
        ProblemInstance::Max3Sat(i)
    }
}

impl From<MaxBisectionInstance> for ProblemInstance {
    fn from(i: MaxBisectionInstance) -> Self {
        ProblemInstance::MaxBisection(i)
    }
}

/// Feasible set and its partition into parts `F_1..F_k`.
///
/// Both supported problems have a single part (`k = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "weight")]
pub enum FeasibilityStructure {
    AllStrings,
    FixedHammingWeight(usize),
}

impl FeasibilityStructure {
    pub fn num_parts(&self) -> usize {
        1
    }

    pub fn contains(&self, index: usize) -> bool {
        match *self {
            FeasibilityStructure::AllStrings => true,
            FeasibilityStructure::FixedHammingWeight(w) => index.count_ones() as usize == w,
        }
    }

    /// Part containing `index`, or `None` when infeasible.
    pub fn part_of(&self, index: usize) -> Option<usize> {
        self.contains(index).then_some(0)
    }
}

impl ProblemInstance {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Canonical compact JSON (clause labels sorted, fields in fixed order).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    /// Content hash of the canonical JSON, 16 hex digits.
    pub fn content_id(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemInstance::Max3Sat(_) => ProblemKind::Max3sat,
            ProblemInstance::MaxBisection(_) => ProblemKind::MaxBisection,
        }
    }

    pub fn num_vars(&self) -> usize {
        match self {
            ProblemInstance::Max3Sat(i) => i.num_vars(),
            ProblemInstance::MaxBisection(i) => i.num_vertices(),
        }
    }

    pub fn feasibility(&self) -> FeasibilityStructure {
        match self {
            ProblemInstance::Max3Sat(_) => FeasibilityStructure::AllStrings,
            ProblemInstance::MaxBisection(i) => {
                FeasibilityStructure::FixedHammingWeight(i.num_vertices() / 2)
            }
        }
    }

    fn check_len(&self, x: &BitString) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn check_capacity(&self) -> Result<()> {
        if self.num_vars() > MAX_VARS {
            return Err(Error::Capacity {
                n: self.num_vars(),
                max: MAX_VARS,
            });
        }
        Ok(())
    }

    /// Cost of a basis index; no length check.
    pub fn cost_index(&self, index: usize) -> f64 {
        match self {
            ProblemInstance::Max3Sat(i) => i.cost_index(index),
            ProblemInstance::MaxBisection(i) => i.cost_index(index),
        }
    }

    pub fn evaluate_cost(&self, x: &BitString) -> Result<f64> {
        self.check_len(x)?;
        Ok(self.cost_index(x.index()))
    }

    pub fn is_feasible(&self, x: &BitString) -> Result<bool> {
        self.check_len(x)?;
        Ok(self.feasibility().contains(x.index()))
    }

    /// Basis indices of all feasible strings, ascending.
    pub fn feasible_indices(&self) -> Result<Vec<usize>> {
        self.check_capacity()?;
        let feas = self.feasibility();
        Ok((0..1usize << self.num_vars())
            .filter(|&x| feas.contains(x))
            .collect())
    }

    /// All feasible strings in lexicographic order.
    pub fn enumerate_feasible(&self) -> Result<Vec<BitString>> {
        let n = self.num_vars();
        self.feasible_indices()?
            .into_iter()
            .map(|x| BitString::new(n, x))
            .collect()
    }

    /// Minimizer of `f` over `F`; ties go to the lexicographically smallest.
    pub fn brute_force_optimum(&self) -> Result<(BitString, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for x in self.feasible_indices()? {
            let f = self.cost_index(x);
            if best.is_none_or(|(_, bf)| f < bf) {
                best = Some((x, f));
            }
        }
        let (x, f) = best.ok_or(Error::EmptySupport)?;
        Ok((BitString::new(self.num_vars(), x)?, f))
    }

    pub fn mean_feasible_cost(&self) -> Result<f64> {
        let feasible = self.feasible_indices()?;
        if feasible.is_empty() {
            return Err(Error::EmptySupport);
        }
        let total: f64 = feasible.iter().map(|&x| self.cost_index(x)).sum();
        Ok(total / feasible.len() as f64)
    }

    /// `β(z) = (E[f] - f(z)) / (E[f] - f(z*))` with `E` uniform over `F`.
    pub fn approx_ratio_beta(&self, z: &BitString) -> Result<f64> {
        if !self.is_feasible(z)? {
            return Err(Error::Infeasible(z.to_string()));
        }
        Quality::new(self)?.beta(self.cost_index(z.index()))
    }

    /// Diagonal of the cost Hamiltonian `H_f = Σ_x f(x)|x><x|`.
    pub fn ising_diagonal(&self) -> Result<Vec<f64>> {
        self.check_capacity()?;
        Ok((0..1usize << self.num_vars())
            .map(|x| self.cost_index(x))
            .collect())
    }
}

/// Cached reference values for β: the mean feasible cost and the optimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quality {
    pub mean_cost: f64,
    pub optimum: BitString,
    pub optimum_cost: f64,
}

impl Quality {
    pub fn new(instance: &ProblemInstance) -> Result<Self> {
        let (optimum, optimum_cost) = instance.brute_force_optimum()?;
        let mean_cost = instance.mean_feasible_cost()?;
        Ok(Quality {
            mean_cost,
            optimum,
            optimum_cost,
        })
    }

    /// β of a feasible solution with cost `f`.
    pub fn beta(&self, f: f64) -> Result<f64> {
        let denom = self.mean_cost - self.optimum_cost;
        // relative guard: all feasible costs equal up to rounding
        if denom <= 1e-12 * self.mean_cost.abs().max(1.0) {
            return Err(Error::Degenerate);
        }
        Ok((self.mean_cost - f) / denom)
    }
}
