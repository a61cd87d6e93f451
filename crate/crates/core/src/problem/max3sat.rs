use serde::{Deserialize, Serialize};

use super::bitstring::{bit_mask, BitString};
use crate::error::{Error, Result};

/// A clause `x_i ∨ x_j ∨ x_k` over literal labels.
///
/// Label 0 is the constant-false literal `x_0`, labels `1..=n` are the
/// variables and labels `n+1..=2n` their negations (`x_{n+i} = ¬x_i`).
/// Labels are stored sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Clause {
    pub labels: [usize; 3],
    pub weight: f64,
}

impl Clause {
    pub fn new(labels: [usize; 3], weight: f64) -> Self {
        let mut labels = labels;
        labels.sort_unstable();
        Clause { labels, weight }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Max3SatInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
    // Per clause: (index mask of literals that satisfy when set, mask of
    // literals that satisfy when clear). Derived from `clauses`.
    masks: Vec<(usize, usize)>,
}

impl Max3SatInstance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidInstance("num_vars must be positive".into()));
        }
        let mut canonical = Vec::with_capacity(clauses.len());
        for c in clauses {
            let c = Clause::new(c.labels, c.weight);
            if c.labels[2] > 2 * num_vars {
                return Err(Error::InvalidInstance(format!(
                    "clause label {} exceeds 2n = {}",
                    c.labels[2],
                    2 * num_vars
                )));
            }
            if !(c.weight >= 0.0) || !c.weight.is_finite() {
                return Err(Error::InvalidInstance(format!(
                    "clause weight must be finite and nonnegative, got {}",
                    c.weight
                )));
            }
            canonical.push(c);
        }
        let masks = canonical
            .iter()
            .map(|c| literal_masks(num_vars, &c.labels))
            .collect();
        Ok(Max3SatInstance {
            num_vars,
            clauses: canonical,
            masks,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn total_weight(&self) -> f64 {
        self.clauses.iter().map(|c| c.weight).sum()
    }

    /// `f(x) = Σ w_{ijk} [(1-x_i)(1-x_j)(1-x_k) - 1]` on a basis index.
    pub fn cost_index(&self, index: usize) -> f64 {
        let mut f = 0.0;
        for (c, &(pos, neg)) in self.clauses.iter().zip(&self.masks) {
            let satisfied = index & pos != 0 || !index & neg != 0;
            if satisfied {
                f -= c.weight;
            }
        }
        f
    }

    /// Total weight of clauses satisfied by `x`.
    pub fn satisfied_weight(&self, x: &BitString) -> f64 {
        -self.cost_index(x.index())
    }
}

fn literal_masks(n: usize, labels: &[usize; 3]) -> (usize, usize) {
    let mut pos = 0usize;
    let mut neg = 0usize;
    for &l in labels {
        if l == 0 {
            continue;
        } else if l <= n {
            pos |= bit_mask(n, l);
        } else {
            neg |= bit_mask(n, l - n);
        }
    }
    (pos, neg)
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RawMax3Sat {
    pub num_vars: usize,
    pub clauses: Vec<(usize, usize, usize, f64)>,
}

impl TryFrom<RawMax3Sat> for Max3SatInstance {
    type Error = Error;

    fn try_from(raw: RawMax3Sat) -> Result<Self> {
        let clauses = raw
            .clauses
            .into_iter()
            .map(|(i, j, k, w)| Clause::new([i, j, k], w))
            .collect();
        Max3SatInstance::new(raw.num_vars, clauses)
    }
}

impl From<&Max3SatInstance> for RawMax3Sat {
    fn from(inst: &Max3SatInstance) -> Self {
        RawMax3Sat {
            num_vars: inst.num_vars,
            clauses: inst
                .clauses
                .iter()
                .map(|c| (c.labels[0], c.labels[1], c.labels[2], c.weight))
                .collect(),
        }
    }
}
