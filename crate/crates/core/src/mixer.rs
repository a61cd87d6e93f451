//! Permutation families for feasibility-preserving quantum walks.
//!
//! A family `T = {τ_1..τ_m}` of order-2 local permutations of `{0,1}^n`
//! implicitly defines the walk graph: `x ~ τ_i(x)` with edge weight
//! `w_i(θ) = 1 / (1 + e^{-η_i θ})`, where `η_i = f(z) - f(τ_i(z))` is fixed by
//! the seed `z`. Production code never materializes the `2^n × 2^n`
//! adjacency; [`adjacency_dense`] exists for oracle checks only.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{bit_mask, BitString, ProblemInstance, MAX_VARS};

/// Largest `n` for which a dense adjacency may be built.
pub const DENSE_MAX_VARS: usize = 12;
/// Largest `n` accepted by [`verify_assumption`].
pub const VERIFY_MAX_VARS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalPermutation {
    /// Flip bit `i` (1-based).
    BitFlip(usize),
    /// Exchange bits `a` and `b` (1-based, `a != b`).
    Transposition(usize, usize),
}

impl LocalPermutation {
    fn check(&self, n: usize) -> Result<()> {
        let in_range = |i: usize| i >= 1 && i <= n;
        match *self {
            LocalPermutation::BitFlip(i) if !in_range(i) => {
                Err(Error::IndexOutOfRange { index: i, n })
            }
            LocalPermutation::Transposition(a, b) if !in_range(a) || !in_range(b) => {
                Err(Error::IndexOutOfRange {
                    index: if in_range(a) { b } else { a },
                    n,
                })
            }
            LocalPermutation::Transposition(a, b) if a == b => Err(Error::InvalidParameter(
                format!("transposition ({a}, {b}) is the identity"),
            )),
            _ => Ok(()),
        }
    }

    /// Apply to a basis index of an `n`-bit string. Indices must be valid.
    #[inline]
    pub fn apply_index(&self, n: usize, x: usize) -> usize {
        match *self {
            LocalPermutation::BitFlip(i) => x ^ bit_mask(n, i),
            LocalPermutation::Transposition(a, b) => {
                let (ma, mb) = (bit_mask(n, a), bit_mask(n, b));
                if (x & ma != 0) != (x & mb != 0) {
                    x ^ ma ^ mb
                } else {
                    x
                }
            }
        }
    }

    /// Coordinates the permutation may change.
    pub fn touched(&self) -> Vec<usize> {
        match *self {
            LocalPermutation::BitFlip(i) => vec![i],
            LocalPermutation::Transposition(a, b) => vec![a, b],
        }
    }
}

pub fn apply_permutation(tau: &LocalPermutation, x: &BitString) -> Result<BitString> {
    tau.check(x.len())?;
    BitString::new(x.len(), tau.apply_index(x.len(), x.index()))
}

/// `w = 1 / (1 + e^{-η θ})`.
pub fn sigmoid_weight(eta: f64, theta: f64) -> f64 {
    let s = eta * theta;
    // both branches avoid overflow in exp
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub t: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermutationFamily {
    n: usize,
    permutations: Vec<LocalPermutation>,
    etas: Vec<f64>,
    seed: BitString,
}

impl PermutationFamily {
    /// Family from explicit permutations; `η_i` evaluated against `instance`.
    pub fn from_permutations(
        instance: &ProblemInstance,
        seed: BitString,
        permutations: Vec<LocalPermutation>,
    ) -> Result<Self> {
        let n = instance.num_vars();
        let f_seed = instance.evaluate_cost(&seed)?;
        let mut etas = Vec::with_capacity(permutations.len());
        for p in &permutations {
            p.check(n)?;
            etas.push(f_seed - instance.cost_index(p.apply_index(n, seed.index())));
        }
        Ok(PermutationFamily {
            n,
            permutations,
            etas,
            seed,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.permutations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutations.is_empty()
    }

    pub fn permutations(&self) -> &[LocalPermutation] {
        &self.permutations
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn seed(&self) -> &BitString {
        &self.seed
    }

    pub fn weights(&self, theta: f64) -> Vec<f64> {
        self.etas.iter().map(|&e| sigmoid_weight(e, theta)).collect()
    }

    /// True when every member is a bit flip.
    pub fn is_bit_flip(&self) -> bool {
        self.permutations
            .iter()
            .all(|p| matches!(p, LocalPermutation::BitFlip(_)))
    }

    pub fn is_transposition(&self) -> bool {
        self.permutations
            .iter()
            .all(|p| matches!(p, LocalPermutation::Transposition(..)))
    }

    /// Copy without the permutation at `position`.
    pub fn without(&self, position: usize) -> Self {
        let mut out = self.clone();
        out.permutations.remove(position);
        out.etas.remove(position);
        out
    }
}

/// Standard family for the instance and a feasible seed `z`: all `n` bit
/// flips for Max 3SAT, the complete bipartite transpositions between
/// `supp(z)` and its complement for Max Bisection.
pub fn build_family(instance: &ProblemInstance, z: &BitString) -> Result<PermutationFamily> {
    if !instance.is_feasible(z)? {
        return Err(Error::Infeasible(format!("seed {z} is not feasible")));
    }
    let n = instance.num_vars();
    let permutations = match instance {
        ProblemInstance::Max3Sat(_) => (1..=n).map(LocalPermutation::BitFlip).collect(),
        ProblemInstance::MaxBisection(_) => {
            let (ones, zeros): (Vec<usize>, Vec<usize>) = (1..=n).partition(|&i| z.bit(i));
            ones.iter()
                .flat_map(|&a| zeros.iter().map(move |&b| LocalPermutation::Transposition(a, b)))
                .collect()
        }
    };
    PermutationFamily::from_permutations(instance, *z, permutations)
}

/// `A_θ = Σ_i w_i(θ) H_i` as a dense real symmetric matrix (oracle use).
pub fn adjacency_dense(family: &PermutationFamily, theta: f64) -> Result<DMatrix<f64>> {
    let n = family.num_vars();
    if n > DENSE_MAX_VARS {
        return Err(Error::Capacity {
            n,
            max: DENSE_MAX_VARS,
        });
    }
    let dim = 1usize << n;
    let mut a = DMatrix::zeros(dim, dim);
    for (p, w) in family.permutations().iter().zip(family.weights(theta)) {
        for x in 0..dim {
            let y = p.apply_index(n, x);
            if y != x {
                a[(y, x)] += w;
            }
        }
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub order_two: bool,
    pub closure: bool,
    /// One entry per feasible part: whether the walk graph restricted to it
    /// is connected.
    pub parts_connected: Vec<bool>,
    /// Size of each feasible part and how many of its members were reached.
    pub part_sizes: Vec<(usize, usize)>,
    /// No edge joins a feasible string to an infeasible one.
    pub complement_separated: bool,
    pub failures: Vec<String>,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check order-2, closure and per-part connectivity of `family` over the
/// instance's feasible set by exhaustive enumeration.
pub fn verify_assumption(
    instance: &ProblemInstance,
    family: &PermutationFamily,
) -> Result<AssumptionReport> {
    let n = instance.num_vars();
    if n > VERIFY_MAX_VARS.min(MAX_VARS) {
        return Err(Error::Capacity {
            n,
            max: VERIFY_MAX_VARS,
        });
    }
    let dim = 1usize << n;
    let feas = instance.feasibility();
    let mut failures = Vec::new();

    let mut order_two = true;
    for p in family.permutations() {
        if let Err(e) = p.check(n) {
            failures.push(format!("{p:?}: {e}"));
            order_two = false;
            continue;
        }
        let involutive = (0..dim).all(|x| p.apply_index(n, p.apply_index(n, x)) == x);
        let nontrivial = (0..dim).any(|x| p.apply_index(n, x) != x);
        if !(involutive && nontrivial) {
            order_two = false;
            failures.push(format!("{p:?} does not have order 2"));
        }
    }
    if !order_two {
        return Ok(AssumptionReport {
            order_two,
            closure: false,
            parts_connected: vec![],
            part_sizes: vec![],
            complement_separated: false,
            failures,
        });
    }

    let mut closure = true;
    let mut complement_separated = true;
    for p in family.permutations() {
        for x in 0..dim {
            let y = p.apply_index(n, x);
            if feas.part_of(x) != feas.part_of(y) {
                closure = false;
                if feas.contains(x) != feas.contains(y) {
                    complement_separated = false;
                }
            }
        }
    }
    if !closure {
        failures.push("some permutation does not map each part to itself".into());
    }
    if !complement_separated {
        failures.push("feasible set is connected to its complement".into());
    }

    let mut parts_connected = Vec::new();
    let mut part_sizes = Vec::new();
    for part in 0..feas.num_parts() {
        let members: Vec<usize> = (0..dim).filter(|&x| feas.part_of(x) == Some(part)).collect();
        let Some(&start) = members.first() else {
            parts_connected.push(true);
            part_sizes.push((0, 0));
            continue;
        };
        let mut seen = vec![false; dim];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 0usize;
        while let Some(x) = queue.pop_front() {
            if feas.part_of(x) == Some(part) {
                reached += 1;
            }
            for p in family.permutations() {
                let y = p.apply_index(n, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let connected = reached == members.len();
        if !connected {
            failures.push(format!(
                "part {part}: reached {reached} of {} members",
                members.len()
            ));
        }
        parts_connected.push(connected);
        part_sizes.push((members.len(), reached));
    }

    Ok(AssumptionReport {
        order_two,
        closure,
        parts_connected,
        part_sizes,
        complement_separated,
        failures,
    })
}
