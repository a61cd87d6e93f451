//! Independent reference implementations used by the integration tests.
//! Nothing here calls the library's cost or evolution code.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use cbqoa::problem::{Clause, Edge, Max3SatInstance, MaxBisectionInstance};

/// Bits of basis index `x`, bit 1 first.
pub fn bits_of(n: usize, x: usize) -> Vec<u8> {
    (1..=n).map(|i| ((x >> (n - i)) & 1) as u8).collect()
}

/// Literal value with label 0 = false and labels `n+i` negated.
pub fn literal_value(n: usize, bits: &[u8], label: usize) -> u8 {
    if label == 0 {
        0
    } else if label <= n {
        bits[label - 1]
    } else {
        1 - bits[label - n - 1]
    }
}

/// `Σ w [(1-x_i)(1-x_j)(1-x_k) - 1]`, term by term.
pub fn sat_cost(n: usize, clauses: &[(usize, usize, usize, f64)], x: usize) -> f64 {
    let b = bits_of(n, x);
    clauses
        .iter()
        .map(|&(i, j, k, w)| {
            let prod = (1 - literal_value(n, &b, i)) as f64
                * (1 - literal_value(n, &b, j)) as f64
                * (1 - literal_value(n, &b, k)) as f64;
            w * (prod - 1.0)
        })
        .sum()
}

/// `Σ w_ab (2 x_a x_b - x_a - x_b)`.
pub fn bisection_cost(n: usize, edges: &[(usize, usize, f64)], x: usize) -> f64 {
    let b = bits_of(n, x);
    edges
        .iter()
        .map(|&(a, c, w)| {
            let (xa, xc) = (b[a - 1] as f64, b[c - 1] as f64);
            w * (2.0 * xa * xc - xa - xc)
        })
        .sum()
}

pub fn sat_instance(n: usize, clauses: &[(usize, usize, usize, f64)]) -> Max3SatInstance {
    Max3SatInstance::new(
        n,
        clauses
            .iter()
            .map(|&(i, j, k, w)| Clause::new([i, j, k], w))
            .collect(),
    )
    .unwrap()
}

pub fn bisection_instance(n: usize, edges: &[(usize, usize, f64)]) -> MaxBisectionInstance {
    MaxBisectionInstance::new(
        n,
        edges
            .iter()
            .map(|&(a, b, weight)| Edge { a, b, weight })
            .collect(),
    )
    .unwrap()
}

pub fn random_clauses<R: Rng>(n: usize, m: usize, rng: &mut R) -> Vec<(usize, usize, usize, f64)> {
    (0..m)
        .map(|_| {
            let mut l = [0usize; 3];
            for v in l.iter_mut() {
                *v = rng.random_range(0..=2 * n);
            }
            (l[0], l[1], l[2], rng.random::<f64>())
        })
        .collect()
}

/// Clauses over three distinct variables, each satisfied by `planted`.
pub fn planted_clauses<R: Rng>(
    n: usize,
    m: usize,
    planted: usize,
    rng: &mut R,
) -> Vec<(usize, usize, usize, f64)> {
    let b = bits_of(n, planted);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let vars = rand::seq::index::sample(rng, n, 3);
        let mut l = [0usize; 3];
        for (slot, v) in l.iter_mut().zip(vars.iter()) {
            *slot = if rng.random::<bool>() { v + 1 } else { v + 1 + n };
        }
        if l.iter().any(|&x| literal_value(n, &b, x) == 1) {
            out.push((l[0], l[1], l[2], rng.random::<f64>()));
        }
    }
    out
}

pub fn random_edges<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if rng.random::<f64>() < p {
                out.push((a, b, rng.random_range(-1.0..1.0)));
            }
        }
    }
    out
}

/// `(β, feasible)` per basis index from a cost oracle and feasibility rule.
pub fn beta_table(n: usize, cost: impl Fn(usize) -> f64, feasible: impl Fn(usize) -> bool) -> Vec<Option<f64>> {
    let fs: Vec<(usize, f64)> = (0..1usize << n).filter(|&x| feasible(x)).map(|x| (x, cost(x))).collect();
    let mean = fs.iter().map(|p| p.1).sum::<f64>() / fs.len() as f64;
    let best = fs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let mut out = vec![None; 1 << n];
    for (x, f) in fs {
        out[x] = Some((mean - f) / (mean - best));
    }
    out
}

/// `e^{iAt}` for a real symmetric `A` via its eigendecomposition.
pub fn expm_i_sym(a: &DMatrix<f64>, t: f64) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(a.clone());
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        a.nrows(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, l * t)),
    ));
    &v * d * v.adjoint()
}

pub fn apply(u: &DMatrix<Complex64>, psi: &[Complex64]) -> Vec<Complex64> {
    let v = DVector::from_column_slice(psi);
    (u * v).iter().copied().collect()
}

pub fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn l2_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Lower-α-tail mean from scratch: expand into sorted atoms, then walk.
pub fn cvar_oracle(mut pairs: Vec<(f64, f64)>, alpha: f64) -> f64 {
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut remaining = alpha;
    let mut acc = 0.0;
    for (v, p) in pairs {
        let take = p.min(remaining);
        acc += take * v;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    acc / alpha
}
