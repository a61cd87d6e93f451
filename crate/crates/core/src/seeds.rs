//! Classical seed algorithms: vector relaxations solved directly over unit
//! vectors (projected first-order ascent), plus randomized rounding.
//!
//! For 3SAT the stored `v_0` is the reference vector for "true": rounding
//! sets `x_i = 1` when `v_i` falls on the same side of a random hyperplane
//! as `v_0`. The constant-false literal is therefore `-v_0`, and the
//! negated literal `x_{n+i}` is `-v_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{BitString, Max3SatInstance, MaxBisectionInstance, ProblemInstance, ProblemKind};

/// Default `s` for the s-linear rounding function.
pub const RPR2_S: f64 = 0.605;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpConfig {
    pub iterations: usize,
    pub step_size: f64,
    /// Initial balance penalty for bisection; doubled while violated.
    pub balance_penalty: f64,
    pub rng_seed: u64,
}

impl Default for SdpConfig {
    fn default() -> Self {
        SdpConfig {
            iterations: 2000,
            step_size: 0.1,
            balance_penalty: 10.0,
            rng_seed: 0,
        }
    }
}

impl SdpConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 || !(self.step_size > 0.0) || !(self.balance_penalty > 0.0) {
            return Err(Error::InvalidParameter(
                "iterations, step_size and balance_penalty must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitVectorSet {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl UnitVectorSet {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map_or(0, Vec::len);
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let norm = dot(v, v).sqrt();
            if (norm - 1.0).abs() > 1e-8 {
                return Err(Error::NotNormalized(norm));
            }
        }
        Ok(UnitVectorSet { dim, vectors })
    }

    fn random<R: Rng + ?Sized>(count: usize, dim: usize, rng: &mut R) -> Self {
        let vectors = (0..count)
            .map(|_| {
                let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                normalize(&mut v);
                v
            })
            .collect();
        UnitVectorSet { dim, vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn max_norm_error(&self) -> f64 {
        self.vectors
            .iter()
            .map(|v| (dot(v, v).sqrt() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    } else {
        v[0] = 1.0;
    }
}

fn gaussian_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Projected ascent step: move each vector along the tangential part of its
/// gradient row and renormalize.
fn ascend(vs: &mut [Vec<f64>], grad: &[Vec<f64>], eta: f64) {
    for (v, g) in vs.iter_mut().zip(grad) {
        let radial = dot(v, g);
        for (x, gi) in v.iter_mut().zip(g) {
            *x += eta * (gi - radial * *x);
        }
        normalize(v);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpSolution {
    pub kind: ProblemKind,
    pub vectors: UnitVectorSet,
    /// Relaxation objective (unpenalized) at the returned vectors.
    pub objective: f64,
    /// `‖Σ v_i‖` for bisection, 0 for 3SAT.
    pub residual: f64,
    pub converged: bool,
}

impl SdpSolution {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("solution serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// One randomized rounding of the stored vectors.
    pub fn round<R: Rng + ?Sized>(&self, instance: &ProblemInstance, rng: &mut R) -> Result<BitString> {
        match (self.kind, instance) {
            (ProblemKind::Max3sat, ProblemInstance::Max3Sat(_)) => kz_hyperplane_round(&self.vectors, rng),
            (ProblemKind::MaxBisection, ProblemInstance::MaxBisection(g)) => {
                fl_rpr2_round(g, &self.vectors, RPR2_S, rng)
            }
            _ => Err(Error::KindMismatch(format!(
                "solution for {} used with {} instance",
                self.kind,
                instance.kind()
            ))),
        }
    }

    /// Lowest-cost of `trials` roundings; ties keep the earliest.
    pub fn best_of<R: Rng + ?Sized>(
        &self,
        instance: &ProblemInstance,
        trials: usize,
        rng: &mut R,
    ) -> Result<BitString> {
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        let mut best = self.round(instance, rng)?;
        let mut best_cost = instance.evaluate_cost(&best)?;
        for _ in 1..trials {
            let x = self.round(instance, rng)?;
            let f = instance.evaluate_cost(&x)?;
            if f < best_cost {
                best = x;
                best_cost = f;
            }
        }
        Ok(best)
    }
}

/// Solve the relaxation matching the instance kind.
pub fn solve_sdp(instance: &ProblemInstance, cfg: &SdpConfig) -> Result<SdpSolution> {
    match instance {
        ProblemInstance::Max3Sat(s) => solve_kz_sdp(s, cfg),
        ProblemInstance::MaxBisection(g) => solve_fl_sdp(g, cfg),
    }
}

/// Solve once, then take the best of `trials` roundings drawn from `rng`.
pub fn seed_best_of<R: Rng + ?Sized>(
    instance: &ProblemInstance,
    trials: usize,
    cfg: &SdpConfig,
    rng: &mut R,
) -> Result<BitString> {
    solve_sdp(instance, cfg)?.best_of(instance, trials, rng)
}

// literal label -> (vector index, sign)
fn literal(n: usize, label: usize) -> (usize, f64) {
    if label == 0 {
        (0, -1.0)
    } else if label <= n {
        (label, 1.0)
    } else {
        (label - n, -1.0)
    }
}

fn lit_vec(vs: &[Vec<f64>], (i, s): (usize, f64)) -> Vec<f64> {
    vs[i].iter().map(|x| s * x).collect()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Value of `min(1, r1, r2, r3)` for one clause and, if `grad` is given,
/// accumulate `w ·` the subgradient of the active branch (ties to the first).
fn kz_clause(
    n: usize,
    vs: &[Vec<f64>],
    labels: &[usize; 3],
    w: f64,
    grad: Option<&mut [Vec<f64>]>,
) -> f64 {
    let false_lit = (0usize, -1.0);
    let lits = [literal(n, labels[0]), literal(n, labels[1]), literal(n, labels[2])];
    let uf = lit_vec(vs, false_lit);
    let u: Vec<Vec<f64>> = lits.iter().map(|&l| lit_vec(vs, l)).collect();
    let branches = [(0, 1, 2), (1, 0, 2), (2, 0, 1)];
    let mut best = 1.0;
    let mut active = None;
    for (b, &(p, q, r)) in branches.iter().enumerate() {
        let val = (4.0 - dot(&add(&uf, &u[p]), &add(&u[q], &u[r]))) / 4.0;
        if val < best {
            best = val;
            active = Some(b);
        }
    }
    if let (Some(g), Some(b)) = (grad, active) {
        let (p, q, r) = branches[b];
        let left = add(&uf, &u[p]);
        let right = add(&u[q], &u[r]);
        let mut push = |(idx, sign): (usize, f64), d: &[f64]| {
            for (gk, dk) in g[idx].iter_mut().zip(d) {
                *gk += w * sign * (-dk / 4.0);
            }
        };
        push(false_lit, &right);
        push(lits[p], &right);
        push(lits[q], &left);
        push(lits[r], &left);
    }
    best
}

/// Relaxation objective `Σ w · min(1, r1, r2, r3)` of a 3SAT vector set
/// (`v_0..v_n`).
pub fn kz_objective(instance: &Max3SatInstance, vectors: &UnitVectorSet) -> f64 {
    let n = instance.num_vars();
    instance
        .clauses()
        .iter()
        .map(|c| c.weight * kz_clause(n, &vectors.vectors, &c.labels, c.weight, None))
        .sum()
}

const KZ_STALL_TOL: f64 = 1e-4;

/// Projected normalized subgradient ascent on the 3SAT vector relaxation.
/// Returns the best iterate seen.
pub fn solve_kz_sdp(instance: &Max3SatInstance, cfg: &SdpConfig) -> Result<SdpSolution> {
    cfg.validate()?;
    let n = instance.num_vars();
    let dim = n + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut set = UnitVectorSet::random(n + 1, dim, &mut rng);
    let eval = |vs: &[Vec<f64>], grad: Option<&mut [Vec<f64>]>| -> f64 {
        match grad {
            None => instance
                .clauses()
                .iter()
                .map(|c| c.weight * kz_clause(n, vs, &c.labels, c.weight, None))
                .sum(),
            Some(g) => {
                let mut total = 0.0;
                for c in instance.clauses() {
                    total += c.weight * kz_clause(n, vs, &c.labels, c.weight, Some(&mut *g));
                }
                total
            }
        }
    };
    let mut best_val = eval(&set.vectors, None);
    let mut best = set.vectors.clone();
    // best value when the final tenth of the budget starts
    let mark = cfg.iterations - cfg.iterations / 10;
    let mut best_at_mark = f64::NAN;
    let mut grad = vec![vec![0.0; dim]; n + 1];
    for t in 0..cfg.iterations {
        if t == mark {
            best_at_mark = best_val;
        }
        grad.iter_mut().for_each(|g| g.iter_mut().for_each(|x| *x = 0.0));
        let val = eval(&set.vectors, Some(&mut grad));
        if val > best_val {
            best_val = val;
            best = set.vectors.clone();
        }
        let gnorm = grad.iter().map(|g| dot(g, g)).sum::<f64>().sqrt();
        if gnorm == 0.0 {
            break;
        }
        let eta = cfg.step_size / (1.0 + t as f64 / 100.0).sqrt() * (dim as f64).sqrt() / gnorm;
        ascend(&mut set.vectors, &grad, eta);
    }
    let last = eval(&set.vectors, None);
    if last > best_val {
        best_val = last;
        best = set.vectors;
    }
    if best_at_mark.is_nan() {
        best_at_mark = best_val;
    }
    // converged: the final tenth gained less than 1e-4 relative
    let converged = best_val - best_at_mark <= KZ_STALL_TOL * best_val.abs().max(1.0);
    Ok(SdpSolution {
        kind: ProblemKind::Max3sat,
        vectors: UnitVectorSet { dim, vectors: best },
        objective: best_val,
        residual: 0.0,
        converged,
    })
}

/// `x_i = 1` iff `(v·v_i)(v·v_0) >= 0` for a Gaussian direction `v`.
pub fn kz_hyperplane_round<R: Rng + ?Sized>(vectors: &UnitVectorSet, rng: &mut R) -> Result<BitString> {
    if vectors.len() < 2 {
        return Err(Error::InvalidParameter("need v_0 and at least one variable vector".into()));
    }
    let v = gaussian_direction(vectors.dim, rng);
    let s0 = dot(&v, &vectors.vectors[0]);
    let bits: Vec<bool> = vectors.vectors[1..]
        .iter()
        .map(|vi| dot(&v, vi) * s0 >= 0.0)
        .collect();
    BitString::from_bits(&bits)
}

const FL_MOMENTUM: f64 = 0.9;

/// Heavy-ball step on the product of spheres: the velocity is carried over
/// after projecting it onto the new tangent space.
fn momentum_step(vs: &mut [Vec<f64>], vel: &mut [Vec<f64>], grad: &[Vec<f64>], eta: f64, mu: f64) {
    for ((v, u), g) in vs.iter_mut().zip(vel.iter_mut()).zip(grad) {
        let radial_g = dot(v, g);
        let radial_u = dot(v, u);
        for k in 0..v.len() {
            u[k] = mu * (u[k] - radial_u * v[k]) + eta * (g[k] - radial_g * v[k]);
        }
        for (x, uk) in v.iter_mut().zip(u.iter()) {
            *x += uk;
        }
        normalize(v);
    }
}

/// Unpenalized objective `(1/2) Σ w_ij (1 - v_i·v_j)` of a bisection vector
/// set (`v_1..v_n`).
pub fn fl_objective(instance: &MaxBisectionInstance, vectors: &UnitVectorSet) -> f64 {
    instance
        .edges()
        .iter()
        .map(|e| 0.5 * e.weight * (1.0 - dot(&vectors.vectors[e.a - 1], &vectors.vectors[e.b - 1])))
        .sum()
}

fn balance_residual(vs: &[Vec<f64>]) -> f64 {
    let dim = vs[0].len();
    let mut s = vec![0.0; dim];
    for v in vs {
        for (sk, vk) in s.iter_mut().zip(v) {
            *sk += vk;
        }
    }
    dot(&s, &s).sqrt()
}

/// Projected heavy-ball ascent on `(1/2) Σ w_ij (1 - v_i·v_j) - λ‖Σ v_i‖²`.
/// The iteration budget runs in ten phases; `λ` doubles after any phase that
/// ends with `‖Σ v_i‖ > 0.05 √n`, and up to twenty extra phases are spent if
/// the bound still fails at the end of the budget.
pub fn solve_fl_sdp(instance: &MaxBisectionInstance, cfg: &SdpConfig) -> Result<SdpSolution> {
    cfg.validate()?;
    let n = instance.num_vertices();
    let dim = n + 1;
    let tol = 0.05 * (n as f64).sqrt();
    let w = instance.weight_matrix();
    let row_sum = w
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut vs = UnitVectorSet::random(n, dim, &mut rng).vectors;
    let mut lambda = cfg.balance_penalty;
    let phase_len = cfg.iterations.div_ceil(10);
    let mut grad = vec![vec![0.0; dim]; n];
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut phase = 0;
    let max_phases = 10 + 20;
    loop {
        // step 1/L scaled by step_size·10, so the default is the plain 1/L step
        let lip = 0.5 * row_sum + 2.0 * lambda * n as f64;
        let eta = (cfg.step_size * 10.0).min(1.0) / lip;
        // heavy-ball velocity, restarted whenever λ changes
        let mut vel = vec![vec![0.0; dim]; n];
        for _ in 0..phase_len {
            let mut s = vec![0.0; dim];
            for v in &vs {
                for (sk, vk) in s.iter_mut().zip(v) {
                    *sk += vk;
                }
            }
            for i in 0..n {
                for k in 0..dim {
                    let mut g = -2.0 * lambda * s[k];
                    for j in 0..n {
                        if w[i][j] != 0.0 {
                            g -= 0.5 * w[i][j] * vs[j][k];
                        }
                    }
                    grad[i][k] = g;
                }
            }
            momentum_step(&mut vs, &mut vel, &grad, eta, FL_MOMENTUM);
            let res = balance_residual(&vs);
            if res <= tol {
                let set = UnitVectorSet { dim, vectors: vs.clone() };
                let obj = fl_objective(instance, &set);
                if best.as_ref().is_none_or(|b| obj > b.0) {
                    best = Some((obj, vs.clone()));
                }
            }
        }
        phase += 1;
        let res = balance_residual(&vs);
        if res > tol {
            lambda *= 2.0;
        }
        if (phase >= 10 && res <= tol) || phase >= max_phases {
            break;
        }
    }
    let (vectors, converged) = match best {
        Some((_, b)) => (b, true),
        None => (vs, false),
    };
    let set = UnitVectorSet { dim, vectors };
    Ok(SdpSolution {
        kind: ProblemKind::MaxBisection,
        objective: fl_objective(instance, &set),
        residual: balance_residual(&set.vectors),
        vectors: set,
        converged,
    })
}

/// `0` below `-s`, `1` above `s`, `1/2 + x/(2s)` in between.
pub fn s_linear(x: f64, s: f64) -> f64 {
    if x <= -s {
        0.0
    } else if x >= s {
        1.0
    } else {
        0.5 + x / (2.0 * s)
    }
}

/// Random projection, randomized rounding, then balancing: the larger side
/// keeps its `n/2` members with the highest `ζ(i) = Σ_{j outside} w_ij`
/// (ties to the lower vertex), the rest move across. Bits set to 1 mark the
/// kept side.
pub fn fl_rpr2_round<R: Rng + ?Sized>(
    instance: &MaxBisectionInstance,
    vectors: &UnitVectorSet,
    s: f64,
    rng: &mut R,
) -> Result<BitString> {
    let n = instance.num_vertices();
    if vectors.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: vectors.len(),
        });
    }
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("s must be positive, got {s}")));
    }
    let v = gaussian_direction(vectors.dim, rng);
    let mut in_s: Vec<bool> = vectors
        .vectors
        .iter()
        .map(|vi| {
            let p = s_linear(dot(vi, &v), s);
            rng.random::<f64>() < p
        })
        .collect();
    let count = in_s.iter().filter(|&&b| b).count();
    if count < n - count {
        in_s.iter_mut().for_each(|b| *b = !*b);
    }
    let w = instance.weight_matrix();
    let mut members: Vec<(f64, usize)> = (0..n)
        .filter(|&i| in_s[i])
        .map(|i| {
            let zeta: f64 = (0..n).filter(|&j| !in_s[j]).map(|j| w[i][j]).sum();
            (zeta, i)
        })
        .collect();
    members.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut bits = vec![false; n];
    for &(_, i) in members.iter().take(n / 2) {
        bits[i] = true;
    }
    BitString::from_bits(&bits)
}
