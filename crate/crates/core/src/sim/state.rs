use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mixer::{LocalPermutation, PermutationFamily};
use crate::problem::{bit_mask, BitString, MAX_VARS};

/// Probabilities below this are dropped from [`StateVector::measurement_distribution`].
pub const PROB_CUTOFF: f64 = 1e-15;

/// Dense `n`-qubit state. Amplitude `k` belongs to the basis string with
/// index `k` (bit 1 most significant, see [`BitString`]).
///
/// Gate methods mutate the state in place.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn basis(n: usize, z: &BitString) -> Result<Self> {
        if z.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: z.len(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[z.index()] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::Capacity { n, max: MAX_VARS });
        }
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                found: amps.len(),
            });
        }
        Ok(StateVector { n, amps })
    }

    /// Equal superposition over the given basis indices.
    pub fn uniform_over(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        let a = 1.0 / (indices.len() as f64).sqrt();
        for &i in indices {
            amps[i] = Complex64::new(a, 0.0);
        }
        StateVector::from_amplitudes(n, amps)
    }

    /// Haar-like random state from normalized complex Gaussians.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        use rand_distr::StandardNormal;
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let mut s = StateVector::from_amplitudes(n, amps)?;
        s.normalize();
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let s = self.norm();
        if s > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= s);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `max_k |self_k - other_k|`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖self - other‖₂`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Born-rule distribution; entries below [`PROB_CUTOFF`] are dropped.
    pub fn measurement_distribution(&self) -> BTreeMap<BitString, f64> {
        self.amps
            .iter()
            .enumerate()
            .filter_map(|(k, a)| {
                let p = a.norm_sqr();
                (p >= PROB_CUTOFF).then(|| (BitString::new(self.n, k).expect("valid index"), p))
            })
            .collect()
    }

    /// Multiply amplitude `x` by `e^{-i γ f(x)}`.
    pub fn apply_phase_separator(&mut self, cost_diagonal: &[f64], gamma: f64) -> Result<()> {
        if cost_diagonal.len() != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                found: cost_diagonal.len(),
            });
        }
        if gamma == 0.0 {
            return Ok(());
        }
        for (a, &f) in self.amps.iter_mut().zip(cost_diagonal) {
            *a *= Complex64::from_polar(1.0, -gamma * f);
        }
        Ok(())
    }

    /// `e^{i φ X}` on qubit `q` (1-based).
    fn apply_x_rotation(&mut self, q: usize, phi: f64) {
        let m = bit_mask(self.n, q);
        let (c, s) = (phi.cos(), phi.sin());
        let is = Complex64::new(0.0, s);
        for k in 0..self.amps.len() {
            if k & m == 0 {
                let (a0, a1) = (self.amps[k], self.amps[k | m]);
                self.amps[k] = a0 * c + a1 * is;
                self.amps[k | m] = a1 * c + a0 * is;
            }
        }
    }

    /// Exact hypercube walk `e^{i A t} = ⊗_j e^{i w_j t X_j}`.
    pub fn ctqw_hypercube(&mut self, weights: &[f64], t: f64) -> Result<()> {
        if weights.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: weights.len(),
            });
        }
        for (j, &w) in weights.iter().enumerate() {
            self.apply_x_rotation(j + 1, w * t);
        }
        Ok(())
    }

    /// `e^{i φ (X_a X_b + Y_a Y_b)}`: identity on `|00>, |11>`; on the
    /// `{|01>, |10>}` block `|01> -> cos 2φ |01> + i sin 2φ |10>`.
    pub fn apply_xy_gate(&mut self, a: usize, b: usize, phi: f64) -> Result<()> {
        let n = self.n;
        for q in [a, b] {
            if q == 0 || q > n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
        }
        if a == b {
            return Err(Error::InvalidParameter("XY gate needs two distinct qubits".into()));
        }
        self.xy_unchecked(bit_mask(n, a), bit_mask(n, b), phi);
        Ok(())
    }

    fn xy_unchecked(&mut self, ma: usize, mb: usize, phi: f64) {
        let (c, s) = ((2.0 * phi).cos(), (2.0 * phi).sin());
        let is = Complex64::new(0.0, s);
        for k in 0..self.amps.len() {
            // visit each {01, 10} pair once, from the member with a set
            if k & ma != 0 && k & mb == 0 {
                let l = k ^ ma ^ mb;
                let (u, v) = (self.amps[k], self.amps[l]);
                self.amps[k] = u * c + v * is;
                self.amps[l] = v * c + u * is;
            }
        }
    }

    /// Trotterized walk for a transposition family:
    /// `[Π_k Π_{(a,b) ∈ R_k} e^{i w_ab (XX+YY) t/(2N)}]^N` with rounds
    /// `R_k = {(a_i, b_{(i+k) mod n/2})}` over `supp(z) = {a_i}` and its
    /// complement `{b_i}`.
    pub fn ctqw_trotter_xy(
        &mut self,
        family: &PermutationFamily,
        theta: f64,
        t: f64,
        steps: usize,
    ) -> Result<()> {
        if steps == 0 {
            return Err(Error::InvalidParameter("trotter steps must be >= 1".into()));
        }
        let schedule = xy_schedule(family, theta)?;
        let n = self.n;
        let scale = t / (2.0 * steps as f64);
        let gates: Vec<(usize, usize, f64)> = schedule
            .into_iter()
            .map(|(a, b, w)| (bit_mask(n, a), bit_mask(n, b), w * scale))
            .collect();
        for _ in 0..steps {
            for &(ma, mb, phi) in &gates {
                self.xy_unchecked(ma, mb, phi);
            }
        }
        Ok(())
    }

    /// Walk `e^{iA_θ t}` for the family: exact for bit flips, Trotterized
    /// with `steps` repetitions for transpositions.
    pub fn apply_walk(
        &mut self,
        family: &PermutationFamily,
        theta: f64,
        t: f64,
        steps: usize,
    ) -> Result<()> {
        if family.num_vars() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: family.num_vars(),
            });
        }
        if family.is_bit_flip() {
            let mut weights = vec![0.0; self.n];
            for (p, w) in family.permutations().iter().zip(family.weights(theta)) {
                if let LocalPermutation::BitFlip(i) = *p {
                    weights[i - 1] += w;
                }
            }
            self.ctqw_hypercube(&weights, t)
        } else {
            self.ctqw_trotter_xy(family, theta, t, steps)
        }
    }

    /// `|φ> + (e^{-iβ} - 1) <ψ|φ> |ψ>`, i.e. `e^{-iβ|ψ><ψ|}` applied exactly.
    pub fn apply_rank1_mixer(&mut self, psi: &StateVector, beta: f64) -> Result<()> {
        if psi.amps.len() != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                found: psi.amps.len(),
            });
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(norm));
        }
        if beta == 0.0 {
            return Ok(());
        }
        let overlap = psi.inner(self);
        let coef = (Complex64::from_polar(1.0, -beta) - 1.0) * overlap;
        for (a, p) in self.amps.iter_mut().zip(&psi.amps) {
            *a += coef * p;
        }
        Ok(())
    }
}

/// Gate list `(a, b, w_ab(θ))` in round order `R_0, R_1, ..`.
pub fn xy_schedule(family: &PermutationFamily, theta: f64) -> Result<Vec<(usize, usize, f64)>> {
    if !family.is_transposition() {
        return Err(Error::KindMismatch(
            "Trotterized XY walk requires a transposition family".into(),
        ));
    }
    let seed = family.seed();
    let ones = seed.support();
    let zeros: Vec<usize> = (1..=seed.len()).filter(|&i| !seed.bit(i)).collect();
    let weights = family.weights(theta);
    let lookup = |a: usize, b: usize| {
        family
            .permutations()
            .iter()
            .position(|p| {
                matches!(*p, LocalPermutation::Transposition(x, y) if (x, y) == (a, b) || (x, y) == (b, a))
            })
            .map(|k| weights[k])
    };
    let half = ones.len();
    if half != zeros.len() {
        return Err(Error::KindMismatch(
            "round schedule needs a seed with weight n/2".into(),
        ));
    }
    let mut gates = Vec::with_capacity(family.len());
    for k in 0..half {
        for (i, &a) in ones.iter().enumerate() {
            let b = zeros[(i + k) % half];
            if let Some(w) = lookup(a, b) {
                gates.push((a, b, w));
            }
        }
    }
    if gates.len() != family.len() {
        return Err(Error::KindMismatch(
            "family is not the bipartite transposition set of its seed".into(),
        ));
    }
    Ok(gates)
}
