use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_stability: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Random restarts used by the tuning routines.
    pub restarts: usize,
    pub rng_seed: u64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 0.05,
            iterations: 200,
            beta1: 0.9,
            beta2: 0.999,
            eps_stability: 1e-8,
            fd_step: 1e-4,
            restarts: 4,
            rng_seed: 0,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return bad("beta1 and beta2 must be in [0, 1)");
        }
        if !(self.eps_stability > 0.0) || !(self.fd_step > 0.0) {
            return bad("eps_stability and fd_step must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// `(iteration, objective)`; iteration 0 is the initial point.
    pub trace: Vec<(usize, f64)>,
}

/// ADAM on central finite-difference gradients. Returns the best point
/// visited, not the last one.
pub fn adam_minimize<F>(mut objective: F, init: &[f64], cfg: &AdamConfig) -> Result<OptResult>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let dim = init.len();
    let mut x = init.to_vec();
    let f0 = objective(&x);
    if !f0.is_finite() {
        return Err(Error::NonFinite {
            iteration: 0,
            point: x,
        });
    }
    let mut best = (x.clone(), f0);
    let mut trace = vec![(0, f0)];
    let mut m = vec![0.0; dim];
    let mut v = vec![0.0; dim];
    let mut probe = x.clone();
    let h = cfg.fd_step;
    for it in 1..=cfg.iterations {
        for k in 0..dim {
            probe[k] = x[k] + h;
            let up = objective(&probe);
            probe[k] = x[k] - h;
            let down = objective(&probe);
            probe[k] = x[k];
            let g = (up - down) / (2.0 * h);
            if !g.is_finite() {
                return Err(Error::NonFinite {
                    iteration: it,
                    point: x,
                });
            }
            m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g;
            v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g * g;
        }
        let c1 = 1.0 - cfg.beta1.powi(it as i32);
        let c2 = 1.0 - cfg.beta2.powi(it as i32);
        for k in 0..dim {
            let m_hat = m[k] / c1;
            let v_hat = v[k] / c2;
            x[k] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.eps_stability);
        }
        probe.copy_from_slice(&x);
        let fx = objective(&x);
        if !fx.is_finite() {
            return Err(Error::NonFinite {
                iteration: it,
                point: x,
            });
        }
        trace.push((it, fx));
        if fx < best.1 {
            best = (x.clone(), fx);
        }
    }
    Ok(OptResult {
        best_params: best.0,
        best_value: best.1,
        trace,
    })
}
