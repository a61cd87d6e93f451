use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvarConfig {
    pub alpha: f64,
}

impl Default for CvarConfig {
    fn default() -> Self {
        CvarConfig { alpha: 0.5 }
    }
}

impl CvarConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must be in (0, 1], got {alpha}")))
    }
}

/// Mean of the lower `α`-tail of a discrete distribution given as
/// `(value, probability)` pairs, with the boundary atom weighted by the
/// fraction `α - Σ_{i<j} p_i`.
pub fn cvar_discrete(pairs: &[(f64, f64)], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if pairs.iter().any(|&(v, p)| !(p >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "probabilities must be nonnegative and values finite".into(),
        ));
    }
    let total: f64 = pairs.iter().map(|&(_, p)| p).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(cvar_sorted(sorted.iter().copied(), alpha))
}

/// Lower-tail mean over pairs already sorted by ascending value. No
/// validation; the caller guarantees a probability distribution.
pub fn cvar_sorted<I: IntoIterator<Item = (f64, f64)>>(pairs: I, alpha: f64) -> f64 {
    let mut acc = 0.0;
    let mut mass = 0.0;
    let mut last = f64::NAN;
    for (v, p) in pairs {
        last = v;
        if mass + p >= alpha {
            acc += (alpha - mass) * v;
            return acc / alpha;
        }
        acc += p * v;
        mass += p;
    }
    // rounding left the cumulative mass just short of alpha
    (acc + (alpha - mass) * last) / alpha
}
