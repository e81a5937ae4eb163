//! Time averages of a scalar function by the trapezoid rule.

use crate::error::{Error, Result};

/// The interval a time average runs over.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AveragingWindow {
    /// Exactly one period of a periodic function. The trapezoid rule over a
    /// full period converges spectrally for smooth integrands.
    Period(f64),
    /// Running average over `[0, t_max]`.
    Horizon(f64),
}

impl AveragingWindow {
    pub fn length(self) -> f64 {
        match self {
            Self::Period(t) | Self::Horizon(t) => t,
        }
    }
}

/// Trapezoid-rule mean of `f` over `window` with `steps` panels.
pub fn time_average_ep(f: impl Fn(f64) -> f64, window: AveragingWindow, steps: usize) -> Result<f64> {
    let len = window.length();
    if !(len.is_finite() && len > 0.0) {
        return Err(Error::Domain(format!("averaging window must be positive, got {len}")));
    }
    if steps < 2 {
        return Err(Error::Domain(format!("need at least 2 panels, got {steps}")));
    }
    let h = len / steps as f64;
    let sample = |t: f64| {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("integrand is {v} at t = {t}")))
        }
    };
    let mut acc = 0.5 * (sample(0.0)? + sample(len)?);
    for k in 1..steps {
        acc += sample(k as f64 * h)?;
    }
    Ok(acc / steps as f64)
}
