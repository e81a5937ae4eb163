//! Entangling power from the realigned and partially transposed operator.
//!
//! For a unitary `U` on `C^d1 ⊗ C^d2`, averaging the linear entropy of
//! `U|ψ1⟩|ψ2⟩` over Haar-random product inputs gives
//!
//! ```text
//! e_p(U) = F − G · ( Tr[(U^R U^R†)²] + Tr[(U^T1 U^T1†)²] )
//! F = (d1 d2 + 1) / ((d1 + 1)(d2 + 1))
//! G = 1 / (d1 d2 (d1 + 1)(d2 + 1))
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{partial_transpose, realign, trace_power4, BipartiteOperator, UNITARITY_TOL};

/// Slack allowed outside `[0, 1 − 1/min(d1, d2)]` before a value is rejected.
pub const RANGE_TOL: f64 = 1e-10;

/// Normalization slack for [`linear_entropy`] inputs.
pub const NORM_TOL: f64 = 1e-10;

/// The dimension-dependent constants `F` and `G`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpConstants {
    pub f: f64,
    pub g: f64,
}

impl EpConstants {
    pub fn new(d1: usize, d2: usize) -> Self {
        let (a, b) = (d1 as f64, d2 as f64);
        Self {
            f: (a * b + 1.0) / ((a + 1.0) * (b + 1.0)),
            g: 1.0 / (a * b * (a + 1.0) * (b + 1.0)),
        }
    }

    /// Haar second-moment constant `C_d = 1 / (d (d + 1))`.
    pub fn haar_moment(d: usize) -> f64 {
        let d = d as f64;
        1.0 / (d * (d + 1.0))
    }

    pub fn combine(&self, traces: EpTraces) -> f64 {
        self.f - self.g * (traces.realigned + traces.partial_transposed)
    }
}

/// The two trace terms that determine the entangling power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpTraces {
    /// `Tr[(U^R U^R†)²]`
    pub realigned: f64,
    /// `Tr[(U^T1 U^T1†)²]`
    pub partial_transposed: f64,
}

/// Upper bound of the linear entropy on a `d1 × d2` system.
pub fn max_linear_entropy(d1: usize, d2: usize) -> f64 {
    1.0 - 1.0 / d1.min(d2) as f64
}

/// Rejects values outside the attainable range instead of clamping them.
pub(crate) fn check_range(value: f64, d1: usize, d2: usize, slack: f64) -> Result<f64> {
    let hi = max_linear_entropy(d1, d2);
    if !value.is_finite() || value < -slack || value > hi + slack {
        return Err(Error::Numeric(format!(
            "entangling power {value:e} outside [0, {hi}] for a {d1}x{d2} system"
        )));
    }
    Ok(value)
}

/// Linear entropy `1 − Tr ρ1²` of a pure state on `C^d1 ⊗ C^d2`.
pub fn linear_entropy(psi: &[Complex64], d1: usize, d2: usize) -> Result<f64> {
    if psi.len() != d1 * d2 {
        return Err(Error::Shape(format!(
            "state of length {} on a {d1}x{d2} system",
            psi.len()
        )));
    }
    let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if !norm_sqr.is_finite() {
        return Err(Error::Numeric("state has non-finite amplitudes".into()));
    }
    if (norm_sqr.sqrt() - 1.0).abs() > NORM_TOL {
        return Err(Error::Domain(format!(
            "state is not normalized: |psi| = {:.12}",
            norm_sqr.sqrt()
        )));
    }
    Ok(linear_entropy_unnormalized(psi, d1, d2))
}

/// Linear entropy of `ψ/|ψ|` with no normalization check. Tiny negative
/// roundoff is mapped to zero.
pub(crate) fn linear_entropy_unnormalized(psi: &[Complex64], d1: usize, d2: usize) -> f64 {
    // ρ1 = M M† with M[i, α] = ψ[i·d2 + α].
    let mut purity = 0.0;
    let mut norm_sqr = 0.0;
    for i in 0..d1 {
        let row_i = &psi[i * d2..(i + 1) * d2];
        norm_sqr += row_i.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for j in 0..d1 {
            let row_j = &psi[j * d2..(j + 1) * d2];
            let rho_ij: Complex64 = row_i.iter().zip(row_j).map(|(a, b)| a * b.conj()).sum();
            purity += rho_ij.norm_sqr();
        }
    }
    (1.0 - purity / (norm_sqr * norm_sqr)).max(0.0)
}

/// Both trace terms, computed by rearranging the materialized operator.
pub fn trace_terms(u: &BipartiteOperator) -> Result<EpTraces> {
    Ok(EpTraces {
        realigned: trace_power4(&realign(u))?,
        partial_transposed: trace_power4(partial_transpose(u).matrix())?,
    })
}

/// Entangling power of a unitary, requiring unitarity within [`UNITARITY_TOL`].
pub fn entangling_power(u: &BipartiteOperator) -> Result<f64> {
    entangling_power_with_tol(u, UNITARITY_TOL)
}

/// Entangling power with an explicit unitarity tolerance.
pub fn entangling_power_with_tol(u: &BipartiteOperator, unitarity_tol: f64) -> Result<f64> {
    u.ensure_unitary(unitarity_tol)?;
    let value = EpConstants::new(u.d1(), u.d2()).combine(trace_terms(u)?);
    check_range(value, u.d1(), u.d2(), RANGE_TOL.max(4.0 * unitarity_tol))
}
