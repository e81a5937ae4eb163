//! Ising coupling `H = g S1^z ⊗ S2^z` and its closed-form entangling power.
//!
//! The evolution is parametrized by the phase `θ = −g t` (with `ħ = 1`), so
//! `U(θ) = Σ e^{iθ m1 m2} |m1 m2⟩⟨m1 m2|`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::linalg::{BipartiteOperator, ComplexMatrix};
use crate::power::EpConstants;
use crate::spin::SpinSystem;

/// Period of the entangling power in `θ`.
pub const ISING_PERIOD: f64 = 2.0 * PI;

/// Below this `|sin(x/2)|` the ratio `sin²(n x/2) / sin²(x/2)` takes its limit `n²`.
pub const SINGULARITY_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsingParams {
    pub s1: SpinSystem,
    pub s2: SpinSystem,
    pub theta: f64,
}

impl IsingParams {
    pub fn new(s1: SpinSystem, s2: SpinSystem, theta: f64) -> Self {
        Self { s1, s2, theta }
    }

    pub fn d1(&self) -> usize {
        self.s1.dim()
    }

    pub fn d2(&self) -> usize {
        self.s2.dim()
    }
}

/// `sin²(n x / 2) / sin²(x / 2)`, equal to `(1 − cos n x) / (1 − cos x)`,
/// continued to `n²` where the denominator vanishes.
pub fn sin_sq_ratio(n: usize, x: f64) -> f64 {
    let den = (0.5 * x).sin();
    if den.abs() < SINGULARITY_THRESHOLD {
        return (n * n) as f64;
    }
    let num = (0.5 * n as f64 * x).sin();
    (num * num) / (den * den)
}

pub fn ising_evolution(p: &IsingParams) -> BipartiteOperator {
    let phases: Vec<Complex64> = p
        .s1
        .magnetic_numbers()
        .flat_map(|m1| {
            p.s2
                .magnetic_numbers()
                .map(move |m2| Complex64::from_polar(1.0, p.theta * m1 * m2))
        })
        .collect();
    BipartiteOperator::new(p.d1(), p.d2(), ComplexMatrix::diagonal(&phases))
        .expect("diagonal has d1*d2 entries")
}

/// `Σ_{M=1}^{d1−1} 2(d1 − M) sin²(d2 M θ/2) / sin²(M θ/2)`.
fn oscillating_sum(d1: usize, d2: usize, theta: f64) -> f64 {
    (1..d1)
        .map(|m| 2.0 * (d1 - m) as f64 * sin_sq_ratio(d2, m as f64 * theta))
        .sum()
}

/// Closed form of `Tr[(U^R U^R†)²]` for the Ising evolution.
pub fn ising_trace_term(p: &IsingParams) -> f64 {
    let (d1, d2) = (p.d1(), p.d2());
    (d1 * d2 * d2) as f64 + oscillating_sum(d1, d2, p.theta)
}

/// Closed-form entangling power of the Ising evolution.
pub fn ising_ep_analytic(p: &IsingParams) -> f64 {
    let (d1, d2) = (p.d1(), p.d2());
    let (a, b) = (d1 as f64, d2 as f64);
    let g = EpConstants::new(d1, d2).g;
    (a - 1.0) * b / ((a + 1.0) * (b + 1.0)) - g * oscillating_sum(d1, d2, p.theta)
}

/// Qubit-qudit special case (`d1 = 2`):
/// `d2/(3(d2+1)) − (1 − cos d2θ) / (3 d2 (d2+1)(1 − cos θ))`.
pub fn ising_qubit_qudit_ep(d2: usize, theta: f64) -> f64 {
    let b = d2 as f64;
    b / (3.0 * (b + 1.0)) - sin_sq_ratio(d2, theta) / (3.0 * b * (b + 1.0))
}

/// Long-time average `(1 − 2/(d1+1))(1 − 2/(d2+1))`.
pub fn ising_ep_time_average(s1: SpinSystem, s2: SpinSystem) -> f64 {
    let a = s1.dim() as f64;
    let b = s2.dim() as f64;
    (1.0 - 2.0 / (a + 1.0)) * (1.0 - 2.0 / (b + 1.0))
}

/// `θ`-average of the realigned trace term, `d1 d2 (d1 + d2 − 1)`.
pub fn ising_trace_term_average(s1: SpinSystem, s2: SpinSystem) -> f64 {
    let (a, b) = (s1.dim() as f64, s2.dim() as f64);
    a * b * (a + b - 1.0)
}
