//! Haar Monte Carlo estimate of the entangling power.
//!
//! Sample `k` draws its product state from a ChaCha8 generator seeded with
//! `seed` and switched to stream `k`, so every sample is a pure function of
//! `(seed, k)`. Samples are evaluated in parallel, collected in index order
//! and reduced sequentially, which keeps the estimate bitwise reproducible
//! for any thread count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{kron_vec, BipartiteOperator, UNITARITY_TOL};
use crate::power::linear_entropy_unnormalized;
use crate::random::haar_state;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MonteCarloEstimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.std_error
    }
}

/// `|ψ1⟩ ⊗ |ψ2⟩` with each factor Haar-distributed on its unit sphere.
pub fn haar_product_state<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> Vec<Complex64> {
    let a = haar_state(d1, rng);
    let b = haar_state(d2, rng);
    kron_vec(&a, &b)
}

/// Generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn monte_carlo_ep(u: &BipartiteOperator, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
    monte_carlo_ep_with_tol(u, samples, seed, UNITARITY_TOL)
}

pub fn monte_carlo_ep_with_tol(
    u: &BipartiteOperator,
    samples: usize,
    seed: u64,
    unitarity_tol: f64,
) -> Result<MonteCarloEstimate> {
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    u.ensure_unitary(unitarity_tol)?;
    let (d1, d2) = (u.d1(), u.d2());
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = sample_rng(seed, k);
            let psi = haar_product_state(d1, d2, &mut rng);
            let out = u.matrix().apply(&psi).expect("state length matches operator");
            linear_entropy_unnormalized(&out, d1, d2)
        })
        .collect();

    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    if !mean.is_finite() || !var.is_finite() {
        return Err(Error::Numeric("Monte Carlo estimate is not finite".into()));
    }
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::linear_entropy;

    #[test]
    fn one_dimensional_factors() {
        let mut rng = sample_rng(1, 0);
        let psi = haar_product_state(1, 1, &mut rng);
        assert_eq!(psi.len(), 1);
        assert!((psi[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_states_are_unentangled() {
        let mut rng = sample_rng(2, 0);
        for (d1, d2) in [(2, 2), (2, 3), (4, 3)] {
            for _ in 0..50 {
                let psi = haar_product_state(d1, d2, &mut rng);
                let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
                assert!((norm - 1.0).abs() < 1e-12);
                assert!(linear_entropy(&psi, d1, d2).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn first_moment_of_haar_state() {
        // E|⟨0|ψ⟩|² = 1/d for a Haar state.
        let draws = 100_000;
        let mut rng = sample_rng(3, 0);
        let vals: Vec<f64> = (0..draws).map(|_| haar_state(2, &mut rng)[0].norm_sqr()).collect();
        let n = draws as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!((mean - 0.5).abs() < 5.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn identity_estimate_is_zero() {
        let est = monte_carlo_ep(&BipartiteOperator::identity(2, 3), 500, 9).unwrap();
        assert!(est.mean.abs() < 1e-12);
        assert!(est.std_error < 1e-12);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let u = BipartiteOperator::swap(2);
        let a = monte_carlo_ep(&u, 1000, 42).unwrap();
        let b = monte_carlo_ep(&u, 1000, 42).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_ep(&u, 1000, 43).unwrap();
        assert_eq!(c.seed, 43);
    }

    #[test]
    fn rejects_too_few_samples() {
        let u = BipartiteOperator::identity(2, 2);
        assert!(matches!(monte_carlo_ep(&u, 1, 0), Err(Error::Domain(_))));
    }
}
