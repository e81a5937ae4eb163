//! Random matrices and states drawn from unitarily invariant ensembles.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{BipartiteOperator, ComplexMatrix};

/// A complex number with independent standard normal real and imaginary parts.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniformly distributed unit vector in `C^d`.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // A zero draw has probability zero but would poison the normalization.
        if norm > 0.0 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-random unitary from the QR factorization of a Ginibre matrix,
/// with the phases of `R`'s diagonal folded into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_complex_matrix(n, n, rng).to_nalgebra();
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let rjj = r[(j, j)];
        let norm = rjj.norm();
        let phase = if norm > 0.0 { rjj / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_nalgebra(&q)
}

pub fn random_bipartite_unitary<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> BipartiteOperator {
    BipartiteOperator::new(d1, d2, random_unitary(d1 * d2, rng))
        .expect("random unitary has the requested shape")
}

/// `U1 ⊗ U2` with independent Haar factors.
pub fn random_local_unitary<R: Rng + ?Sized>(d1: usize, d2: usize, rng: &mut R) -> BipartiteOperator {
    let a = random_unitary(d1, rng);
    let b = random_unitary(d2, rng);
    BipartiteOperator::product(&a, &b).expect("square factors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=9 {
            let u = random_unitary(n, &mut rng);
            assert!(u.is_unitary(1e-12), "n = {n}");
        }
    }

    #[test]
    fn states_are_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in 1..=6 {
            let v = haar_state(d, &mut rng);
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }
}
