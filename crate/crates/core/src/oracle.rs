//! Permutation-operator form of the entangling power.
//!
//! Works on two copies of the system, `H ⊗ H = C^d1 ⊗ C^d2 ⊗ C^d1 ⊗ C^d2`,
//! with the factor transpositions `T13` and `T24` built as explicit
//! permutation matrices:
//!
//! ```text
//! e_p(U) = 1 − C_d1 C_d2 Σ_{α=0,1} [ Tr T_{1+α,3+α} + ⟨U⊗U, T_{1+α,3+α} (U⊗U) T13⟩ ]
//! ```
//!
//! This is a validation path. The doubled space has dimension `(d1 d2)²`,
//! so it is only offered for `d1 d2 ≤ 16`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, BipartiteOperator, ComplexMatrix, IMAG_RESIDUE_TOL, UNITARITY_TOL};
use crate::power::{check_range, EpConstants, RANGE_TOL};

pub const MAX_ORACLE_DIM: usize = 16;

/// Permutation matrix exchanging tensor factors `a` and `b` (zero-based) of
/// a space with factor dimensions `dims`. The swapped factors must have equal
/// dimension.
pub fn factor_transposition(dims: &[usize], a: usize, b: usize) -> Result<ComplexMatrix> {
    if a >= dims.len() || b >= dims.len() || dims[a] != dims[b] {
        return Err(Error::Shape(format!(
            "cannot transpose factors {a} and {b} of a space with dimensions {dims:?}"
        )));
    }
    let n: usize = dims.iter().product();
    let mut strides = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut t = ComplexMatrix::zeros(n, n);
    let mut digits = vec![0; dims.len()];
    for col in 0..n {
        let mut rem = col;
        for (digit, &stride) in digits.iter_mut().zip(&strides) {
            *digit = rem / stride;
            rem %= stride;
        }
        digits.swap(a, b);
        let row: usize = digits.iter().zip(&strides).map(|(d, s)| d * s).sum();
        t[(row, col)] = Complex64::new(1.0, 0.0);
    }
    Ok(t)
}

/// `⟨A, B⟩ = Tr(A† B)`.
pub fn hilbert_schmidt(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.conj() * y).sum()
}

fn real_part(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOL * z.re.abs().max(1.0) {
        return Err(Error::Numeric(format!("{what} has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// Entangling power evaluated with explicit factor permutations.
pub fn entangling_power_permutation_oracle(u: &BipartiteOperator) -> Result<f64> {
    let (d1, d2) = (u.d1(), u.d2());
    if d1 * d2 > MAX_ORACLE_DIM {
        return Err(Error::Capacity(format!(
            "permutation oracle needs d1*d2 <= {MAX_ORACLE_DIM}, got {}",
            d1 * d2
        )));
    }
    u.ensure_unitary(UNITARITY_TOL)?;

    let dims = [d1, d2, d1, d2];
    let t13 = factor_transposition(&dims, 0, 2)?;
    let t24 = factor_transposition(&dims, 1, 3)?;

    let expected = [(d1 * d2 * d2) as f64, (d1 * d1 * d2) as f64];
    for (t, want) in [&t13, &t24].into_iter().zip(expected) {
        let tr = t.trace();
        if (tr.re - want).abs() > 0.5 || tr.im != 0.0 {
            return Err(Error::Numeric(format!(
                "factor transposition trace {} differs from {want}",
                tr.re
            )));
        }
    }

    let uu = kron(u.matrix(), u.matrix());
    let rhs = uu.matmul(&t13)?;
    let mut sum = 0.0;
    for t in [&t13, &t24] {
        let overlap = hilbert_schmidt(&uu, &t.matmul(&rhs)?);
        sum += real_part(t.trace(), "Tr T")? + real_part(overlap, "Hilbert-Schmidt overlap")?;
    }
    let value = 1.0 - EpConstants::haar_moment(d1) * EpConstants::haar_moment(d2) * sum;
    check_range(value, d1, d2, RANGE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::entangling_power;
    use crate::random::random_bipartite_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn transposition_traces() {
        for (d1, d2) in [(1, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
            let dims = [d1, d2, d1, d2];
            let t13 = factor_transposition(&dims, 0, 2).unwrap();
            let t24 = factor_transposition(&dims, 1, 3).unwrap();
            assert_eq!(t13.trace().re, (d1 * d2 * d2) as f64);
            assert_eq!(t24.trace().re, (d1 * d1 * d2) as f64);
            assert!(t13.is_unitary(0.0));
            assert_eq!(&t13 * &t13, ComplexMatrix::identity(t13.rows()));
        }
    }

    #[test]
    fn transposition_maps_basis_vectors() {
        // T13 |i j k l⟩ = |k j i l⟩ on dims [2, 3, 2, 3].
        let dims = [2, 3, 2, 3];
        let t13 = factor_transposition(&dims, 0, 2).unwrap();
        let idx = |i: usize, j: usize, k: usize, l: usize| ((i * 3 + j) * 2 + k) * 3 + l;
        assert_eq!(t13[(idx(0, 2, 1, 1), idx(1, 2, 0, 1))].re, 1.0);
        assert!(factor_transposition(&dims, 0, 1).is_err());
    }

    #[test]
    fn identity_gives_zero() {
        let ep = entangling_power_permutation_oracle(&BipartiteOperator::identity(2, 2)).unwrap();
        assert!(ep.abs() < 1e-14);
    }

    #[test]
    fn matches_rearrangement_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (d1, d2) in [(2, 2), (2, 3), (3, 2)] {
            let u = random_bipartite_unitary(d1, d2, &mut rng);
            let a = entangling_power_permutation_oracle(&u).unwrap();
            let b = entangling_power(&u).unwrap();
            assert!((a - b).abs() < 1e-9, "{d1}x{d2}: {a} vs {b}");
        }
    }

    #[test]
    fn capacity_guard() {
        let u = BipartiteOperator::identity(3, 6);
        assert!(matches!(
            entangling_power_permutation_oracle(&u),
            Err(Error::Capacity(_))
        ));
    }
}
