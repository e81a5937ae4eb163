//! Entangling power of an operator given as a sum of product terms,
//! `U = Σ_i c_i A_i ⊗ B_i`, using only traces of the small factors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, BipartiteOperator, ComplexMatrix, IMAG_RESIDUE_TOL, UNITARITY_TOL};
use crate::power::{check_range, EpConstants, EpTraces, RANGE_TOL};

/// Largest `d1·d2` for which the sum is materialized to validate unitarity.
pub const MAX_VALIDATION_DIM: usize = 64;

#[derive(Clone, Debug)]
pub struct ProductTerm {
    pub coeff: Complex64,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct ProductTermSum {
    d1: usize,
    d2: usize,
    terms: Vec<ProductTerm>,
}

impl ProductTermSum {
    pub fn new(d1: usize, d2: usize) -> Self {
        Self { d1, d2, terms: Vec::new() }
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, coeff: Complex64, a: ComplexMatrix, b: ComplexMatrix) -> Result<()> {
        if a.rows() != self.d1 || a.cols() != self.d1 || b.rows() != self.d2 || b.cols() != self.d2 {
            return Err(Error::Shape(format!(
                "term factors {}x{} and {}x{} do not match a {}x{} system",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                self.d1,
                self.d2
            )));
        }
        self.terms.push(ProductTerm { coeff, a, b });
        Ok(())
    }

    pub fn with_term(mut self, coeff: Complex64, a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        self.push(coeff, a, b)?;
        Ok(self)
    }

    /// Operator-Schmidt style expansion of `u` over matrix units,
    /// `U = Σ U_{iα,jβ} e_ij ⊗ e_αβ`, skipping zero coefficients.
    pub fn from_operator(u: &BipartiteOperator) -> Self {
        let (d1, d2) = (u.d1(), u.d2());
        let mut sum = Self::new(d1, d2);
        for i in 0..d1 {
            for j in 0..d1 {
                for al in 0..d2 {
                    for be in 0..d2 {
                        let c = u.entry(i, al, j, be);
                        if c.norm_sqr() > 0.0 {
                            sum.terms.push(ProductTerm {
                                coeff: c,
                                a: ComplexMatrix::unit(d1, i, j),
                                b: ComplexMatrix::unit(d2, al, be),
                            });
                        }
                    }
                }
            }
        }
        sum
    }

    /// `Σ c_i A_i ⊗ B_i` as a dense operator.
    pub fn materialize(&self) -> Result<BipartiteOperator> {
        let n = self.d1 * self.d2;
        let mut m = ComplexMatrix::zeros(n, n);
        for t in &self.terms {
            m = &m + &kron(&t.a, &t.b).scale(t.coeff);
        }
        BipartiteOperator::new(self.d1, self.d2, m)
    }

    /// Both trace terms from the quadruple sums over term indices:
    ///
    /// ```text
    /// Tr[(U^R U^R†)²]   = Σ c_i c_j* c_k c_l* Tr[A_i A_j†] Tr[A_k A_l†] Tr[B_i B_l†] Tr[B_k B_j†]
    /// Tr[(U^T1 U^T1†)²] = Σ c_i c_j* c_k c_l* Tr[A_i A_j† A_k A_l†] Tr[B_i B_l† B_k B_j†]
    /// ```
    pub fn trace_terms(&self) -> Result<EpTraces> {
        let n = self.terms.len();
        let a_adj: Vec<ComplexMatrix> = self.terms.iter().map(|t| t.a.adjoint()).collect();
        let b_adj: Vec<ComplexMatrix> = self.terms.iter().map(|t| t.b.adjoint()).collect();
        // Pair products A_i A_j† and B_i B_j†, indexed [i * n + j].
        let mut aa = Vec::with_capacity(n * n);
        let mut bb = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                aa.push(self.terms[i].a.matmul(&a_adj[j])?);
                bb.push(self.terms[i].b.matmul(&b_adj[j])?);
            }
        }
        let tr_aa: Vec<Complex64> = aa.iter().map(ComplexMatrix::trace).collect();
        let tr_bb: Vec<Complex64> = bb.iter().map(ComplexMatrix::trace).collect();
        let c: Vec<Complex64> = self.terms.iter().map(|t| t.coeff).collect();

        let mut realigned = Complex64::new(0.0, 0.0);
        let mut transposed = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let cij = c[i] * c[j].conj();
                for k in 0..n {
                    for l in 0..n {
                        let coeff = cij * c[k] * c[l].conj();
                        if coeff.norm_sqr() == 0.0 {
                            continue;
                        }
                        realigned += coeff
                            * tr_aa[i * n + j]
                            * tr_aa[k * n + l]
                            * tr_bb[i * n + l]
                            * tr_bb[k * n + j];
                        let ta = trace_of_product(&aa[i * n + j], &aa[k * n + l]);
                        let tb = trace_of_product(&bb[i * n + l], &bb[k * n + j]);
                        transposed += coeff * ta * tb;
                    }
                }
            }
        }
        for (z, what) in [(realigned, "realigned"), (transposed, "partially transposed")] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Numeric(format!("{what} trace is not finite")));
            }
            if z.im.abs() > IMAG_RESIDUE_TOL * z.re.abs().max(1.0) {
                return Err(Error::Numeric(format!(
                    "{what} trace has imaginary part {:e}",
                    z.im
                )));
            }
        }
        Ok(EpTraces {
            realigned: realigned.re,
            partial_transposed: transposed.re,
        })
    }
}

/// `Tr(X Y)` without forming the product.
fn trace_of_product(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    let n = x.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..n {
        for k in 0..x.cols() {
            acc += x[(r, k)] * y[(k, r)];
        }
    }
    acc
}

/// Entangling power from a product decomposition. When `d1·d2 ≤ 64` the
/// sum is materialized first and must be unitary.
pub fn entangling_power_from_decomposition(sum: &ProductTermSum) -> Result<f64> {
    if sum.is_empty() {
        return Err(Error::Domain("empty decomposition is not unitary".into()));
    }
    if sum.d1 * sum.d2 <= MAX_VALIDATION_DIM {
        sum.materialize()?.ensure_unitary(UNITARITY_TOL)?;
    }
    let value = EpConstants::new(sum.d1, sum.d2).combine(sum.trace_terms()?);
    check_range(value, sum.d1, sum.d2, RANGE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::{entangling_power, trace_terms};
    use crate::random::{random_bipartite_unitary, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn single_product_term_has_zero_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let sum = ProductTermSum::new(2, 3)
            .with_term(one(), random_unitary(2, &mut rng), random_unitary(3, &mut rng))
            .unwrap();
        let t = sum.trace_terms().unwrap();
        assert!((t.realigned - 36.0).abs() < 1e-10);
        assert!((t.partial_transposed - 6.0).abs() < 1e-10);
        assert!(entangling_power_from_decomposition(&sum).unwrap().abs() < 1e-10);
    }

    #[test]
    fn matrix_unit_expansion_matches_dense_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for (d1, d2) in [(2, 2), (2, 3)] {
            let u = random_bipartite_unitary(d1, d2, &mut rng);
            let sum = ProductTermSum::from_operator(&u);
            assert!(sum.materialize().unwrap().matrix().max_abs_diff(u.matrix()) < 1e-15);
            let fast = trace_terms(&u).unwrap();
            let slow = sum.trace_terms().unwrap();
            assert!((fast.realigned - slow.realigned).abs() < 1e-9);
            assert!((fast.partial_transposed - slow.partial_transposed).abs() < 1e-9);
            let a = entangling_power_from_decomposition(&sum).unwrap();
            let b = entangling_power(&u).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_unitary_and_bad_shapes() {
        let sum = ProductTermSum::new(2, 2)
            .with_term(Complex64::new(2.0, 0.0), ComplexMatrix::identity(2), ComplexMatrix::identity(2))
            .unwrap();
        assert!(matches!(entangling_power_from_decomposition(&sum), Err(Error::Domain(_))));
        let mut sum = ProductTermSum::new(2, 2);
        assert!(sum
            .push(one(), ComplexMatrix::identity(3), ComplexMatrix::identity(2))
            .is_err());
        assert!(entangling_power_from_decomposition(&sum).is_err());
    }
}
