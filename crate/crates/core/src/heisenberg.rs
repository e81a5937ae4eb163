//! SU(2)-invariant couplings of two spins.
//!
//! Any Hamiltonian commuting with the total spin is `H = Σ_n E_n P_n`, where
//! `P_n` projects onto total spin `n ∈ {s2 − s1, …, s2 + s1}` and is a
//! polynomial in `S1·S2`. The isotropic Heisenberg coupling `H = S1·S2` has
//! `E_n = λ_n = ½[n(n+1) − s1(s1+1) − s2(s2+1)]`. Times are dimensionless
//! (`ħ = 1`, unit coupling).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::decomposition::ProductTermSum;
use crate::error::{Error, Result};
use crate::linalg::{BipartiteOperator, ComplexMatrix};
use crate::power::EpTraces;
use crate::spin::{spin_dot, spin_operators, SpinSystem};

/// Total spins `|s2 − s1|, …, s1 + s2` allowed by angular-momentum addition.
pub fn total_spins(s1: SpinSystem, s2: SpinSystem) -> impl Iterator<Item = SpinSystem> {
    let lo = s1.two_s().abs_diff(s2.two_s());
    let hi = s1.two_s() + s2.two_s();
    (lo..=hi).step_by(2).map(SpinSystem::new)
}

/// Eigenvalue of `S1·S2` on the total-spin-`n` subspace.
pub fn dot_eigenvalue(n: SpinSystem, s1: SpinSystem, s2: SpinSystem) -> f64 {
    0.5 * (n.casimir() - s1.casimir() - s2.casimir())
}

fn check_ordered(s1: SpinSystem, s2: SpinSystem) -> Result<()> {
    if s1 > s2 {
        return Err(Error::Domain(format!("expected s1 <= s2, got s1 = {s1}, s2 = {s2}")));
    }
    Ok(())
}

fn check_total(n: SpinSystem, s1: SpinSystem, s2: SpinSystem) -> Result<()> {
    if !total_spins(s1, s2).any(|k| k == n) {
        return Err(Error::Domain(format!(
            "total spin {n} is not reachable from {s1} and {s2}"
        )));
    }
    Ok(())
}

/// Coefficients (lowest degree first) of `Π_{k≠n} (X − λ_k) / (λ_n − λ_k)`.
fn projector_polynomial(n: SpinSystem, s1: SpinSystem, s2: SpinSystem) -> Vec<f64> {
    let ln = dot_eigenvalue(n, s1, s2);
    let mut poly = vec![1.0];
    for k in total_spins(s1, s2).filter(|&k| k != n) {
        let lk = dot_eigenvalue(k, s1, s2);
        let scale = 1.0 / (ln - lk);
        let mut next = vec![0.0; poly.len() + 1];
        for (deg, &c) in poly.iter().enumerate() {
            next[deg + 1] += c * scale;
            next[deg] -= c * lk * scale;
        }
        poly = next;
    }
    poly
}

/// Projector onto total spin `n`, as the product over the other total
/// spins `k` of `(S1·S2 − λ_k) / (λ_n − λ_k)`.
pub fn su2_projector(n: SpinSystem, s1: SpinSystem, s2: SpinSystem) -> Result<ComplexMatrix> {
    check_ordered(s1, s2)?;
    check_total(n, s1, s2)?;
    let dot = spin_dot(s1, s2);
    let dim = s1.dim() * s2.dim();
    let ln = dot_eigenvalue(n, s1, s2);
    let mut p = ComplexMatrix::identity(dim);
    for k in total_spins(s1, s2).filter(|&k| k != n) {
        let lk = dot_eigenvalue(k, s1, s2);
        let factor = (&dot - &ComplexMatrix::identity(dim).scale_real(lk)).scale_real(1.0 / (ln - lk));
        p = p.matmul(&factor)?;
    }
    Ok(p)
}

/// Spectrum `{E_n}` of an SU(2)-invariant coupling, evaluated at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergSpectrum {
    s1: SpinSystem,
    s2: SpinSystem,
    /// `E_n` for `n = s2 − s1, …, s2 + s1` in increasing order.
    energies: Vec<f64>,
    pub t: f64,
}

impl HeisenbergSpectrum {
    pub fn new(s1: SpinSystem, s2: SpinSystem, energies: Vec<f64>, t: f64) -> Result<Self> {
        check_ordered(s1, s2)?;
        let want = s1.dim();
        if energies.len() != want {
            return Err(Error::Domain(format!(
                "{want} energies needed for spins {s1} and {s2}, got {}",
                energies.len()
            )));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Numeric("non-finite energy".into()));
        }
        Ok(Self { s1, s2, energies, t })
    }

    /// Isotropic Heisenberg coupling `H = S1·S2`.
    pub fn isotropic(s1: SpinSystem, s2: SpinSystem, t: f64) -> Result<Self> {
        check_ordered(s1, s2)?;
        let energies = total_spins(s1, s2).map(|n| dot_eigenvalue(n, s1, s2)).collect();
        Self::new(s1, s2, energies, t)
    }

    pub fn s1(&self) -> SpinSystem {
        self.s1
    }

    pub fn s2(&self) -> SpinSystem {
        self.s2
    }

    /// `(n, E_n)` pairs.
    pub fn levels(&self) -> impl Iterator<Item = (SpinSystem, f64)> + '_ {
        total_spins(self.s1, self.s2).zip(self.energies.iter().copied())
    }

    pub fn at_time(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }

    /// `α_n = e^{−i t E_n}`.
    pub fn phases(&self) -> Vec<Complex64> {
        self.energies
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -self.t * e))
            .collect()
    }
}

/// `U = Σ_n e^{−i t E_n} P_n`.
pub fn su2_evolution(spec: &HeisenbergSpectrum) -> Result<BipartiteOperator> {
    let dim = spec.s1.dim() * spec.s2.dim();
    let mut u = ComplexMatrix::zeros(dim, dim);
    for ((n, _), alpha) in spec.levels().zip(spec.phases()) {
        let p = su2_projector(n, spec.s1, spec.s2)?;
        u = &u + &p.scale(alpha);
    }
    BipartiteOperator::new(spec.s1.dim(), spec.s2.dim(), u)
}

/// `U = Σ_j β_j (S1·S2)^j` expanded into product terms
/// `(S1^{i1}⋯S1^{ij}) ⊗ (S2^{i1}⋯S2^{ij})`.
pub fn su2_decomposition(spec: &HeisenbergSpectrum) -> Result<ProductTermSum> {
    let (s1, s2) = (spec.s1, spec.s2);
    let degree = s1.two_s() as usize;
    let mut beta = vec![Complex64::new(0.0, 0.0); degree + 1];
    for ((n, _), alpha) in spec.levels().zip(spec.phases()) {
        for (b, c) in beta.iter_mut().zip(projector_polynomial(n, s1, s2)) {
            *b += alpha * c;
        }
    }

    let ops1 = spin_operators(s1);
    let ops2 = spin_operators(s2);
    let comps1 = ops1.components();
    let comps2 = ops2.components();
    let mut sum = ProductTermSum::new(s1.dim(), s2.dim());
    // Words over {x, y, z} of length j, paired with their operator products.
    let mut words = vec![(ComplexMatrix::identity(s1.dim()), ComplexMatrix::identity(s2.dim()))];
    for (j, &b) in beta.iter().enumerate() {
        if j > 0 {
            words = words
                .iter()
                .flat_map(|(a, bm)| {
                    (0..3).map(move |i| (a * comps1[i], bm * comps2[i]))
                })
                .collect();
        }
        if b.norm_sqr() == 0.0 {
            continue;
        }
        for (a, bm) in &words {
            sum.push(b, a.clone(), bm.clone())?;
        }
    }
    Ok(sum)
}

/// Period in `t` of the qubit-qudit entangling power, `4π / d`.
pub fn heisenberg_period(s2: SpinSystem) -> f64 {
    4.0 * PI / s2.dim() as f64
}

fn check_qudit(s2: SpinSystem) -> Result<()> {
    if s2.two_s() < 1 {
        return Err(Error::Domain("the qudit needs spin at least 1/2".into()));
    }
    Ok(())
}

/// Expansion coefficients of the qubit-qudit isotropic evolution.
///
/// `U = β0 I + β1 S1·S2` and its partial time reversal
/// `β0 I − β1 S1·S2 = γ0 P_{s2−1/2} + γ1 P_{s2+1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitQuditCoefficients {
    pub e0: f64,
    pub e1: f64,
    pub beta0: Complex64,
    pub beta1: Complex64,
    pub gamma0: Complex64,
    pub gamma1: Complex64,
}

pub fn qubit_qudit_coefficients(s2: SpinSystem, t: f64) -> Result<QubitQuditCoefficients> {
    check_qudit(s2)?;
    let d = s2.dim() as f64;
    let e0 = -(d + 1.0) / 4.0;
    let e1 = (d - 1.0) / 4.0;
    let a0 = Complex64::from_polar(1.0, -t * e0);
    let a1 = Complex64::from_polar(1.0, -t * e1);
    let beta0 = ((d - 1.0) * a0 + (d + 1.0) * a1) / (2.0 * d);
    let beta1 = 2.0 * (a1 - a0) / d;
    Ok(QubitQuditCoefficients {
        e0,
        e1,
        beta0,
        beta1,
        gamma0: beta0 - e0 * beta1,
        gamma1: beta0 - e1 * beta1,
    })
}

/// `U = β0 I⊗I + β1 Σ_i S1^i ⊗ S2^i` as four product terms.
pub fn heisenberg_qubit_qudit_decomposition(s2: SpinSystem, t: f64) -> Result<ProductTermSum> {
    let c = qubit_qudit_coefficients(s2, t)?;
    let ops1 = spin_operators(SpinSystem::HALF);
    let ops2 = spin_operators(s2);
    let mut sum = ProductTermSum::new(2, s2.dim());
    sum.push(c.beta0, ComplexMatrix::identity(2), ComplexMatrix::identity(s2.dim()))?;
    for (a, b) in ops1.components().into_iter().zip(ops2.components()) {
        sum.push(c.beta1, a.clone(), b.clone())?;
    }
    Ok(sum)
}

/// Closed forms of both trace terms for the qubit-qudit isotropic evolution:
///
/// ```text
/// Tr[(U^R U^R†)²]   = 4d²|β0|⁴ + (d² − 1)² d² |β1|⁴ / 192
/// Tr[(U^T1 U^T1†)²] = (d − 1)|γ0|⁴ + (d + 1)|γ1|⁴
/// ```
pub fn heisenberg_trace_terms(s2: SpinSystem, t: f64) -> Result<EpTraces> {
    let c = qubit_qudit_coefficients(s2, t)?;
    let d = s2.dim() as f64;
    let p4 = |z: Complex64| z.norm_sqr() * z.norm_sqr();
    Ok(EpTraces {
        realigned: 4.0 * d * d * p4(c.beta0) + (d * d - 1.0).powi(2) * d * d * p4(c.beta1) / 192.0,
        partial_transposed: (d - 1.0) * p4(c.gamma0) + (d + 1.0) * p4(c.gamma1),
    })
}

/// Closed-form entangling power of `exp(−i t S1·S2)` for a spin-1/2 coupled
/// to a spin `s2` of dimension `d`:
///
/// ```text
/// e_p = 4(d − 1)/(9d⁴) · [3d³ − f(d) sin²(dt/4)] · sin²(dt/4),   f(d) = 2(6 − d + d³)
/// ```
pub fn heisenberg_qubit_qudit_ep_analytic(s2: SpinSystem, t: f64) -> Result<f64> {
    check_qudit(s2)?;
    let d = s2.dim() as f64;
    let f = 2.0 * (6.0 - d + d * d * d);
    let sq = (d * t / 4.0).sin().powi(2);
    Ok(4.0 * (d - 1.0) / (9.0 * d.powi(4)) * (3.0 * d * d * d - f * sq) * sq)
}

/// Long-time average `(d − 1)(d³ + d − 6) / (3d⁴)`.
pub fn heisenberg_ep_time_average(s2: SpinSystem) -> Result<f64> {
    check_qudit(s2)?;
    let d = s2.dim() as f64;
    Ok((d - 1.0) * (d * d * d + d - 6.0) / (3.0 * d.powi(4)))
}
