//! Spin-s angular momentum matrices.
//!
//! Basis states are ordered by magnetic quantum number from `m = s` down to
//! `m = −s`, so basis index `k` carries `m = s − k`.

use std::fmt;

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};

/// A spin of length `s = two_s / 2`, living in a `2s + 1` dimensional space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinSystem {
    two_s: u32,
}

impl SpinSystem {
    pub const ZERO: Self = Self { two_s: 0 };
    pub const HALF: Self = Self { two_s: 1 };
    pub const ONE: Self = Self { two_s: 2 };

    pub const fn new(two_s: u32) -> Self {
        Self { two_s }
    }

    /// The spin whose Hilbert space has dimension `d`.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("spin dimension must be at least 1".into()));
        }
        let two_s = u32::try_from(d - 1)
            .map_err(|_| Error::Domain(format!("spin dimension {d} is too large")))?;
        Ok(Self { two_s })
    }

    #[inline]
    pub fn two_s(self) -> u32 {
        self.two_s
    }

    #[inline]
    pub fn s(self) -> f64 {
        f64::from(self.two_s) / 2.0
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.two_s as usize + 1
    }

    /// `s(s + 1)`.
    pub fn casimir(self) -> f64 {
        let s = self.s();
        s * (s + 1.0)
    }

    /// Magnetic quantum numbers in basis order, `s, s − 1, …, −s`.
    pub fn magnetic_numbers(self) -> impl Iterator<Item = f64> {
        let s = self.s();
        (0..self.dim()).map(move |k| s - k as f64)
    }
}

impl fmt::Display for SpinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_s.is_multiple_of(2) {
            write!(f, "{}", self.two_s / 2)
        } else {
            write!(f, "{}/2", self.two_s)
        }
    }
}

/// Cartesian components `(Sx, Sy, Sz)` of a spin.
#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl SpinOperators {
    pub fn components(&self) -> [&ComplexMatrix; 3] {
        [&self.x, &self.y, &self.z]
    }
}

/// Raising operator `S⁺|m⟩ = √(s(s+1) − m(m+1)) |m+1⟩`.
pub fn raising(s: SpinSystem) -> ComplexMatrix {
    let d = s.dim();
    let ms: Vec<f64> = s.magnetic_numbers().collect();
    let mut sp = ComplexMatrix::zeros(d, d);
    for k in 1..d {
        let m = ms[k];
        sp[(k - 1, k)] = Complex64::new((s.casimir() - m * (m + 1.0)).max(0.0).sqrt(), 0.0);
    }
    sp
}

pub fn spin_operators(s: SpinSystem) -> SpinOperators {
    let d = s.dim();
    let sp = raising(s);
    let sm = sp.adjoint();
    let x = (&sp + &sm).scale_real(0.5);
    // (S⁺ − S⁻) / 2i
    let y = (&sp - &sm).scale(Complex64::new(0.0, -0.5));
    let z = ComplexMatrix::diagonal(
        &s.magnetic_numbers()
            .map(|m| Complex64::new(m, 0.0))
            .collect::<Vec<_>>(),
    );
    debug_assert_eq!(z.rows(), d);
    SpinOperators { x, y, z }
}

/// `S1·S2 = Σ_i S1^i ⊗ S2^i` on the product space.
pub fn spin_dot(s1: SpinSystem, s2: SpinSystem) -> ComplexMatrix {
    let a = spin_operators(s1);
    let b = spin_operators(s2);
    let mut out = ComplexMatrix::zeros(s1.dim() * s2.dim(), s1.dim() * s2.dim());
    for (p, q) in a.components().into_iter().zip(b.components()) {
        out = &out + &kron(p, q);
    }
    out
}

/// `e^{−iπ S^y}` built from the spectral decomposition of `S^y`.
///
/// The eigenvalues of `S^y` are the magnetic numbers, so they are snapped to
/// the nearest half-integer before exponentiating.
pub fn rotation_y_pi(s: SpinSystem) -> ComplexMatrix {
    let sy = spin_operators(s).y;
    let eig = SymmetricEigen::new(sy.to_nalgebra());
    let vecs = ComplexMatrix::from_nalgebra(&eig.eigenvectors);
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| {
            let m = (2.0 * lambda).round() / 2.0;
            Complex64::from_polar(1.0, -std::f64::consts::PI * m)
        })
        .collect();
    &(&vecs * &ComplexMatrix::diagonal(&phases)) * &vecs.adjoint()
}
