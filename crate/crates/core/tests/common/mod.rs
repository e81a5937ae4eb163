//! Reference implementations used only by the test suites. They follow the
//! textbook definitions index by index and share no code with the library
//! routines they check.

#![allow(dead_code)]

use entpow::{BipartiteOperator, Complex64, ComplexMatrix};
use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

pub fn from_dmatrix(m: &DMatrix<Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// `exp(−i t H)` for Hermitian `H`, via its eigendecomposition.
pub fn hermitian_evolution(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = SymmetricEigen::new(to_dmatrix(h));
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -t * e)));
    from_dmatrix(&(v * phases * v.adjoint()))
}

/// `Tr[(M M†)²]` by forming the fourth power explicitly.
pub fn trace_power4_naive(m: &ComplexMatrix) -> f64 {
    let mm = to_dmatrix(m) * to_dmatrix(m).adjoint();
    let sq = &mm * &mm;
    sq.trace().re
}

/// Realignment by the defining index relation, via a 4-index lookup.
pub fn realign_naive(u: &BipartiteOperator) -> DMatrix<Complex64> {
    let (d1, d2) = (u.d1(), u.d2());
    let m = u.matrix();
    DMatrix::from_fn(d1 * d1, d2 * d2, |row, col| {
        let (i, j) = (row / d1, row % d1);
        let (k, l) = (col / d2, col % d2);
        m[(i * d2 + k, j * d2 + l)]
    })
}

/// Partial transpose by the defining index relation.
pub fn partial_transpose_naive(u: &BipartiteOperator) -> DMatrix<Complex64> {
    let (d1, d2) = (u.d1(), u.d2());
    let m = u.matrix();
    let n = d1 * d2;
    DMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / d2, row % d2);
        let (k, l) = (col / d2, col % d2);
        m[(k * d2 + j, i * d2 + l)]
    })
}

/// `F − G (Tr_R + Tr_T1)` with both traces from the naive routines.
pub fn ep_naive(u: &BipartiteOperator) -> f64 {
    let (a, b) = (u.d1() as f64, u.d2() as f64);
    let f = (a * b + 1.0) / ((a + 1.0) * (b + 1.0));
    let g = 1.0 / (a * b * (a + 1.0) * (b + 1.0));
    let tr = trace_power4_naive(&from_dmatrix(&realign_naive(u)))
        + trace_power4_naive(&from_dmatrix(&partial_transpose_naive(u)));
    f - g * tr
}

/// Spin matrices from explicit matrix elements `⟨m'|S±|m⟩`.
pub fn spin_matrices(d: usize) -> [ComplexMatrix; 3] {
    let s = (d as f64 - 1.0) / 2.0;
    let m = |k: usize| s - k as f64;
    let ladder = |k: usize| (s * (s + 1.0) - m(k) * (m(k) + 1.0)).sqrt();
    let sx = ComplexMatrix::from_fn(d, d, |r, c| {
        if r + 1 == c {
            Complex64::new(ladder(c) / 2.0, 0.0)
        } else if c + 1 == r {
            Complex64::new(ladder(r) / 2.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let sy = ComplexMatrix::from_fn(d, d, |r, c| {
        if r + 1 == c {
            Complex64::new(0.0, -ladder(c) / 2.0)
        } else if c + 1 == r {
            Complex64::new(0.0, ladder(r) / 2.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let sz = ComplexMatrix::from_fn(d, d, |r, c| Complex64::new(if r == c { m(r) } else { 0.0 }, 0.0));
    [sx, sy, sz]
}

/// Dense isotropic Heisenberg Hamiltonian `Σ_i S1^i ⊗ S2^i`.
pub fn heisenberg_hamiltonian(d1: usize, d2: usize) -> ComplexMatrix {
    let a = spin_matrices(d1);
    let b = spin_matrices(d2);
    let n = d1 * d2;
    ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, al) = (row / d2, row % d2);
        let (j, be) = (col / d2, col % d2);
        (0..3).map(|k| a[k][(i, j)] * b[k][(al, be)]).sum()
    })
}

/// Composite trapezoid rule on `[a, b]`.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels).map(|k| f(a + k as f64 * h)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}
