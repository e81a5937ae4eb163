//! Dense complex matrices and the bipartite index rearrangements.
//!
//! Storage is row-major. A bipartite operator on `C^d1 ⊗ C^d2` uses the
//! composite index `(i, α) ↦ i·d2 + α`, with `i` addressing the first
//! factor and `α` the second, which is the index order produced by the
//! Kronecker product.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::SpinSystem;

/// Default tolerance for unitarity checks, in max-entry norm of `U†U − I`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Largest imaginary residue accepted when a trace is known to be real.
pub const IMAG_RESIDUE_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |r, c| Complex64::new(f(r, c), 0.0))
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Matrix unit `|row⟩⟨col|` of size `n × n`.
    pub fn unit(n: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries. This is also `vec(M)` in the realignment convention.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `max |M†M − I|`, or infinity for a non-square matrix.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = &self.adjoint() * self;
        gram.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, " ")?;
            for z in self.row(r) {
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a shape mismatch; use [`ComplexMatrix::matmul`] for a fallible product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul<ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product `A ⊗ B`, entry `((i,α),(j,β)) = A[i,j]·B[α,β]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for al in 0..b.rows {
                let row = i * b.rows + al;
                for be in 0..b.cols {
                    out.data[row * cols + j * b.cols + be] = aij * b[(al, be)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// A square operator on `C^d1 ⊗ C^d2`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    d1: usize,
    d2: usize,
    matrix: ComplexMatrix,
}

impl BipartiteOperator {
    pub fn new(d1: usize, d2: usize, matrix: ComplexMatrix) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::Shape(format!(
                "factor dimensions must be positive, got {d1}x{d2}"
            )));
        }
        let n = d1 * d2;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Shape(format!(
                "a {d1}x{d2} operator needs a {n}x{n} matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::Numeric("operator has non-finite entries".into()));
        }
        Ok(Self { d1, d2, matrix })
    }

    /// Like [`BipartiteOperator::new`] but also requires `U†U = I` within `tol`.
    pub fn unitary(d1: usize, d2: usize, matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let op = Self::new(d1, d2, matrix)?;
        op.ensure_unitary(tol)?;
        Ok(op)
    }

    pub fn identity(d1: usize, d2: usize) -> Self {
        Self {
            d1,
            d2,
            matrix: ComplexMatrix::identity(d1 * d2),
        }
    }

    /// `A ⊗ B` as an operator; both factors must be square.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() || !b.is_square() {
            return Err(Error::Shape(format!(
                "Kronecker factors must be square, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Self::new(a.rows(), b.rows(), kron(a, b))
    }

    /// The swap `|i⟩|j⟩ ↦ |j⟩|i⟩` on `C^d ⊗ C^d`.
    pub fn swap(d: usize) -> Self {
        let n = d * d;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..d {
            for j in 0..d {
                m[(j * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
            }
        }
        Self { d1: d, d2: d, matrix: m }
    }

    #[inline]
    pub fn d1(&self) -> usize {
        self.d1
    }

    #[inline]
    pub fn d2(&self) -> usize {
        self.d2
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Entry `⟨i α| U |j β⟩`.
    #[inline]
    pub fn entry(&self, i: usize, alpha: usize, j: usize, beta: usize) -> Complex64 {
        self.matrix[(i * self.d2 + alpha, j * self.d2 + beta)]
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.matrix.unitarity_residual()
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual.is_nan() || residual > tol {
            return Err(Error::Domain(format!(
                "operator is not unitary: max|U†U - I| = {residual:.3e} exceeds {tol:.1e}"
            )));
        }
        Ok(())
    }

    /// Operator product `self · rhs` on the same bipartite space.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if (self.d1, self.d2) != (rhs.d1, rhs.d2) {
            return Err(Error::Shape(format!(
                "cannot compose {}x{} with {}x{} operators",
                self.d1, self.d2, rhs.d1, rhs.d2
            )));
        }
        Ok(Self {
            d1: self.d1,
            d2: self.d2,
            matrix: self.matrix.matmul(&rhs.matrix)?,
        })
    }

    pub fn adjoint(&self) -> Self {
        Self {
            d1: self.d1,
            d2: self.d2,
            matrix: self.matrix.adjoint(),
        }
    }
}

/// Realignment `(U^R)_{ij,kl} = U_{ik,jl}`.
///
/// The result is `d1² × d2²`: row `i·d1 + j` collects first-factor indices,
/// column `k·d2 + l` collects second-factor indices. For a product operator
/// this gives `(A ⊗ B)^R = vec(A)·vec(B)ᵀ` with row-major `vec`.
pub fn realign(u: &BipartiteOperator) -> ComplexMatrix {
    let (d1, d2) = (u.d1, u.d2);
    let mut out = ComplexMatrix::zeros(d1 * d1, d2 * d2);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    out[(i * d1 + j, k * d2 + l)] = u.entry(i, k, j, l);
                }
            }
        }
    }
    out
}

/// Inverse of [`realign`]: rebuilds the operator from a `d1² × d2²` matrix.
pub fn unrealign(r: &ComplexMatrix, d1: usize, d2: usize) -> Result<BipartiteOperator> {
    if r.rows() != d1 * d1 || r.cols() != d2 * d2 {
        return Err(Error::Shape(format!(
            "expected a {}x{} realigned matrix, got {}x{}",
            d1 * d1,
            d2 * d2,
            r.rows(),
            r.cols()
        )));
    }
    let n = d1 * d2;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    m[(i * d2 + k, j * d2 + l)] = r[(i * d1 + j, k * d2 + l)];
                }
            }
        }
    }
    BipartiteOperator::new(d1, d2, m)
}

/// Partial transpose on the first factor, `(U^{T1})_{ij,kl} = U_{kj,il}`.
pub fn partial_transpose(u: &BipartiteOperator) -> BipartiteOperator {
    let (d1, d2) = (u.d1, u.d2);
    let n = d1 * d2;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    m[(i * d2 + j, k * d2 + l)] = u.entry(k, j, i, l);
                }
            }
        }
    }
    BipartiteOperator { d1, d2, matrix: m }
}

/// Partial time reversal `e^{−iπS1^y} U^{T1} e^{iπS1^y}` with `S1^y` acting on
/// the first factor, which must have dimension `2·s1 + 1`.
pub fn partial_time_reversal(u: &BipartiteOperator, s1: SpinSystem) -> Result<BipartiteOperator> {
    if s1.dim() != u.d1 {
        return Err(Error::Shape(format!(
            "spin {} has dimension {}, but the first factor has dimension {}",
            s1,
            s1.dim(),
            u.d1
        )));
    }
    let rot = crate::spin::rotation_y_pi(s1);
    let eye2 = ComplexMatrix::identity(u.d2);
    let left = kron(&rot, &eye2);
    let right = left.adjoint();
    let pt = partial_transpose(u);
    let m = left.matmul(&pt.matrix)?.matmul(&right)?;
    BipartiteOperator::new(u.d1, u.d2, m)
}

/// `Tr[(M M†)²]`, evaluated as the squared Frobenius norm of the smaller Gram matrix.
pub fn trace_power4(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::Numeric("trace_power4 input has non-finite entries".into()));
    }
    let adj = m.adjoint();
    let gram = if m.rows() <= m.cols() {
        m.matmul(&adj)?
    } else {
        adj.matmul(m)?
    };
    let value = gram.frobenius_norm_sqr();
    if !value.is_finite() {
        return Err(Error::Numeric("trace_power4 overflowed".into()));
    }
    Ok(value)
}

/// The one-parameter family `U^p = exp(p · log U)` through a unitary `U`,
/// using the principal branch of each eigenphase.
#[derive(Clone, Debug)]
pub struct UnitaryPath {
    d1: usize,
    d2: usize,
    vectors: ComplexMatrix,
    phases: Vec<f64>,
}

impl UnitaryPath {
    /// Diagonalizes `u` through its complex Schur form, which is diagonal
    /// for a normal matrix.
    pub fn new(u: &BipartiteOperator, unitarity_tol: f64) -> Result<Self> {
        u.ensure_unitary(unitarity_tol)?;
        let schur = nalgebra::linalg::Schur::new(u.matrix.to_nalgebra());
        let (q, t) = schur.unpack();
        let n = t.nrows();
        let mut off_diag = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    off_diag = off_diag.max(t[(r, c)].norm());
                }
            }
        }
        if off_diag > 1e-6 {
            return Err(Error::Numeric(format!(
                "Schur form is not diagonal (residual {off_diag:.3e})"
            )));
        }
        Ok(Self {
            d1: u.d1,
            d2: u.d2,
            vectors: ComplexMatrix::from_nalgebra(&q),
            phases: (0..n).map(|k| t[(k, k)].arg()).collect(),
        })
    }

    pub fn at(&self, p: f64) -> BipartiteOperator {
        let diag: Vec<Complex64> = self
            .phases
            .iter()
            .map(|&phi| Complex64::from_polar(1.0, p * phi))
            .collect();
        let m = &(&self.vectors * &ComplexMatrix::diagonal(&diag)) * &self.vectors.adjoint();
        BipartiteOperator {
            d1: self.d1,
            d2: self.d2,
            matrix: m,
        }
    }
}
