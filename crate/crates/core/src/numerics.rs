//! Dense complex linear algebra sized for small Hilbert spaces (d ≤ 64).
//!
//! Everything here is a plain value type. The eigensolver is a cyclic
//! complex Jacobi iteration: no pivoting heuristics, no randomness, and the
//! same input always produces the same output bit for bit.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Largest dimension the kernel is meant for.
pub const MAX_DIM: usize = 64;

/// Sweep cap for the Jacobi eigensolver.
pub const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (‖M − M†‖_F = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("ket is not normalized (‖ψ‖ = {norm})")]
    NotNormalized { norm: f64 },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("entry count {found} does not match shape {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("empty matrix or vector")]
    Empty,
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
}

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Operator identities (Hermiticity, idempotency, commutators).
    pub algebraic: f64,
    /// Eigenvalue gap below which eigenvalues are treated as one.
    pub degeneracy: f64,
    /// Normalization of probability vectors.
    pub probability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-10,
            degeneracy: 1e-8,
            probability: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new(algebraic: f64, degeneracy: f64, probability: f64) -> Result<Self, NumericsError> {
        let tol = Self {
            algebraic,
            degeneracy,
            probability,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        for (name, v) in [
            ("algebraic", self.algebraic),
            ("degeneracy", self.degeneracy),
            ("probability", self.probability),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(NumericsError::InvalidTolerances(format!(
                    "{name} must be a finite nonnegative number, got {v}"
                )));
            }
        }
        if self.degeneracy <= self.algebraic {
            return Err(NumericsError::InvalidTolerances(format!(
                "degeneracy ({}) must exceed algebraic ({})",
                self.degeneracy, self.algebraic
            )));
        }
        Ok(())
    }

    /// Replaces the algebraic tolerance, raising the degeneracy threshold if
    /// needed to keep `degeneracy > algebraic`.
    pub fn with_algebraic(mut self, algebraic: f64) -> Result<Self, NumericsError> {
        self.algebraic = algebraic;
        if self.degeneracy <= algebraic {
            self.degeneracy = algebraic * 100.0;
        }
        self.validate()?;
        Ok(self)
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 {
            return Err(NumericsError::Empty);
        }
        if data.len() != rows * cols {
            return Err(NumericsError::BadShape {
                rows,
                cols,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|z| !z.is_finite()) {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, NumericsError> {
        let ncols = rows.first().map(Vec::len).ok_or(NumericsError::Empty)?;
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(NumericsError::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(rows.len(), ncols, data)
    }

    /// Real-valued convenience constructor, mostly for tests and fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, NumericsError> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, &z) in entries.iter().enumerate() {
            m[(k, k)] = z;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// |a⟩⟨b|
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| a[r] * b[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn ensure_square(&self) -> Result<usize, NumericsError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(NumericsError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn ensure_same_shape(&self, other: &Self) -> Result<(), NumericsError> {
        if self.rows != other.rows {
            return Err(NumericsError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(NumericsError::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖M − M†‖_F
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// (M + M†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if self.cols != rhs.rows {
            return Err(NumericsError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>, NumericsError> {
        if v.len() != self.cols {
            return Err(NumericsError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        Self::from_fn(rows, cols, |r, c| {
            self[(r / rhs.rows, c / rhs.cols)] * rhs[(r % rhs.rows, c % rhs.cols)]
        })
    }

    /// AB − BA
    pub fn commutator(&self, rhs: &Self) -> Result<Self, NumericsError> {
        Ok(&self.matmul(rhs)? - &rhs.matmul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in add"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in sub"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<C64>,
}

/// Default normalization tolerance for kets.
pub const KET_NORM_TOL: f64 = 1e-12;

impl Ket {
    /// Accepts amplitudes whose Euclidean norm is 1 within [`KET_NORM_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self, NumericsError> {
        Self::with_tolerance(amplitudes, KET_NORM_TOL)
    }

    pub fn with_tolerance(amplitudes: Vec<C64>, tol: f64) -> Result<Self, NumericsError> {
        if amplitudes.is_empty() {
            return Err(NumericsError::Empty);
        }
        if let Some(index) = amplitudes.iter().position(|z| !z.is_finite()) {
            return Err(NumericsError::NonFinite { index });
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > tol {
            return Err(NumericsError::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails only for the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self, NumericsError> {
        let norm = vec_norm(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(NumericsError::NotNormalized { norm });
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[k] = ONE;
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Ket) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// |ψ⟩⟨ψ|
    pub fn dyad(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// ⟨ψ|M|ψ⟩
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<C64, NumericsError> {
        let mv = m.apply(&self.amplitudes)?;
        Ok(inner(&self.amplitudes, &mv))
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ket { amplitudes }
    }
}

/// Σ conj(a_k) b_k
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Ket>,
}

impl HermitianEigen {
    /// Σ λ_k v_k v_k†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.vectors.first().map_or(0, Ket::dim);
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            m = &m + &v.dyad().scale_real(*lambda);
        }
        m
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Hermiticity is checked with the Frobenius norm, `‖M − M†‖_F ≤ tol.algebraic`,
/// and the Hermitian part `(M + M†)/2` is what gets diagonalized. Sweeps run
/// until the off-diagonal Frobenius mass drops to rounding level; the result is
/// accepted if it is below `tol.algebraic · ‖M‖_F` when the sweep cap is reached.
pub fn hermitian_eigendecomposition(
    m: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<HermitianEigen, NumericsError> {
    let n = m.ensure_square()?;
    let defect = m.hermiticity_defect();
    if defect > tol.algebraic {
        return Err(NumericsError::NotHermitian { defect });
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    acc += a[(r, c)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let target = f64::EPSILON * scale;
    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > target && sweeps < MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotated |= jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        let next = off_norm(&a);
        if !rotated || next >= off {
            off = next;
            break;
        }
        off = next;
    }
    if off > target && off > tol.algebraic * scale {
        return Err(NumericsError::NoConvergence {
            sweeps,
            off_norm: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort on a deterministic key keeps the output reproducible.
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = order
        .iter()
        .map(|&k| Ket {
            amplitudes: v.column(k),
        })
        .collect();
    Ok(HermitianEigen { values, vectors })
}

/// One two-sided rotation annihilating a[p][q]. Returns false if the entry was
/// already negligible.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let apq = a[(p, q)];
    let mag = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag == 0.0 || mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        if mag != 0.0 {
            a[(p, q)] = ZERO;
            a[(q, p)] = ZERO;
        }
        return false;
    }
    // The phase e^{-iφ} on column q makes the pivot real and positive; the
    // remaining real symmetric 2x2 problem is solved with the smaller angle.
    let phase = apq / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
    let g = [
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [-phase.conj() * s, phase.conj() * c],
    ];
    let n = a.rows();
    // A ← A G (columns p, q)
    for r in 0..n {
        let x = a[(r, p)];
        let y = a[(r, q)];
        a[(r, p)] = x * g[0][0] + y * g[1][0];
        a[(r, q)] = x * g[0][1] + y * g[1][1];
    }
    // A ← G† A (rows p, q)
    for col in 0..n {
        let x = a[(p, col)];
        let y = a[(q, col)];
        a[(p, col)] = g[0][0].conj() * x + g[1][0].conj() * y;
        a[(q, col)] = g[0][1].conj() * x + g[1][1].conj() * y;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for r in 0..n {
        let x = v[(r, p)];
        let y = v[(r, q)];
        v[(r, p)] = x * g[0][0] + y * g[1][0];
        v[(r, q)] = x * g[0][1] + y * g[1][1];
    }
    true
}

/// ‖M†M − I‖_F ≤ tol.algebraic
pub fn is_unitary(m: &ComplexMatrix, tol: &Tolerances) -> bool {
    if !m.is_square() {
        return false;
    }
    let gram = m.adjoint().matmul(m).expect("square");
    gram.frobenius_distance(&ComplexMatrix::identity(m.dim())) <= tol.algebraic
}

/// Spectral norm: the largest singular value, from the eigenvalues of M†M.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let gram = m
        .adjoint()
        .matmul(m)
        .expect("adjoint product is always conformable");
    let tol = Tolerances {
        // M†M is Hermitian up to rounding; accept any rounding-level defect.
        algebraic: f64::INFINITY,
        degeneracy: f64::INFINITY,
        probability: 0.0,
    };
    match hermitian_eigendecomposition(&gram, &tol) {
        Ok(eig) => eig.values.first().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => m.frobenius_norm(),
    }
}

/// Single-qubit constants.
pub mod pauli {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![ZERO, -I], vec![I, ZERO]]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn hadamard() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap()
    }

    pub fn z_plus() -> Ket {
        Ket::basis(2, 0)
    }

    pub fn z_minus() -> Ket {
        Ket::basis(2, 1)
    }

    pub fn x_plus() -> Ket {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(vec![C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap()
    }

    pub fn x_minus() -> Ket {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(vec![C64::new(h, 0.0), C64::new(-h, 0.0)]).unwrap()
    }

    /// Spin-up state along the Bloch direction (θ, φ).
    pub fn bloch_ket(theta: f64, phi: f64) -> Ket {
        let (s, c) = (theta / 2.0).sin_cos();
        Ket::new(vec![C64::new(c, 0.0), C64::from_polar(s, phi)]).unwrap()
    }
}
