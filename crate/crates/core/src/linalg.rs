//! Dense complex matrices and the handful of decompositions the rest of the
//! crate needs: Kronecker products, SVD, trace norm and Hermitian
//! eigendecomposition.
//!
//! Storage is `nalgebra`; SVD and Hermitian eigendecomposition go through
//! `faer`. This module fixes ordering and phase conventions on top so
//! results are reproducible.

use std::ops::{Add, Index, Mul, Sub};

use faer::{Mat, MatRef, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::StateRng;

/// Largest supported matrix side (bipartite dimensions up to 64x64).
pub const MAX_SIDE: usize = 4096;

/// Default entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Dense complex double-precision matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dim(format!(
                "matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(pos) = entries
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Domain(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `|ket⟩⟨bra|`
    pub fn outer(ket: &[Complex64], bra: &[Complex64]) -> Self {
        Self::from_fn(ket.len(), bra.len(), |i, j| ket[i] * bra[j].conj())
    }

    /// Column vector as an n x 1 matrix.
    pub fn column_vector(v: &[Complex64]) -> Self {
        Self(DMatrix::from_column_slice(v.len(), 1, v))
    }

    pub fn from_inner(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |A - A†| entrywise; infinite for non-square matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// (A + A†) / 2
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// Tr[A·B] without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.cols(), other.rows());
        assert_eq!(self.rows(), other.cols());
        let mut acc = ZERO;
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// A ⊕ B (block diagonal).
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        Self::from_fn(r1 + r2, c1 + c2, |i, j| {
            if i < r1 && j < c1 {
                self.0[(i, j)]
            } else if i >= r1 && j >= c1 {
                other.0[(i - r1, j - c1)]
            } else {
                ZERO
            }
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols(), v.len());
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * v[j]).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_with_cap(a, b, MAX_SIDE)
}

pub fn tensor_with_cap(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    max_side: usize,
) -> Result<ComplexMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= max_side && c <= max_side => {
            Ok(ComplexMatrix(a.0.kronecker(&b.0)))
        }
        _ => Err(Error::dim(format!(
            "tensor product of {}x{} and {}x{} exceeds maximum side {max_side}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ))),
    }
}

/// Kronecker product of two vectors.
pub fn tensor_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨a|b⟩
pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Thin singular value decomposition `A = U·diag(s)·V†`.
///
/// `u` is rows x k and `v` is cols x k with k = min(rows, cols); singular
/// values are descending. Each column pair is phase-fixed so that the
/// largest-modulus entry of the `u` column (first on ties) is real and
/// positive, which makes the factors deterministic for a given input.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_diag(&self.singular_values);
        &(&self.u * &d) * &self.v.adjoint()
    }
}

fn to_faer(a: &ComplexMatrix) -> Mat<Complex64> {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a.0[(i, j)])
}

fn from_faer(a: MatRef<'_, Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn non_convergence(routine: &'static str, a: &ComplexMatrix) -> Error {
    Error::NonConvergence {
        routine,
        rows: a.rows(),
        cols: a.cols(),
        frobenius: a.frobenius_norm(),
        max_abs: a.max_abs(),
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let dec = to_faer(a)
        .thin_svd()
        .map_err(|_| non_convergence("SVD", a))?;
    let mut u = from_faer(dec.U());
    let mut v = from_faer(dec.V());
    let mut values: Vec<f64> = dec.S().column_vector().iter().map(|z| z.re).collect();

    // Stable descending order: faer already sorts, this pins tie order.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    if order.iter().enumerate().any(|(k, &i)| k != i) {
        u = DMatrix::from_fn(u.nrows(), order.len(), |r, k| u[(r, order[k])]);
        v = DMatrix::from_fn(v.nrows(), order.len(), |r, k| v[(r, order[k])]);
        values = order.iter().map(|&i| values[i]).collect();
    }

    for k in 0..values.len() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for r in 0..u.nrows() {
            let m = u[(r, k)].norm();
            if m > best_abs + 1e-12 {
                best_abs = m;
                best = r;
            }
        }
        if best_abs > 0.0 {
            let phase = u[(best, k)].conj() / best_abs;
            u.column_mut(k).iter_mut().for_each(|z| *z *= phase);
            v.column_mut(k).iter_mut().for_each(|z| *z *= phase);
        }
    }

    Ok(Svd {
        u: ComplexMatrix(u),
        singular_values: values,
        v: ComplexMatrix(v),
    })
}

/// Singular values in descending order, length min(rows, cols).
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut values = to_faer(a)
        .singular_values()
        .map_err(|_| non_convergence("SVD", a))?;
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Nuclear norm: the sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.iter().sum())
}

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

pub fn eig_hermitian(a: &ComplexMatrix) -> Result<HermitianEigen> {
    eig_hermitian_with_tol(a, HERMITIAN_TOL)
}

pub fn eig_hermitian_with_tol(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::dim(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermiticity_deviation();
    if dev > tol {
        return Err(Error::Precondition {
            invariant: "hermitian",
            deviation: dev,
            tolerance: tol,
        });
    }
    let h = a.hermitian_part();
    let dec = to_faer(&h)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| non_convergence("Hermitian eigensolver", a))?;
    let raw: Vec<f64> = dec.S().column_vector().iter().map(|z| z.re).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| raw[i]).collect();
    let n = a.rows();
    let u = dec.U();
    let vectors = DMatrix::from_fn(n, n, |r, k| u[(r, order[k])]);
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix(vectors),
    })
}

/// Orthonormalizes the columns of `a` by modified Gram–Schmidt with one
/// re-orthogonalization pass. The implied triangular factor has a positive
/// real diagonal. Fails when the columns are numerically dependent.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = a.shape();
    if cols > rows {
        return Err(Error::dim(format!(
            "cannot orthonormalize {cols} columns in dimension {rows}"
        )));
    }
    let mut q = a.0.clone();
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..rows).map(|r| q[(r, k)].conj() * q[(r, j)]).sum();
                for r in 0..rows {
                    let qk = q[(r, k)];
                    q[(r, j)] -= proj * qk;
                }
            }
        }
        let norm = (0..rows).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::Domain(format!("column {j} is linearly dependent")));
        }
        for r in 0..rows {
            q[(r, j)] /= norm;
        }
    }
    Ok(ComplexMatrix(q))
}

/// Haar-random `rows x cols` isometry (unitary when square), from a
/// complex-Gaussian matrix orthonormalized column by column.
pub fn random_isometry(rows: usize, cols: usize, rng: &mut StateRng) -> ComplexMatrix {
    loop {
        let g = ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal());
        if let Ok(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

pub fn random_unitary(d: usize, rng: &mut StateRng) -> ComplexMatrix {
    random_isometry(d, d, rng)
}
