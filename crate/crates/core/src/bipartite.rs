//! Bipartite structure: dimensions, validated density matrices, partial
//! trace and transpose, the realignment map and its inverse/adjoints, and
//! the Schmidt decomposition of pure states.
//!
//! Index convention: the composite ket |i j⟩ (i in A, j in B) is row
//! `i * n + j`, so `ρ[(i*n + j, k*n + l)] = ⟨ij|ρ|kl⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub m: usize,
    pub n: usize,
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::dim(format!(
                "subsystem dimensions must be positive, got {m}x{n}"
            )));
        }
        if m * n > 64 * 64 {
            return Err(Error::dim(format!(
                "{m}x{n} exceeds the supported composite dimension"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn total(&self) -> usize {
        self.m * self.n
    }

    pub fn swapped(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
        }
    }

    fn check_square(&self, x: &ComplexMatrix, what: &str) -> Result<()> {
        let d = self.total();
        if x.shape() != (d, d) {
            return Err(Error::dim(format!(
                "{what}: expected {d}x{d} for dims {}x{}, got {}x{}",
                self.m,
                self.n,
                x.rows(),
                x.cols()
            )));
        }
        Ok(())
    }

    fn check_realigned(&self, y: &ComplexMatrix, what: &str) -> Result<()> {
        let (r, c) = (self.m * self.m, self.n * self.n);
        if y.shape() != (r, c) {
            return Err(Error::dim(format!(
                "{what}: expected {r}x{c} for dims {}x{}, got {}x{}",
                self.m,
                self.n,
                y.rows(),
                y.cols()
            )));
        }
        Ok(())
    }
}

/// Tolerances applied when validating a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityTolerance {
    pub hermitian: f64,
    pub trace: f64,
    /// Smallest eigenvalue allowed is `-psd`.
    pub psd: f64,
}

impl Default for DensityTolerance {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
        }
    }
}

/// A density matrix on C^m ⊗ C^n. Construction validates Hermiticity,
/// unit trace and positivity.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteDensity {
    dims: BipartiteDims,
    rho: ComplexMatrix,
}

impl BipartiteDensity {
    pub fn new(dims: BipartiteDims, rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(dims, rho, DensityTolerance::default())
    }

    pub fn with_tolerance(
        dims: BipartiteDims,
        rho: ComplexMatrix,
        tol: DensityTolerance,
    ) -> Result<Self> {
        dims.check_square(&rho, "density matrix")?;
        let herm = rho.hermiticity_deviation();
        if herm > tol.hermitian {
            return Err(Error::Precondition {
                invariant: "hermitian",
                deviation: herm,
                tolerance: tol.hermitian,
            });
        }
        let tr = rho.trace();
        let tr_dev = (tr - Complex64::new(1.0, 0.0)).norm();
        if tr_dev > tol.trace {
            return Err(Error::Precondition {
                invariant: "unit trace",
                deviation: tr_dev,
                tolerance: tol.trace,
            });
        }
        let min_eig = linalg::eig_hermitian_with_tol(&rho, tol.hermitian)?.values[0];
        if min_eig < -tol.psd {
            return Err(Error::Precondition {
                invariant: "positive semidefinite",
                deviation: -min_eig,
                tolerance: tol.psd,
            });
        }
        Ok(Self { dims, rho })
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn from_pure(psi: &[Complex64], dims: BipartiteDims) -> Result<Self> {
        check_normalized(psi, dims)?;
        Self::new(dims, ComplexMatrix::outer(psi, psi))
    }

    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let d = dims.total();
        Self {
            dims,
            rho: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    /// ρ_A ⊗ ρ_B from two single-system density matrices.
    pub fn product(rho_a: &ComplexMatrix, rho_b: &ComplexMatrix) -> Result<Self> {
        if !rho_a.is_square() || !rho_b.is_square() {
            return Err(Error::dim("marginals must be square"));
        }
        let dims = BipartiteDims::new(rho_a.rows(), rho_b.rows())?;
        Self::new(dims, linalg::tensor(rho_a, rho_b)?)
    }

    /// p·self + (1 − p)·other
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::dim("cannot mix states of different dimensions"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter {
                name: "p",
                value: p,
                range: "[0, 1]",
            });
        }
        Ok(Self {
            dims: self.dims,
            rho: &self.rho.scale_real(p) + &other.rho.scale_real(1.0 - p),
        })
    }

    /// (U_A ⊗ U_B) ρ (U_A ⊗ U_B)†
    pub fn local_unitary(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<Self> {
        if ua.shape() != (self.dims.m, self.dims.m) || ub.shape() != (self.dims.n, self.dims.n) {
            return Err(Error::dim(
                "local unitaries do not match subsystem dimensions",
            ));
        }
        let u = linalg::tensor(ua, ub)?;
        let rho = &(&u * &self.rho) * &u.adjoint();
        Ok(Self {
            dims: self.dims,
            rho: rho.hermitian_part(),
        })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_rho(self) -> ComplexMatrix {
        self.rho
    }

    pub fn marginal_a(&self) -> ComplexMatrix {
        partial_trace_b(self)
    }

    pub fn marginal_b(&self) -> ComplexMatrix {
        partial_trace_a(self)
    }

    /// ρ with the subsystems exchanged, on dims (n, m).
    pub fn swap_subsystems(&self) -> Self {
        let BipartiteDims { m, n } = self.dims;
        let rho = ComplexMatrix::from_fn(m * n, m * n, |r, c| {
            let (j, i) = (r / m, r % m);
            let (l, k) = (c / m, c % m);
            self.rho[(i * n + j, k * n + l)]
        });
        Self {
            dims: self.dims.swapped(),
            rho,
        }
    }
}

pub(crate) fn check_normalized(psi: &[Complex64], dims: BipartiteDims) -> Result<()> {
    if psi.len() != dims.total() {
        return Err(Error::dim(format!(
            "state vector has length {}, expected {}",
            psi.len(),
            dims.total()
        )));
    }
    let dev = (linalg::vec_norm(psi) - 1.0).abs();
    if dev > 1e-10 {
        return Err(Error::Precondition {
            invariant: "normalized",
            deviation: dev,
            tolerance: 1e-10,
        });
    }
    Ok(())
}

/// ρ_A = Tr_B ρ
pub fn partial_trace_b(s: &BipartiteDensity) -> ComplexMatrix {
    trace_out_b(&s.rho, s.dims)
}

/// ρ_B = Tr_A ρ
pub fn partial_trace_a(s: &BipartiteDensity) -> ComplexMatrix {
    trace_out_a(&s.rho, s.dims)
}

/// Tr_B of an arbitrary (mn)x(mn) operator.
pub fn partial_trace_b_of(x: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check_square(x, "partial trace")?;
    Ok(trace_out_b(x, dims))
}

/// Tr_A of an arbitrary (mn)x(mn) operator.
pub fn partial_trace_a_of(x: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check_square(x, "partial trace")?;
    Ok(trace_out_a(x, dims))
}

fn trace_out_b(x: &ComplexMatrix, BipartiteDims { m, n }: BipartiteDims) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, m, |i, k| (0..n).map(|j| x[(i * n + j, k * n + j)]).sum())
}

fn trace_out_a(x: &ComplexMatrix, BipartiteDims { m, n }: BipartiteDims) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |j, l| (0..m).map(|i| x[(i * n + j, i * n + l)]).sum())
}

/// (ρ^{T_A})_{ij,kl} = ρ_{kj,il}
pub fn partial_transpose_a(s: &BipartiteDensity) -> ComplexMatrix {
    partial_transpose_a_of(&s.rho, s.dims).expect("validated density has matching dims")
}

pub fn partial_transpose_a_of(x: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check_square(x, "partial transpose")?;
    let BipartiteDims { m, n } = dims;
    Ok(ComplexMatrix::from_fn(m * n, m * n, |r, c| {
        let (i, j) = (r / n, r % n);
        let (k, l) = (c / n, c % n);
        x[(k * n + j, i * n + l)]
    }))
}

/// Realignment: (ρ^R)_{ij,kl} = ρ_{ik,jl}.
///
/// The result is m² x n² with row `i*m + j` (both A indices) and column
/// `k*n + l` (both B indices). Accepts any (mn)x(mn) operator.
pub fn realign(x: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check_square(x, "realign")?;
    let BipartiteDims { m, n } = dims;
    Ok(ComplexMatrix::from_fn(m * m, n * n, |r, c| {
        let (i, j) = (r / m, r % m);
        let (k, l) = (c / n, c % n);
        x[(i * n + k, j * n + l)]
    }))
}

/// Inverse of [`realign`]: maps an m² x n² matrix back to (mn)x(mn).
pub fn realign_inverse(y: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    dims.check_realigned(y, "realign_inverse")?;
    let BipartiteDims { m, n } = dims;
    Ok(ComplexMatrix::from_fn(m * n, m * n, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        y[(i * m + j, k * n + l)]
    }))
}

/// Hilbert–Schmidt adjoint of [`realign`]: the unique R* with
/// `Tr[R(X)·Y†] = Tr[X·R*(Y)†]` for all X. Realignment permutes entries,
/// so R* coincides with the inverse permutation. Equivalently
/// `R*(Y) = ([R⁻¹((Y†)ᵀ)]ᵀ)†`, see [`realign_transpose_dual`].
pub fn realign_adjoint(y: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    realign_inverse(y, dims)
}

/// Dual of [`realign`] under the bilinear pairing `Tr[Z·X]`:
/// `Tr[Z·R(X)] = Tr[D(Z)·X]` with `D(Z) = [R⁻¹(Zᵀ)]ᵀ`.
///
/// `z` has the shape of `R(X)ᵀ`, i.e. n² x m². This is the map used to turn
/// the SVD frame of a realigned matrix into a witness operator.
pub fn realign_transpose_dual(z: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    let (r, c) = (dims.n * dims.n, dims.m * dims.m);
    if z.shape() != (r, c) {
        return Err(Error::dim(format!(
            "realign_transpose_dual: expected {r}x{c}, got {}x{}",
            z.rows(),
            z.cols()
        )));
    }
    Ok(realign_inverse(&z.transpose(), dims)?.transpose())
}

/// Schmidt form Σ √μ_i |a_i⟩ ⊗ |b_i⟩ of a bipartite pure state.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Descending, sums to 1; entries below 1e-12 are clamped to 0.
    pub mu: Vec<f64>,
    /// m x k, orthonormal columns |a_i⟩.
    pub basis_a: ComplexMatrix,
    /// n x k, orthonormal columns |b_i⟩.
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let (m, n) = (self.basis_a.rows(), self.basis_b.rows());
        let mut psi = vec![ZERO; m * n];
        for (k, &mu) in self.mu.iter().enumerate() {
            let w = mu.sqrt();
            for i in 0..m {
                for j in 0..n {
                    psi[i * n + j] += self.basis_a[(i, k)] * self.basis_b[(j, k)] * w;
                }
            }
        }
        psi
    }

    /// Number of nonzero coefficients.
    pub fn rank(&self) -> usize {
        self.mu.iter().filter(|&&x| x > 0.0).count()
    }
}

pub const SCHMIDT_FLOOR: f64 = 1e-12;

pub fn schmidt(psi: &[Complex64], dims: BipartiteDims) -> Result<SchmidtDecomposition> {
    check_normalized(psi, dims)?;
    let BipartiteDims { m, n } = dims;
    let coeffs = ComplexMatrix::from_fn(m, n, |i, j| psi[i * n + j]);
    // coeffs = U S V†  ⇒  ψ = Σ s_k |u_k⟩ ⊗ |conj(v_k)⟩
    let dec = linalg::svd(&coeffs)?;
    let mu = dec
        .singular_values
        .iter()
        .map(|s| {
            let mu = s * s;
            if mu < SCHMIDT_FLOOR {
                0.0
            } else {
                mu
            }
        })
        .collect();
    Ok(SchmidtDecomposition {
        mu,
        basis_a: dec.u,
        basis_b: dec.v.conj(),
    })
}
