//! Concurrence: the pure-state value, the analytical mixed-state lower
//! bound built from the strengthened realignment criterion, two-copy
//! observable forms, and a convex-roof search that gives an upper bound.

mod roof;

pub use roof::{roof_upper, EnsembleMember, RoofConfig, RoofEstimate};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::{self, BipartiteDensity, BipartiteDims};
use crate::criteria::{self, VERDICT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, MAX_SIDE, ONE, ZERO};

/// Largest doubled-space side for which the explicit two-copy observables
/// are materialized; larger states use the purity shortcut.
pub const EXPLICIT_TWO_COPY_MAX_SIDE: usize = 1024;

/// Reduced state Tr_B|ψ⟩⟨ψ| of a pure state, as the m x m matrix M·M†.
fn pure_marginal_a(psi: &[Complex64], dims: BipartiteDims) -> ComplexMatrix {
    let coeffs = ComplexMatrix::from_fn(dims.m, dims.n, |i, j| psi[i * dims.n + j]);
    &coeffs * &coeffs.adjoint()
}

/// C(ψ) = √(2(1 − Tr ρ_A²))
pub fn pure_concurrence(psi: &[Complex64], dims: BipartiteDims) -> Result<f64> {
    bipartite::check_normalized(psi, dims)?;
    let pur = criteria::purity(&pure_marginal_a(psi, dims));
    Ok((2.0 * (1.0 - pur)).max(0.0).sqrt())
}

/// C(ψ) = √(4 Σ_{i<j} μ_i μ_j) from the Schmidt coefficients.
pub fn pure_concurrence_schmidt(psi: &[Complex64], dims: BipartiteDims) -> Result<f64> {
    let mu = bipartite::schmidt(psi, dims)?.mu;
    Ok(concurrence_from_schmidt(&mu))
}

pub fn concurrence_from_schmidt(mu: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..mu.len() {
        for j in i + 1..mu.len() {
            acc += mu[i] * mu[j];
        }
    }
    (4.0 * acc).sqrt()
}

/// √(2n / ((n − 1)(n + 1)²))
pub fn scale_factor(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * n / ((n - 1.0) * (n + 1.0) * (n + 1.0))).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBound {
    pub f_value: f64,
    pub scale_factor: f64,
    /// The larger subsystem dimension, used in the prefactor.
    pub n: usize,
    pub lower_bound: f64,
    /// True when f did not exceed the tolerance and the bound was set to 0.
    pub clamped: bool,
}

/// C(ρ) ≥ √(2n/((n − 1)(n + 1)²)) · f(ρ), n = max(m, n_B).
pub fn lower_bound(s: &BipartiteDensity) -> Result<ConcurrenceBound> {
    lower_bound_with_tol(s, VERDICT_TOL)
}

/// As [`lower_bound`], treating f ≤ `tol` as undetected (bound 0, clamped).
pub fn lower_bound_with_tol(s: &BipartiteDensity, tol: f64) -> Result<ConcurrenceBound> {
    let dims = s.dims();
    if dims.m.min(dims.n) < 2 {
        return Err(Error::Domain(format!(
            "concurrence is identically zero for dims {}x{}",
            dims.m, dims.n
        )));
    }
    let n = dims.m.max(dims.n);
    let f_value = criteria::enhanced_f(s)?;
    Ok(bound_from_f(f_value, n, tol))
}

pub(crate) fn bound_from_f(f_value: f64, n: usize, tol: f64) -> ConcurrenceBound {
    let scale = scale_factor(n);
    let clamped = f_value <= tol;
    ConcurrenceBound {
        f_value,
        scale_factor: scale,
        n,
        lower_bound: if clamped { 0.0 } else { scale * f_value },
        clamped,
    }
}

/// Swap operator on C^d ⊗ C^d.
fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        if i == l && j == k {
            ONE
        } else {
            ZERO
        }
    })
}

/// Projector onto the antisymmetric subspace of C^d ⊗ C^d.
pub fn antisymmetric_projector(d: usize) -> ComplexMatrix {
    (&ComplexMatrix::identity(d * d) - &swap_operator(d)).scale_real(0.5)
}

/// Index of a basis ket after reordering tensor factors: factor `k` of the
/// output is factor `perm[k]` of the input.
fn permuted_index(index: usize, dims: &[usize], perm: &[usize]) -> usize {
    let mut digits = vec![0usize; dims.len()];
    let mut rest = index;
    for k in (0..dims.len()).rev() {
        digits[k] = rest % dims[k];
        rest /= dims[k];
    }
    perm.iter()
        .fold(0, |acc, &src| acc * dims[src] + digits[src])
}

fn permute_vector(v: &[Complex64], dims: &[usize], perm: &[usize]) -> Vec<Complex64> {
    let mut out = vec![ZERO; v.len()];
    for (idx, z) in v.iter().enumerate() {
        out[permuted_index(idx, dims, perm)] = *z;
    }
    out
}

fn permute_operator(x: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> ComplexMatrix {
    let side = x.rows();
    let map: Vec<usize> = (0..side).map(|i| permuted_index(i, dims, perm)).collect();
    let mut inv = vec![0usize; side];
    for (i, &j) in map.iter().enumerate() {
        inv[j] = i;
    }
    ComplexMatrix::from_fn(side, side, |r, c| x[(inv[r], inv[c])])
}

/// K₁ = 4 P₋ ⊗ 𝟙 on two copies, with P₋ on the A factors, in the
/// natural ordering A B A' B' of ρ ⊗ ρ. K₂ is the same with A and B exchanged.
pub fn two_copy_observables(dims: BipartiteDims) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let BipartiteDims { m, n } = dims;
    let side = (m * n) * (m * n);
    if side > MAX_SIDE {
        return Err(Error::dim(format!(
            "two-copy space of side {side} exceeds {MAX_SIDE}"
        )));
    }
    // Built in the grouped order A A' B B', then moved to A B A' B'.
    let grouped = [m, m, n, n];
    let to_natural = [0, 2, 1, 3];
    let k1 = linalg::tensor(
        &antisymmetric_projector(m).scale_real(4.0),
        &ComplexMatrix::identity(n * n),
    )?;
    let k2 = linalg::tensor(
        &ComplexMatrix::identity(m * m),
        &antisymmetric_projector(n).scale_real(4.0),
    )?;
    Ok((
        permute_operator(&k1, &grouped, &to_natural),
        permute_operator(&k2, &grouped, &to_natural),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoCopyExpectations {
    /// Tr[(ρ⊗ρ)K₁]/2 = 1 − Tr ρ_A²
    pub k1: f64,
    /// Tr[(ρ⊗ρ)K₂]/2 = 1 − Tr ρ_B²
    pub k2: f64,
    /// The same quantities from marginal purities.
    pub k1_shortcut: f64,
    pub k2_shortcut: f64,
    /// False when the doubled space was too large and k1/k2 are the shortcut values.
    pub explicit: bool,
}

pub fn two_copy_expectations(s: &BipartiteDensity) -> Result<TwoCopyExpectations> {
    let k1_shortcut = 1.0 - criteria::purity(&s.marginal_a());
    let k2_shortcut = 1.0 - criteria::purity(&s.marginal_b());
    let side = s.dims().total() * s.dims().total();
    if side > EXPLICIT_TWO_COPY_MAX_SIDE {
        return Ok(TwoCopyExpectations {
            k1: k1_shortcut,
            k2: k2_shortcut,
            k1_shortcut,
            k2_shortcut,
            explicit: false,
        });
    }
    let (k1_op, k2_op) = two_copy_observables(s.dims())?;
    let doubled = linalg::tensor(s.rho(), s.rho())?;
    Ok(TwoCopyExpectations {
        k1: 0.5 * doubled.trace_product(&k1_op).re,
        k2: 0.5 * doubled.trace_product(&k2_op).re,
        k1_shortcut,
        k2_shortcut,
        explicit: true,
    })
}

/// √(⟨ψ|⊗⟨ψ| 4P₋⊗P₋ |ψ⟩⊗|ψ⟩), evaluated with the observable built explicitly
/// on the four-factor space.
pub fn pure_two_copy_concurrence(psi: &[Complex64], dims: BipartiteDims) -> Result<f64> {
    bipartite::check_normalized(psi, dims)?;
    let BipartiteDims { m, n } = dims;
    let side = (m * n) * (m * n);
    if side > MAX_SIDE {
        return Err(Error::dim(format!(
            "two-copy space of side {side} exceeds {MAX_SIDE}"
        )));
    }
    let obs =
        linalg::tensor(&antisymmetric_projector(m), &antisymmetric_projector(n))?.scale_real(4.0);
    // ψ⊗ψ is ordered A B A' B'; the observable acts on A A' B B'.
    let doubled = permute_vector(&linalg::tensor_vec(psi, psi), &[m, n, m, n], &[0, 2, 1, 3]);
    let value = linalg::inner_product(&doubled, &obs.apply(&doubled)).re;
    Ok(value.max(0.0).sqrt())
}

/// Gap polynomial from the mixing step of the lower-bound argument:
/// F = −(3/16)(x₁+x₂)² + (1/8)(x₁+x₂)(x₃+x₄) + (1/4)x₃x₄ − (1/2)(x₃+x₄) + (1/2)(x₁+x₂),
/// with x₁, x₂ the marginal purities of two pure states and x₃, x₄ their
/// marginal overlaps.
pub fn mixing_gap_f(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<f64> {
    for (name, x) in [("x1", x1), ("x2", x2), ("x3", x3), ("x4", x4)] {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Parameter {
                name,
                value: x,
                range: "[0, 1]",
            });
        }
    }
    let s12 = x1 + x2;
    let s34 = x3 + x4;
    Ok(-3.0 / 16.0 * s12 * s12 + 0.125 * s12 * s34 + 0.25 * x3 * x4 - 0.5 * s34 + 0.5 * s12)
}
