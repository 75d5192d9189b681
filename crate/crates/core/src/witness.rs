//! A single observable W whose expectation on ρ − ρ_A⊗ρ_B reads out
//! ‖R(ρ − ρ_A⊗ρ_B)‖₁.
//!
//! With R(σ) = U·D·V†, the trace norm equals Tr[V·U†·R(σ)]. Pulling the
//! realignment across the trace with its transpose dual gives
//! W = [R⁻¹((V·U†)ᵀ)]ᵀ and ‖R(σ)‖₁ = Tr[W·σ].

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bipartite::{self, BipartiteDensity, BipartiteDims};
use crate::criteria;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};

/// Realigned correlation norms below this mark the witness as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessOperator {
    pub w_raw: ComplexMatrix,
    pub w_hermitian: ComplexMatrix,
    /// SHA-256 of the source density matrix, see [`state_digest`].
    pub source_state_hash: String,
    pub dims: BipartiteDims,
    /// ‖R(σ)‖₁ of the source state.
    pub trace_norm: f64,
    /// Re Tr[W_herm·σ] on the source state.
    pub expectation: f64,
    /// The source correlation matrix vanished, so U and V were arbitrary.
    pub degenerate: bool,
}

/// Hex SHA-256 over the dims (u64 little-endian) followed by the
/// row-major entries (re, im as f64 little-endian).
pub fn state_digest(s: &BipartiteDensity) -> String {
    let mut h = Sha256::new();
    h.update((s.dims().m as u64).to_le_bytes());
    h.update((s.dims().n as u64).to_le_bytes());
    for z in s.rho().to_row_major() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    let bytes = h.finalize();
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn build_witness(s: &BipartiteDensity) -> Result<WitnessOperator> {
    let dims = s.dims();
    let sigma = criteria::correlation_matrix(s);
    let realigned = bipartite::realign(&sigma, dims)?;
    let svd = linalg::svd(&realigned)?;
    let frame = &svd.v * &svd.u.adjoint();
    let w_raw = bipartite::realign_transpose_dual(&frame, dims)?;
    let w_hermitian = w_raw.hermitian_part();
    let trace_norm: f64 = svd.singular_values.iter().sum();
    let expectation = w_hermitian.trace_product(&sigma).re;
    Ok(WitnessOperator {
        w_raw,
        w_hermitian,
        source_state_hash: state_digest(s),
        dims,
        trace_norm,
        expectation,
        degenerate: trace_norm < DEGENERATE_TOL,
    })
}

/// Re Tr[W_herm·(ρ − ρ_A⊗ρ_B)].
///
/// Equal to the realigned correlation norm on the source state; on any
/// other state it is only a lower estimate of that state's norm.
pub fn witness_expectation(w: &WitnessOperator, s: &BipartiteDensity) -> Result<f64> {
    if w.dims != s.dims() {
        return Err(Error::dim(format!(
            "witness built for {}x{} applied to a {}x{} state",
            w.dims.m,
            w.dims.n,
            s.dims().m,
            s.dims().n
        )));
    }
    Ok(w.w_hermitian
        .trace_product(&criteria::correlation_matrix(s))
        .re)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub trace_norm: f64,
    pub expectation: f64,
    pub degenerate: bool,
}

impl WitnessOperator {
    pub fn summary(&self) -> WitnessSummary {
        WitnessSummary {
            trace_norm: self.trace_norm,
            expectation: self.expectation,
            degenerate: self.degenerate,
        }
    }
}
