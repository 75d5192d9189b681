//! Separability criteria: PPT, CCNR (realignment), and the strengthened
//! realignment test on the correlation matrix ρ − ρ_A ⊗ ρ_B.

use serde::{Deserialize, Serialize};

use crate::bipartite::{self, BipartiteDensity};
use crate::error::Result;
use crate::linalg::{self, ComplexMatrix};

/// Default threshold applied to every criterion verdict.
pub const VERDICT_TOL: f64 = 1e-9;

/// How the nonlinear-witness diagnostic reads its undefined norm term.
pub const TAU_ASSUMPTION: &str = "tau = R(rho - rho_A (x) rho_B)";

/// Tr(X²) for Hermitian X, computed as the squared Frobenius norm.
pub fn purity(x: &ComplexMatrix) -> f64 {
    let f = x.frobenius_norm();
    f * f
}

/// ρ − ρ_A ⊗ ρ_B
pub fn correlation_matrix(s: &BipartiteDensity) -> ComplexMatrix {
    let prod = linalg::tensor(&s.marginal_a(), &s.marginal_b()).expect("dims already validated");
    s.rho() - &prod
}

/// ‖R(ρ − ρ_A ⊗ ρ_B)‖₁
pub fn realigned_correlation_norm(s: &BipartiteDensity) -> Result<f64> {
    linalg::trace_norm(&bipartite::realign(&correlation_matrix(s), s.dims())?)
}

/// √((1 − Tr ρ_A²)(1 − Tr ρ_B²))
pub fn mixedness_term(s: &BipartiteDensity) -> f64 {
    let la = (1.0 - purity(&s.marginal_a())).max(0.0);
    let lb = (1.0 - purity(&s.marginal_b())).max(0.0);
    (la * lb).sqrt()
}

/// Smallest eigenvalue of ρ^{T_A}; negative certifies entanglement.
pub fn ppt_min_eigenvalue(s: &BipartiteDensity) -> Result<f64> {
    let pt = bipartite::partial_transpose_a(s);
    Ok(linalg::eig_hermitian(&pt)?.values[0])
}

/// ‖R(ρ)‖₁; above 1 certifies entanglement.
pub fn ccnr_value(s: &BipartiteDensity) -> Result<f64> {
    linalg::trace_norm(&bipartite::realign(s.rho(), s.dims())?)
}

/// f(ρ) = ‖R(ρ − ρ_A⊗ρ_B)‖₁ − √((1 − Tr ρ_A²)(1 − Tr ρ_B²)).
/// Non-positive on every separable state.
pub fn enhanced_f(s: &BipartiteDensity) -> Result<f64> {
    Ok(realigned_correlation_norm(s)? - mixedness_term(s))
}

/// 1 − ‖τ‖₁ − (Tr ρ_A² + Tr ρ_B²)/2 with τ read as in [`TAU_ASSUMPTION`].
/// Diagnostic only; negative values indicate entanglement.
pub fn nonlinear_witness_value(s: &BipartiteDensity) -> Result<f64> {
    let tau = realigned_correlation_norm(s)?;
    Ok(1.0 - tau - 0.5 * (purity(&s.marginal_a()) + purity(&s.marginal_b())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Entangled,
    Undecided,
}

impl Verdict {
    fn from_flag(entangled: bool) -> Self {
        if entangled {
            Verdict::Entangled
        } else {
            Verdict::Undecided
        }
    }

    pub fn is_entangled(&self) -> bool {
        matches!(self, Verdict::Entangled)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaFlags {
    pub ppt: Verdict,
    pub ccnr: Verdict,
    pub enhanced: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub ppt_min_eigenvalue: f64,
    pub ccnr_value: f64,
    pub f_value: f64,
    pub nonlinear_witness_value: f64,
    pub flags: CriteriaFlags,
    pub tolerance: f64,
}

pub fn evaluate(s: &BipartiteDensity) -> Result<CriteriaReport> {
    evaluate_with_tol(s, VERDICT_TOL)
}

pub fn evaluate_with_tol(s: &BipartiteDensity, tol: f64) -> Result<CriteriaReport> {
    let ppt = ppt_min_eigenvalue(s)?;
    let ccnr = ccnr_value(s)?;
    let corr = realigned_correlation_norm(s)?;
    let pa = purity(&s.marginal_a());
    let pb = purity(&s.marginal_b());
    let f_value = corr - ((1.0 - pa).max(0.0) * (1.0 - pb).max(0.0)).sqrt();
    let nonlinear = 1.0 - corr - 0.5 * (pa + pb);
    Ok(CriteriaReport {
        ppt_min_eigenvalue: ppt,
        ccnr_value: ccnr,
        f_value,
        nonlinear_witness_value: nonlinear,
        flags: CriteriaFlags {
            ppt: Verdict::from_flag(ppt < -tol),
            ccnr: Verdict::from_flag(ccnr > 1.0 + tol),
            enhanced: Verdict::from_flag(f_value > tol),
        },
        tolerance: tol,
    })
}
