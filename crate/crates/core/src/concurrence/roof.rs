//! Convex-roof upper bound by random search over ensemble decompositions.
//!
//! Every length-L ensemble of ρ = Σ λ_k |e_k⟩⟨e_k| is |ψ̃_i⟩ = Σ_k U_ik √λ_k |e_k⟩
//! for an L x r isometry U, so the search runs over isometries. Each restart
//! draws a random isometry and refines it by greedy acceptance of small
//! random perturbations, halving the step after a run of rejections.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{lower_bound, pure_concurrence};
use crate::bipartite::{BipartiteDensity, BipartiteDims};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::rng::StateRng;

/// Eigenvalues at or below this are treated as zero when fixing the rank.
pub const RANK_FLOOR: f64 = 1e-12;

const REJECTIONS_BEFORE_HALVING: usize = 50;

/// Members with concurrence below this contribute no gradient.
const GRADIENT_FLOOR: f64 = 1e-13;

const DESCENT_ITERS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofConfig {
    pub restarts: usize,
    /// Odd restarts search ensembles of length ensemble_factor · rank(ρ),
    /// even ones length rank(ρ).
    pub ensemble_factor: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// Initial perturbation size.
    pub step: f64,
    /// A restart stops once its step falls below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            ensemble_factor: 2,
            max_iters: 20_000,
            step: 0.1,
            tol: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub probability: f64,
    pub state: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoofEstimate {
    pub upper_value: f64,
    pub ensemble_size: usize,
    pub restarts_used: usize,
    /// Whether the best restart ended by step size rather than iteration cap.
    pub converged: bool,
    pub best_ensemble: Vec<EnsembleMember>,
}

/// Precomputed decomposition data shared by all restarts.
struct Problem {
    dims: BipartiteDims,
    /// r x d, row k holds the entries of √λ_k |e_k⟩, so U · weighted has the ensemble as rows.
    weighted: DMatrix<Complex64>,
    rank: usize,
}

impl Problem {
    fn new(s: &BipartiteDensity) -> Result<Self> {
        let eig = linalg::eig_hermitian(s.rho())?;
        let d = s.dims().total();
        let keep: Vec<usize> = (0..d)
            .rev()
            .filter(|&k| eig.values[k] > RANK_FLOOR)
            .collect();
        let rank = keep.len();
        if rank == 0 {
            return Err(Error::Domain(
                "state has no eigenvalue above the rank floor".into(),
            ));
        }
        let weighted = DMatrix::from_fn(rank, d, |k, x| {
            let col = keep[k];
            eig.vectors[(x, col)] * eig.values[col].sqrt()
        });
        Ok(Self {
            dims: s.dims(),
            weighted,
            rank,
        })
    }

    /// Rows of the unnormalized ensemble for isometry `u` (L x r).
    fn ensemble(&self, u: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        u * &self.weighted
    }

    /// Σ_i p_i C(ψ_i) = Σ_i √(2(p_i² − Tr ρ̃_{A,i}²)) over unnormalized members.
    fn cost(&self, u: &DMatrix<Complex64>) -> f64 {
        self.evaluate(u, Objective::Roof, false).0
    }

    /// Objective value and, if asked, its gradient ∂f/∂Ū (L x r).
    fn evaluate(
        &self,
        u: &DMatrix<Complex64>,
        objective: Objective,
        grad: bool,
    ) -> (f64, DMatrix<Complex64>) {
        let rows = self.ensemble(u);
        let BipartiteDims { m, n } = self.dims;
        let d = m * n;
        let mut total = 0.0;
        let mut g_rows = DMatrix::zeros(if grad { rows.nrows() } else { 0 }, d);
        let mut marginal = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..rows.nrows() {
            let p: f64 = rows.row(i).iter().map(|z| z.norm_sqr()).sum();
            for a in 0..m {
                for b in a..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..n {
                        acc += rows[(i, a * n + j)] * rows[(i, b * n + j)].conj();
                    }
                    marginal[a * m + b] = acc;
                    marginal[b * m + a] = acc.conj();
                }
            }
            let pur: f64 = marginal.iter().map(|z| z.norm_sqr()).sum();
            let h = (p * p - pur).max(0.0);
            let (value, weight) = match objective {
                Objective::Roof => {
                    let c = (2.0 * h).sqrt();
                    (c, if c > GRADIENT_FLOOR { 1.0 / c } else { 0.0 })
                }
                Objective::Surrogate => (h, 1.0),
            };
            total += value;
            if grad && weight > 0.0 {
                // ∂h/∂ψ̄ = 2pψ − 2·vec(ρ̃_A·M), M the m x n reshape of ψ
                for a in 0..m {
                    for j in 0..n {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for b in 0..m {
                            acc += marginal[a * m + b] * rows[(i, b * n + j)];
                        }
                        g_rows[(i, a * n + j)] = (rows[(i, a * n + j)] * p - acc) * (2.0 * weight);
                    }
                }
            }
        }
        let g = if grad {
            g_rows * self.weighted.adjoint()
        } else {
            DMatrix::zeros(0, 0)
        };
        (total, g)
    }

    /// Riemannian steepest descent on the isometry manifold with Armijo
    /// backtracking and a QR retraction.
    fn descend(
        &self,
        u: DMatrix<Complex64>,
        objective: Objective,
        iters: usize,
    ) -> DMatrix<Complex64> {
        let mut u = u;
        let (mut f, mut g) = self.evaluate(&u, objective, true);
        let mut t = 1.0;
        for _ in 0..iters {
            let ug = u.adjoint() * &g;
            let xi = &g - &u * ((&ug + ug.adjoint()) * Complex64::new(0.5, 0.0));
            let slope = 2.0 * xi.norm_squared();
            if slope.sqrt() < 1e-14 {
                break;
            }
            let mut accepted = None;
            t *= 2.0;
            while t > 1e-16 {
                let trial = &u - &xi * Complex64::new(t, 0.0);
                if let Ok(q) = linalg::orthonormalize_columns(&ComplexMatrix::from_inner(trial)) {
                    let q = q.into_inner();
                    let fq = self.evaluate(&q, objective, false).0;
                    if fq <= f - 1e-4 * t * slope {
                        accepted = Some((q, fq));
                        break;
                    }
                }
                t *= 0.5;
            }
            let Some((q, fq)) = accepted else { break };
            let done = f - fq <= 1e-15 * f.abs().max(1e-300);
            u = q;
            (f, g) = self.evaluate(&u, objective, true);
            if done {
                break;
            }
        }
        u
    }
}

#[derive(Clone, Copy)]
enum Objective {
    /// Σ_i p_i C(ψ_i), the quantity being bounded.
    Roof,
    /// Σ_i p_i² C(ψ_i)² / 2: smooth, and zero on the same ensembles.
    Surrogate,
}

struct RestartOutcome {
    cost: f64,
    isometry: DMatrix<Complex64>,
    converged: bool,
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn run_restart(
    problem: &Problem,
    len: usize,
    config: &RoofConfig,
    restart: usize,
) -> Result<RestartOutcome> {
    let mut rng = StateRng::seeded(restart_seed(config.seed, restart));
    let u0 = linalg::random_isometry(len, problem.rank, &mut rng).into_inner();
    let mut u = problem.descend(u0, Objective::Surrogate, DESCENT_ITERS);
    let mut cost = problem.cost(&u);
    let mut step = config.step;
    let mut rejections = 0;
    for _ in 0..config.max_iters {
        if step < config.tol {
            break;
        }
        let noise = DMatrix::from_fn(len, problem.rank, |_, _| rng.complex_normal() * step);
        let candidate = match linalg::orthonormalize_columns(&ComplexMatrix::from_inner(&u + noise))
        {
            Ok(q) => q.into_inner(),
            Err(_) => {
                rejections += 1;
                continue;
            }
        };
        let c = problem.cost(&candidate);
        if c < cost {
            u = candidate;
            cost = c;
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= REJECTIONS_BEFORE_HALVING {
                step *= 0.5;
                rejections = 0;
            }
        }
    }
    let u = problem.descend(u, Objective::Roof, DESCENT_ITERS);
    let cost = problem.cost(&u);
    Ok(RestartOutcome {
        cost,
        isometry: u,
        converged: step < config.tol,
    })
}

/// Upper bound on C(ρ) from the best ensemble found.
///
/// Restarts run in parallel; each has its own seed derived from
/// `config.seed` and its index, and the minimum is taken in index order, so
/// the result is deterministic for a fixed config.
pub fn roof_upper(s: &BipartiteDensity, config: &RoofConfig) -> Result<RoofEstimate> {
    if config.restarts == 0 || config.ensemble_factor == 0 {
        return Err(Error::Domain(
            "roof search needs at least one restart and ensemble_factor >= 1".into(),
        ));
    }
    let problem = Problem::new(s)?;
    let dims = s.dims();

    if problem.rank == 1 {
        let row: Vec<Complex64> = problem.weighted.row(0).iter().copied().collect();
        let norm = linalg::vec_norm(&row);
        let psi: Vec<Complex64> = row.iter().map(|z| z / norm).collect();
        return Ok(RoofEstimate {
            upper_value: pure_concurrence(&psi, dims)?,
            ensemble_size: 1,
            restarts_used: 0,
            converged: true,
            best_ensemble: vec![EnsembleMember {
                probability: 1.0,
                state: psi,
            }],
        });
    }

    let long = config.ensemble_factor * problem.rank;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|k| {
            let len = if k % 2 == 0 { problem.rank } else { long };
            run_restart(&problem, len, config, k)
        })
        .collect::<Result<_>>()?;
    let best = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.cost.total_cmp(&b.cost).then(i.cmp(j)))
        .map(|(_, o)| o)
        .expect("at least one restart");

    let rows = problem.ensemble(&best.isometry);
    let mut members = Vec::with_capacity(rows.nrows());
    for i in 0..rows.nrows() {
        let row: Vec<Complex64> = rows.row(i).iter().copied().collect();
        let p: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        if p <= 0.0 {
            continue;
        }
        let norm = p.sqrt();
        members.push(EnsembleMember {
            probability: p,
            state: row.into_iter().map(|z| z / norm).collect(),
        });
    }
    let total: f64 = members.iter().map(|m| m.probability).sum();
    for m in &mut members {
        m.probability /= total;
    }
    let mut upper = 0.0;
    for m in &members {
        upper += m.probability * pure_concurrence(&m.state, dims)?;
    }

    if dims.m.min(dims.n) >= 2 {
        let lb = lower_bound(s)?.lower_bound;
        if upper < lb - 1e-6 {
            return Err(Error::Domain(format!(
                "roof estimate {upper} fell below the analytic lower bound {lb}"
            )));
        }
    }

    Ok(RoofEstimate {
        upper_value: upper,
        ensemble_size: members.len(),
        restarts_used: config.restarts,
        converged: best.converged,
        best_ensemble: members,
    })
}
