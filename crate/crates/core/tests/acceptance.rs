//! Exit criteria. Each check prints one PASS/FAIL line; the binary exits
//! non-zero if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use conbound::bipartite::{self, BipartiteDensity, BipartiteDims};
use conbound::concurrence::{
    lower_bound, mixing_gap_f, pure_concurrence, pure_two_copy_concurrence, roof_upper,
    two_copy_expectations, RoofConfig,
};
use conbound::criteria::{ccnr_value, enhanced_f};
use conbound::linalg::ComplexMatrix;
use conbound::rng::StateRng;
use conbound::states;
use conbound::witness::{build_witness, witness_expectation};
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

type Check = (&'static str, fn() -> Outcome, Duration);

fn dims(m: usize, n: usize) -> BipartiteDims {
    BipartiteDims::new(m, n).unwrap()
}

fn random_state(d: BipartiteDims, rng: &mut StateRng) -> BipartiteDensity {
    let rank = 1 + rng.below(d.total());
    states::random_density_from(d, rank, rng).unwrap()
}

fn random_matrix(rows: usize, cols: usize, rng: &mut StateRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

// Independent evaluation of f from raw entries: index loops for the
// marginals and the realignment, one-sided Jacobi for the singular values.

type Dense = Vec<Vec<Complex64>>;

fn dense(s: &BipartiteDensity) -> Dense {
    let d = s.dims().total();
    (0..d)
        .map(|i| (0..d).map(|j| s.rho()[(i, j)]).collect())
        .collect()
}

#[allow(clippy::needless_range_loop)]
fn jacobi_singular_values(a: &Dense) -> Vec<f64> {
    let rows = a.len();
    let cols = a[0].len();
    let mut c: Dense = (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j]).collect())
        .collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = c[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = c[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = c[p].iter().zip(&c[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-300 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let x = c[p][i];
                    let y = c[q][i] * phase.conj();
                    c[p][i] = x * cs - y * sn;
                    c[q][i] = (x * sn + y * cs) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = c
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv.truncate(rows.min(cols));
    sv
}

fn reference_f(rho: &Dense, m: usize, n: usize) -> f64 {
    let mut ra = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    let mut rb = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..m {
        for k in 0..m {
            for j in 0..n {
                ra[i][k] += rho[i * n + j][k * n + j];
            }
        }
    }
    for j in 0..n {
        for l in 0..n {
            for i in 0..m {
                rb[j][l] += rho[i * n + j][i * n + l];
            }
        }
    }
    let mut realigned = vec![vec![Complex64::new(0.0, 0.0); n * n]; m * m];
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    let sigma = rho[i * n + k][j * n + l] - ra[i][j] * rb[k][l];
                    realigned[i * m + j][k * n + l] = sigma;
                }
            }
        }
    }
    let norm: f64 = jacobi_singular_values(&realigned).iter().sum();
    let purity = |x: &Dense| -> f64 { x.iter().flatten().map(|z| z.norm_sqr()).sum() };
    norm - ((1.0 - purity(&ra)) * (1.0 - purity(&rb))).max(0.0).sqrt()
}

fn reference_lower_bound(s: &BipartiteDensity) -> f64 {
    let BipartiteDims { m, n } = s.dims();
    let big = m.max(n) as f64;
    let scale = (2.0 * big / ((big - 1.0) * (big + 1.0) * (big + 1.0))).sqrt();
    (scale * reference_f(&dense(s), m, n)).max(0.0)
}

fn golden_lower_bounds() -> Outcome {
    let cases = [(0.236, 0.9955, 0.000487), (0.232, 0.9939, 0.000019)];
    let mut pass = true;
    let mut detail = Vec::new();
    for (a, p, want) in cases {
        let s = states::horodecki_noisy(a, p).unwrap();
        let got = lower_bound(&s).unwrap().lower_bound;
        let reference = reference_lower_bound(&s);
        let close = (got - want).abs() <= 1e-4;
        let agree = (got - reference).abs() <= 1e-10;
        pass &= close && agree;
        detail.push(format!(
            "a={a} p={p}: {got:.6e} (want {want}, index-loop route {reference:.6e})"
        ));
    }
    Outcome::new(pass, detail.join("; "))
}

fn roof_cross_check() -> Outcome {
    const QUOTED: f64 = 0.101855;
    let s = states::horodecki_noisy(0.236, 0.9955).unwrap();
    let lb = lower_bound(&s).unwrap().lower_bound;
    let config = RoofConfig {
        restarts: 50,
        seed: 20_240_601,
        ..RoofConfig::default()
    };
    let upper = roof_upper(&s, &config).unwrap().upper_value;
    let sandwich = lb <= upper && upper <= QUOTED + 5e-3;
    let close = (upper - QUOTED).abs() <= 5e-3;
    Outcome::new(
        sandwich && close,
        format!(
            "upper={upper:.6} lb={lb:.6e} in [lb, {:.6}]: {sandwich}; |upper - {QUOTED}| = {:.4} <= 5e-3: {close}",
            QUOTED + 5e-3,
            (upper - QUOTED).abs()
        ),
    )
}

fn pure_state_validity() -> Outcome {
    let mut rng = StateRng::seeded(3);
    let mut worst = f64::NEG_INFINITY;
    for (m, n) in [(2, 2), (2, 3), (3, 3), (3, 4)] {
        let d = dims(m, n);
        for _ in 0..1000 {
            let psi = states::random_pure_vector(d.total(), &mut rng);
            let s = BipartiteDensity::from_pure(&psi, d).unwrap();
            let gap = lower_bound(&s).unwrap().lower_bound - pure_concurrence(&psi, d).unwrap();
            worst = worst.max(gap);
        }
    }
    Outcome::new(worst <= 1e-9, format!("max(lower_bound - C) = {worst:.3e}"))
}

fn random_schmidt(n: usize, rng: &mut StateRng) -> Vec<f64> {
    // Exponential weights give a uniform point on the simplex; some
    // coefficients are zeroed to reach the lower-rank faces too.
    let keep = 1 + rng.below(n);
    let mut mu: Vec<f64> = (0..n)
        .map(|k| {
            if k < keep {
                -(1.0 - rng.uniform()).ln()
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|x| *x /= total);
    mu
}

fn proof_chain() -> Outcome {
    let mut rng = StateRng::seeded(4);
    let mut worst = f64::NEG_INFINITY;
    for n in [2usize, 3, 4, 6] {
        let d = dims(n, n);
        let nf = n as f64;
        let factor = ((nf - 1.0) * (nf + 1.0) * (nf + 1.0) / (2.0 * nf)).sqrt();
        for _ in 0..1000 {
            let mu = random_schmidt(n, &mut rng);
            let psi = states::pure_from_schmidt(&mu, d).unwrap();
            let s = BipartiteDensity::from_pure(&psi, d).unwrap();
            let gap = enhanced_f(&s).unwrap() - factor * pure_concurrence(&psi, d).unwrap();
            worst = worst.max(gap);
        }
    }
    Outcome::new(worst <= 1e-9, format!("max(f - k_n C) = {worst:.3e}"))
}

fn mixing_inequality() -> Outcome {
    let mut rng = StateRng::seeded(5);
    let d = dims(3, 3);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let r1 = random_state(d, &mut rng);
        let r2 = random_state(d, &mut rng);
        let mid = r1.mix(&r2, 0.5).unwrap();
        let gap = enhanced_f(&mid).unwrap()
            - 0.5 * enhanced_f(&r1).unwrap()
            - 0.5 * enhanced_f(&r2).unwrap();
        worst = worst.max(gap);
    }
    let grid: Vec<f64> = (0..=20).map(|k| k as f64 * 0.05).collect();
    let mut min_gap = f64::INFINITY;
    for &x1 in &grid {
        for &x2 in &grid {
            let cap = (x1 * x2).sqrt() + 1e-12;
            for &x3 in grid.iter().filter(|&&x| x <= cap) {
                for &x4 in grid.iter().filter(|&&x| x <= cap) {
                    min_gap = min_gap.min(mixing_gap_f(x1, x2, x3, x4).unwrap());
                }
            }
        }
    }
    Outcome::new(
        worst <= 1e-9 && min_gap >= -1e-12,
        format!("max convexity gap = {worst:.3e}; min F on grid = {min_gap:.3e}"),
    )
}

fn witness_identity() -> Outcome {
    let mut rng = StateRng::seeded(6);
    let mut worst: f64 = 0.0;
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let d = dims(m, n);
        for _ in 0..500 {
            let s = random_state(d, &mut rng);
            let w = build_witness(&s).unwrap();
            let norm = conbound::criteria::realigned_correlation_norm(&s).unwrap();
            let sigma = conbound::criteria::correlation_matrix(&s);
            let raw = w.w_raw.trace_product(&sigma);
            worst = worst
                .max((raw - Complex64::new(norm, 0.0)).norm())
                .max((witness_expectation(&w, &s).unwrap() - norm).abs());
        }
    }
    Outcome::new(
        worst <= 1e-10,
        format!("max |Tr[W sigma] - norm| = {worst:.3e}"),
    )
}

fn adjoint_identity() -> Outcome {
    let mut rng = StateRng::seeded(7);
    let mut worst: f64 = 0.0;
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let d = dims(m, n);
        for _ in 0..100 {
            let x = random_matrix(m * n, m * n, &mut rng);
            let y = random_matrix(m * m, n * n, &mut rng);
            let lhs = bipartite::realign(&x, d)
                .unwrap()
                .trace_product(&y.adjoint());
            let rhs = x.trace_product(&bipartite::realign_adjoint(&y, d).unwrap().adjoint());
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Outcome::new(
        worst <= 1e-12,
        format!("max |<R(X),Y> - <X,R*(Y)>| = {worst:.3e}"),
    )
}

fn two_copy() -> Outcome {
    let mut rng = StateRng::seeded(8);
    let mut worst_pure: f64 = 0.0;
    let mut worst_shortcut: f64 = 0.0;
    let mut all_explicit = true;
    for (m, n) in [(2, 2), (2, 3)] {
        let d = dims(m, n);
        for _ in 0..100 {
            let psi = states::random_pure_vector(d.total(), &mut rng);
            let a = pure_two_copy_concurrence(&psi, d).unwrap();
            let b = pure_concurrence(&psi, d).unwrap();
            worst_pure = worst_pure.max((a - b).abs());
            let t = two_copy_expectations(&random_state(d, &mut rng)).unwrap();
            all_explicit &= t.explicit;
            worst_shortcut = worst_shortcut
                .max((t.k1 - t.k1_shortcut).abs())
                .max((t.k2 - t.k2_shortcut).abs());
        }
    }
    Outcome::new(
        worst_pure <= 1e-10 && worst_shortcut <= 1e-10 && all_explicit,
        format!(
            "pure route gap {worst_pure:.3e}; explicit vs purity shortcut {worst_shortcut:.3e}"
        ),
    )
}

fn separable_nulls() -> Outcome {
    let mut rng = StateRng::seeded(9);
    let d = dims(3, 3);
    let mut max_f = f64::NEG_INFINITY;
    let mut nonzero = 0;
    for _ in 0..1000 {
        let count = 1 + rng.below(10);
        let s = states::random_separable(d, count, &mut rng).unwrap();
        max_f = max_f.max(enhanced_f(&s).unwrap());
        if lower_bound(&s).unwrap().lower_bound != 0.0 {
            nonzero += 1;
        }
    }
    Outcome::new(
        max_f <= 1e-9 && nonzero == 0,
        format!("max f = {max_f:.3e}; nonzero bounds = {nonzero}"),
    )
}

fn isotropic_threshold() -> Outcome {
    let first = (0..=1000).map(|k| k as f64 * 0.001).find(|&f| {
        lower_bound(&states::isotropic(3, f).unwrap())
            .unwrap()
            .lower_bound
            > 1e-9
    });
    match first {
        Some(f) => Outcome::new(
            (f - 1.0 / 3.0).abs() <= 0.001,
            format!("first F with lower_bound > 1e-9: {f:.3}"),
        ),
        None => Outcome::new(false, "no F in [0, 1] gave a positive bound"),
    }
}

fn bell_values() -> Outcome {
    let psi = states::max_entangled_vector(2);
    let s = BipartiteDensity::from_pure(&psi, dims(2, 2)).unwrap();
    let ccnr = ccnr_value(&s).unwrap();
    let f = enhanced_f(&s).unwrap();
    let lb = lower_bound(&s).unwrap().lower_bound;
    let w = build_witness(&s).unwrap();
    let wexp = witness_expectation(&w, &s).unwrap();
    let pass = (ccnr - 2.0).abs() <= 1e-10
        && (f - 1.0).abs() <= 1e-10
        && (lb - 2.0 / 3.0).abs() <= 1e-10
        && (wexp - 1.5).abs() <= 1e-10;
    Outcome::new(
        pass,
        format!("ccnr={ccnr:.12} f={f:.12} lb={lb:.12} witness={wexp:.12}"),
    )
}

fn main() -> ExitCode {
    let checks: [Check; 11] = [
        (
            "golden lower bounds",
            golden_lower_bounds,
            Duration::from_secs(1),
        ),
        (
            "roof cross-check",
            roof_cross_check,
            Duration::from_secs(120),
        ),
        (
            "pure-state validity",
            pure_state_validity,
            Duration::from_secs(10),
        ),
        (
            "pure-state inequality chain",
            proof_chain,
            Duration::from_secs(5),
        ),
        (
            "mixing inequality",
            mixing_inequality,
            Duration::from_secs(30),
        ),
        (
            "witness identity",
            witness_identity,
            Duration::from_secs(30),
        ),
        ("adjoint identity", adjoint_identity, Duration::from_secs(5)),
        ("two-copy representation", two_copy, Duration::from_secs(10)),
        (
            "separable null results",
            separable_nulls,
            Duration::from_secs(30),
        ),
        (
            "isotropic threshold",
            isotropic_threshold,
            Duration::from_secs(5),
        ),
        ("Bell-state values", bell_values, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= *budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  [{:.2}s / {}s] {}",
            k + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            outcome.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        checks.len() - failed,
        checks.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
