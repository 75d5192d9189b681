//! State generators: isotropic states, the 3x3 Horodecki bound-entangled
//! family and its noisy mixture, the cyclic α-family, and seeded random
//! ensembles.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteDensity, BipartiteDims};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ZERO};
use crate::rng::StateRng;

fn check_range(name: &'static str, value: f64, ok: bool, range: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter { name, value, range })
    }
}

fn square_dims(d: usize) -> Result<BipartiteDims> {
    if d < 2 {
        return Err(Error::Parameter {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    BipartiteDims::new(d, d)
}

/// |Ψ⁺⟩ = Σ_i |ii⟩ / √d
pub fn max_entangled_vector(d: usize) -> Vec<Complex64> {
    let mut psi = vec![ZERO; d * d];
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        psi[i * d + i] = amp;
    }
    psi
}

pub fn max_entangled(d: usize) -> Result<BipartiteDensity> {
    let dims = square_dims(d)?;
    BipartiteDensity::from_pure(&max_entangled_vector(d), dims)
}

/// ρ_F = (1 − F)/(d² − 1) · (I − |Ψ⁺⟩⟨Ψ⁺|) + F |Ψ⁺⟩⟨Ψ⁺|
pub fn isotropic(d: usize, fidelity: f64) -> Result<BipartiteDensity> {
    let dims = square_dims(d)?;
    check_range("F", fidelity, (0.0..=1.0).contains(&fidelity), "[0, 1]")?;
    let psi = max_entangled_vector(d);
    let proj = ComplexMatrix::outer(&psi, &psi);
    let noise = (1.0 - fidelity) / (d * d - 1) as f64;
    let rest = &ComplexMatrix::identity(d * d) - &proj;
    BipartiteDensity::new(dims, &rest.scale_real(noise) + &proj.scale_real(fidelity))
}

/// The 3x3 Horodecki state, PPT and entangled for 0 < a < 1.
pub fn horodecki_a(a: f64) -> Result<BipartiteDensity> {
    check_range("a", a, a > 0.0 && a < 1.0, "(0, 1)")?;
    let mut m = [[0.0f64; 9]; 9];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = a;
    }
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            m[i][j] = a;
        }
    }
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[6][6] = (1.0 + a) / 2.0;
    m[8][8] = (1.0 + a) / 2.0;
    m[6][8] = off;
    m[8][6] = off;
    let norm = 1.0 / (8.0 * a + 1.0);
    let flat: Vec<f64> = m.iter().flatten().map(|x| x * norm).collect();
    BipartiteDensity::new(
        BipartiteDims::new(3, 3)?,
        ComplexMatrix::from_real_row_major(9, 9, &flat)?,
    )
}

/// p·ρ(a) + (1 − p)·I/9
pub fn horodecki_noisy(a: f64, p: f64) -> Result<BipartiteDensity> {
    check_range("p", p, (0.0..=1.0).contains(&p), "[0, 1]")?;
    let base = horodecki_a(a)?;
    base.mix(&BipartiteDensity::maximally_mixed(base.dims()), p)
}

/// ρ(α) = (2/7)|Ψ⁺⟩⟨Ψ⁺| + (α/7)σ₊ + ((5 − α)/7)σ₋ on 3x3, where σ₊
/// mixes |01⟩, |12⟩, |20⟩ and σ₋ mixes |10⟩, |21⟩, |02⟩ uniformly.
///
/// Separable for α ≤ 3, PPT-entangled for 3 < α ≤ 4, NPT above 4.
pub fn alpha_family(alpha: f64) -> Result<BipartiteDensity> {
    check_range("alpha", alpha, (2.0..=5.0).contains(&alpha), "[2, 5]")?;
    let psi = max_entangled_vector(3);
    let mut rho = ComplexMatrix::outer(&psi, &psi).scale_real(2.0 / 7.0);
    let mut diag = [0.0f64; 9];
    for &(i, j) in &[(0usize, 1usize), (1, 2), (2, 0)] {
        diag[i * 3 + j] += alpha / 21.0;
        diag[j * 3 + i] += (5.0 - alpha) / 21.0;
    }
    rho = &rho + &ComplexMatrix::from_diag(&diag);
    BipartiteDensity::new(BipartiteDims::new(3, 3)?, rho)
}

/// G·G†/Tr(G·G†) with G an (mn) x rank complex-Gaussian matrix whose
/// entries are drawn in row-major order from `StateRng::seeded(seed)`.
pub fn random_density(m: usize, n: usize, rank: usize, seed: u64) -> Result<BipartiteDensity> {
    let mut rng = StateRng::seeded(seed);
    random_density_from(BipartiteDims::new(m, n)?, rank, &mut rng)
}

pub fn random_density_from(
    dims: BipartiteDims,
    rank: usize,
    rng: &mut StateRng,
) -> Result<BipartiteDensity> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(Error::Parameter {
            name: "rank",
            value: rank as f64,
            range: "1 <= rank <= m*n",
        });
    }
    let g = ComplexMatrix::from_row_major(d, rank, rng.complex_normal_vec(d * rank))?;
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    BipartiteDensity::new(dims, gg.scale_real(1.0 / tr).hermitian_part())
}

/// Haar-random normalized vector of length `len`.
pub fn random_pure_vector(len: usize, rng: &mut StateRng) -> Vec<Complex64> {
    let v = rng.complex_normal_vec(len);
    let norm = linalg::vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// |a⟩ ⊗ |b⟩ with independent Haar-random factors.
pub fn random_product_vector(dims: BipartiteDims, rng: &mut StateRng) -> Vec<Complex64> {
    let a = random_pure_vector(dims.m, rng);
    let b = random_pure_vector(dims.n, rng);
    linalg::tensor_vec(&a, &b)
}

/// Mixture of `count` random pure product states with uniform-random weights.
pub fn random_separable(
    dims: BipartiteDims,
    count: usize,
    rng: &mut StateRng,
) -> Result<BipartiteDensity> {
    if count == 0 {
        return Err(Error::Parameter {
            name: "count",
            value: 0.0,
            range: "count >= 1",
        });
    }
    let weights: Vec<f64> = (0..count).map(|_| rng.uniform() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let d = dims.total();
    let mut rho = ComplexMatrix::zeros(d, d);
    for w in weights {
        let v = random_product_vector(dims, rng);
        rho = &rho + &ComplexMatrix::outer(&v, &v).scale_real(w / total);
    }
    BipartiteDensity::new(dims, rho.hermitian_part())
}

/// Σ √μ_i |ii⟩ in the computational bases.
pub fn pure_from_schmidt(mu: &[f64], dims: BipartiteDims) -> Result<Vec<Complex64>> {
    if mu.is_empty() || mu.len() > dims.m.min(dims.n) {
        return Err(Error::dim(format!(
            "{} Schmidt coefficients for dims {}x{}",
            mu.len(),
            dims.m,
            dims.n
        )));
    }
    if let Some(&bad) = mu.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::Parameter {
            name: "mu",
            value: bad,
            range: "mu_i >= 0",
        });
    }
    let sum: f64 = mu.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition {
            invariant: "Schmidt coefficients sum to 1",
            deviation: (sum - 1.0).abs(),
            tolerance: 1e-10,
        });
    }
    let mut psi = vec![ZERO; dims.total()];
    for (i, &x) in mu.iter().enumerate() {
        psi[i * dims.n + i] = Complex64::new(x.sqrt(), 0.0);
    }
    Ok(psi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Isotropic,
    HorodeckiA,
    HorodeckiNoisy,
    AlphaFamily,
    MaxEntangled,
    Product,
    RandomGinibre,
    PureSchmidt,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Isotropic,
        Family::HorodeckiA,
        Family::HorodeckiNoisy,
        Family::AlphaFamily,
        Family::MaxEntangled,
        Family::Product,
        Family::RandomGinibre,
        Family::PureSchmidt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Isotropic => "isotropic",
            Family::HorodeckiA => "horodecki_a",
            Family::HorodeckiNoisy => "horodecki_noisy",
            Family::AlphaFamily => "alpha_family",
            Family::MaxEntangled => "max_entangled",
            Family::Product => "product",
            Family::RandomGinibre => "random_ginibre",
            Family::PureSchmidt => "pure_schmidt",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown state family `{s}`")))
    }
}

/// Named parameters; which ones are required depends on the family.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub family: Family,
    pub params: StateParams,
}

impl StateSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: StateParams::default(),
        }
    }

    fn need<T: Copy>(&self, value: Option<T>, name: &'static str) -> Result<T> {
        value.ok_or(Error::MissingParameter {
            family: self.family.name(),
            name,
        })
    }

    fn rect_dims(&self) -> Result<BipartiteDims> {
        let p = &self.params;
        match (p.m, p.n, p.d) {
            (Some(m), Some(n), _) => BipartiteDims::new(m, n),
            (None, None, Some(d)) => BipartiteDims::new(d, d),
            (Some(m), None, d) => BipartiteDims::new(m, d.unwrap_or(m)),
            (None, Some(n), d) => BipartiteDims::new(d.unwrap_or(n), n),
            (None, None, None) => Err(Error::MissingParameter {
                family: self.family.name(),
                name: "d",
            }),
        }
    }

    pub fn build(&self) -> Result<BipartiteDensity> {
        let p = &self.params;
        match self.family {
            Family::Isotropic => isotropic(self.need(p.d, "d")?, self.need(p.fidelity, "F")?),
            Family::HorodeckiA => horodecki_a(self.need(p.a, "a")?),
            Family::HorodeckiNoisy => horodecki_noisy(self.need(p.a, "a")?, self.need(p.p, "p")?),
            Family::AlphaFamily => alpha_family(self.need(p.alpha, "alpha")?),
            Family::MaxEntangled => max_entangled(self.need(p.d, "d")?),
            Family::Product => {
                let dims = self.rect_dims()?;
                let mut rng = StateRng::seeded(p.seed.unwrap_or(0));
                BipartiteDensity::from_pure(&random_product_vector(dims, &mut rng), dims)
            }
            Family::RandomGinibre => {
                let dims = self.rect_dims()?;
                let rank = p.rank.unwrap_or(dims.total());
                let mut rng = StateRng::seeded(p.seed.unwrap_or(0));
                random_density_from(dims, rank, &mut rng)
            }
            Family::PureSchmidt => {
                let mu = p.mu.as_deref().ok_or(Error::MissingParameter {
                    family: self.family.name(),
                    name: "mu",
                })?;
                let dims = if p.d.is_some() || p.m.is_some() || p.n.is_some() {
                    self.rect_dims()?
                } else {
                    BipartiteDims::new(mu.len().max(2), mu.len().max(2))?
                };
                let psi = pure_from_schmidt(mu, dims)?;
                BipartiteDensity::from_pure(&psi, dims)
            }
        }
    }

    /// Sets a numeric sweep parameter by its CLI name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let as_count = |v: f64| -> Result<usize> {
            if v >= 1.0 && v.fract() == 0.0 && v <= 64.0 {
                Ok(v as usize)
            } else {
                Err(Error::Domain(format!(
                    "parameter `{name}` must be a positive integer, got {v}"
                )))
            }
        };
        let p = &mut self.params;
        match name {
            "F" => p.fidelity = Some(value),
            "a" => p.a = Some(value),
            "p" => p.p = Some(value),
            "alpha" => p.alpha = Some(value),
            "d" => p.d = Some(as_count(value)?),
            "m" => p.m = Some(as_count(value)?),
            "n" => p.n = Some(as_count(value)?),
            "rank" => p.rank = Some(as_count(value)?),
            "seed" => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Error::Domain(format!(
                        "seed must be a non-negative integer, got {value}"
                    )));
                }
                p.seed = Some(value as u64)
            }
            _ => {
                return Err(Error::Domain(format!(
                    "`{name}` is not a sweepable parameter"
                )))
            }
        }
        Ok(())
    }
}
