use num_complex::Complex64;

use crate::bipartite::{BipartiteDensity, BipartiteDims};
use crate::linalg::{self, ComplexMatrix, ZERO};
use crate::rng::StateRng;

pub fn bell_vector() -> Vec<Complex64> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    vec![h, ZERO, ZERO, h]
}

pub fn bell_state() -> BipartiteDensity {
    BipartiteDensity::from_pure(&bell_vector(), BipartiteDims::new(2, 2).unwrap()).unwrap()
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut StateRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

pub fn random_pure(len: usize, rng: &mut StateRng) -> Vec<Complex64> {
    let v = rng.complex_normal_vec(len);
    let norm = linalg::vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_density_matrix(d: usize, rank: usize, rng: &mut StateRng) -> ComplexMatrix {
    let g = random_matrix(d, rank, rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    gg.scale_real(1.0 / tr).hermitian_part()
}

pub fn random_state(m: usize, n: usize, rank: usize, rng: &mut StateRng) -> BipartiteDensity {
    let dims = BipartiteDims::new(m, n).unwrap();
    BipartiteDensity::new(dims, random_density_matrix(m * n, rank, rng)).unwrap()
}
