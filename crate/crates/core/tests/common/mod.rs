#![allow(dead_code)]

use quditmem_core::{Complex64, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random full-rank density matrix `G G^dagger / tr` with Gaussian-like
/// complex entries.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let rho = g.matmul(&g.adjoint()).unwrap();
    let tr = rho.trace().re;
    rho.scale(1.0 / tr)
}

/// Random pure-state density matrix.
pub fn random_pure(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ComplexMatrix::outer(&ComplexMatrix::column(v.into_iter().map(|z| z / norm).collect()))
}
