//! Weyl-Heisenberg displacement operators
//! `U_{m,n} = sum_k e^{2 pi i k n / d} |k+m><k|` with cyclic indices.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Shift index `m` and phase index `n` of `U_{m,n}`, both in `0..d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylIndex {
    pub m: usize,
    pub n: usize,
}

impl WeylIndex {
    pub const IDENTITY: WeylIndex = WeylIndex { m: 0, n: 0 };

    pub const fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    /// Checked constructor enforcing `m, n < d`.
    pub fn checked(d: usize, m: usize, n: usize) -> Result<Self> {
        if m >= d || n >= d {
            return Err(Error::ParameterOutOfRange {
                name: "weyl index",
                value: m.max(n) as f64,
                lo: 0.0,
                hi: (d.max(1) - 1) as f64,
            });
        }
        Ok(Self { m, n })
    }

    /// All `d^2` indices in lexicographic `(m, n)` order.
    pub fn all(d: usize) -> impl Iterator<Item = WeylIndex> {
        (0..d).flat_map(move |m| (0..d).map(move |n| WeylIndex { m, n }))
    }
}

/// `e^{2 pi i r / d}` for `r = 0..d`, each from its own exact angle.
pub fn roots_of_unity(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|r| {
            let angle = TAU * (r as f64) / (d as f64);
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect()
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

/// Dense `d x d` matrix of `U_{m,n}`.
pub fn displacement(d: usize, w: WeylIndex) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let w = WeylIndex::checked(d, w.m, w.n)?;
    let roots = roots_of_unity(d);
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        u[((k + w.m) % d, k)] = roots[(k * w.n) % d];
    }
    Ok(u)
}

/// Phase `e^{2 pi i (m' n - m n') / d}` with `U_a U_b = phase * U_b U_a`.
pub fn commutation_phase(d: usize, a: WeylIndex, b: WeylIndex) -> Complex64 {
    let d_i = d as i64;
    let r = ((b.m as i64) * (a.n as i64) - (a.m as i64) * (b.n as i64)).rem_euclid(d_i);
    let angle = TAU * (r as f64) / (d as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Precomputed monomial action of `U_left (x) U_right` on the product basis:
/// basis state `x = k d + l` maps to `perm[x]` with factor `phase[x]`.
#[derive(Clone, Debug)]
pub struct PairAction {
    perm: Vec<usize>,
    phase: Vec<Complex64>,
}

impl PairAction {
    pub fn new(d: usize, roots: &[Complex64], left: WeylIndex, right: WeylIndex) -> Self {
        let dim = d * d;
        let mut perm = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for k in 0..d {
            for l in 0..d {
                perm.push(((k + left.m) % d) * d + (l + right.m) % d);
                phase.push(roots[(k * left.n + l * right.n) % d]);
            }
        }
        Self { perm, phase }
    }

    /// `out += weight * W rho W^dagger`.
    pub fn accumulate(&self, rho: &ComplexMatrix, weight: f64, out: &mut ComplexMatrix) {
        let dim = self.perm.len();
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for x in 0..dim {
            let px = self.phase[x] * weight;
            let row = self.perm[x] * dim;
            for y in 0..dim {
                dst[row + self.perm[y]] += px * self.phase[y].conj() * src[x * dim + y];
            }
        }
    }

    /// `W rho W^dagger`.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let dim = self.perm.len();
        let mut out = ComplexMatrix::zeros(dim, dim);
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for x in 0..dim {
            let row = self.perm[x] * dim;
            for y in 0..dim {
                dst[row + self.perm[y]] = self.phase[x] * self.phase[y].conj() * src[x * dim + y];
            }
        }
        out
    }
}

/// `(U_left (x) U_right) rho (U_left (x) U_right)^dagger` in `O(d^4)` using
/// the monomial structure of displacement operators.
pub fn conjugate_pair(
    rho: &ComplexMatrix,
    d: usize,
    left: WeylIndex,
    right: WeylIndex,
) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let dim = d * d;
    if rho.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            expected: (dim, dim),
            found: rho.shape(),
        });
    }
    let left = WeylIndex::checked(d, left.m, left.n)?;
    let right = WeylIndex::checked(d, right.m, right.n)?;
    Ok(PairAction::new(d, &roots_of_unity(d), left, right).conjugate(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_displacements_are_paulis() {
        assert_eq!(displacement(2, WeylIndex::new(0, 0)).unwrap(), ComplexMatrix::identity(2));
        let x = displacement(2, WeylIndex::new(1, 0)).unwrap();
        assert_eq!(x[(0, 1)], c(1.0, 0.0));
        assert_eq!(x[(1, 0)], c(1.0, 0.0));
        assert_eq!(x[(0, 0)], c(0.0, 0.0));
        let z = displacement(2, WeylIndex::new(0, 1)).unwrap();
        assert!(z.max_abs_diff(&ComplexMatrix::from_diagonal(&[1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn qutrit_entries() {
        let u = displacement(3, WeylIndex::new(1, 1)).unwrap();
        let w = |k: f64| c((TAU * k / 3.0).cos(), (TAU * k / 3.0).sin());
        assert_eq!(u[(1, 0)], c(1.0, 0.0));
        assert!((u[(2, 1)] - w(1.0)).norm() < 1e-15);
        assert!((u[(0, 2)] - w(2.0)).norm() < 1e-15);
        let nonzero = u.as_slice().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 3);
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(displacement(1, WeylIndex::IDENTITY), Err(Error::InvalidDimension(1)));
    }

    #[test]
    fn unitary_up_to_d12() {
        for d in 2..=12 {
            for w in WeylIndex::all(d) {
                let u = displacement(d, w).unwrap();
                let uu = u.matmul(&u.adjoint()).unwrap();
                assert!(uu.max_abs_diff(&ComplexMatrix::identity(d)) <= 1e-14);
            }
            assert_eq!(displacement(d, WeylIndex::IDENTITY).unwrap(), ComplexMatrix::identity(d));
        }
    }

    #[test]
    fn commutation_phase_examples() {
        assert_eq!(commutation_phase(5, WeylIndex::IDENTITY, WeylIndex::new(3, 2)), c(1.0, 0.0));
        let p = commutation_phase(2, WeylIndex::new(1, 0), WeylIndex::new(0, 1));
        assert!((p - c(-1.0, 0.0)).norm() < 1e-15);
        let p = commutation_phase(3, WeylIndex::new(1, 0), WeylIndex::new(0, 1));
        let expected = c((-TAU / 3.0).cos(), (-TAU / 3.0).sin());
        assert!((p - expected).norm() < 1e-15);
    }

    #[test]
    fn heisenberg_group_relation_exhaustive() {
        for d in 2..=5 {
            let ops: alloc::vec::Vec<_> =
                WeylIndex::all(d).map(|w| (w, displacement(d, w).unwrap())).collect();
            for (a, ua) in &ops {
                for (b, ub) in &ops {
                    let lhs = ua.matmul(ub).unwrap();
                    let rhs = ub.matmul(ua).unwrap().scale(1.0);
                    let phase = commutation_phase(d, *a, *b);
                    let rhs = ComplexMatrix::from_fn(d, d, |i, j| rhs[(i, j)] * phase);
                    assert!(lhs.max_abs_diff(&rhs) <= 1e-12, "d={d} a={a:?} b={b:?}");
                }
            }
        }
    }

    #[test]
    fn conjugate_pair_examples() {
        let mut rho = ComplexMatrix::zeros(4, 4);
        rho[(0, 0)] = c(1.0, 0.0);
        let out = conjugate_pair(&rho, 2, WeylIndex::new(1, 0), WeylIndex::new(1, 0)).unwrap();
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(3, 3)] = c(1.0, 0.0);
        assert_eq!(out, expected);

        let mixed = ComplexMatrix::identity(9).scale(1.0 / 9.0);
        for a in WeylIndex::all(3) {
            for b in WeylIndex::all(3) {
                let out = conjugate_pair(&mixed, 3, a, b).unwrap();
                assert!(out.max_abs_diff(&mixed) < 1e-16);
            }
        }
        let out = conjugate_pair(&expected, 2, WeylIndex::IDENTITY, WeylIndex::IDENTITY).unwrap();
        assert_eq!(out, expected);
        assert!(matches!(
            conjugate_pair(&ComplexMatrix::identity(4), 3, WeylIndex::IDENTITY, WeylIndex::IDENTITY),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conjugate_pair_matches_dense_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=4 {
            let dim = d * d;
            let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let rho = g.matmul(&g.adjoint()).unwrap();
            for _ in 0..10 {
                let a = WeylIndex::new(rng.gen_range(0..d), rng.gen_range(0..d));
                let b = WeylIndex::new(rng.gen_range(0..d), rng.gen_range(0..d));
                let w = kron(&displacement(d, a).unwrap(), &displacement(d, b).unwrap());
                let dense = w.matmul(&rho).unwrap().matmul(&w.adjoint()).unwrap();
                let fast = conjugate_pair(&rho, d, a, b).unwrap();
                assert!(fast.max_abs_diff(&dense) <= 1e-12);
            }
        }
    }
}
