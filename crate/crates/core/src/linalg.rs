//! Dense complex linear algebra sized for `d^2 x d^2` two-qudit operators.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance used when a matrix is required to be Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-CLIP_TOL, 0)` are treated as zero by the entropy.
pub const CLIP_TOL: f64 = 1e-12;
/// Allowed deviation of a spectrum's sum from 1.
pub const SPECTRUM_SUM_TOL: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Column vector.
    pub fn column(entries: Vec<Complex64>) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: f64, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise `|M - M^dagger|`.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_asymmetry() <= tol
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &Self) -> Self {
        let n = v.data.len();
        Self::from_fn(n, n, |i, j| v.data[i] * v.data[j].conj())
    }

    pub fn vector_norm(&self) -> f64 {
        self.frobenius_norm()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product, `(a x b)[i*rb + k, j*cb + l] = a[i,j] b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    ComplexMatrix::from_fn(ra * rb, ca * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

/// Eigenvalues of a density-type operator, ascending, one entry per
/// eigenvector (multiplicities expanded).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Wraps raw eigenvalues and sorts them ascending. No normalization
    /// check is made here; see [`Spectrum::validate`].
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    /// Expands `(value, multiplicity)` pairs.
    pub fn from_multiplicities(families: &[(f64, usize)]) -> Self {
        let mut values = Vec::with_capacity(families.iter().map(|f| f.1).sum());
        for &(v, count) in families {
            values.extend(core::iter::repeat_n(v, count));
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Number of eigenvalues, the Hilbert-space dimension described.
    pub fn dimension(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Checks the density-spectrum invariants: unit sum and no eigenvalue
    /// below `-CLIP_TOL`.
    pub fn validate(&self) -> Result<()> {
        let sum = self.sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL || !sum.is_finite() {
            return Err(Error::SpectrumNotNormalized { sum });
        }
        if self.min() < -CLIP_TOL {
            return Err(Error::NegativeEigenvalue(self.min()));
        }
        Ok(())
    }

    /// Largest `|a_i - b_i|` between two sorted spectra; infinite when the
    /// lengths differ.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        if self.values.len() != other.values.len() {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Eigen-decomposition `h = V diag(values) V^dagger`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.values[k])
                .sum()
        })
    }
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_spectrum(h: &ComplexMatrix) -> Result<Spectrum> {
    let (values, _, _) = jacobi(h, false)?;
    Ok(Spectrum::new(values))
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vectors, sweeps) = jacobi(h, true)?;
    let vectors = vectors.expect("vectors requested");
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(HermitianEigen {
        values: sorted_values,
        vectors: sorted_vectors,
        sweeps,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of the
/// pivot `a_pq = |a_pq| e^{i phi}` with `diag(1, e^{-i phi})`, then applies
/// the real symmetric Jacobi rotation that zeroes it.
fn jacobi(
    h: &ComplexMatrix,
    want_vectors: bool,
) -> Result<(Vec<f64>, Option<ComplexMatrix>, usize)> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: (h.rows(), h.rows()),
            found: h.shape(),
        });
    }
    let asymmetry = h.hermitian_asymmetry();
    if asymmetry > HERMITIAN_TOL || !asymmetry.is_finite() {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = h.rows();
    // Symmetrize so the iteration starts exactly Hermitian.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off_diagonal_norm(&a) >= threshold {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let abs_b = b.norm();
                if abs_b == 0.0 {
                    continue;
                }
                let phase = b / abs_b;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * abs_b);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph_c = phase.conj();

                // a <- a G, with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ph_c * s;
                    a[(k, q)] = akp * s + akq * ph_c * c;
                }
                // a <- G^dagger a.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * ph_c * s;
                        v[(k, q)] = vkp * s + vkq * ph_c * c;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re).collect();
    Ok((values, v, sweeps))
}

/// Von Neumann entropy in bits of a density spectrum, `-sum l log2 l`.
/// Eigenvalues in `[-CLIP_TOL, 0)` count as zero.
pub fn entropy_bits(s: &Spectrum) -> Result<f64> {
    s.validate()?;
    let h: f64 = s
        .values()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    let cap = (s.dimension() as f64).log2();
    // `+ 0.0` turns a pure state's `-0.0` into `0.0`.
    Ok(h.clamp(0.0, cap) + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let gd = g.adjoint();
        ComplexMatrix::from_fn(n, n, |i, j| (g[(i, j)] + gd[(i, j)]) * 0.5)
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let a = ComplexMatrix::from_diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::from_diagonal(&[3.0, 4.0]);
        assert_eq!(kron(&a, &b), ComplexMatrix::from_diagonal(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn kron_x_z_entrywise() {
        let x = ComplexMatrix::from_vec(2, 2, std::vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
            .unwrap();
        let z = ComplexMatrix::from_diagonal(&[1.0, -1.0]);
        let xz = kron(&x, &z);
        assert_eq!(xz.shape(), (4, 4));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        assert_eq!(xz[(2 * i + k, 2 * j + l)], x[(i, j)] * z[(k, l)]);
                    }
                }
            }
        }
        let nonzero: Vec<_> = xz.as_slice().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 4);
        assert!(nonzero.iter().all(|z| (z.norm() - 1.0).abs() == 0.0 && z.im == 0.0));
    }

    #[test]
    fn spectrum_of_simple_densities() {
        let s = hermitian_spectrum(&ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert_eq!(s.values(), &[0.25; 4]);
        let s = hermitian_spectrum(&ComplexMatrix::from_diagonal(&[0.7, 0.3])).unwrap();
        assert_eq!(s.values(), &[0.3, 0.7]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c(0.5, 0.0);
        match hermitian_spectrum(&m) {
            Err(Error::NotHermitian { asymmetry }) => assert!((asymmetry - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    /// Characteristic polynomial `det(x I - h)` of a 3x3 Hermitian matrix,
    /// expanded directly from the entries.
    fn charpoly3(h: &ComplexMatrix, x: f64) -> f64 {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| {
            let d = if i == j { c(x, 0.0) } else { c(0.0, 0.0) };
            d - h[(i, j)]
        });
        let det = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
        det.re
    }

    fn charpoly_roots_by_bisection(h: &ComplexMatrix) -> Vec<f64> {
        let bound = (0..3)
            .map(|i| (0..3).map(|j| h[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1.0;
        let steps = 20_000;
        let mut roots = Vec::new();
        let xs: Vec<f64> = (0..=steps)
            .map(|k| -bound + 2.0 * bound * k as f64 / steps as f64)
            .collect();
        for w in xs.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            let (flo, fhi) = (charpoly3(h, lo), charpoly3(h, hi));
            if flo == 0.0 {
                roots.push(lo);
                continue;
            }
            if flo * fhi > 0.0 {
                continue;
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if charpoly3(h, mid) * charpoly3(h, lo) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        roots
    }

    #[test]
    fn random_3x3_matches_characteristic_polynomial_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 20 {
            let h = random_hermitian(3, &mut rng);
            let roots = charpoly_roots_by_bisection(&h);
            if roots.len() != 3 {
                // near-degenerate pair fell inside one scan cell
                continue;
            }
            let s = hermitian_spectrum(&h).unwrap();
            for (a, b) in s.values().iter().zip(&roots) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
            checked += 1;
        }
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 9, 16] {
            let h = random_hermitian(n, &mut rng);
            let e = hermitian_eigen(&h).unwrap();
            assert!(e.reconstruct().max_abs_diff(&h) <= 1e-10);
            let vv = e.vectors.matmul(&e.vectors.adjoint()).unwrap();
            assert!(vv.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn entropy_examples() {
        let pure = Spectrum::new(std::vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(entropy_bits(&pure).unwrap().to_bits(), 0.0f64.to_bits());
        let mixed = Spectrum::new(std::vec![0.25; 4]);
        assert_eq!(entropy_bits(&mixed).unwrap(), 2.0);
        let qcd = Spectrum::new(std::vec![0.49, 0.21, 0.21, 0.09]);
        let direct: f64 = [0.49f64, 0.21, 0.21, 0.09].iter().map(|l| -l * l.ln()).sum::<f64>()
            / core::f64::consts::LN_2;
        let h = entropy_bits(&qcd).unwrap();
        assert!((h - direct).abs() < 1e-14);
        assert!((h - 1.762_581_798_461_385_4).abs() < 1e-13);
    }

    #[test]
    fn entropy_clips_tiny_negatives_and_rejects_large_ones() {
        let s = Spectrum::new(std::vec![1.0 + 5e-13, -5e-13]);
        assert_eq!(entropy_bits(&s).unwrap(), 0.0);
        let s = Spectrum::new(std::vec![1.0 + 1e-9, -1e-9]);
        assert!(matches!(entropy_bits(&s), Err(Error::NegativeEigenvalue(_))));
        let s = Spectrum::new(std::vec![0.5, 0.4]);
        assert!(matches!(entropy_bits(&s), Err(Error::SpectrumNotNormalized { .. })));
    }

    #[test]
    fn multiplicities_expand() {
        let s = Spectrum::from_multiplicities(&[(0.5, 1), (0.25, 2), (0.0, 0)]);
        assert_eq!(s.values(), &[0.25, 0.25, 0.5]);
        assert_eq!(s.dimension(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn trace_and_frobenius_preserved(seed in any::<u64>(), n in 1usize..12) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let h = random_hermitian(n, &mut rng);
                let s = hermitian_spectrum(&h).unwrap();
                let sum: f64 = s.values().iter().sum();
                let sq: f64 = s.values().iter().map(|x| x * x).sum();
                prop_assert!((sum - h.trace().re).abs() <= 1e-10);
                prop_assert!((sq - h.frobenius_norm().powi(2)).abs() <= 1e-9);
            }

            #[test]
            fn entropy_permutation_invariant_and_bounded(
                raw in proptest::collection::vec(0.0f64..1.0, 1..40),
                rot in 0usize..40,
            ) {
                let total: f64 = raw.iter().sum();
                prop_assume!(total > 1e-6);
                let vals: Vec<f64> = raw.iter().map(|x| x / total).collect();
                let mut rotated = vals.clone();
                let k = rot % rotated.len();
                rotated.rotate_left(k);
                rotated.reverse();
                let a = entropy_bits(&Spectrum::new(vals.clone())).unwrap();
                let b = entropy_bits(&Spectrum::new(rotated)).unwrap();
                prop_assert_eq!(a, b);
                prop_assert!(a >= 0.0 && a <= (vals.len() as f64).log2());
            }
        }
    }
}
