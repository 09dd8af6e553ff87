//! The correlated-noise two-use channel
//! `E2(rho) = sum p_{m,n,m',n'} (U_{m,n} x U_{m',n'}) rho (.)^dagger`.
//!
//! The noise tensor mixes an independent part with a correlated part that
//! repeats the shift and either repeats (`nu = 0`) or negates (`nu = 1`) the
//! phase index:
//!
//! `p = (1-mu) q_{mn} q_{m'n'} + mu q_{mn} delta_{m m'} ((1-nu) delta_{n n'} + nu delta_{n', -n mod d})`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_spectrum, ComplexMatrix};
use crate::weyl::{roots_of_unity, PairAction, WeylIndex};

/// Slack allowed on the `eta`, `mu` and `nu` interval endpoints.
const RANGE_SLACK: f64 = 1e-12;
/// Density-input checks on the oracle.
pub const DENSITY_TOL: f64 = 1e-10;
/// Largest `d` the oracle accepts unless overridden (cost grows as `d^8`).
pub const DEFAULT_ORACLE_CAP: usize = 12;

/// Channel family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Quantum depolarizing: every non-identity displacement equally likely.
    Qd,
    /// Quasi-classical depolarizing: weights depend on the shift `m` only.
    Qcd,
}

impl Family {
    /// Valid `eta` interval for dimension `d`.
    pub fn eta_range(self, d: usize) -> (f64, f64) {
        let d = d as f64;
        match self {
            Family::Qd => (-1.0 / (d * d - 1.0), 1.0),
            Family::Qcd => (-1.0 / (d - 1.0), 1.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Qd => "qd",
            Family::Qcd => "qcd",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Qd => "QD",
            Family::Qcd => "QCD",
        })
    }
}

impl FromStr for Family {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("qd") {
            Ok(Family::Qd)
        } else if s.eq_ignore_ascii_case("qcd") {
            Ok(Family::Qcd)
        } else {
            Err("family must be `qd` or `qcd`")
        }
    }
}

/// `(p, q)`: weight of the identity-class displacements and of the others.
pub fn family_params(family: Family, d: usize, eta: f64) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let (lo, hi) = family.eta_range(d);
    if !(eta >= lo - RANGE_SLACK && eta <= hi + RANGE_SLACK) {
        return Err(Error::EtaOutOfRange {
            family,
            eta,
            lo,
            hi,
        });
    }
    let df = d as f64;
    let (p, q) = match family {
        Family::Qd => {
            let p = (1.0 + (df * df - 1.0) * eta) / (df * df);
            (p, (1.0 - p) / (df * df - 1.0))
        }
        Family::Qcd => {
            let p = (1.0 + (df - 1.0) * eta) / (df * df);
            (p, (1.0 - df * p) / (df * (df - 1.0)))
        }
    };
    Ok((p.clamp(0.0, 1.0), q.clamp(0.0, 1.0)))
}

/// Inverse of [`family_params`]: `eta` from the identity weight `p`.
pub fn eta_from_p(family: Family, d: usize, p: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let df = d as f64;
    let (eta, p_max) = match family {
        Family::Qd => (p - (1.0 - p) / (df * df - 1.0), 1.0),
        Family::Qcd => (df * (p - (1.0 - df * p) / (df * (df - 1.0))), 1.0 / df),
    };
    if !(p >= -RANGE_SLACK && p <= p_max + RANGE_SLACK) {
        return Err(Error::ParameterOutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: p_max,
        });
    }
    Ok(eta)
}

/// Channel family, dimension and noise parameters. `eta` is canonical.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    pub family: Family,
    pub d: usize,
    pub eta: f64,
    pub mu: f64,
    pub nu: f64,
}

fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&value) {
        return Err(Error::ParameterOutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

impl ChannelSpec {
    pub fn new(family: Family, d: usize, eta: f64, mu: f64, nu: f64) -> Result<Self> {
        family_params(family, d, eta)?;
        Ok(Self {
            family,
            d,
            eta,
            mu: check_unit("mu", mu)?,
            nu: check_unit("nu", nu)?,
        })
    }

    /// Same channel parameterized by `p` instead of `eta`.
    pub fn from_p(family: Family, d: usize, p: f64, mu: f64, nu: f64) -> Result<Self> {
        Self::new(family, d, eta_from_p(family, d, p)?, mu, nu)
    }

    pub fn with_mu(self, mu: f64) -> Result<Self> {
        Ok(Self {
            mu: check_unit("mu", mu)?,
            ..self
        })
    }

    pub fn with_nu(self, nu: f64) -> Result<Self> {
        Ok(Self {
            nu: check_unit("nu", nu)?,
            ..self
        })
    }

    pub fn params(&self) -> (f64, f64) {
        family_params(self.family, self.d, self.eta).expect("validated at construction")
    }

    pub fn dim(&self) -> usize {
        self.d * self.d
    }
}

/// Dense `p_{m,n,m',n'}` tensor plus the single-use marginals `q_{m,n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseTable {
    d: usize,
    probs: Vec<f64>,
    marginals: Vec<f64>,
}

impl NoiseTable {
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, a: WeylIndex, b: WeylIndex) -> f64 {
        let d = self.d;
        self.probs[((a.m * d + a.n) * d + b.m) * d + b.n]
    }

    /// `q_{m,n}`.
    pub fn marginal(&self, w: WeylIndex) -> f64 {
        self.marginals[w.m * self.d + w.n]
    }

    /// All `d^4` probabilities, index `((m d + n) d + m') d + n'`.
    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    /// Nonzero entries in lexicographic `(m, n, m', n')` order.
    pub fn support(&self) -> impl Iterator<Item = (WeylIndex, WeylIndex, f64)> + '_ {
        let d = self.d;
        self.probs.iter().enumerate().filter(|(_, &p)| p != 0.0).map(move |(k, &p)| {
            let b_n = k % d;
            let b_m = (k / d) % d;
            let a_n = (k / (d * d)) % d;
            let a_m = k / (d * d * d);
            (WeylIndex::new(a_m, a_n), WeylIndex::new(b_m, b_n), p)
        })
    }
}

/// Single-use weight `q_{m,n}` of a family.
pub fn marginal_weight(family: Family, p: f64, q: f64, w: WeylIndex) -> f64 {
    match family {
        Family::Qd if w.m == 0 && w.n == 0 => p,
        Family::Qcd if w.m == 0 => p,
        _ => q,
    }
}

pub fn noise_table(spec: &ChannelSpec) -> NoiseTable {
    let d = spec.d;
    let (p, q) = spec.params();
    let (mu, nu) = (spec.mu, spec.nu);
    let marginals: Vec<f64> = WeylIndex::all(d)
        .map(|w| marginal_weight(spec.family, p, q, w))
        .collect();
    let mut probs = vec![0.0; d * d * d * d];
    for a in WeylIndex::all(d) {
        let qa = marginals[a.m * d + a.n];
        for b in WeylIndex::all(d) {
            let qb = marginals[b.m * d + b.n];
            let mut w = (1.0 - mu) * qa * qb;
            if a.m == b.m {
                let same = if a.n == b.n { 1.0 - nu } else { 0.0 };
                let opposite = if b.n == (d - a.n) % d { nu } else { 0.0 };
                w += mu * qa * (same + opposite);
            }
            probs[((a.m * d + a.n) * d + b.m) * d + b.n] = w;
        }
    }
    NoiseTable {
        d,
        probs,
        marginals,
    }
}

fn check_square(rho: &ComplexMatrix, d: usize) -> Result<()> {
    let dim = d * d;
    if rho.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            expected: (dim, dim),
            found: rho.shape(),
        });
    }
    Ok(())
}

/// Checks that `rho` is a `d^2 x d^2` density matrix: Hermitian, unit trace,
/// eigenvalues `>= -DENSITY_TOL`.
pub fn check_density(rho: &ComplexMatrix, d: usize) -> Result<()> {
    check_square(rho, d)?;
    let spectrum = hermitian_spectrum(rho)?;
    let trace = rho.trace().re;
    let min_eigenvalue = spectrum.min();
    if (trace - 1.0).abs() > DENSITY_TOL || min_eigenvalue < -DENSITY_TOL {
        return Err(Error::NotDensity {
            trace,
            min_eigenvalue,
        });
    }
    Ok(())
}

/// Brute-force Kraus sum of the two-use channel on a density matrix.
pub fn apply_two_use(spec: &ChannelSpec, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_density(rho, spec.d)?;
    Ok(apply_kraus_sum(&noise_table(spec), rho))
}

/// Kraus sum without input validation. Terms are accumulated in
/// lexicographic `(m, n, m', n')` order; zero-weight terms are skipped.
pub fn apply_kraus_sum(table: &NoiseTable, rho: &ComplexMatrix) -> ComplexMatrix {
    let d = table.d;
    let roots = roots_of_unity(d);
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for (a, b, p) in table.support() {
        PairAction::new(d, &roots, a, b).accumulate(rho, p, &mut out);
    }
    out
}

/// Partial Kraus sum over the terms whose first shift index equals `m`, in
/// the same order as [`apply_kraus_sum`]. Summing the blocks for
/// `m = 0..d` in order reproduces the full channel.
pub fn apply_kraus_block(table: &NoiseTable, rho: &ComplexMatrix, m: usize) -> ComplexMatrix {
    let d = table.d;
    let roots = roots_of_unity(d);
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for (a, b, p) in table.support().filter(|(a, _, _)| a.m == m) {
        PairAction::new(d, &roots, a, b).accumulate(rho, p, &mut out);
    }
    out
}

/// Phase averaging `F(rho) = (1/d) sum_n (U_{0,n} x U_{0,n}) rho (.)^dagger`.
pub fn phase_average(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_square(rho, d)?;
    let roots = roots_of_unity(d);
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    let w = 1.0 / d as f64;
    for n in 0..d {
        let u = WeylIndex::new(0, n);
        PairAction::new(d, &roots, u, u).accumulate(rho, w, &mut out);
    }
    Ok(out)
}

/// Equal-weight average over the full displacement orbit,
/// `(1/d^4) sum_{a,b} (U_a x U_b) rho (.)^dagger`.
pub fn weyl_orbit_average(rho: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_square(rho, d)?;
    let roots = roots_of_unity(d);
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    let w = 1.0 / (d as f64).powi(4);
    for a in WeylIndex::all(d) {
        for b in WeylIndex::all(d) {
            PairAction::new(d, &roots, a, b).accumulate(rho, w, &mut out);
        }
    }
    Ok(out)
}
