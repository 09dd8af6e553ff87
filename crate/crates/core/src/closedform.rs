//! Closed-form channel outputs for Schmidt-diagonal inputs
//! `|psi> = sum_j c_j |jj>`, `c_j = alpha_j e^{i phi_j}`, and the output
//! spectra for product and maximally entangled inputs.
//!
//! Both families decompose the output into an independent-noise factor `A`
//! and correlated factors built from the shifted coherences
//!
//! `K_w[S] = sum_m w_m sum_{(i,j) in S} c_i c_j^* |i+m,i+m><j+m,j+m|`.
//!
//! QD:  `E2 = (1-mu) A + mu [(1-nu) B + nu C + D]` with
//! `A = d^2 q^2 I + (p-q)^2 |psi><psi| + d q (p-q) sum_j alpha_j^2 (I x |j><j| + |j><j| x I)`,
//! `B = d q K_1[2(i-j) = 0 mod d]`, `C = d q K_1[all]`, `D = (p-q) |psi><psi|`.
//!
//! QCD: `E2 = (1-mu) d^2 A + mu d [(1-nu) B + nu C]` with
//! `A = q^2 I + (p-q)^2 sum_j alpha_j^2 |jj><jj| + q (p-q) sum_j alpha_j^2 (I x |j><j| + |j><j| x I)`,
//! `B = K_{q_m}[2(i-j) = 0 mod d]`, `C = K_{q_m}[all]` where `q_0 = p`, `q_m = q`.
//!
//! The constraint `2(i-j) = 0 mod d` keeps only `i = j` for odd `d` and adds
//! the half-period coherence `i - j = d/2` for even `d`; this is the whole
//! parity effect.
//!
//! Spectrum multiplicities (each list has exactly `d^2` entries):
//!
//! | input, family, parity | value | count |
//! |---|---|---|
//! | product, both | `lambda_00` | 1 |
//! | | `lambda_m0 = lambda_0n` | `2(d-1)` |
//! | | `lambda_mm`, `m > 0` | `d-1` |
//! | | `lambda_mn`, `m != n > 0` | `(d-1)(d-2)` |
//! | entangled, QD even | top | 1 |
//! | | base `+ 2 mu (1-nu) d q` | `d/2 - 1` |
//! | | base | `d^2 - d/2` |
//! | entangled, QD odd | top | 1 |
//! | | base `+ mu (1-nu) d q` | `d-1` |
//! | | base | `d^2 - d` |
//! | entangled, QCD even | top | 1 |
//! | | in-sector `+ 2 mu (1-nu)/d` | `d/2 - 1` |
//! | | in-sector | `d/2` |
//! | | off-sector | `d^2 - d` |
//! | entangled, QCD odd | top | 1 |
//! | | in-sector `+ mu (1-nu)/d` | `d-1` |
//! | | off-sector | `d^2 - d` |

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::{ChannelSpec, Family};
use crate::error::{Error, Result};
use crate::linalg::{entropy_bits, ComplexMatrix, Spectrum};
use crate::states::{build_state, SchmidtSpec};

/// Parity of the qudit dimension; selects the `B` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(d: usize) -> Self {
        if d.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn check(self, d: usize) -> Result<()> {
        if Parity::of(d) != self {
            return Err(Error::ParityMismatch {
                d,
                expected_even: self == Parity::Even,
            });
        }
        Ok(())
    }
}

/// Structured output state `E2(|psi><psi|)` assembled from its factors.
#[derive(Clone, Debug)]
pub struct ClosedFormOutput {
    pub matrix: ComplexMatrix,
    pub family: Family,
    pub parity: Parity,
}

/// Which form of each clause to assemble. `CORRECTED` is the only one that
/// agrees with the Kraus sum; the others reproduce known misprints so the
/// errata ledger can measure them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct FactorForms {
    /// QD `B`, even `d`: half-period coherence weighted `d` instead of `d q`.
    pub qd_b_bare_d: bool,
    /// QD `C`: phases `e^{i(phi_i + phi_j)}` instead of `e^{i(phi_i - phi_j)}`.
    pub qd_c_phase_sum: bool,
    /// QCD `A`: last two terms multiplied instead of added.
    pub qcd_a_product: bool,
}

impl FactorForms {
    pub const CORRECTED: FactorForms = FactorForms {
        qd_b_bare_d: false,
        qd_c_phase_sum: false,
        qcd_a_product: false,
    };
}

#[inline]
fn pair_index(d: usize, a: usize, b: usize) -> usize {
    a * d + b
}

/// `sum_m w(m) sum_{(i,j) allowed} coeff(i,j) |i+m,i+m><j+m,j+m|`.
fn shifted_coherence(
    d: usize,
    coeff: impl Fn(usize, usize) -> Complex64,
    allowed: impl Fn(usize, usize) -> bool,
    weight: impl Fn(usize) -> f64,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            if !allowed(i, j) {
                continue;
            }
            let c = coeff(i, j);
            for m in 0..d {
                let w = weight(m);
                if w == 0.0 {
                    continue;
                }
                let r = (i + m) % d;
                let s = (j + m) % d;
                out[(pair_index(d, r, r), pair_index(d, s, s))] += c * w;
            }
        }
    }
    out
}

/// `sum_j alpha_j^2 (I x |j><j| + |j><j| x I)`, diagonal.
fn marginal_sum(d: usize, alpha: &[f64]) -> ComplexMatrix {
    let mut diag = alloc::vec![0.0; d * d];
    for (j, a) in alpha.iter().enumerate() {
        let w = a * a;
        for k in 0..d {
            diag[pair_index(d, k, j)] += w;
            diag[pair_index(d, j, k)] += w;
        }
    }
    ComplexMatrix::from_diagonal(&diag)
}

fn half_period_allowed(d: usize, parity: Parity) -> impl Fn(usize, usize) -> bool {
    move |i, j| i == j || (parity == Parity::Even && (i + d / 2) % d == j)
}

pub(crate) fn assemble(
    spec: &ChannelSpec,
    s: &SchmidtSpec,
    forms: FactorForms,
    parity: Parity,
) -> Result<ClosedFormOutput> {
    let d = spec.d;
    if s.d() != d {
        return Err(Error::DimensionMismatch {
            expected: (d, 1),
            found: (s.d(), 1),
        });
    }
    if s.offset() != 0 {
        return Err(Error::NonzeroOffset(s.offset()));
    }
    let (p, q) = spec.params();
    let (mu, nu) = (spec.mu, spec.nu);
    let dim = d * d;
    let df = d as f64;
    let c = s.coefficients();
    let alpha = s.amplitudes();
    let psi = ComplexMatrix::outer(&build_state(s));
    let coherent = |i: usize, j: usize| c[i] * c[j].conj();
    let mut out = ComplexMatrix::zeros(dim, dim);

    match spec.family {
        Family::Qd => {
            let mut a = ComplexMatrix::identity(dim).scale(df * df * q * q);
            a.add_scaled((p - q) * (p - q), &psi)?;
            a.add_scaled(df * q * (p - q), &marginal_sum(d, alpha))?;

            let b_diag = shifted_coherence(d, coherent, |i, j| i == j, |_| df * q);
            let mut b = b_diag;
            if parity == Parity::Even {
                let w = if forms.qd_b_bare_d { df } else { df * q };
                let half = shifted_coherence(d, coherent, |i, j| i != j && (i + d / 2) % d == j, |_| w);
                b.add_scaled(1.0, &half)?;
            }

            let c_factor = if forms.qd_c_phase_sum {
                shifted_coherence(d, |i, j| c[i] * c[j], |_, _| true, |_| df * q)
            } else {
                shifted_coherence(d, coherent, |_, _| true, |_| df * q)
            };

            out.add_scaled(1.0 - mu, &a)?;
            out.add_scaled(mu * (1.0 - nu), &b)?;
            out.add_scaled(mu * nu, &c_factor)?;
            out.add_scaled(mu * (p - q), &psi)?;
        }
        Family::Qcd => {
            let dephased = ComplexMatrix::from_diagonal(
                &(0..dim)
                    .map(|k| {
                        let (x, y) = (k / d, k % d);
                        if x == y {
                            alpha[x] * alpha[x]
                        } else {
                            0.0
                        }
                    })
                    .collect::<Vec<_>>(),
            );
            let mut a = ComplexMatrix::identity(dim).scale(q * q);
            let second = dephased.scale((p - q) * (p - q));
            let third = marginal_sum(d, alpha).scale(q * (p - q));
            if forms.qcd_a_product {
                a.add_scaled(1.0, &second.matmul(&third)?)?;
            } else {
                a.add_scaled(1.0, &second)?;
                a.add_scaled(1.0, &third)?;
            }

            let shift_weight = |m: usize| if m == 0 { p } else { q };
            let b = shifted_coherence(d, coherent, half_period_allowed(d, parity), shift_weight);
            let c_factor = shifted_coherence(d, coherent, |_, _| true, shift_weight);

            out.add_scaled((1.0 - mu) * df * df, &a)?;
            out.add_scaled(mu * df * (1.0 - nu), &b)?;
            out.add_scaled(mu * df * nu, &c_factor)?;
        }
    }
    Ok(ClosedFormOutput {
        matrix: out,
        family: spec.family,
        parity,
    })
}

/// `E2(|psi><psi|)` for a Schmidt state with offset 0, built from the
/// `A, B, C(, D)` factors with the parity-appropriate `B`.
pub fn structured_output(spec: &ChannelSpec, s: &SchmidtSpec) -> Result<ClosedFormOutput> {
    assemble(spec, s, FactorForms::CORRECTED, Parity::of(spec.d))
}

/// Output spectrum for the product input `|00>`. Does not depend on `nu`.
pub fn product_spectrum(spec: &ChannelSpec) -> Spectrum {
    let d = spec.d;
    let df = d as f64;
    let (p, q) = spec.params();
    let mu = spec.mu;
    let (top, edge) = match spec.family {
        Family::Qd => {
            let s = df * q + p - q;
            ((1.0 - mu) * s * s + mu * s, (1.0 - mu) * df * q * s)
        }
        Family::Qcd => (
            (1.0 - mu) * df * df * p * p + mu * df * p,
            (1.0 - mu) * df * df * p * q,
        ),
    };
    let bulk = (1.0 - mu) * df * df * q * q;
    Spectrum::from_multiplicities(&[
        (top, 1),
        (edge, 2 * (d - 1)),
        (bulk + mu * df * q, d - 1),
        (bulk, (d - 1) * (d - 2)),
    ])
}

/// Output spectrum for the maximally entangled input, dispatched on the
/// parity of `d`.
pub fn entangled_spectrum(spec: &ChannelSpec) -> Spectrum {
    entangled_branch(spec, Parity::of(spec.d))
}

/// As [`entangled_spectrum`] but with the parity branch named explicitly;
/// a branch that does not match `d` is rejected.
pub fn entangled_spectrum_with_parity(spec: &ChannelSpec, parity: Parity) -> Result<Spectrum> {
    parity.check(spec.d)?;
    Ok(entangled_branch(spec, parity))
}

fn entangled_branch(spec: &ChannelSpec, parity: Parity) -> Spectrum {
    let d = spec.d;
    let df = d as f64;
    let (p, q) = spec.params();
    let (mu, nu) = (spec.mu, spec.nu);
    match (spec.family, parity) {
        (Family::Qd, Parity::Even) => {
            let base = (1.0 - mu) * q * (1.0 + p - q);
            let top = (1.0 - mu) * (p * (p - q) + q)
                + mu * (2.0 * (1.0 - nu) * df * q + nu * df * df * q + p - q);
            Spectrum::from_multiplicities(&[
                (top, 1),
                (base + 2.0 * mu * (1.0 - nu) * df * q, d / 2 - 1),
                (base, d * d - d / 2),
            ])
        }
        (Family::Qd, Parity::Odd) => {
            let base = (1.0 - mu) * q * (1.0 + p - q);
            let top = (1.0 - mu) * (p * (p - q) + q) + mu * ((1.0 - nu) * (df * q + p - q) + nu);
            Spectrum::from_multiplicities(&[
                (top, 1),
                (base + mu * (1.0 - nu) * df * q, d - 1),
                (base, d * d - d),
            ])
        }
        (Family::Qcd, Parity::Even) => {
            let sector = (1.0 - mu) * df * (q * q * (df - 1.0) + p * p);
            let off = (1.0 - mu) * q * (2.0 - df * df * q);
            Spectrum::from_multiplicities(&[
                (sector + mu * ((1.0 - nu) * 2.0 / df + nu), 1),
                (sector + mu * (1.0 - nu) * 2.0 / df, d / 2 - 1),
                (sector, d / 2),
                (off, d * d - d),
            ])
        }
        (Family::Qcd, Parity::Odd) => {
            let sector = (1.0 - mu) * df * (q * q * (df - 1.0) + p * p);
            let off = (1.0 - mu) * q * (2.0 - df * df * q);
            Spectrum::from_multiplicities(&[
                (sector + mu * ((1.0 - nu) / df + nu), 1),
                (sector + mu * (1.0 - nu) / df, d - 1),
                (off, d * d - d),
            ])
        }
    }
}

/// `I = log2(d^2) - S` in bits for an output spectrum of a `d`-dimensional
/// pair channel.
pub fn mutual_information(d: usize, s: &Spectrum) -> Result<f64> {
    if s.dimension() != d * d {
        return Err(Error::DimensionMismatch {
            expected: (d * d, 1),
            found: (s.dimension(), 1),
        });
    }
    let cap = 2.0 * (d as f64).log2();
    Ok((cap - entropy_bits(s)?).clamp(0.0, cap))
}
