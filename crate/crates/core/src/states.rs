//! Input states: Schmidt-diagonal pure states and the one-parameter ansatz.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const NORM_TOL: f64 = 1e-12;

/// Pure state `sum_j alpha_j e^{i phi_j} |j>|j+offset mod d>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpec {
    d: usize,
    amplitudes: Vec<f64>,
    phases: Vec<f64>,
    offset: usize,
}

impl SchmidtSpec {
    pub fn new(amplitudes: Vec<f64>, phases: Vec<f64>, offset: usize) -> Result<Self> {
        let d = amplitudes.len();
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if phases.len() != d {
            return Err(Error::DimensionMismatch {
                expected: (d, 1),
                found: (phases.len(), 1),
            });
        }
        if offset >= d {
            return Err(Error::ParameterOutOfRange {
                name: "offset",
                value: offset as f64,
                lo: 0.0,
                hi: (d - 1) as f64,
            });
        }
        if let Some(&a) = amplitudes.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(Error::ParameterOutOfRange {
                name: "amplitude",
                value: a,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::ParameterOutOfRange {
                name: "phase",
                value: f64::NAN,
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm: norm_sq.sqrt(),
            });
        }
        Ok(Self {
            d,
            amplitudes,
            phases,
            offset,
        })
    }

    /// `|00>`: `alpha_j = delta_{j0}`, zero phases.
    pub fn product(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let mut a = vec![0.0; d];
        a[0] = 1.0;
        Self::new(a, vec![0.0; d], 0)
    }

    /// `(1/sqrt d) sum_j |jj>`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let a = 1.0 / (d as f64).sqrt();
        Self::new(vec![a; d], vec![0.0; d], 0)
    }

    /// `cos(alpha)|00> + sin(alpha)/sqrt(d-1) sum_{j>0} |jj>`.
    pub fn ansatz(d: usize, alpha: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if !alpha.is_finite() {
            return Err(Error::ParameterOutOfRange {
                name: "alpha",
                value: alpha,
                lo: 0.0,
                hi: core::f64::consts::FRAC_PI_2,
            });
        }
        let tail = alpha.sin() / ((d - 1) as f64).sqrt();
        let mut amplitudes = vec![tail.abs(); d];
        let mut phases = vec![if tail < 0.0 { core::f64::consts::PI } else { 0.0 }; d];
        amplitudes[0] = alpha.cos().abs();
        phases[0] = if alpha.cos() < 0.0 {
            core::f64::consts::PI
        } else {
            0.0
        };
        // Normalization holds analytically; renormalize the rounding away.
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes, phases, 0)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Complex Schmidt coefficients `alpha_j e^{i phi_j}`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.amplitudes
            .iter()
            .zip(&self.phases)
            .map(|(&a, &p)| Complex64::from_polar(a, p))
            .collect()
    }
}

/// State vector (`d^2 x 1`) of a Schmidt spec.
pub fn build_state(s: &SchmidtSpec) -> ComplexMatrix {
    let d = s.d;
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for (j, c) in s.coefficients().into_iter().enumerate() {
        v[j * d + (j + s.offset) % d] = c;
    }
    ComplexMatrix::column(v)
}

/// Ansatz state vector for angle `alpha`; `alpha = 0` is `|00>` and
/// `alpha = arccos(1/sqrt d)` is maximally entangled.
pub fn ansatz_state(d: usize, alpha: f64) -> Result<ComplexMatrix> {
    Ok(build_state(&SchmidtSpec::ansatz(d, alpha)?))
}

/// Angle of the ansatz that yields the maximally entangled state.
pub fn entangled_alpha(d: usize) -> f64 {
    (1.0 / (d as f64).sqrt()).acos()
}

/// `|v><v|` for a unit column vector.
pub fn density(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if v.cols() != 1 {
        return Err(Error::DimensionMismatch {
            expected: (v.rows(), 1),
            found: v.shape(),
        });
    }
    let norm = v.vector_norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(ComplexMatrix::outer(v))
}
