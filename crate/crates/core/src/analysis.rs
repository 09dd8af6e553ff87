//! Mutual-information curves over the memory parameter, crossover search,
//! dimension and ansatz sweeps, and closed-form-versus-oracle validation.
//!
//! Everything here is sequential and deterministic; the companion crate runs
//! the same per-point functions in parallel and gathers results by index.

use alloc::vec::Vec;

use crate::channel::{apply_two_use, ChannelSpec, Family, DEFAULT_ORACLE_CAP};
use crate::closedform::{entangled_spectrum, mutual_information, product_spectrum, structured_output};
use crate::errata::{self, ErratumRecord};
use crate::error::{Error, Result};
use crate::linalg::{entropy_bits, hermitian_spectrum, Spectrum};
use crate::states::{build_state, density, entangled_alpha, SchmidtSpec};

/// Number of grid points scanned for sign changes of `Delta I`.
pub const CROSSOVER_SCAN_POINTS: usize = 1001;
/// `|Delta I|` at or below this is treated as an exact tie.
pub const DELTA_ZERO_BAND: f64 = 1e-12;
/// Bisection width used when none is given.
pub const DEFAULT_CROSSOVER_TOL: f64 = 1e-8;
/// Deviation allowed between closed forms and the oracle.
pub const VALIDATION_TOL: f64 = 1e-10;

/// How a point is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Closed-form spectra, or the structured output diagonalized.
    Closed,
    /// Brute-force Kraus sum, diagonalized.
    Oracle,
    /// Closed form when one exists, oracle otherwise.
    Auto,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Oracle => "oracle",
            Method::Auto => "auto",
        }
    }
}

/// Input state selector.
#[derive(Clone, Debug, PartialEq)]
pub enum InputKind {
    Product,
    Entangled,
    /// One-parameter ansatz at angle `alpha`.
    Ansatz(f64),
    Schmidt(SchmidtSpec),
}

impl InputKind {
    pub fn schmidt(&self, d: usize) -> Result<SchmidtSpec> {
        let s = match self {
            InputKind::Product => SchmidtSpec::product(d)?,
            InputKind::Entangled => SchmidtSpec::maximally_entangled(d)?,
            InputKind::Ansatz(alpha) => SchmidtSpec::ansatz(d, *alpha)?,
            InputKind::Schmidt(s) => s.clone(),
        };
        if s.d() != d {
            return Err(Error::DimensionMismatch {
                expected: (d, 1),
                found: (s.d(), 1),
            });
        }
        Ok(s)
    }

    fn needs_oracle(&self) -> bool {
        matches!(self, InputKind::Schmidt(s) if s.offset() != 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalOptions {
    pub method: Method,
    /// Largest `d` the oracle accepts.
    pub oracle_cap: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

impl EvalOptions {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    /// Method actually used for `input`: `Auto` resolves to `Closed` unless
    /// the input has no closed form.
    pub fn resolve(&self, input: &InputKind) -> Method {
        match self.method {
            Method::Auto if input.needs_oracle() => Method::Oracle,
            Method::Auto => Method::Closed,
            m => m,
        }
    }
}

/// Mutual information of one channel and input.
#[derive(Clone, Debug, PartialEq)]
pub struct MiPoint {
    pub mutual_information: f64,
    pub entropy: f64,
    pub spectrum: Spectrum,
    /// `Closed` or `Oracle`, never `Auto`.
    pub method: Method,
}

/// Output spectrum of `spec` on `input` by the given method (not `Auto`).
pub fn output_spectrum(spec: &ChannelSpec, input: &InputKind, method: Method, oracle_cap: usize) -> Result<Spectrum> {
    match method {
        Method::Oracle => {
            if spec.d > oracle_cap {
                return Err(Error::OracleCapExceeded {
                    d: spec.d,
                    cap: oracle_cap,
                });
            }
            let rho = density(&build_state(&input.schmidt(spec.d)?))?;
            hermitian_spectrum(&apply_two_use(spec, &rho)?)
        }
        _ => match input {
            InputKind::Product => Ok(product_spectrum(spec)),
            InputKind::Entangled => Ok(entangled_spectrum(spec)),
            other => hermitian_spectrum(&structured_output(spec, &other.schmidt(spec.d)?)?.matrix),
        },
    }
}

pub fn evaluate(spec: &ChannelSpec, input: &InputKind, opts: EvalOptions) -> Result<MiPoint> {
    let method = opts.resolve(input);
    let spectrum = output_spectrum(spec, input, method, opts.oracle_cap)?;
    let entropy = entropy_bits(&spectrum)?;
    let mutual_information = mutual_information(spec.d, &spectrum)?;
    Ok(MiPoint {
        mutual_information,
        entropy,
        spectrum,
        method,
    })
}

/// `n` uniformly spaced points on `[0, 1]` with exact endpoints.
pub fn mu_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidGrid(n));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { 1.0 } else { i as f64 / last }).collect())
}

/// Mutual information as a function of `mu` for fixed family, `d`, `eta`, `nu`.
#[derive(Clone, Debug, PartialEq)]
pub struct MICurve {
    pub family: Family,
    pub d: usize,
    pub eta: f64,
    pub nu: f64,
    pub input: InputKind,
    pub method: Method,
    /// `(mu, I)` pairs with strictly increasing `mu`.
    pub points: Vec<(f64, f64)>,
}

impl MICurve {
    pub fn mu_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn mi_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }
}

/// Assembles a curve from independently evaluated grid points.
pub fn curve_from_points(base: &ChannelSpec, input: InputKind, method: Method, points: Vec<(f64, f64)>) -> MICurve {
    MICurve {
        family: base.family,
        d: base.d,
        eta: base.eta,
        nu: base.nu,
        input,
        method,
        points,
    }
}

/// Mutual information of a single grid point of a curve.
pub fn curve_point(base: &ChannelSpec, input: &InputKind, mu: f64, opts: EvalOptions) -> Result<f64> {
    Ok(evaluate(&base.with_mu(mu)?, input, opts)?.mutual_information)
}

/// `I(mu)` on a uniform grid of `grid_size` points. `base.mu` is ignored.
pub fn mi_vs_mu(base: &ChannelSpec, input: &InputKind, grid_size: usize, opts: EvalOptions) -> Result<MICurve> {
    let grid = mu_grid(grid_size)?;
    let points = grid
        .into_iter()
        .map(|mu| Ok((mu, curve_point(base, input, mu, opts)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(curve_from_points(base, input.clone(), opts.resolve(input), points))
}

/// `Delta I(mu) = I_entangled - I_product` from the closed forms.
pub fn delta_mi(base: &ChannelSpec, mu: f64) -> Result<f64> {
    let spec = base.with_mu(mu)?;
    let ent = mutual_information(spec.d, &entangled_spectrum(&spec))?;
    let prod = mutual_information(spec.d, &product_spectrum(&spec))?;
    Ok(ent - prod)
}

fn band_sign(v: f64) -> i8 {
    if v > DELTA_ZERO_BAND {
        1
    } else if v < -DELTA_ZERO_BAND {
        -1
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossoverStatus {
    /// At least one sign change of `Delta I` in `[0, 1]`.
    Crossing,
    /// `Delta I <= 0` on the whole grid: product inputs never lose.
    None,
    /// `Delta I >= 0` on the whole grid and positive somewhere.
    EntangledDominates,
}

impl CrossoverStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CrossoverStatus::Crossing => "crossing",
            CrossoverStatus::None => "none",
            CrossoverStatus::EntangledDominates => "entangled-dominates",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossoverRoot {
    pub mu_c: f64,
    pub mu_lo: f64,
    pub mu_hi: f64,
    /// `+1` when entanglement starts winning at this root, `-1` otherwise.
    pub direction: i8,
}

/// Crossover search result for one channel (all of `family, d, eta, nu`).
#[derive(Clone, Debug, PartialEq)]
pub struct CrossoverReport {
    pub family: Family,
    pub d: usize,
    pub eta: f64,
    pub nu: f64,
    pub status: CrossoverStatus,
    /// One entry per sign change, in increasing `mu`.
    pub roots: Vec<CrossoverRoot>,
    pub sign_changes: usize,
    /// Requested bracket width.
    pub tolerance: f64,
    /// Largest bracket width actually reached.
    pub achieved_width: f64,
    pub delta_at_zero: f64,
    pub delta_at_one: f64,
}

impl CrossoverReport {
    /// First crossover point, if any.
    pub fn mu_c(&self) -> Option<f64> {
        self.roots.first().map(|r| r.mu_c)
    }
}

/// Scans `Delta I` on [`CROSSOVER_SCAN_POINTS`] points of `[0, 1]` and
/// bisects each sign change down to width `tol`.
pub fn crossover_mu(base: &ChannelSpec, tol: f64) -> Result<CrossoverReport> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    let grid = mu_grid(CROSSOVER_SCAN_POINTS)?;
    let deltas = grid.iter().map(|&mu| delta_mi(base, mu)).collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    let mut last: Option<(usize, i8)> = None;
    let mut achieved_width = 0.0f64;
    for (i, &v) in deltas.iter().enumerate() {
        let s = band_sign(v);
        if s == 0 {
            continue;
        }
        if let Some((j, prev)) = last {
            if prev != s {
                let root = bisect(base, grid[j], grid[i], prev, tol)?;
                achieved_width = achieved_width.max(root.mu_hi - root.mu_lo);
                roots.push(root);
            }
        }
        last = Some((i, s));
    }

    let status = if !roots.is_empty() {
        CrossoverStatus::Crossing
    } else if deltas.iter().any(|&v| band_sign(v) > 0) {
        CrossoverStatus::EntangledDominates
    } else {
        CrossoverStatus::None
    };
    Ok(CrossoverReport {
        family: base.family,
        d: base.d,
        eta: base.eta,
        nu: base.nu,
        status,
        sign_changes: roots.len(),
        roots,
        tolerance: tol,
        achieved_width,
        delta_at_zero: deltas[0],
        delta_at_one: deltas[deltas.len() - 1],
    })
}

fn bisect(base: &ChannelSpec, mut lo: f64, mut hi: f64, lo_sign: i8, tol: f64) -> Result<CrossoverRoot> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match band_sign(delta_mi(base, mid)?) {
            0 => {
                lo = mid;
                hi = mid;
            }
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(CrossoverRoot {
        mu_c: 0.5 * (lo + hi),
        mu_lo: lo,
        mu_hi: hi,
        direction: -lo_sign,
    })
}

/// One crossover report per `(d, nu)`, `d`-major.
pub fn crossover_vs_dimension(
    family: Family,
    d_list: &[usize],
    eta: f64,
    nu_list: &[f64],
    tol: f64,
) -> Result<Vec<CrossoverReport>> {
    dimension_grid(family, d_list, eta, nu_list)?
        .iter()
        .map(|spec| crossover_mu(spec, tol))
        .collect()
}

/// Channel specs of a dimension/phase-correlation table, `d`-major.
pub fn dimension_grid(family: Family, d_list: &[usize], eta: f64, nu_list: &[f64]) -> Result<Vec<ChannelSpec>> {
    if d_list.is_empty() {
        return Err(Error::EmptyList("dimension list"));
    }
    if nu_list.is_empty() {
        return Err(Error::EmptyList("nu list"));
    }
    let mut specs = Vec::with_capacity(d_list.len() * nu_list.len());
    for &d in d_list {
        for &nu in nu_list {
            specs.push(ChannelSpec::new(family, d, eta, 0.0, nu)?);
        }
    }
    Ok(specs)
}

/// Ansatz angles must lie in `[0, pi/2]`.
pub fn check_alpha(alpha: f64) -> Result<()> {
    let hi = core::f64::consts::FRAC_PI_2;
    if !(alpha >= -1e-12 && alpha <= hi + 1e-12) {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha,
            lo: 0.0,
            hi,
        });
    }
    Ok(())
}

/// One ansatz curve per `alpha`, each point from the structured output
/// diagonalized numerically.
pub fn alpha_sweep(
    family: Family,
    d: usize,
    eta: f64,
    nu: f64,
    alphas: &[f64],
    grid_size: usize,
) -> Result<Vec<MICurve>> {
    if alphas.is_empty() {
        return Err(Error::EmptyList("alpha list"));
    }
    alphas.iter().try_for_each(|&a| check_alpha(a))?;
    let base = ChannelSpec::new(family, d, eta, 0.0, nu)?;
    let opts = EvalOptions::with_method(Method::Closed);
    alphas
        .iter()
        .map(|&a| mi_vs_mu(&base, &InputKind::Ansatz(a), grid_size, opts))
        .collect()
}

/// Default ansatz angles: product, two intermediate angles, maximally
/// entangled.
pub fn default_alphas(d: usize) -> Vec<f64> {
    use core::f64::consts::PI;
    alloc::vec![0.0, PI / 8.0, PI / 4.0, entangled_alpha(d)]
}

/// Abscissae where `b - a` changes sign, by linear interpolation between
/// grid points. Both curves must share the grid.
pub fn curve_crossings(a: &MICurve, b: &MICurve) -> Vec<f64> {
    let diffs: Vec<(f64, f64)> = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(&(mu, ia), &(_, ib))| (mu, ib - ia))
        .collect();
    let mut out = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for &(mu, v) in &diffs {
        if band_sign(v) == 0 {
            continue;
        }
        if let Some((mu0, v0)) = last {
            if band_sign(v0) != band_sign(v) {
                out.push(mu0 - v0 * (mu - mu0) / (v - v0));
            }
        }
        last = Some((mu, v));
    }
    out
}

/// Closed form against oracle for one channel and input.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub spec: ChannelSpec,
    pub input: InputKind,
    /// Max `|sorted closed - sorted oracle|` eigenvalue difference.
    pub spectrum_deviation: f64,
    /// Max entrywise `|structured output - oracle output|`.
    pub matrix_deviation: f64,
    pub errata: Vec<ErratumRecord>,
}

impl ValidationReport {
    pub fn max_deviation(&self) -> f64 {
        self.spectrum_deviation.max(self.matrix_deviation)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol && self.errata.iter().all(ErratumRecord::is_resolved)
    }
}

pub fn validate(spec: &ChannelSpec, input: &InputKind, oracle_cap: usize) -> Result<ValidationReport> {
    if spec.d > oracle_cap {
        return Err(Error::OracleCapExceeded {
            d: spec.d,
            cap: oracle_cap,
        });
    }
    let schmidt = input.schmidt(spec.d)?;
    let oracle = apply_two_use(spec, &density(&build_state(&schmidt))?)?;
    let oracle_spectrum = hermitian_spectrum(&oracle)?;
    let structured = structured_output(spec, &schmidt)?;
    let closed = output_spectrum(spec, input, Method::Closed, oracle_cap)?;
    Ok(ValidationReport {
        spec: *spec,
        input: input.clone(),
        spectrum_deviation: closed.max_abs_diff(&oracle_spectrum),
        matrix_deviation: structured.matrix.max_abs_diff(&oracle),
        errata: errata::ledger()?,
    })
}
