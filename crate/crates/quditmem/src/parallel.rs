//! Rayon-backed versions of the sweeps. Work is split into independent
//! points and gathered in index order, so results do not depend on the
//! number of worker threads.

use rayon::prelude::*;

use quditmem_core::analysis::{
    check_alpha, crossover_mu, curve_from_points, curve_point, dimension_grid, evaluate, mu_grid,
    CrossoverReport, EvalOptions, MiPoint,
};
use quditmem_core::channel::{apply_kraus_block, check_density, noise_table};
use quditmem_core::closedform::mutual_information;
use quditmem_core::linalg::{entropy_bits, hermitian_spectrum};
use quditmem_core::states::{build_state, density};
use quditmem_core::{ChannelSpec, ComplexMatrix, Error, Family, InputKind, MICurve, Method};

use crate::error::{CliError, CliResult};

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "QUDITMEM_THREADS";

/// Thread count from the flag, else from [`THREADS_ENV`], else `None`
/// (machine parallelism).
pub fn resolve_threads(flag: Option<usize>) -> CliResult<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Invalid(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn build_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

/// Oracle channel with the Kraus sum split by first shift index; blocks are
/// added in shift order.
pub fn apply_two_use(spec: &ChannelSpec, rho: &ComplexMatrix) -> Result<ComplexMatrix, Error> {
    check_density(rho, spec.d)?;
    let table = noise_table(spec);
    let blocks: Vec<ComplexMatrix> = (0..spec.d)
        .into_par_iter()
        .map(|m| apply_kraus_block(&table, rho, m))
        .collect();
    let n = spec.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for block in &blocks {
        out.add_scaled(1.0, block)?;
    }
    Ok(out)
}

/// Single-point evaluation; the oracle path runs the parallel channel.
pub fn evaluate_point(spec: &ChannelSpec, input: &InputKind, opts: EvalOptions) -> Result<MiPoint, Error> {
    if opts.resolve(input) != Method::Oracle {
        return evaluate(spec, input, opts);
    }
    if spec.d > opts.oracle_cap {
        return Err(Error::OracleCapExceeded {
            d: spec.d,
            cap: opts.oracle_cap,
        });
    }
    let rho = density(&build_state(&input.schmidt(spec.d)?))?;
    let spectrum = hermitian_spectrum(&apply_two_use(spec, &rho)?)?;
    Ok(MiPoint {
        mutual_information: mutual_information(spec.d, &spectrum)?,
        entropy: entropy_bits(&spectrum)?,
        spectrum,
        method: Method::Oracle,
    })
}

/// Parallel counterpart of `analysis::mi_vs_mu`.
pub fn mi_vs_mu(base: &ChannelSpec, input: &InputKind, grid_size: usize, opts: EvalOptions) -> Result<MICurve, Error> {
    let grid = mu_grid(grid_size)?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&mu| curve_point(base, input, mu, opts))
        .collect::<Result<_, _>>()?;
    Ok(curve_from_points(base, input.clone(), opts.resolve(input), grid.into_iter().zip(values).collect()))
}

/// Parallel counterpart of `analysis::crossover_vs_dimension`.
pub fn crossover_vs_dimension(
    family: Family,
    d_list: &[usize],
    eta: f64,
    nu_list: &[f64],
    tol: f64,
) -> Result<Vec<CrossoverReport>, Error> {
    dimension_grid(family, d_list, eta, nu_list)?
        .par_iter()
        .map(|spec| crossover_mu(spec, tol))
        .collect()
}

/// Parallel counterpart of `analysis::alpha_sweep`; every `(alpha, mu)`
/// point is an independent task.
pub fn alpha_sweep(
    family: Family,
    d: usize,
    eta: f64,
    nu: f64,
    alphas: &[f64],
    grid_size: usize,
) -> Result<Vec<MICurve>, Error> {
    if alphas.is_empty() {
        return Err(Error::EmptyList("alpha list"));
    }
    alphas.iter().try_for_each(|&a| check_alpha(a))?;
    let base = ChannelSpec::new(family, d, eta, 0.0, nu)?;
    let grid = mu_grid(grid_size)?;
    let opts = EvalOptions::with_method(Method::Closed);
    let tasks: Vec<(usize, f64)> = (0..alphas.len()).flat_map(|i| grid.iter().map(move |&mu| (i, mu))).collect();
    let values: Vec<f64> = tasks
        .par_iter()
        .map(|&(i, mu)| curve_point(&base, &InputKind::Ansatz(alphas[i]), mu, opts))
        .collect::<Result<_, _>>()?;
    Ok(alphas
        .iter()
        .zip(values.chunks(grid.len()))
        .map(|(&a, chunk)| {
            let points = grid.iter().copied().zip(chunk.iter().copied()).collect();
            curve_from_points(&base, InputKind::Ansatz(a), Method::Closed, points)
        })
        .collect())
}
