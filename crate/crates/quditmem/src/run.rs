//! Command execution: every command produces one [`Table`].

use std::fs::File;
use std::io::{self, BufWriter};

use quditmem_core::analysis::{crossover_mu, default_alphas, validate, CrossoverReport, EvalOptions};
use quditmem_core::closedform::{entangled_spectrum_with_parity, mutual_information};
use quditmem_core::linalg::entropy_bits;
use quditmem_core::{ChannelSpec, Family, InputKind, MICurve, Method};

use crate::config::{Command, Figure, RunConfig, SpecParams};
use crate::error::{CliError, CliResult, EXIT_OK};
use crate::output::{Cell, Table};
use crate::parallel;

/// Result of a command: the table to emit and, when the computation ran but
/// did not meet its tolerance, the failure to report after emitting.
#[derive(Debug)]
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(table: Table) -> Self {
        Self { table, failure: None }
    }
}

const QD_FIGURE_ETA: f64 = 0.8;
const QCD_FIGURE_ETA: f64 = 0.4;
const FIG4_NUS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
const FIG2_D: usize = 3;

fn scale(cfg: &RunConfig) -> f64 {
    if cfg.per_use {
        0.5
    } else {
        1.0
    }
}

/// Validates `cfg`, computes inside a sized thread pool, and returns the
/// outcome without writing anything.
pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    cfg.validate()?;
    let pool = parallel::build_pool(parallel::resolve_threads(cfg.threads)?)?;
    pool.install(|| dispatch(cfg))
}

fn dispatch(cfg: &RunConfig) -> CliResult<Outcome> {
    let opts = cfg.eval_options();
    match &cfg.command {
        Command::Mi { params, input, parity } => mi(cfg, params, &input.resolve(params.d)?, &input.label(), *parity),
        Command::Sweep { params, input, grid } => {
            let curve = parallel::mi_vs_mu(&params.spec()?, &input.resolve(params.d)?, *grid, opts)?;
            let mut t = Table::new(vec!["mu", "I"]);
            for (mu, i) in curve.points {
                t.push(vec![mu.into(), (i * scale(cfg)).into()]);
            }
            Ok(Outcome::ok(t))
        }
        Command::Crossover { params, tol } => Ok(Outcome::ok(crossover_table(&crossover_mu(&params.spec()?, *tol)?))),
        Command::CrossoverTable {
            family,
            eta,
            d_list,
            nu_list,
            tol,
        } => Ok(Outcome::ok(dimension_table(&parallel::crossover_vs_dimension(
            *family, d_list, *eta, nu_list, *tol,
        )?))),
        Command::AlphaSweep { params, alphas, grid } => {
            let alphas = alphas.clone().unwrap_or_else(|| default_alphas(params.d));
            let curves = parallel::alpha_sweep(params.family, params.d, params.eta, params.nu, &alphas, *grid)?;
            Ok(Outcome::ok(alpha_table(cfg, &curves)))
        }
        Command::Validate { params, input, tol } => validation(cfg, params, &input.resolve(params.d)?, *tol),
        Command::Figure {
            figure,
            grid,
            max_d,
            tol,
        } => figure_table(cfg, *figure, *grid, *max_d, *tol, opts).map(Outcome::ok),
    }
}

fn mi(
    cfg: &RunConfig,
    params: &SpecParams,
    input: &InputKind,
    label: &str,
    parity: Option<quditmem_core::Parity>,
) -> CliResult<Outcome> {
    let spec = params.spec()?;
    let (i, s, spectrum, method) = match parity {
        Some(parity) => {
            if !matches!(input, InputKind::Entangled) || cfg.method == Method::Oracle {
                return Err(CliError::Invalid(
                    "--parity selects the entangled closed form; use it with --input entangled and a closed method"
                        .into(),
                ));
            }
            let spectrum = entangled_spectrum_with_parity(&spec, parity)?;
            (mutual_information(spec.d, &spectrum)?, entropy_bits(&spectrum)?, spectrum, Method::Closed)
        }
        None => {
            let p = parallel::evaluate_point(&spec, input, cfg.eval_options())?;
            (p.mutual_information, p.entropy, p.spectrum, p.method)
        }
    };
    let mut t = Table::new(vec!["family", "d", "eta", "mu", "nu", "input", "method", "I", "S", "spectrum"]);
    t.push(vec![
        spec.family.as_str().into(),
        spec.d.into(),
        spec.eta.into(),
        spec.mu.into(),
        spec.nu.into(),
        label.into(),
        method.as_str().into(),
        (i * scale(cfg)).into(),
        s.into(),
        Cell::Floats(spectrum.into_values()),
    ]);
    Ok(Outcome::ok(t))
}

fn crossover_table(r: &CrossoverReport) -> Table {
    let mut t = Table::new(vec![
        "family",
        "d",
        "eta",
        "nu",
        "status",
        "sign_changes",
        "root",
        "mu_c",
        "mu_lo",
        "mu_hi",
        "direction",
        "tolerance",
        "delta_at_zero",
        "delta_at_one",
    ]);
    let head = |t: &mut Table, root: Cell, mu_c: Cell, lo: Cell, hi: Cell, dir: Cell| {
        t.push(vec![
            r.family.as_str().into(),
            r.d.into(),
            r.eta.into(),
            r.nu.into(),
            r.status.as_str().into(),
            r.sign_changes.into(),
            root,
            mu_c,
            lo,
            hi,
            dir,
            r.tolerance.into(),
            r.delta_at_zero.into(),
            r.delta_at_one.into(),
        ])
    };
    if r.roots.is_empty() {
        head(&mut t, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty);
    }
    for (k, root) in r.roots.iter().enumerate() {
        head(
            &mut t,
            k.into(),
            root.mu_c.into(),
            root.mu_lo.into(),
            root.mu_hi.into(),
            Cell::Text(root.direction.to_string()),
        );
    }
    t
}

fn dimension_table(reports: &[CrossoverReport]) -> Table {
    let mut t = Table::new(vec!["d", "nu", "eta", "mu_c", "status"]);
    for r in reports {
        t.push(vec![r.d.into(), r.nu.into(), r.eta.into(), r.mu_c().into(), r.status.as_str().into()]);
    }
    t
}

fn alpha_table(cfg: &RunConfig, curves: &[MICurve]) -> Table {
    let mut t = Table::new(vec!["alpha", "mu", "I"]);
    for c in curves {
        let InputKind::Ansatz(alpha) = c.input else {
            unreachable!("alpha sweeps only hold ansatz curves")
        };
        for &(mu, i) in &c.points {
            t.push(vec![alpha.into(), mu.into(), (i * scale(cfg)).into()]);
        }
    }
    t
}

fn validation(cfg: &RunConfig, params: &SpecParams, input: &InputKind, tol: f64) -> CliResult<Outcome> {
    let report = validate(&params.spec()?, input, cfg.oracle_cap)?;
    let mut t = Table::new(vec!["item", "deviation_before", "deviation_after", "tolerance", "pass"]);
    for (item, dev) in [("spectrum", report.spectrum_deviation), ("matrix", report.matrix_deviation)] {
        t.push(vec![item.into(), Cell::Empty, dev.into(), tol.into(), (dev <= tol).into()]);
    }
    for e in &report.errata {
        t.push(vec![
            format!("erratum:{}", e.id).into(),
            e.max_deviation_before.into(),
            e.max_deviation_after.into(),
            quditmem_core::errata::ERRATUM_TOL.into(),
            e.is_resolved().into(),
        ]);
    }
    let failure = (!report.passes(tol)).then(|| CliError::ValidationFailed {
        deviation: report.max_deviation(),
        tolerance: tol,
    });
    Ok(Outcome { table: t, failure })
}

fn product_entangled_rows(
    cfg: &RunConfig,
    t: &mut Table,
    base: &ChannelSpec,
    grid: usize,
    opts: EvalOptions,
    with_d: bool,
) -> CliResult<()> {
    let p = parallel::mi_vs_mu(base, &InputKind::Product, grid, opts)?;
    let e = parallel::mi_vs_mu(base, &InputKind::Entangled, grid, opts)?;
    for (&(mu, ip), &(_, ie)) in p.points.iter().zip(&e.points) {
        let mut row: Vec<Cell> = Vec::with_capacity(4);
        if with_d {
            row.push(base.d.into());
        }
        row.extend([mu.into(), (ip * scale(cfg)).into(), (ie * scale(cfg)).into()]);
        t.push(row);
    }
    Ok(())
}

fn figure_table(cfg: &RunConfig, fig: Figure, grid: usize, max_d: usize, tol: f64, opts: EvalOptions) -> CliResult<Table> {
    let curves_over_d = |dims: &[usize], nu: f64| -> CliResult<Table> {
        let mut t = Table::new(vec!["d", "mu", "I_product", "I_entangled"]);
        for &d in dims {
            let base = ChannelSpec::new(Family::Qd, d, QD_FIGURE_ETA, 0.0, nu)?;
            product_entangled_rows(cfg, &mut t, &base, grid, opts, true)?;
        }
        Ok(t)
    };
    let crossovers = |start: usize| -> CliResult<Table> {
        let dims: Vec<usize> = (start..=max_d).step_by(2).collect();
        Ok(dimension_table(&parallel::crossover_vs_dimension(
            Family::Qd,
            &dims,
            QD_FIGURE_ETA,
            &FIG4_NUS,
            tol,
        )?))
    };
    match fig {
        Figure::Fig1 => {
            let mut t = Table::new(vec!["mu", "I_product", "I_entangled"]);
            let base = ChannelSpec::new(Family::Qcd, 2, QCD_FIGURE_ETA, 0.0, 0.0)?;
            product_entangled_rows(cfg, &mut t, &base, grid, opts, false)?;
            Ok(t)
        }
        Figure::Fig2 => {
            let curves = parallel::alpha_sweep(Family::Qcd, FIG2_D, QCD_FIGURE_ETA, 1.0, &default_alphas(FIG2_D), grid)?;
            Ok(alpha_table(cfg, &curves))
        }
        Figure::Fig3a => curves_over_d(&[2, 4, 6, 8, 10], 1.0),
        Figure::Fig3b => curves_over_d(&[2, 4, 6, 8, 10], 0.0),
        Figure::Fig4a => crossovers(2),
        Figure::Fig4b => crossovers(3),
        Figure::Fig5 => curves_over_d(&[3, 5, 7, 9, 11], 0.0),
    }
}

/// Runs `cfg` end to end: computes, writes the table to the configured
/// destination, prints a one-line diagnostic on failure, returns the exit
/// status.
pub fn run(cfg: &RunConfig) -> i32 {
    match run_inner(cfg) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("quditmem {}: {e}", cfg.command.name());
            e.exit_code()
        }
    }
}

fn run_inner(cfg: &RunConfig) -> CliResult<()> {
    let outcome = execute(cfg)?;
    match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Create {
                path: path.clone(),
                source,
            })?;
            outcome.table.write_to(cfg.format, &mut BufWriter::new(file))?;
        }
        None => outcome.table.write_to(cfg.format, &mut io::stdout().lock())?,
    }
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
