//! Validated run configuration and the input-state selector.

use std::fs;
use std::path::{Path, PathBuf};

use quditmem_core::analysis::{EvalOptions, DEFAULT_CROSSOVER_TOL};
use quditmem_core::channel::{eta_from_p, DEFAULT_ORACLE_CAP};
use quditmem_core::{ChannelSpec, Family, InputKind, Method, Parity, SchmidtSpec};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::Format;

/// Input selector as given on the command line:
/// `product | entangled | ansatz:<alpha> | schmidt:<file>`.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSelector {
    Product,
    Entangled,
    Ansatz(f64),
    SchmidtFile(PathBuf),
}

impl std::str::FromStr for InputSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "product" => Ok(Self::Product),
            "entangled" => Ok(Self::Entangled),
            _ => {
                if let Some(a) = s.strip_prefix("ansatz:") {
                    a.parse::<f64>()
                        .map(Self::Ansatz)
                        .map_err(|e| format!("bad ansatz angle {a:?}: {e}"))
                } else if let Some(p) = s.strip_prefix("schmidt:") {
                    if p.is_empty() {
                        return Err("schmidt: needs a file path".into());
                    }
                    Ok(Self::SchmidtFile(PathBuf::from(p)))
                } else {
                    Err(format!(
                        "unknown input {s:?}; expected product, entangled, ansatz:<alpha> or schmidt:<file>"
                    ))
                }
            }
        }
    }
}

impl InputSelector {
    /// Resolves the selector for dimension `d`, reading the Schmidt file if any.
    pub fn resolve(&self, d: usize) -> CliResult<InputKind> {
        Ok(match self {
            Self::Product => InputKind::Product,
            Self::Entangled => InputKind::Entangled,
            Self::Ansatz(a) => InputKind::Ansatz(*a),
            Self::SchmidtFile(path) => InputKind::Schmidt(load_schmidt(path, d)?),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Self::Product => "product".into(),
            Self::Entangled => "entangled".into(),
            Self::Ansatz(a) => format!("ansatz:{a}"),
            Self::SchmidtFile(p) => format!("schmidt:{}", p.display()),
        }
    }
}

/// On-disk Schmidt state: `{"amplitudes": [...], "phases": [...], "offset": k}`.
/// `phases` and `offset` default to zero; `d`, when present, must match.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchmidtFile {
    d: Option<usize>,
    amplitudes: Vec<f64>,
    phases: Option<Vec<f64>>,
    #[serde(default)]
    offset: usize,
}

pub fn load_schmidt(path: &Path, d: usize) -> CliResult<SchmidtSpec> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    let file: SchmidtFile = serde_json::from_str(&text).map_err(|source| CliError::SchmidtFile {
        path: path.to_owned(),
        source,
    })?;
    let n = file.amplitudes.len();
    if file.d.is_some_and(|fd| fd != n) || n != d {
        return Err(CliError::Invalid(format!(
            "Schmidt file {} has {n} amplitudes but d = {d}",
            path.display()
        )));
    }
    let phases = file.phases.unwrap_or_else(|| vec![0.0; n]);
    Ok(SchmidtSpec::new(file.amplitudes, phases, file.offset)?)
}

/// Channel parameters before `mu` is fixed; `eta` is canonical and `p` is
/// converted immediately.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecParams {
    pub family: Family,
    pub d: usize,
    pub eta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl SpecParams {
    pub fn new(family: Family, d: usize, eta: Option<f64>, p: Option<f64>, mu: f64, nu: f64) -> CliResult<Self> {
        let eta = match (eta, p) {
            (Some(eta), None) => eta,
            (None, Some(p)) => eta_from_p(family, d, p)?,
            (Some(_), Some(_)) => return Err(CliError::Invalid("give either --eta or --p, not both".into())),
            (None, None) => return Err(CliError::Invalid("one of --eta or --p is required".into())),
        };
        let params = Self { family, d, eta, mu, nu };
        params.spec()?;
        Ok(params)
    }

    pub fn spec(&self) -> CliResult<ChannelSpec> {
        Ok(ChannelSpec::new(self.family, self.d, self.eta, self.mu, self.nu)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5,
}

impl Figure {
    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig5 => "fig5",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Mi {
        params: SpecParams,
        input: InputSelector,
        /// Forces the entangled closed form for a parity (misuse is an error).
        parity: Option<Parity>,
    },
    Sweep {
        params: SpecParams,
        input: InputSelector,
        grid: usize,
    },
    Crossover {
        params: SpecParams,
        tol: f64,
    },
    CrossoverTable {
        family: Family,
        eta: f64,
        d_list: Vec<usize>,
        nu_list: Vec<f64>,
        tol: f64,
    },
    AlphaSweep {
        params: SpecParams,
        alphas: Option<Vec<f64>>,
        grid: usize,
    },
    Validate {
        params: SpecParams,
        input: InputSelector,
        tol: f64,
    },
    Figure {
        figure: Figure,
        grid: usize,
        max_d: usize,
        tol: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mi { .. } => "mi",
            Command::Sweep { .. } => "sweep",
            Command::Crossover { .. } => "crossover",
            Command::CrossoverTable { .. } => "crossover-table",
            Command::AlphaSweep { .. } => "alpha-sweep",
            Command::Validate { .. } => "validate",
            Command::Figure { .. } => "figure",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub method: Method,
    pub oracle_cap: usize,
    /// Report `I / 2` per channel use instead of `I(E_2)`.
    pub per_use: bool,
    pub format: Format,
    /// `None` writes to standard output.
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            method: Method::Auto,
            oracle_cap: DEFAULT_ORACLE_CAP,
            per_use: false,
            format: Format::Csv,
            out: None,
            threads: None,
        }
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            method: self.method,
            oracle_cap: self.oracle_cap,
        }
    }

    /// Checks everything that can be checked before computing.
    pub fn validate(&self) -> CliResult<()> {
        let check_grid = |g: usize| {
            if g < 2 {
                Err(CliError::Invalid(format!("--grid must be at least 2, got {g}")))
            } else {
                Ok(())
            }
        };
        let check_tol = |t: f64| {
            if t > 0.0 && t.is_finite() {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("--tol must be positive, got {t}")))
            }
        };
        let check_oracle = |d: usize| -> CliResult<()> {
            if self.method == Method::Oracle && d > self.oracle_cap {
                Err(quditmem_core::Error::OracleCapExceeded {
                    d,
                    cap: self.oracle_cap,
                }
                .into())
            } else {
                Ok(())
            }
        };
        match &self.command {
            Command::Mi { params, parity, .. } => {
                params.spec()?;
                check_oracle(params.d)?;
                if let Some(p) = parity {
                    p.check(params.d)?;
                }
            }
            Command::Sweep { params, grid, .. } => {
                params.spec()?;
                check_oracle(params.d)?;
                check_grid(*grid)?;
            }
            Command::Crossover { params, tol } => {
                params.spec()?;
                check_tol(*tol)?;
            }
            Command::CrossoverTable {
                family,
                eta,
                d_list,
                nu_list,
                tol,
            } => {
                if d_list.is_empty() || nu_list.is_empty() {
                    return Err(CliError::Invalid("--d-list and --nu-list must not be empty".into()));
                }
                for &d in d_list {
                    for &nu in nu_list {
                        ChannelSpec::new(*family, d, *eta, 0.0, nu)?;
                    }
                }
                check_tol(*tol)?;
            }
            Command::AlphaSweep { params, grid, alphas } => {
                params.spec()?;
                check_grid(*grid)?;
                if alphas.as_ref().is_some_and(|a| a.is_empty()) {
                    return Err(CliError::Invalid("--alphas must not be empty".into()));
                }
            }
            Command::Validate { params, tol, .. } => {
                params.spec()?;
                check_tol(*tol)?;
                if params.d > self.oracle_cap {
                    return Err(CliError::Model(quditmem_core::Error::OracleCapExceeded {
                        d: params.d,
                        cap: self.oracle_cap,
                    }));
                }
            }
            Command::Figure { grid, max_d, tol, .. } => {
                check_grid(*grid)?;
                check_tol(*tol)?;
                if *max_d < 3 {
                    return Err(CliError::Invalid(format!("--max-d must be at least 3, got {max_d}")));
                }
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::Invalid("--threads must be positive".into()));
        }
        Ok(())
    }
}

/// Default bisection width.
pub const DEFAULT_TOL: f64 = DEFAULT_CROSSOVER_TOL;
/// Default number of `mu` grid points for curves.
pub const DEFAULT_GRID: usize = 101;
/// Default largest dimension for the crossover-versus-dimension figures.
pub const DEFAULT_MAX_D: usize = 12;
