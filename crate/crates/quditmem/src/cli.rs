//! Command-line parsing into a [`RunConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quditmem_core::{Family, Method, Parity};

use crate::config::{
    Command, Figure, InputSelector, RunConfig, SpecParams, DEFAULT_GRID, DEFAULT_MAX_D, DEFAULT_TOL,
};
use crate::error::CliResult;
use crate::output::Format;
use crate::run::run;

#[derive(Debug, Parser)]
#[command(name = "quditmem", version, about = "Two-use qudit channels with correlated noise")]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,

    /// Worker threads (default: QUDITMEM_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Report I/2 per channel use instead of I for the pair.
    #[arg(long, global = true)]
    per_use: bool,

    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,

    /// Lift the dimension cap on the brute-force oracle.
    #[arg(long, global = true)]
    allow_large_oracle: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Qd,
    Qcd,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Qd => Family::Qd,
            FamilyArg::Qcd => Family::Qcd,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Closed,
    Oracle,
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => Method::Closed,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureArg {
    Fig1,
    Fig2,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig1 => Figure::Fig1,
            FigureArg::Fig2 => Figure::Fig2,
            FigureArg::Fig3a => Figure::Fig3a,
            FigureArg::Fig3b => Figure::Fig3b,
            FigureArg::Fig4a => Figure::Fig4a,
            FigureArg::Fig4b => Figure::Fig4b,
            FigureArg::Fig5 => Figure::Fig5,
        }
    }
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    d: usize,
    /// Noise parameter (QD: p - q, QCD: d (p - q)).
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<f64>,
    /// Identity-term probability; converted to eta.
    #[arg(long)]
    p: Option<f64>,
    /// Memory parameter.
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Phase-correlation parameter.
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
}

impl SpecArgs {
    fn params(&self) -> CliResult<SpecParams> {
        SpecParams::new(self.family.into(), self.d, self.eta, self.p, self.mu, self.nu)
    }
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Mutual information, entropy and output spectrum at one point.
    Mi {
        #[command(flatten)]
        spec: SpecArgs,
        /// product | entangled | ansatz:<alpha> | schmidt:<file>
        #[arg(long, default_value = "entangled")]
        input: InputSelector,
        /// Use the entangled closed form for this parity.
        #[arg(long, value_enum)]
        parity: Option<ParityArg>,
    },
    /// I over a uniform mu grid (--mu is ignored).
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "entangled")]
        input: InputSelector,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Crossover search in mu for one channel.
    Crossover {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Crossover points for every (d, nu) pair.
    CrossoverTable {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        d_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        nu_list: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Ansatz curves I(mu) for several angles.
    AlphaSweep {
        #[command(flatten)]
        spec: SpecArgs,
        /// Angles in [0, pi/2]; defaults to 0, pi/8, pi/4 and the
        /// maximally entangled angle.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Closed form against the oracle, plus the errata ledger.
    Validate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "entangled")]
        input: InputSelector,
        #[arg(long, default_value_t = quditmem_core::analysis::VALIDATION_TOL)]
        tol: f64,
    },
    /// Data behind one of the figures.
    Figure {
        #[arg(value_enum)]
        name: FigureArg,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        /// Largest d for the crossover-versus-dimension figures.
        #[arg(long, default_value_t = DEFAULT_MAX_D)]
        max_d: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

impl Cli {
    pub fn into_config(self) -> CliResult<RunConfig> {
        let command = match self.command {
            Sub::Mi { spec, input, parity } => Command::Mi {
                params: spec.params()?,
                input,
                parity: parity.map(|p| match p {
                    ParityArg::Even => Parity::Even,
                    ParityArg::Odd => Parity::Odd,
                }),
            },
            Sub::Sweep { spec, input, grid } => Command::Sweep {
                params: spec.params()?,
                input,
                grid,
            },
            Sub::Crossover { spec, tol } => Command::Crossover {
                params: spec.params()?,
                tol,
            },
            Sub::CrossoverTable {
                family,
                eta,
                d_list,
                nu_list,
                tol,
            } => Command::CrossoverTable {
                family: family.into(),
                eta,
                d_list,
                nu_list,
                tol,
            },
            Sub::AlphaSweep { spec, alphas, grid } => Command::AlphaSweep {
                params: spec.params()?,
                alphas,
                grid,
            },
            Sub::Validate { spec, input, tol } => Command::Validate {
                params: spec.params()?,
                input,
                tol,
            },
            Sub::Figure {
                name,
                grid,
                max_d,
                tol,
            } => Command::Figure {
                figure: name.into(),
                grid,
                max_d,
                tol,
            },
        };
        let mut cfg = RunConfig::new(command);
        cfg.method = self.method.into();
        if self.allow_large_oracle {
            cfg.oracle_cap = usize::MAX;
        }
        cfg.per_use = self.per_use;
        cfg.format = match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
        cfg.out = self.out;
        cfg.threads = self.threads;
        Ok(cfg)
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match cli.into_config() {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("quditmem: {e}");
            e.exit_code()
        }
    }
}
