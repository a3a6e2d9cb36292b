use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kappa_weyl::verify::DEFAULT_TOL;
use kappa_weyl::{RelationTag, DEFAULT_DIM_CAP};

use crate::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "kappa-weyl",
    version,
    about = "Truncated Fock representations of the deformed Weyl-Heisenberg algebra A_kappa(d)"
)]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub(crate) enum Command {
    /// List the truncated occupation-number basis.
    Basis(CommonArgs),
    /// Export operator matrices as (row, col, re, im) triplets.
    Ops(OpsArgs),
    /// Check every defining relation on the truncation interior.
    Verify(CommonArgs),
    /// Tabulate the deformed harmonic spectrum by grade.
    Spectrum(CommonArgs),
    /// Energy-positivity thresholds and the unitarity bound.
    Threshold(CommonArgs),
}

#[derive(Debug, Args)]
pub(crate) struct CommonArgs {
    /// Deformation parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Number of modes d.
    #[arg(long, default_value_t = 2)]
    pub modes: usize,
    /// Total-quanta cutoff.
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
    /// Relative tolerance for checks.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output to this file (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Build non-unitary representations for diagnostics.
    #[arg(long)]
    pub force: bool,
    /// Per-relation interior margin, e.g. `--margin diag-commutator=2`.
    #[arg(long = "margin", value_name = "TAG=N")]
    pub margins: Vec<String>,
    /// Refuse bases larger than this.
    #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
    pub dim_cap: usize,
}

#[derive(Debug, Args)]
pub(crate) struct OpsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Export a single operator (a1, adag1, N1, X2_1, H).
    #[arg(long)]
    pub op: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Basis(c) | Command::Verify(c) | Command::Spectrum(c) | Command::Threshold(c) => c,
            Command::Ops(o) => &o.common,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Verify(_) => Format::Json,
            _ => Format::Text,
        }
    }
}

/// Validated settings for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kappa: Option<f64>,
    pub d: usize,
    pub n_max: usize,
    pub tol: f64,
    pub format: Format,
    pub margins: BTreeMap<RelationTag, usize>,
    pub dim_cap: usize,
    pub force: bool,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub(crate) fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let c = cli.command.common();
        if c.modes == 0 {
            return Err(Failure::Usage("--modes must be at least 1".into()));
        }
        if c.tol <= 0.0 || !c.tol.is_finite() {
            return Err(Failure::Usage(format!("--tol must be positive, got {}", c.tol)));
        }
        if let Some(k) = c.kappa {
            if !k.is_finite() {
                return Err(Failure::Usage(format!("--kappa must be finite, got {k}")));
            }
        }
        let mut margins = BTreeMap::new();
        for spec in &c.margins {
            let (tag, n) = spec
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("--margin expects TAG=N, got `{spec}`")))?;
            let tag: RelationTag = tag.parse().map_err(|e: kappa_weyl::Error| Failure::Usage(e.to_string()))?;
            let n: usize = n
                .parse()
                .map_err(|_| Failure::Usage(format!("--margin value `{n}` is not a non-negative integer")))?;
            margins.insert(tag, n);
        }
        Ok(Self {
            kappa: c.kappa,
            d: c.modes,
            n_max: c.nmax,
            tol: c.tol,
            format: c.format.unwrap_or(cli.command.default_format()),
            margins,
            dim_cap: c.dim_cap,
            force: c.force,
            out: c.out.clone(),
        })
    }

    pub(crate) fn require_kappa(&self) -> Result<f64, Failure> {
        self.kappa
            .ok_or_else(|| Failure::Usage("--kappa is required for this subcommand".into()))
    }
}
