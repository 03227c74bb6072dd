use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kronpoly::RowBounds;

use crate::config::{RunConfig, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "kronpoly", version, about = "Kronecker coefficients and the polytope of bipartite spectra")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Character and coefficient cache file.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Write structured output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = Tolerances::default().spectrum)]
    pub tol_spectrum: f64,
    #[arg(long, global = true, default_value_t = Tolerances::default().normalization)]
    pub tol_normalization: f64,
    #[arg(long, global = true, default_value_t = Tolerances::default().hull)]
    pub tol_hull: f64,
    #[arg(long, global = true, default_value_t = Tolerances::default().membership)]
    pub tol_membership: f64,
    #[arg(long, global = true, default_value_t = Tolerances::default().pinsker)]
    pub tol_pinsker: f64,
    /// Constant c in the convergence check distance ≤ c/√k.
    #[arg(long, global = true, default_value_t = Tolerances::default().convergence)]
    pub tol_convergence: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct BoundsArgs {
    /// Rows allowed in the first shape.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Rows allowed in the second shape.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Rows allowed in the third shape (default m·n).
    #[arg(long)]
    pub mn_bound: Option<usize>,
}

impl BoundsArgs {
    pub fn bounds(&self) -> RowBounds {
        RowBounds::new(self.m, self.n, self.mn_bound.unwrap_or(self.m * self.n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// (|00⟩ + |11⟩ + …)/√d, requires m = n.
    MaxEntangled,
    /// |0⟩ ⊗ |0⟩.
    Product,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Kronecker coefficient of three shapes such as 2,1.
    Coeff { mu: String, nu: String, lambda: String },
    /// Write every nonzero triple with k boxes as JSON.
    Enumerate {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Write the hull of all normalized triples up to K boxes as JSON.
    Polytope {
        #[arg(long)]
        max_boxes: u32,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Sample random density operators and measure their distance to a hull.
    Sample {
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Hull JSON written by `polytope`.
        #[arg(long)]
        hull: PathBuf,
        /// Extra fixed states placed before the random ones.
        #[arg(long, value_enum)]
        fixture: Vec<Fixture>,
    },
    /// Tabulate the most likely Schur–Weyl outcome for k = 1..k_max.
    Estimate {
        /// Spectrum such as 0.7,0.3.
        spec: String,
        #[arg(long, default_value_t = 8)]
        k_max: u32,
    },
    /// Write the indecomposable triples up to K boxes as JSON.
    Generators {
        #[arg(long)]
        max_boxes: u32,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
    /// Run the falsification suites.
    Check {
        #[arg(long, default_value_t = 8)]
        max_boxes: u32,
        /// Random draws per sampled suite.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        bounds: BoundsArgs,
    },
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        let g = &self.global;
        let (bounds, max_boxes) = match &self.command {
            Command::Enumerate { k, bounds } => (bounds.bounds(), *k),
            Command::Polytope { max_boxes, bounds }
            | Command::Generators { max_boxes, bounds }
            | Command::Check { max_boxes, bounds, .. } => (bounds.bounds(), *max_boxes),
            Command::Sample { m, n, .. } => (RowBounds::bipartite(*m, *n), 0),
            Command::Coeff { .. } | Command::Estimate { .. } => (RowBounds::bipartite(2, 2), 0),
        };
        RunConfig {
            bounds,
            max_boxes,
            seed: g.seed,
            tolerances: Tolerances {
                spectrum: g.tol_spectrum,
                normalization: g.tol_normalization,
                hull: g.tol_hull,
                membership: g.tol_membership,
                pinsker: g.tol_pinsker,
                convergence: g.tol_convergence,
            },
            out: g.out.clone(),
            cache: g.cache.clone(),
            threads: g.threads,
        }
    }
}
