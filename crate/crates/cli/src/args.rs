use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use subjet::subdiff::Kind;

#[derive(Parser, Debug)]
#[command(
    name = "subjet-lab",
    version,
    about = "Exact experiments on subdifferential graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall time in the report (breaks byte-for-byte reproducibility).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FixtureArg {
    /// Fixture path, or a file name inside the corpus directory.
    #[arg(long)]
    pub fixture: String,
}

fn kind(s: &str) -> Result<Kind, String> {
    s.parse::<Kind>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Subdifferential at a point.
    Subdiff {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value = "limiting", value_parser = kind)]
        kind: Kind,
        #[command(flatten)]
        output: Output,
    },
    /// Pieces of the subdifferential graph.
    Graph {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long, default_value = "limiting", value_parser = kind)]
        kind: Kind,
        /// Pull the graph back along x ↦ Mx; rows separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        pullback: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Exact local dimension of the graph at a point (x, v).
    Localdim {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value = "limiting", value_parser = kind)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        pullback: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Local dimension n at every covering test point; the whole corpus by default.
    Verify {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, value_parser = kind)]
        kind: Option<Kind>,
        #[command(flatten)]
        output: Output,
    },
    /// Finite-to-one and dense local diffeomorphism certificates for x ↦ Ax + v.
    Minty {
        #[command(flatten)]
        fixture: FixtureArg,
        /// Certify this matrix (row-major, rows may be separated by ';'); sample otherwise.
        #[arg(long = "A", allow_hyphen_values = true)]
        a: Option<String>,
        /// With --A, also list the preimage of b.
        #[arg(long = "b", allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "limiting", value_parser = kind)]
        kind: Kind,
        #[command(flatten)]
        output: Output,
    },
    /// Solutions of v ∈ ∂f(x), Ax + v = b.
    Solve {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "b", allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value = "limiting", value_parser = kind)]
        kind: Kind,
        #[command(flatten)]
        output: Output,
    },
    /// Fraction of perturbed systems with a finite solution set near the anchor.
    Sensitivity {
        #[command(flatten)]
        fixture: FixtureArg,
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "b", allow_hyphen_values = true)]
        b: String,
        /// Anchor solution (x, v).
        #[arg(long, allow_hyphen_values = true)]
        anchor: String,
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Witness sequence accessing (x̄, f(x̄), v̄) from outside M.
    Access {
        #[command(flatten)]
        fixture: FixtureArg,
        /// `origin`, or points separated by ';'.
        #[arg(long = "M", default_value = "origin", allow_hyphen_values = true)]
        m: String,
        /// The point x̄; the origin by default.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long = "v", allow_hyphen_values = true)]
        v: String,
        /// Penalties m_i.
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long, default_value = "1/1000")]
        tol: String,
        #[command(flatten)]
        output: Output,
    },
    /// Fixture validation; the whole corpus by default.
    Validate {
        #[arg(long)]
        fixture: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Random piecewise-affine fixture.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
