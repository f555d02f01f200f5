//! `coorbital`: batch front end for the 1+N coorbital central configuration library.
//!
//! Exit codes: 0 success, 1 certification failure, 2 usage or domain error,
//! 3 collision.

mod angles;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "coorbital", version, about = "Central configurations of the planar 1+N coorbital problem")]
pub struct Cli {
    /// Potential exponent s (3 Newtonian, 2 point vortices).
    #[arg(long, global = true, default_value_t = 3.0)]
    pub s: f64,
    /// Kernel tolerance (fmatrix, masses) or eigenvalue tolerance (stability).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Grid resolution (trace: cells per axis; certify thm5: base grid).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Mass coefficient matrix F, its singular values and kernel.
    Fmatrix {
        /// Comma-separated angles, radians or `pi/6` style.
        #[arg(long, allow_hyphen_values = true)]
        thetas: String,
    },
    /// Kernel of F and the positive mass vectors in it.
    Masses {
        #[arg(long, allow_hyphen_values = true)]
        thetas: String,
    },
    /// Pfaffian of F for explicit angles or a symmetric family.
    Pfaffian {
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["family", "free"])]
        thetas: Option<String>,
        #[arg(long, requires = "free")]
        family: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "family")]
        free: Option<String>,
    },
    /// Hessian inertia, Morse index and linearization counts.
    Stability {
        #[arg(long, allow_hyphen_values = true)]
        thetas: String,
        #[arg(long, allow_hyphen_values = true)]
        masses: String,
    },
    /// Angles of a test particle added to a 1+2 relative equilibrium.
    #[command(name = "solve-1p2p1")]
    #[serde(rename = "solve-1p2p1")]
    Solve1p2p1 {
        #[arg(long)]
        m1: f64,
        /// equilateral+, equilateral-, collinear or all.
        #[arg(long, default_value = "all")]
        case: String,
    },
    /// Zero curves of the Pfaffian or of the 1+5 zero-mass functions.
    Trace {
        /// pfaffian, z1, z2 or z3.
        #[arg(long)]
        tag: String,
        #[arg(long)]
        family: String,
        /// `x0,x1,y0,y1`; defaults to (0, π)².
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Newton solves inside a symmetric family from many seeds.
    SolveFamily {
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        masses: String,
        /// Seeds separated by `;`, free angles by `,`.
        #[arg(long, allow_hyphen_values = true)]
        seeds: Option<String>,
        /// Number of random seeds drawn from the family's admissible region.
        #[arg(long, conflicts_with = "seeds")]
        random_seeds: Option<usize>,
        /// Draw random seeds with every free angle in (0, π/2).
        #[arg(long)]
        convex: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Membership in the angular regions B (1+4) or C (symmetric 1+5).
    RegionCheck {
        #[arg(value_parser = ["b", "c"])]
        region: String,
        #[arg(long, allow_hyphen_values = true)]
        thetas: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        theta1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        theta2: Option<String>,
    },
    /// Interval-arithmetic certificates: thm1, thm4n6, thm4n8, thm5.
    Certify {
        target: String,
        /// thm5 mass sweep: equal, kernel, slices:N or fixed:m1,m2,m3.
        #[arg(long, default_value = "equal")]
        strategy: String,
        #[arg(long)]
        max_depth: Option<u32>,
        #[arg(long)]
        max_boxes: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
