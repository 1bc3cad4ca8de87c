//! `nframes` command line: frame checks, bounds, duals, tight frames,
//! reconstruction, operator images and combinations for JSON instance files,
//! plus the randomized certification run.
//!
//! Exit codes: `0` success, `1` a computed verdict failed (not a frame, a
//! property violation), `2` invalid input.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use report::Report;

use nframes_core::Error;

#[derive(Debug, Parser)]
#[command(name = "nframes", version, about = "Frames in n-inner product spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit the report as JSON (default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,

    /// Emit the report as an aligned text table.
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Debug, Args, Clone)]
pub struct InstanceArgs {
    /// Instance file (JSON).
    #[arg(long)]
    pub instance: PathBuf,

    /// Frame test threshold: A > tol·max(1, B).
    #[arg(long, default_value_t = nframes_core::frames::FRAME_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame, Bessel and tightness verdicts with optimal bounds.
    Check {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Bessel bound to test; defaults to the optimal upper bound.
        #[arg(long)]
        bessel_bound: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tight_tol: f64,
    },
    /// n-inner product of two named vectors.
    Inner {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// n-norm of a named vector.
    Norm {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        x: String,
    },
    /// Optimal frame bounds and the frame operator spectrum.
    Bounds {
        #[command(flatten)]
        inst: InstanceArgs,
    },
    /// Canonical dual frame and its bounds.
    Dual {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = 1e-8)]
        recon_tol: f64,
    },
    /// Canonical normalized tight frame.
    Tight {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = 1e-8)]
        tight_tol: f64,
    },
    /// Reconstruct named vectors (all of them by default) from the frame.
    Reconstruct {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        recon_tol: f64,
    },
    /// Image of the frame under a named operator U, or under I + U.
    Image {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        op: String,
        /// Apply I + U instead of U.
        #[arg(long)]
        perturb: bool,
        #[arg(long, default_value_t = 1e-10)]
        conj_tol: f64,
    },
    /// {L1 f_i + L2 g_i} for the frame and the second frame.
    Combine {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
    },
    /// Run every property suite on random instances.
    Certify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        sup_samples: usize,
        #[arg(long, default_value_t = 1000)]
        oracle_samples: usize,
    },
}

/// What the binary prints and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Option<Report>,
    pub error: Option<String>,
}

impl Outcome {
    pub fn render(&self, table: bool) -> Option<String> {
        self.report
            .as_ref()
            .map(|r| if table { r.to_table() } else { r.to_json() })
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NumericalInstability { .. }
        | Error::SingularFrameOperator { .. }
        | Error::Generation { .. } => 1,
        _ => 2,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = std::time::Instant::now();
    match commands::dispatch(&cli.command) {
        Ok(mut report) => {
            report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let exit_code = if report.all_verdicts() { 0 } else { 1 };
            Outcome {
                exit_code,
                report: Some(report),
                error: None,
            }
        }
        Err(e) => Outcome {
            exit_code: exit_code_for(&e),
            report: None,
            error: Some(e.to_string()),
        },
    }
}
