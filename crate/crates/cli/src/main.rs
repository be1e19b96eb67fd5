use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperideal::commands::{
    cmd_koebe, cmd_realize, cmd_simplex, cmd_validate, parse_angle, read_cellulation, KoebeArgs, Outcome,
    RealizeArgs, SimplexArgs,
};
use hyperideal::{CliError, Result};
use hyperideal_core::circles::KoebeOptions;
use hyperideal_core::solver::RealizeOptions;
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "hyperideal", version, about = "Hyperideal polyhedra from dihedral angles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Batch {
    /// Input cellulation documents. With several inputs, output paths are
    /// directories.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Number of inputs processed in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check the admissibility conditions of an angle assignment.
    Validate {
        #[command(flatten)]
        batch: Batch,
    },
    /// Realize the hyperideal polyhedron with the given angles.
    Realize {
        #[command(flatten)]
        batch: Batch,
        /// Realization document to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Circle drawing to write.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Reduced-gradient tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Tolerance of the gluing and geometry checks.
        #[arg(long, default_value_t = 1e-7)]
        geometry_tol: f64,
    },
    /// Continue all angles toward pi and emit the tangency limit.
    Koebe {
        #[command(flatten)]
        batch: Batch,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        /// Circle configuration document to write.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Report on a single simplex.
    Simplex {
        /// Exterior angles at the edges 12 13 14 23 24 34 (`2pi/3` allowed).
        #[arg(long, num_args = 6, allow_hyphen_values = true, conflicts_with = "regular")]
        angles: Option<Vec<String>>,
        /// Edge length of the regular strictly hyperideal simplex to test.
        #[arg(long)]
        regular: Option<f64>,
        /// Print matrices and gradients.
        #[arg(long)]
        report: bool,
        /// Read plain numbers in `--angles` as degrees.
        #[arg(long)]
        degrees: bool,
    },
}

/// Output path for `input` when `base` names a directory in batch mode.
fn output_for(base: &Option<PathBuf>, input: &Path, many: bool, suffix: &str) -> Option<PathBuf> {
    let base = base.as_ref()?;
    if !many {
        return Some(base.clone());
    }
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Some(base.join(format!("{stem}{suffix}")))
}

fn run_batch<F>(batch: &Batch, f: F) -> Vec<(PathBuf, Result<Outcome>)>
where
    F: Fn(&Path, bool) -> Result<Outcome> + Sync,
{
    let many = batch.inputs.len() > 1;
    let work = |p: &PathBuf| (p.clone(), f(p, many));
    if batch.jobs > 1 && many {
        match rayon::ThreadPoolBuilder::new().num_threads(batch.jobs).build() {
            Ok(pool) => return pool.install(|| batch.inputs.par_iter().map(work).collect()),
            Err(e) => log::warn!("thread pool unavailable ({e}); running sequentially"),
        }
    }
    batch.inputs.iter().map(work).collect()
}

fn finish(results: Vec<(PathBuf, Result<Outcome>)>) -> i32 {
    let many = results.len() > 1;
    let mut code = 0;
    for (path, r) in results {
        if many {
            println!("== {}", path.display());
        }
        match r {
            Ok(o) => {
                print!("{}", o.report);
                code = code.max(o.code);
            }
            Err(e) => {
                eprintln!("error: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    code
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { batch } => finish(run_batch(&batch, |p, _| cmd_validate(&read_cellulation(p)?))),
        Command::Realize { batch, out, svg, tol, max_iter, geometry_tol } => {
            let options = RealizeOptions { tol, max_iter, geometry_tol };
            finish(run_batch(&batch, |p, many| {
                let args = RealizeArgs {
                    out: output_for(&out, p, many, ".realization.json"),
                    svg: output_for(&svg, p, many, ".svg"),
                    options,
                };
                cmd_realize(&read_cellulation(p)?, &args).map(|(_, o)| o)
            }))
        }
        Command::Koebe { batch, steps, out, svg } => {
            let options = KoebeOptions { steps, ..KoebeOptions::default() };
            finish(run_batch(&batch, |p, many| {
                let args = KoebeArgs {
                    out: output_for(&out, p, many, ".circles.json"),
                    svg: output_for(&svg, p, many, ".svg"),
                    options,
                };
                cmd_koebe(&read_cellulation(p)?, &args)
            }))
        }
        Command::Simplex { angles, regular, report, degrees } => {
            let parsed: Result<Option<[f64; 6]>> = angles
                .map(|a| {
                    let v: Vec<f64> = a.iter().map(|s| parse_angle(s, degrees)).collect::<Result<_>>()?;
                    v.try_into().map_err(|_| CliError::Parse("--angles takes six values".into()))
                })
                .transpose();
            let r = parsed.and_then(|angles| cmd_simplex(&SimplexArgs { angles, regular, report }));
            finish(vec![(PathBuf::new(), r)])
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HYPERIDEAL_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(run(cli) as u8)
}
