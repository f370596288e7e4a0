//! Command-line driver: `conesep <task> --scene <file> [--out <file>]
//! [--samples N] [--seed S]`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conesep::scene::{execute, exit_code_for, report_to_json, Scene, Task};

#[derive(Parser)]
#[command(
    name = "conesep",
    version,
    about = "Strict separation of cones by Bishop-Phelps cones, with machine-checkable certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Scene file (JSON).
    #[arg(long)]
    scene: PathBuf,
    /// Output file for the report (export-plot: the CSV). Defaults to stdout
    /// for reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verification sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Seed override for all sampling.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the necessary separation conditions and hull geometry.
    Analyze(Common),
    /// Decide strict separation and construct a certificate.
    Separate(Common),
    /// Verify a certificate supplied in the scene file.
    Certify(Common),
    /// Cross-validate the exact routines against the grid oracles.
    OracleCheck(Common),
    /// Emit 2D plot data (CSV) for the scene.
    ExportPlot(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, common) = match &cli.cmd {
        Cmd::Analyze(c) => (Task::Analyze, c),
        Cmd::Separate(c) => (Task::Separate, c),
        Cmd::Certify(c) => (Task::Certify, c),
        Cmd::OracleCheck(c) => (Task::OracleCheck, c),
        Cmd::ExportPlot(c) => (Task::ExportPlot, c),
    };

    let scene = match Scene::from_file(&common.scene) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("conesep: cannot load scene: {e}");
            return ExitCode::from(2);
        }
    };

    if task == Task::ExportPlot && common.out.is_none() {
        eprintln!("conesep: export-plot requires --out <csv-file>");
        return ExitCode::from(2);
    }
    let plot_out = (task == Task::ExportPlot)
        .then(|| common.out.clone())
        .flatten();

    match execute(&scene, Some(task), common.samples, common.seed, plot_out.as_deref()) {
        Ok((report, code)) => {
            let json = match report_to_json(&report) {
                Ok(j) => j,
                Err(e) => {
                    eprintln!("conesep: cannot serialize report: {e}");
                    return ExitCode::from(4);
                }
            };
            // Reports go to --out unless that slot is taken by the plot CSV.
            let report_target = if task == Task::ExportPlot {
                None
            } else {
                common.out.clone()
            };
            match report_target {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json) {
                        eprintln!("conesep: cannot write report: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{json}"),
            }
            ExitCode::from(u8::try_from(code).unwrap_or(4))
        }
        Err(e) => {
            eprintln!("conesep: {e}");
            ExitCode::from(u8::try_from(exit_code_for(&e)).unwrap_or(2))
        }
    }
}
