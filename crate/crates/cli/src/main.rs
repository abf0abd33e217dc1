use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use gradient_echo::analytic::AnalyticParams;
use gradient_echo::builtin;
use gradient_echo::config::to_toml;
use gradient_echo::metrics::RB87_D2_LIFETIME_S;
use gradient_echo_cli::{
    cmd_analytic, cmd_compare, cmd_feasibility, cmd_run, cmd_sweep, feasibility_text, load_scenario,
    CliError, CliResult, GridOverride, SweepOptions, SweepRun,
};

/// Gradient photon echo simulator for a three-level Λ medium.
#[derive(Parser)]
#[command(name = "gecho", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a built-in scenario or a TOML config.
    Run {
        scenario: String,
        #[arg(long, short, default_value = "out")]
        output: PathBuf,
        /// e.g. `nz=2048,dt=1e-10`
        #[arg(long)]
        grid_override: Option<String>,
    },
    /// Run a parameter sweep (built-in name or spec file).
    Sweep {
        spec: String,
        #[arg(long, short, default_value = "out")]
        output: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Continue from the checkpoint left by an interrupted run.
        #[arg(long)]
        resume: bool,
    },
    /// Compare the solver with the closed forms for a constant control.
    Compare {
        scenario: String,
        #[arg(long, short, default_value = "out")]
        output: PathBuf,
        #[arg(long)]
        grid_override: Option<String>,
    },
    /// Print closed-form curves as CSV.
    Analytic {
        /// Control Rabi frequency in Γ.
        #[arg(long, default_value_t = 0.3)]
        omega_c: f64,
        /// Optical depth ξ; ηz = ξ·z/2 with Γ = L = 1.
        #[arg(long, default_value_t = 20.0)]
        xi: f64,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Laser requirements for a control gradient of strength b.
    Feasibility {
        #[arg(long, default_value_t = 1000.0)]
        b: f64,
        #[arg(long, default_value_t = 5.0)]
        length_cm: f64,
        #[arg(long, default_value_t = 780.0)]
        wavelength_nm: f64,
        #[arg(long, default_value_t = RB87_D2_LIFETIME_S)]
        lifetime_s: f64,
        #[arg(long)]
        json: bool,
    },
    /// List built-in scenarios and sweeps.
    List,
    /// Print a scenario in the config grammar.
    Show { scenario: String },
}

fn grid(o: &Option<String>) -> CliResult<GridOverride> {
    o.as_deref().map_or(Ok(GridOverride::default()), GridOverride::parse)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { scenario, output, grid_override } => {
            let out = cmd_run(&scenario, &output, &grid(&grid_override)?)?;
            for w in &out.manifest.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", serde_json::to_string_pretty(&out.metrics).map_err(|e| CliError::Usage(e.to_string()))?);
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
        }
        Command::Sweep { spec, output, workers, resume } => {
            match cmd_sweep(&spec, &output, &SweepOptions { workers, resume, stop_after: None })? {
                SweepRun::Complete { manifest, files, .. } => {
                    eprintln!(
                        "{} points ({} failed) in {:.1} s",
                        manifest.points, manifest.failures, manifest.wall_time_s
                    );
                    for f in &files {
                        eprintln!("wrote {}", f.display());
                    }
                }
                SweepRun::Interrupted { done, total, checkpoint } => {
                    eprintln!("stopped after {done}/{total} points; resume from {}", checkpoint.display());
                }
            }
        }
        Command::Compare { scenario, output, grid_override } => {
            let out = cmd_compare(&scenario, &output, &grid(&grid_override)?)?;
            println!("{}", serde_json::to_string_pretty(&out.report).map_err(|e| CliError::Usage(e.to_string()))?);
        }
        Command::Analytic { omega_c, xi, z, t_max, points, output } => {
            let p = AnalyticParams {
                omega_c,
                eta_z: 0.5 * xi * z,
                gamma_decay: 1.0,
                probe_amp: Complex64::new(1.0, 0.0),
            };
            let csv = cmd_analytic(&p, t_max, points)?;
            match output {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Feasibility { b, length_cm, wavelength_nm, lifetime_s, json } => {
            let (g, p) = cmd_feasibility(b, length_cm, wavelength_nm, lifetime_s)?;
            if json {
                let v = serde_json::json!({ "gaussian_beam": g, "perpendicular": p });
                println!("{}", serde_json::to_string_pretty(&v).map_err(|e| CliError::Usage(e.to_string()))?);
            } else {
                print!("{}", feasibility_text(&g, &p));
            }
        }
        Command::List => {
            for name in builtin::SCENARIO_NAMES {
                println!("{name:<14} {}", builtin::note(name).unwrap_or(""));
            }
            for name in builtin::SWEEP_NAMES {
                println!("{name:<14} sweep");
            }
        }
        Command::Show { scenario } => {
            let l = load_scenario(&scenario)?;
            print!("{}", to_toml(&l.scenario, l.description.as_deref()));
        }
    }
    Ok(())
}
