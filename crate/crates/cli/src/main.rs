use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orthospeed::config::EngineName;
use orthospeed::verify::{run_battery, VerifyOptions};
use orthospeed::{cmd_device, cmd_simulate, cmd_sweep, device_json, format_device, CliError, CliResult, RunConfig};
use orthospeed_core::device::DeviceParams;
use orthospeed_core::propagator::RabiConvention;
use orthospeed_core::with_threads;

#[derive(Parser)]
#[command(name = "orthospeed", version, about = "Orthogonality events and speed of a qubit coupled to a cavity mode")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run: trace and events CSV
    Simulate(RunArgs),
    /// One summary row per axis value
    Sweep(RunArgs),
    /// Built-in verification battery
    Verify(VerifyArgs),
    /// Map circuit parameters to g and delta
    Device(DeviceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    #[value(name = "closed_form")]
    ClosedForm,
    Oracle,
    Both,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dotted-path override, e.g. model.g=0.25 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long, value_enum)]
    engine: Option<EngineArg>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Sqrt,
    Squared,
}

#[derive(Args)]
struct VerifyArgs {
    /// Rabi frequency convention fed to the closed-form checks
    #[arg(long, value_enum, default_value = "sqrt")]
    omega_convention: ConventionArg,
    /// Grid step of the completeness scan
    #[arg(long, default_value_t = 0.005)]
    dt: f64,
    #[arg(long, default_value_t = 200)]
    draws: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DeviceArgs {
    /// Gate capacitance (F)
    #[arg(long)]
    c_g: f64,
    /// Junction capacitance (F)
    #[arg(long)]
    c_j: f64,
    /// Field (resonator) capacitance (F)
    #[arg(long)]
    c_f: f64,
    /// Josephson energy (J)
    #[arg(long)]
    e_j: f64,
    /// Field angular frequency (rad/s)
    #[arg(long)]
    omega: f64,
    #[arg(long)]
    json: bool,
}

fn load_config(args: &RunArgs) -> CliResult<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_overrides(&args.overrides)?;
    if let Some(engine) = args.engine {
        cfg.engine = match engine {
            EngineArg::ClosedForm => EngineName::ClosedForm,
            EngineArg::Oracle => EngineName::Oracle,
            EngineArg::Both => EngineName::Both,
        };
    }
    Ok(cfg)
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Simulate(args) => {
            let out = cmd_simulate(&load_config(&args)?, &args.out)?;
            let r = &out.cell.report;
            println!("wrote {} and {}", out.trace_path.display(), out.events_path.display());
            if let Some(p) = &out.plot_path {
                println!("wrote {}", p.display());
            }
            println!(
                "counts [[{}, {}], [{}, {}]], total {}, speed {:.6}",
                r.counts[0][0], r.counts[0][1], r.counts[1][0], r.counts[1][1], r.total_events, r.speed
            );
            if let Some(dev) = out.cell.max_oracle_dev() {
                println!("max |rho_closed - rho_oracle| = {dev:.3e}");
            }
        }
        Command::Sweep(args) => {
            let (entries, path) = cmd_sweep(&load_config(&args)?, &args.out)?;
            for e in &entries {
                println!("{:>12} total {:>4}  speed {:.6}", e.value, e.report.total_events, e.report.speed);
            }
            println!("wrote {}", path.display());
        }
        Command::Verify(args) => {
            let mut opts = VerifyOptions {
                convention: match args.omega_convention {
                    ConventionArg::Sqrt => RabiConvention::SquareRoot,
                    ConventionArg::Squared => RabiConvention::Squared,
                },
                dt: args.dt,
                draws: args.draws,
                ..VerifyOptions::default()
            };
            if let Some(seed) = args.seed {
                opts.seed = seed;
            }
            if !(opts.dt > 0.0 && opts.dt.is_finite()) || opts.draws == 0 {
                return Err(CliError::Validation("verify needs dt > 0 and at least one draw".into()));
            }
            let report = run_battery(&opts);
            print!("{}", report.table());
            if !report.all_hard_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Device(args) => {
            let dev = DeviceParams::new(args.c_g, args.c_j, args.c_f, args.e_j, args.omega)?;
            let report = cmd_device(&dev)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&device_json(&report)).expect("json"));
            } else {
                print!("{}", format_device(&dev, &report));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn threads_from_env() -> CliResult<Option<usize>> {
    match std::env::var("ORTHOSPEED_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Validation(format!("ORTHOSPEED_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = threads_from_env().and_then(|threads| match threads {
        Some(n) => with_threads(n, || run(cli.command)).map_err(CliError::from).and_then(|r| r),
        None => run(cli.command),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
