use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dual_lorentz_motion::commands::{self, Command, Format, SweepOptions};
use dual_lorentz_motion::config::load_config;
use dual_lorentz_motion::verify::run_verify;
use dual_lorentz_motion::DualVec3;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ALL_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "dlmotion", version, about = "Kinematics of dual Lorentzian homothetic exponential motions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Motion configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Derivative order of Y for `evaluate`.
    #[arg(long, default_value_t = 0)]
    order: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Degeneracy tolerance for `centers`.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Index into the config's `points`; the origin is used when the list is empty.
    #[arg(long, default_value_t = 0)]
    point: usize,
    /// Evaluate nodes on a single thread.
    #[arg(long)]
    serial: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Y(t) = H X + C, or its derivative of order --order.
    Evaluate(SweepArgs),
    /// Absolute, sliding and relative velocities.
    Velocities(SweepArgs),
    /// Pole points in the moving and fixed frames.
    Poles(SweepArgs),
    /// Absolute, sliding, relative and Coriolis accelerations.
    Accel(SweepArgs),
    /// Acceleration centres or degeneracy classification.
    Centers(SweepArgs),
    /// Run the randomized invariant suite.
    Verify {
        /// Check this motion instead of random ones in the motion-based groups.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t1: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), ExitCode> {
    let res = match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| {
        eprintln!("error: cannot write output: {e}");
        ExitCode::from(EXIT_CONFIG)
    })
}

fn sweep(command: Command, args: SweepArgs) -> Result<ExitCode, ExitCode> {
    let cfg = load_config(&args.config).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_CONFIG)
    })?;
    if !(args.t0.is_finite() && args.t1.is_finite()) || (args.samples > 1 && args.t1 <= args.t0) {
        eprintln!("error: require finite t0 < t1 when sampling more than one node");
        return Err(ExitCode::from(EXIT_CONFIG));
    }
    let x = match cfg.points.get(args.point) {
        Some(p) => *p,
        None if cfg.points.is_empty() && args.point == 0 => DualVec3::ZERO,
        None => {
            eprintln!("error: --point {} out of range ({} points)", args.point, cfg.points.len());
            return Err(ExitCode::from(EXIT_CONFIG));
        }
    };
    let opts = SweepOptions {
        t0: args.t0,
        t1: args.t1,
        samples: args.samples,
        order: args.order,
        tol: args.tol,
        parallel: !args.serial,
    };
    let table = commands::run(&cfg.motion, &x, command, &opts);
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    emit(args.out.as_ref(), &table.render(format))?;
    if table.all_failed() {
        eprintln!("error: every node failed");
        return Ok(ExitCode::from(EXIT_ALL_FAILED));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Evaluate(a) => sweep(Command::Evaluate, a),
        Cmd::Velocities(a) => sweep(Command::Velocities, a),
        Cmd::Poles(a) => sweep(Command::Poles, a),
        Cmd::Accel(a) => sweep(Command::Accel, a),
        Cmd::Centers(a) => sweep(Command::Centers, a),
        Cmd::Verify {
            config,
            tol,
            seed,
            t0,
            t1,
            out,
        } => (|| {
            let motion = match config {
                Some(p) => Some(
                    load_config(&p)
                        .map_err(|e| {
                            eprintln!("error: {e}");
                            ExitCode::from(EXIT_CONFIG)
                        })?
                        .motion,
                ),
                None => None,
            };
            let report = run_verify(seed, tol, motion.as_ref(), (t0, t1));
            emit(out.as_ref(), &report.to_string())?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY_FAILED)
            })
        })(),
    };
    result.unwrap_or_else(|code| code)
}
