use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use heisqc::{
    cmd_lift, cmd_map, cmd_modulus, cmd_verify, family_param_list, parse_checks, CliResult,
    LiftArgs, MapArgs, MapSpec, ModulusArgs, VerifyArgs,
};

/// Moduli of curve families and extremal quasiconformal maps on the
/// Heisenberg group. JSON reports go to stdout, diagnostics to stderr,
/// sample dumps to CSV files.
#[derive(Parser)]
#[command(name = "heisqc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form modulus of a family, with numerically integrated energy
    /// and an admissibility scan of the extremal density.
    Modulus(ModulusCli),
    /// Build an explicit map, sample it to CSV, report K_max and the mean
    /// distortion.
    Map(MapCli),
    /// Run named residual checks against a map; exits 1 if any fails.
    Verify(VerifyCli),
    /// End-to-end lift pipeline from a JSON problem description.
    Lift(LiftCli),
}

#[derive(Args)]
struct ModulusCli {
    /// One of: cylinder_horizontal, rectangle_horizontal, cylinder_vertical,
    /// annulus_radial.
    #[arg(long)]
    family: String,
    #[arg(long)]
    a: f64,
    /// Required for the two-parameter families.
    #[arg(long)]
    b: Option<f64>,
    /// Simpson grid resolution per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Relative tolerance for the energy vs the closed form.
    #[arg(long, default_value_t = 1e-3)]
    tol_energy: f64,
    /// Dump one family curve as CSV rows (s, Re z, Im z, t).
    #[arg(long)]
    dump_curve: Option<PathBuf>,
    /// First parameter of the dumped curve.
    #[arg(long, default_value_t = 0.5)]
    lambda1: f64,
    /// Second parameter of the dumped curve.
    #[arg(long, default_value_t = 0.0)]
    lambda2: f64,
}

#[derive(Args)]
struct MapCli {
    /// cylinder | annuli | identity
    map: String,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    ap: f64,
    #[arg(long, default_value_t = 2.0)]
    bp: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    /// Distortion exponent of the annuli map.
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    /// CSV output path for map samples.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Args)]
struct VerifyCli {
    /// cylinder | annuli | identity
    #[arg(long)]
    map: String,
    /// Comma-separated: contact,pushforward,meandist,commutation,norm
    #[arg(long)]
    checks: String,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    ap: f64,
    #[arg(long, default_value_t = 2.0)]
    bp: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    k: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1e-5)]
    tol_contact: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_pushforward: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol_meandist: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_commutation: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_norm: f64,
}

#[derive(Args)]
struct LiftCli {
    /// JSON problem description:
    /// {a, b, a_p, b_p, phi:{name,params}, psi:{name,params}, ode:{...}, alpha}
    config: PathBuf,
    /// Directory for profile.csv, potential.csv, map_samples.csv.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

fn map_spec(name: &str, a: f64, b: f64, ap: f64, bp: f64, alpha: f64, k: f64) -> CliResult<MapSpec> {
    match name {
        "cylinder" => Ok(MapSpec::Cylinder { a, b, ap, bp, alpha }),
        "annuli" => Ok(MapSpec::Annuli { a, k }),
        "identity" => Ok(MapSpec::Identity { a, b }),
        other => Err(heisqc::CliError::Schema(format!("unknown map '{other}'"))),
    }
}

fn run() -> CliResult<()> {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Modulus(m) => {
            let params = family_param_list(&m.family, m.a, m.b)?;
            cmd_modulus(&ModulusArgs {
                family: m.family,
                params,
                grid: m.grid,
                tol_energy: m.tol_energy,
                dump_curve: m.dump_curve,
                lambda: [m.lambda1, m.lambda2],
            })?
        }
        Command::Map(m) => {
            let spec = map_spec(&m.map, m.a, m.b, m.ap, m.bp, m.alpha, m.k)?;
            cmd_map(&MapArgs { spec, out: m.out, grid: m.grid, samples: m.samples, seed: m.seed })?
        }
        Command::Verify(v) => {
            let spec = map_spec(&v.map, v.a, v.b, v.ap, v.bp, v.alpha, v.k)?;
            cmd_verify(&VerifyArgs {
                spec,
                checks: parse_checks(&v.checks),
                samples: v.samples,
                seed: v.seed,
                tol_contact: v.tol_contact,
                tol_pushforward: v.tol_pushforward,
                tol_meandist: v.tol_meandist,
                tol_commutation: v.tol_commutation,
                tol_norm: v.tol_norm,
            })?
        }
        Command::Lift(l) => cmd_lift(&LiftArgs {
            config_path: l.config,
            out_dir: l.out_dir,
            samples: l.samples,
            seed: l.seed,
        })?,
    };
    report.print();
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
