//! `aniso-emit`: spontaneous emission rates of dipoles in anisotropic
//! dielectrics.
//!
//! Subcommands: `rate` (single point), `angular` (uniaxial emission pattern),
//! `sweep` (permittivity sweeps as CSV), `greens` (route cross-check) and
//! `validate` (full invariant suite). Every command accepts `--config FILE`
//! with the same keys as the long flags; flags win over file entries.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{Method, OutputFormat};
use config::{ConfigError, ConfigFile};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "aniso-emit",
    version,
    about = "Spontaneous emission rates of dipoles in anisotropic dielectrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emission rate for one medium and dipole
    Rate(RateArgs),
    /// Angular distribution f(theta) of an axis-parallel dipole (uniaxial)
    Angular(AngularArgs),
    /// Sweep one permittivity axis; emits numeric/model/closed rates
    Sweep(SweepArgs),
    /// Cross-check the golden-rule and Green's-function routes
    Greens(GreensArgs),
    /// Run the seeded invariant suite
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Closed,
    Numeric,
    Model,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Csv,
    Json,
}

#[derive(Args)]
struct MediumArgs {
    /// Relative permittivities as eps_x,eps_y,eps_z
    #[arg(long)]
    eps: Option<String>,
    /// Override / supply eps_x individually
    #[arg(long)]
    eps_x: Option<f64>,
    /// Override / supply eps_y individually
    #[arg(long)]
    eps_y: Option<f64>,
    /// Override / supply eps_z individually
    #[arg(long)]
    eps_z: Option<f64>,
}

#[derive(Args)]
struct IoArgs {
    /// Output format (default: json for rate/greens/validate, csv otherwise)
    #[arg(long, value_enum)]
    output: Option<OutputArg>,
    /// Write output to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; explicit flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    medium: MediumArgs,
    /// Dipole direction x,y,z (auto-normalized; default 0,0,1)
    #[arg(long)]
    dipole: Option<String>,
    /// Lab-to-crystal rotation, nine row-major numbers
    #[arg(long)]
    frame: Option<String>,
    /// Evaluation method
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Diagonal local-field correction L1,L2,L3
    #[arg(long)]
    local_field: Option<String>,
    /// Quadrature relative tolerance (flag > config > ANISO_EMIT_TOL > 1e-10)
    #[arg(long)]
    tol: Option<f64>,
    /// Also report absolute SI rates (needs --omega and --dipole-si)
    #[arg(long)]
    si: bool,
    /// Transition angular frequency in rad/s (with --si)
    #[arg(long)]
    omega: Option<f64>,
    /// Dipole moment magnitude in C*m (with --si)
    #[arg(long)]
    dipole_si: Option<f64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct AngularArgs {
    #[command(flatten)]
    medium: MediumArgs,
    /// Number of theta samples over [0, theta-max]
    #[arg(long)]
    samples: Option<usize>,
    /// Upper theta bound in radians ("deg" suffix for degrees; default pi)
    #[arg(long)]
    theta_max: Option<String>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    medium: MediumArgs,
    /// Axis to sweep: eps_x, eps_y or eps_z
    #[arg(long)]
    sweep: Option<String>,
    /// Sweep range as start:stop:count
    #[arg(long)]
    range: Option<String>,
    /// Dipole direction x,y,z (default 0,0,1)
    #[arg(long)]
    dipole: Option<String>,
    /// Quadrature relative tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct GreensArgs {
    #[command(flatten)]
    medium: MediumArgs,
    /// Dipole direction x,y,z (default 0,0,1)
    #[arg(long)]
    dipole: Option<String>,
    /// Quadrature relative tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Seed for the sampled checks
    #[arg(long)]
    seed: Option<u64>,
    /// Append a synthetic failing check (harness self-test)
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    io: IoArgs,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn load_config(io: &IoArgs) -> Result<ConfigFile, ConfigError> {
    match &io.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

fn merge_eps(medium: &MediumArgs, file: &ConfigFile) -> Result<MergedEps, ConfigError> {
    let eps = match &medium.eps {
        Some(text) => Some(config::parse_triple(text, "--eps")?),
        None => file.eps,
    };
    Ok(MergedEps {
        eps,
        eps_x: medium.eps_x.or(file.eps_x),
        eps_y: medium.eps_y.or(file.eps_y),
        eps_z: medium.eps_z.or(file.eps_z),
    })
}

struct MergedEps {
    eps: Option<[f64; 3]>,
    eps_x: Option<f64>,
    eps_y: Option<f64>,
    eps_z: Option<f64>,
}

impl MergedEps {
    fn resolve(&self) -> Result<aniso_emit::PermittivityTensor, ConfigError> {
        config::resolve_eps(self.eps, self.eps_x, self.eps_y, self.eps_z, None)
    }

    fn resolve_with_fill(
        &self,
        fill: (usize, f64),
    ) -> Result<aniso_emit::PermittivityTensor, ConfigError> {
        config::resolve_eps(self.eps, self.eps_x, self.eps_y, self.eps_z, Some(fill))
    }
}

fn merge_dipole(flag: &Option<String>, file: &ConfigFile) -> Result<[f64; 3], ConfigError> {
    match flag {
        Some(text) => config::parse_triple(text, "--dipole"),
        None => Ok(file.dipole.unwrap_or([0.0, 0.0, 1.0])),
    }
}

fn merge_output(
    flag: Option<OutputArg>,
    file: &ConfigFile,
    default: OutputFormat,
) -> Result<OutputFormat, ConfigError> {
    if let Some(f) = flag {
        return Ok(match f {
            OutputArg::Csv => OutputFormat::Csv,
            OutputArg::Json => OutputFormat::Json,
        });
    }
    match file.output.as_deref() {
        None => Ok(default),
        Some("csv") => Ok(OutputFormat::Csv),
        Some("json") => Ok(OutputFormat::Json),
        Some(other) => Err(ConfigError(format!("unknown output format `{other}`"))),
    }
}

fn merge_out(io: &IoArgs, file: &ConfigFile) -> Option<PathBuf> {
    io.out.clone().or_else(|| file.out.as_ref().map(PathBuf::from))
}

fn run(cli: Cli) -> Result<i32, ConfigError> {
    match cli.command {
        Command::Rate(args) => {
            let file = load_config(&args.io)?;
            let eps = merge_eps(&args.medium, &file)?.resolve()?;
            let dipole = config::resolve_dipole(Some(merge_dipole(&args.dipole, &file)?))?;
            let frame_vals = match &args.frame {
                Some(text) => Some(
                    text.split(',')
                        .map(|p| {
                            p.trim().parse::<f64>().map_err(|_| {
                                ConfigError(format!("--frame: `{p}` is not a number"))
                            })
                        })
                        .collect::<Result<Vec<f64>, _>>()?,
                ),
                None => file.frame.clone(),
            };
            let frame = config::resolve_frame(frame_vals)?;
            let method = match args.method {
                Some(MethodArg::Auto) => Method::Auto,
                Some(MethodArg::Closed) => Method::Closed,
                Some(MethodArg::Numeric) => Method::Numeric,
                Some(MethodArg::Model) => Method::Model,
                None => match file.method.as_deref() {
                    None | Some("auto") => Method::Auto,
                    Some("closed") => Method::Closed,
                    Some("numeric") => Method::Numeric,
                    Some("model") => Method::Model,
                    Some(other) => {
                        return Err(ConfigError(format!("unknown method `{other}`")))
                    }
                },
            };
            let local_field = match &args.local_field {
                Some(text) => {
                    config::resolve_local_field(Some(config::parse_triple(text, "--local-field")?))?
                }
                None => config::resolve_local_field(file.local_field)?,
            };
            let tol = config::resolve_tolerance(args.tol, file.tol)?;
            let si_requested = args.si || file.si.unwrap_or(false);
            let si = if si_requested {
                let omega = args.omega.or(file.omega).ok_or_else(|| {
                    ConfigError("--si needs --omega (rad/s)".into())
                })?;
                let d = args.dipole_si.or(file.dipole_si).ok_or_else(|| {
                    ConfigError("--si needs --dipole-si (C*m)".into())
                })?;
                Some(
                    aniso_emit::PhysicalContext::new(omega, d)
                        .map_err(|e| ConfigError(format!("invalid SI context: {e}")))?,
                )
            } else {
                None
            };
            let output = merge_output(args.io.output, &file, OutputFormat::Json)?;
            let out = merge_out(&args.io, &file);
            commands::cmd_rate(commands::RateInputs {
                eps,
                dipole_lab: dipole,
                frame,
                method,
                local_field,
                tol,
                si,
                output,
                out,
            })
        }
        Command::Angular(args) => {
            let file = load_config(&args.io)?;
            let eps = merge_eps(&args.medium, &file)?.resolve()?;
            let samples = args.samples.or(file.samples).unwrap_or(181);
            let theta_max = match args.theta_max.as_deref().or(file.theta_max.as_deref()) {
                Some(text) => config::parse_angle(text)?,
                None => std::f64::consts::PI,
            };
            let output = merge_output(args.io.output, &file, OutputFormat::Csv)?;
            let out = merge_out(&args.io, &file);
            commands::cmd_angular(commands::AngularInputs { eps, samples, theta_max, output, out })
        }
        Command::Sweep(args) => {
            let file = load_config(&args.io)?;
            let axis_name = args
                .sweep
                .clone()
                .or_else(|| file.sweep.clone())
                .ok_or_else(|| ConfigError("sweep needs --sweep <eps_x|eps_y|eps_z>".into()))?;
            let axis = match axis_name.as_str() {
                "eps_x" => 0,
                "eps_y" => 1,
                "eps_z" => 2,
                other => {
                    return Err(ConfigError(format!(
                        "unknown sweep axis `{other}` (expected eps_x, eps_y or eps_z)"
                    )))
                }
            };
            let range_text = args
                .range
                .clone()
                .or_else(|| file.range.clone())
                .ok_or_else(|| ConfigError("sweep needs --range start:stop:count".into()))?;
            let (start, stop, count) = config::parse_range(&range_text)?;
            let base_eps = merge_eps(&args.medium, &file)?.resolve_with_fill((axis, start))?;
            let dipole = config::resolve_dipole(Some(merge_dipole(&args.dipole, &file)?))?;
            let tol = config::resolve_tolerance(args.tol, file.tol)?;
            let output = merge_output(args.io.output, &file, OutputFormat::Csv)?;
            let out = merge_out(&args.io, &file);
            commands::cmd_sweep(commands::SweepInputs {
                base_eps,
                axis,
                values: config::linspace(start, stop, count),
                dipole,
                tol,
                output,
                out,
            })
        }
        Command::Greens(args) => {
            let file = load_config(&args.io)?;
            let eps = merge_eps(&args.medium, &file)?.resolve()?;
            let dipole = config::resolve_dipole(Some(merge_dipole(&args.dipole, &file)?))?;
            let tol = config::resolve_tolerance(args.tol, file.tol)?;
            let output = merge_output(args.io.output, &file, OutputFormat::Json)?;
            let out = merge_out(&args.io, &file);
            commands::cmd_greens(commands::GreensInputs { eps, dipole, tol, output, out })
        }
        Command::Validate(args) => {
            let file = load_config(&args.io)?;
            let seed = args.seed.or(file.seed).unwrap_or(42);
            let output = merge_output(args.io.output, &file, OutputFormat::Json)?;
            let out = merge_out(&args.io, &file);
            commands::cmd_validate(commands::ValidateInputs {
                seed,
                inject_fault: args.inject_fault,
                output,
                out,
            })
        }
    }
}
