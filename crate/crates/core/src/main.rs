use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wigner_epr::error::Error;
use wigner_epr::kinematics::Rapidity;
use wigner_epr::sweep::check::{self_check, Perturbation};
use wigner_epr::sweep::config::{parse_bool, parse_config};
use wigner_epr::sweep::figures::{emit_figure_data, gnuplot_script, FigureId, DEFAULT_STEPS};
use wigner_epr::sweep::format::{OutputFormat, RowWriter};
use wigner_epr::sweep::{parse_scalar, run_sweep, EntropyKind, GridRange, SweepConfig, DEFAULT_V_MAX};

const DEFAULT_ALPHA: &str = "0.1:atanh(0.999):100";
const DEFAULT_THETA: &str = "0.1:pi:100";

#[derive(Parser)]
#[command(name = "wigner-epr", version, about = "Entropy of boosted EPR spin pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an entropy over an (alpha, theta) grid.
    Sweep(SweepArgs),
    /// Write the data table (and a gnuplot script) for one of the figures.
    Figure(FigureArgs),
    /// Run the self-check suite.
    Check(CheckArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// vn, shannon or vn-indist
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    p1: Option<String>,
    /// Ejection speed in (0, 1).
    #[arg(long, conflicts_with = "phi")]
    phi_v: Option<String>,
    /// Ejection rapidity.
    #[arg(long)]
    phi: Option<String>,
    /// Boost rapidity grid `lo:hi:steps` (`pi` and `atanh(x)` allowed).
    #[arg(long)]
    alpha: Option<String>,
    /// Angle grid `lo:hi:steps`.
    #[arg(long)]
    theta: Option<String>,
    /// Report the Shannon entropy minus the constant 1 bit.
    #[arg(long)]
    renormalize_shannon: bool,
    /// csv or jsonl
    #[arg(long)]
    format: Option<String>,
    /// Output file (standard output if absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig2 .. fig9
    figure: String,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Ejection speed used for phi and the upper end of alpha.
    #[arg(long, default_value_t = DEFAULT_V_MAX)]
    v_max: f64,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the gnuplot script. Defaults to the output path with a
    /// `.gp` extension when `--out` is given.
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Corrupt a kernel on purpose (flip-b-sign) to exercise the checks.
    #[arg(long)]
    perturb: Option<String>,
}

/// Failures are either bad input (exit 2) or failed properties (exit 1).
enum Failure {
    Usage(String),
    Property(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::ContractViolation(_) => Failure::Property(e.to_string()),
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Property(format!("I/O error: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Figure(args) => figure(args),
        Command::Check(args) => check(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Property(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn pick(file: &mut BTreeMap<String, String>, flag: &Option<String>, key: &str) -> Option<String> {
    let from_file = file.remove(key);
    flag.clone().or(from_file)
}

fn resolve_sweep(args: &SweepArgs) -> Result<(SweepConfig, OutputFormat, Option<PathBuf>), Failure> {
    let mut file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };

    let kind: EntropyKind = pick(&mut file, &args.kind, "kind").as_deref().unwrap_or("vn").parse()?;
    let p1 = parse_scalar(pick(&mut file, &args.p1, "p1").as_deref().unwrap_or("0.5"))?;
    let (cfg_phi, cfg_phi_v) = (file.remove("phi"), file.remove("phi_v"));
    // a flag of either spelling beats a config entry of the other
    let phi = match (&args.phi, &args.phi_v) {
        (Some(r), _) => Rapidity::new(parse_scalar(r)?)?,
        (None, Some(v)) => Rapidity::from_velocity(parse_scalar(v)?)?,
        (None, None) => match (cfg_phi, cfg_phi_v) {
            (Some(_), Some(_)) => {
                return Err(Failure::Usage("config sets both phi and phi_v".into()))
            }
            (Some(r), None) => Rapidity::new(parse_scalar(&r)?)?,
            (None, Some(v)) => Rapidity::from_velocity(parse_scalar(&v)?)?,
            (None, None) => Rapidity::from_velocity(DEFAULT_V_MAX)?,
        },
    };
    let alpha: GridRange = pick(&mut file, &args.alpha, "alpha").as_deref().unwrap_or(DEFAULT_ALPHA).parse()?;
    let theta: GridRange = pick(&mut file, &args.theta, "theta").as_deref().unwrap_or(DEFAULT_THETA).parse()?;
    let renorm = match file.remove("renormalize_shannon") {
        _ if args.renormalize_shannon => true,
        Some(v) => parse_bool(&v)?,
        None => false,
    };
    let format: OutputFormat = pick(&mut file, &args.format, "format").as_deref().unwrap_or("csv").parse()?;
    let out = args.out.clone().or_else(|| file.remove("out").map(PathBuf::from));

    let config = SweepConfig {
        entropy_kind: kind,
        p1,
        phi,
        alpha_range: alpha,
        theta_range: theta,
        renormalize_shannon: renorm,
    };
    config.validate()?;
    Ok((config, format, out))
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let (config, format, out) = resolve_sweep(&args)?;
    let rows = run_sweep(&config)?;
    let mut writer = RowWriter::sweep(open_output(out.as_deref())?, format);
    writer.write_header().map_err(io_failure)?;
    for row in rows {
        writer.write_row(&row?).map_err(io_failure)?;
    }
    writer.finish().map_err(io_failure)?;
    Ok(())
}

fn figure(args: FigureArgs) -> Result<(), Failure> {
    let fig: FigureId = args.figure.parse()?;
    let format: OutputFormat = args.format.parse()?;
    // validate before touching any file
    fig.preset(args.steps, args.v_max)?;
    let out = open_output(args.out.as_deref())?;
    let (_, checks) = emit_figure_data(fig, args.steps, args.v_max, format, out)?;

    let script_path = args
        .plot_script
        .clone()
        .or_else(|| args.out.as_ref().map(|p| p.with_extension("gp")));
    if let Some(path) = script_path {
        let data = args
            .out
            .as_ref()
            .and_then(|p| p.file_name())
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("{fig}.csv"));
        std::fs::write(&path, gnuplot_script(fig, &data, args.steps))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut failed = 0;
    for c in &checks {
        eprintln!("{} {} (observed {:.6e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.observed);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(Failure::Property(format!("{failed} shape check(s) failed for {fig}")));
    }
    Ok(())
}

fn check(args: CheckArgs) -> Result<(), Failure> {
    let perturbation = match args.perturb.as_deref() {
        None | Some("none") => Perturbation::None,
        Some("flip-b-sign") => Perturbation::FlipBSign,
        Some(other) => {
            return Err(Failure::Usage(format!("unknown perturbation '{other}' (flip-b-sign)")))
        }
    };
    let report = self_check(perturbation);
    println!("{report}");
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Property("self-check failed".into()))
    }
}
