use clap::{Args, Parser, Subcommand};
use lubgap_cli::commands::{constants_table, phi_table};
use lubgap_cli::config::{ConfigError, Mode, RunConfig};
use lubgap_cli::report::run_force;
use lubgap_cli::verify::{run_suite, Suite};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 1;
const EXIT_COMPUTE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lubgap",
    version,
    about = "Lubrication forces between nearly touching particles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the gamma coefficients and expansion coefficients for one m.
    Constants {
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[arg(long = "big-r", default_value_t = 1.0)]
        big_r: f64,
    },
    /// Evaluate the integral of t^j / (eps + t^m)^i over [0, r].
    Phi {
        #[arg(long)]
        i: f64,
        #[arg(long)]
        j: f64,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        eps: f64,
    },
    /// Force and torque at the configured epsilon (or over its sweep).
    Force(RunArgs),
    /// Force and torque over the configured epsilon sweep.
    Sweep(RunArgs),
    /// Run a property suite; exits with status 3 if any check fails.
    Verify {
        suite: Suite,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Single epsilon; replaces any sweep in the config.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    override_flat_hypothesis: bool,
}

fn load(args: &RunArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if let Some(eps) = args.eps {
        cfg.problem = cfg.problem.with_eps(eps);
        cfg.sweep = None;
    }
    if let Some(p) = &args.out_csv {
        cfg.outputs.csv = Some(p.clone());
    }
    if let Some(p) = &args.out_json {
        cfg.outputs.json = Some(p.clone());
    }
    if args.override_flat_hypothesis {
        cfg.asymptotic.override_flat_hypothesis = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> Result<(), ExitCode> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_COMPUTE)
    })
}

fn emit(cfg: &RunConfig, csv: &str, json: &str) -> Result<(), ExitCode> {
    let out = &cfg.outputs;
    if let Some(p) = &out.csv {
        write(p, csv)?;
    }
    if let Some(p) = &out.json {
        write(p, json)?;
    }
    if out.csv.is_none() && out.json.is_none() {
        print!("{csv}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    let config_err = |e: ConfigError| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_CONFIG)
    };
    let compute_err = |e: lubgap::Error| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_COMPUTE)
    };
    match cli.command {
        Command::Constants { m, mu, r, big_r } => {
            print!("{}", constants_table(m, mu, r, big_r).map_err(compute_err)?);
        }
        Command::Phi { i, j, m, r, eps } => {
            print!("{}", phi_table(i, j, m, r, eps).map_err(compute_err)?);
        }
        Command::Force(args) => {
            let cfg = load(&args).map_err(config_err)?;
            report(&cfg)?;
        }
        Command::Sweep(args) => {
            let cfg = load(&args).map_err(config_err)?;
            if cfg.sweep.is_none() {
                eprintln!("error: invalid `sweep`: the config has no [sweep] section");
                return Err(ExitCode::from(EXIT_CONFIG));
            }
            report(&cfg)?;
        }
        Command::Verify { suite, run } => {
            let cfg = load(&run).map_err(config_err)?;
            let outcome = run_suite(suite, &cfg).map_err(compute_err)?;
            let passed = outcome.passed;
            for c in &outcome.checks {
                eprintln!(
                    "{} {}: measured {:e}, tolerance {:e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance
                );
            }
            let mut rep = run_force(&cfg);
            rep.verification = Some(outcome);
            emit(&cfg, &rep.to_csv(), &rep.to_json())?;
            if !passed {
                return Err(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(())
}

fn report(cfg: &RunConfig) -> Result<(), ExitCode> {
    let rep = run_force(cfg);
    emit(cfg, &rep.to_csv(), &rep.to_json())?;
    for e in &rep.errors {
        eprintln!("error at eps={:e}: {}", e.eps, e.message);
    }
    if rep.has_errors() {
        return Err(ExitCode::from(EXIT_COMPUTE));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
