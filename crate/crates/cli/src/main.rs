mod instance;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use orbit_ltl::bounded_mc::{check, Answer, BoundMode, CheckConfig};

use report::{check_report, classify_report, orbit_report, Report};

#[derive(Parser)]
#[command(name = "orbit-ltl", version, about = "LTL model checking for orbits of 3x3 rational matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Rigorous,
    Interval,
    Empirical,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the formula of an instance file.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        horizon: Option<u64>,
        #[arg(long)]
        baker_c: Option<u32>,
        #[arg(long)]
        baker_d: Option<u32>,
        #[arg(long)]
        max_position: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Print the eigenvalue regime of the matrix.
    Classify {
        file: PathBuf,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Print exact orbit points and atom truth values.
    Orbit {
        file: PathBuf,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    /// Malformed instance or arguments.
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: 64, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: 66, message: message.into() }
    }
}

impl From<orbit_ltl::Error> for CliError {
    fn from(e: orbit_ltl::Error) -> Self {
        use orbit_ltl::Error as E;
        let code = match e {
            E::InvalidInput(_) | E::Syntax { .. } | E::UnknownAtom(_) => 64,
            E::Unsupported(_) | E::WrongRegime(_) | E::Domain(_) => 65,
            _ => 70,
        };
        CliError { code, message: e.to_string() }
    }
}

fn mode_from(name: &str) -> Result<BoundMode, CliError> {
    match name {
        "rigorous" => Ok(BoundMode::Rigorous),
        "interval" | "interval-derived" => Ok(BoundMode::IntervalDerived),
        "empirical" => Ok(BoundMode::Empirical),
        other => Err(CliError::input(format!("unknown mode {:?}", other))),
    }
}

fn positive<T: PartialOrd + From<u8> + std::fmt::Display>(v: T, name: &str, min: u8) -> Result<T, CliError> {
    if v < T::from(min) {
        return Err(CliError::input(format!("{} must be at least {}, got {}", name, min, v)));
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<(Report, bool, u8), CliError> {
    match cli.command {
        Command::Check {
            file,
            mode,
            horizon,
            baker_c,
            baker_d,
            max_position,
            json,
        } => {
            let inst = instance::load(&file)?;
            let f = inst
                .formula
                .as_ref()
                .ok_or_else(|| CliError::input("instance has no [formula] section"))?;
            let over = &inst.config;
            let mode = match mode {
                Some(Mode::Rigorous) => BoundMode::Rigorous,
                Some(Mode::Interval) => BoundMode::IntervalDerived,
                Some(Mode::Empirical) => BoundMode::Empirical,
                None => mode_from(over.mode.as_deref().unwrap_or("empirical"))?,
            };
            let base = CheckConfig::default();
            let cfg = CheckConfig {
                mode,
                horizon: positive(horizon.or(over.horizon).unwrap_or(base.horizon), "horizon", 1)?,
                baker_c: positive(baker_c.or(over.baker_c).unwrap_or(base.baker_c), "baker-c", 1)?,
                baker_d: positive(baker_d.or(over.baker_d).unwrap_or(base.baker_d), "baker-d", 1)?,
                max_position: max_position.or(over.max_position).unwrap_or(base.max_position),
                ..base
            };
            let v = check(&inst.matrix, &inst.start, f, &inst.predicates, &cfg)?;
            let code = match v.verdict {
                Answer::True => 0,
                Answer::False => 1,
                Answer::Inconclusive => 2,
            };
            Ok((check_report(f, &inst.predicates, &cfg, v), json, code))
        }
        Command::Classify {
            file,
            precision_bits,
            json,
        } => {
            let inst = instance::load(&file)?;
            let prec = positive(
                precision_bits.or(inst.config.precision_bits).unwrap_or(128),
                "precision-bits",
                32,
            )?;
            Ok((classify_report(&inst.matrix, prec), json, 0))
        }
        Command::Orbit { file, steps, json } => {
            let inst = instance::load(&file)?;
            Ok((orbit_report(&inst, steps), json, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok((report, json, code)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            } else {
                print!("{}", report.text());
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
