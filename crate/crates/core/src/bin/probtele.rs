use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use probtele::harness::{
    parse_channel_json, parse_message_json, parse_un_path, run, run_verify, synthesize, Circuit,
    ExperimentConfig, Mode, Report, Source,
};
use probtele::{Channel64, Error};

#[derive(Parser)]
#[command(name = "probtele", version, about = "Probabilistic N-qubit teleportation simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one teleportation experiment and write a JSON report.
    Teleport(TeleportArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Print a circuit in netlist text form.
    Synthesize(SynthArgs),
}

#[derive(Args)]
struct ChannelArgs {
    #[arg(long)]
    n: usize,
    /// JSON file, `random` or `maximal`.
    #[arg(long, default_value = "random")]
    channel: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TeleportArgs {
    #[command(flatten)]
    common: ChannelArgs,
    /// JSON file or `random`.
    #[arg(long, default_value = "random")]
    message: String,
    /// `exact` or `sample`.
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    /// `matrix`, `netlist` or `cnot`.
    #[arg(long, default_value = "matrix")]
    un_path: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the branch table as CSV (exact mode).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Record wall time in the report. Makes output non-reproducible.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest N exercised.
    #[arg(long = "n", default_value_t = 4)]
    max_n: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    common: ChannelArgs,
    /// `un`, `u2-cnot`, `u2-block:<i>` or `channel-prep`.
    #[arg(long, default_value = "un")]
    circuit: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(Error),
    #[error("{0}")]
    Check(Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailed { .. } => CliError::Check(e),
            other => CliError::Input(other),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn channel_source(a: &ChannelArgs) -> Result<Source<Channel64>, CliError> {
    Ok(match a.channel.as_str() {
        "random" => Source::Random { seed: a.seed },
        "maximal" => Source::Given(Channel64::maximal(a.n)?),
        path => Source::Given(parse_channel_json(&read(Path::new(path))?)?),
    })
}

fn teleport(a: &TeleportArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        n: a.common.n,
        channel: channel_source(&a.common)?,
        message: match a.message.as_str() {
            "random" => Source::Random { seed: a.common.seed },
            path => Source::Given(parse_message_json(&read(Path::new(path))?)?),
        },
        mode: a.mode.parse::<Mode>()?,
        shots: a.shots,
        seed: a.common.seed,
        un_path: parse_un_path(&a.un_path)?,
    };
    let mut report = run(&cfg)?;
    if a.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    if let Some(p) = &a.csv {
        emit(Some(p), &report.branches_csv())?;
    }
    emit(a.out.as_deref(), &report.to_json()?)?;
    Ok(report)
}

fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = run_verify(a.max_n, a.trials, a.seed)?;
    if a.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    emit(a.out.as_deref(), &report.to_json()?)?;
    for c in &report.checks {
        eprintln!(
            "{} {} (worst {:e}, tol {:e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.worst_residual,
            c.tolerance
        );
    }
    Ok(report)
}

fn synth(a: &SynthArgs) -> Result<(), CliError> {
    let ch = match channel_source(&a.common)? {
        Source::Given(ch) => ch,
        Source::Random { seed } => ExperimentConfig {
            n: a.common.n,
            channel: Source::Random { seed },
            message: Source::Random { seed },
            mode: Mode::Exact,
            shots: 1,
            seed,
            un_path: probtele::protocol::UnPath::Matrix,
        }
        .resolve_channel()?,
    };
    if ch.n() != a.common.n {
        return Err(Error::Config {
            field: "channel.n".into(),
            msg: format!("is {} but n = {}", ch.n(), a.common.n),
        }
        .into());
    }
    let circuit: Circuit = a.circuit.parse()?;
    emit(a.out.as_deref(), &synthesize(&ch, circuit)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Teleport(a) => teleport(a).map(|r| r.passed),
        Command::Verify(a) => verify(a).map(|r| r.passed),
        Command::Synthesize(a) => synth(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Check(_) => 1,
                CliError::Input(_) | CliError::Io { .. } => 2,
            })
        }
    }
}
