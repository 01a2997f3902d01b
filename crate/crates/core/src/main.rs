//! Command-line front end: Monte Carlo runs, the exhaustive table check,
//! and detection-rate sweeps.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cavity_qpc::adversary::AttackModel;
use cavity_qpc::harness::{
    attack_sweep, emit_certificate, emit_report, emit_sweep, run_trials_observed, verify_table1,
    HarnessError, OutputFormat, SecretMode, SimConfig,
};
use cavity_qpc::protocol::Secret;
use cavity_qpc::quantum::Basis;

#[derive(Parser)]
#[command(
    name = "cavity-qpc",
    version,
    about = "Simulate and verify a cavity-QED quantum private comparison protocol"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of seeded protocol executions and report statistics
    Run(RunArgs),
    /// Exhaustively check the round arithmetic over all 128 configurations
    VerifyTable1 {
        #[arg(long, value_enum, default_value_t = FormatArg::Human)]
        format: FormatArg,
    },
    /// Measure intercept-resend detection rates across decoy counts
    AttackSweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Secret length in bits (inferred from --secret-a when omitted)
    #[arg(long)]
    length: Option<usize>,
    /// Alice's secret as a bit string, least-significant bit first
    #[arg(long, requires = "secret_b", conflicts_with = "mode")]
    secret_a: Option<String>,
    /// Bob's secret as a bit string, least-significant bit first
    #[arg(long, requires = "secret_a", conflicts_with = "mode")]
    secret_b: Option<String>,
    /// Secret generation: equal | differ-at=J | random
    #[arg(long)]
    mode: Option<String>,
    /// Decoy atoms per channel (default: one per secret bit)
    #[arg(long)]
    decoys: Option<usize>,
    /// Security-check error-rate threshold
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    /// none | intercept-resend | measure-resend=z | measure-resend=x | dishonest-alice
    #[arg(long, default_value = "none")]
    attack: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
    /// Append every trial's transcript to this file
    #[arg(long)]
    dump_transcript: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    length: usize,
    /// Comma-separated decoy counts per channel, e.g. 1,5,10
    #[arg(long, default_value = "1,2,5,10")]
    decoys: String,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Json,
    Tsv,
}

impl From<FormatArg> for OutputFormat {
    fn from(arg: FormatArg) -> OutputFormat {
        match arg {
            FormatArg::Human => OutputFormat::Human,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Tsv => OutputFormat::Tsv,
        }
    }
}

enum CliError {
    /// Bad flags or configuration; exit code 1.
    Usage(String),
    /// A verified invariant failed; exit code 2.
    Invariant(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Invariant(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(err: HarnessError) -> CliError {
        match err {
            HarnessError::Config(e) => CliError::Usage(e.to_string()),
            // A protocol failure under a validated config is an engine
            // invariant breaking, not an operator mistake.
            HarnessError::Protocol(e) => CliError::Invariant(e.to_string()),
        }
    }
}

fn parse_mode(text: &str, length: usize) -> Result<SecretMode, CliError> {
    match text {
        "equal" => Ok(SecretMode::EqualPair),
        "random" => Ok(SecretMode::Random),
        other => match other.strip_prefix("differ-at=") {
            Some(j) => {
                let j: usize = j.parse().map_err(|_| {
                    CliError::Usage(format!("bad differ-at index in '--mode {other}'"))
                })?;
                if j == 0 || j > length {
                    return Err(CliError::Usage(format!(
                        "differ-at index {j} outside 1..={length}"
                    )));
                }
                Ok(SecretMode::DifferAt(j))
            }
            None => Err(CliError::Usage(format!(
                "unknown mode '{other}' (expected equal | differ-at=J | random)"
            ))),
        },
    }
}

fn parse_attack(text: &str) -> Result<AttackModel, CliError> {
    match text {
        "none" => Ok(AttackModel::None),
        "intercept-resend" => Ok(AttackModel::InterceptResend),
        "measure-resend=z" => Ok(AttackModel::MeasureResend(Basis::Z)),
        "measure-resend=x" => Ok(AttackModel::MeasureResend(Basis::X)),
        "dishonest-alice" => Ok(AttackModel::DishonestAliceIntercept),
        other => Err(CliError::Usage(format!(
            "unknown attack '{other}' (expected none | intercept-resend | measure-resend=z|x | dishonest-alice)"
        ))),
    }
}

fn run_command(args: RunArgs) -> Result<(), CliError> {
    let (secret_mode, length) = match (&args.secret_a, &args.secret_b) {
        (Some(a), Some(b)) => {
            let a = Secret::from_bit_str(a)
                .map_err(|e| CliError::Usage(format!("--secret-a: {e}")))?;
            let b = Secret::from_bit_str(b)
                .map_err(|e| CliError::Usage(format!("--secret-b: {e}")))?;
            let length = args.length.unwrap_or(a.len());
            (SecretMode::Explicit { a, b }, length)
        }
        _ => {
            let length = args.length.ok_or_else(|| {
                CliError::Usage("--length is required unless explicit secrets are given".into())
            })?;
            let mode = match &args.mode {
                Some(text) => parse_mode(text, length)?,
                None => SecretMode::Random,
            };
            (mode, length)
        }
    };

    let config = SimConfig {
        length,
        secret_mode,
        decoys_per_channel: args.decoys.unwrap_or(length.max(1)),
        threshold: args.threshold,
        attack: parse_attack(&args.attack)?,
        trials: args.trials,
        master_seed: args.seed,
        format: args.format.into(),
        dump_transcript: args.dump_transcript,
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let mut dump = config.dump_transcript.as_ref().map(|_| String::new());
    let stats = run_trials_observed(&config, |trial, outcome| {
        if let Some(buffer) = dump.as_mut() {
            buffer.push_str(&format!("# trial {trial}\n"));
            buffer.push_str(&outcome.transcript.to_lines());
        }
    })?;

    if let (Some(path), Some(buffer)) = (&config.dump_transcript, dump) {
        fs::write(path, buffer)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{}", emit_report(&stats, config.format));
    Ok(())
}

fn verify_command(format: FormatArg) -> Result<(), CliError> {
    let cert = verify_table1();
    print!("{}", emit_certificate(&cert, format.into()));
    if !cert.passed {
        return Err(CliError::Invariant(format!(
            "table verification failed with {} violation(s)",
            cert.violations.len()
        )));
    }
    Ok(())
}

fn sweep_command(args: SweepArgs) -> Result<(), CliError> {
    let decoy_counts = args
        .decoys
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad decoy count '{s}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if decoy_counts.is_empty() || decoy_counts.contains(&0) {
        return Err(CliError::Usage("decoy counts must be positive".into()));
    }

    let mut base = SimConfig::new(args.length, args.trials, args.seed);
    base.threshold = args.threshold;
    base.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = attack_sweep(&base, &decoy_counts)?;
    print!("{}", emit_sweep(&report, args.format.into()));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::VerifyTable1 { format } => verify_command(format),
        Command::AttackSweep(args) => sweep_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
