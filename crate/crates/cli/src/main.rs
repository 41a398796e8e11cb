//! `fermibell`: analyze two-fermion states with the canonical (Slater)
//! decomposition, GMW-entanglement verdicts, individuating projectors, and
//! permutation-invariant CHSH certificates.
//!
//! Exit codes: 0 = analysis completed (either verdict), 2 = input error,
//! 3 = numerical failure.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fermibell_cli::commands::{self, Options, OptimizerChoice};
use fermibell_cli::report::{render_human, to_json, verify_certificate};
use fermibell_cli::statefile::{self, ParsedState};
use fermibell_cli::CliError;

#[derive(Parser)]
#[command(name = "fermibell", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OptimizerArg {
    Paper,
    Stationary,
    Grid,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Args)]
struct CommonFlags {
    /// Which angle search backs the emitted certificate.
    #[arg(long, value_enum, default_value = "grid")]
    optimizer: OptimizerArg,
    /// Relative tolerance for input validation.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed echoed into reports and used by corpus generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output rendering.
    #[arg(long, value_enum, default_value = "human")]
    format: FormatArg,
    /// Canned scenario instead of a state file (singlet, eprb, lr-product).
    #[arg(long, conflicts_with = "path")]
    scenario: Option<String>,
    /// State file path ("-" for stdin).
    path: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MapFlags {
    /// 1-based indices "UP,DOWN" of the left location basis.
    #[arg(long, value_parser = parse_index_pair)]
    left_basis: Option<(usize, usize)>,
    /// 1-based indices "UP,DOWN" of the right location basis.
    #[arg(long, value_parser = parse_index_pair)]
    right_basis: Option<(usize, usize)>,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: Slater data, GMW verdict, individuation, Bell certificate.
    Analyze {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        map: MapFlags,
    },
    /// Canonical (Slater) decomposition and GMW verdict only.
    Slater {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Bell certificate only.
    Bell {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Individuating projector pair only.
    Individuate {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Map a state supported on an L/R split to the two-qubit picture.
    MapDistinguishable {
        #[command(flatten)]
        common: CommonFlags,
        #[command(flatten)]
        map: MapFlags,
    },
    /// Generate a reproducible random state of exact Slater rank.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-derive an emitted certificate from scratch and check it.
    Verify {
        /// Report file produced by analyze/bell.
        report: PathBuf,
    },
}

fn parse_index_pair(text: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated 1-based indices, e.g. \"1,3\"".into());
    }
    let up: usize = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let down: usize = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    if up == 0 || down == 0 {
        return Err("indices are 1-based".into());
    }
    Ok((up - 1, down - 1))
}

fn load_state(common: &CommonFlags) -> Result<ParsedState, CliError> {
    if let Some(name) = &common.scenario {
        return commands::scenario_state(name, common.tolerance);
    }
    let Some(path) = &common.path else {
        return Err(CliError::Input(
            "provide a state file path or --scenario NAME".into(),
        ));
    };
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
    };
    statefile::parse_str(&text, common.tolerance)
}

fn options(common: &CommonFlags) -> Options {
    Options {
        optimizer: match common.optimizer {
            OptimizerArg::Paper => OptimizerChoice::Paper,
            OptimizerArg::Stationary => OptimizerChoice::Stationary,
            OptimizerArg::Grid => OptimizerChoice::Grid,
        },
        tolerance: common.tolerance,
        seed: common.seed,
    }
}

fn write_output(
    common_output: &Option<PathBuf>,
    rendered: &str,
) -> Result<(), CliError> {
    match common_output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn emit_report(
    report: &fermibell_cli::report::AnalysisReport,
    common: &CommonFlags,
) -> Result<(), CliError> {
    let rendered = match common.format {
        FormatArg::Human => render_human(report),
        FormatArg::Machine => {
            let mut s = to_json(report);
            s.push('\n');
            s
        }
    };
    write_output(&common.output, &rendered)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { common, map } => {
            let parsed = load_state(&common)?;
            let bases =
                commands::resolve_location_bases(&parsed, map.left_basis, map.right_basis);
            let report = commands::cmd_analyze(&parsed, &options(&common), bases)?;
            emit_report(&report, &common)
        }
        Command::Slater { common } => {
            let parsed = load_state(&common)?;
            let report = commands::cmd_slater(&parsed, &options(&common))?;
            emit_report(&report, &common)
        }
        Command::Bell { common } => {
            let parsed = load_state(&common)?;
            let report = commands::cmd_bell(&parsed, &options(&common))?;
            emit_report(&report, &common)
        }
        Command::Individuate { common } => {
            let parsed = load_state(&common)?;
            let report = commands::cmd_individuate(&parsed, &options(&common))?;
            emit_report(&report, &common)
        }
        Command::MapDistinguishable { common, map } => {
            let parsed = load_state(&common)?;
            let bases =
                commands::resolve_location_bases(&parsed, map.left_basis, map.right_basis);
            let report =
                commands::cmd_map_distinguishable(&parsed, &options(&common), bases)?;
            emit_report(&report, &common)
        }
        Command::Random {
            dim,
            rank,
            seed,
            output,
        } => {
            let file = commands::cmd_random(dim, rank, seed)?;
            let mut rendered = statefile::to_json(&file);
            rendered.push('\n');
            write_output(&output, &rendered)
        }
        Command::Verify { report } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", report.display())))?;
            let parsed = fermibell_cli::report::from_json(&text)?;
            let Some(cert) = parsed.bell.or(parsed
                .map_distinguishable
                .map(|m| m.image_certificate))
            else {
                return Err(CliError::Input(
                    "report carries no certificate to verify".into(),
                ));
            };
            let verification = verify_certificate(&cert)?;
            for line in &verification.checks {
                println!(
                    "{} {}: {}",
                    if line.ok { "ok  " } else { "FAIL" },
                    line.check,
                    line.detail
                );
            }
            println!("verified: {}", verification.valid);
            Ok(())
        }
    }
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
