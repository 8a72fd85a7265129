use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use mcid_core::checks::BalanceMode;
use mcid_core::fault::{FaultKind, Target};
use mcid_core::GateKind;
use mcid_lec::pipeline::OutputPaths;
use mcid_lec::{run, Command, RunConfig};

/// Equivalence checking for ultra-deep pipelined clocked netlists.
///
/// Exit codes: 0 equivalent or success, 1 inequivalent, 2 parse or
/// configuration error, 3 structural rejection, 4 solver limit reached.
#[derive(Parser, Debug)]
#[command(name = "mcid-lec", version)]
struct Cli {
    /// Built-in profile (rsfq, aqfp, cmos) or a profile file.
    #[arg(long, global = true, default_value = "rsfq")]
    profile: String,
    #[arg(long, global = true, value_enum, default_value_t = Balance::Strict)]
    balance_mode: Balance,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Tab-separated report records.
    #[arg(long, global = true)]
    tsv: bool,
    /// Include stage timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Balance {
    Strict,
    OutputsOnly,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Fanout and path-balance checks; exits 3 on any violation.
    CheckStructure { implementation: PathBuf },
    /// Print or write the unrolled model as a bench netlist.
    BuildMcid {
        implementation: PathBuf,
        /// `name = cycle` lines; unlisted inputs arrive at cycle 0.
        #[arg(long)]
        arrivals: Option<PathBuf>,
        #[arg(long)]
        mcid_dump: Option<PathBuf>,
    },
    /// Check an implementation against a combinational golden netlist.
    Verify {
        implementation: PathBuf,
        golden: PathBuf,
        #[arg(long)]
        arrivals: Option<PathBuf>,
        /// Solve one output at a time.
        #[arg(long)]
        per_output: bool,
        #[arg(long)]
        max_conflicts: Option<u64>,
        #[arg(long)]
        timeout_secs: Option<u64>,
        /// Counterexample file; printed to standard output when absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// DIMACS export of the miter.
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(long)]
        mcid_dump: Option<PathBuf>,
    },
    /// Write a mutated netlist and a `<output>.fault` description.
    InjectFault {
        implementation: PathBuf,
        /// swap-gate, remove-dff or remove-splitter.
        #[arg(long, value_parser = parse_kind)]
        kind: FaultKind,
        /// A gate output name, `random` or `near-outputs`.
        #[arg(long, default_value = "random")]
        target: String,
        /// Replacement kind for swap-gate.
        #[arg(long, value_parser = parse_gate_kind)]
        replacement: Option<GateKind>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Simulate a wave file and print outputs per cycle.
    Simulate {
        implementation: PathBuf,
        #[arg(long)]
        wave: PathBuf,
    },
}

fn parse_kind(s: &str) -> Result<FaultKind, String> {
    FaultKind::from_name(s).ok_or_else(|| format!("unknown fault kind `{}`", s))
}

fn parse_gate_kind(s: &str) -> Result<GateKind, String> {
    GateKind::from_name(s).ok_or_else(|| format!("unknown gate kind `{}`", s))
}

fn target(s: &str) -> Target {
    match s {
        "random" => Target::Random,
        "near-outputs" => Target::NearOutputs,
        name => Target::Gate(name.to_string()),
    }
}

fn config(cli: Cli) -> RunConfig {
    let mut outputs = OutputPaths {
        report: cli.report,
        ..OutputPaths::default()
    };
    let mut per_output = false;
    let mut max_conflicts = None;
    let mut timeout = None;
    let command = match cli.command {
        Sub::CheckStructure { implementation } => Command::CheckStructure { implementation },
        Sub::BuildMcid {
            implementation,
            arrivals,
            mcid_dump,
        } => {
            outputs.mcid_dump = mcid_dump;
            Command::BuildMcid {
                implementation,
                arrivals,
            }
        }
        Sub::Verify {
            implementation,
            golden,
            arrivals,
            per_output: p,
            max_conflicts: m,
            timeout_secs,
            trace,
            cnf,
            mcid_dump,
        } => {
            per_output = p;
            max_conflicts = m;
            timeout = timeout_secs.map(Duration::from_secs);
            outputs.trace = trace;
            outputs.cnf = cnf;
            outputs.mcid_dump = mcid_dump;
            Command::Verify {
                implementation,
                golden,
                arrivals,
            }
        }
        Sub::InjectFault {
            implementation,
            kind,
            target: t,
            replacement,
            seed,
            output,
        } => Command::InjectFault {
            implementation,
            kind,
            target: target(&t),
            replacement,
            seed,
            output,
        },
        Sub::Simulate {
            implementation,
            wave,
        } => Command::Simulate {
            implementation,
            wave,
        },
    };
    RunConfig {
        command,
        profile: cli.profile,
        balance_mode: match cli.balance_mode {
            Balance::Strict => BalanceMode::Strict,
            Balance::OutputsOnly => BalanceMode::OutputsOnly,
        },
        per_output,
        max_conflicts,
        timeout,
        outputs,
        tsv: cli.tsv,
        timings: cli.timings,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&config(cli));
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    ExitCode::from(result.code as u8)
}
