//! The checking flow: fanout check, path-balance check, unrolling, arrival
//! alignment, miter and search, with exit codes for scripted use.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use mcid_core::checks::{check_fanout, check_path_balance_with, BalanceMode};
use mcid_core::equiv::{build_miter, check_equivalence_interruptible, EquivError};
use mcid_core::fault::{inject, FaultError, FaultKind, FaultSpec, Target};
use mcid_core::itcl::{apply_itcl, match_inputs, ItclError};
use mcid_core::mcid::{build_mcid, GateOrigin, McidError};
use mcid_core::sim::{simulate, SimError};
use mcid_core::{
    ArrivalSchedule, CheckReport, GateKind, McidCircuit, Miter, Netlist, Outcome, SolveOptions, TechnologyProfile,
    TimedTrace,
};
use thiserror::Error;

use crate::bench::{self, BenchError};
use crate::formats::{self, FormatError};
use crate::report::{Report, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INEQUIVALENT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Debug, Error)]
pub enum LecError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Bench { path: PathBuf, source: BenchError },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Profile(#[from] mcid_core::profile::ProfileError),
    #[error(transparent)]
    Mcid(#[from] McidError),
    #[error(transparent)]
    Itcl(#[from] ItclError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error(transparent)]
    Fault(#[from] FaultError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    CheckStructure {
        implementation: PathBuf,
    },
    BuildMcid {
        implementation: PathBuf,
        arrivals: Option<PathBuf>,
    },
    Verify {
        implementation: PathBuf,
        golden: PathBuf,
        arrivals: Option<PathBuf>,
    },
    InjectFault {
        implementation: PathBuf,
        kind: FaultKind,
        target: Target,
        replacement: Option<GateKind>,
        seed: u64,
        output: PathBuf,
    },
    Simulate {
        implementation: PathBuf,
        wave: PathBuf,
    },
}

/// Files written besides standard output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub cnf: Option<PathBuf>,
    pub mcid_dump: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    /// Built-in profile name or path to a profile file.
    pub profile: String,
    pub balance_mode: BalanceMode,
    pub per_output: bool,
    pub max_conflicts: Option<u64>,
    pub timeout: Option<Duration>,
    pub outputs: OutputPaths,
    pub tsv: bool,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            profile: "rsfq".to_string(),
            balance_mode: BalanceMode::Strict,
            per_output: false,
            max_conflicts: None,
            timeout: None,
            outputs: OutputPaths::default(),
            tsv: false,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Search limits and reporting switches for [`verify_netlists`].
#[derive(Clone, Debug, Default)]
pub struct VerifySettings {
    pub balance_mode: BalanceMode,
    pub solve: SolveOptions,
    pub timeout: Option<Duration>,
}

/// Everything one verification produced.
#[derive(Clone, Debug)]
pub struct VerifyRun {
    pub code: i32,
    pub report: Report,
    /// Absent when the fanout check rejected the design.
    pub mcid: Option<McidCircuit>,
    pub miter: Option<Miter>,
    pub trace: Option<TimedTrace>,
}

fn read(path: &Path) -> Result<String, LecError> {
    fs::read_to_string(path).map_err(|source| LecError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), LecError> {
    fs::write(path, text).map_err(|source| LecError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_netlist(path: &Path) -> Result<Netlist, LecError> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("netlist");
    bench::parse(&read(path)?, name).map_err(|source| LecError::Bench {
        path: path.to_path_buf(),
        source,
    })
}

/// A built-in profile name, or else a profile file.
pub fn load_profile(spec: &str) -> Result<TechnologyProfile, LecError> {
    if let Ok(p) = TechnologyProfile::builtin(spec) {
        return Ok(p);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(mcid_core::profile::ProfileError::UnknownProfile(spec.to_string()).into());
    }
    formats::parse_profile(&read(path)?).map_err(|source| LecError::Format {
        path: path.to_path_buf(),
        source,
    })
}

/// Every input at cycle 0 unless the file says otherwise.
pub fn load_arrivals(path: Option<&Path>, netlist: &Netlist) -> Result<ArrivalSchedule, LecError> {
    let base = ArrivalSchedule::uniform(netlist.input_names());
    match path {
        None => Ok(base),
        Some(p) => formats::parse_arrivals(&read(p)?, base).map_err(|source| LecError::Format {
            path: p.to_path_buf(),
            source,
        }),
    }
}

fn violation_notes(report: &mut Report, check: &CheckReport) {
    for v in &check.violations {
        report.note(v.to_string());
    }
}

/// Gates of the model that copy a source gate already copied elsewhere.
pub fn duplicated_gates(mcid: &McidCircuit) -> usize {
    let mut origins = BTreeSet::new();
    let mut copies = 0;
    for g in mcid.gates() {
        if let GateOrigin::Source(id) = g.origin {
            copies += 1;
            origins.insert(id);
        }
    }
    copies - origins.len()
}

/// Fanout and path-balance checks. `balance_fails` decides whether a
/// balance violation is a failure or a warning.
fn structural_stages(
    netlist: &Netlist,
    profile: &TechnologyProfile,
    mode: BalanceMode,
    balance_fails: bool,
    report: &mut Report,
) -> (bool, bool) {
    let t = Instant::now();
    let fanout = check_fanout(netlist, profile);
    let fanout_ok = fanout.passed();
    report.stage(
        "fanout",
        if fanout_ok { Status::Pass } else { Status::Fail },
        fanout.violations.len() as u64,
        "violations",
        t.elapsed(),
    );
    violation_notes(report, &fanout);
    if !fanout_ok && !balance_fails {
        return (false, false);
    }
    let t = Instant::now();
    let balance = check_path_balance_with(netlist, profile, mode);
    let balance_ok = balance.passed();
    let status = match (balance_ok, balance_fails) {
        (true, _) => Status::Pass,
        (false, true) => Status::Fail,
        (false, false) => Status::Warn,
    };
    report.stage("path-balance", status, balance.violations.len() as u64, "violations", t.elapsed());
    violation_notes(report, &balance);
    (fanout_ok, balance_ok)
}

/// Structural checks only; exit 3 on any violation.
pub fn check_structure(netlist: &Netlist, profile: &TechnologyProfile, mode: BalanceMode) -> (i32, Report) {
    let mut report = Report::default();
    let (fanout_ok, balance_ok) = structural_stages(netlist, profile, mode, true, &mut report);
    let code = if fanout_ok && balance_ok {
        EXIT_OK
    } else {
        EXIT_REJECTED
    };
    (code, report)
}

/// The full flow on in-memory netlists.
pub fn verify_netlists(
    implementation: &Netlist,
    golden: &Netlist,
    profile: &TechnologyProfile,
    schedule: &ArrivalSchedule,
    settings: &VerifySettings,
) -> Result<VerifyRun, LecError> {
    let mut report = Report::default();
    let (fanout_ok, _) = structural_stages(implementation, profile, settings.balance_mode, false, &mut report);
    if !fanout_ok {
        report.note("verdict: REJECTED (fanout)");
        return Ok(VerifyRun {
            code: EXIT_REJECTED,
            report,
            mcid: None,
            miter: None,
            trace: None,
        });
    }

    let t = Instant::now();
    let raw = build_mcid(implementation, profile)?;
    report.stage("mcid", Status::Done, raw.gate_count() as u64, "gates", t.elapsed());

    let t = Instant::now();
    let mcid = apply_itcl(&raw, schedule)?;
    let buffers = (mcid.gate_count() - raw.gate_count()) as u64;
    report.stage("itcl", Status::Done, buffers, "buffers", t.elapsed());

    let t = Instant::now();
    let matching = match_inputs(&mcid, golden)?;
    let miter = build_miter(&mcid, golden, &matching)?;
    report.stage("miter", Status::Done, miter.graph.and_count() as u64, "and-nodes", t.elapsed());

    let t = Instant::now();
    let deadline = settings.timeout.map(|d| t + d);
    let mut interrupt = || deadline.is_some_and(|d| Instant::now() >= d);
    let verdict = check_equivalence_interruptible(&miter, &settings.solve, &mut interrupt);
    let (status, code) = match verdict.outcome {
        Outcome::Equivalent => (Status::Equivalent, EXIT_OK),
        Outcome::Inequivalent(_) => (Status::Inequivalent, EXIT_INEQUIVALENT),
        Outcome::Unknown => (Status::Unknown, EXIT_UNKNOWN),
    };
    report.stage("solve", status, verdict.stats.conflicts, "conflicts", t.elapsed());

    let dup = duplicated_gates(&raw);
    report.note(format!(
        "gates: golden={} implementation={} mcid={}",
        golden.gates().len(),
        implementation.gates().len(),
        raw.gate_count()
    ));
    report.note(if dup == 0 {
        "duplicated gates: N/A".to_string()
    } else {
        format!("duplicated gates: {}", dup)
    });
    let window = miter.window();
    report.note(format!(
        "window: steps {}..{}, reference step {}",
        window.0,
        window.1,
        miter.reference_step()
    ));
    let s = &verdict.stats;
    report.note(format!(
        "solver: variables={} clauses={} decisions={} conflicts={} propagations={}",
        s.variable_count, s.clause_count, s.decisions, s.conflicts, s.propagations
    ));
    let trace = verdict.trace().cloned();
    report.note(match &trace {
        Some(tr) => format!("verdict: INEQUIVALENT at output {}", tr.output_name),
        None => format!("verdict: {}", status),
    });
    Ok(VerifyRun {
        code,
        report,
        mcid: Some(mcid),
        miter: Some(miter),
        trace,
    })
}

fn render(report: &Report, config: &RunConfig) -> String {
    if config.tsv {
        report.to_tsv(config.timings)
    } else {
        report.to_text(config.timings)
    }
}

/// Writes the report to its file if one is configured, else returns it for
/// standard output.
fn emit_report(report: &Report, config: &RunConfig, stdout: &mut String) -> Result<(), LecError> {
    let text = render(report, config);
    match &config.outputs.report {
        Some(p) => write_file(p, &text),
        None => {
            stdout.push_str(&text);
            Ok(())
        }
    }
}

fn run_inner(config: &RunConfig, stdout: &mut String) -> Result<i32, LecError> {
    let profile = load_profile(&config.profile)?;
    match &config.command {
        Command::CheckStructure { implementation } => {
            let n = load_netlist(implementation)?;
            let (code, report) = check_structure(&n, &profile, config.balance_mode);
            emit_report(&report, config, stdout)?;
            Ok(code)
        }
        Command::BuildMcid {
            implementation,
            arrivals,
        } => {
            let n = load_netlist(implementation)?;
            let sched = load_arrivals(arrivals.as_deref(), &n)?;
            let mcid = apply_itcl(&build_mcid(&n, &profile)?, &sched)?;
            let dump = bench::write_mcid(&mcid);
            match &config.outputs.mcid_dump {
                Some(p) => {
                    write_file(p, &dump)?;
                    let mut report = Report::default();
                    report.stage("mcid", Status::Done, mcid.gate_count() as u64, "gates", Duration::ZERO);
                    report.note(format!("duplicated gates: {}", duplicated_gates(&mcid)));
                    emit_report(&report, config, stdout)?;
                }
                None => stdout.push_str(&dump),
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            implementation,
            golden,
            arrivals,
        } => {
            let imp = load_netlist(implementation)?;
            let gold = load_netlist(golden)?;
            let sched = load_arrivals(arrivals.as_deref(), &imp)?;
            let settings = VerifySettings {
                balance_mode: config.balance_mode,
                solve: SolveOptions {
                    max_conflicts: config.max_conflicts,
                    per_output: config.per_output,
                },
                timeout: config.timeout,
            };
            let run = verify_netlists(&imp, &gold, &profile, &sched, &settings)?;
            emit_report(&run.report, config, stdout)?;
            if let (Some(p), Some(m)) = (&config.outputs.mcid_dump, &run.mcid) {
                write_file(p, &bench::write_mcid(m))?;
            }
            if let (Some(p), Some(m)) = (&config.outputs.cnf, &run.miter) {
                write_file(p, &m.cnf().to_dimacs())?;
            }
            if let Some(trace) = &run.trace {
                match &config.outputs.trace {
                    Some(p) => write_file(p, &trace.to_string())?,
                    None => stdout.push_str(&trace.to_string()),
                }
            }
            Ok(run.code)
        }
        Command::InjectFault {
            implementation,
            kind,
            target,
            replacement,
            seed,
            output,
        } => {
            let n = load_netlist(implementation)?;
            let spec = FaultSpec {
                kind: *kind,
                target: target.clone(),
                replacement: *replacement,
                seed: *seed,
            };
            let (faulty, description) = inject(&n, &spec)?;
            write_file(output, &bench::write(&faulty))?;
            let line = format!("{}\n", description);
            write_file(&sidecar_path(output), &line)?;
            stdout.push_str(&line);
            Ok(EXIT_OK)
        }
        Command::Simulate {
            implementation,
            wave,
        } => {
            let n = load_netlist(implementation)?;
            let names: Vec<String> = n.input_names().map(str::to_string).collect();
            let w = formats::parse_wave(&read(wave)?, names).map_err(|source| LecError::Format {
                path: wave.clone(),
                source,
            })?;
            let values = simulate(&n, &profile, &w)?;
            let pos: Vec<String> = n.output_names().map(str::to_string).collect();
            stdout.push_str(&formats::write_outputs(&pos, &values));
            Ok(EXIT_OK)
        }
    }
}

/// `<output>.fault`, next to the mutated netlist.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".fault");
    PathBuf::from(s)
}

/// Runs one command. Errors become exit code 2 with a message on stderr.
pub fn run(config: &RunConfig) -> RunResult {
    let mut stdout = String::new();
    match run_inner(config, &mut stdout) {
        Ok(code) => RunResult {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => RunResult {
            code: EXIT_ERROR,
            stdout,
            stderr: format!("error: {}\n", e),
        },
    }
}
