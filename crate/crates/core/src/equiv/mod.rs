//! Miter construction, satisfiability search and timed counterexamples.
//!
//! The MCID model and the golden netlist are built into one
//! [`NormalFormGraph`]. Golden inputs share the external input of their
//! matched timed signal; MCID inputs with no golden partner stay free. One
//! XOR per output compares the two sides and the XORs are OR-ed into a single
//! root, which is satisfiable exactly when the designs differ.

pub mod aig;
pub mod cnf;
pub mod sat;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use thiserror::Error;

pub use aig::{Edge, NormalFormGraph};
pub use cnf::Cnf;

use crate::itcl::{apply_itcl, match_inputs, ArrivalSchedule, InputMatching, ItclError};
use crate::mcid::{build_mcid, McidCircuit, McidError, TimedSignal};
use crate::netlist::{GateKind, LogicFn, Netlist};
use crate::profile::TechnologyProfile;
use crate::sim::WaveInput;
use aig::edge_value;
use sat::{SolveResult, Solver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("output mismatch: {0}")]
    OutputMismatch(String),
    #[error("golden netlist is not combinational: gate `{0}` is a {1}")]
    NotCombinational(String, GateKind),
    #[error(transparent)]
    Mcid(#[from] McidError),
    #[error(transparent)]
    Itcl(#[from] ItclError),
}

/// How an external miter input is shared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputRole {
    /// Read by both the MCID model and the golden netlist.
    Shared,
    /// Read only by the MCID model.
    Free,
    /// Read only by the golden netlist.
    GoldenOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalInput {
    pub signal: TimedSignal,
    pub role: InputRole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiterOutput {
    pub name: String,
    pub implementation: Edge,
    pub golden: Edge,
    /// True when the two sides differ.
    pub diff: Edge,
}

/// Both designs in one graph, plus what is needed to read back a trace.
#[derive(Clone, Debug)]
pub struct Miter {
    pub graph: NormalFormGraph,
    /// Parallel to the graph inputs, sorted by (name, step).
    pub externals: Vec<ExternalInput>,
    pub outputs: Vec<MiterOutput>,
    pub root: Edge,
    source_inputs: Vec<String>,
    golden_inputs: Vec<String>,
    window: (i32, i32),
    reference_step: i32,
    arrival_offsets: BTreeMap<String, u32>,
}

impl Miter {
    /// Earliest and latest step covered by a trace.
    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn reference_step(&self) -> i32 {
        self.reference_step
    }

    pub fn golden_inputs(&self) -> &[String] {
        &self.golden_inputs
    }

    pub fn cnf(&self) -> Cnf {
        Cnf::encode(&self.graph, self.root)
    }
}

fn gate_edge(g: &mut NormalFormGraph, f: LogicFn, ins: &[Edge]) -> Edge {
    match f {
        LogicFn::Identity => ins[0],
        LogicFn::Not => !ins[0],
        LogicFn::And => g.and(ins[0], ins[1]),
        LogicFn::Nand => !g.and(ins[0], ins[1]),
        LogicFn::Or => g.or(ins[0], ins[1]),
        LogicFn::Nor => !g.or(ins[0], ins[1]),
        LogicFn::Xor => g.xor(ins[0], ins[1]),
        LogicFn::Xnor => !g.xor(ins[0], ins[1]),
    }
}

/// Builds the miter of `mcid` against the combinational `golden` netlist.
pub fn build_miter(
    mcid: &McidCircuit,
    golden: &Netlist,
    matching: &InputMatching,
) -> Result<Miter, EquivError> {
    for (i, gate) in golden.gates().iter().enumerate() {
        if !gate.kind.is_logic() {
            let id = crate::netlist::GateId(i as u32);
            return Err(EquivError::NotCombinational(
                golden.gate_name(id).to_string(),
                gate.kind,
            ));
        }
    }
    let impl_names: Vec<&str> = mcid.outputs().iter().map(|o| o.name.as_str()).collect();
    let golden_names: Vec<&str> = golden.output_names().collect();
    for name in &impl_names {
        if !golden_names.contains(name) {
            return Err(EquivError::OutputMismatch(alloc::format!(
                "implementation output `{}` missing from golden",
                name
            )));
        }
    }
    for name in &golden_names {
        if !impl_names.contains(name) {
            return Err(EquivError::OutputMismatch(alloc::format!(
                "golden output `{}` missing from implementation",
                name
            )));
        }
    }

    let mut externals: Vec<(ExternalInput, Option<crate::mcid::SignalId>)> = Vec::new();
    for &sid in mcid.inputs() {
        let role = if matching.is_free(sid) {
            InputRole::Free
        } else {
            InputRole::Shared
        };
        externals.push((
            ExternalInput {
                signal: mcid.signal(sid).clone(),
                role,
            },
            Some(sid),
        ));
    }
    for m in matching.matched.values() {
        if m.mcid_input.is_none() {
            externals.push((
                ExternalInput {
                    signal: m.signal.clone(),
                    role: InputRole::GoldenOnly,
                },
                None,
            ));
        }
    }
    externals.sort_by(|a, b| a.0.signal.cmp(&b.0.signal));

    let mut graph = NormalFormGraph::new();
    let mut value: Vec<Option<Edge>> = vec![None; mcid.signals.len()];
    let mut by_signal: BTreeMap<TimedSignal, Edge> = BTreeMap::new();
    for (ext, sid) in &externals {
        let e = graph.add_input(alloc::format!("{}", ext.signal));
        by_signal.insert(ext.signal.clone(), e);
        if let Some(sid) = sid {
            value[sid.index()] = Some(e);
        }
    }

    let mut pins = Vec::with_capacity(2);
    for gate in mcid.gates() {
        pins.clear();
        pins.extend(
            gate.inputs
                .iter()
                .map(|s| value[s.index()].expect("MCID gates are topologically ordered")),
        );
        value[gate.output.index()] = Some(gate_edge(&mut graph, gate.function, &pins));
    }

    let mut net_edge: Vec<Option<Edge>> = vec![None; golden.num_nets()];
    for &pi in golden.inputs() {
        let name = golden.net_name(pi);
        let m = &matching.matched[name];
        net_edge[pi.index()] = Some(by_signal[&m.signal]);
    }
    for &gid in golden.topological_order() {
        let gate = golden.gate(gid);
        pins.clear();
        pins.extend(gate.inputs.iter().map(|n| net_edge[n.index()].expect("topological")));
        net_edge[gate.output.index()] = Some(gate_edge(&mut graph, gate.kind.function(), &pins));
    }

    let mut outputs = Vec::new();
    let mut root = Edge::FALSE;
    for o in mcid.outputs() {
        let implementation = value[o.signal.index()].expect("outputs are driven");
        let net = golden.net(&o.name).expect("checked above");
        let golden_edge = net_edge[net.index()].expect("outputs are driven");
        let diff = graph.xor(implementation, golden_edge);
        root = graph.or(root, diff);
        outputs.push(MiterOutput {
            name: o.name.clone(),
            implementation,
            golden: golden_edge,
            diff,
        });
    }

    let steps = externals
        .iter()
        .map(|(e, _)| e.signal.step)
        .chain(core::iter::once(matching.reference_step));
    let window = (
        steps.clone().min().unwrap_or(0),
        steps.max().unwrap_or(0),
    );
    Ok(Miter {
        graph,
        externals: externals.into_iter().map(|(e, _)| e).collect(),
        outputs,
        root,
        source_inputs: mcid.source_inputs().to_vec(),
        golden_inputs: golden.input_names().map(ToString::to_string).collect(),
        window,
        reference_step: matching.reference_step,
        arrival_offsets: mcid.arrival_offsets().clone(),
    })
}

/// Counterexample: per-cycle input values and the diverging output.
///
/// Cycle `k` is the step `latest_step - k` of the (arrival-aligned) model,
/// so cycle 0 is the input vector applied closest to the observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedTrace {
    pub output_name: String,
    /// Output of the implementation.
    pub mcid_output: bool,
    pub golden_output: bool,
    /// Implementation primary inputs, in declaration order.
    pub inputs: Vec<String>,
    pub timed_assignment: BTreeMap<(String, u32), bool>,
    pub golden_assignment: BTreeMap<String, bool>,
    pub latest_step: i32,
    pub cycles: u32,
    pub arrival_offsets: BTreeMap<String, u32>,
}

impl TimedTrace {
    pub fn value(&self, input: &str, cycle: u32) -> Option<bool> {
        self.timed_assignment
            .get(&(input.to_string(), cycle))
            .copied()
    }

    /// Input wave that replays the trace on the source netlist, and the
    /// cycle at which its outputs must be read.
    pub fn replay_wave(&self) -> (WaveInput, usize) {
        let mut cells = Vec::new();
        for ((pi, cycle), &v) in &self.timed_assignment {
            let raw = self.latest_step - *cycle as i32
                + self.arrival_offsets.get(pi).copied().unwrap_or(0) as i32;
            cells.push((pi.as_str(), raw, v));
        }
        let min = cells.iter().map(|c| c.1).min().unwrap_or(0).min(0);
        let max = cells.iter().map(|c| c.1).max().unwrap_or(0).max(0);
        let observe = (-min) as usize;
        let mut wave = WaveInput::zeros(self.inputs.clone(), (max - min) as usize + 1);
        for (pi, raw, v) in cells {
            wave.set((raw - min) as usize, pi, v);
        }
        (wave, observe)
    }
}

fn bit(v: bool) -> char {
    if v {
        '1'
    } else {
        '0'
    }
}

impl fmt::Display for TimedTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in 0..self.cycles {
            write!(f, "CYCLE {}:", cycle)?;
            for pi in &self.inputs {
                if let Some(v) = self.value(pi, cycle) {
                    write!(f, " {}={}", pi, bit(v))?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "GOLDEN:")?;
        for (pi, &v) in &self.golden_assignment {
            write!(f, " {}={}", pi, bit(v))?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "OUTPUT {}: impl={} golden={}",
            self.output_name,
            bit(self.mcid_output),
            bit(self.golden_output)
        )
    }
}

/// Reads a counterexample off a model of the miter's input variables.
///
/// `output` restricts the reported output to one miter output.
pub fn extract_trace(miter: &Miter, inputs: &[bool], output: Option<usize>) -> TimedTrace {
    let values = miter.graph.evaluate(inputs);
    let chosen = match output {
        Some(i) => i,
        None => miter
            .outputs
            .iter()
            .position(|o| edge_value(&values, o.diff))
            .expect("model satisfies the miter root"),
    };
    let out = &miter.outputs[chosen];
    debug_assert!(edge_value(&values, out.diff));

    let mut external: BTreeMap<&TimedSignal, bool> = BTreeMap::new();
    for (i, e) in miter.externals.iter().enumerate() {
        external.insert(&e.signal, inputs[i]);
    }
    let mut golden_assignment = BTreeMap::new();
    for (i, e) in miter.externals.iter().enumerate() {
        if e.role != InputRole::Free && e.signal.step == miter.reference_step {
            golden_assignment.insert(e.signal.base.clone(), inputs[i]);
        }
    }
    let (earliest, latest) = miter.window;
    let cycles = (latest - earliest + 1) as u32;
    let mut timed_assignment = BTreeMap::new();
    for pi in &miter.source_inputs {
        for cycle in 0..cycles {
            let signal = TimedSignal::new(pi.as_str(), latest - cycle as i32);
            let v = external
                .get(&signal)
                .copied()
                .or_else(|| golden_assignment.get(pi).copied())
                .unwrap_or(false);
            timed_assignment.insert((pi.clone(), cycle), v);
        }
    }
    TimedTrace {
        output_name: out.name.clone(),
        mcid_output: edge_value(&values, out.implementation),
        golden_output: edge_value(&values, out.golden),
        inputs: miter.source_inputs.clone(),
        timed_assignment,
        golden_assignment,
        latest_step: latest,
        cycles,
        arrival_offsets: miter.arrival_offsets.clone(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Conflict budget over the whole check; `None` is unbounded.
    pub max_conflicts: Option<u64>,
    /// Solve each output's disequality separately, in output order.
    pub per_output: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub node_count: usize,
    pub variable_count: usize,
    pub clause_count: usize,
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    /// Filled in by callers that can read a clock.
    pub wall_time: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Equivalent,
    Inequivalent(TimedTrace),
    /// Resource limit reached; nothing was proven.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: SolveStats,
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        self.outcome == Outcome::Equivalent
    }

    pub fn trace(&self) -> Option<&TimedTrace> {
        match &self.outcome {
            Outcome::Inequivalent(t) => Some(t),
            _ => None,
        }
    }
}

pub fn check_equivalence(miter: &Miter, options: &SolveOptions) -> Verdict {
    check_equivalence_interruptible(miter, options, &mut || false)
}

/// Like [`check_equivalence`]; `interrupt` is polled every 256 conflicts and
/// stops the search with [`Outcome::Unknown`].
pub fn check_equivalence_interruptible(
    miter: &Miter,
    options: &SolveOptions,
    interrupt: &mut dyn FnMut() -> bool,
) -> Verdict {
    let mut stats = SolveStats {
        node_count: miter.graph.and_count(),
        ..SolveStats::default()
    };
    let goals: Vec<(Edge, Option<usize>)> = if options.per_output {
        (0..miter.outputs.len())
            .map(|i| (miter.outputs[i].diff, Some(i)))
            .collect()
    } else {
        vec![(miter.root, None)]
    };
    let n_inputs = miter.externals.len();
    let mut unknown = false;
    for (goal, output) in goals {
        let cnf = Cnf::encode(&miter.graph, goal);
        stats.variable_count = stats.variable_count.max(cnf.num_vars);
        stats.clause_count += cnf.clauses.len();
        let mut solver = Solver::new(cnf.num_vars);
        let consistent = cnf.clauses.iter().all(|c| solver.add_clause(c));
        let budget = options
            .max_conflicts
            .map(|m| m.saturating_sub(stats.conflicts));
        let result = if !consistent {
            SolveResult::Unsat
        } else if budget == Some(0) {
            SolveResult::Unknown
        } else {
            solver.solve(budget, interrupt)
        };
        let s = solver.stats();
        stats.decisions += s.decisions;
        stats.conflicts += s.conflicts;
        stats.propagations += s.propagations;
        match result {
            SolveResult::Unsat => {}
            SolveResult::Unknown => {
                unknown = true;
                if !options.per_output || budget == Some(0) {
                    break;
                }
            }
            SolveResult::Sat(model) => {
                let mut trace = extract_trace(miter, &model[..n_inputs], output);
                if !trace.mcid_output {
                    if let Some(t) = prefer_spurious_one(miter, &trace, options, &mut stats, interrupt) {
                        trace = t;
                    }
                }
                return Verdict {
                    outcome: Outcome::Inequivalent(trace),
                    stats,
                };
            }
        }
    }
    Verdict {
        outcome: if unknown {
            Outcome::Unknown
        } else {
            Outcome::Equivalent
        },
        stats,
    }
}

/// Looks for a counterexample on the same output where the implementation
/// reads 1 and the golden netlist 0, so reported traces have a canonical
/// polarity whenever both exist.
fn prefer_spurious_one(
    miter: &Miter,
    found: &TimedTrace,
    options: &SolveOptions,
    stats: &mut SolveStats,
    interrupt: &mut dyn FnMut() -> bool,
) -> Option<TimedTrace> {
    let k = miter.outputs.iter().position(|o| o.name == found.output_name)?;
    let out = &miter.outputs[k];
    let mut cnf = Cnf::encode(&miter.graph, out.diff);
    let (i, g) = (cnf.lit(out.implementation)?, cnf.lit(out.golden)?);
    cnf.clauses.push(vec![i]);
    cnf.clauses.push(vec![!g]);
    let budget = options
        .max_conflicts
        .map(|m| m.saturating_sub(stats.conflicts));
    if budget == Some(0) {
        return None;
    }
    let mut solver = Solver::new(cnf.num_vars);
    for c in &cnf.clauses {
        if !solver.add_clause(c) {
            return None;
        }
    }
    let result = solver.solve(budget, interrupt);
    let s = solver.stats();
    stats.decisions += s.decisions;
    stats.conflicts += s.conflicts;
    stats.propagations += s.propagations;
    stats.clause_count += cnf.clauses.len();
    match result {
        SolveResult::Sat(model) => Some(extract_trace(miter, &model[..miter.externals.len()], Some(k))),
        _ => None,
    }
}

/// Artifacts of one verification run.
#[derive(Clone, Debug)]
pub struct Verification {
    pub mcid: McidCircuit,
    pub matching: InputMatching,
    pub miter: Miter,
    pub verdict: Verdict,
}

/// MCID construction, arrival alignment, matching, miter and search.
pub fn verify(
    implementation: &Netlist,
    golden: &Netlist,
    profile: &TechnologyProfile,
    schedule: &ArrivalSchedule,
    options: &SolveOptions,
) -> Result<Verification, EquivError> {
    let raw = build_mcid(implementation, profile)?;
    let mcid = apply_itcl(&raw, schedule)?;
    let matching = match_inputs(&mcid, golden)?;
    let miter = build_miter(&mcid, golden, &matching)?;
    let verdict = check_equivalence(&miter, options);
    Ok(Verification {
        mcid,
        matching,
        miter,
        verdict,
    })
}
