//! Reference engines: a unit-delay simulator for clocked netlists, a
//! combinational evaluator, and an exhaustive equivalence oracle.
//!
//! Simulation is bit-parallel: every net carries a `u64` word, one input
//! pattern per lane.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::itcl::{ArrivalSchedule, ItclError};
use crate::netlist::{Driver, GateId, GateKind, LogicFn, NetId, Netlist};
use crate::profile::TechnologyProfile;

/// Largest number of free bits [`exhaustive_equivalence`] will enumerate.
pub const MAX_ORACLE_BITS: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("wave has no value for input `{0}`")]
    MissingInput(String),
    #[error("`{0}` is not a primary input")]
    UnknownInput(String),
    #[error("expected {expected} input values, got {found}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("gate `{0}` is a {1}; a golden netlist must be combinational")]
    ClockedGate(String, GateKind),
    #[error("output mismatch: {0}")]
    OutputMismatch(String),
    #[error("{bits} free input bits exceed the oracle limit of {limit}")]
    WindowTooLarge { bits: u32, limit: u32 },
    #[error(transparent)]
    Schedule(#[from] ItclError),
}

/// Per-cycle primary-input values, cycle 0 first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveInput {
    inputs: Vec<String>,
    cycles: Vec<Vec<bool>>,
}

impl WaveInput {
    pub fn new(inputs: Vec<String>) -> Self {
        WaveInput {
            inputs,
            cycles: Vec::new(),
        }
    }

    pub fn zeros(inputs: Vec<String>, len: usize) -> Self {
        let width = inputs.len();
        WaveInput {
            inputs,
            cycles: vec![vec![false; width]; len],
        }
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycle(&self, t: usize) -> &[bool] {
        &self.cycles[t]
    }

    /// Appends a cycle given in [`Self::inputs`] order.
    pub fn push(&mut self, values: Vec<bool>) -> Result<(), SimError> {
        if values.len() != self.inputs.len() {
            return Err(SimError::AssignmentLength {
                expected: self.inputs.len(),
                found: values.len(),
            });
        }
        self.cycles.push(values);
        Ok(())
    }

    /// Appends a cycle given by name; every input must be covered.
    pub fn push_named(&mut self, values: &BTreeMap<String, bool>) -> Result<(), SimError> {
        for name in values.keys() {
            if !self.inputs.contains(name) {
                return Err(SimError::UnknownInput(name.clone()));
            }
        }
        let row = self
            .inputs
            .iter()
            .map(|i| {
                values
                    .get(i)
                    .copied()
                    .ok_or_else(|| SimError::MissingInput(i.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.cycles.push(row);
        Ok(())
    }

    pub fn get(&self, t: usize, input: &str) -> Option<bool> {
        let i = self.inputs.iter().position(|n| n == input)?;
        self.cycles.get(t).map(|row| row[i])
    }

    /// Sets one value; unknown inputs and cycles are ignored.
    pub fn set(&mut self, t: usize, input: &str, value: bool) {
        if let Some(i) = self.inputs.iter().position(|n| n == input) {
            if let Some(row) = self.cycles.get_mut(t) {
                row[i] = value;
            }
        }
    }
}

fn eval_word(f: LogicFn, ins: &[u64]) -> u64 {
    match f {
        LogicFn::Identity => ins[0],
        LogicFn::Not => !ins[0],
        LogicFn::And => ins[0] & ins[1],
        LogicFn::Or => ins[0] | ins[1],
        LogicFn::Xor => ins[0] ^ ins[1],
        LogicFn::Nand => !(ins[0] & ins[1]),
        LogicFn::Nor => !(ins[0] | ins[1]),
        LogicFn::Xnor => !(ins[0] ^ ins[1]),
    }
}

/// Runs `cycles` clock cycles and returns the output words of each cycle.
fn run_words(
    netlist: &Netlist,
    profile: &TechnologyProfile,
    cycles: usize,
    mut input_word: impl FnMut(usize, usize) -> u64,
) -> Vec<Vec<u64>> {
    let order = netlist.topological_order();
    let clocked: Vec<GateId> = order
        .iter()
        .copied()
        .filter(|&g| profile.is_clocked(netlist.gate(g).kind))
        .collect();
    let combinational: Vec<GateId> = order
        .iter()
        .copied()
        .filter(|&g| !profile.is_clocked(netlist.gate(g).kind))
        .collect();
    let mut prev = vec![0u64; netlist.num_nets()];
    let mut cur = vec![0u64; netlist.num_nets()];
    let mut pins = Vec::with_capacity(2);
    let mut out = Vec::with_capacity(cycles);
    for t in 0..cycles {
        for (i, &pi) in netlist.inputs().iter().enumerate() {
            cur[pi.index()] = input_word(t, i);
        }
        for &g in &clocked {
            let gate = netlist.gate(g);
            pins.clear();
            pins.extend(gate.inputs.iter().map(|n| prev[n.index()]));
            cur[gate.output.index()] = eval_word(gate.kind.function(), &pins);
        }
        for &g in &combinational {
            let gate = netlist.gate(g);
            pins.clear();
            pins.extend(gate.inputs.iter().map(|n| cur[n.index()]));
            cur[gate.output.index()] = eval_word(gate.kind.function(), &pins);
        }
        out.push(netlist.outputs().iter().map(|o| cur[o.index()]).collect());
        core::mem::swap(&mut prev, &mut cur);
    }
    out
}

/// Largest number of clocked gates on any input-to-output path.
pub fn depth(netlist: &Netlist, profile: &TechnologyProfile) -> usize {
    let levels = netlist.levels_with(|k| profile.is_clocked(k));
    netlist
        .outputs()
        .iter()
        .map(|o| levels[o.index()] as usize)
        .max()
        .unwrap_or(0)
}

fn input_columns(netlist: &Netlist, wave: &WaveInput) -> Result<Vec<usize>, SimError> {
    for name in wave.inputs() {
        if netlist.net(name).is_none_or(|n| !netlist.is_input(n)) {
            return Err(SimError::UnknownInput(name.clone()));
        }
    }
    netlist
        .input_names()
        .map(|name| {
            wave.inputs()
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| SimError::MissingInput(name.to_string()))
        })
        .collect()
}

/// Unit-delay simulation from an all-zero state.
///
/// Returns the output values of cycles `0..wave.len() + depth`; inputs are
/// 0 after the wave ends.
pub fn simulate(
    netlist: &Netlist,
    profile: &TechnologyProfile,
    wave: &WaveInput,
) -> Result<Vec<Vec<bool>>, SimError> {
    let columns = input_columns(netlist, wave)?;
    let cycles = wave.len() + depth(netlist, profile);
    let words = run_words(netlist, profile, cycles, |t, i| {
        if t < wave.len() && wave.cycle(t)[columns[i]] {
            !0
        } else {
            0
        }
    });
    Ok(words
        .into_iter()
        .map(|row| row.into_iter().map(|w| w & 1 == 1).collect())
        .collect())
}

fn golden_words(golden: &Netlist, inputs: &[u64]) -> Vec<u64> {
    let mut value = vec![0u64; golden.num_nets()];
    for (&pi, &w) in golden.inputs().iter().zip(inputs) {
        value[pi.index()] = w;
    }
    let mut pins = Vec::with_capacity(2);
    for &g in golden.topological_order() {
        let gate = golden.gate(g);
        pins.clear();
        pins.extend(gate.inputs.iter().map(|n| value[n.index()]));
        value[gate.output.index()] = eval_word(gate.kind.function(), &pins);
    }
    golden.outputs().iter().map(|o| value[o.index()]).collect()
}

fn require_combinational(golden: &Netlist) -> Result<(), SimError> {
    for (i, gate) in golden.gates().iter().enumerate() {
        if !gate.kind.is_logic() {
            return Err(SimError::ClockedGate(
                golden.gate_name(GateId(i as u32)).to_string(),
                gate.kind,
            ));
        }
    }
    Ok(())
}

/// Evaluates every gate as its logic function, ignoring clocking
/// (DFF and SPLIT pass their input through). Inputs in declaration order.
pub fn evaluate_functional(netlist: &Netlist, inputs: &[bool]) -> Result<Vec<bool>, SimError> {
    if inputs.len() != netlist.inputs().len() {
        return Err(SimError::AssignmentLength {
            expected: netlist.inputs().len(),
            found: inputs.len(),
        });
    }
    let words: Vec<u64> = inputs.iter().map(|&b| if b { 1 } else { 0 }).collect();
    Ok(golden_words(netlist, &words)
        .into_iter()
        .map(|w| w & 1 == 1)
        .collect())
}

/// Combinational evaluation of a golden netlist. Inputs in declaration order.
pub fn evaluate_golden(golden: &Netlist, inputs: &[bool]) -> Result<Vec<bool>, SimError> {
    require_combinational(golden)?;
    evaluate_functional(golden, inputs)
}

/// A mismatching input sequence found by [`exhaustive_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub wave: WaveInput,
    /// Cycle at which the implementation's outputs are compared.
    pub observe_cycle: usize,
    /// Golden input values, in the golden netlist's declaration order.
    pub golden_inputs: Vec<bool>,
    pub output: String,
    pub implementation_value: bool,
    pub golden_value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    /// Free bits enumerated.
    pub bits: u32,
    /// First mismatch in enumeration order, if any.
    pub witness: Option<Witness>,
}

impl OracleVerdict {
    pub fn is_equivalent(&self) -> bool {
        self.witness.is_none()
    }
}

/// (input index, step) pairs some output depends on, relative to the output
/// observation at step 0.
fn relevant_cells(netlist: &Netlist, profile: &TechnologyProfile) -> BTreeSet<(usize, i32)> {
    let mut cells = BTreeSet::new();
    let mut seen: BTreeSet<(NetId, i32)> = BTreeSet::new();
    let mut stack: Vec<(NetId, i32)> = netlist.outputs().iter().map(|&o| (o, 0)).collect();
    while let Some((net, step)) = stack.pop() {
        if !seen.insert((net, step)) {
            continue;
        }
        match netlist.driver(net) {
            Driver::Input(i) => {
                cells.insert((i, step));
            }
            Driver::Gate(g) => {
                let gate = netlist.gate(g);
                let s = if profile.is_clocked(gate.kind) {
                    step - 1
                } else {
                    step
                };
                stack.extend(gate.inputs.iter().map(|&n| (n, s)));
            }
        }
    }
    cells
}

const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn bit_word(bit: usize, word: u64) -> u64 {
    if bit < 6 {
        LANE_PATTERNS[bit]
    } else if word >> (bit - 6) & 1 == 1 {
        !0
    } else {
        0
    }
}

/// Enumerates every input sequence the outputs can observe and compares the
/// simulated implementation against the golden netlist.
///
/// Each input's cells are shifted by its arrival offset; golden inputs take
/// their value from the shifted step holding the most golden inputs (ties to
/// the latest step), or are free when the implementation never reads them
/// there. Outputs are compared at the cycle the earliest relevant input
/// reaches them.
pub fn exhaustive_equivalence(
    netlist: &Netlist,
    golden: &Netlist,
    profile: &TechnologyProfile,
    schedule: &ArrivalSchedule,
) -> Result<OracleVerdict, SimError> {
    require_combinational(golden)?;
    let pi_names: Vec<&str> = netlist.input_names().collect();
    for g in golden.input_names() {
        if !pi_names.contains(&g) {
            return Err(SimError::UnknownInput(g.to_string()));
        }
    }
    let impl_outputs: Vec<&str> = netlist.output_names().collect();
    let golden_outputs: Vec<&str> = golden.output_names().collect();
    let mut golden_of_output = Vec::with_capacity(impl_outputs.len());
    for name in &impl_outputs {
        let pos = golden_outputs
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| SimError::OutputMismatch(alloc::format!("`{}` not in golden", name)))?;
        golden_of_output.push(pos);
    }
    if let Some(extra) = golden_outputs.iter().find(|g| !impl_outputs.contains(g)) {
        return Err(SimError::OutputMismatch(alloc::format!(
            "`{}` not in implementation",
            extra
        )));
    }
    let offsets = schedule.offsets(&pi_names)?;
    let offset = |i: usize| offsets[pi_names[i]] as i32;

    let cells: Vec<(usize, i32)> = relevant_cells(netlist, profile).into_iter().collect();
    let golden_pi: Vec<usize> = golden
        .input_names()
        .map(|g| pi_names.iter().position(|p| *p == g).expect("checked above"))
        .collect();

    let mut per_step: BTreeMap<i32, usize> = BTreeMap::new();
    for &(i, raw) in &cells {
        if golden_pi.contains(&i) {
            *per_step.entry(raw - offset(i)).or_insert(0) += 1;
        }
    }
    let reference = per_step
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .map(|(&s, _)| s)
        .or_else(|| cells.iter().map(|&(i, raw)| raw - offset(i)).max())
        .unwrap_or(0);

    let mut bits = cells.len();
    let golden_bit: Vec<usize> = golden_pi
        .iter()
        .map(|&i| {
            let raw = reference + offset(i);
            cells.iter().position(|&c| c == (i, raw)).unwrap_or_else(|| {
                bits += 1;
                bits - 1
            })
        })
        .collect();
    if bits as u32 > MAX_ORACLE_BITS {
        return Err(SimError::WindowTooLarge {
            bits: bits as u32,
            limit: MAX_ORACLE_BITS,
        });
    }

    let observe = cells.iter().map(|&(_, raw)| -raw).max().unwrap_or(0).max(0) as usize;
    let mut cell_at: Vec<Vec<Option<usize>>> = vec![vec![None; pi_names.len()]; observe + 1];
    for (b, &(i, raw)) in cells.iter().enumerate() {
        cell_at[(observe as i32 + raw) as usize][i] = Some(b);
    }

    let patterns = 1u64 << bits;
    let words = patterns.div_ceil(64);
    let valid_last = if patterns >= 64 {
        !0
    } else {
        (1u64 << patterns) - 1
    };
    for w in 0..words {
        let impl_out = run_words(netlist, profile, observe + 1, |t, i| {
            cell_at[t][i].map_or(0, |b| bit_word(b, w))
        });
        let golden_in: Vec<u64> = golden_bit.iter().map(|&b| bit_word(b, w)).collect();
        let golden_out = golden_words(golden, &golden_in);
        let row = &impl_out[observe];
        let mut diff = 0u64;
        for (k, &g) in golden_of_output.iter().enumerate() {
            diff |= row[k] ^ golden_out[g];
        }
        if w == words - 1 {
            diff &= valid_last;
        }
        if diff == 0 {
            continue;
        }
        let lane = diff.trailing_zeros();
        let pattern = w * 64 + lane as u64;
        let value = |b: usize| pattern >> b & 1 == 1;
        let mut wave = WaveInput::zeros(
            pi_names.iter().map(|s| s.to_string()).collect(),
            observe + 1,
        );
        for (b, &(i, raw)) in cells.iter().enumerate() {
            wave.set((observe as i32 + raw) as usize, pi_names[i], value(b));
        }
        let k = (0..golden_of_output.len())
            .find(|&k| (row[k] ^ golden_out[golden_of_output[k]]) >> lane & 1 == 1)
            .expect("some output differs");
        return Ok(OracleVerdict {
            bits: bits as u32,
            witness: Some(Witness {
                wave,
                observe_cycle: observe,
                golden_inputs: golden_bit.iter().map(|&b| value(b)).collect(),
                output: impl_outputs[k].to_string(),
                implementation_value: row[k] >> lane & 1 == 1,
                golden_value: golden_out[golden_of_output[k]] >> lane & 1 == 1,
            }),
        });
    }
    Ok(OracleVerdict {
        bits: bits as u32,
        witness: None,
    })
}
