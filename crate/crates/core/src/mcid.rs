//! Multi-cycle input dependency (MCID) model.
//!
//! The MCID model is a purely functional, time-unrolled copy of a clocked
//! netlist. Every signal is a net at a time step relative to the instant the
//! primary outputs are observed (step 0); step `-k` is `k` clock cycles
//! earlier. Construction walks backward from the outputs one clock cycle at a
//! time. A clocked gate producing a signal at step `t` reads its inputs at
//! `t - 1`; a non-clocked gate reads them at `t`. Non-clocked splitters are
//! skipped entirely and DFFs become buffers. Each (net, step) pair is created
//! once, so a gate is duplicated only when it reaches the outputs through
//! paths with different numbers of clocked gates.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use thiserror::Error;

use crate::netlist::{Driver, GateId, GateKind, LogicFn, NetId, Netlist};
use crate::profile::TechnologyProfile;

/// A net at a time step (`0` is the output observation instant).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimedSignal {
    pub base: String,
    pub step: i32,
}

impl TimedSignal {
    pub fn new(base: impl Into<String>, step: i32) -> Self {
        TimedSignal {
            base: base.into(),
            step,
        }
    }
}

/// Formats as `<base>@t<step>`, e.g. `a@t-2`.
impl fmt::Display for TimedSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@t{}", self.base, self.step)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalId(pub u32);

impl SignalId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateOrigin {
    /// Copy of a source-netlist gate.
    Source(GateId),
    /// Arrival-alignment buffer.
    Itcl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McidGate {
    pub function: LogicFn,
    pub inputs: Vec<SignalId>,
    pub output: SignalId,
    pub origin: GateOrigin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McidOutput {
    /// Primary-output name in the source netlist.
    pub name: String,
    pub signal: SignalId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McidError {
    #[error("unrolling reached step {step}, beyond the bound of {bound} clocked gates")]
    UnrollBound { step: i32, bound: usize },
    #[error("gate `{0}` is not a DFF")]
    NotADff(String),
}

/// The unrolled functional model.
#[derive(Clone, Debug)]
pub struct McidCircuit {
    pub(crate) name: String,
    pub(crate) signals: Vec<TimedSignal>,
    pub(crate) index: BTreeMap<TimedSignal, SignalId>,
    /// Topologically ordered.
    pub(crate) gates: Vec<McidGate>,
    /// Sorted by (base, step).
    pub(crate) inputs: Vec<SignalId>,
    pub(crate) outputs: Vec<McidOutput>,
    pub(crate) source_inputs: Vec<String>,
    pub(crate) arrival_offsets: BTreeMap<String, u32>,
}

impl McidCircuit {
    fn new(name: &str, source_inputs: Vec<String>) -> Self {
        McidCircuit {
            name: name.to_string(),
            signals: Vec::new(),
            index: BTreeMap::new(),
            gates: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            source_inputs,
            arrival_offsets: BTreeMap::new(),
        }
    }

    pub(crate) fn intern(&mut self, signal: TimedSignal) -> SignalId {
        if let Some(&id) = self.index.get(&signal) {
            return id;
        }
        let id = SignalId(self.signals.len() as u32);
        self.index.insert(signal.clone(), id);
        self.signals.push(signal);
        id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signal(&self, id: SignalId) -> &TimedSignal {
        &self.signals[id.index()]
    }

    pub fn lookup(&self, signal: &TimedSignal) -> Option<SignalId> {
        self.index.get(signal).copied()
    }

    pub fn gates(&self) -> &[McidGate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Timed primary inputs, sorted by name then step.
    pub fn inputs(&self) -> &[SignalId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[McidOutput] {
        &self.outputs
    }

    /// Primary-input names of the source netlist.
    pub fn source_inputs(&self) -> &[String] {
        &self.source_inputs
    }

    /// Arrival offset applied to a primary input by [`crate::itcl::apply_itcl`].
    pub fn input_offset(&self, pi: &str) -> u32 {
        self.arrival_offsets.get(pi).copied().unwrap_or(0)
    }

    pub fn arrival_offsets(&self) -> &BTreeMap<String, u32> {
        &self.arrival_offsets
    }

    /// Steps at which a primary input is read, ascending.
    pub fn occurrences(&self, pi: &str) -> Vec<i32> {
        self.inputs
            .iter()
            .map(|&i| self.signal(i))
            .filter(|s| s.base == pi)
            .map(|s| s.step)
            .collect()
    }

    /// `(earliest, latest)` step over the timed inputs.
    pub fn dependency_window(&self) -> Option<(i32, i32)> {
        let steps = self.inputs.iter().map(|&i| self.signal(i).step);
        let earliest = steps.clone().min()?;
        let latest = steps.max()?;
        Some((earliest, latest))
    }

    /// Evaluates the outputs given values for [`Self::inputs`], in order.
    pub fn evaluate(&self, input_values: &[bool]) -> Vec<bool> {
        let mut value = vec![false; self.signals.len()];
        for (&sig, &v) in self.inputs.iter().zip(input_values) {
            value[sig.index()] = v;
        }
        let mut pins = Vec::with_capacity(2);
        for gate in &self.gates {
            pins.clear();
            pins.extend(gate.inputs.iter().map(|s| value[s.index()]));
            value[gate.output.index()] = gate.function.eval(&pins);
        }
        self.outputs.iter().map(|o| value[o.signal.index()]).collect()
    }

    /// Re-sorts gates topologically (ties by current position) and inputs by
    /// name and step.
    pub(crate) fn normalize(&mut self) {
        let mut producer: BTreeMap<SignalId, usize> = BTreeMap::new();
        for (i, g) in self.gates.iter().enumerate() {
            producer.insert(g.output, i);
        }
        let mut pending = vec![0usize; self.gates.len()];
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            for s in &g.inputs {
                if let Some(&p) = producer.get(s) {
                    pending[i] += 1;
                    readers[p].push(i);
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> = pending
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == 0)
            .map(|(i, _)| Reverse(i))
            .collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for &r in &readers[i] {
                pending[r] -= 1;
                if pending[r] == 0 {
                    ready.push(Reverse(r));
                }
            }
        }
        debug_assert_eq!(order.len(), self.gates.len(), "MCID model is acyclic");
        let mut old: Vec<Option<McidGate>> = core::mem::take(&mut self.gates)
            .into_iter()
            .map(Some)
            .collect();
        self.gates = order
            .into_iter()
            .map(|i| old[i].take().expect("each gate placed once"))
            .collect();

        let signals = &self.signals;
        self.inputs.sort_by(|a, b| signals[a.index()].cmp(&signals[b.index()]));
    }
}

/// Follows non-clocked splitters back to the net they copy.
fn resolve(netlist: &Netlist, profile: &TechnologyProfile, mut net: NetId) -> NetId {
    while let Driver::Gate(g) = netlist.driver(net) {
        let gate = netlist.gate(g);
        if gate.kind == GateKind::Split && !profile.is_clocked(GateKind::Split) {
            net = gate.inputs[0];
        } else {
            break;
        }
    }
    net
}

/// Unrolls `netlist` backward from all primary outputs into one shared model.
pub fn build_mcid(
    netlist: &Netlist,
    profile: &TechnologyProfile,
) -> Result<McidCircuit, McidError> {
    let mut mcid = McidCircuit::new(
        netlist.name(),
        netlist.input_names().map(ToString::to_string).collect(),
    );
    let bound = netlist
        .gates()
        .iter()
        .filter(|g| profile.is_clocked(g.kind))
        .count()
        + 1;

    let mut queue: VecDeque<(NetId, i32)> = VecDeque::new();
    let mut seen: BTreeSet<(NetId, i32)> = BTreeSet::new();
    let timed = |mcid: &mut McidCircuit, net: NetId, step: i32| {
        mcid.intern(TimedSignal::new(netlist.net_name(net), step))
    };

    for &po in netlist.outputs() {
        let net = resolve(netlist, profile, po);
        let signal = timed(&mut mcid, net, 0);
        mcid.outputs.push(McidOutput {
            name: netlist.net_name(po).to_string(),
            signal,
        });
        if seen.insert((net, 0)) {
            queue.push_back((net, 0));
        }
    }

    while let Some((net, step)) = queue.pop_front() {
        let output = timed(&mut mcid, net, step);
        let g = match netlist.driver(net) {
            Driver::Input(_) => {
                mcid.inputs.push(output);
                continue;
            }
            Driver::Gate(g) => g,
        };
        let gate = netlist.gate(g);
        let in_step = if profile.is_clocked(gate.kind) {
            step - 1
        } else {
            step
        };
        if in_step.unsigned_abs() as usize > bound {
            return Err(McidError::UnrollBound {
                step: in_step,
                bound,
            });
        }
        let mut inputs = Vec::with_capacity(gate.inputs.len());
        for &pin in &gate.inputs {
            let src = resolve(netlist, profile, pin);
            inputs.push(timed(&mut mcid, src, in_step));
            if seen.insert((src, in_step)) {
                queue.push_back((src, in_step));
            }
        }
        mcid.gates.push(McidGate {
            function: gate.kind.function(),
            inputs,
            output,
            origin: GateOrigin::Source(g),
        });
    }

    mcid.normalize();
    Ok(mcid)
}

/// Upper bound on the gates a set of DFF removals adds to the MCID model.
///
/// For each removed DFF the nearest splitters upstream (the first splitter on
/// every backward path) are collected; each distinct splitter at logic level
/// `D` contributes `2^D - 1`, the size of a full binary fan-in tree of that
/// depth. Levels are taken in the netlist before removal.
pub fn mcid_size_upper_bound(
    netlist: &Netlist,
    profile: &TechnologyProfile,
    removed_dffs: &[GateId],
) -> Result<u64, McidError> {
    let levels = netlist.levels_with(|k| profile.is_clocked(k));
    let mut splitters: BTreeSet<GateId> = BTreeSet::new();
    for &dff in removed_dffs {
        let gate = netlist.gate(dff);
        if gate.kind != GateKind::Dff {
            return Err(McidError::NotADff(netlist.gate_name(dff).to_string()));
        }
        let mut stack = vec![gate.inputs[0]];
        let mut visited: BTreeSet<NetId> = BTreeSet::new();
        while let Some(net) = stack.pop() {
            if !visited.insert(net) {
                continue;
            }
            if let Driver::Gate(g) = netlist.driver(net) {
                let upstream = netlist.gate(g);
                if upstream.kind == GateKind::Split {
                    splitters.insert(g);
                } else {
                    stack.extend(upstream.inputs.iter().copied());
                }
            }
        }
    }
    Ok(splitters
        .iter()
        .map(|&s| {
            let depth = levels[netlist.gate(s).output.index()];
            1u64.checked_shl(depth).map_or(u64::MAX, |p| p - 1)
        })
        .fold(0u64, u64::saturating_add))
}
