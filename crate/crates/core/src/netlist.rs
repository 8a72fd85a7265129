//! Gate-level netlists.
//!
//! A [`Netlist`] is an acyclic graph of single-output gates over named nets.
//! Every net has exactly one driver: a primary input or a gate. Gate ids are
//! dense indices in declaration order; the user-facing name of a gate is the
//! name of the net it drives.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use thiserror::Error;

use crate::profile::TechnologyProfile;

/// Boolean function of a gate once clocking is ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicFn {
    And,
    Or,
    Xor,
    Nand,
    Nor,
    Xnor,
    Not,
    Identity,
}

impl LogicFn {
    pub fn arity(self) -> usize {
        match self {
            LogicFn::Not | LogicFn::Identity => 1,
            _ => 2,
        }
    }

    /// Evaluates the function. `inputs` must hold exactly `arity()` values.
    pub fn eval(self, inputs: &[bool]) -> bool {
        match self {
            LogicFn::Identity => inputs[0],
            LogicFn::Not => !inputs[0],
            LogicFn::And => inputs[0] & inputs[1],
            LogicFn::Or => inputs[0] | inputs[1],
            LogicFn::Xor => inputs[0] ^ inputs[1],
            LogicFn::Nand => !(inputs[0] & inputs[1]),
            LogicFn::Nor => !(inputs[0] | inputs[1]),
            LogicFn::Xnor => !(inputs[0] ^ inputs[1]),
        }
    }

    /// The library kind used when a functional gate is written out.
    pub fn as_kind(self) -> GateKind {
        match self {
            LogicFn::And => GateKind::And2,
            LogicFn::Or => GateKind::Or2,
            LogicFn::Xor => GateKind::Xor2,
            LogicFn::Nand => GateKind::Nand2,
            LogicFn::Nor => GateKind::Nor2,
            LogicFn::Xnor => GateKind::Xnor2,
            LogicFn::Not => GateKind::Inv,
            LogicFn::Identity => GateKind::Buf,
        }
    }
}

/// The fixed gate library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    And2,
    Or2,
    Xor2,
    Nand2,
    Nor2,
    Xnor2,
    Inv,
    Buf,
    Dff,
    Split,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::And2,
        GateKind::Or2,
        GateKind::Xor2,
        GateKind::Nand2,
        GateKind::Nor2,
        GateKind::Xnor2,
        GateKind::Inv,
        GateKind::Buf,
        GateKind::Dff,
        GateKind::Split,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And2 => "AND2",
            GateKind::Or2 => "OR2",
            GateKind::Xor2 => "XOR2",
            GateKind::Nand2 => "NAND2",
            GateKind::Nor2 => "NOR2",
            GateKind::Xnor2 => "XNOR2",
            GateKind::Inv => "INV",
            GateKind::Buf => "BUF",
            GateKind::Dff => "DFF",
            GateKind::Split => "SPLIT",
        }
    }

    /// Case-insensitive lookup by library name.
    pub fn from_name(name: &str) -> Option<GateKind> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(name))
    }

    pub fn arity(self) -> usize {
        self.function().arity()
    }

    /// Clockedness before any technology profile overrides it: everything
    /// except the splitter consumes a clock pulse.
    pub fn is_clocked(self) -> bool {
        self != GateKind::Split
    }

    /// DFF and SPLIT both compute identity.
    pub fn function(self) -> LogicFn {
        match self {
            GateKind::And2 => LogicFn::And,
            GateKind::Or2 => LogicFn::Or,
            GateKind::Xor2 => LogicFn::Xor,
            GateKind::Nand2 => LogicFn::Nand,
            GateKind::Nor2 => LogicFn::Nor,
            GateKind::Xnor2 => LogicFn::Xnor,
            GateKind::Inv => LogicFn::Not,
            GateKind::Buf | GateKind::Dff | GateKind::Split => LogicFn::Identity,
        }
    }

    /// Everything except DFF and SPLIT, the kinds a golden netlist may use.
    pub fn is_logic(self) -> bool {
        !matches!(self, GateKind::Dff | GateKind::Split)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NetId(pub u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateId(pub u32);

impl GateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

/// What drives a net.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    /// Primary input, by position in the input list.
    Input(usize),
    Gate(GateId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("net `{0}` has more than one driver")]
    DuplicateDriver(String),
    #[error("net `{0}` is read but never driven")]
    UndrivenNet(String),
    #[error("combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("gate `{gate}` of kind {kind} takes {expected} inputs, got {found}")]
    ArityMismatch {
        gate: String,
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("output `{0}` declared twice")]
    DuplicateOutput(String),
    #[error("unknown net `{0}`")]
    UnknownNet(String),
}

/// Collects declarations and validates them into a [`Netlist`].
#[derive(Clone, Debug, Default)]
pub struct NetlistBuilder {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<(GateKind, String, Vec<String>)>,
}

impl NetlistBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NetlistBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn input(&mut self, name: impl Into<String>) -> &mut Self {
        self.inputs.push(name.into());
        self
    }

    pub fn output(&mut self, name: impl Into<String>) -> &mut Self {
        self.outputs.push(name.into());
        self
    }

    pub fn gate<S: AsRef<str>>(
        &mut self,
        kind: GateKind,
        output: impl Into<String>,
        inputs: &[S],
    ) -> &mut Self {
        self.gates.push((
            kind,
            output.into(),
            inputs.iter().map(|s| s.as_ref().to_string()).collect(),
        ));
        self
    }

    pub fn build(&self) -> Result<Netlist, NetlistError> {
        let mut nets: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, NetId> = BTreeMap::new();
        let mut drivers: Vec<Driver> = Vec::new();

        let mut declare = |name: &str, driver: Driver| -> Result<NetId, NetlistError> {
            if index.contains_key(name) {
                return Err(NetlistError::DuplicateDriver(name.to_string()));
            }
            let id = NetId(nets.len() as u32);
            nets.push(name.to_string());
            index.insert(name.to_string(), id);
            drivers.push(driver);
            Ok(id)
        };

        let mut inputs = Vec::with_capacity(self.inputs.len());
        for (i, name) in self.inputs.iter().enumerate() {
            inputs.push(declare(name, Driver::Input(i))?);
        }
        let mut outs = Vec::with_capacity(self.gates.len());
        for (g, (kind, out, ins)) in self.gates.iter().enumerate() {
            if ins.len() != kind.arity() {
                return Err(NetlistError::ArityMismatch {
                    gate: out.clone(),
                    kind: *kind,
                    expected: kind.arity(),
                    found: ins.len(),
                });
            }
            outs.push(declare(out, Driver::Gate(GateId(g as u32)))?);
        }

        let lookup = |name: &str| -> Result<NetId, NetlistError> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| NetlistError::UndrivenNet(name.to_string()))
        };

        let mut gates = Vec::with_capacity(self.gates.len());
        let mut readers: Vec<Vec<GateId>> = vec![Vec::new(); nets.len()];
        for (g, ((kind, _, ins), out)) in self.gates.iter().zip(outs).enumerate() {
            let mut pins = Vec::with_capacity(ins.len());
            for name in ins {
                let net = lookup(name)?;
                readers[net.index()].push(GateId(g as u32));
                pins.push(net);
            }
            gates.push(Gate {
                kind: *kind,
                inputs: pins,
                output: out,
            });
        }

        let mut outputs = Vec::with_capacity(self.outputs.len());
        for name in &self.outputs {
            let net = lookup(name)?;
            if outputs.contains(&net) {
                return Err(NetlistError::DuplicateOutput(name.clone()));
            }
            outputs.push(net);
        }

        let topo = topo_sort(&gates, &drivers, &readers).map_err(|g| {
            NetlistError::Cycle(nets[gates[g.index()].output.index()].clone())
        })?;

        Ok(Netlist {
            name: self.name.clone(),
            nets,
            index,
            drivers,
            readers,
            inputs,
            outputs,
            gates,
            topo,
        })
    }
}

/// Kahn's algorithm with a min-heap so ties go to the lowest gate id.
/// On failure returns a gate that sits on a cycle.
fn topo_sort(
    gates: &[Gate],
    drivers: &[Driver],
    readers: &[Vec<GateId>],
) -> Result<Vec<GateId>, GateId> {
    let mut pending: Vec<usize> = gates
        .iter()
        .map(|g| {
            g.inputs
                .iter()
                .filter(|n| matches!(drivers[n.index()], Driver::Gate(_)))
                .count()
        })
        .collect();
    let mut ready: BinaryHeap<Reverse<GateId>> = pending
        .iter()
        .enumerate()
        .filter(|(_, &p)| p == 0)
        .map(|(g, _)| Reverse(GateId(g as u32)))
        .collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(Reverse(g)) = ready.pop() {
        order.push(g);
        for &r in &readers[gates[g.index()].output.index()] {
            pending[r.index()] -= 1;
            if pending[r.index()] == 0 {
                ready.push(Reverse(r));
            }
        }
    }
    if order.len() == gates.len() {
        Ok(order)
    } else {
        let stuck = pending.iter().position(|&p| p > 0).unwrap_or(0);
        Err(GateId(stuck as u32))
    }
}

/// A validated, acyclic, single-driver netlist.
#[derive(Clone, Debug)]
pub struct Netlist {
    name: String,
    nets: Vec<String>,
    index: BTreeMap<String, NetId>,
    drivers: Vec<Driver>,
    readers: Vec<Vec<GateId>>,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    gates: Vec<Gate>,
    topo: Vec<GateId>,
}

impl Netlist {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn input_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.inputs.iter().map(|&n| self.net_name(n))
    }

    pub fn output_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.outputs.iter().map(|&n| self.net_name(n))
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn num_nets(&self) -> usize {
        self.nets.len()
    }

    pub fn net_name(&self, net: NetId) -> &str {
        &self.nets[net.index()]
    }

    pub fn net(&self, name: &str) -> Option<NetId> {
        self.index.get(name).copied()
    }

    pub fn driver(&self, net: NetId) -> Driver {
        self.drivers[net.index()]
    }

    /// Gate readers of a net, one entry per input pin.
    pub fn readers(&self, net: NetId) -> &[GateId] {
        &self.readers[net.index()]
    }

    pub fn is_input(&self, net: NetId) -> bool {
        matches!(self.drivers[net.index()], Driver::Input(_))
    }

    pub fn is_output(&self, net: NetId) -> bool {
        self.outputs.contains(&net)
    }

    /// The id of a gate is the name of the net it drives.
    pub fn gate_name(&self, id: GateId) -> &str {
        self.net_name(self.gates[id.index()].output)
    }

    pub fn gate_by_name(&self, name: &str) -> Option<GateId> {
        match self.driver(self.net(name)?) {
            Driver::Gate(g) => Some(g),
            Driver::Input(_) => None,
        }
    }

    /// Sinks of a net: gate input pins plus primary-output references.
    pub fn fanout(&self, net: NetId) -> usize {
        self.readers[net.index()].len() + self.outputs.iter().filter(|&&o| o == net).count()
    }

    /// Gates ordered so every gate follows the drivers of its inputs;
    /// ties are broken by gate id.
    pub fn topological_order(&self) -> &[GateId] {
        &self.topo
    }

    /// Logic level of every net (indexed by [`NetId`]): the largest number
    /// of clocked gates on any path from a primary input.
    pub fn levels_with(&self, clocked: impl Fn(GateKind) -> bool) -> Vec<u32> {
        let mut level = vec![0u32; self.nets.len()];
        for &g in &self.topo {
            let gate = &self.gates[g.index()];
            let max_in = gate
                .inputs
                .iter()
                .map(|n| level[n.index()])
                .max()
                .unwrap_or(0);
            level[gate.output.index()] = max_in + u32::from(clocked(gate.kind));
        }
        level
    }

    /// Logic level using the library's default clocking (splitters are free).
    pub fn logic_level(&self, net: &str) -> Result<u32, NetlistError> {
        self.logic_level_in(net, |k| k.is_clocked())
    }

    /// Logic level under a technology profile's clocking.
    pub fn logic_level_for(
        &self,
        net: &str,
        profile: &TechnologyProfile,
    ) -> Result<u32, NetlistError> {
        self.logic_level_in(net, |k| profile.is_clocked(k))
    }

    fn logic_level_in(
        &self,
        net: &str,
        clocked: impl Fn(GateKind) -> bool,
    ) -> Result<u32, NetlistError> {
        let id = self
            .net(net)
            .ok_or_else(|| NetlistError::UnknownNet(net.to_string()))?;
        Ok(self.levels_with(clocked)[id.index()])
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// A builder holding this netlist's declarations, for rewriting.
    pub fn to_builder(&self) -> NetlistBuilder {
        let mut b = NetlistBuilder::new(self.name.clone());
        for name in self.input_names() {
            b.input(name);
        }
        for name in self.output_names() {
            b.output(name);
        }
        for gate in &self.gates {
            let ins: Vec<&str> = gate.inputs.iter().map(|&n| self.net_name(n)).collect();
            b.gate(gate.kind, self.net_name(gate.output), &ins);
        }
        b
    }
}
