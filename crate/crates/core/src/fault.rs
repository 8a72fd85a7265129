//! Seeded injection of functional and structural design errors.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::netlist::{GateId, GateKind, NetId, Netlist, NetlistBuilder, NetlistError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaultKind {
    /// Replace a logic gate by another kind of the same arity.
    SwapGate,
    /// Bypass a DFF.
    RemoveDff,
    /// Bypass a splitter, leaving its source with extra readers.
    RemoveSplitter,
}

impl FaultKind {
    pub const ALL: [FaultKind; 3] = [FaultKind::SwapGate, FaultKind::RemoveDff, FaultKind::RemoveSplitter];

    pub fn name(self) -> &'static str {
        match self {
            FaultKind::SwapGate => "SwapGate",
            FaultKind::RemoveDff => "RemoveDff",
            FaultKind::RemoveSplitter => "RemoveSplitter",
        }
    }

    /// Case-insensitive; also accepts `swap-gate` style names.
    pub fn from_name(s: &str) -> Option<FaultKind> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .map(|c| c.to_ascii_lowercase())
            .collect();
        FaultKind::ALL
            .into_iter()
            .find(|k| k.name().to_ascii_lowercase() == key)
    }
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// A gate, named by the net it drives.
    Gate(String),
    /// Uniform over eligible gates.
    Random,
    /// Uniform over eligible DFFs in the top quartile of logic level.
    NearOutputs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultSpec {
    pub kind: FaultKind,
    pub target: Target,
    /// Swap only; a random same-arity kind when absent.
    pub replacement: Option<GateKind>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultDescription {
    pub kind: FaultKind,
    pub target: String,
    pub detail: String,
}

/// `FAULT <kind> <target> <detail>`
impl fmt::Display for FaultDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FAULT {} {} {}", self.kind, self.target, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaultError {
    #[error("no gate is eligible for {0}")]
    NoEligibleTarget(FaultKind),
    #[error("no gate drives `{0}`")]
    UnknownGate(String),
    #[error("gate `{gate}` is not eligible for {kind}: {reason}")]
    NotEligible {
        gate: String,
        kind: FaultKind,
        reason: &'static str,
    },
    #[error("cannot swap {found} gate `{gate}` for {replacement}: arity differs")]
    ArityMismatch {
        gate: String,
        found: GateKind,
        replacement: GateKind,
    },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

fn removable(netlist: &Netlist, g: GateId, kind: GateKind) -> Result<(), &'static str> {
    let gate = netlist.gate(g);
    if gate.kind != kind {
        return Err("wrong gate kind");
    }
    if netlist.is_output(gate.output) {
        let src = gate.inputs[0];
        if netlist.is_input(src) || netlist.is_output(src) {
            return Err("drives an output directly from an input or output");
        }
    }
    Ok(())
}

fn swappable(netlist: &Netlist, g: GateId, replacement: Option<GateKind>) -> Result<(), &'static str> {
    let kind = netlist.gate(g).kind;
    if !kind.is_logic() {
        return Err("not a logic gate");
    }
    match replacement {
        Some(r) if r == kind => Err("replacement equals the current kind"),
        Some(r) if r.arity() != kind.arity() => Err("arity differs"),
        _ => Ok(()),
    }
}

fn eligible(netlist: &Netlist, spec: &FaultSpec, g: GateId) -> Result<(), &'static str> {
    match spec.kind {
        FaultKind::SwapGate => swappable(netlist, g, spec.replacement),
        FaultKind::RemoveDff => removable(netlist, g, GateKind::Dff),
        FaultKind::RemoveSplitter => removable(netlist, g, GateKind::Split),
    }
}

/// Gates in the top quartile of logic level, or the deepest ones when the
/// quartile is empty.
fn near_outputs(netlist: &Netlist, candidates: Vec<GateId>) -> Vec<GateId> {
    let levels = netlist.levels_with(GateKind::is_clocked);
    let level = |g: GateId| levels[netlist.gate(g).output.index()];
    let max = netlist
        .outputs()
        .iter()
        .map(|o| levels[o.index()])
        .max()
        .unwrap_or(0);
    let top: Vec<GateId> = candidates
        .iter()
        .copied()
        .filter(|&g| 4 * level(g) >= 3 * max)
        .collect();
    if !top.is_empty() {
        return top;
    }
    let deepest = candidates.iter().map(|&g| level(g)).max().unwrap_or(0);
    candidates.into_iter().filter(|&g| level(g) == deepest).collect()
}

/// Rebuilds `netlist` without gate `g`, wiring its input through.
fn bypass(netlist: &Netlist, g: GateId) -> Result<Netlist, NetlistError> {
    let gate = netlist.gate(g);
    let (src, dst) = (gate.inputs[0], gate.output);
    // An output keeps its name: the source net is renamed to it instead.
    let (from, to): (NetId, NetId) = if netlist.is_output(dst) {
        (src, dst)
    } else {
        (dst, src)
    };
    let name = |n: NetId| {
        if n == from {
            netlist.net_name(to)
        } else {
            netlist.net_name(n)
        }
    };
    let mut b = NetlistBuilder::new(netlist.name());
    for pi in netlist.input_names() {
        b.input(pi);
    }
    for po in netlist.output_names() {
        b.output(po);
    }
    for (i, other) in netlist.gates().iter().enumerate() {
        if i == g.index() {
            continue;
        }
        let ins: Vec<&str> = other.inputs.iter().map(|&n| name(n)).collect();
        b.gate(other.kind, name(other.output), &ins);
    }
    b.build()
}

/// Applies one fault. Deterministic for a fixed `spec.seed`.
pub fn inject(netlist: &Netlist, spec: &FaultSpec) -> Result<(Netlist, FaultDescription), FaultError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let target = match &spec.target {
        Target::Gate(name) => {
            let g = netlist
                .gate_by_name(name)
                .ok_or_else(|| FaultError::UnknownGate(name.clone()))?;
            if let (FaultKind::SwapGate, Some(r)) = (spec.kind, spec.replacement) {
                let found = netlist.gate(g).kind;
                if found.is_logic() && r.arity() != found.arity() {
                    return Err(FaultError::ArityMismatch {
                        gate: name.clone(),
                        found,
                        replacement: r,
                    });
                }
            }
            eligible(netlist, spec, g).map_err(|reason| FaultError::NotEligible {
                gate: name.clone(),
                kind: spec.kind,
                reason,
            })?;
            g
        }
        Target::Random | Target::NearOutputs => {
            let mut candidates: Vec<GateId> = (0..netlist.gates().len() as u32)
                .map(GateId)
                .filter(|&g| eligible(netlist, spec, g).is_ok())
                .collect();
            if spec.target == Target::NearOutputs {
                candidates = near_outputs(netlist, candidates);
            }
            *candidates
                .choose(&mut rng)
                .ok_or(FaultError::NoEligibleTarget(spec.kind))?
        }
    };
    let target_name = netlist.gate_name(target).to_string();
    let gate = netlist.gate(target);

    let (faulty, detail) = match spec.kind {
        FaultKind::SwapGate => {
            let replacement = match spec.replacement {
                Some(r) => r,
                None => {
                    let options: Vec<GateKind> = GateKind::ALL
                        .into_iter()
                        .filter(|&k| k.is_logic() && k != gate.kind && k.arity() == gate.kind.arity())
                        .collect();
                    options[rng.gen_range(0..options.len())]
                }
            };
            let mut b = NetlistBuilder::new(netlist.name());
            for pi in netlist.input_names() {
                b.input(pi);
            }
            for po in netlist.output_names() {
                b.output(po);
            }
            for (i, other) in netlist.gates().iter().enumerate() {
                let kind = if i == target.index() { replacement } else { other.kind };
                let ins: Vec<&str> = other.inputs.iter().map(|&n| netlist.net_name(n)).collect();
                b.gate(kind, netlist.net_name(other.output), &ins);
            }
            (b.build()?, alloc::format!("{}->{}", gate.kind, replacement))
        }
        FaultKind::RemoveDff | FaultKind::RemoveSplitter => (
            bypass(netlist, target)?,
            alloc::format!("bypass {} from {}", gate.kind, netlist.net_name(gate.inputs[0])),
        ),
    };
    Ok((
        faulty,
        FaultDescription {
            kind: spec.kind,
            target: target_name,
            detail,
        },
    ))
}
