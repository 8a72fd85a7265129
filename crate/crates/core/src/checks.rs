//! Fanout and path-balance checkers.
//!
//! Both run a single forward pass over the topological order, so every gate
//! is visited once. The path-balance checker works on base-distance sets:
//! for each net, the set of clocked-gate counts over all paths from any
//! primary input. A netlist is balanced when every set is a singleton and all
//! primary outputs share one depth; if so, any two paths between the same
//! pair of nets have equal length.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::netlist::{GateKind, NetId, Netlist};
use crate::profile::TechnologyProfile;

/// Distance sets larger than this collapse to their min/max.
pub const DISTANCE_SET_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    FanoutExceeded,
    UnbalancedFanin,
    UnequalOutputDepth,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::FanoutExceeded => "FanoutExceeded",
            ViolationKind::UnbalancedFanin => "UnbalancedFanin",
            ViolationKind::UnequalOutputDepth => "UnequalOutputDepth",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Net or gate name.
    pub location: String,
    pub detail: String,
}

/// Formats as the machine-readable record `VIOLATION <kind> <location> <detail>`.
impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VIOLATION {} {} {}", self.kind, self.location, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
    /// Gates processed by the checker.
    pub gates_visited: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every net's sink count against the profile's limits. Primary
/// output references count as sinks.
pub fn check_fanout(netlist: &Netlist, profile: &TechnologyProfile) -> CheckReport {
    let mut report = CheckReport::default();
    if !profile.requires_fanout_check {
        return report;
    }
    let check = |net: NetId, driver: Option<GateKind>, report: &mut CheckReport| {
        let sinks = netlist.fanout(net);
        let limit = profile.fanout_limit(driver);
        if sinks as u64 > u64::from(limit) {
            report.violations.push(Violation {
                kind: ViolationKind::FanoutExceeded,
                location: netlist.net_name(net).to_string(),
                detail: format!("readers={} limit={}", sinks, limit),
            });
        }
    };
    for &net in netlist.inputs() {
        check(net, None, &mut report);
    }
    for &g in netlist.topological_order() {
        let gate = netlist.gate(g);
        report.gates_visited += 1;
        check(gate.output, Some(gate.kind), &mut report);
    }
    report
}

/// Path lengths, in clocked gates, from primary inputs to one net.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceSet {
    /// Sorted, deduplicated distances.
    Exact(Vec<u32>),
    /// Too many distinct values; only the extremes are kept.
    Span { min: u32, max: u32 },
}

impl DistanceSet {
    pub fn single(d: u32) -> Self {
        DistanceSet::Exact(alloc::vec![d])
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self, DistanceSet::Exact(v) if v.len() == 1)
    }

    pub fn min(&self) -> u32 {
        match self {
            DistanceSet::Exact(v) => v.first().copied().unwrap_or(0),
            DistanceSet::Span { min, .. } => *min,
        }
    }

    /// The maximum distance, i.e. the depth of the net.
    pub fn depth(&self) -> u32 {
        match self {
            DistanceSet::Exact(v) => v.last().copied().unwrap_or(0),
            DistanceSet::Span { max, .. } => *max,
        }
    }

    /// Exact values, when they were not capped.
    pub fn values(&self) -> Option<&[u32]> {
        match self {
            DistanceSet::Exact(v) => Some(v),
            DistanceSet::Span { .. } => None,
        }
    }

    fn union_shifted<'a>(sets: impl Iterator<Item = &'a DistanceSet>, shift: u32) -> Self {
        let mut values: Vec<u32> = Vec::new();
        let mut span: Option<(u32, u32)> = None;
        for set in sets {
            match set {
                DistanceSet::Exact(v) => values.extend(v.iter().map(|d| d + shift)),
                DistanceSet::Span { min, max } => {
                    let (lo, hi) = span.unwrap_or((u32::MAX, 0));
                    span = Some((lo.min(min + shift), hi.max(max + shift)));
                }
            }
        }
        values.sort_unstable();
        values.dedup();
        if span.is_none() && values.len() <= DISTANCE_SET_CAP {
            return DistanceSet::Exact(values);
        }
        let (mut lo, mut hi) = span.unwrap_or((u32::MAX, 0));
        if let (Some(&first), Some(&last)) = (values.first(), values.last()) {
            lo = lo.min(first);
            hi = hi.max(last);
        }
        DistanceSet::Span { min: lo, max: hi }
    }
}

impl fmt::Display for DistanceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceSet::Exact(v) => {
                f.write_str("{")?;
                for (i, d) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}", d)?;
                }
                f.write_str("}")
            }
            DistanceSet::Span { min, max } => write!(f, "[{}..{}]", min, max),
        }
    }
}

/// Base-distance sets for every net of a netlist.
#[derive(Clone, Debug)]
pub struct BaseDistances {
    sets: Vec<DistanceSet>,
    pub gates_visited: usize,
}

impl BaseDistances {
    pub fn get(&self, net: NetId) -> &DistanceSet {
        &self.sets[net.index()]
    }

    pub fn by_name<'a>(&'a self, netlist: &Netlist, name: &str) -> Option<&'a DistanceSet> {
        netlist.net(name).map(|n| self.get(n))
    }
}

/// Computes base distances in one memoized forward pass. Non-clocked gates
/// pass their input sets through unchanged.
pub fn base_distances(netlist: &Netlist, profile: &TechnologyProfile) -> BaseDistances {
    let mut sets: Vec<Option<DistanceSet>> = alloc::vec![None; netlist.num_nets()];
    for &net in netlist.inputs() {
        sets[net.index()] = Some(DistanceSet::single(0));
    }
    let mut visited = 0;
    for &g in netlist.topological_order() {
        let gate = netlist.gate(g);
        visited += 1;
        let shift = u32::from(profile.is_clocked(gate.kind));
        let set = DistanceSet::union_shifted(
            gate.inputs
                .iter()
                .map(|n| sets[n.index()].as_ref().expect("inputs precede readers")),
            shift,
        );
        sets[gate.output.index()] = Some(set);
    }
    BaseDistances {
        sets: sets
            .into_iter()
            .map(|s| s.expect("every net has a driver"))
            .collect(),
        gates_visited: visited,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BalanceMode {
    /// Every net must have a singleton base-distance set and all outputs
    /// must share one depth.
    #[default]
    Strict,
    /// Only the union of the outputs' base distances is checked.
    OutputsOnly,
}

pub fn check_path_balance(netlist: &Netlist, profile: &TechnologyProfile) -> CheckReport {
    check_path_balance_with(netlist, profile, BalanceMode::Strict)
}

pub fn check_path_balance_with(
    netlist: &Netlist,
    profile: &TechnologyProfile,
    mode: BalanceMode,
) -> CheckReport {
    let mut report = CheckReport::default();
    if !profile.requires_path_balancing {
        return report;
    }
    let bd = base_distances(netlist, profile);
    report.gates_visited = bd.gates_visited;

    match mode {
        BalanceMode::Strict => {
            // Report only where imbalance originates: a gate whose inputs are
            // each balanced but disagree with one another.
            for &g in netlist.topological_order() {
                let gate = netlist.gate(g);
                let out = bd.get(gate.output);
                if out.is_singleton() || !gate.inputs.iter().all(|&n| bd.get(n).is_singleton()) {
                    continue;
                }
                let detail = gate
                    .inputs
                    .iter()
                    .map(|&n| format!("{}={}", netlist.net_name(n), bd.get(n)))
                    .collect::<Vec<_>>()
                    .join(" ");
                report.violations.push(Violation {
                    kind: ViolationKind::UnbalancedFanin,
                    location: netlist.gate_name(g).to_string(),
                    detail: format!("{} fanin {}", gate.kind, detail),
                });
            }
            let depth = netlist
                .outputs()
                .iter()
                .map(|&o| bd.get(o).depth())
                .max()
                .unwrap_or(0);
            for &o in netlist.outputs() {
                let d = bd.get(o).depth();
                if d != depth {
                    report.violations.push(Violation {
                        kind: ViolationKind::UnequalOutputDepth,
                        location: netlist.net_name(o).to_string(),
                        detail: format!("depth={} expected={}", d, depth),
                    });
                }
            }
        }
        BalanceMode::OutputsOnly => {
            let all = DistanceSet::union_shifted(netlist.outputs().iter().map(|&o| bd.get(o)), 0);
            if !all.is_singleton() && !netlist.outputs().is_empty() {
                for &o in netlist.outputs() {
                    let set = bd.get(o);
                    if !set.is_singleton() || set.depth() != all.depth() {
                        report.violations.push(Violation {
                            kind: ViolationKind::UnequalOutputDepth,
                            location: netlist.net_name(o).to_string(),
                            detail: format!("base_distances={} outputs={}", set, all),
                        });
                    }
                }
            }
        }
    }
    report
}
