//! Equivalence checking for ultra-deep pipelined clocked netlists.
//!
//! Every clocked gate in such a netlist is a pipeline stage, so a primary
//! output observed at one instant can depend on primary-input values from
//! several earlier clock cycles. The crate provides:
//!
//! - [`netlist`]: gate-level netlists, topological order, logic levels.
//! - [`profile`]: technology parameters (fanout limits, non-clocked kinds).
//! - [`checks`]: fanout and path-balance structural checkers.
//! - [`mcid`]: the multi-cycle input dependency (MCID) unrolling.
//! - [`itcl`]: input arrival alignment and golden-input matching.
//! - [`equiv`]: hash-consed miter, clause encoding, SAT search, traces.
//! - [`sim`]: unit-delay simulator and exhaustive reference oracle.
//! - [`fault`]: seeded functional and structural fault injection.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line driver live in the `mcid-lec` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod checks;
pub mod equiv;
pub mod fault;
pub mod itcl;
pub mod mcid;
pub mod netlist;
pub mod profile;
pub mod sim;

pub use checks::{CheckReport, DistanceSet, Violation, ViolationKind};
pub use equiv::{Miter, Outcome, SolveOptions, TimedTrace, Verdict};
pub use itcl::{ArrivalSchedule, InputMatching};
pub use mcid::{McidCircuit, TimedSignal};
pub use netlist::{GateId, GateKind, LogicFn, NetId, Netlist, NetlistBuilder, NetlistError};
pub use profile::TechnologyProfile;
