//! Input timing control: arrival-time alignment and golden-input matching.
//!
//! Inputs of a pipelined design may be meant to arrive in different clock
//! cycles. [`apply_itcl`] prepends `t_x - t_min` buffers to every timed
//! occurrence of input `x`, which moves that occurrence `t_x - t_min` steps
//! earlier on the model's timeline. [`match_inputs`] then picks the step at
//! which the most golden inputs occur and binds every golden input to its
//! value at that step.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::mcid::{GateOrigin, McidCircuit, McidGate, SignalId, TimedSignal};
use crate::netlist::{LogicFn, Netlist};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ItclError {
    #[error("arrival schedule has no entry for input `{0}`")]
    MissingInput(String),
    #[error("arrival schedule names `{0}`, which is not a primary input")]
    UnknownInput(String),
    #[error("golden input `{0}` is not an input of the implementation")]
    NotAnImplementationInput(String),
}

/// Per-input arrival cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArrivalSchedule {
    arrivals: BTreeMap<String, u32>,
}

impl ArrivalSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every input arrives in cycle 0.
    pub fn uniform<S: AsRef<str>>(inputs: impl IntoIterator<Item = S>) -> Self {
        ArrivalSchedule {
            arrivals: inputs
                .into_iter()
                .map(|s| (s.as_ref().to_string(), 0))
                .collect(),
        }
    }

    pub fn set(&mut self, input: impl Into<String>, cycle: u32) -> &mut Self {
        self.arrivals.insert(input.into(), cycle);
        self
    }

    pub fn get(&self, input: &str) -> Option<u32> {
        self.arrivals.get(input).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> + '_ {
        self.arrivals.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Buffers owed to each input (`t_x - t_min`), checked against `inputs`.
    pub fn offsets<S: AsRef<str>>(
        &self,
        inputs: &[S],
    ) -> Result<BTreeMap<String, u32>, ItclError> {
        for name in self.arrivals.keys() {
            if !inputs.iter().any(|i| i.as_ref() == name) {
                return Err(ItclError::UnknownInput(name.clone()));
            }
        }
        let mut times = Vec::with_capacity(inputs.len());
        for i in inputs {
            let t = self
                .get(i.as_ref())
                .ok_or_else(|| ItclError::MissingInput(i.as_ref().to_string()))?;
            times.push((i.as_ref().to_string(), t));
        }
        let min = times.iter().map(|&(_, t)| t).min().unwrap_or(0);
        Ok(times.into_iter().map(|(n, t)| (n, t - min)).collect())
    }
}

/// Inserts arrival-alignment buffers in front of the model's timed inputs.
///
/// Each occurrence `x@t<s>` of an input delayed by `k` cycles becomes the
/// chain `x@t<s-k> -> x$itcl1 -> ... -> x$itcl<k>@t<s>`.
pub fn apply_itcl(
    mcid: &McidCircuit,
    schedule: &ArrivalSchedule,
) -> Result<McidCircuit, ItclError> {
    let offsets = schedule.offsets(mcid.source_inputs())?;
    let mut out = mcid.clone();
    if offsets.values().all(|&k| k == 0) {
        return Ok(out);
    }

    let stage = |base: &str, j: u32| format!("{}$itcl{}", base, j);

    // Rename every delayed occurrence first so the new inputs cannot clash
    // with an occurrence that has not been moved yet.
    let mut moved: Vec<(usize, SignalId, String, i32, u32)> = Vec::new();
    for (pos, &sid) in mcid.inputs().iter().enumerate() {
        let signal = mcid.signal(sid).clone();
        let k = offsets.get(&signal.base).copied().unwrap_or(0);
        if k == 0 {
            continue;
        }
        out.index.remove(&signal);
        let renamed = TimedSignal::new(stage(&signal.base, k), signal.step);
        out.index.insert(renamed.clone(), sid);
        out.signals[sid.index()] = renamed;
        moved.push((pos, sid, signal.base, signal.step, k));
    }

    let mut chains = Vec::new();
    for (pos, sid, base, step, k) in moved {
        let shifted = out.intern(TimedSignal::new(base.clone(), step - k as i32));
        out.inputs[pos] = shifted;
        let mut prev = shifted;
        for j in 1..=k {
            let next = if j == k {
                sid
            } else {
                out.intern(TimedSignal::new(stage(&base, j), step - k as i32 + j as i32))
            };
            chains.push(McidGate {
                function: LogicFn::Identity,
                inputs: alloc::vec![prev],
                output: next,
                origin: GateOrigin::Itcl,
            });
            prev = next;
        }
    }
    chains.append(&mut out.gates);
    out.gates = chains;
    for (name, k) in offsets {
        if k > 0 {
            *out.arrival_offsets.entry(name).or_insert(0) += k;
        }
    }
    out.normalize();
    Ok(out)
}

/// Binding of one golden input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedInput {
    /// The input at the reference step.
    pub signal: TimedSignal,
    /// The model input it shares, or `None` when the model never reads this
    /// input at the reference step; the golden side then gets its own
    /// unconstrained variable.
    pub mcid_input: Option<SignalId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputMatching {
    /// Step holding the largest set of golden inputs.
    pub reference_step: i32,
    pub matched: BTreeMap<String, MatchedInput>,
    /// Model inputs bound to no golden input.
    pub free_inputs: Vec<SignalId>,
}

impl InputMatching {
    pub fn is_free(&self, sid: SignalId) -> bool {
        self.free_inputs.contains(&sid)
    }
}

/// Matches golden inputs to the model's timed inputs at one reference step.
///
/// The reference step maximizes the number of golden inputs occurring there;
/// ties go to the latest step.
pub fn match_inputs(mcid: &McidCircuit, golden: &Netlist) -> Result<InputMatching, ItclError> {
    for name in golden.input_names() {
        if !mcid.source_inputs().iter().any(|s| s == name) {
            return Err(ItclError::NotAnImplementationInput(name.to_string()));
        }
    }
    let is_golden = |base: &str| golden.input_names().any(|n| n == base);

    let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
    for &sid in mcid.inputs() {
        let s = mcid.signal(sid);
        if is_golden(&s.base) {
            *counts.entry(s.step).or_insert(0) += 1;
        }
    }
    let reference_step = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(b.0)))
        .map(|(&step, _)| step)
        .or_else(|| mcid.dependency_window().map(|(_, latest)| latest))
        .unwrap_or(0);

    let mut matched = BTreeMap::new();
    for name in golden.input_names() {
        let signal = TimedSignal::new(name, reference_step);
        let mcid_input = mcid.lookup(&signal).filter(|id| mcid.inputs().contains(id));
        matched.insert(name.to_string(), MatchedInput { signal, mcid_input });
    }
    let free_inputs = mcid
        .inputs()
        .iter()
        .copied()
        .filter(|&sid| !matched.values().any(|m| m.mcid_input == Some(sid)))
        .collect();
    Ok(InputMatching {
        reference_step,
        matched,
        free_inputs,
    })
}
