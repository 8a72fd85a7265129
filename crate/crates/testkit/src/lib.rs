//! Circuit generators and small reference netlists shared by the test suites.

use std::collections::BTreeMap;

use mcid_core::{GateKind, NetId, Netlist, NetlistBuilder};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod fixtures;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const LOGIC_KINDS: [GateKind; 8] = [
    GateKind::And2,
    GateKind::Or2,
    GateKind::Xor2,
    GateKind::Nand2,
    GateKind::Nor2,
    GateKind::Xnor2,
    GateKind::Inv,
    GateKind::Buf,
];

/// Picks a driver for a new pin, favouring recent nets so circuits get deep.
fn pick_source<R: Rng>(rng: &mut R, nets: &[String]) -> String {
    let n = nets.len();
    let i = if rng.gen_bool(0.6) {
        rng.gen_range(n.saturating_sub(4)..n)
    } else {
        rng.gen_range(0..n)
    };
    nets[i].clone()
}

/// Random combinational netlist: inputs `i0..`, gates `n0..`; every gate
/// output nobody reads becomes a primary output.
pub fn random_golden<R: Rng>(rng: &mut R, inputs: usize, gates: usize) -> Netlist {
    let mut b = NetlistBuilder::new("golden");
    let mut nets: Vec<String> = (0..inputs).map(|i| format!("i{}", i)).collect();
    for n in &nets {
        b.input(n.as_str());
    }
    let mut read = BTreeMap::new();
    for g in 0..gates {
        let kind = if rng.gen_bool(0.15) {
            GateKind::Inv
        } else {
            *LOGIC_KINDS[..6].choose(rng).expect("non-empty")
        };
        let ins: Vec<String> = (0..kind.arity()).map(|_| pick_source(rng, &nets)).collect();
        for i in &ins {
            read.insert(i.clone(), true);
        }
        let out = format!("n{}", g);
        b.gate(kind, &out, &ins);
        nets.push(out);
    }
    for n in &nets[inputs..] {
        if !read.contains_key(n) {
            b.output(n.as_str());
        }
    }
    b.build().expect("generator produces valid netlists")
}

/// Random netlist over every gate kind, including DFFs and splitters, with
/// no fanout discipline. Outputs are the unread gate outputs.
pub fn random_clocked_dag<R: Rng>(rng: &mut R, inputs: usize, gates: usize) -> Netlist {
    let mut b = NetlistBuilder::new("dag");
    let mut nets: Vec<String> = (0..inputs).map(|i| format!("i{}", i)).collect();
    for n in &nets {
        b.input(n.as_str());
    }
    let mut read = BTreeMap::new();
    for g in 0..gates {
        let kind = match rng.gen_range(0..10) {
            0..=2 => GateKind::Dff,
            3 => GateKind::Split,
            _ => *LOGIC_KINDS.choose(rng).expect("non-empty"),
        };
        let ins: Vec<String> = (0..kind.arity()).map(|_| pick_source(rng, &nets)).collect();
        for i in &ins {
            read.insert(i.clone(), true);
        }
        let out = format!("n{}", g);
        b.gate(kind, &out, &ins);
        nets.push(out);
    }
    for n in &nets[inputs..] {
        if !read.contains_key(n) {
            b.output(n.as_str());
        }
    }
    b.build().expect("generator produces valid netlists")
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Sink {
    Output,
    Chain,
    Pin(usize, usize),
}

/// Turns a combinational netlist into an RSFQ-compliant one: DFF chains
/// equalize every path, splitter chains give each net at most one reader,
/// and all outputs sit at the same depth.
///
/// Output names are kept. Added nets are `<net>.d<k>` (net delayed by `k`
/// cycles), `<net>.s<k>.<j>` (splitters) and `<net>.g` (the original driver
/// of an output whose name moved downstream).
pub fn balance(golden: &Netlist) -> Netlist {
    let levels = golden.levels_with(GateKind::is_clocked);
    let lvl = |n: NetId| levels[n.index()];
    let depth = golden.outputs().iter().map(|&o| lvl(o)).max().unwrap_or(0);

    // sinks[net][k]: who needs `net` delayed by k cycles.
    let mut sinks: BTreeMap<NetId, BTreeMap<u32, Vec<Sink>>> = BTreeMap::new();
    for &o in golden.outputs() {
        assert!(!golden.is_input(o), "outputs tied to inputs are not supported");
        sinks
            .entry(o)
            .or_default()
            .entry(depth - lvl(o))
            .or_default()
            .push(Sink::Output);
    }
    for &g in golden.topological_order() {
        let gate = golden.gate(g);
        let l = lvl(gate.output);
        for (p, &n) in gate.inputs.iter().enumerate() {
            sinks
                .entry(n)
                .or_default()
                .entry(l - 1 - lvl(n))
                .or_default()
                .push(Sink::Pin(g.index(), p));
        }
    }

    let mut b = NetlistBuilder::new(golden.name());
    for pi in golden.input_names() {
        b.input(pi);
    }
    for po in golden.output_names() {
        b.output(po);
    }

    let mut feed: BTreeMap<(usize, usize), String> = BTreeMap::new();
    let mut driver_name: BTreeMap<NetId, String> = BTreeMap::new();
    for (&net, by_delay) in &mut sinks {
        let name = golden.net_name(net).to_string();
        let max_k = *by_delay.keys().max().expect("non-empty");
        for k in 0..max_k {
            by_delay.entry(k).or_default().push(Sink::Chain);
        }
        let is_po = golden.is_output(net);
        let base = match by_delay.get(&0) {
            Some(s) if !is_po || (s.len() == 1 && s[0] == Sink::Output) => name.clone(),
            _ if !is_po => name.clone(),
            _ => format!("{}.g", name),
        };
        driver_name.insert(net, base.clone());
        let mut version = base;
        for k in 0..=max_k {
            let list = by_delay.get(&k).cloned().unwrap_or_default();
            let mut chain_feed = None;
            let mut route = |sink: Sink, src: String| match sink {
                Sink::Output => debug_assert_eq!(src, name),
                Sink::Chain => chain_feed = Some(src),
                Sink::Pin(g, p) => {
                    feed.insert((g, p), src);
                }
            };
            if list.len() == 1 {
                route(list[0], version.clone());
            } else {
                let m = list.len();
                let mut prev = version.clone();
                for j in 1..m {
                    let s = if j == 1 && list[0] == Sink::Output {
                        name.clone()
                    } else {
                        format!("{}.s{}.{}", name, k, j)
                    };
                    b.gate(GateKind::Split, &s, &[prev.as_str()]);
                    route(list[j - 1], s.clone());
                    if j == m - 1 {
                        route(list[m - 1], s.clone());
                    }
                    prev = s;
                }
            }
            if k < max_k {
                let src = chain_feed.expect("chain sink present below max delay");
                let next_has_only_output = by_delay
                    .get(&(k + 1))
                    .is_some_and(|s| s.len() == 1 && s[0] == Sink::Output);
                let next = if next_has_only_output {
                    name.clone()
                } else {
                    format!("{}.d{}", name, k + 1)
                };
                b.gate(GateKind::Dff, &next, &[src.as_str()]);
                version = next;
            }
        }
    }

    for &g in golden.topological_order() {
        let gate = golden.gate(g);
        let out = driver_name
            .get(&gate.output)
            .cloned()
            .unwrap_or_else(|| golden.net_name(gate.output).to_string());
        let ins: Vec<String> = (0..gate.inputs.len())
            .map(|p| feed[&(g.index(), p)].clone())
            .collect();
        b.gate(gate.kind, &out, &ins);
    }
    b.build().expect("balanced netlist is well formed")
}

/// `bits`-bit ripple-carry adder: inputs `a<i>`, `b<i>`, `cin`; outputs
/// `s<i>`, `cout`.
pub fn ripple_adder(bits: usize) -> Netlist {
    let mut b = NetlistBuilder::new(format!("ripple{}", bits));
    for i in 0..bits {
        b.input(format!("a{}", i));
        b.input(format!("b{}", i));
    }
    b.input("cin");
    let mut carry = "cin".to_string();
    for i in 0..bits {
        let (a, bb) = (format!("a{}", i), format!("b{}", i));
        let p = format!("p{}", i);
        let g = format!("g{}", i);
        let t = format!("t{}", i);
        let s = format!("s{}", i);
        let c = if i + 1 == bits {
            "cout".to_string()
        } else {
            format!("c{}", i + 1)
        };
        b.gate(GateKind::Xor2, &p, &[&a, &bb]);
        b.gate(GateKind::And2, &g, &[&a, &bb]);
        b.gate(GateKind::Xor2, &s, &[&p, &carry]);
        b.gate(GateKind::And2, &t, &[&p, &carry]);
        b.gate(GateKind::Or2, &c, &[&g, &t]);
        b.output(s);
        carry = c;
    }
    b.output("cout");
    b.build().expect("adder is well formed")
}

/// `bits`-bit Kogge-Stone adder without carry-in: inputs `a<i>`, `b<i>`;
/// outputs `s<i>`, `cout`.
pub fn kogge_stone_adder(bits: usize) -> Netlist {
    let mut b = NetlistBuilder::new(format!("ks{}", bits));
    for i in 0..bits {
        b.input(format!("a{}", i));
        b.input(format!("b{}", i));
    }
    // (generate, propagate) net names per bit at the current prefix level.
    let mut gp: Vec<(String, String)> = Vec::new();
    for i in 0..bits {
        let (a, bb) = (format!("a{}", i), format!("b{}", i));
        b.gate(GateKind::And2, format!("g0_{}", i), &[&a, &bb]);
        b.gate(GateKind::Xor2, format!("p0_{}", i), &[&a, &bb]);
        gp.push((format!("g0_{}", i), format!("p0_{}", i)));
    }
    let p0: Vec<String> = gp.iter().map(|x| x.1.clone()).collect();
    let mut dist = 1;
    let mut level = 1;
    while dist < bits {
        let mut next = gp.clone();
        for i in dist..bits {
            let (gh, ph) = &gp[i];
            let (gl, pl) = &gp[i - dist];
            let t = format!("t{}_{}", level, i);
            let g = format!("g{}_{}", level, i);
            b.gate(GateKind::And2, &t, &[ph, gl]);
            b.gate(GateKind::Or2, &g, &[gh, &t]);
            let p = if i >= 2 * dist {
                let p = format!("p{}_{}", level, i);
                b.gate(GateKind::And2, &p, &[ph, pl]);
                p
            } else {
                // Prefixes reaching bit 0 need no propagate term.
                ph.clone()
            };
            next[i] = (g, p);
        }
        gp = next;
        dist *= 2;
        level += 1;
    }
    for i in 0..bits {
        let s = format!("s{}", i);
        if i == 0 {
            b.gate(GateKind::Buf, &s, &[&p0[0]]);
        } else {
            b.gate(GateKind::Xor2, &s, &[&p0[i], &gp[i - 1].0]);
        }
        b.output(s);
    }
    b.gate(GateKind::Buf, "cout", &[&gp[bits - 1].0]);
    b.output("cout");
    b.build().expect("adder is well formed")
}

/// Expected sum and carry-out of a `bits`-bit addition.
pub fn adder_reference(bits: usize, a: u64, b: u64, cin: bool) -> (u64, bool) {
    let mask = if bits == 64 { !0 } else { (1u64 << bits) - 1 };
    let total = (a & mask) as u128 + (b & mask) as u128 + cin as u128;
    ((total as u64) & mask, total >> bits & 1 == 1)
}
