//! Small hand-built netlists with known behaviour.

use mcid_core::{GateKind, Netlist, NetlistBuilder};

/// OR feeding a splitter whose two branches reach `y` (through an AND with a
/// delayed `c`) and `z` (through an inverter). Balanced at depth 2.
pub fn split_fanin() -> Netlist {
    NetlistBuilder::new("split_fanin")
        .input("a")
        .input("b")
        .input("c")
        .gate(GateKind::Or2, "ab", &["a", "b"])
        .gate(GateKind::Split, "s", &["ab"])
        .gate(GateKind::Dff, "cd", &["c"])
        .gate(GateKind::And2, "y", &["s", "cd"])
        .gate(GateKind::Inv, "z", &["s"])
        .output("y")
        .output("z")
        .build()
        .expect("fixture is valid")
}

/// `y = !a & b & c & d` where `d` reaches `y` one clock cycle earlier than
/// `a`, `b` and `c`.
pub fn late_input() -> Netlist {
    NetlistBuilder::new("late_input")
        .input("a")
        .input("b")
        .input("c")
        .input("d")
        .gate(GateKind::Inv, "na", &["a"])
        .gate(GateKind::And2, "bc", &["b", "c"])
        .gate(GateKind::And2, "abc", &["na", "bc"])
        .gate(GateKind::Dff, "dd", &["d"])
        .gate(GateKind::And2, "y", &["abc", "dd"])
        .output("y")
        .build()
        .expect("fixture is valid")
}

/// Combinational specification of [`late_input`].
pub fn late_input_golden() -> Netlist {
    NetlistBuilder::new("late_input_golden")
        .input("a")
        .input("b")
        .input("c")
        .input("d")
        .gate(GateKind::Inv, "na", &["a"])
        .gate(GateKind::And2, "bc", &["b", "c"])
        .gate(GateKind::And2, "abc", &["na", "bc"])
        .gate(GateKind::And2, "y", &["abc", "d"])
        .output("y")
        .build()
        .expect("fixture is valid")
}

/// Inverter whose splitter feeds a DFF and an AND; balanced at depth 3.
/// Removing the DFF `d1` makes the inverter appear at two time steps.
pub fn shared_inverter() -> Netlist {
    NetlistBuilder::new("shared_inverter")
        .input("a")
        .input("b")
        .gate(GateKind::Inv, "inv1", &["a"])
        .gate(GateKind::Split, "s", &["inv1"])
        .gate(GateKind::Dff, "d1", &["s"])
        .gate(GateKind::Dff, "bd", &["b"])
        .gate(GateKind::And2, "g", &["s", "bd"])
        .gate(GateKind::Or2, "y", &["d1", "g"])
        .output("y")
        .build()
        .expect("fixture is valid")
}

/// A seven-gate cone ending in a splitter at logic level 4 whose branches
/// reach `y` through the DFF `f1` and through the AND `f2`.
pub fn deep_cone() -> Netlist {
    NetlistBuilder::new("deep_cone")
        .input("a")
        .input("b")
        .input("c")
        .input("d")
        .input("e")
        .input("g")
        .gate(GateKind::And2, "n1", &["a", "b"])
        .gate(GateKind::Or2, "n2", &["c", "d"])
        .gate(GateKind::Xor2, "n3", &["n1", "n2"])
        .gate(GateKind::Dff, "e1", &["e"])
        .gate(GateKind::Dff, "e2", &["e1"])
        .gate(GateKind::And2, "n4", &["n3", "e2"])
        .gate(GateKind::Inv, "n5", &["n4"])
        .gate(GateKind::Split, "s", &["n5"])
        .gate(GateKind::Dff, "f1", &["s"])
        .gate(GateKind::Dff, "g1", &["g"])
        .gate(GateKind::Dff, "g2", &["g1"])
        .gate(GateKind::Dff, "g3", &["g2"])
        .gate(GateKind::Dff, "g4", &["g3"])
        .gate(GateKind::And2, "f2", &["s", "g4"])
        .gate(GateKind::Xor2, "y", &["f1", "f2"])
        .output("y")
        .build()
        .expect("fixture is valid")
}
