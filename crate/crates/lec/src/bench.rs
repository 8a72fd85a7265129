//! Bench-style netlist text.
//!
//! ```text
//! # comment
//! INPUT(a)
//! OUTPUT(y)
//! y = AND2(a, b)
//! ```

use std::fmt::Write;

use mcid_core::{GateKind, McidCircuit, Netlist, NetlistBuilder, NetlistError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

/// ISCAS spellings accepted next to the library names.
const ALIASES: [(&str, GateKind); 8] = [
    ("AND", GateKind::And2),
    ("OR", GateKind::Or2),
    ("XOR", GateKind::Xor2),
    ("NAND", GateKind::Nand2),
    ("NOR", GateKind::Nor2),
    ("XNOR", GateKind::Xnor2),
    ("NOT", GateKind::Inv),
    ("BUFF", GateKind::Buf),
];

fn kind_from_name(name: &str) -> Option<GateKind> {
    GateKind::from_name(name).or_else(|| {
        ALIASES
            .iter()
            .find(|(a, _)| a.eq_ignore_ascii_case(name))
            .map(|&(_, k)| k)
    })
}

fn is_name_start(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn is_name_char(c: u8) -> bool {
    is_name_start(c) || matches!(c, b'.' | b'@' | b'$' | b'-')
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, message: impl Into<String>) -> BenchError {
        BenchError::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_space();
        self.pos >= self.text.len()
    }

    fn name(&mut self) -> Result<&'a str, BenchError> {
        self.skip_space();
        let start = self.pos;
        if self.pos >= self.text.len() || !is_name_start(self.text[self.pos]) {
            return Err(self.error("expected a name"));
        }
        while self.pos < self.text.len() && is_name_char(self.text[self.pos]) {
            self.pos += 1;
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).expect("ascii"))
    }

    fn expect(&mut self, c: u8) -> Result<(), BenchError> {
        self.skip_space();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_space();
        self.text.get(self.pos).copied()
    }
}

/// Parses a netlist; `name` becomes the netlist name.
pub fn parse(text: &str, name: &str) -> Result<Netlist, BenchError> {
    let mut b = NetlistBuilder::new(name);
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            text: content.as_bytes(),
            pos: 0,
            line: i + 1,
        };
        if !content.is_ascii() {
            let col = content.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |x| x.0);
            cur.pos = col;
            return Err(cur.error("non-ASCII character"));
        }
        if cur.at_end() {
            continue;
        }
        let head_pos = cur.pos;
        let head = cur.name()?;
        if cur.peek() == Some(b'(') {
            let is_input = head.eq_ignore_ascii_case("INPUT");
            if !is_input && !head.eq_ignore_ascii_case("OUTPUT") {
                cur.pos = head_pos;
                return Err(cur.error(format!("expected INPUT, OUTPUT or an assignment, found `{}`", head)));
            }
            cur.expect(b'(')?;
            let net = cur.name()?;
            cur.expect(b')')?;
            if is_input {
                b.input(net);
            } else {
                b.output(net);
            }
        } else {
            cur.expect(b'=')?;
            let kind_pos = {
                cur.skip_space();
                cur.pos
            };
            let kind_name = cur.name()?;
            let kind = kind_from_name(kind_name).ok_or_else(|| {
                cur.pos = kind_pos;
                cur.error(format!("unknown gate kind `{}`", kind_name))
            })?;
            cur.expect(b'(')?;
            let mut inputs = vec![cur.name()?];
            while cur.peek() == Some(b',') {
                cur.pos += 1;
                inputs.push(cur.name()?);
            }
            cur.expect(b')')?;
            if inputs.len() != kind.arity() {
                cur.pos = kind_pos;
                return Err(cur.error(format!(
                    "{} takes {} inputs, got {}",
                    kind.name(),
                    kind.arity(),
                    inputs.len()
                )));
            }
            b.gate(kind, head, &inputs);
        }
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing text"));
        }
    }
    Ok(b.build()?)
}

/// Inputs, then outputs, then gates in topological order.
pub fn write(netlist: &Netlist) -> String {
    let mut out = String::new();
    for pi in netlist.input_names() {
        let _ = writeln!(out, "INPUT({})", pi);
    }
    for po in netlist.output_names() {
        let _ = writeln!(out, "OUTPUT({})", po);
    }
    for &g in netlist.topological_order() {
        let gate = netlist.gate(g);
        let ins: Vec<&str> = gate.inputs.iter().map(|&n| netlist.net_name(n)).collect();
        let _ = writeln!(
            out,
            "{} = {}({})",
            netlist.net_name(gate.output),
            gate.kind.name(),
            ins.join(", ")
        );
    }
    out
}

/// The unrolled model in the same syntax, with timed names such as `a@t-2`.
/// Outputs are the observed timed signals; a comment maps them back to the
/// source outputs.
pub fn write_mcid(mcid: &McidCircuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}: {} gates", mcid.name(), mcid.gate_count());
    for &s in mcid.inputs() {
        let _ = writeln!(out, "INPUT({})", mcid.signal(s));
    }
    let mut declared = Vec::new();
    for o in mcid.outputs() {
        let _ = writeln!(out, "# output {} observes {}", o.name, mcid.signal(o.signal));
        if !declared.contains(&o.signal) {
            declared.push(o.signal);
            let _ = writeln!(out, "OUTPUT({})", mcid.signal(o.signal));
        }
    }
    for g in mcid.gates() {
        let ins: Vec<String> = g.inputs.iter().map(|&s| mcid.signal(s).to_string()).collect();
        let _ = writeln!(
            out,
            "{} = {}({})",
            mcid.signal(g.output),
            g.function.as_kind().name(),
            ins.join(", ")
        );
    }
    out
}
