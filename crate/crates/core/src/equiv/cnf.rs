//! Clause encoding of a normal-form graph.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use super::aig::{Edge, Node, NormalFormGraph};
use super::sat::Lit;

/// Clauses asserting `root`, with variable bookkeeping.
///
/// Every graph input gets a variable (in graph order), followed by the AND
/// nodes of the root's cone in topological order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    /// Signal name of each variable.
    pub var_names: Vec<String>,
    node_var: BTreeMap<u32, u32>,
}

impl Cnf {
    pub fn encode(graph: &NormalFormGraph, root: Edge) -> Cnf {
        let mut node_var = BTreeMap::new();
        let mut var_names = Vec::new();
        for (i, name) in graph.input_names().iter().enumerate() {
            node_var.insert(graph.input_edge(i).node(), i as u32);
            var_names.push(name.clone());
        }
        let cone = graph.cone(&[root]);
        for &n in &cone {
            node_var.insert(n, var_names.len() as u32);
            var_names.push(format!("and{}", n));
        }
        let mut cnf = Cnf {
            num_vars: var_names.len(),
            clauses: Vec::new(),
            var_names,
            node_var,
        };
        if root == Edge::TRUE {
            return cnf;
        }
        if root == Edge::FALSE {
            cnf.clauses.push(Vec::new());
            return cnf;
        }
        for &n in &cone {
            if let Node::And(a, b) = graph.node(n) {
                let out = Lit::pos(cnf.node_var[&n]);
                let la = cnf.lit(a).expect("cone edges are not constant");
                let lb = cnf.lit(b).expect("cone edges are not constant");
                cnf.clauses.push(vec![!out, la]);
                cnf.clauses.push(vec![!out, lb]);
                cnf.clauses.push(vec![out, !la, !lb]);
            }
        }
        let r = cnf.lit(root).expect("root is not constant");
        cnf.clauses.push(vec![r]);
        cnf
    }

    /// Literal for a non-constant edge in the encoded cone.
    pub fn lit(&self, e: Edge) -> Option<Lit> {
        self.node_var
            .get(&e.node())
            .map(|&v| Lit::new(v, e.is_complemented()))
    }

    /// DIMACS text with a `c var <n> = <signal>` comment per variable.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.var_names.iter().enumerate() {
            let _ = writeln!(out, "c var {} = {}", i + 1, name);
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}
