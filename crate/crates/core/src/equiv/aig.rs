//! Hash-consed two-input AND graph with complemented edges.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Not;

/// A reference to a node, possibly complemented. Node 0 is constant true.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(u32);

impl Edge {
    pub const TRUE: Edge = Edge(0);
    pub const FALSE: Edge = Edge(1);

    fn new(node: u32, complemented: bool) -> Self {
        Edge(node << 1 | complemented as u32)
    }

    pub fn node(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.node() == 0
    }
}

impl Not for Edge {
    type Output = Edge;

    fn not(self) -> Edge {
        Edge(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    True,
    /// Index into [`NormalFormGraph::input_names`].
    Input(u32),
    And(Edge, Edge),
}

/// Structurally hashed AND graph; nodes are stored in topological order.
#[derive(Clone, Debug)]
pub struct NormalFormGraph {
    nodes: Vec<Node>,
    strash: BTreeMap<(Edge, Edge), u32>,
    input_names: Vec<String>,
    input_nodes: Vec<u32>,
}

impl Default for NormalFormGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl NormalFormGraph {
    pub fn new() -> Self {
        NormalFormGraph {
            nodes: vec![Node::True],
            strash: BTreeMap::new(),
            input_names: Vec::new(),
            input_nodes: Vec::new(),
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> Edge {
        let node = self.nodes.len() as u32;
        self.nodes.push(Node::Input(self.input_names.len() as u32));
        self.input_names.push(name.into());
        self.input_nodes.push(node);
        Edge::new(node, false)
    }

    pub fn and(&mut self, a: Edge, b: Edge) -> Edge {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a == Edge::FALSE || a == !b {
            return Edge::FALSE;
        }
        if a == Edge::TRUE || a == b {
            return b;
        }
        if let Some(&n) = self.strash.get(&(a, b)) {
            return Edge::new(n, false);
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(Node::And(a, b));
        self.strash.insert((a, b), n);
        Edge::new(n, false)
    }

    pub fn or(&mut self, a: Edge, b: Edge) -> Edge {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: Edge, b: Edge) -> Edge {
        let l = self.and(a, !b);
        let r = self.and(!a, b);
        self.or(l, r)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, n: u32) -> Node {
        self.nodes[n as usize]
    }

    /// Number of AND nodes.
    pub fn and_count(&self) -> usize {
        self.strash.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn input_edge(&self, index: usize) -> Edge {
        Edge::new(self.input_nodes[index], false)
    }

    /// Value of every node under an input assignment (indexed like
    /// [`Self::input_names`]).
    pub fn evaluate(&self, inputs: &[bool]) -> Vec<bool> {
        let mut value = vec![false; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            value[i] = match *node {
                Node::True => true,
                Node::Input(k) => inputs[k as usize],
                Node::And(a, b) => edge_value(&value, a) && edge_value(&value, b),
            };
        }
        value
    }

    /// AND nodes in the cone of `roots`, ascending.
    pub fn cone(&self, roots: &[Edge]) -> Vec<u32> {
        let mut mark = vec![false; self.nodes.len()];
        let mut stack: Vec<u32> = roots.iter().map(|e| e.node()).collect();
        while let Some(n) = stack.pop() {
            if mark[n as usize] {
                continue;
            }
            mark[n as usize] = true;
            if let Node::And(a, b) = self.nodes[n as usize] {
                stack.push(a.node());
                stack.push(b.node());
            }
        }
        (0..self.nodes.len() as u32)
            .filter(|&n| mark[n as usize] && matches!(self.nodes[n as usize], Node::And(..)))
            .collect()
    }
}

/// Reads an edge from node values produced by [`NormalFormGraph::evaluate`].
pub fn edge_value(values: &[bool], e: Edge) -> bool {
    values[e.node() as usize] ^ e.is_complemented()
}
