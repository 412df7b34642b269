//! The arithmetic-circuit IR.
//!
//! A [`Circuit`] is a list of [`Node`]s in topological order: a node's id is
//! its position, and every child id is strictly smaller than its parent's.
//! Sum nodes carry a nonzero rational weight on each incoming edge; an
//! unweighted edge has weight 1. Exactly one node, the output, has no
//! parents.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitSet;
use crate::error::Error;
use crate::rational::{integer_bit_width, Rational};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Var(usize),
    Const(Rational),
    /// Weighted sum `Σ w · child`.
    Sum(Vec<(Rational, NodeId)>),
    Prod(Vec<NodeId>),
}

impl Node {
    pub fn children(&self) -> impl Iterator<Item = NodeId> + '_ {
        let (sum, prod): (&[(Rational, NodeId)], &[NodeId]) = match self {
            Node::Sum(ch) => (ch, &[]),
            Node::Prod(ch) => (&[], ch),
            _ => (&[], &[]),
        };
        sum.iter().map(|(_, c)| *c).chain(prod.iter().copied())
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Var(_) | Node::Const(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    n_vars: usize,
    nodes: Vec<Node>,
    output: NodeId,
}

impl Circuit {
    /// Builds a validated circuit. Nodes that the output does not depend on
    /// are pruned (with a warning) and the remaining ids are renumbered
    /// densely; every other failed check is an error.
    pub fn new(n_vars: usize, nodes: Vec<Node>, output: NodeId) -> Result<Self, Error> {
        let raw = Circuit {
            n_vars,
            nodes,
            output,
        };
        let report = raw.validate();
        if let Some(bad) = report
            .checks
            .iter()
            .find(|c| !c.passed && c.kind != CheckKind::SingleOutput)
        {
            return Err(Error::InvalidCircuit(format!("{}: {}", bad.kind, bad.detail)));
        }
        let (pruned, removed) = raw.prune();
        if removed > 0 {
            log::warn!("pruned {} node(s) unreachable from the output", removed);
        }
        Ok(pruned)
    }

    /// Assembles a circuit without any checks. Use [`Circuit::validate`] to
    /// inspect the result.
    pub fn from_raw_parts(n_vars: usize, nodes: Vec<Node>, output: NodeId) -> Self {
        Circuit {
            n_vars,
            nodes,
            output,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut checks = Vec::new();
        let n = self.nodes.len();

        let mut push = |kind, bad: Vec<String>| {
            checks.push(Check {
                kind,
                passed: bad.is_empty(),
                detail: if bad.is_empty() {
                    String::from("ok")
                } else {
                    bad.join("; ")
                },
            });
        };

        let mut bad = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Var(i) = node {
                if *i >= self.n_vars {
                    bad.push(format!("node {} uses variable {} of {}", id, i, self.n_vars));
                }
            }
        }
        push(CheckKind::VarRange, bad);

        let mut bad = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let empty = match node {
                Node::Sum(ch) => ch.is_empty(),
                Node::Prod(ch) => ch.is_empty(),
                _ => false,
            };
            if empty {
                bad.push(format!("node {} has no children", id));
            }
        }
        push(CheckKind::Arity, bad);

        let mut bad = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                if c >= id {
                    bad.push(format!("node {} references node {}", id, c));
                }
            }
        }
        let topo_ok = bad.is_empty();
        push(CheckKind::Topological, bad);

        let mut bad = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Sum(ch) = node {
                for (w, c) in ch {
                    if w.is_zero() {
                        bad.push(format!("node {} has zero weight on child {}", id, c));
                    }
                }
            }
        }
        push(CheckKind::NonzeroWeights, bad);

        let output_ok = self.output < n;
        push(
            CheckKind::OutputExists,
            if output_ok {
                vec![]
            } else {
                vec![format!("output {} but only {} nodes", self.output, n)]
            },
        );

        let mut bad = Vec::new();
        if output_ok && topo_ok {
            let mut has_parent = vec![false; n];
            for node in &self.nodes {
                for c in node.children() {
                    has_parent[c] = true;
                }
            }
            let sinks: Vec<usize> = (0..n).filter(|&i| !has_parent[i]).collect();
            if sinks != [self.output] {
                bad.push(format!(
                    "sink nodes {:?}, expected only the output {}",
                    sinks, self.output
                ));
            }
        } else {
            bad.push(String::from("skipped: structure invalid"));
        }
        push(CheckKind::SingleOutput, bad);

        ValidationReport { checks }
    }

    /// Drops nodes the output does not depend on, renumbering the rest.
    /// Returns the pruned circuit and the number of nodes removed.
    pub fn prune(&self) -> (Circuit, usize) {
        let live = self.live_nodes();
        let removed = live.iter().filter(|l| !**l).count();
        if removed == 0 {
            return (self.clone(), 0);
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::with_capacity(self.nodes.len() - removed);
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            remap[id] = nodes.len();
            nodes.push(match node {
                Node::Sum(ch) => Node::Sum(ch.iter().map(|(w, c)| (w.clone(), remap[*c])).collect()),
                Node::Prod(ch) => Node::Prod(ch.iter().map(|c| remap[*c]).collect()),
                leaf => leaf.clone(),
            });
        }
        (
            Circuit {
                n_vars: self.n_vars,
                nodes,
                output: remap[self.output],
            },
            removed,
        )
    }

    fn live_nodes(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        live[self.output] = true;
        for id in (0..self.nodes.len()).rev() {
            if live[id] {
                for c in self.nodes[id].children() {
                    live[c] = true;
                }
            }
        }
        live
    }

    /// The set of variables each node depends on syntactically.
    pub fn var_sets(&self) -> Vec<BitSet> {
        let mut sets: Vec<BitSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut s = BitSet::new(self.n_vars);
            match node {
                Node::Var(i) => s.insert(*i),
                Node::Const(_) => {}
                _ => {
                    for c in node.children() {
                        s.union_with(&sets[c]);
                    }
                }
            }
            sets.push(s);
        }
        sets
    }

    /// Size in bits of a binary encoding of the circuit: per node a two-bit
    /// tag and its id, then the variable index, the constant, or each child
    /// id together with its edge weight.
    pub fn encoded_bits(&self) -> u64 {
        let id_bits = |x: usize| (usize::BITS - x.leading_zeros()).max(1) as u64;
        let rat_bits = |r: &Rational| integer_bit_width(r.numer()) + integer_bit_width(r.denom());
        let mut total = id_bits(self.n_vars) + id_bits(self.output);
        for (id, node) in self.nodes.iter().enumerate() {
            total += 2 + id_bits(id);
            total += match node {
                Node::Var(i) => id_bits(*i),
                Node::Const(c) => rat_bits(c),
                Node::Sum(ch) => ch.iter().map(|(w, c)| id_bits(*c) + rat_bits(w)).sum(),
                Node::Prod(ch) => ch.iter().map(|c| id_bits(*c)).sum(),
            };
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    VarRange,
    Arity,
    Topological,
    NonzeroWeights,
    OutputExists,
    SingleOutput,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::VarRange => "var-range",
            CheckKind::Arity => "arity",
            CheckKind::Topological => "topological",
            CheckKind::NonzeroWeights => "nonzero-weights",
            CheckKind::OutputExists => "output-exists",
            CheckKind::SingleOutput => "single-output",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, kind: CheckKind) -> &Check {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("every check kind is reported")
    }
}

/// Incremental circuit construction. Variables and the constants 0 and 1 are
/// shared.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    n_vars: usize,
    nodes: Vec<Node>,
    vars: Vec<Option<NodeId>>,
    zero: Option<NodeId>,
    one: Option<NodeId>,
}

impl CircuitBuilder {
    pub fn new(n_vars: usize) -> Self {
        CircuitBuilder {
            n_vars,
            nodes: Vec::new(),
            vars: vec![None; n_vars],
            zero: None,
            one: None,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn var(&mut self, i: usize) -> NodeId {
        assert!(i < self.n_vars, "variable {} out of range {}", i, self.n_vars);
        if let Some(id) = self.vars[i] {
            return id;
        }
        let id = self.push(Node::Var(i));
        self.vars[i] = Some(id);
        id
    }

    pub fn constant(&mut self, c: Rational) -> NodeId {
        let slot = if c.is_zero() {
            &mut self.zero
        } else if c.is_one() {
            &mut self.one
        } else {
            return self.push(Node::Const(c));
        };
        if let Some(id) = *slot {
            return id;
        }
        let id = self.nodes.len();
        *slot = Some(id);
        self.push(Node::Const(c))
    }

    pub fn sum(&mut self, children: Vec<(Rational, NodeId)>) -> NodeId {
        self.push(Node::Sum(children))
    }

    /// Unit-weight sum.
    pub fn add(&mut self, children: &[NodeId]) -> NodeId {
        self.sum(children.iter().map(|&c| (Rational::one(), c)).collect())
    }

    pub fn prod(&mut self, children: Vec<NodeId>) -> NodeId {
        self.push(Node::Prod(children))
    }

    /// `1 - x_i`.
    pub fn negated_var(&mut self, i: usize) -> NodeId {
        let one = self.constant(Rational::one());
        let x = self.var(i);
        self.sum(vec![(Rational::one(), one), (-Rational::one(), x)])
    }

    pub fn finish(self, output: NodeId) -> Result<Circuit, Error> {
        Circuit::new(self.n_vars, self.nodes, output)
    }
}

/// Circuit of the three-variable distribution used as a running example:
/// `(2x₀ + 1) · (1/50 · (3 − x₁) · x₂ + 1/20 · (1 + x₁) · (1 − x₂))`.
pub fn example_circuit() -> Circuit {
    use crate::rational::rat;
    let nodes = vec![
        Node::Var(0),
        Node::Const(Rational::one()),
        Node::Var(1),
        Node::Var(2),
        Node::Sum(vec![(rat(2, 1), 0), (Rational::one(), 1)]),
        Node::Sum(vec![(Rational::one(), 1), (Rational::one(), 2)]),
        Node::Sum(vec![(Rational::one(), 1), (rat(-1, 1), 3)]),
        Node::Sum(vec![(rat(-1, 1), 2), (rat(3, 1), 1)]),
        Node::Prod(vec![7, 3]),
        Node::Prod(vec![5, 6]),
        Node::Sum(vec![(rat(1, 50), 8), (rat(1, 20), 9)]),
        Node::Prod(vec![4, 10]),
    ];
    Circuit::new(3, nodes, 11).expect("example circuit is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn example_passes_all_checks() {
        let c = example_circuit();
        assert_eq!(c.len(), 12);
        assert_eq!(c.n_vars(), 3);
        let report = c.validate();
        assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn two_sinks_fail_single_output() {
        let c = Circuit::from_raw_parts(2, vec![Node::Var(0), Node::Var(1)], 1);
        let r = c.validate();
        assert!(!r.check(CheckKind::SingleOutput).passed);
        assert!(r.check(CheckKind::Topological).passed);
    }

    #[test]
    fn forward_reference_fails_topological() {
        let nodes = vec![
            Node::Var(0),
            Node::Var(1),
            Node::Const(rat(1, 1)),
            Node::Var(2),
            Node::Prod(vec![0, 6]),
            Node::Sum(vec![(rat(1, 1), 1)]),
            Node::Sum(vec![(rat(1, 1), 2), (rat(1, 1), 3)]),
        ];
        let c = Circuit::from_raw_parts(3, nodes.clone(), 6);
        let r = c.validate();
        let topo = r.check(CheckKind::Topological);
        assert!(!topo.passed);
        assert!(topo.detail.contains("node 4 references node 6"));
        assert!(Circuit::new(3, nodes, 6).is_err());
    }

    #[test]
    fn zero_weight_and_empty_children_rejected() {
        let c = Circuit::from_raw_parts(1, vec![Node::Var(0), Node::Sum(vec![(Rational::zero(), 0)])], 1);
        assert!(!c.validate().check(CheckKind::NonzeroWeights).passed);
        let c = Circuit::from_raw_parts(1, vec![Node::Prod(vec![])], 0);
        assert!(!c.validate().check(CheckKind::Arity).passed);
        let c = Circuit::from_raw_parts(1, vec![Node::Var(3)], 0);
        assert!(!c.validate().check(CheckKind::VarRange).passed);
        let c = Circuit::from_raw_parts(1, vec![Node::Var(0)], 4);
        assert!(!c.validate().check(CheckKind::OutputExists).passed);
    }

    #[test]
    fn unreachable_nodes_pruned() {
        let nodes = vec![Node::Var(0), Node::Var(1), Node::Prod(vec![1])];
        let c = Circuit::new(2, nodes, 2).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.nodes(), &[Node::Var(1), Node::Prod(vec![0])]);
        assert!(c.validate().passed());
    }

    #[test]
    fn builder_shares_leaves() {
        let mut b = CircuitBuilder::new(2);
        let x = b.var(0);
        assert_eq!(b.var(0), x);
        let one = b.constant(Rational::one());
        assert_eq!(b.constant(Rational::one()), one);
        let nx = b.negated_var(1);
        let p = b.prod(vec![x, nx]);
        let c = b.finish(p).unwrap();
        assert!(c.validate().passed());
    }

    #[test]
    fn var_sets_follow_children() {
        let c = example_circuit();
        let sets = c.var_sets();
        assert_eq!(sets[c.output()].count_ones(), 3);
        assert_eq!(sets[10].ones().collect::<Vec<_>>(), vec![1, 2]);
        assert!(sets[1].is_empty());
    }
}
