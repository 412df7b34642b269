//! Structural analyses: formal degree and syntactic multilinearity.

use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Node, NodeId};

/// Syntactic degree bounds.
///
/// Total degrees treat every constant and every non-unit edge weight as a
/// fresh variable, so they bound the degree of each node's polynomial in the
/// input variables and those fresh variables jointly. Per-variable degrees
/// count input variables only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub per_node_total_degree: Vec<u64>,
    pub output_total_degree: u64,
    pub per_variable_output_degree: Vec<u64>,
}

pub fn formal_degree(c: &Circuit) -> DegreeReport {
    let n = c.n_vars();
    let mut total: Vec<u64> = Vec::with_capacity(c.len());
    let mut per_var: Vec<Vec<u64>> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let (t, v) = match node {
            Node::Var(i) => {
                let mut v = vec![0; n];
                v[*i] = 1;
                (1, v)
            }
            Node::Const(_) => (1, vec![0; n]),
            Node::Sum(ch) => {
                let t = ch
                    .iter()
                    .map(|(w, c)| total[*c] + u64::from(!w.is_one()))
                    .max()
                    .unwrap_or(0);
                let mut v = vec![0; n];
                for (_, c) in ch {
                    for (a, b) in v.iter_mut().zip(&per_var[*c]) {
                        *a = (*a).max(*b);
                    }
                }
                (t, v)
            }
            Node::Prod(ch) => {
                let t = ch.iter().fold(0u64, |acc, c| acc.saturating_add(total[*c]));
                let mut v = vec![0u64; n];
                for c in ch {
                    for (a, b) in v.iter_mut().zip(&per_var[*c]) {
                        *a = a.saturating_add(*b);
                    }
                }
                (t, v)
            }
        };
        total.push(t);
        per_var.push(v);
    }
    let out = c.output();
    DegreeReport {
        output_total_degree: total[out],
        per_variable_output_degree: per_var.swap_remove(out),
        per_node_total_degree: total,
    }
}

/// Returns the first product node whose children share a variable, or
/// `None` when the circuit is syntactically multilinear.
pub fn first_syntactic_violation(c: &Circuit) -> Option<NodeId> {
    let sets = c.var_sets();
    c.nodes().iter().enumerate().find_map(|(id, node)| {
        let Node::Prod(ch) = node else { return None };
        let mut seen = crate::bits::BitSet::new(c.n_vars());
        for &child in ch {
            if seen.intersects(&sets[child]) {
                return Some(id);
            }
            seen.union_with(&sets[child]);
        }
        None
    })
}

pub fn is_syntactically_multilinear(c: &Circuit) -> bool {
    first_syntactic_violation(c).is_none()
}
