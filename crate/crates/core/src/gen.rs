//! Random instances for property checks and the oracle command.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::degree::formal_degree;
use crate::query::{Evidence, EvidenceString, VirtualEvidence};
use crate::rational::Rational;

/// Nonzero rational with numerator in ±1..=`num` and denominator 1..=`den`.
pub fn nonzero_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    let a = rng.gen_range(1..=num) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let b = rng.gen_range(1..=den);
    Rational::new(a, b).expect("positive denominator")
}

pub fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den)).expect("positive denominator")
}

pub fn rational_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rational(rng, 20, 12)).collect()
}

pub fn evidence<R: Rng>(rng: &mut R, n: usize) -> EvidenceString {
    EvidenceString::new(
        (0..n)
            .map(|_| match rng.gen_range(0..3) {
                0 => Evidence::Zero,
                1 => Evidence::One,
                _ => Evidence::Star,
            })
            .collect(),
    )
}

/// Mix of hard pairs `(1,0)`/`(0,1)` and random nonnegative pairs.
pub fn virtual_evidence<R: Rng>(rng: &mut R, n: usize) -> VirtualEvidence {
    let pairs = (0..n)
        .map(|_| match rng.gen_range(0..6) {
            0 => (Rational::one(), Rational::zero()),
            1 => (Rational::zero(), Rational::one()),
            _ => {
                let a = Rational::new(rng.gen_range(0..=6), rng.gen_range(1..=5)).unwrap();
                let b = Rational::new(rng.gen_range(0..=6), rng.gen_range(1..=5)).unwrap();
                if a.is_zero() && b.is_zero() {
                    (Rational::one(), Rational::one())
                } else {
                    (a, b)
                }
            }
        })
        .collect();
    VirtualEvidence::new(pairs).expect("generated pairs are valid")
}

struct Gen<'r, R> {
    rng: &'r mut R,
    b: CircuitBuilder,
    /// Built nodes with their variable sets, for reuse.
    pool: Vec<(NodeId, Vec<usize>)>,
    budget: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn reuse(&mut self, vars: &[usize]) -> Option<NodeId> {
        if self.pool.is_empty() || !self.rng.gen_bool(0.25) {
            return None;
        }
        let candidates: Vec<NodeId> = self
            .pool
            .iter()
            .filter(|(_, vs)| !vs.is_empty() && vs.iter().all(|v| vars.contains(v)))
            .map(|(id, _)| *id)
            .collect();
        candidates.choose(self.rng).copied()
    }

    fn leaf(&mut self, vars: &[usize]) -> NodeId {
        match vars {
            [] => {
                let c = nonzero_rational(self.rng, 4, 3);
                self.b.constant(c)
            }
            [v] => {
                let x = self.b.var(*v);
                if self.rng.gen_bool(0.5) {
                    x
                } else {
                    let one = self.b.constant(Rational::one());
                    let w = nonzero_rational(self.rng, 3, 4);
                    let c = nonzero_rational(self.rng, 3, 4);
                    self.b.sum(vec![(w, x), (c, one)])
                }
            }
            _ => unreachable!("leaf over several variables"),
        }
    }

    fn node(&mut self, vars: &[usize], depth: usize) -> NodeId {
        if vars.len() <= 1 && (depth == 0 || self.budget == 0 || self.rng.gen_bool(0.6)) {
            return self.leaf(vars);
        }
        if let Some(id) = self.reuse(vars) {
            return id;
        }
        self.budget = self.budget.saturating_sub(1);
        let split = vars.len() >= 2 && (depth == 0 || self.budget == 0 || self.rng.gen_bool(0.5));
        let id = if split {
            // Product over a partition into disjoint groups.
            let mut vs = vars.to_vec();
            vs.shuffle(self.rng);
            let parts = self.rng.gen_range(2..=vs.len().min(3));
            let mut groups: Vec<Vec<usize>> = vec![Vec::new(); parts];
            for (i, v) in vs.into_iter().enumerate() {
                let g = if i < parts {
                    i
                } else {
                    self.rng.gen_range(0..parts)
                };
                groups[g].push(v);
            }
            let children = groups
                .iter()
                .map(|g| self.node(g, depth.saturating_sub(1)))
                .collect();
            self.b.prod(children)
        } else {
            let arity = self.rng.gen_range(2..=3);
            let mut children = Vec::with_capacity(arity);
            for _ in 0..arity {
                let sub: Vec<usize> = vars.iter().copied().filter(|_| self.rng.gen_bool(0.8)).collect();
                let child = self.node(&sub, depth.saturating_sub(1));
                let w = if self.rng.gen_bool(0.4) {
                    Rational::one()
                } else {
                    nonzero_rational(self.rng, 5, 4)
                };
                children.push((w, child));
            }
            self.b.sum(children)
        };
        self.pool.push((id, vars.to_vec()));
        id
    }
}

/// Random syntactically multilinear circuit over `n` variables.
pub fn syntactic_circuit<R: Rng>(rng: &mut R, n: usize, budget: usize) -> Circuit {
    let mut g = Gen {
        rng,
        b: CircuitBuilder::new(n),
        pool: Vec::new(),
        budget,
    };
    let all: Vec<usize> = (0..n).collect();
    let depth = 2 + n.max(1).ilog2().min(4) as usize * 2;
    let out = g.node(&all, depth);
    g.b.finish(out).expect("generated circuit is valid")
}

/// Random circuit whose output is multilinear although some products share
/// variables: a syntactic core multiplied by `xᵢ(1 − xᵢ) + xᵢ·xᵢ = xᵢ`
/// for a variable it does not mention, plus a cancelling pair
/// `w·(h·h) − w·(h·h)`.
pub fn finally_multilinear_circuit<R: Rng>(rng: &mut R, n: usize, budget: usize) -> Circuit {
    assert!(n >= 1);
    let i = rng.gen_range(0..n);
    let rest: Vec<usize> = (0..n).filter(|&v| v != i).collect();
    let mut g = Gen {
        rng,
        b: CircuitBuilder::new(n),
        pool: Vec::new(),
        budget,
    };
    let core = g.node(&rest, 2 + rest.len().max(1).ilog2() as usize * 2);
    let x = g.b.var(i);
    let nx = g.b.negated_var(i);
    let a = g.b.prod(vec![x, nx]);
    let sq = g.b.prod(vec![x, x]);
    let gadget = g.b.add(&[a, sq]);
    let main = g.b.prod(vec![core, gadget]);
    let h = g.node(&rest, 2);
    let hh = g.b.prod(vec![h, h]);
    let w = nonzero_rational(g.rng, 3, 2);
    let out = g.b.sum(vec![(Rational::one(), main), (w.clone(), hh), (-w, hh)]);
    g.b.finish(out).expect("generated circuit is valid")
}

/// Either kind of certified-multilinear circuit, mostly syntactic.
pub fn multilinear_circuit<R: Rng>(rng: &mut R, n: usize, budget: usize) -> Circuit {
    if n >= 1 && rng.gen_bool(0.3) {
        finally_multilinear_circuit(rng, n, budget)
    } else {
        syntactic_circuit(rng, n, budget)
    }
}

/// Arbitrary circuit (not necessarily multilinear) with `size` internal
/// nodes and formal degree at most `max_degree`.
pub fn general_circuit<R: Rng>(rng: &mut R, n: usize, size: usize, max_degree: u64) -> Circuit {
    let mut b = CircuitBuilder::new(n.max(1));
    let mut ids: Vec<NodeId> = (0..n).map(|i| b.var(i)).collect();
    let mut degs: Vec<u64> = vec![1; ids.len()];
    for _ in 0..2 {
        let c = nonzero_rational(rng, 9, 7);
        ids.push(b.constant(c));
        degs.push(1);
    }
    for _ in 0..size {
        let arity = rng.gen_range(1..=3);
        let picks: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..ids.len())).collect();
        let prod_deg: u64 = picks.iter().map(|&p| degs[p]).sum();
        if rng.gen_bool(0.4) && prod_deg <= max_degree {
            ids.push(b.prod(picks.iter().map(|&p| ids[p]).collect()));
            degs.push(prod_deg);
        } else {
            let mut d = 0;
            let children = picks
                .iter()
                .map(|&p| {
                    let w = if rng.gen_bool(0.3) || degs[p] >= max_degree {
                        Rational::one()
                    } else {
                        nonzero_rational(rng, 7, 5)
                    };
                    d = d.max(degs[p] + u64::from(!w.is_one()));
                    (w, ids[p])
                })
                .collect();
            ids.push(b.sum(children));
            degs.push(d);
        }
    }
    // Tie every node into the output.
    let last = *ids.last().expect("nonempty");
    let tail: Vec<(Rational, NodeId)> = ids
        .iter()
        .rev()
        .take(4)
        .map(|&id| (Rational::one(), id))
        .collect();
    let out = if tail.len() > 1 { b.sum(tail) } else { last };
    let c = b.finish(out).expect("generated circuit is valid");
    debug_assert!(formal_degree(&c).output_total_degree <= max_degree + 1);
    c
}
