//! Ground-truth machinery over the boolean cube.
//!
//! Truth tables are indexed by the integer encoding of `x` (bit `i` is `xᵢ`).
//! The multilinear coefficients of a table are its Möbius transform over the
//! subset lattice, `c_S = Σ_{T⊆S} (−1)^{|S∖T|} f(v_T)`, and the zeta
//! transform `f(v_U) = Σ_{S⊆U} c_S` inverts it. The network polynomial keeps
//! the table values themselves as coefficients of
//! `∏_{i∈S} xᵢ ∏_{i∉S} x̄ᵢ`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::certify::MultilinearCircuit;
use crate::circuit::{Circuit, CircuitBuilder, Node, NodeId};
use crate::degree::first_syntactic_violation;
use crate::error::Error;
use crate::eval::eval_direct;
use crate::limits::Limits;
use crate::query::{EvidenceString, VirtualEvidence};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    values: Vec<Rational>,
}

impl TruthTable {
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self, Error> {
        if n >= usize::BITS as usize || values.len() != 1usize << n {
            return Err(Error::LengthMismatch {
                what: "truth table",
                expected: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
                got: values.len(),
            });
        }
        Ok(TruthTable { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        TruthTable {
            n,
            values: vec![Rational::zero(); 1 << n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, x: u64) -> &Rational {
        &self.values[x as usize]
    }

    pub fn set(&mut self, x: u64, v: Rational) {
        self.values[x as usize] = v;
    }
}

fn check_table_n(n: usize, limits: &Limits) -> Result<(), Error> {
    if n > limits.table_max_n {
        return Err(Error::Capacity {
            what: "truth table variables",
            requested: n,
            limit: limits.table_max_n,
        });
    }
    Ok(())
}

fn bool_point(n: usize, x: u64) -> Vec<Rational> {
    (0..n)
        .map(|i| {
            if x >> i & 1 == 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

pub fn table_from_circuit(c: &Circuit, limits: &Limits) -> Result<TruthTable, Error> {
    let n = c.n_vars();
    check_table_n(n, limits)?;
    let values = (0..1u64 << n)
        .map(|x| eval_direct(c, &bool_point(n, x)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TruthTable { n, values })
}

/// Multilinear polynomial as a map from variable subsets (bitmasks) to
/// nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMultilinearPoly {
    n: usize,
    terms: BTreeMap<u64, Rational>,
}

impl SparseMultilinearPoly {
    pub fn zero(n: usize) -> Result<Self, Error> {
        if n > 64 {
            return Err(Error::Capacity {
                what: "subset-mask variables",
                requested: n,
                limit: 64,
            });
        }
        Ok(SparseMultilinearPoly {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, mask: u64, c: Rational) {
        assert!(
            self.n == 64 || mask >> self.n == 0,
            "mask {:#b} exceeds {} variables",
            mask,
            self.n
        );
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(&mask, c)| {
                (0..self.n)
                    .filter(|i| mask >> i & 1 == 1)
                    .fold(c.clone(), |acc, i| acc * &point[i])
            })
            .sum()
    }
}

/// Möbius transform: the unique multilinear polynomial agreeing with `t`.
pub fn coefficients_from_table(t: &TruthTable) -> SparseMultilinearPoly {
    let mut v = t.values.clone();
    for bit in 0..t.n {
        let step = 1usize << bit;
        for mask in 0..v.len() {
            if mask & step != 0 {
                let lower = v[mask ^ step].clone();
                v[mask] -= lower;
            }
        }
    }
    let mut p = SparseMultilinearPoly::zero(t.n).expect("table sizes fit a mask");
    for (mask, c) in v.into_iter().enumerate() {
        p.add_term(mask as u64, c);
    }
    p
}

/// Zeta transform: the table of values on `{0,1}ⁿ`.
pub fn table_from_coefficients(p: &SparseMultilinearPoly, limits: &Limits) -> Result<TruthTable, Error> {
    check_table_n(p.n, limits)?;
    let mut v = vec![Rational::zero(); 1 << p.n];
    for (&mask, c) in &p.terms {
        v[mask as usize] = c.clone();
    }
    for bit in 0..p.n {
        let step = 1usize << bit;
        for mask in 0..v.len() {
            if mask & step != 0 {
                let lower = v[mask ^ step].clone();
                v[mask] += lower;
            }
        }
    }
    Ok(TruthTable { n: p.n, values: v })
}

/// `Σ_S terms[S] · ∏_{i∈S} xᵢ · ∏_{i∉S} x̄ᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkPoly {
    n: usize,
    terms: BTreeMap<u64, Rational>,
}

impl NetworkPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, mask: u64) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &[Rational], xbar: &[Rational]) -> Result<Rational, Error> {
        check_pair_len(self.n, x, xbar)?;
        Ok(self
            .terms
            .iter()
            .map(|(&mask, c)| {
                (0..self.n).fold(c.clone(), |acc, i| {
                    acc * if mask >> i & 1 == 1 { &x[i] } else { &xbar[i] }
                })
            })
            .sum())
    }
}

fn check_pair_len(n: usize, x: &[Rational], xbar: &[Rational]) -> Result<(), Error> {
    for (what, v) in [("x", x), ("x̄", xbar)] {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                what,
                expected: n,
                got: v.len(),
            });
        }
    }
    Ok(())
}

pub fn network_from_table(t: &TruthTable) -> NetworkPoly {
    NetworkPoly {
        n: t.n,
        terms: t
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| (m as u64, v.clone()))
            .collect(),
    }
}

/// Network polynomial of a certified circuit at `(x, x̄)`, via
/// `p̄(x, x̄) = ∏ᵢ (xᵢ + x̄ᵢ) · p(xᵢ / (xᵢ + x̄ᵢ))`. Coordinates with
/// `xᵢ + x̄ᵢ = 0` are split as `xᵢ · p̄|ᵢ₌₁ + x̄ᵢ · p̄|ᵢ₌₀`, costing one
/// evaluation per assignment of the degenerate coordinates.
pub fn network_eval(c: &MultilinearCircuit, x: &[Rational], xbar: &[Rational]) -> Result<Rational, Error> {
    let n = c.n_vars();
    check_pair_len(n, x, xbar)?;
    let mut scale = Rational::one();
    let mut base = Vec::with_capacity(n);
    let mut degenerate = Vec::new();
    for i in 0..n {
        let s = &x[i] + &xbar[i];
        if s.is_zero() {
            degenerate.push(i);
            base.push(Rational::zero());
        } else {
            base.push(x[i].checked_div(&s)?);
            scale *= s;
        }
    }
    if degenerate.len() >= 64 {
        return Err(Error::Capacity {
            what: "degenerate network coordinates",
            requested: degenerate.len(),
            limit: 63,
        });
    }
    let mut total = Rational::zero();
    for sigma in 0..1u64 << degenerate.len() {
        let mut point = base.clone();
        let mut weight = Rational::one();
        for (j, &i) in degenerate.iter().enumerate() {
            if sigma >> j & 1 == 1 {
                point[i] = Rational::one();
                weight *= &x[i];
            } else {
                weight *= &xbar[i];
            }
        }
        if weight.is_zero() {
            continue;
        }
        total += weight * eval_direct(c.circuit(), &point)?;
    }
    Ok(scale * total)
}

/// Variable index of `xᵢ` in a network circuit.
pub fn positive_var(i: usize) -> usize {
    2 * i
}

/// Variable index of `x̄ᵢ` in a network circuit.
pub fn negative_var(i: usize) -> usize {
    2 * i + 1
}

/// Builds a circuit over `(x₀, x̄₀, …, xₙ₋₁, x̄ₙ₋₁)` computing the network
/// polynomial of a syntactically multilinear circuit.
///
/// Each node `g` over variables `V(g)` is replaced by
/// `ḡ = ∏_{i∈V(g)} (xᵢ + x̄ᵢ) · g(x / (x + x̄))`: variables map to themselves,
/// products of disjoint children multiply, and every sum child `c` is padded
/// by `∏_{i∈V(g)∖V(c)} (xᵢ + x̄ᵢ)`. The output is padded to all `n`
/// variables. The result has `O(s · n)` nodes.
pub fn network_circuit_syntactic(c: &Circuit) -> Result<Circuit, Error> {
    if let Some(node) = first_syntactic_violation(c) {
        return Err(Error::NotSyntacticallyMultilinear { node });
    }
    let n = c.n_vars();
    let sets = c.var_sets();
    let mut b = CircuitBuilder::new(2 * n);
    let mut pair_sum: Vec<Option<NodeId>> = vec![None; n];
    let mut pair = |b: &mut CircuitBuilder, i: usize| -> NodeId {
        *pair_sum[i].get_or_insert_with(|| {
            let xi = b.var(positive_var(i));
            let xb = b.var(negative_var(i));
            b.add(&[xi, xb])
        })
    };
    let mut image: Vec<NodeId> = Vec::with_capacity(c.len());
    for (id, node) in c.nodes().iter().enumerate() {
        let g = match node {
            Node::Var(i) => b.var(positive_var(*i)),
            Node::Const(k) => b.constant(k.clone()),
            Node::Prod(ch) => b.prod(ch.iter().map(|&ch| image[ch]).collect()),
            Node::Sum(ch) => {
                let mut terms = Vec::with_capacity(ch.len());
                for (w, child) in ch {
                    let missing: Vec<usize> = sets[id].ones().filter(|&i| !sets[*child].get(i)).collect();
                    let term = if missing.is_empty() {
                        image[*child]
                    } else {
                        let mut factors = vec![image[*child]];
                        factors.extend(missing.into_iter().map(|i| pair(&mut b, i)));
                        b.prod(factors)
                    };
                    terms.push((w.clone(), term));
                }
                b.sum(terms)
            }
        };
        image.push(g);
    }
    let out_set = &sets[c.output()];
    let missing: Vec<usize> = (0..n).filter(|&i| !out_set.get(i)).collect();
    let out = if missing.is_empty() {
        image[c.output()]
    } else {
        let mut factors = vec![image[c.output()]];
        factors.extend(missing.into_iter().map(|i| pair(&mut b, i)));
        b.prod(factors)
    };
    b.finish(out)
}

/// Substitutes `x̄ᵢ := 1 − xᵢ` in a circuit over interleaved network
/// variables, giving a circuit over the original `n` variables.
pub fn collapse_network_circuit(c: &Circuit) -> Result<Circuit, Error> {
    if !c.n_vars().is_multiple_of(2) {
        return Err(Error::InvalidCircuit(alloc::format!(
            "network circuit needs an even variable count, got {}",
            c.n_vars()
        )));
    }
    let n = c.n_vars() / 2;
    let mut b = CircuitBuilder::new(n);
    let mut image: Vec<NodeId> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let g = match node {
            Node::Var(v) if v % 2 == 0 => b.var(v / 2),
            Node::Var(v) => b.negated_var(v / 2),
            Node::Const(k) => b.constant(k.clone()),
            Node::Prod(ch) => b.prod(ch.iter().map(|&ch| image[ch]).collect()),
            Node::Sum(ch) => b.sum(ch.iter().map(|(w, ch)| (w.clone(), image[*ch])).collect()),
        };
        image.push(g);
    }
    b.finish(image[c.output()])
}

fn masks(t: &TruthTable) -> core::ops::Range<u64> {
    0..1u64 << t.n
}

/// `Σ_{x ∈ X_m} f(x)` by enumeration.
pub fn brute_mar(t: &TruthTable, m: &EvidenceString) -> Result<Rational, Error> {
    m.check_len(t.n)?;
    Ok(masks(t).filter(|&x| m.matches(x)).map(|x| t.get(x)).sum())
}

/// `Σ_{x ∈ X_m, |x| = k} f(x)` by enumeration.
pub fn brute_hmar(t: &TruthTable, m: &EvidenceString, k: usize) -> Result<Rational, Error> {
    if k > t.n {
        return Err(Error::WeightOutOfRange { k, n: t.n });
    }
    m.check_len(t.n)?;
    Ok(masks(t)
        .filter(|&x| x.count_ones() as usize == k && m.matches(x))
        .map(|x| t.get(x))
        .sum())
}

/// Literal evaluation of the sparse representation.
pub fn brute_vmar(p: &SparseMultilinearPoly, point: &[Rational]) -> Result<Rational, Error> {
    if point.len() != p.n {
        return Err(Error::LengthMismatch {
            what: "point",
            expected: p.n,
            got: point.len(),
        });
    }
    Ok(p.eval(point))
}

/// `Σ_{x ∈ X_m} f(x) · ∏ᵢ (αᵢ xᵢ + ᾱᵢ (1 − xᵢ))` by enumeration.
pub fn brute_ve_marginal(t: &TruthTable, w: &VirtualEvidence, m: &EvidenceString) -> Result<Rational, Error> {
    m.check_len(t.n)?;
    if w.len() != t.n {
        return Err(Error::LengthMismatch {
            what: "virtual evidence",
            expected: t.n,
            got: w.len(),
        });
    }
    Ok(masks(t)
        .filter(|&x| m.matches(x))
        .map(|x| t.get(x) * w.weight_of(x))
        .sum())
}
