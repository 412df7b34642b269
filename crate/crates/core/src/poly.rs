//! Sparse polynomial expansion of circuits.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{Circuit, Node};
use crate::error::Error;
use crate::multilinear::SparseMultilinearPoly;
use crate::rational::Rational;

/// A monomial as `(variable, exponent)` pairs sorted by variable, exponents
/// positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e <= 1)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

/// A polynomial with exact rational coefficients; no zero coefficient is
/// ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero(n_vars: usize) -> Self {
        SparsePoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = SparsePoly::zero(n_vars);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut p = SparsePoly::zero(n_vars);
        p.add_term(Monomial::var(i), Rational::one());
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SparsePoly, w: &Rational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * w);
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(Monomial::is_multilinear)
    }

    /// First variable that appears with exponent ≥ 2, if any.
    pub fn non_multilinear_variable(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter())
            .filter(|&&(_, e)| e >= 2)
            .map(|&(v, _)| v)
            .min()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| m.0.iter().fold(c.clone(), |acc, &(v, e)| acc * point[v].pow(e)))
            .sum()
    }

    /// Reinterprets a multilinear expansion as coefficients over subsets.
    pub fn to_multilinear(&self) -> Result<SparseMultilinearPoly, Error> {
        if let Some(v) = self.non_multilinear_variable() {
            return Err(Error::Uncertified(alloc::format!(
                "variable {} appears with degree at least 2",
                v
            )));
        }
        let mut out = SparseMultilinearPoly::zero(self.n_vars)?;
        for (m, c) in &self.terms {
            let mask = m.0.iter().fold(0u64, |acc, &(v, _)| acc | 1 << v);
            out.add_term(mask, c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", c)?;
            for &(v, e) in &m.0 {
                if e == 1 {
                    write!(f, "*x{}", v)?;
                } else {
                    write!(f, "*x{}^{}", v, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Expands the polynomial computed by the output node, failing as soon as any
/// node's expansion holds more than `cap` monomials.
pub fn expand_sparse(c: &Circuit, cap: usize) -> Result<SparsePoly, Error> {
    let n = c.n_vars();
    // Free each intermediate expansion after its last consumer.
    let mut last_use = vec![0usize; c.len()];
    for (id, node) in c.nodes().iter().enumerate() {
        for ch in node.children() {
            last_use[ch] = id;
        }
    }
    last_use[c.output()] = usize::MAX;

    let mut polys: Vec<Option<SparsePoly>> = vec![None; c.len()];
    for (id, node) in c.nodes().iter().enumerate() {
        let p = match node {
            Node::Var(i) => SparsePoly::var(n, *i),
            Node::Const(k) => SparsePoly::constant(n, k.clone()),
            Node::Sum(ch) => {
                let mut acc = SparsePoly::zero(n);
                for (w, child) in ch {
                    acc.add_scaled(polys[*child].as_ref().expect("live child"), w);
                    if acc.len() > cap {
                        return Err(Error::MonomialCap { node: id, cap });
                    }
                }
                acc
            }
            Node::Prod(ch) => {
                let mut acc = SparsePoly::constant(n, Rational::one());
                for child in ch {
                    acc = acc.mul(polys[*child].as_ref().expect("live child"));
                    if acc.len() > cap {
                        return Err(Error::MonomialCap { node: id, cap });
                    }
                }
                acc
            }
        };
        polys[id] = Some(p);
        for ch in node.children() {
            if last_use[ch] == id {
                polys[ch] = None;
            }
        }
    }
    Ok(polys[c.output()].take().expect("output expanded"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{example_circuit, CircuitBuilder};
    use crate::rational::rat;
    use alloc::string::ToString;

    #[test]
    fn example_expands_to_eight_terms() {
        let p = expand_sparse(&example_circuit(), 1000).unwrap();
        let ml = p.to_multilinear().unwrap();
        let want = [
            (0b000, rat(1, 20)),
            (0b001, rat(1, 10)),
            (0b010, rat(1, 20)),
            (0b011, rat(1, 10)),
            (0b100, rat(1, 100)),
            (0b110, rat(-7, 100)),
            (0b101, rat(1, 50)),
            (0b111, rat(-7, 50)),
        ];
        assert_eq!(ml.len(), 8);
        for (mask, c) in want {
            assert_eq!(ml.coefficient(mask), c, "mask {:03b}", mask);
        }
    }

    #[test]
    fn zero_constant_is_empty() {
        let mut b = CircuitBuilder::new(2);
        let z = b.constant(Rational::zero());
        let p = expand_sparse(&b.finish(z).unwrap(), 10).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn cap_names_node() {
        let mut b = CircuitBuilder::new(4);
        let sums: Vec<_> = (0..4)
            .map(|i| {
                let x = b.var(i);
                let one = b.constant(Rational::one());
                b.add(&[x, one])
            })
            .collect();
        let p = b.prod(sums);
        let c = b.finish(p).unwrap();
        assert_eq!(expand_sparse(&c, 16).unwrap().len(), 16);
        assert_eq!(
            expand_sparse(&c, 15),
            Err(Error::MonomialCap {
                node: c.output(),
                cap: 15
            })
        );
    }

    #[test]
    fn cancellation_leaves_multilinear() {
        // x₀x₁ − x₀x₁ + x₀ through a non-disjoint product.
        let mut b = CircuitBuilder::new(2);
        let x0 = b.var(0);
        let x1 = b.var(1);
        let sq = b.prod(vec![x0, x0, x1]);
        let s = b.sum(vec![(rat(1, 1), sq), (rat(-1, 1), sq), (rat(1, 1), x0)]);
        let p = expand_sparse(&b.finish(s).unwrap(), 10).unwrap();
        assert!(p.is_multilinear());
        assert_eq!(p.len(), 1);
    }
}
