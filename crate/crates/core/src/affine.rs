//! Affine constraints over GF(2).
//!
//! Counting the solutions of a parity system is Gaussian elimination:
//! a consistent system of rank `r` over `n` variables has `2^(n−r)`
//! solutions. This module also builds the parity-constrained function over
//! blocks `x` (n), `y` (n³) and `z` (n³) with constraints
//! `y_ijk ⊕ xᵢ ⊕ xⱼ ⊕ xₖ = 1` and `y_ijk ⊕ z_ijk = 1`, whose plain marginals
//! are cheap while its Hamming-weight marginals encode #k-ONES counting of
//! width-3 XOR formulas.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::BitSet;
use crate::error::Error;
use crate::limits::Limits;
use crate::query::{Evidence, EvidenceString};

/// Rows `coeffs · x = rhs` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2System {
    n_vars: usize,
    rows: Vec<(BitSet, bool)>,
}

impl GF2System {
    pub fn new(n_vars: usize) -> Self {
        GF2System {
            n_vars,
            rows: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn rows(&self) -> &[(BitSet, bool)] {
        &self.rows
    }

    pub fn push_row(&mut self, coeffs: BitSet, rhs: bool) {
        assert_eq!(coeffs.len(), self.n_vars, "row width");
        self.rows.push((coeffs, rhs));
    }

    /// Adds `⊕_{v ∈ vars} x_v = rhs`; repeated indices cancel.
    pub fn push_parity(&mut self, vars: &[usize], rhs: bool) {
        let mut row = BitSet::new(self.n_vars);
        for &v in vars {
            row.toggle(v);
        }
        self.rows.push((row, rhs));
    }

    /// Appends a unit equation per fixed entry of `m`.
    pub fn with_evidence(&self, m: &EvidenceString) -> Result<GF2System, Error> {
        m.check_len(self.n_vars)?;
        let mut s = self.clone();
        for (i, e) in m.entries().iter().enumerate() {
            match e {
                Evidence::Zero => s.push_parity(&[i], false),
                Evidence::One => s.push_parity(&[i], true),
                Evidence::Star => {}
            }
        }
        Ok(s)
    }

    pub fn is_satisfied_by(&self, x: &BitSet) -> bool {
        self.rows.iter().all(|(row, rhs)| row.dot(x) == *rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub consistent: bool,
    pub rank: usize,
    /// Pivot column of each independent row, in row order.
    pub pivot_columns: Vec<usize>,
    /// Solution with every free variable set to 0 (meaningful only when
    /// consistent).
    pub particular: BitSet,
    /// One basis vector of the homogeneous solution space per free column.
    pub null_basis: Vec<BitSet>,
}

impl Elimination {
    pub fn dimension(&self) -> usize {
        self.null_basis.len()
    }
}

/// Gauss–Jordan elimination to reduced row echelon form.
pub fn gf2_eliminate(s: &GF2System) -> Elimination {
    let n = s.n_vars;
    let mut rows: Vec<(BitSet, bool)> = s.rows.clone();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].0.get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let (pivot_row, pivot_rhs) = rows[rank].clone();
        for (r, (row, rhs)) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_with(&pivot_row);
                *rhs ^= pivot_rhs;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let consistent = rows[rank..].iter().all(|(_, rhs)| !rhs);

    let mut particular = BitSet::new(n);
    for (r, &col) in pivots.iter().enumerate() {
        particular.set(col, rows[r].1);
    }
    let mut is_pivot = vec![false; n];
    for &col in &pivots {
        is_pivot[col] = true;
    }
    let null_basis = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitSet::new(n);
            v.insert(f);
            for (r, &col) in pivots.iter().enumerate() {
                if rows[r].0.get(f) {
                    v.insert(col);
                }
            }
            v
        })
        .collect();

    Elimination {
        consistent,
        rank,
        pivot_columns: pivots,
        particular,
        null_basis,
    }
}

/// Number of solutions: 0 if inconsistent, else `2^(n − rank)`.
pub fn count_solutions(s: &GF2System) -> BigUint {
    let e = gf2_eliminate(s);
    if e.consistent {
        BigUint::one() << (s.n_vars - e.rank)
    } else {
        BigUint::zero()
    }
}

/// Every solution of `s` consistent with `m`, in Gray-code order.
pub fn solutions(
    s: &GF2System,
    m: &EvidenceString,
    dim_limit: usize,
) -> Result<impl Iterator<Item = BitSet>, Error> {
    let e = gf2_eliminate(&s.with_evidence(m)?);
    if e.dimension() > dim_limit {
        return Err(Error::Capacity {
            what: "solution space dimension",
            requested: e.dimension(),
            limit: dim_limit,
        });
    }
    let total: u64 = if e.consistent { 1 << e.dimension() } else { 0 };
    let mut current = e.particular.clone();
    let basis = e.null_basis;
    let mut step = 0u64;
    Ok(core::iter::from_fn(move || {
        if step >= total {
            return None;
        }
        if step > 0 {
            current.xor_with(&basis[step.trailing_zeros() as usize]);
        }
        step += 1;
        Some(current.clone())
    }))
}

/// Counts of solutions of `s` consistent with `m`, bucketed by Hamming
/// weight (index 0 to `n_vars`).
pub fn weight_histogram(s: &GF2System, m: &EvidenceString, dim_limit: usize) -> Result<Vec<u64>, Error> {
    let mut hist = vec![0u64; s.n_vars + 1];
    for x in solutions(s, m, dim_limit)? {
        hist[x.count_ones()] += 1;
    }
    Ok(hist)
}

/// A conjunction of clauses `xᵢ ⊕ xⱼ ⊕ xₖ = 1` (0-based indices, repeats
/// allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XorFormula {
    n: usize,
    clauses: Vec<[usize; 3]>,
}

impl XorFormula {
    pub fn new(n: usize, clauses: Vec<[usize; 3]>) -> Result<Self, Error> {
        for c in &clauses {
            if let Some(&index) = c.iter().find(|&&i| i >= n) {
                return Err(Error::ClauseIndex { index, n });
            }
        }
        Ok(XorFormula { n, clauses })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, x: u64) -> bool {
        self.clauses
            .iter()
            .all(|c| (x >> c[0] ^ x >> c[1] ^ x >> c[2]) & 1 == 1)
    }

    pub fn system(&self) -> GF2System {
        let mut s = GF2System::new(self.n);
        for c in &self.clauses {
            s.push_parity(c, true);
        }
        s
    }
}

/// Variable layout of the parity-constrained function: `x` first, then
/// `y_ijk` and `z_ijk` in lexicographic `(i, j, k)` order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaffInstance {
    n: usize,
}

impl FaffInstance {
    pub fn new(n: usize, limits: &Limits) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::EmptyParameter(n));
        }
        if n > limits.faff_max_n {
            return Err(Error::Capacity {
                what: "parity instance parameter n",
                requested: n,
                limit: limits.faff_max_n,
            });
        }
        Ok(FaffInstance { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cube(&self) -> usize {
        self.n * self.n * self.n
    }

    /// `2n³ + n`.
    pub fn n_vars(&self) -> usize {
        2 * self.cube() + self.n
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    fn triple(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn y(&self, i: usize, j: usize, k: usize) -> usize {
        self.n + self.triple(i, j, k)
    }

    pub fn z(&self, i: usize, j: usize, k: usize) -> usize {
        self.n + self.cube() + self.triple(i, j, k)
    }

    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let n = self.n;
        (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
    }

    pub fn system(&self) -> GF2System {
        let mut s = GF2System::new(self.n_vars());
        for (i, j, k) in self.triples() {
            s.push_parity(&[self.y(i, j, k), self.x(i), self.x(j), self.x(k)], true);
            s.push_parity(&[self.y(i, j, k), self.z(i, j, k)], true);
        }
        s
    }

    /// Weights of the `y` and `z` blocks of an assignment.
    pub fn block_weights(&self, a: &BitSet) -> (usize, usize) {
        let y = (self.n..self.n + self.cube()).filter(|&v| a.get(v)).count();
        let z = (self.n + self.cube()..self.n_vars())
            .filter(|&v| a.get(v))
            .count();
        (y, z)
    }
}

/// Marginal of the parity-constrained function: solutions consistent with
/// `m`, counted by elimination.
pub fn faff_mar(n: usize, m: &EvidenceString, limits: &Limits) -> Result<BigUint, Error> {
    let inst = FaffInstance::new(n, limits)?;
    Ok(count_solutions(&inst.system().with_evidence(m)?))
}

/// Evidence and target weight such that the Hamming-weight marginal of the
/// parity-constrained function at `(m, k + n³)` equals the number of
/// weight-`k` solutions of `phi`: each clause `(i, j, k′)` fixes
/// `y_ijk′ = 0` and `z_ijk′ = 1`, every other entry is a star.
pub fn reduce_kones_to_hmar(phi: &XorFormula, k: usize) -> Result<(EvidenceString, usize), Error> {
    let n = phi.n();
    if k > n {
        return Err(Error::WeightOutOfRange { k, n });
    }
    if n == 0 {
        return Err(Error::EmptyParameter(n));
    }
    let inst = FaffInstance { n };
    let mut m = EvidenceString::all_stars(inst.n_vars());
    for &[i, j, l] in phi.clauses() {
        m.entries_mut()[inst.y(i, j, l)] = Evidence::Zero;
        m.entries_mut()[inst.z(i, j, l)] = Evidence::One;
    }
    Ok((m, k + inst.cube()))
}

/// Number of satisfying assignments of `phi` with exactly `k` ones.
pub fn brute_kones(phi: &XorFormula, k: usize, limits: &Limits) -> Result<u64, Error> {
    if phi.n() > limits.kones_max_n {
        return Err(Error::Capacity {
            what: "#k-ONES variables",
            requested: phi.n(),
            limit: limits.kones_max_n,
        });
    }
    Ok((0..1u64 << phi.n())
        .filter(|&x| x.count_ones() as usize == k && phi.is_satisfied_by(x))
        .count() as u64)
}
