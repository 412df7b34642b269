//! Marginalization queries.
//!
//! Every query reduces to evaluating the multilinear polynomial `p` of the
//! circuit at one or a few rational points:
//!
//! * `mar`: `2^#stars · p(u)` with starred coordinates set to 1/2.
//! * `hmar`: the coefficient of `tᵏ` in
//!   `q(t) = t^#ones · (t+1)^#stars · p(u(t))`, where starred coordinates are
//!   `t/(t+1)`; `q` is recovered by interpolation over `t = 1, …, n+1`.
//! * `ve_marginal`: `∏ cᵢ · p(u)` with `cᵢ = αᵢ + ᾱᵢ`, `uᵢ = αᵢ/(αᵢ + ᾱᵢ)`
//!   on starred coordinates.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::certify::MultilinearCircuit;
use crate::error::Error;
use crate::eval::{eval_direct, lagrange_interpolate, UnivariateSample};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Evidence {
    Zero,
    One,
    Star,
}

/// A word over `{0, 1, *}`: fixed and marginalized coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvidenceString(Vec<Evidence>);

impl EvidenceString {
    pub fn new(entries: Vec<Evidence>) -> Self {
        EvidenceString(entries)
    }

    pub fn all_stars(n: usize) -> Self {
        EvidenceString(alloc::vec![Evidence::Star; n])
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        EvidenceString(
            bits.iter()
                .map(|&b| if b { Evidence::One } else { Evidence::Zero })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Evidence] {
        &self.0
    }

    pub fn entries_mut(&mut self) -> &mut [Evidence] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|e| **e == Evidence::One).count()
    }

    pub fn stars(&self) -> usize {
        self.0.iter().filter(|e| **e == Evidence::Star).count()
    }

    /// Whether boolean `x` (bit `i` of the mask is `xᵢ`) is consistent.
    pub fn matches(&self, x: u64) -> bool {
        self.0.iter().enumerate().all(|(i, e)| match e {
            Evidence::Zero => x >> i & 1 == 0,
            Evidence::One => x >> i & 1 == 1,
            Evidence::Star => true,
        })
    }

    pub fn check_len(&self, n: usize) -> Result<(), Error> {
        if self.len() != n {
            return Err(Error::LengthMismatch {
                what: "evidence",
                expected: n,
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for EvidenceString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(Evidence::Zero),
                '1' => Ok(Evidence::One),
                '*' => Ok(Evidence::Star),
                _ => Err(Error::BadEvidence(String::from(s))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(EvidenceString)
    }
}

impl fmt::Display for EvidenceString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            f.write_str(match e {
                Evidence::Zero => "0",
                Evidence::One => "1",
                Evidence::Star => "*",
            })?;
        }
        Ok(())
    }
}

/// Per-coordinate soft evidence `(αᵢ, ᾱᵢ)`: an assignment `x` is reweighted
/// by `∏ᵢ (αᵢ xᵢ + ᾱᵢ (1 − xᵢ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualEvidence(Vec<(Rational, Rational)>);

impl VirtualEvidence {
    /// Requires both weights nonnegative and at least one positive.
    pub fn new(pairs: Vec<(Rational, Rational)>) -> Result<Self, Error> {
        for (index, (a, abar)) in pairs.iter().enumerate() {
            if a.is_negative() || abar.is_negative() {
                return Err(Error::InvalidVirtualEvidence {
                    index,
                    reason: "negative weight",
                });
            }
            if a.is_zero() && abar.is_zero() {
                return Err(Error::InvalidVirtualEvidence {
                    index,
                    reason: "both weights are zero",
                });
            }
        }
        Ok(VirtualEvidence(pairs))
    }

    pub fn unit(n: usize) -> Self {
        VirtualEvidence(alloc::vec![(Rational::one(), Rational::one()); n])
    }

    pub fn pairs(&self) -> &[(Rational, Rational)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight `∏ᵢ (αᵢ xᵢ + ᾱᵢ (1 − xᵢ))` of boolean `x`.
    pub fn weight_of(&self, x: u64) -> Rational {
        self.0
            .iter()
            .enumerate()
            .map(|(i, (a, abar))| if x >> i & 1 == 1 { a.clone() } else { abar.clone() })
            .product()
    }
}

impl FromStr for VirtualEvidence {
    type Err = Error;

    /// Comma-separated `α:ᾱ` pairs, e.g. `1:0,1/2:3/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return VirtualEvidence::new(Vec::new());
        }
        let pairs = s
            .split(',')
            .map(|pair| {
                let (a, b) = pair
                    .split_once(':')
                    .ok_or_else(|| Error::BadEvidence(String::from(pair.trim())))?;
                Ok((a.parse()?, b.parse()?))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        VirtualEvidence::new(pairs)
    }
}

impl fmt::Display for VirtualEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", a, b)?;
        }
        Ok(())
    }
}

/// `coefficients[k]` is the mass of assignments of Hamming weight `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingProfile {
    pub coefficients: Vec<Rational>,
}

impl HammingProfile {
    pub fn total(&self) -> Rational {
        self.coefficients.iter().sum()
    }
}

/// Value of the multilinear polynomial at an arbitrary rational point.
pub fn vmar(c: &MultilinearCircuit, point: &[Rational]) -> Result<Rational, Error> {
    eval_direct(c.circuit(), point)
}

/// Sum of the function over all boolean points consistent with `m`.
pub fn mar(c: &MultilinearCircuit, m: &EvidenceString) -> Result<Rational, Error> {
    m.check_len(c.n_vars())?;
    let point: Vec<Rational> = m
        .entries()
        .iter()
        .map(|e| match e {
            Evidence::Zero => Rational::zero(),
            Evidence::One => Rational::one(),
            Evidence::Star => Rational::half(),
        })
        .collect();
    let scale = Rational::from_integer(num_bigint::BigInt::from(1u8) << m.stars());
    Ok(scale * eval_direct(c.circuit(), &point)?)
}

/// Coefficients of `q(t)` (length `n + 1`), interpolated from samples at
/// `t = 1, …, n + 1`.
pub fn hamming_polynomial(c: &MultilinearCircuit, m: &EvidenceString) -> Result<Vec<Rational>, Error> {
    let n = c.n_vars();
    m.check_len(n)?;
    let (ones, stars) = (m.ones() as u32, m.stars() as u32);
    let mut samples = Vec::with_capacity(n + 1);
    for t in 1..=(n as i64 + 1) {
        let t = Rational::from(t);
        let t1 = &t + Rational::one();
        let star = t.checked_div(&t1)?;
        let point: Vec<Rational> = m
            .entries()
            .iter()
            .map(|e| match e {
                Evidence::Zero => Rational::zero(),
                Evidence::One => Rational::one(),
                Evidence::Star => star.clone(),
            })
            .collect();
        let q = t.pow(ones) * t1.pow(stars) * eval_direct(c.circuit(), &point)?;
        samples.push(UnivariateSample::new(t, q));
    }
    lagrange_interpolate(&samples)
}

/// Mass of assignments consistent with `m` having exactly `k` ones.
pub fn hmar(c: &MultilinearCircuit, m: &EvidenceString, k: usize) -> Result<Rational, Error> {
    let n = c.n_vars();
    if k > n {
        return Err(Error::WeightOutOfRange { k, n });
    }
    m.check_len(n)?;
    if k < m.ones() || k > m.ones() + m.stars() {
        return Ok(Rational::zero());
    }
    let mut q = hamming_polynomial(c, m)?;
    Ok(q.swap_remove(k))
}

pub fn hmar_profile(c: &MultilinearCircuit, m: &EvidenceString) -> Result<HammingProfile, Error> {
    Ok(HammingProfile {
        coefficients: hamming_polynomial(c, m)?,
    })
}

/// Mass consistent with `m` after reweighting by virtual evidence `w`.
pub fn ve_marginal(
    c: &MultilinearCircuit,
    w: &VirtualEvidence,
    m: &EvidenceString,
) -> Result<Rational, Error> {
    let n = c.n_vars();
    m.check_len(n)?;
    if w.len() != n {
        return Err(Error::LengthMismatch {
            what: "virtual evidence",
            expected: n,
            got: w.len(),
        });
    }
    let mut scale = Rational::one();
    let mut point = Vec::with_capacity(n);
    for (e, (a, abar)) in m.entries().iter().zip(w.pairs()) {
        let (ci, ui) = match e {
            Evidence::One => (a.clone(), Rational::one()),
            Evidence::Zero => (abar.clone(), Rational::zero()),
            Evidence::Star => {
                let s = a + abar;
                let u = a.checked_div(&s)?;
                (s, u)
            }
        };
        if ci.is_zero() {
            return Ok(Rational::zero());
        }
        scale *= ci;
        point.push(ui);
    }
    Ok(scale * eval_direct(c.circuit(), &point)?)
}

/// `ve_marginal(w, m)` normalized by the total reweighted mass.
pub fn ve_posterior(
    c: &MultilinearCircuit,
    w: &VirtualEvidence,
    m: &EvidenceString,
) -> Result<Rational, Error> {
    let z = ve_marginal(c, w, &EvidenceString::all_stars(c.n_vars()))?;
    if z.is_zero() {
        return Err(Error::UndefinedPosterior);
    }
    ve_marginal(c, w, m)?.checked_div(&z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::example_circuit;
    use crate::limits::Limits;
    use crate::rational::rat;
    use alloc::string::ToString;
    use alloc::vec;

    fn fig() -> MultilinearCircuit {
        MultilinearCircuit::certify(example_circuit(), &Limits::default()).unwrap()
    }

    fn ev(s: &str) -> EvidenceString {
        s.parse().unwrap()
    }

    #[test]
    fn evidence_parsing() {
        let m = ev("0*1");
        assert_eq!(m.entries(), &[Evidence::Zero, Evidence::Star, Evidence::One]);
        assert_eq!(m.to_string(), "0*1");
        assert!("01x".parse::<EvidenceString>().is_err());
        assert!(m.matches(0b110));
        assert!(!m.matches(0b111));
    }

    #[test]
    fn virtual_evidence_parsing() {
        let w: VirtualEvidence = "1:0,1/2:3/2,2:2".parse().unwrap();
        assert_eq!(w.pairs()[1], (rat(1, 2), rat(3, 2)));
        assert_eq!(w.to_string(), "1:0,1/2:3/2,2:2");
        assert!(matches!(
            "0:0".parse::<VirtualEvidence>(),
            Err(Error::InvalidVirtualEvidence { index: 0, .. })
        ));
        assert!("-1:1".parse::<VirtualEvidence>().is_err());
        assert!("1-1".parse::<VirtualEvidence>().is_err());
    }

    #[test]
    fn vmar_values() {
        let c = fig();
        assert_eq!(
            vmar(&c, &[Rational::half(), Rational::half(), Rational::half()]).unwrap(),
            rat(1, 8)
        );
        assert_eq!(vmar(&c, &[rat(0, 1), rat(1, 1), rat(1, 1)]).unwrap(), rat(1, 25));
    }

    #[test]
    fn mar_values() {
        let c = fig();
        assert_eq!(mar(&c, &ev("0**")).unwrap(), rat(1, 4));
        assert_eq!(mar(&c, &ev("***")).unwrap(), rat(1, 1));
        assert_eq!(mar(&c, &ev("110")).unwrap(), rat(3, 10));
        assert!(matches!(mar(&c, &ev("01")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn hmar_values() {
        let c = fig();
        assert_eq!(hmar(&c, &ev("0**"), 1).unwrap(), rat(4, 25));
        assert_eq!(hmar(&c, &ev("0**"), 3).unwrap(), rat(0, 1));
        assert!(matches!(
            hmar(&c, &ev("0**"), 4),
            Err(Error::WeightOutOfRange { k: 4, n: 3 })
        ));
        let p = hmar_profile(&c, &ev("0**")).unwrap();
        assert_eq!(
            p.coefficients,
            vec![rat(1, 20), rat(4, 25), rat(1, 25), rat(0, 1)]
        );
        assert_eq!(p.total(), rat(1, 4));
    }

    #[test]
    fn fixed_evidence_profile_has_one_entry() {
        let c = fig();
        let p = hmar_profile(&c, &ev("101")).unwrap();
        for (k, v) in p.coefficients.iter().enumerate() {
            if k == 2 {
                assert_eq!(v, &rat(18, 100));
            } else {
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn virtual_evidence_values() {
        let c = fig();
        let unit = VirtualEvidence::unit(3);
        assert_eq!(ve_marginal(&c, &unit, &ev("0**")).unwrap(), rat(1, 4));
        let hard: VirtualEvidence = "1:0,1:1,1:1".parse().unwrap();
        assert_eq!(ve_marginal(&c, &hard, &ev("***")).unwrap(), rat(3, 4));
        assert_eq!(ve_posterior(&c, &hard, &ev("*1*")).unwrap(), rat(14, 25));
        assert_eq!(ve_marginal(&c, &hard, &ev("0**")).unwrap(), rat(0, 1));
    }

    #[test]
    fn zero_normalizer_is_an_error() {
        let c = MultilinearCircuit::trusted({
            let mut b = crate::circuit::CircuitBuilder::new(1);
            let x = b.var(0);
            b.finish(x).unwrap()
        });
        let w: VirtualEvidence = "0:1".parse().unwrap();
        assert_eq!(ve_posterior(&c, &w, &ev("*")), Err(Error::UndefinedPosterior));
    }
}
