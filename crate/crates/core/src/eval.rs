//! Exact circuit evaluation.
//!
//! Besides direct evaluation at rational points this module implements the
//! reduction from rational to integer evaluation: with `D = ∏ bᵢ` and
//! `cᵢ = aᵢ · D / bᵢ`, the univariate `f(t) = p(t·c₁, …, t·cₙ)` is sampled at
//! integer abscissas, interpolated, and `p(a₁/b₁, …) = Σₖ f_k · D⁻ᵏ`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::circuit::{Circuit, Node};
use crate::degree::formal_degree;
use crate::error::Error;
use crate::rational::{integer_bit_width, Rational};

fn check_len(c: &Circuit, len: usize) -> Result<(), Error> {
    if len != c.n_vars() {
        return Err(Error::LengthMismatch {
            what: "point",
            expected: c.n_vars(),
            got: len,
        });
    }
    Ok(())
}

fn eval_nodes<F: FnMut(usize, &Rational)>(c: &Circuit, point: &[Rational], mut visit: F) -> Rational {
    let mut vals: Vec<Rational> = Vec::with_capacity(c.len());
    for (id, node) in c.nodes().iter().enumerate() {
        let v = match node {
            Node::Var(i) => point[*i].clone(),
            Node::Const(k) => k.clone(),
            Node::Sum(ch) => {
                let mut acc = Rational::zero();
                for (w, child) in ch {
                    if w.is_one() {
                        acc += &vals[*child];
                    } else {
                        acc += w * &vals[*child];
                    }
                }
                acc
            }
            Node::Prod(ch) => {
                let mut acc = vals[ch[0]].clone();
                for child in &ch[1..] {
                    if acc.is_zero() {
                        break;
                    }
                    acc *= &vals[*child];
                }
                acc
            }
        };
        visit(id, &v);
        vals.push(v);
    }
    vals.swap_remove(c.output())
}

/// Value of the circuit's polynomial at `point`.
pub fn eval_direct(c: &Circuit, point: &[Rational]) -> Result<Rational, Error> {
    check_len(c, point.len())?;
    Ok(eval_nodes(c, point, |_, _| {}))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalTrace {
    pub value: Rational,
    /// Bits of the widest intermediate value, see [`Rational::bit_width`].
    pub max_bitwidth_seen: u64,
    pub node_count_evaluated: usize,
}

/// Evaluates at an integer point, recording the widest intermediate value.
pub fn eval_integer(c: &Circuit, point: &[BigInt]) -> Result<EvalTrace, Error> {
    check_len(c, point.len())?;
    let point: Vec<Rational> = point.iter().cloned().map(Rational::from).collect();
    let mut widest = 0;
    let mut count = 0;
    let value = eval_nodes(c, &point, |_, v| {
        widest = widest.max(v.bit_width());
        count += 1;
    });
    Ok(EvalTrace {
        value,
        max_bitwidth_seen: widest,
        node_count_evaluated: count,
    })
}

/// `N`: the total encoded length `Σ ||aᵢ||` of an integer input.
pub fn input_length(point: &[BigInt]) -> u64 {
    point.iter().map(integer_bit_width).sum()
}

/// Upper bound `(3d − 1) · max(N, |C|)` on the width of any intermediate
/// value of an integer-mode evaluation, where `d` is the formal output degree
/// and `|C|` the circuit's encoded size in bits.
pub fn bitwidth_bound(c: &Circuit, point: &[BigInt]) -> u64 {
    let d = formal_degree(c).output_total_degree.max(1);
    let q = input_length(point).max(c.encoded_bits());
    (3 * d - 1).saturating_mul(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateSample {
    pub abscissa: Rational,
    pub ordinate: Rational,
}

impl UnivariateSample {
    pub fn new(abscissa: Rational, ordinate: Rational) -> Self {
        UnivariateSample { abscissa, ordinate }
    }
}

/// Coefficients (ascending degree) of the unique polynomial of degree below
/// `samples.len()` through every sample.
pub fn lagrange_interpolate(samples: &[UnivariateSample]) -> Result<Vec<Rational>, Error> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    for (i, a) in samples.iter().enumerate() {
        if samples[..i].iter().any(|b| b.abscissa == a.abscissa) {
            return Err(Error::DuplicateAbscissa(a.abscissa.clone()));
        }
    }
    // Newton divided differences, then expand the Newton form.
    let k = samples.len();
    let xs: Vec<&Rational> = samples.iter().map(|s| &s.abscissa).collect();
    let mut dd: Vec<Rational> = samples.iter().map(|s| s.ordinate.clone()).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = xs[i] - xs[i - level];
            dd[i] = num.checked_div(&den)?;
        }
    }
    let mut coeffs = vec![Rational::zero(); k];
    for i in (0..k).rev() {
        // coeffs ← coeffs · (t − xᵢ) + dd[i]
        let mut next = vec![Rational::zero(); k];
        for j in 0..k {
            if coeffs[j].is_zero() {
                continue;
            }
            if j + 1 < k {
                next[j + 1] += &coeffs[j];
            }
            next[j] -= &coeffs[j] * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    Ok(coeffs)
}

/// Evaluates a coefficient list (ascending degree) at `t` by Horner's rule.
pub fn eval_univariate(coeffs: &[Rational], t: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Degree bound used by the integer reduction: the formal output degree,
/// capped at `n_vars` when the caller has certified the output multilinear.
pub fn reduction_degree_bound(c: &Circuit, certified_multilinear: bool) -> u64 {
    let d = formal_degree(c).output_total_degree;
    if certified_multilinear {
        d.min(c.n_vars() as u64)
    } else {
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub value: Rational,
    pub common_denominator: BigInt,
    /// Coefficients of `f(t) = p(t·c₁, …, t·cₙ)`, ascending.
    pub scaled_coefficients: Vec<Rational>,
    /// One integer-mode trace per abscissa `t = 1, …, d + 1`.
    pub samples: Vec<EvalTrace>,
    /// [`bitwidth_bound`] at each sample's integer point.
    pub sample_bounds: Vec<u64>,
}

/// Evaluates at a rational point using only integer-point evaluations.
/// `degree_bound` must bound the total degree of the output polynomial.
pub fn eval_via_integer_reduction(
    c: &Circuit,
    point: &[Rational],
    degree_bound: u64,
) -> Result<Rational, Error> {
    eval_via_integer_reduction_traced(c, point, degree_bound).map(|t| t.value)
}

pub fn eval_via_integer_reduction_traced(
    c: &Circuit,
    point: &[Rational],
    degree_bound: u64,
) -> Result<ReductionTrace, Error> {
    check_len(c, point.len())?;
    let common: BigInt = point.iter().fold(BigInt::one(), |acc, r| acc * r.denom());
    let scaled: Vec<BigInt> = point.iter().map(|r| r.numer() * (&common / r.denom())).collect();

    let mut samples = Vec::with_capacity(degree_bound as usize + 1);
    let mut traces = Vec::with_capacity(degree_bound as usize + 1);
    let mut bounds = Vec::with_capacity(degree_bound as usize + 1);
    for t in 1..=degree_bound as i64 + 1 {
        let at: Vec<BigInt> = scaled.iter().map(|ci| ci * t).collect();
        let trace = eval_integer(c, &at)?;
        bounds.push(bitwidth_bound(c, &at));
        samples.push(UnivariateSample::new(Rational::from(t), trace.value.clone()));
        traces.push(trace);
    }
    let coeffs = lagrange_interpolate(&samples)?;

    let inv = Rational::from(common.clone()).recip()?;
    let mut scale = Rational::one();
    let mut value = Rational::zero();
    for f_k in &coeffs {
        value += f_k * &scale;
        scale *= &inv;
    }
    Ok(ReductionTrace {
        value,
        common_denominator: common,
        scaled_coefficients: coeffs,
        samples: traces,
        sample_bounds: bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{example_circuit, CircuitBuilder};
    use crate::rational::rat;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn example_table_row() {
        let c = example_circuit();
        assert_eq!(eval_direct(&c, &rats(&[1, 1, 0])).unwrap(), rat(3, 10));
        assert_eq!(eval_direct(&c, &rats(&[0, 0, 0])).unwrap(), rat(1, 20));
        let half = vec![Rational::half(); 3];
        assert_eq!(eval_direct(&c, &half).unwrap(), rat(1, 8));
    }

    #[test]
    fn length_mismatch() {
        let c = example_circuit();
        assert!(matches!(
            eval_direct(&c, &rats(&[1, 1])),
            Err(Error::LengthMismatch {
                expected: 3,
                got: 2,
                ..
            })
        ));
    }

    #[test]
    fn identity_bitwidth() {
        let mut b = CircuitBuilder::new(1);
        let x = b.var(0);
        let c = b.finish(x).unwrap();
        let t = eval_integer(&c, &ints(&[7])).unwrap();
        assert_eq!(t.value, rat(7, 1));
        assert_eq!(t.max_bitwidth_seen, 4);
        assert_eq!(t.node_count_evaluated, 1);
    }

    #[test]
    fn integer_mode_matches_direct() {
        let c = example_circuit();
        let t = eval_integer(&c, &ints(&[2, 3, 5])).unwrap();
        assert_eq!(t.value, eval_direct(&c, &rats(&[2, 3, 5])).unwrap());
        assert!(t.max_bitwidth_seen <= bitwidth_bound(&c, &ints(&[2, 3, 5])));
    }

    #[test]
    fn interpolate_small_cases() {
        let s = |x: i64, y: i64| UnivariateSample::new(rat(x, 1), rat(y, 1));
        assert_eq!(
            lagrange_interpolate(&[s(0, 1), s(1, 2), s(2, 5)]).unwrap(),
            vec![rat(1, 1), rat(0, 1), rat(1, 1)]
        );
        assert_eq!(lagrange_interpolate(&[s(3, 9)]).unwrap(), vec![rat(9, 1)]);
        assert_eq!(
            lagrange_interpolate(&[s(1, 1), s(1, 2)]),
            Err(Error::DuplicateAbscissa(rat(1, 1)))
        );
        assert_eq!(lagrange_interpolate(&[]), Err(Error::NoSamples));
    }

    #[test]
    fn interpolate_hamming_polynomial() {
        let q = [rat(1, 20), rat(4, 25), rat(1, 25)];
        let samples: Vec<_> = (1..=3)
            .map(|t| {
                let t = rat(t, 1);
                let y = eval_univariate(&q, &t);
                UnivariateSample::new(t, y)
            })
            .collect();
        assert_eq!(lagrange_interpolate(&samples).unwrap(), q.to_vec());
    }

    #[test]
    fn reduction_matches_direct() {
        let c = example_circuit();
        let d = reduction_degree_bound(&c, true);
        assert_eq!(d, 3);
        let half = vec![Rational::half(); 3];
        assert_eq!(eval_via_integer_reduction(&c, &half, d).unwrap(), rat(1, 8));
        let p = vec![rat(-2, 3), rat(5, 7), rat(1, 9)];
        assert_eq!(
            eval_via_integer_reduction(&c, &p, reduction_degree_bound(&c, false)).unwrap(),
            eval_direct(&c, &p).unwrap()
        );
    }

    #[test]
    fn reduction_with_unit_denominators() {
        let c = example_circuit();
        let tr = eval_via_integer_reduction_traced(&c, &rats(&[2, 3, 5]), 6).unwrap();
        assert_eq!(tr.common_denominator, BigInt::one());
        assert_eq!(tr.value, eval_integer(&c, &ints(&[2, 3, 5])).unwrap().value);
        assert_eq!(tr.samples.len(), 7);
    }
}
