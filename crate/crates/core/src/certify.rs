//! Multilinearity certificates.
//!
//! Marginal queries read sums off single evaluations, which is only sound
//! when the circuit's output polynomial is multilinear. A
//! [`MultilinearCircuit`] pairs a circuit with the evidence for that.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::circuit::Circuit;
use crate::degree::{first_syntactic_violation, formal_degree};
use crate::error::Error;
use crate::eval::{eval_direct, lagrange_interpolate, UnivariateSample};
use crate::limits::Limits;
use crate::poly::expand_sparse;
use crate::rational::Rational;

/// Interpolation length above which a per-variable degree bound is refused.
const MAX_VARIABLE_DEGREE: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticMode {
    /// Full expansion; requires `n_vars ≤ limits.exhaustive_max_n`.
    Exhaustive,
    /// Randomized identity testing with coordinates drawn from `0..range`.
    Randomized { trials: u32, range: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Multilinear,
    /// `variable` has degree ≥ 2; `witness` is a point at which the
    /// univariate restriction in that variable was shown non-linear.
    NotMultilinear {
        variable: usize,
        witness: Option<Vec<Rational>>,
    },
    /// No violation found; a non-multilinear output would have escaped
    /// detection with probability at most `failure_bound`.
    ProbablyMultilinear {
        failure_bound: Rational,
    },
}

impl Verdict {
    pub fn is_multilinear(&self) -> bool {
        !matches!(self, Verdict::NotMultilinear { .. })
    }
}

pub fn check_semantic_multilinearity(
    c: &Circuit,
    mode: &SemanticMode,
    limits: &Limits,
) -> Result<Verdict, Error> {
    match *mode {
        SemanticMode::Exhaustive => {
            if c.n_vars() > limits.exhaustive_max_n {
                return Err(Error::Capacity {
                    what: "exhaustive multilinearity check variables",
                    requested: c.n_vars(),
                    limit: limits.exhaustive_max_n,
                });
            }
            let p = expand_sparse(c, limits.monomial_cap)?;
            Ok(match p.non_multilinear_variable() {
                None => Verdict::Multilinear,
                Some(variable) => Verdict::NotMultilinear {
                    variable,
                    witness: None,
                },
            })
        }
        SemanticMode::Randomized { trials, range, seed } => {
            randomized(c, trials, range, &mut SmallRng::seed_from_u64(seed))
        }
    }
}

fn randomized<R: Rng>(c: &Circuit, trials: u32, range: u64, rng: &mut R) -> Result<Verdict, Error> {
    let report = formal_degree(c);
    let suspects: Vec<(usize, u64)> = report
        .per_variable_output_degree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d >= 2)
        .map(|(i, &d)| (i, d))
        .collect();
    if suspects.is_empty() {
        return Ok(Verdict::Multilinear);
    }
    if let Some(&(_, d)) = suspects.iter().find(|(_, d)| *d > MAX_VARIABLE_DEGREE) {
        return Err(Error::Capacity {
            what: "per-variable degree for randomized check",
            requested: d as usize,
            limit: MAX_VARIABLE_DEGREE as usize,
        });
    }
    let range = range.max(1);
    for _ in 0..trials {
        let base: Vec<Rational> = (0..c.n_vars())
            .map(|_| Rational::from(rng.gen_range(0..range) as i64))
            .collect();
        for &(var, deg) in &suspects {
            let mut point = base.clone();
            let mut samples = Vec::with_capacity(deg as usize + 1);
            for step in 0..=deg {
                point[var] = &base[var] + Rational::from(step as i64);
                samples.push(UnivariateSample::new(point[var].clone(), eval_direct(c, &point)?));
            }
            let coeffs = lagrange_interpolate(&samples)?;
            if coeffs[2..].iter().any(|k| !k.is_zero()) {
                return Ok(Verdict::NotMultilinear {
                    variable: var,
                    witness: Some(base),
                });
            }
        }
    }
    // A nonzero coefficient polynomial has degree at most the output's total
    // degree, so one trial misses it with probability ≤ d / range.
    let d = report.output_total_degree;
    let per_trial = Rational::new(d as i64, range as i64)?;
    let bound = if per_trial >= Rational::one() {
        Rational::one()
    } else {
        per_trial.pow(trials)
    };
    Ok(Verdict::ProbablyMultilinear { failure_bound: bound })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Syntactic,
    Exhaustive,
    Randomized {
        failure_bound: Rational,
    },
    /// Asserted by the caller without a check.
    Trusted,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Syntactic => f.write_str("syntactic"),
            Certificate::Exhaustive => f.write_str("exhaustive"),
            Certificate::Randomized { failure_bound } => {
                write!(f, "randomized (failure bound {})", failure_bound)
            }
            Certificate::Trusted => f.write_str("trusted"),
        }
    }
}

/// A circuit whose output polynomial is known to be multilinear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearCircuit {
    circuit: Circuit,
    certificate: Certificate,
}

impl MultilinearCircuit {
    /// Certifies syntactically, falling back to exhaustive expansion when the
    /// circuit is small enough.
    pub fn certify(circuit: Circuit, limits: &Limits) -> Result<Self, Error> {
        let Some(violator) = first_syntactic_violation(&circuit) else {
            return Ok(MultilinearCircuit {
                circuit,
                certificate: Certificate::Syntactic,
            });
        };
        if circuit.n_vars() > limits.exhaustive_max_n {
            return Err(Error::Uncertified(format!(
                "product node {} is not syntactically multilinear and {} variables exceed the exhaustive limit {}",
                violator,
                circuit.n_vars(),
                limits.exhaustive_max_n
            )));
        }
        match check_semantic_multilinearity(&circuit, &SemanticMode::Exhaustive, limits) {
            Ok(Verdict::Multilinear) => Ok(MultilinearCircuit {
                circuit,
                certificate: Certificate::Exhaustive,
            }),
            Ok(Verdict::NotMultilinear { variable, .. }) => Err(Error::Uncertified(format!(
                "output has degree at least 2 in variable {}",
                variable
            ))),
            Ok(Verdict::ProbablyMultilinear { .. }) => unreachable!("exhaustive mode"),
            Err(e) => Err(Error::Uncertified(format!(
                "product node {} is not syntactically multilinear and exhaustive check failed: {}",
                violator, e
            ))),
        }
    }

    pub fn certify_randomized(circuit: Circuit, trials: u32, range: u64, seed: u64) -> Result<Self, Error> {
        let mode = SemanticMode::Randomized { trials, range, seed };
        match check_semantic_multilinearity(&circuit, &mode, &Limits::default())? {
            Verdict::Multilinear => Ok(MultilinearCircuit {
                circuit,
                certificate: Certificate::Randomized {
                    failure_bound: Rational::zero(),
                },
            }),
            Verdict::ProbablyMultilinear { failure_bound } => Ok(MultilinearCircuit {
                circuit,
                certificate: Certificate::Randomized { failure_bound },
            }),
            Verdict::NotMultilinear { variable, .. } => Err(Error::Uncertified(format!(
                "randomized check found degree ≥ 2 in variable {}",
                variable
            ))),
        }
    }

    pub fn trusted(circuit: Circuit) -> Self {
        MultilinearCircuit {
            circuit,
            certificate: Certificate::Trusted,
        }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn n_vars(&self) -> usize {
        self.circuit.n_vars()
    }

    pub fn into_inner(self) -> Circuit {
        self.circuit
    }
}
