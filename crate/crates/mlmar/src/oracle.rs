//! Cross-checks of the fast queries against exhaustive enumeration.

use mlmar_core::degree::is_syntactically_multilinear;
use mlmar_core::eval::{eval_direct, eval_via_integer_reduction, reduction_degree_bound};
use mlmar_core::multilinear::{
    brute_hmar, brute_mar, brute_ve_marginal, brute_vmar, coefficients_from_table, collapse_network_circuit,
    network_circuit_syntactic, network_eval, network_from_table, table_from_circuit, TruthTable,
};
use mlmar_core::poly::expand_sparse;
use mlmar_core::query::{hmar, hmar_profile, mar, ve_marginal, vmar};
use mlmar_core::{gen, Error, EvidenceString, Limits, MultilinearCircuit, Rational};
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Tallies in first-recorded order.
#[derive(Clone, Debug, Default)]
pub struct Tallies(Vec<Tally>);

impl Tallies {
    pub fn record(&mut self, name: &'static str, ok: bool) {
        let i = match self.0.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                self.0.push(Tally {
                    name,
                    passed: 0,
                    total: 0,
                });
                self.0.len() - 1
            }
        };
        self.0[i].total += 1;
        self.0[i].passed += usize::from(ok);
    }

    pub fn all(&self) -> &[Tally] {
        &self.0
    }

    pub fn ok(&self) -> bool {
        self.0.iter().all(Tally::ok)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub circuits: usize,
    pub queries: usize,
    pub max_n: usize,
}

/// Runs every query property on `queries` random queries against `c`,
/// whose truth table is `table`.
pub fn check_circuit<R: Rng>(
    c: &MultilinearCircuit,
    table: &TruthTable,
    queries: usize,
    limits: &Limits,
    rng: &mut R,
    t: &mut Tallies,
) -> Result<(), Error> {
    let n = c.n_vars();
    let coeffs = coefficients_from_table(table);

    let total: Rational = table.values().iter().sum();
    let half = vec![Rational::half(); n];
    let scaled = eval_direct(c.circuit(), &half)? * Rational::from(1i64 << n);
    t.record("sum", total == scaled);

    if n <= limits.exhaustive_max_n {
        let expanded = expand_sparse(c.circuit(), limits.monomial_cap)?.to_multilinear()?;
        t.record("expand", expanded == coeffs);
    }

    if is_syntactically_multilinear(c.circuit()) {
        let net = network_circuit_syntactic(c.circuit())?;
        let back = collapse_network_circuit(&net)?;
        t.record("network-circuit", table_from_circuit(&back, limits)? == *table);
    }
    let np = network_from_table(table);

    let degree = reduction_degree_bound(c.circuit(), true);
    for _ in 0..queries {
        let m = gen::evidence(rng, n);
        t.record("mar", mar(c, &m)? == brute_mar(table, &m)?);

        let k = rng.gen_range(0..=n);
        t.record("hmar", hmar(c, &m, k)? == brute_hmar(table, &m, k)?);

        let profile = hmar_profile(c, &m)?;
        let mut ok = true;
        for (k, v) in profile.coefficients.iter().enumerate() {
            ok &= *v == brute_hmar(table, &m, k)?;
        }
        t.record("profile", ok);

        let point = gen::rational_point(rng, n);
        t.record("vmar", vmar(c, &point)? == brute_vmar(&coeffs, &point)?);
        t.record(
            "eval-path",
            eval_via_integer_reduction(c.circuit(), &point, degree)? == eval_direct(c.circuit(), &point)?,
        );

        let w = gen::virtual_evidence(rng, n);
        t.record("ve", ve_marginal(c, &w, &m)? == brute_ve_marginal(table, &w, &m)?);

        let x = gen::rational_point(rng, n);
        let xbar = gen::rational_point(rng, n);
        t.record("network", network_eval(c, &x, &xbar)? == np.eval(&x, &xbar)?);
    }
    Ok(())
}

/// Model-count consistency for an imported d-DNNF: the circuit must be a 0/1
/// indicator whose full marginal is its number of models. A failure means
/// some disjunction was not deterministic.
pub fn check_dnnf(c: &MultilinearCircuit, table: &TruthTable, t: &mut Tallies) -> Result<(), Error> {
    let boolean = table.values().iter().all(|v| v.is_zero() || v.is_one());
    t.record("boolean", boolean);
    let models = table.values().iter().filter(|v| v.is_one()).count();
    let count = mar(c, &EvidenceString::all_stars(c.n_vars()))?;
    t.record("model-count", boolean && count == Rational::from(models as i64));
    Ok(())
}

/// Random certified circuits with `1..=max_n` variables.
pub fn random_suite<R: Rng>(cfg: &OracleConfig, limits: &Limits, rng: &mut R) -> Result<Tallies, Error> {
    let mut t = Tallies::default();
    for _ in 0..cfg.circuits {
        let n = rng.gen_range(1..=cfg.max_n.max(1));
        let c = gen::multilinear_circuit(rng, n, 6 + 2 * n);
        let mc = MultilinearCircuit::certify(c, limits)?;
        let table = table_from_circuit(mc.circuit(), limits)?;
        check_circuit(&mc, &table, cfg.queries, limits, rng, &mut t)?;
    }
    Ok(t)
}
