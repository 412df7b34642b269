//! The `mlmar` command line.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mlmar_core::affine::brute_kones;
use mlmar_core::affine::{count_solutions, faff_mar, reduce_kones_to_hmar, weight_histogram, FaffInstance};
use mlmar_core::certify::check_semantic_multilinearity;
use mlmar_core::degree::{first_syntactic_violation, formal_degree};
use mlmar_core::eval::{eval_direct, eval_via_integer_reduction_traced, reduction_degree_bound};
use mlmar_core::multilinear::{
    coefficients_from_table, network_circuit_syntactic, network_eval, network_from_table, table_from_circuit,
    SparseMultilinearPoly,
};
use mlmar_core::poly::{expand_sparse, Monomial};
use mlmar_core::query::{hmar, hmar_profile, mar, ve_marginal, ve_posterior, vmar};
use mlmar_core::{
    Circuit, CircuitBuilder, Error, EvidenceString, Limits, MultilinearCircuit, Rational, SemanticMode,
    Verdict, VirtualEvidence,
};

use crate::nnf::import_dnnf;
use crate::oracle::{check_circuit, check_dnnf, random_suite, OracleConfig, Tallies};
use crate::report::{mask_monomial, network_monomial, Report, Style};
use crate::table::parse_table;
use crate::text::{parse_circuit, parse_circuit_unchecked, serialize_circuit};
use crate::xorcsp::parse_xorcsp;

/// Exact marginal queries over arithmetic circuits computing multilinear
/// polynomials.
///
/// CIRCUIT and FILE arguments are paths, `-` for standard input, or the
/// file text itself when it spans several lines. Circuit inputs in the NNF
/// format are imported as d-DNNFs.
#[derive(Debug, Parser)]
#[command(name = "mlmar", version)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Capacity profile: default, small or large.
    #[arg(long, global = true, env = "MLMAR_PROFILE", default_value = "default")]
    pub profile: String,
    /// Variable limit for truth tables, exhaustive checks and brute-force counting.
    #[arg(long, global = true, value_name = "N")]
    pub limit_n: Option<usize>,
    /// Largest affine solution-space dimension that is enumerated.
    #[arg(long, global = true, value_name = "D")]
    pub limit_dim: Option<usize>,
    /// Monomials allowed per node during sparse expansion.
    #[arg(long, global = true, value_name = "M")]
    pub limit_monomials: Option<usize>,
    /// Largest n for the 2n³+n variable parity instance.
    #[arg(long, global = true, value_name = "N")]
    pub limit_faff_n: Option<usize>,
    /// Print values as decimals with up to DIGITS fractional digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    pub decimal: Option<usize>,
    /// Machine-readable `key:value` lines, echoing the inputs.
    #[arg(long, global = true)]
    pub porcelain: bool,
}

#[derive(Debug, Args)]
pub struct CertOpts {
    /// Skip multilinearity certification.
    #[arg(long)]
    pub trust: bool,
    /// Certify by randomized identity testing when the syntactic check fails.
    #[arg(long, conflicts_with = "trust")]
    pub randomized: bool,
}

#[derive(Debug, Args)]
pub struct RandomizedOpts {
    #[arg(long, default_value_t = 20)]
    pub trials: u32,
    /// Coordinates are drawn from 0..RANGE.
    #[arg(long, default_value_t = 1 << 32)]
    pub range: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    /// Exhaustive when the variable limit allows, else randomized.
    Auto,
    Exhaustive,
    Randomized,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural checks; exits 1 if any fails.
    Validate { circuit: String },
    /// Formal degree bounds.
    Degree { circuit: String },
    /// Syntactic and semantic multilinearity; exits 1 if not multilinear.
    CheckMl {
        circuit: String,
        #[arg(long, value_enum, default_value = "auto")]
        mode: CheckMode,
        #[command(flatten)]
        rnd: RandomizedOpts,
    },
    /// Evaluate at a rational point.
    Eval {
        circuit: String,
        /// Comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Use only integer-point evaluations and interpolation.
        #[arg(long)]
        via_integers: bool,
    },
    /// Marginal consistent with an evidence word over {0,1,*}.
    Mar {
        circuit: String,
        #[arg(short, long)]
        evidence: String,
        #[command(flatten)]
        cert: CertOpts,
    },
    /// Marginal restricted to assignments with exactly k ones.
    Hmar {
        circuit: String,
        #[arg(short, long)]
        evidence: String,
        #[arg(short)]
        k: usize,
        #[command(flatten)]
        cert: CertOpts,
    },
    /// Hamming-weight marginals for every k.
    Profile {
        circuit: String,
        #[arg(short, long)]
        evidence: String,
        #[command(flatten)]
        cert: CertOpts,
    },
    /// Multilinear extension at a rational point.
    Vmar {
        circuit: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        cert: CertOpts,
    },
    /// Marginal under virtual evidence.
    Ve {
        circuit: String,
        /// Comma-separated `a:abar` weight pairs, one per variable.
        #[arg(short, long)]
        weights: String,
        /// Defaults to all stars.
        #[arg(short, long)]
        evidence: Option<String>,
        /// Also normalize by the total reweighted mass.
        #[arg(long)]
        posterior: bool,
        #[command(flatten)]
        cert: CertOpts,
    },
    /// Network polynomial: coefficients, a value, or a circuit.
    Network {
        circuit: String,
        #[arg(long, requires = "xbar", allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, requires = "x", allow_hyphen_values = true)]
        xbar: Option<String>,
        /// Print a circuit over 2n variables computing it.
        #[arg(long, conflicts_with = "x")]
        emit: bool,
        #[command(flatten)]
        cert: CertOpts,
    },
    /// Sparse expansion of the output polynomial.
    Expand { circuit: String },
    /// Multilinear coefficients of a truth table.
    InterpolateTable {
        table: String,
        /// Print network-polynomial coefficients instead.
        #[arg(long)]
        network: bool,
        /// Print a circuit computing the interpolant.
        #[arg(long, conflicts_with = "network")]
        emit_circuit: bool,
    },
    /// Solutions of the parity-constrained function over 2n³+n variables
    /// consistent with evidence.
    Faff {
        #[arg(short)]
        n: usize,
        /// Variables are x, then y, then z, each block in (i,j,k) order.
        #[arg(short, long)]
        evidence: Option<String>,
        /// Also count solutions by Hamming weight.
        #[arg(long)]
        histogram: bool,
    },
    /// Reduce #k-ONES of an XOR formula to a Hamming-weight marginal.
    Reduce {
        formula: String,
        #[arg(short)]
        k: usize,
        /// Check the reduction by counting both sides.
        #[arg(long)]
        count: bool,
    },
    /// Count solutions of an XOR formula's linear system.
    CountAffine {
        formula: String,
        #[arg(short, long)]
        evidence: Option<String>,
        #[arg(long)]
        histogram: bool,
    },
    /// Compare fast queries with exhaustive enumeration. Exits 1 on any
    /// mismatch.
    Oracle {
        /// Circuits to check; random circuits when none are given.
        inputs: Vec<String>,
        #[arg(long, default_value_t = 100)]
        circuits: usize,
        #[arg(long, default_value_t = 10)]
        queries: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 1.
    Domain(String),
    /// Rendered normally, then exit 1.
    Finding(Report),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn domain(e: Error) -> CliError {
    CliError::Domain(e.to_string())
}

type CliResult<T> = Result<T, CliError>;

fn limits(opts: &GlobalOpts) -> CliResult<Limits> {
    let mut l = Limits::profile(&opts.profile).ok_or_else(|| {
        usage(format!(
            "unknown capacity profile `{}` (expected default, small or large)",
            opts.profile
        ))
    })?;
    if let Some(n) = opts.limit_n {
        l.table_max_n = n;
        l.exhaustive_max_n = n;
        l.kones_max_n = n;
    }
    if let Some(d) = opts.limit_dim {
        l.solution_dim_max = d;
    }
    if let Some(m) = opts.limit_monomials {
        l.monomial_cap = m;
    }
    if let Some(n) = opts.limit_faff_n {
        l.faff_max_n = n;
    }
    Ok(l)
}

fn read_input(arg: &str) -> CliResult<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("cannot read standard input: {}", e)))?;
        Ok(s)
    } else if arg.contains('\n') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("cannot read `{}`: {}", arg, e)))
    }
}

fn source_name(arg: &str) -> &str {
    if arg.contains('\n') {
        "<inline>"
    } else if arg == "-" {
        "<stdin>"
    } else {
        arg
    }
}

fn is_nnf(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#') && l.split_whitespace().next() != Some("c"))
        .is_some_and(|l| l.split_whitespace().next() == Some("nnf"))
}

/// Reads a circuit, telling whether it came from the NNF importer.
fn load_circuit(arg: &str) -> CliResult<(Circuit, bool)> {
    let text = read_input(arg)?;
    let nnf = is_nnf(&text);
    let c = if nnf {
        import_dnnf(&text)
    } else {
        parse_circuit(&text)
    };
    c.map(|c| (c, nnf))
        .map_err(|e| CliError::Domain(format!("{}: {}", source_name(arg), e)))
}

fn certified(c: Circuit, cert: &CertOpts, limits: &Limits) -> CliResult<MultilinearCircuit> {
    if cert.trust {
        return Ok(MultilinearCircuit::trusted(c));
    }
    if cert.randomized && first_syntactic_violation(&c).is_some() {
        return MultilinearCircuit::certify_randomized(c, 20, 1 << 32, 0).map_err(domain);
    }
    MultilinearCircuit::certify(c, limits).map_err(domain)
}

fn evidence(word: &str, n: usize) -> CliResult<EvidenceString> {
    let m: EvidenceString = word
        .parse()
        .map_err(|_| usage(format!("evidence `{}` may only contain 0, 1 and *", word)))?;
    if m.len() != n {
        return Err(usage(format!(
            "evidence `{}` has length {} but the input has {} variables",
            word,
            m.len(),
            n
        )));
    }
    Ok(m)
}

fn point(flag: &str, text: &str, n: usize) -> CliResult<Vec<Rational>> {
    let coords: Vec<Rational> = if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .enumerate()
            .map(|(i, tok)| {
                tok.trim().parse().map_err(|_| {
                    usage(format!(
                        "--{} coordinate {} `{}` is not a rational a/b",
                        flag,
                        i,
                        tok.trim()
                    ))
                })
            })
            .collect::<CliResult<_>>()?
    };
    if coords.len() != n {
        return Err(usage(format!(
            "--{} has {} coordinates but the circuit has {} variables",
            flag,
            coords.len(),
            n
        )));
    }
    Ok(coords)
}

fn weights(text: &str, n: usize) -> CliResult<VirtualEvidence> {
    let w: VirtualEvidence = text
        .parse()
        .map_err(|e: Error| usage(format!("weights `{}`: {}", text, e)))?;
    if w.len() != n {
        return Err(usage(format!(
            "weights `{}` have {} pairs but the circuit has {} variables",
            text,
            w.len(),
            n
        )));
    }
    Ok(w)
}

fn monomial_name(m: &Monomial) -> String {
    if m.factors().is_empty() {
        return String::from("1");
    }
    m.factors()
        .iter()
        .map(|&(v, e)| {
            if e == 1 {
                format!("x{}", v)
            } else {
                format!("x{}^{}", v, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// A sum-of-products circuit computing `p`.
fn circuit_from_coefficients(p: &SparseMultilinearPoly) -> Circuit {
    let n = p.n();
    let mut b = CircuitBuilder::new(n);
    let mut terms = Vec::new();
    for (mask, c) in p.terms() {
        let vars: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| b.var(i)).collect();
        let node = match vars.len() {
            0 => b.constant(Rational::one()),
            1 => vars[0],
            _ => b.prod(vars),
        };
        terms.push((c.clone(), node));
    }
    let out = if terms.is_empty() {
        b.constant(Rational::zero())
    } else {
        b.sum(terms)
    };
    b.finish(out).expect("sum of products is valid")
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let opts = &cli.opts;
    let lim = limits(opts)?;
    let style = Style {
        decimal: opts.decimal,
    };
    let r = |v: &Rational| style.rational(v);

    let report = match &cli.command {
        Command::Validate { circuit } => {
            let text = read_input(circuit)?;
            let c = if is_nnf(&text) {
                import_dnnf(&text)
            } else {
                parse_circuit_unchecked(&text)
            }
            .map_err(|e| CliError::Domain(format!("{}: {}", source_name(circuit), e)))?;
            let report = c.validate();
            let mut rep = Report::new("validate");
            for check in &report.checks {
                let v = if check.passed {
                    String::from("pass")
                } else {
                    format!("FAIL {}", check.detail)
                };
                rep.result(check.kind.to_string(), v);
            }
            if !report.passed() {
                return Err(CliError::Finding(rep));
            }
            rep
        }
        Command::Degree { circuit } => {
            let (c, _) = load_circuit(circuit)?;
            let d = formal_degree(&c);
            let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            let mut rep = Report::new("degree");
            rep.result("output", d.output_total_degree)
                .result("variables", join(&d.per_variable_output_degree))
                .result("nodes", join(&d.per_node_total_degree));
            rep
        }
        Command::CheckMl { circuit, mode, rnd } => {
            let (c, _) = load_circuit(circuit)?;
            let mut rep = Report::new("check-ml");
            match first_syntactic_violation(&c) {
                None => rep.result("syntactic", "yes"),
                Some(v) => rep.result("syntactic", format!("no (product node {})", v)),
            };
            let exhaustive = match mode {
                CheckMode::Auto => c.n_vars() <= lim.exhaustive_max_n,
                CheckMode::Exhaustive => true,
                CheckMode::Randomized => false,
            };
            let sm = if exhaustive {
                SemanticMode::Exhaustive
            } else {
                SemanticMode::Randomized {
                    trials: rnd.trials,
                    range: rnd.range,
                    seed: rnd.seed,
                }
            };
            rep.echo("mode", if exhaustive { "exhaustive" } else { "randomized" });
            match check_semantic_multilinearity(&c, &sm, &lim).map_err(domain)? {
                Verdict::Multilinear => {
                    rep.result("semantic", "multilinear");
                }
                Verdict::ProbablyMultilinear { failure_bound } => {
                    rep.result("semantic", "probably multilinear")
                        .result("failure-bound", r(&failure_bound));
                }
                Verdict::NotMultilinear { variable, witness } => {
                    rep.result("semantic", format!("not multilinear in variable {}", variable));
                    if let Some(w) = witness {
                        rep.result(
                            "witness",
                            w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                        );
                    }
                    return Err(CliError::Finding(rep));
                }
            }
            rep
        }
        Command::Eval {
            circuit,
            point: p,
            via_integers,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let x = point("point", p, c.n_vars())?;
            let mut rep = Report::new("eval");
            rep.echo("point", p.trim());
            if *via_integers {
                let certified = first_syntactic_violation(&c).is_none();
                let d = reduction_degree_bound(&c, certified);
                let t = eval_via_integer_reduction_traced(&c, &x, d).map_err(domain)?;
                let widest = t.samples.iter().map(|s| s.max_bitwidth_seen).max().unwrap_or(0);
                let bound = t.sample_bounds.iter().copied().max().unwrap_or(0);
                rep.result("value", r(&t.value))
                    .result("common-denominator", &t.common_denominator)
                    .result("degree-bound", d)
                    .result("samples", t.samples.len())
                    .result("max-bitwidth", widest)
                    .result("bitwidth-bound", bound);
            } else {
                rep.result("value", r(&eval_direct(&c, &x).map_err(domain)?));
            }
            rep
        }
        Command::Mar {
            circuit,
            evidence: e,
            cert,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let m = evidence(e, c.n_vars())?;
            let mc = certified(c, cert, &lim)?;
            let mut rep = Report::new("mar");
            rep.echo("evidence", &m)
                .echo("certificate", mc.certificate())
                .result("value", r(&mar(&mc, &m).map_err(domain)?));
            rep
        }
        Command::Hmar {
            circuit,
            evidence: e,
            k,
            cert,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let m = evidence(e, c.n_vars())?;
            if *k > c.n_vars() {
                return Err(usage(format!(
                    "-k {} exceeds the {} variables of the circuit",
                    k,
                    c.n_vars()
                )));
            }
            let mc = certified(c, cert, &lim)?;
            let mut rep = Report::new("hmar");
            rep.echo("evidence", &m)
                .echo("k", k)
                .echo("certificate", mc.certificate())
                .result("value", r(&hmar(&mc, &m, *k).map_err(domain)?));
            rep
        }
        Command::Profile {
            circuit,
            evidence: e,
            cert,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let m = evidence(e, c.n_vars())?;
            let mc = certified(c, cert, &lim)?;
            let profile = hmar_profile(&mc, &m).map_err(domain)?;
            let mut rep = Report::new("profile");
            rep.echo("evidence", &m).echo("certificate", mc.certificate());
            for (k, v) in profile.coefficients.iter().enumerate() {
                rep.result(format!("k={}", k), r(v));
            }
            rep.result("total", r(&profile.total()));
            rep
        }
        Command::Vmar {
            circuit,
            point: p,
            cert,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let x = point("point", p, c.n_vars())?;
            let mc = certified(c, cert, &lim)?;
            let mut rep = Report::new("vmar");
            rep.echo("point", p.trim())
                .echo("certificate", mc.certificate())
                .result("value", r(&vmar(&mc, &x).map_err(domain)?));
            rep
        }
        Command::Ve {
            circuit,
            weights: w,
            evidence: e,
            posterior,
            cert,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let n = c.n_vars();
            let w = weights(w, n)?;
            let m = match e {
                Some(e) => evidence(e, n)?,
                None => EvidenceString::all_stars(n),
            };
            let mc = certified(c, cert, &lim)?;
            let mut rep = Report::new("ve");
            rep.echo("evidence", &m)
                .echo("certificate", mc.certificate())
                .result("weights", &w)
                .result("marginal", r(&ve_marginal(&mc, &w, &m).map_err(domain)?));
            if *posterior {
                rep.result("posterior", r(&ve_posterior(&mc, &w, &m).map_err(domain)?));
            }
            rep
        }
        Command::Network {
            circuit,
            x,
            xbar,
            emit,
            cert,
        } => {
            let (c, _) = load_circuit(circuit)?;
            let n = c.n_vars();
            let mut rep = Report::new("network");
            if *emit {
                let net = network_circuit_syntactic(&c).map_err(domain)?;
                return Ok(Report::raw(serialize_circuit(&net)));
            }
            if let (Some(x), Some(xbar)) = (x, xbar) {
                let xs = point("x", x, n)?;
                let xbs = point("xbar", xbar, n)?;
                let mc = certified(c, cert, &lim)?;
                rep.echo("x", x.trim())
                    .echo("xbar", xbar.trim())
                    .echo("certificate", mc.certificate())
                    .result("value", r(&network_eval(&mc, &xs, &xbs).map_err(domain)?));
            } else {
                let mc = certified(c, cert, &lim)?;
                let np = network_from_table(&table_from_circuit(mc.circuit(), &lim).map_err(domain)?);
                for (mask, v) in np.terms() {
                    rep.result(network_monomial(mask, n), r(v));
                }
            }
            rep
        }
        Command::Expand { circuit } => {
            let (c, _) = load_circuit(circuit)?;
            let p = expand_sparse(&c, lim.monomial_cap).map_err(domain)?;
            let mut rep = Report::new("expand");
            for (m, v) in p.terms() {
                rep.result(monomial_name(m), r(v));
            }
            if p.is_empty() {
                rep.result("1", r(&Rational::zero()));
            }
            rep
        }
        Command::InterpolateTable {
            table,
            network,
            emit_circuit,
        } => {
            let t = parse_table(&read_input(table)?, &lim)
                .map_err(|e| CliError::Domain(format!("{}: {}", source_name(table), e)))?;
            let n = t.n();
            let mut rep = Report::new("interpolate-table");
            if *network {
                for (mask, v) in network_from_table(&t).terms() {
                    rep.result(network_monomial(mask, n), r(v));
                }
            } else {
                let p = coefficients_from_table(&t);
                if *emit_circuit {
                    return Ok(Report::raw(serialize_circuit(&circuit_from_coefficients(&p))));
                } else {
                    for (mask, v) in p.terms() {
                        rep.result(mask_monomial(mask, n), r(v));
                    }
                }
            }
            rep
        }
        Command::Faff {
            n,
            evidence: e,
            histogram,
        } => {
            let inst = FaffInstance::new(*n, &lim).map_err(domain)?;
            let m = match e {
                Some(e) => evidence(e, inst.n_vars())?,
                None => EvidenceString::all_stars(inst.n_vars()),
            };
            let mut rep = Report::new("faff");
            rep.echo("n", n)
                .echo("variables", inst.n_vars())
                .result("count", faff_mar(*n, &m, &lim).map_err(domain)?);
            if *histogram {
                let h = weight_histogram(&inst.system(), &m, lim.solution_dim_max).map_err(domain)?;
                for (w, count) in h.iter().enumerate().filter(|(_, c)| **c > 0) {
                    rep.result(format!("weight={}", w), count);
                }
            }
            rep
        }
        Command::Reduce { formula, k, count } => {
            let phi = parse_xorcsp(&read_input(formula)?)
                .map_err(|e| CliError::Domain(format!("{}: {}", source_name(formula), e)))?;
            if *k > phi.n() {
                return Err(usage(format!(
                    "-k {} exceeds the {} variables of the formula",
                    k,
                    phi.n()
                )));
            }
            let (m, target) = reduce_kones_to_hmar(&phi, *k).map_err(domain)?;
            let mut rep = Report::new("reduce");
            rep.echo("k", k).result("evidence", &m).result("weight", target);
            if *count {
                let inst = FaffInstance::new(phi.n(), &lim).map_err(domain)?;
                let h = weight_histogram(&inst.system(), &m, lim.solution_dim_max).map_err(domain)?;
                let kones = brute_kones(&phi, *k, &lim).map_err(domain)?;
                let hm = h.get(target).copied().unwrap_or(0);
                rep.result("kones", kones).result("hmar", hm);
                if kones != hm {
                    return Err(CliError::Finding(rep));
                }
            }
            rep
        }
        Command::CountAffine {
            formula,
            evidence: e,
            histogram,
        } => {
            let phi = parse_xorcsp(&read_input(formula)?)
                .map_err(|e| CliError::Domain(format!("{}: {}", source_name(formula), e)))?;
            let m = match e {
                Some(e) => evidence(e, phi.n())?,
                None => EvidenceString::all_stars(phi.n()),
            };
            let sys = phi.system();
            let restricted = sys.with_evidence(&m).map_err(domain)?;
            let mut rep = Report::new("count-affine");
            rep.echo("evidence", &m)
                .result("count", count_solutions(&restricted));
            if *histogram {
                let h = weight_histogram(&sys, &m, lim.solution_dim_max).map_err(domain)?;
                for (w, count) in h.iter().enumerate() {
                    rep.result(format!("weight={}", w), count);
                }
            }
            rep
        }
        Command::Oracle {
            inputs,
            circuits,
            queries,
            max_n,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut tallies = Tallies::default();
            if inputs.is_empty() {
                let cfg = OracleConfig {
                    circuits: *circuits,
                    queries: *queries,
                    max_n: *max_n,
                };
                tallies = random_suite(&cfg, &lim, &mut rng).map_err(domain)?;
            }
            for input in inputs {
                let (c, nnf) = load_circuit(input)?;
                let mc = MultilinearCircuit::certify(c, &lim)
                    .map_err(|e| CliError::Domain(format!("{}: {}", source_name(input), e)))?;
                let wrap = |e: Error| CliError::Domain(format!("{}: {}", source_name(input), e));
                let table = table_from_circuit(mc.circuit(), &lim).map_err(wrap)?;
                if nnf {
                    check_dnnf(&mc, &table, &mut tallies).map_err(wrap)?;
                }
                check_circuit(&mc, &table, *queries, &lim, &mut rng, &mut tallies).map_err(wrap)?;
            }
            let mut rep = Report::new("oracle");
            rep.echo("seed", seed);
            for t in tallies.all() {
                let verdict = if t.ok() { "PASS" } else { "FAIL" };
                rep.result(t.name, format!("{} {}/{}", verdict, t.passed, t.total));
            }
            if !tallies.ok() {
                return Err(CliError::Finding(rep));
            }
            rep
        }
    };
    Ok(report)
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code: 0 on success, 1 on
/// domain errors and negative findings, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(rep) => {
            let _ = out.write_all(rep.render(cli.opts.porcelain).as_bytes());
            0
        }
        Err(CliError::Finding(rep)) => {
            let _ = out.write_all(rep.render(cli.opts.porcelain).as_bytes());
            1
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "usage error: {}", msg);
            2
        }
    }
}
