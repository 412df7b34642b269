/// Capacity limits for the exponential-time oracles and checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which a truth table (2ⁿ rows) is built.
    pub table_max_n: usize,
    /// Largest `n` for exhaustive semantic multilinearity checks.
    pub exhaustive_max_n: usize,
    /// Live monomials allowed in any node during sparse expansion.
    pub monomial_cap: usize,
    /// Largest affine solution-space dimension that is enumerated.
    pub solution_dim_max: usize,
    /// Largest `n` for brute-force #k-ONES counting.
    pub kones_max_n: usize,
    /// Largest `n` for which the parity-constrained 2n³ + n variable instance
    /// is built.
    pub faff_max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            table_max_n: 20,
            exhaustive_max_n: 14,
            monomial_cap: 1 << 20,
            solution_dim_max: 24,
            kones_max_n: 24,
            faff_max_n: 6,
        }
    }
}

impl Limits {
    /// Named capacity profiles: `default`, `small` (quick interactive use)
    /// and `large` (long-running batch checks).
    pub fn profile(name: &str) -> Option<Limits> {
        match name {
            "default" => Some(Limits::default()),
            "small" => Some(Limits {
                table_max_n: 14,
                exhaustive_max_n: 10,
                monomial_cap: 1 << 14,
                solution_dim_max: 16,
                kones_max_n: 16,
                faff_max_n: 4,
            }),
            "large" => Some(Limits {
                table_max_n: 24,
                exhaustive_max_n: 18,
                monomial_cap: 1 << 24,
                solution_dim_max: 28,
                kones_max_n: 28,
                faff_max_n: 10,
            }),
            _ => None,
        }
    }
}
