//! Rendering of command results.

use mlmar_core::Rational;

/// How rationals are printed: exact `a/b`, or decimal with the given number
/// of fractional digits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Style {
    pub decimal: Option<usize>,
}

impl Style {
    pub fn rational(&self, r: &Rational) -> String {
        match self.decimal {
            Some(d) => r.to_decimal_string(d),
            None => r.to_string(),
        }
    }
}

/// Ordered `key: value` results. Echoed inputs appear only in porcelain
/// output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    echo: Vec<(String, String)>,
    results: Vec<(String, String)>,
    raw: Option<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.echo("command", command);
        r
    }

    /// Text printed verbatim in either mode, such as an emitted file.
    pub fn raw(text: String) -> Self {
        Report {
            raw: Some(text),
            ..Report::default()
        }
    }

    pub fn echo(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.echo.push((key.into(), value.to_string()));
        self
    }

    pub fn result(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.results.push((key.into(), value.to_string()));
        self
    }

    pub fn results(&self) -> &[(String, String)] {
        &self.results
    }

    /// Human output prints a lone `value` bare and everything else as
    /// `key: value` lines; porcelain prints every field as `key:value`.
    pub fn render(&self, porcelain: bool) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        let mut out = String::new();
        if porcelain {
            for (k, v) in self.echo.iter().chain(&self.results) {
                out.push_str(k);
                out.push(':');
                out.push_str(v);
                out.push('\n');
            }
        } else if let [(k, v)] = &self.results[..] {
            if k == "value" {
                out.push_str(v);
            } else {
                out.push_str(&format!("{}: {}", k, v));
            }
            out.push('\n');
        } else {
            for (k, v) in &self.results {
                out.push_str(&format!("{}: {}\n", k, v));
            }
        }
        out
    }
}

/// `x0*x2` style name of a subset monomial; `1` for the empty set.
pub fn mask_monomial(mask: u64, n: usize) -> String {
    let names: Vec<String> = (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("x{}", i))
        .collect();
    if names.is_empty() {
        String::from("1")
    } else {
        names.join("*")
    }
}

/// Network-polynomial monomial for the assignment `mask`: `x_i` for ones,
/// `xb_i` (the negated indicator) for zeros.
pub fn network_monomial(mask: u64, n: usize) -> String {
    if n == 0 {
        return String::from("1");
    }
    (0..n)
        .map(|i| {
            if mask >> i & 1 == 1 {
                format!("x{}", i)
            } else {
                format!("xb{}", i)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}
