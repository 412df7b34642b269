//! Truth-table files: `table <n>` followed by `<bitstring> <value>` rows.
//! Character `i` of a bitstring is `x_i`. Rows may come in any order and
//! missing rows read as 0.

use std::fmt::Write;

use mlmar_core::multilinear::TruthTable;
use mlmar_core::{Limits, Rational};

use crate::error::{parse_usize, significant_lines, FormatError};

pub fn parse_table(text: &str, limits: &Limits) -> Result<TruthTable, FormatError> {
    let mut lines = significant_lines(text, "#");
    let (hline, header) = lines
        .next()
        .ok_or_else(|| FormatError::syntax(1, "empty input, expected `table <n>`"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["table", n] => parse_usize(hline, n, "a variable count")?,
        _ => {
            return Err(FormatError::syntax(
                hline,
                format!("expected `table <n>`, found `{}`", header),
            ))
        }
    };
    if n > limits.table_max_n {
        return Err(FormatError::Invalid {
            line: hline,
            source: mlmar_core::Error::Capacity {
                what: "truth-table variables",
                requested: n,
                limit: limits.table_max_n,
            },
        });
    }
    let mut table = TruthTable::zeros(n);
    let mut seen = vec![0usize; 1 << n];
    let mut rows = 0usize;
    for (line, content) in lines {
        // with no variables the bitstring is empty
        let (bits, value) = match content.split_whitespace().collect::<Vec<_>>()[..] {
            [bits, value] => (bits, value),
            [value] if n == 0 => ("", value),
            _ => return Err(FormatError::syntax(line, "expected `<bitstring> <a>/<b>`")),
        };
        if bits.len() != n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(FormatError::syntax(
                line,
                format!("`{}` is not a bitstring of length {}", bits, n),
            ));
        }
        let x = bits
            .bytes()
            .enumerate()
            .fold(0u64, |acc, (i, b)| acc | (u64::from(b == b'1') << i));
        if seen[x as usize] != 0 {
            return Err(FormatError::syntax(
                line,
                format!("row `{}` already given on line {}", bits, seen[x as usize]),
            ));
        }
        seen[x as usize] = line;
        let v: Rational = value
            .parse()
            .map_err(|_| FormatError::syntax(line, format!("malformed rational `{}`", value)))?;
        table.set(x, v);
        rows += 1;
    }
    if rows < 1 << n {
        log::warn!(
            "{} of {} table rows missing, read as 0",
            (1usize << n) - rows,
            1usize << n
        );
    }
    Ok(table)
}

pub fn serialize_table(t: &TruthTable) -> String {
    let n = t.n();
    let mut out = format!("table {}\n", n);
    for r in 0..1u64 << n {
        // lexicographic in the bitstring, so x_0 varies slowest
        let x = (0..n).fold(0u64, |acc, i| acc | (((r >> (n - 1 - i)) & 1) << i));
        for i in 0..n {
            out.push(if x >> i & 1 == 1 { '1' } else { '0' });
        }
        writeln!(out, " {}", t.get(x)).unwrap();
    }
    out
}
