//! XOR-CSP files: `xorcsp <n>` then clauses `c <i> <j> <k>` with 1-based
//! indices, each asserting `x_i ⊕ x_j ⊕ x_k = 1`.

use std::fmt::Write;

use mlmar_core::affine::XorFormula;

use crate::error::{parse_usize, significant_lines, FormatError};

pub fn parse_xorcsp(text: &str) -> Result<XorFormula, FormatError> {
    let mut lines = significant_lines(text, "#");
    let (hline, header) = lines
        .next()
        .ok_or_else(|| FormatError::syntax(1, "empty input, expected `xorcsp <n>`"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["xorcsp", n] => parse_usize(hline, n, "a variable count")?,
        _ => {
            return Err(FormatError::syntax(
                hline,
                format!("expected `xorcsp <n>`, found `{}`", header),
            ))
        }
    };
    let mut clauses = Vec::new();
    for (line, content) in lines {
        let toks: Vec<&str> = content.split_whitespace().collect();
        let ["c", i, j, k] = toks[..] else {
            return Err(FormatError::syntax(
                line,
                format!("expected `c <i> <j> <k>`, found `{}`", content),
            ));
        };
        let mut clause = [0; 3];
        for (slot, tok) in clause.iter_mut().zip([i, j, k]) {
            let v = parse_usize(line, tok, "a variable index")?;
            if v == 0 || v > n {
                return Err(FormatError::syntax(
                    line,
                    format!("variable {} out of range 1..={}", v, n),
                ));
            }
            *slot = v - 1;
        }
        clauses.push(clause);
    }
    XorFormula::new(n, clauses).map_err(|source| FormatError::Invalid { line: hline, source })
}

pub fn serialize_xorcsp(phi: &XorFormula) -> String {
    let mut out = format!("xorcsp {}\n", phi.n());
    for [i, j, k] in phi.clauses() {
        writeln!(out, "c {} {} {}", i + 1, j + 1, k + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let phi = parse_xorcsp("xorcsp 3\nc 1 2 3\nc 3 3 1 # repeated\n").unwrap();
        assert_eq!(phi.clauses(), &[[0, 1, 2], [2, 2, 0]]);
        assert_eq!(parse_xorcsp(&serialize_xorcsp(&phi)).unwrap(), phi);
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(parse_xorcsp("xorcsp 2\nc 1 2 3\n").unwrap_err().line(), Some(2));
        assert_eq!(parse_xorcsp("xorcsp 2\nc 0 1 2\n").unwrap_err().line(), Some(2));
        assert_eq!(parse_xorcsp("xorcsp 2\nc 1 2\n").unwrap_err().line(), Some(2));
    }
}
