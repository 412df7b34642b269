//! Importer for the NNF interchange format used by d-DNNF compilers.
//!
//! ```text
//! nnf <nodes> <edges> <vars>
//! L <literal>              # ±i, 1-based
//! A <c> <child>...         # conjunction; `A 0` is true
//! O <var> <c> <child>...   # disjunction; `O 0 0` is false
//! ```
//!
//! Children refer to earlier lines by 0-based position and the last node is
//! the root. Lines whose first token is `c` are comments.
//!
//! Conjunctions must be decomposable, which is checked. Disjunctions are
//! taken to be deterministic as the format promises; the `oracle` command can
//! confirm this by enumeration on small inputs.

use mlmar_core::bits::BitSet;
use mlmar_core::{Circuit, CircuitBuilder, NodeId, Rational};

use crate::error::{parse_usize, FormatError};

pub fn import_dnnf(text: &str) -> Result<Circuit, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && l.split_whitespace().next() != Some("c"));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| FormatError::syntax(1, "empty input, expected `nnf <v> <e> <n>`"))?;
    let (v, e, n) = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["nnf", v, e, n] => (
            parse_usize(hline, v, "a node count")?,
            parse_usize(hline, e, "an edge count")?,
            parse_usize(hline, n, "a variable count")?,
        ),
        _ => {
            return Err(FormatError::syntax(
                hline,
                format!("malformed header `{}`, expected `nnf <v> <e> <n>`", header),
            ))
        }
    };

    let mut b = CircuitBuilder::new(n);
    let mut ids: Vec<NodeId> = Vec::with_capacity(v);
    let mut vars: Vec<BitSet> = Vec::with_capacity(v);
    let mut edges = 0usize;
    let mut last_line = hline;
    for (line, content) in lines {
        last_line = line;
        let toks: Vec<&str> = content.split_whitespace().collect();
        let me = ids.len();
        let children = |toks: &[&str], count: &str| -> Result<Vec<usize>, FormatError> {
            let c = parse_usize(line, count, "a child count")?;
            if toks.len() != c {
                return Err(FormatError::syntax(
                    line,
                    format!("node {} declares {} children but lists {}", me, c, toks.len()),
                ));
            }
            toks.iter()
                .map(|t| {
                    let ch = parse_usize(line, t, "a child id")?;
                    if ch >= me {
                        return Err(FormatError::syntax(
                            line,
                            format!(
                                "node {} references node {}, which is not defined before it",
                                me, ch
                            ),
                        ));
                    }
                    Ok(ch)
                })
                .collect()
        };
        let (id, set) = match toks.first().copied() {
            Some("L") => {
                let [_, lit] = toks[..] else {
                    return Err(FormatError::syntax(line, "expected `L <literal>`"));
                };
                let l: i64 = lit
                    .parse()
                    .map_err(|_| FormatError::syntax(line, format!("malformed literal `{}`", lit)))?;
                let var = l.unsigned_abs() as usize;
                if l == 0 || var > n {
                    return Err(FormatError::syntax(
                        line,
                        format!("literal {} out of range for {} variables", l, n),
                    ));
                }
                let id = if l > 0 {
                    b.var(var - 1)
                } else {
                    b.negated_var(var - 1)
                };
                (id, BitSet::from_indices(n, [var - 1]))
            }
            Some("A") if toks.len() >= 2 => {
                let ch = children(&toks[2..], toks[1])?;
                edges += ch.len();
                let mut set = BitSet::new(n);
                for (pos, &c) in ch.iter().enumerate() {
                    if let Some(var) = vars[c].ones().find(|&x| set.get(x)) {
                        let left = ch[..pos]
                            .iter()
                            .copied()
                            .find(|&o| vars[o].get(var))
                            .expect("variable came from an earlier child");
                        return Err(FormatError::NotDecomposable {
                            line,
                            gate: me,
                            left,
                            right: c,
                            var: var + 1,
                        });
                    }
                    set.union_with(&vars[c]);
                }
                let id = if ch.is_empty() {
                    b.constant(Rational::one())
                } else {
                    b.prod(ch.iter().map(|&c| ids[c]).collect())
                };
                (id, set)
            }
            Some("O") if toks.len() >= 3 => {
                let decision = parse_usize(line, toks[1], "a decision variable")?;
                if decision > n {
                    return Err(FormatError::syntax(
                        line,
                        format!("decision variable {} out of range for {} variables", decision, n),
                    ));
                }
                let ch = children(&toks[3..], toks[2])?;
                edges += ch.len();
                let mut set = BitSet::new(n);
                for &c in &ch {
                    set.union_with(&vars[c]);
                }
                let id = if ch.is_empty() {
                    b.constant(Rational::zero())
                } else {
                    b.add(&ch.iter().map(|&c| ids[c]).collect::<Vec<_>>())
                };
                (id, set)
            }
            _ => {
                return Err(FormatError::syntax(
                    line,
                    format!("expected an `L`, `A` or `O` line, found `{}`", content),
                ))
            }
        };
        ids.push(id);
        vars.push(set);
    }
    if ids.len() != v {
        return Err(FormatError::syntax(
            hline,
            format!("header declares {} nodes but {} are given", v, ids.len()),
        ));
    }
    if edges != e {
        log::warn!("header declares {} edges but {} are given", e, edges);
    }
    let root = *ids
        .last()
        .ok_or_else(|| FormatError::syntax(hline, "no nodes after the header"))?;
    b.finish(root).map_err(|source| FormatError::Invalid {
        line: last_line,
        source,
    })
}
