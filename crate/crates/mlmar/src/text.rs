//! The line-oriented circuit format.
//!
//! ```text
//! circuit 2
//! node 0 var 0
//! node 1 var 1
//! node 2 sum 1/2:0 1      # weight defaults to 1
//! node 3 prod 0 1
//! node 4 sum 2 -1:3
//! output 4
//! ```

use std::fmt::Write;

use mlmar_core::{Circuit, Node, Rational};

use crate::error::{parse_usize, significant_lines, FormatError};

struct Parsed {
    n_vars: usize,
    nodes: Vec<Node>,
    lines: Vec<usize>,
    output: usize,
    output_line: usize,
}

fn parse_rational(line: usize, tok: &str) -> Result<Rational, FormatError> {
    tok.parse()
        .map_err(|_| FormatError::syntax(line, format!("malformed rational `{}`", tok)))
}

fn parse_syntax(text: &str) -> Result<Parsed, FormatError> {
    let mut lines = significant_lines(text, "#");
    let (hline, header) = lines
        .next()
        .ok_or_else(|| FormatError::syntax(1, "empty input, expected `circuit <n_vars>`"))?;
    let n_vars = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["circuit", n] => parse_usize(hline, n, "a variable count")?,
        _ => {
            return Err(FormatError::syntax(
                hline,
                format!("expected `circuit <n_vars>`, found `{}`", header),
            ))
        }
    };

    let mut nodes = Vec::new();
    let mut node_lines = Vec::new();
    let mut output = None;
    for (line, content) in lines {
        if output.is_some() {
            return Err(FormatError::syntax(
                line,
                format!("unexpected `{}` after the output line", content),
            ));
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks[0] {
            "output" => {
                let [_, id] = toks[..] else {
                    return Err(FormatError::syntax(line, "expected `output <id>`"));
                };
                output = Some((parse_usize(line, id, "a node id")?, line));
            }
            "node" => {
                if toks.len() < 3 {
                    return Err(FormatError::syntax(line, "expected `node <id> <kind> ...`"));
                }
                let id = parse_usize(line, toks[1], "a node id")?;
                if id < nodes.len() {
                    return Err(FormatError::DuplicateId { line, id });
                }
                if id > nodes.len() {
                    return Err(FormatError::syntax(
                        line,
                        format!("expected node id {}, found {}", nodes.len(), id),
                    ));
                }
                let args = &toks[3..];
                let node = match toks[2] {
                    "var" => match args {
                        [i] => Node::Var(parse_usize(line, i, "a variable index")?),
                        _ => return Err(FormatError::syntax(line, "expected `var <index>`")),
                    },
                    "const" => match args {
                        [c] => Node::Const(parse_rational(line, c)?),
                        _ => return Err(FormatError::syntax(line, "expected `const <a>/<b>`")),
                    },
                    "sum" => Node::Sum(
                        args.iter()
                            .map(|t| match t.split_once(':') {
                                Some((w, c)) => {
                                    Ok((parse_rational(line, w)?, parse_usize(line, c, "a child id")?))
                                }
                                None => Ok((Rational::one(), parse_usize(line, t, "a child id")?)),
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                    "prod" => Node::Prod(
                        args.iter()
                            .map(|t| parse_usize(line, t, "a child id"))
                            .collect::<Result<_, _>>()?,
                    ),
                    other => {
                        return Err(FormatError::syntax(
                            line,
                            format!("unknown node kind `{}`", other),
                        ))
                    }
                };
                nodes.push(node);
                node_lines.push(line);
            }
            other => {
                return Err(FormatError::syntax(
                    line,
                    format!("expected `node` or `output`, found `{}`", other),
                ))
            }
        }
    }
    let (output, output_line) = output.ok_or(FormatError::MissingOutput)?;
    Ok(Parsed {
        n_vars,
        nodes,
        lines: node_lines,
        output,
        output_line,
    })
}

/// Parses and validates a circuit. Nodes the output does not depend on are
/// pruned with a warning.
pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let p = parse_syntax(text)?;
    for (id, (node, &line)) in p.nodes.iter().zip(&p.lines).enumerate() {
        for child in node.children() {
            if child >= p.nodes.len() {
                return Err(FormatError::UndefinedChild {
                    line,
                    node: id,
                    child,
                });
            }
            if child >= id {
                return Err(FormatError::ForwardReference {
                    line,
                    node: id,
                    child,
                });
            }
        }
        match node {
            Node::Var(i) if *i >= p.n_vars => {
                return Err(FormatError::syntax(
                    line,
                    format!("node {} uses variable {} but the circuit has {}", id, i, p.n_vars),
                ))
            }
            Node::Sum(ch) => {
                if let Some((_, child)) = ch.iter().find(|(w, _)| w.is_zero()) {
                    return Err(FormatError::ZeroWeight {
                        line,
                        node: id,
                        child: *child,
                    });
                }
                if ch.is_empty() {
                    return Err(FormatError::syntax(
                        line,
                        format!("sum node {} has no children", id),
                    ));
                }
            }
            Node::Prod(ch) if ch.is_empty() => {
                return Err(FormatError::syntax(
                    line,
                    format!("product node {} has no children", id),
                ))
            }
            _ => {}
        }
    }
    if p.output >= p.nodes.len() {
        return Err(FormatError::syntax(
            p.output_line,
            format!("output node {} is undefined", p.output),
        ));
    }
    Circuit::new(p.n_vars, p.nodes, p.output).map_err(|source| FormatError::Invalid {
        line: p.output_line,
        source,
    })
}

/// Parses the syntax only, leaving structural problems for
/// [`Circuit::validate`] to report.
pub fn parse_circuit_unchecked(text: &str) -> Result<Circuit, FormatError> {
    let p = parse_syntax(text)?;
    Ok(Circuit::from_raw_parts(p.n_vars, p.nodes, p.output))
}

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "circuit {}", c.n_vars()).unwrap();
    for (id, node) in c.nodes().iter().enumerate() {
        write!(out, "node {} ", id).unwrap();
        match node {
            Node::Var(i) => write!(out, "var {}", i).unwrap(),
            Node::Const(k) => write!(out, "const {}", k).unwrap(),
            Node::Sum(ch) => {
                out.push_str("sum");
                for (w, child) in ch {
                    if w.is_one() {
                        write!(out, " {}", child).unwrap();
                    } else {
                        write!(out, " {}:{}", w, child).unwrap();
                    }
                }
            }
            Node::Prod(ch) => {
                out.push_str("prod");
                for child in ch {
                    write!(out, " {}", child).unwrap();
                }
            }
        }
        out.push('\n');
    }
    writeln!(out, "output {}", c.output()).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mlmar_core::circuit::example_circuit;
    use mlmar_core::rational::rat;

    #[test]
    fn identity() {
        let c = parse_circuit("circuit 1\nnode 0 var 0\noutput 0\n").unwrap();
        assert_eq!(c.n_vars(), 1);
        assert_eq!(c.nodes(), &[Node::Var(0)]);
    }

    #[test]
    fn example_round_trips() {
        let c = example_circuit();
        let text = serialize_circuit(&c);
        assert!(text.contains("1/50:8"));
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn constant_kept_verbatim() {
        let c = parse_circuit("circuit 0\nnode 0 const 3/7\noutput 0").unwrap();
        assert_eq!(c.nodes(), &[Node::Const(rat(3, 7))]);
        assert!(serialize_circuit(&c).contains("const 3/7"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_circuit("# header\n\ncircuit 2 # two\nnode 0 var 1\n  node 1 const -4\nnode 2 sum 0 1/3:1\noutput 2 # done\n")
            .unwrap();
        assert_eq!(c.nodes()[2], Node::Sum(vec![(rat(1, 1), 0), (rat(1, 3), 1)]));
    }

    #[test]
    fn errors_name_the_culprit() {
        let e = parse_circuit("circuit 1\nnode 0 var 0\nnode 1 const 2\nnode 2 sum 5\noutput 2").unwrap_err();
        assert_eq!(
            e,
            FormatError::UndefinedChild {
                line: 4,
                node: 2,
                child: 5
            }
        );
        assert!(e.to_string().contains("undefined node 5"));

        let e =
            parse_circuit("circuit 1\nnode 0 var 0\nnode 1 prod 0 2\nnode 2 var 0\noutput 1").unwrap_err();
        assert_eq!(
            e,
            FormatError::ForwardReference {
                line: 3,
                node: 1,
                child: 2
            }
        );

        let e = parse_circuit("circuit 1\nnode 0 var 0\nnode 0 var 0\noutput 0").unwrap_err();
        assert_eq!(e, FormatError::DuplicateId { line: 3, id: 0 });

        let e = parse_circuit("circuit 1\nnode 0 var 0\nnode 1 sum 0:0\noutput 1").unwrap_err();
        assert_eq!(
            e,
            FormatError::ZeroWeight {
                line: 3,
                node: 1,
                child: 0
            }
        );

        let e = parse_circuit("circuit 1\nnode 0 var 0\n").unwrap_err();
        assert_eq!(e, FormatError::MissingOutput);

        let e = parse_circuit("circuit 1\nnode 0 const 1.5\noutput 0").unwrap_err();
        assert_eq!(e.line(), Some(2));
        assert!(e.to_string().contains("1.5"));

        let e = parse_circuit("circuit 1\nnode 0 var 3\noutput 0").unwrap_err();
        assert_eq!(e.line(), Some(2));

        let e = parse_circuit("circuit 1\nnode 0 var 0\nnode 1 sum\noutput 1").unwrap_err();
        assert_eq!(e.line(), Some(3));

        let e = parse_circuit("circuit x\n").unwrap_err();
        assert_eq!(e.line(), Some(1));

        let e = parse_circuit("circuit 1\nnode 0 var 0\noutput 0\nnode 1 var 0").unwrap_err();
        assert_eq!(e.line(), Some(4));
    }

    #[test]
    fn unreachable_nodes_pruned() {
        let c = parse_circuit("circuit 2\nnode 0 var 0\nnode 1 var 1\noutput 1").unwrap();
        assert_eq!(c.nodes(), &[Node::Var(1)]);
    }

    #[test]
    fn unchecked_keeps_structure_for_validation() {
        let c = parse_circuit_unchecked(
            "circuit 2\nnode 0 var 0\nnode 1 var 1\nnode 2 const 1\nnode 3 sum 0 2\nnode 4 prod 6 1\noutput 4",
        )
        .unwrap();
        let r = c.validate();
        let topo = r.check(mlmar_core::circuit::CheckKind::Topological);
        assert!(!topo.passed);
        assert!(topo.detail.contains("node 4 references node 6"));
    }
}
