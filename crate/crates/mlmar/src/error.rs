use thiserror::Error;

/// Failure to read one of the text formats. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: node {node} references undefined node {child}")]
    UndefinedChild { line: usize, node: usize, child: usize },
    #[error("line {line}: node {node} references node {child}, which is defined later")]
    ForwardReference { line: usize, node: usize, child: usize },
    #[error("line {line}: duplicate node id {id}")]
    DuplicateId { line: usize, id: usize },
    #[error("line {line}: node {node} has zero weight on child {child}")]
    ZeroWeight { line: usize, node: usize, child: usize },
    #[error("missing `output` line")]
    MissingOutput,
    #[error(
        "line {line}: AND gate {gate} is not decomposable: children {left} and {right} both mention variable {var}"
    )]
    NotDecomposable {
        line: usize,
        gate: usize,
        left: usize,
        right: usize,
        var: usize,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: mlmar_core::Error },
}

impl FormatError {
    pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> Self {
        FormatError::Syntax {
            line,
            msg: msg.into(),
        }
    }

    /// The offending line, when there is one.
    pub fn line(&self) -> Option<usize> {
        match *self {
            FormatError::Syntax { line, .. }
            | FormatError::UndefinedChild { line, .. }
            | FormatError::ForwardReference { line, .. }
            | FormatError::DuplicateId { line, .. }
            | FormatError::ZeroWeight { line, .. }
            | FormatError::NotDecomposable { line, .. }
            | FormatError::Invalid { line, .. } => Some(line),
            FormatError::MissingOutput => None,
        }
    }
}

/// Significant lines of a text file: comments after `comment` stripped,
/// whitespace trimmed, blank lines skipped. Yields `(line number, content)`.
pub(crate) fn significant_lines<'a>(
    text: &'a str,
    comment: &'a str,
) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines().enumerate().filter_map(move |(i, l)| {
        let l = match l.find(comment) {
            Some(p) => &l[..p],
            None => l,
        };
        let l = l.trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| FormatError::syntax(line, format!("expected {} but found `{}`", what, tok)))
}
