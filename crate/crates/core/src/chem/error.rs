use std::fmt;

/// Category of a SMILES parse or sanitization failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    /// Input was empty or contained no atoms.
    Empty,
    /// Unknown character, element symbol or malformed bracket atom.
    Lexical,
    /// Structurally misplaced token (dangling bond, stray ')', duplicate bond).
    Syntax,
    /// A '(' without its matching ')'.
    UnclosedBranch,
    /// A ring-closure digit that was opened but never closed.
    UnmatchedRingClosure,
    /// Bond order sum plus hydrogens is not an allowed valence.
    Valence,
    /// Aromatic atoms that admit no alternating single/double assignment.
    Kekulization,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::Empty => "empty molecule",
            ParseErrorKind::Lexical => "lexical error",
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnclosedBranch => "unclosed branch",
            ParseErrorKind::UnmatchedRingClosure => "unmatched ring closure",
            ParseErrorKind::Valence => "valence violation",
            ParseErrorKind::Kekulization => "kekulization failure",
        };
        f.write_str(s)
    }
}

/// Where and why a SMILES string was rejected. `position` is a byte offset
/// that always lies within the input (the last byte for end-of-input errors).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at position {position}: {message}")]
pub struct ParseDiagnostic {
    pub position: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl ParseDiagnostic {
    pub(crate) fn new(position: usize, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            position,
            kind,
            message: message.into(),
        }
    }
}
