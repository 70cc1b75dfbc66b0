use std::fmt;

use thiserror::Error;

/// A location in the source text: byte offset plus 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Pos {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub const START: Pos = Pos {
        offset: 0,
        line: 1,
        col: 1,
    };

    /// Advances past `bytes`, counting LF as a line break.
    pub fn advance(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.offset += 1;
            if b == b'\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Balance and nesting violations found while matching brackets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StructErrorKind {
    UnbalancedClose,
    UnclosedOpen,
    ColonAtTopLevel,
    OpenMarkAtTopLevel,
    SeparatorUnderflow { depth: u32 },
    MismatchedCloseKind { expected: u8, found: u8 },
    /// A performed rewrite would meet a notation it cannot handle, e.g. open
    /// marks handed to the colon transform.
    Unsupported(&'static str),
    /// The input already contains a glyph the rewrite would introduce, so
    /// the result could not be inverted.
    NotationPresent(&'static str),
}

impl fmt::Display for StructErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructErrorKind::UnbalancedClose => f.write_str("unbalanced close"),
            StructErrorKind::UnclosedOpen => f.write_str("unclosed open"),
            StructErrorKind::ColonAtTopLevel => f.write_str("colon at top level"),
            StructErrorKind::OpenMarkAtTopLevel => f.write_str("open mark at top level"),
            StructErrorKind::SeparatorUnderflow { depth } => {
                write!(f, "separator of depth {depth} underflows the nesting")
            }
            StructErrorKind::MismatchedCloseKind { expected, found } => write!(
                f,
                "misnested close: expected `{}`, found `{}`",
                char::from(*expected),
                char::from(*found)
            ),
            StructErrorKind::Unsupported(what) => write!(f, "unsupported: {what}"),
            StructErrorKind::NotationPresent(what) => {
                write!(f, "input already contains {what}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Error)]
#[error("{kind} at {pos}")]
pub struct StructError {
    pub kind: StructErrorKind,
    pub pos: Pos,
}

impl StructError {
    pub fn new(kind: StructErrorKind, pos: Pos) -> Self {
        StructError { kind, pos }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TokenizeError {
    #[error("unterminated region starting with `{}` at {pos}", char::from(*.start))]
    UnterminatedSkip { start: u8, pos: Pos },
}

impl TokenizeError {
    pub fn pos(&self) -> Pos {
        match self {
            TokenizeError::UnterminatedSkip { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("the colon and opening transforms are mutually exclusive")]
    ColonWithOpening,
    #[error("fold depth must be at least 1")]
    ZeroFoldDepth,
    #[error("unknown transform `{0}` (expected sep, colon, opening or ucb)")]
    UnknownOp(String),
    #[error("unknown style `{0}` (expected table or prose)")]
    UnknownStyle(String),
}

/// Crate-level error for operations that chain several stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Dialect(#[from] crate::dialect::DialectError),
    #[error(transparent)]
    Escape(#[from] crate::escapes::EscapeError),
    #[error(transparent)]
    Indent(#[from] crate::indent::IndentError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
