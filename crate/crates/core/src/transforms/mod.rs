//! Reversible stream rewrites.
//!
//! | rewrite        | collapse                       | expand                 |
//! |----------------|--------------------------------|------------------------|
//! | closing-3      | `(a (b))` → `(a :b)`           | [`colon_expand`]       |
//! | opening-3      | `((m))` → `(m^)`               | [`open_expand`]        |
//! | separators     | `(a)(b)` → `(a,b)` / `(a;b)`   | [`sep_expand`]         |
//! | universal close| `(x[y]z)` → `(x[y]z]`          | [`restore_typed_close`]|
//!
//! [`pipeline`] runs the enabled rewrites in the order sep → colon|opening →
//! ucb and [`pipeline_inverse`] undoes them in reverse.

mod colon;
pub(crate) mod mirror;
mod pipeline;
mod separator;
mod universal;

pub use colon::{colon_collapse, colon_collapse_with, colon_expand, open_collapse, open_collapse_with, open_expand};
pub use mirror::reverse_mirror;
pub use pipeline::{both_collapse, both_expand, pipeline, pipeline_inverse, Op, OpSet, Profile, Style};
pub use separator::{sep_collapse, sep_expand};
pub use universal::{restore_typed_close, universal_close};

use crate::dialect::Dialect;
use crate::error::{StructError, StructErrorKind};
use crate::token::{Token, TokenKind};

/// Bracket pairs found by a colon-aware stack walk. Separators and commas
/// are opaque: they re-open what they close, so pairing ignores them.
pub(crate) struct Pairing {
    /// For each token index holding a close, the index of its open.
    pub open_of: Vec<Option<usize>>,
}

/// Matches opens with closes. Colons open frames that close with the
/// enclosing bracket; open marks are ignored (they close no opener of
/// their own). With `universal`, the universal glyph closes any kind.
pub(crate) fn pair_brackets(
    tokens: &[Token],
    dialect: &Dialect,
    universal: bool,
) -> Result<Pairing, StructError> {
    enum Entry {
        Bracket(usize, usize),
        Colon,
    }
    let mut stack: Vec<Entry> = Vec::new();
    let mut open_of = vec![None; tokens.len()];
    let mut brackets = 0usize;
    for (idx, token) in tokens.iter().enumerate() {
        match &token.kind {
            TokenKind::Open(k) | TokenKind::TypedOpen { kind: k, .. } => {
                stack.push(Entry::Bracket(idx, *k));
                brackets += 1;
            }
            TokenKind::Colon => {
                if brackets == 0 {
                    return Err(StructError::new(StructErrorKind::ColonAtTopLevel, token.pos));
                }
                stack.push(Entry::Colon);
            }
            TokenKind::Close(k) => {
                while matches!(stack.last(), Some(Entry::Colon)) {
                    stack.pop();
                }
                match stack.pop() {
                    Some(Entry::Bracket(open, kind)) => {
                        brackets -= 1;
                        let found = dialect.bracket_kinds[*k].close;
                        let ok = kind == *k || (universal && found == dialect.universal_close);
                        if !ok {
                            return Err(StructError::new(
                                StructErrorKind::MismatchedCloseKind {
                                    expected: dialect.bracket_kinds[kind].close,
                                    found,
                                },
                                token.pos,
                            ));
                        }
                        open_of[idx] = Some(open);
                    }
                    _ => {
                        return Err(StructError::new(StructErrorKind::UnbalancedClose, token.pos))
                    }
                }
            }
            _ => {}
        }
    }
    for entry in stack.iter().rev() {
        if let Entry::Bracket(open, _) = entry {
            return Err(StructError::new(StructErrorKind::UnclosedOpen, tokens[*open].pos));
        }
    }
    Ok(Pairing { open_of })
}

pub(crate) fn reject(
    tokens: &[Token],
    pred: impl Fn(&TokenKind) -> bool,
    kind: StructErrorKind,
) -> Result<(), StructError> {
    match tokens.iter().find(|t| pred(&t.kind)) {
        Some(t) => Err(StructError::new(kind, t.pos)),
        None => Ok(()),
    }
}

pub(crate) fn require_glyph(glyph: Option<u8>, what: &'static str) -> Result<(), StructError> {
    match glyph {
        Some(_) => Ok(()),
        None => Err(StructError::new(
            StructErrorKind::Unsupported(what),
            crate::error::Pos::START,
        )),
    }
}
