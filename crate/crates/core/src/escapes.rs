//! Quantity escapes.
//!
//! `\<n><c>` repeats the byte `c` n times and `\<n>\<len>\<literal>` repeats
//! a verbatim literal of `len` bytes n times. `\\` is a literal backslash.
//! Digits, the backslash and `-` cannot be run subjects, so a numeral is
//! always read whole. Counts are decimal and may be zero.

use thiserror::Error;

use crate::error::Pos;

pub const ESCAPE: u8 = b'\\';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EscapeError {
    #[error("negative count at {0}")]
    NegativeCount(Pos),
    #[error("truncated escape at {0}")]
    TruncatedEscape(Pos),
    #[error("block length at {0} is not followed by `\\`")]
    MissingLengthTerminator(Pos),
    #[error("block literal at {pos} has {found} of {expected} bytes")]
    BlockLiteralShort {
        pos: Pos,
        expected: usize,
        found: usize,
    },
    #[error("`{}` cannot be repeated by a run escape at {pos}", char::from(*.byte))]
    InvalidRunSubject { pos: Pos, byte: u8 },
    #[error("unknown escape `\\{}` at {pos}", char::from(*.byte))]
    UnknownEscape { pos: Pos, byte: u8 },
    #[error("count too large at {0}")]
    CountOverflow(Pos),
}

impl EscapeError {
    pub fn pos(&self) -> Pos {
        match self {
            EscapeError::NegativeCount(p)
            | EscapeError::TruncatedEscape(p)
            | EscapeError::MissingLengthTerminator(p)
            | EscapeError::CountOverflow(p) => *p,
            EscapeError::BlockLiteralShort { pos, .. }
            | EscapeError::InvalidRunSubject { pos, .. }
            | EscapeError::UnknownEscape { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EscapeForm {
    Run { count: usize, subject: u8 },
    Block { count: usize, literal: Vec<u8> },
}

impl EscapeForm {
    pub fn write(&self, out: &mut Vec<u8>) {
        match self {
            EscapeForm::Run { count, subject } => {
                out.push(ESCAPE);
                out.extend_from_slice(count.to_string().as_bytes());
                out.push(*subject);
            }
            EscapeForm::Block { count, literal } => {
                out.push(ESCAPE);
                out.extend_from_slice(count.to_string().as_bytes());
                out.push(ESCAPE);
                out.extend_from_slice(literal.len().to_string().as_bytes());
                out.push(ESCAPE);
                out.extend_from_slice(literal);
            }
        }
    }

    pub fn expand_into(&self, out: &mut Vec<u8>) {
        match self {
            EscapeForm::Run { count, subject } => out.resize(out.len() + count, *subject),
            EscapeForm::Block { count, literal } => {
                for _ in 0..*count {
                    out.extend_from_slice(literal);
                }
            }
        }
    }
}

fn is_run_subject(b: u8) -> bool {
    !(b.is_ascii_digit() || b == ESCAPE || b == b'-')
}

enum Piece<'a> {
    Literal(&'a [u8]),
    Backslash,
    Form(EscapeForm),
}

/// Reads one escape sequence starting at `text[at] == ESCAPE`. Returns the
/// piece and the offset just past it.
fn read_escape(text: &[u8], at: usize) -> Result<(Piece<'_>, usize), EscapeError> {
    let err_pos = |offset: usize| pos_at(text, offset);
    let mut i = at + 1;
    let Some(&first) = text.get(i) else {
        return Err(EscapeError::TruncatedEscape(err_pos(at)));
    };
    if first == ESCAPE {
        return Ok((Piece::Backslash, i + 1));
    }
    if first == b'-' {
        return Err(EscapeError::NegativeCount(err_pos(at)));
    }
    if !first.is_ascii_digit() {
        return Err(EscapeError::UnknownEscape { pos: err_pos(at), byte: first });
    }
    let count = read_number(text, &mut i).map_err(|()| EscapeError::CountOverflow(err_pos(at)))?;
    let Some(&next) = text.get(i) else {
        return Err(EscapeError::TruncatedEscape(err_pos(at)));
    };
    if next != ESCAPE {
        if !is_run_subject(next) {
            return Err(EscapeError::InvalidRunSubject { pos: err_pos(i), byte: next });
        }
        return Ok((Piece::Form(EscapeForm::Run { count, subject: next }), i + 1));
    }
    i += 1;
    if !text.get(i).is_some_and(u8::is_ascii_digit) {
        return Err(EscapeError::TruncatedEscape(err_pos(at)));
    }
    let len_at = i;
    let len = read_number(text, &mut i).map_err(|()| EscapeError::CountOverflow(err_pos(len_at)))?;
    if text.get(i) != Some(&ESCAPE) {
        return Err(EscapeError::MissingLengthTerminator(err_pos(len_at)));
    }
    i += 1;
    let available = text.len() - i;
    if available < len {
        return Err(EscapeError::BlockLiteralShort {
            pos: err_pos(i),
            expected: len,
            found: available,
        });
    }
    if count.checked_mul(len).is_none() {
        return Err(EscapeError::CountOverflow(err_pos(at)));
    }
    let literal = text[i..i + len].to_vec();
    Ok((Piece::Form(EscapeForm::Block { count, literal }), i + len))
}

fn read_number(text: &[u8], i: &mut usize) -> Result<usize, ()> {
    let mut n: usize = 0;
    while let Some(&b) = text.get(*i).filter(|b| b.is_ascii_digit()) {
        n = n.checked_mul(10).and_then(|n| n.checked_add(usize::from(b - b'0'))).ok_or(())?;
        *i += 1;
    }
    Ok(n)
}

fn pos_at(text: &[u8], offset: usize) -> Pos {
    let mut p = Pos::START;
    p.advance(&text[..offset]);
    p
}

/// Splits `text` into literal runs and escapes, each with its byte span.
/// After a malformed escape the walk resumes one byte later.
fn pieces(text: &[u8]) -> impl Iterator<Item = (std::ops::Range<usize>, Result<Piece<'_>, EscapeError>)> {
    let mut i = 0;
    std::iter::from_fn(move || {
        if i >= text.len() {
            return None;
        }
        let start = i;
        if text[i] != ESCAPE {
            let end = text[i..].iter().position(|&b| b == ESCAPE).map_or(text.len(), |p| i + p);
            i = end;
            return Some((start..end, Ok(Piece::Literal(&text[start..end]))));
        }
        match read_escape(text, i) {
            Ok((piece, next)) => {
                i = next;
                Some((start..next, Ok(piece)))
            }
            Err(e) => {
                i += 1;
                Some((start..i, Err(e)))
            }
        }
    })
}

pub fn expand_escapes(text: &[u8]) -> Result<Vec<u8>, EscapeError> {
    let mut out = Vec::with_capacity(text.len());
    for (_, piece) in pieces(text) {
        match piece? {
            Piece::Literal(b) => out.extend_from_slice(b),
            Piece::Backslash => out.push(ESCAPE),
            Piece::Form(f) => f.expand_into(&mut out),
        }
    }
    Ok(out)
}

/// Replaces runs of at least `min_run` equal bytes with run escapes.
/// Existing escape sequences, malformed ones included, are copied
/// unchanged, so expansion gives the same result before and after
/// compression. `min_run` below 2 is read as 2.
pub fn compress_runs(text: &[u8], min_run: usize) -> Vec<u8> {
    let min_run = min_run.max(2);
    let mut out = Vec::with_capacity(text.len());
    for (span, piece) in pieces(text) {
        match piece {
            Ok(Piece::Literal(lit)) => compress_literal(lit, min_run, &mut out),
            _ => out.extend_from_slice(&text[span]),
        }
    }
    out
}

fn compress_literal(lit: &[u8], min_run: usize, out: &mut Vec<u8>) {
    let mut i = 0;
    while i < lit.len() {
        let b = lit[i];
        let run = lit[i..].iter().take_while(|&&c| c == b).count();
        if run >= min_run && is_run_subject(b) {
            EscapeForm::Run { count: run, subject: b }.write(out);
        } else {
            out.extend_from_slice(&lit[i..i + run]);
        }
        i += run;
    }
}

pub fn encode_block(count: usize, literal: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(literal.len() + 8);
    EscapeForm::Block {
        count,
        literal: literal.to_vec(),
    }
    .write(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_examples() {
        assert_eq!(expand_escapes(b"\\9(").unwrap(), b"(((((((((");
        assert_eq!(expand_escapes(b"\\0(").unwrap(), b"");
        assert_eq!(expand_escapes(b"\\1x").unwrap(), b"x");
        assert_eq!(expand_escapes(b"a\\\\b").unwrap(), b"a\\b");
        assert_eq!(expand_escapes(b"\\12xy").unwrap(), b"xxxxxxxxxxxxy");
    }

    #[test]
    fn block_examples() {
        assert_eq!(expand_escapes(b"\\5\\4\\abcd").unwrap(), b"abcdabcdabcdabcdabcd");
        assert_eq!(encode_block(1, b")("), b"\\1\\2\\)(");
        assert_eq!(expand_escapes(b"\\1\\2\\)(").unwrap(), b")(");
        let crlf = encode_block(3, b"\r\n");
        assert_eq!(expand_escapes(&crlf).unwrap(), b"\r\n\r\n\r\n");
        assert_eq!(expand_escapes(&encode_block(0, b"xyz")).unwrap(), b"");
        let tricky = b"\\9(\\\\\\";
        assert_eq!(expand_escapes(&encode_block(2, tricky)).unwrap(), [&tricky[..], &tricky[..]].concat());
    }

    #[test]
    fn errors() {
        assert!(matches!(expand_escapes(b"x\\-3a"), Err(EscapeError::NegativeCount(p)) if p.offset == 1));
        assert!(matches!(expand_escapes(b"\\12"), Err(EscapeError::TruncatedEscape(_))));
        assert!(matches!(expand_escapes(b"ab\\"), Err(EscapeError::TruncatedEscape(p)) if p.offset == 2));
        assert!(matches!(
            expand_escapes(b"\\2\\5\\abc"),
            Err(EscapeError::BlockLiteralShort { expected: 5, found: 3, .. })
        ));
        assert!(matches!(expand_escapes(b"\\2\\5abc"), Err(EscapeError::MissingLengthTerminator(_))));
        assert!(matches!(expand_escapes(b"\\3-"), Err(EscapeError::InvalidRunSubject { byte: b'-', .. })));
        assert!(matches!(expand_escapes(b"\\q"), Err(EscapeError::UnknownEscape { byte: b'q', .. })));
        assert!(matches!(
            expand_escapes(b"\\99999999999999999999999x"),
            Err(EscapeError::CountOverflow(_))
        ));
        let err = expand_escapes(b"a\nb\\-1x").unwrap_err();
        assert_eq!(err.pos().to_string(), "2:2");
    }

    #[test]
    fn compress_examples() {
        assert_eq!(compress_runs(b"(((((((((", 4), b"\\9(");
        assert_eq!(compress_runs(b"aaab", 4), b"aaab");
        assert_eq!(compress_runs(b"0000----", 2), b"0000----");
        assert_eq!(compress_runs(b"xx", 1), b"\\2x");
    }

    #[test]
    fn compress_keeps_existing_escapes() {
        let text = b"\\2\\4\\((((aaaaa\\\\\\\\\\\\";
        let out = compress_runs(text, 4);
        assert_eq!(out, b"\\2\\4\\((((\\5a\\\\\\\\\\\\");
        assert_eq!(expand_escapes(&out).unwrap(), expand_escapes(text).unwrap());
    }
}
