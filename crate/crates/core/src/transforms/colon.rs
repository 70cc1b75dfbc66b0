//! Closing-3 (colon) and opening-3 (open mark) rewrites.
//!
//! Collapse turns `( s1 ( s2 ) )` into `( s1 : s2 )` wherever a plain child
//! is the last item of its parent. Whitespace may sit between the two
//! closes and is kept; a child whose own close is preceded by whitespace is
//! left alone, because expansion re-inserts the removed close before the
//! trailing whitespace of the colon frame and could not tell the two
//! placements apart.

use super::mirror::mirror_tokens;
use super::{pair_brackets, reject, require_glyph};
use crate::error::{StructError, StructErrorKind};
use crate::token::{Token, TokenKind, TokenStream};
use crate::tree::unmirror_error;

pub fn colon_collapse(stream: &TokenStream) -> Result<TokenStream, StructError> {
    colon_collapse_with(stream, false)
}

/// With `terminal_only`, only childless subtrees in last position become
/// colons, as in `(a (b c))` → `(a :b c)` but `(a (b (c)))` → `(a (b :c))`.
pub fn colon_collapse_with(
    stream: &TokenStream,
    terminal_only: bool,
) -> Result<TokenStream, StructError> {
    require_glyph(stream.dialect.colon, "dialect has no colon glyph")?;
    reject(
        &stream.tokens,
        |k| *k == TokenKind::OpenMark,
        StructErrorKind::Unsupported("open marks in the colon transform"),
    )?;
    let kinds = collapse(&stream.tokens, stream, terminal_only)?;
    Ok(TokenStream::from_kinds(stream.dialect.clone(), kinds))
}

fn collapse(
    tokens: &[Token],
    stream: &TokenStream,
    terminal_only: bool,
) -> Result<Vec<TokenKind>, StructError> {
    let pairing = pair_brackets(tokens, &stream.dialect, false)?;
    let mut to_colon = vec![false; tokens.len()];
    let mut drop = vec![false; tokens.len()];
    for (close, open) in pairing.open_of.iter().enumerate() {
        let Some(open) = *open else { continue };
        if tokens[open].kind != TokenKind::Open(0) {
            continue;
        }
        if tokens[close - 1].kind.is_ws() {
            continue;
        }
        let next = tokens[close + 1..].iter().find(|t| !t.kind.is_ws());
        if !matches!(next, Some(t) if t.kind.is_close()) {
            continue;
        }
        if terminal_only
            && tokens[open + 1..close]
                .iter()
                .any(|t| !matches!(t.kind, TokenKind::Data(_) | TokenKind::Ws(_) | TokenKind::TypeSigil(_)))
        {
            continue;
        }
        to_colon[open] = true;
        drop[close] = true;
    }
    Ok(tokens
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop[*i])
        .map(|(i, t)| if to_colon[i] { TokenKind::Colon } else { t.kind.clone() })
        .collect())
}

/// Every colon becomes a plain open, and its close is inserted ahead of the
/// whitespace that precedes the close it shared.
pub fn colon_expand(stream: &TokenStream) -> Result<TokenStream, StructError> {
    reject(
        &stream.tokens,
        |k| *k == TokenKind::OpenMark,
        StructErrorKind::Unsupported("open marks in the colon transform"),
    )?;
    let kinds = expand(&stream.tokens, stream)?;
    Ok(TokenStream::from_kinds(stream.dialect.clone(), kinds))
}

fn expand(tokens: &[Token], stream: &TokenStream) -> Result<Vec<TokenKind>, StructError> {
    // Validate first so the rewrite below can assume balance.
    pair_brackets(tokens, &stream.dialect, false)?;
    let mut out: Vec<TokenKind> = Vec::with_capacity(tokens.len() + tokens.len() / 8);
    // Number of colon frames stacked above each open bracket.
    let mut pending: Vec<usize> = Vec::new();
    for token in tokens {
        match &token.kind {
            TokenKind::Open(_) | TokenKind::TypedOpen { .. } => {
                pending.push(0);
                out.push(token.kind.clone());
            }
            TokenKind::Colon => {
                *pending.last_mut().expect("validated") += 1;
                out.push(TokenKind::Open(0));
            }
            TokenKind::Close(_) => {
                let colons = pending.pop().expect("validated");
                if colons > 0 {
                    let at = if out.last().is_some_and(TokenKind::is_ws) {
                        out.len() - 1
                    } else {
                        out.len()
                    };
                    out.splice(at..at, std::iter::repeat(TokenKind::Close(0)).take(colons));
                }
                out.push(token.kind.clone());
            }
            other => out.push(other.clone()),
        }
    }
    Ok(out)
}

pub fn open_collapse(stream: &TokenStream) -> Result<TokenStream, StructError> {
    open_collapse_with(stream, false)
}

/// Mirror image of [`colon_collapse_with`]: no two opens remain adjacent.
pub fn open_collapse_with(
    stream: &TokenStream,
    terminal_only: bool,
) -> Result<TokenStream, StructError> {
    require_glyph(stream.dialect.open_mark, "dialect has no open mark glyph")?;
    reject(
        &stream.tokens,
        |k| *k == TokenKind::Colon,
        StructErrorKind::Unsupported("colons in the opening transform"),
    )?;
    let mirrored = mirror_tokens(&stream.tokens)?;
    let collapsed = collapse(&mirrored, stream, terminal_only).map_err(unmirror_error)?;
    finish_mirror(stream, collapsed)
}

pub fn open_expand(stream: &TokenStream) -> Result<TokenStream, StructError> {
    reject(
        &stream.tokens,
        |k| *k == TokenKind::Colon,
        StructErrorKind::Unsupported("colons in the opening transform"),
    )?;
    let mirrored = mirror_tokens(&stream.tokens)?;
    let expanded = expand(&mirrored, stream).map_err(unmirror_error)?;
    finish_mirror(stream, expanded)
}

fn finish_mirror(stream: &TokenStream, kinds: Vec<TokenKind>) -> Result<TokenStream, StructError> {
    let tokens: Vec<Token> = kinds
        .into_iter()
        .map(|kind| Token {
            kind,
            pos: Default::default(),
        })
        .collect();
    let back = mirror_tokens(&tokens)?;
    Ok(TokenStream::from_kinds(
        stream.dialect.clone(),
        back.into_iter().map(|t| t.kind),
    ))
}
