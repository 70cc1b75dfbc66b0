//! Sibling and cousin separators.
//!
//! A separator of depth `d` stands for `d` plain closes followed by `d`
//! plain opens. Whitespace between the closes and the opens moves after the
//! separator; collapse skips a pair whose reopened node starts with
//! whitespace, since expansion puts all following whitespace back between
//! the closes and the opens.

use super::pipeline::{Profile, Style};
use super::{pair_brackets, reject};
use crate::error::{StructError, StructErrorKind};
use crate::token::{TokenKind, TokenStream};

pub fn sep_collapse(stream: &TokenStream, profile: &Profile) -> Result<TokenStream, StructError> {
    reject(
        &stream.tokens,
        |k| matches!(k, TokenKind::Colon | TokenKind::OpenMark),
        StructErrorKind::Unsupported("colons or open marks before the separator transform"),
    )?;
    pair_brackets(&stream.tokens, &stream.dialect, false)?;
    let d = &stream.dialect;
    let kinds: Vec<TokenKind> = stream.kinds().cloned().collect();

    let kinds = if profile.style == Style::Prose && d.comma.is_some() {
        null_children_to_commas(kinds)
    } else {
        kinds
    };

    let fold = profile.fold_depth.max(1) as usize;
    let plain_close = TokenKind::Close(0);
    let plain_open = TokenKind::Open(0);
    let mut out = Vec::with_capacity(kinds.len());
    let mut i = 0;
    while i < kinds.len() {
        if kinds[i] != plain_close {
            out.push(kinds[i].clone());
            i += 1;
            continue;
        }
        let closes = kinds[i..].iter().take_while(|k| **k == plain_close).count();
        let after_closes = i + closes;
        let ws = match kinds.get(after_closes) {
            Some(TokenKind::Ws(_)) => 1,
            _ => 0,
        };
        let opens_at = after_closes + ws;
        let opens = kinds[opens_at..].iter().take_while(|k| **k == plain_open).count();
        let depth = closes.min(opens).min(fold);
        let chosen = (1..=depth).rev().find(|&depth| {
            let next = kinds.get(opens_at + depth);
            if matches!(next, Some(TokenKind::Ws(_))) {
                return false;
            }
            match separator_token(profile.style, depth as u32, d) {
                None => false,
                // A numeral after the cousin glyph would be read as a depth.
                Some(TokenKind::Separator { .. }) => {
                    !matches!(next, Some(TokenKind::Data(b)) if b[0].is_ascii_digit())
                }
                Some(_) => true,
            }
        });
        match chosen {
            None => {
                out.extend(kinds[i..after_closes].iter().cloned());
                i = after_closes;
            }
            Some(depth) => {
                out.extend(std::iter::repeat(plain_close.clone()).take(closes - depth));
                out.push(separator_token(profile.style, depth as u32, d).expect("checked"));
                if ws == 1 {
                    out.push(kinds[after_closes].clone());
                }
                out.extend(std::iter::repeat(plain_open.clone()).take(opens - depth));
                i = opens_at + opens;
            }
        }
    }
    Ok(TokenStream::from_kinds(stream.dialect.clone(), out))
}

fn separator_token(style: Style, depth: u32, d: &crate::dialect::Dialect) -> Option<TokenKind> {
    if depth == 1 && style == Style::Table {
        d.comma.map(|_| TokenKind::Comma)
    } else {
        d.cousin.map(|_| TokenKind::separator(depth))
    }
}

/// `a()b` → `a,b`: an empty plain pair with data on both sides.
fn null_children_to_commas(kinds: Vec<TokenKind>) -> Vec<TokenKind> {
    let mut out: Vec<TokenKind> = Vec::with_capacity(kinds.len());
    let mut i = 0;
    while i < kinds.len() {
        let is_null = kinds[i] == TokenKind::Open(0)
            && kinds.get(i + 1) == Some(&TokenKind::Close(0))
            && matches!(out.last(), Some(TokenKind::Data(_)))
            && matches!(kinds.get(i + 2), Some(TokenKind::Data(_)));
        if is_null {
            out.push(TokenKind::Comma);
            i += 2;
        } else {
            out.push(kinds[i].clone());
            i += 1;
        }
    }
    out
}

/// Separators back to brackets. A comma is an empty pair under the prose
/// style and a depth-1 separator under the table style. Colon frames are
/// opaque here; expand colons first.
pub fn sep_expand(stream: &TokenStream, profile: &Profile) -> Result<TokenStream, StructError> {
    let mut out = Vec::with_capacity(stream.len() + stream.len() / 4);
    let mut depth: usize = 0;
    let mut iter = stream.tokens.iter().peekable();
    while let Some(token) = iter.next() {
        let sep_depth = match &token.kind {
            TokenKind::Separator { depth, .. } => Some(*depth),
            TokenKind::Comma => match profile.style {
                Style::Table => Some(1),
                Style::Prose => {
                    out.push(TokenKind::Open(0));
                    out.push(TokenKind::Close(0));
                    None
                }
            },
            TokenKind::Open(_) | TokenKind::TypedOpen { .. } => {
                depth += 1;
                out.push(token.kind.clone());
                None
            }
            TokenKind::Close(_) => {
                if depth == 0 {
                    return Err(StructError::new(StructErrorKind::UnbalancedClose, token.pos));
                }
                depth -= 1;
                out.push(token.kind.clone());
                None
            }
            other => {
                out.push(other.clone());
                None
            }
        };
        if let Some(d) = sep_depth {
            if d as usize > depth {
                return Err(StructError::new(
                    StructErrorKind::SeparatorUnderflow { depth: d },
                    token.pos,
                ));
            }
            out.extend(std::iter::repeat(TokenKind::Close(0)).take(d as usize));
            if let Some(ws) = iter.next_if(|t| t.kind.is_ws()) {
                out.push(ws.kind.clone());
            }
            out.extend(std::iter::repeat(TokenKind::Open(0)).take(d as usize));
        }
    }
    Ok(TokenStream::from_kinds(stream.dialect.clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::Dialect;
    use crate::token::{render, tokenize};

    fn profile(style: Style) -> Profile {
        Profile {
            style,
            ..Profile::default()
        }
    }

    fn collapse(text: &str, p: &Profile, d: &Dialect) -> String {
        let s = tokenize(text.as_bytes(), d).unwrap();
        String::from_utf8(render(&sep_collapse(&s, p).unwrap())).unwrap()
    }

    fn expand(text: &str, p: &Profile, d: &Dialect) -> Result<String, StructError> {
        let s = tokenize(text.as_bytes(), d).unwrap();
        sep_expand(&s, p).map(|s| String::from_utf8(render(&s)).unwrap())
    }

    #[test]
    fn table_style_commas() {
        let p = profile(Style::Table);
        let d = Dialect::dyck();
        assert_eq!(collapse("[[][][]]", &p, &d), "[[,,]]");
        assert_eq!(collapse("[[]][[]]", &p, &d), "[[],[]]");
        assert_eq!(expand("[,,,]", &p, &d).unwrap(), "[][][][]");
    }

    #[test]
    fn prose_style() {
        let p = profile(Style::Prose);
        let d = Dialect::sexpr();
        assert_eq!(collapse("(p()q)(r()s)", &p, &d), "(p,q;r,s)");
        assert_eq!(collapse("((a()b)(c()d))", &p, &d), "((a,b;c,d))");
        assert_eq!(expand("(p,q;r,s)", &p, &d).unwrap(), "(p()q)(r()s)");
    }

    #[test]
    fn expand_worked_example() {
        let p = profile(Style::Prose);
        assert_eq!(expand("(p(q;r))", &p, &Dialect::sexpr()).unwrap(), "(p(q)(r))");
    }

    #[test]
    fn deep_separators() {
        let p = profile(Style::Prose);
        let d = Dialect::sexpr();
        let err = expand("(a;3b)", &p, &d).unwrap_err();
        assert_eq!(err.kind, StructErrorKind::SeparatorUnderflow { depth: 3 });
        assert_eq!(err.pos.offset, 2);
        assert_eq!(expand("(((a;3b)))", &p, &d).unwrap(), "(((a)))(((b)))");
    }

    #[test]
    fn fold_depth_limits_collapse() {
        let d = Dialect::sexpr();
        let p = Profile {
            style: Style::Table,
            fold_depth: 3,
            ..Profile::default()
        };
        assert_eq!(collapse("(((a)))(((b)))", &p, &d), "(((a;3b)))");
        assert_eq!(collapse("(((a)))((b))", &p, &d), "(((a);2b))");
        let p1 = profile(Style::Table);
        assert_eq!(collapse("(((a)))(((b)))", &p1, &d), "(((a)),((b)))");
    }

    #[test]
    fn whitespace_moves_after_separator() {
        let p = profile(Style::Table);
        let d = Dialect::sexpr();
        assert_eq!(collapse("(a) (b)", &p, &d), "(a, b)");
        assert_eq!(expand("(a, b)", &p, &d).unwrap(), "(a) (b)");
        // reopened node starting with whitespace stays bracketed
        assert_eq!(collapse("(a)( b)", &p, &d), "(a)( b)");
    }

    #[test]
    fn digit_after_cousin_glyph_is_avoided() {
        let p = profile(Style::Prose);
        let d = Dialect::sexpr();
        assert_eq!(collapse("(a)(5)", &p, &d), "(a)(5)");
        let t = profile(Style::Table);
        assert_eq!(collapse("(a)(5)", &t, &d), "(a,5)");
    }

    #[test]
    fn only_plain_brackets() {
        let p = profile(Style::Table);
        assert_eq!(collapse("[a][b]", &p, &Dialect::sexpr()), "[a][b]");
    }

    #[test]
    fn collapse_is_idempotent() {
        let d = Dialect::sexpr();
        for style in [Style::Table, Style::Prose] {
            let p = profile(style);
            for text in ["(a()b)(c)", "((x))((y)) (z)", "x()()y"] {
                let once = collapse(text, &p, &d);
                assert_eq!(collapse(&once, &p, &d), once);
            }
        }
    }

    #[test]
    fn newick_has_no_separator_glyphs() {
        let p = profile(Style::Table);
        assert_eq!(collapse("((a)(b));", &p, &Dialect::newick()), "((a)(b));");
    }
}
