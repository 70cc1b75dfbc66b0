use super::pair_brackets;
use crate::error::StructError;
use crate::token::{TokenKind, TokenStream};

/// Every close becomes the universal glyph; the kind survives only in the
/// opener. Misnested input is rejected first, since the universal form
/// cannot express it.
pub fn universal_close(stream: &TokenStream) -> Result<TokenStream, StructError> {
    pair_brackets(&stream.tokens, &stream.dialect, false)?;
    let u = stream.dialect.universal_kind();
    let kinds = stream.kinds().map(|k| match k {
        TokenKind::Close(_) => TokenKind::Close(u),
        other => other.clone(),
    });
    Ok(TokenStream::from_kinds(stream.dialect.clone(), kinds))
}

/// Pushdown inverse of [`universal_close`]: each close is rewritten to the
/// close of its opener's kind. A close that is neither the universal glyph
/// nor the matching glyph is misnesting.
pub fn restore_typed_close(stream: &TokenStream) -> Result<TokenStream, StructError> {
    let pairing = pair_brackets(&stream.tokens, &stream.dialect, true)?;
    let kinds = stream.tokens.iter().enumerate().map(|(i, t)| match &t.kind {
        TokenKind::Close(_) => {
            let open = pairing.open_of[i].expect("paired");
            match &stream.tokens[open].kind {
                TokenKind::Open(k) | TokenKind::TypedOpen { kind: k, .. } => TokenKind::Close(*k),
                _ => unreachable!("opens pair with closes"),
            }
        }
        other => other.clone(),
    });
    Ok(TokenStream::from_kinds(stream.dialect.clone(), kinds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::Dialect;
    use crate::error::StructErrorKind;
    use crate::token::{render, tokenize};

    fn apply(f: fn(&TokenStream) -> Result<TokenStream, StructError>, text: &str, d: &Dialect) -> Result<String, StructError> {
        let s = tokenize(text.as_bytes(), d).unwrap();
        f(&s).map(|s| String::from_utf8(render(&s)).unwrap())
    }

    #[test]
    fn examples() {
        let d = Dialect::default_dialect();
        assert_eq!(apply(universal_close, "(x[y]z)", &d).unwrap(), "(x[y]z]");
        assert_eq!(apply(universal_close, "{a (b [c] d) e}", &d).unwrap(), "{a (b [c] d] e]");
        assert_eq!(apply(universal_close, "()", &d).unwrap(), "(]");
    }

    #[test]
    fn restore_examples() {
        let d = Dialect::default_dialect();
        assert_eq!(apply(restore_typed_close, "(x[y]z]", &d).unwrap(), "(x[y]z)");
        assert_eq!(apply(restore_typed_close, "{a (b [c] d] e]", &d).unwrap(), "{a (b [c] d) e}");
        assert_eq!(apply(restore_typed_close, "{[(]]]", &d).unwrap(), "{[()]}");
        let err = apply(restore_typed_close, "]", &d).unwrap_err();
        assert_eq!(err.kind, StructErrorKind::UnbalancedClose);
    }

    #[test]
    fn misnesting_rejected() {
        let d = Dialect::sexpr();
        let err = apply(universal_close, "[x(y]z)", &d).unwrap_err();
        assert!(matches!(err.kind, StructErrorKind::MismatchedCloseKind { .. }));
        assert_eq!(err.pos.offset, 4);
        // explicit wrong glyph, not the universal one
        let err = apply(restore_typed_close, "[x(y}z]", &Dialect::sexpr()).unwrap_err();
        assert!(matches!(err.kind, StructErrorKind::MismatchedCloseKind { .. }));
    }

    #[test]
    fn colon_frames_close_with_their_bracket() {
        let d = Dialect::sexpr();
        assert_eq!(apply(universal_close, "{a :b}", &d).unwrap(), "{a :b]");
        assert_eq!(apply(restore_typed_close, "{a :b]", &d).unwrap(), "{a :b}");
    }
}
