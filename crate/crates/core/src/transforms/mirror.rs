use crate::error::{StructError, StructErrorKind};
use crate::token::{Token, TokenKind, TokenStream};

/// Reverses token order, swapping opens with closes and colons with open
/// marks. Data and whitespace bytes are reversed too, so the rendered
/// result is the byte-reversed text with bracket glyphs swapped. Positions
/// are kept from the source tokens.
pub(crate) fn mirror_tokens(tokens: &[Token]) -> Result<Vec<Token>, StructError> {
    tokens
        .iter()
        .rev()
        .map(|t| {
            let kind = match &t.kind {
                TokenKind::Open(k) => TokenKind::Close(*k),
                TokenKind::Close(k) => TokenKind::Open(*k),
                TokenKind::Colon => TokenKind::OpenMark,
                TokenKind::OpenMark => TokenKind::Colon,
                TokenKind::TypedOpen { .. } => {
                    return Err(StructError::new(
                        StructErrorKind::Unsupported("typed openers in reverse order"),
                        t.pos,
                    ))
                }
                TokenKind::Data(b) => TokenKind::Data(b.iter().rev().copied().collect()),
                TokenKind::Ws(b) => TokenKind::Ws(b.iter().rev().copied().collect()),
                other => other.clone(),
            };
            Ok(Token { kind, pos: t.pos })
        })
        .collect()
}

/// Mirror image of a stream; an involution.
pub fn reverse_mirror(stream: &TokenStream) -> Result<TokenStream, StructError> {
    let tokens = mirror_tokens(&stream.tokens)?;
    Ok(TokenStream::from_kinds(
        stream.dialect.clone(),
        tokens.into_iter().map(|t| t.kind),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::Dialect;
    use crate::token::{render, tokenize};

    fn mirror(text: &str, d: &Dialect) -> String {
        let s = tokenize(text.as_bytes(), d).unwrap();
        String::from_utf8(render(&reverse_mirror(&s).unwrap())).unwrap()
    }

    /// Naive oracle: reverse the bytes, then swap bracket glyphs.
    fn naive(text: &str) -> String {
        text.chars()
            .rev()
            .map(|c| match c {
                '(' => ')',
                ')' => '(',
                '[' => ']',
                ']' => '[',
                ':' => '^',
                '^' => ':',
                c => c,
            })
            .collect()
    }

    #[test]
    fn examples() {
        let d = Dialect::sexpr();
        assert_eq!(mirror("(ab)", &d), "(ba)");
        assert_eq!(mirror("((m))", &d), "((m))");
        assert_eq!(mirror("[[g]h]", &d), "[h[g]]");
        assert_eq!(mirror("[[g]h]", &d), naive("[[g]h]"));
        assert_eq!(mirror("(:m)", &d), "(m^)");
    }

    #[test]
    fn matches_naive_oracle() {
        let d = Dialect::sexpr();
        for text in ["(a (b c) [d])", "((x:y) z)", "(p,q;r)", "  (a\n(b))"] {
            assert_eq!(mirror(text, &d), naive(text), "{text}");
        }
    }

    #[test]
    fn involution() {
        let d = Dialect::sexpr();
        let s = tokenize(b"(a (b:c) [d e] ;2 f)", &d).unwrap();
        let twice = reverse_mirror(&reverse_mirror(&s).unwrap()).unwrap();
        assert_eq!(twice, s);
    }

    #[test]
    fn typed_openers_refused() {
        let d = Dialect::default_dialect();
        let s = tokenize(b"{div x}", &d).unwrap();
        assert!(reverse_mirror(&s).is_err());
    }
}
