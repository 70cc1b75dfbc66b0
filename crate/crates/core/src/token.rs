//! Tokenizing bytes into structure and data, and rendering back.
//!
//! Every input byte lands in exactly one token and rendering concatenates
//! the lexemes, so `render(tokenize(b)) == b` for any byte string.

use crate::dialect::{Dialect, Role};
use crate::error::{Pos, TokenizeError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Open(usize),
    Close(usize),
    /// Opens a subtree whose close is shared with the enclosing close.
    Colon,
    /// Closes a subtree whose open is shared with the enclosing open.
    OpenMark,
    /// `depth` closes followed by `depth` opens. `explicit` records whether
    /// the numeral was written, so `;1` and `;` both survive rendering.
    Separator {
        depth: u32,
        explicit: bool,
    },
    Comma,
    TypedOpen {
        kind: usize,
        name: Vec<u8>,
    },
    TypeSigil(Vec<u8>),
    Data(Vec<u8>),
    Ws(Vec<u8>),
}

impl TokenKind {
    pub fn separator(depth: u32) -> Self {
        TokenKind::Separator {
            depth,
            explicit: depth != 1,
        }
    }

    pub fn is_ws(&self) -> bool {
        matches!(self, TokenKind::Ws(_))
    }

    pub fn is_open(&self) -> bool {
        matches!(self, TokenKind::Open(_) | TokenKind::TypedOpen { .. })
    }

    pub fn is_close(&self) -> bool {
        matches!(self, TokenKind::Close(_))
    }

    /// True for every token that is not data or whitespace.
    pub fn is_structural(&self) -> bool {
        !matches!(self, TokenKind::Data(_) | TokenKind::Ws(_))
    }

    /// Appends this token's bytes under `dialect`.
    pub fn write_lexeme(&self, dialect: &Dialect, out: &mut Vec<u8>) {
        match self {
            TokenKind::Open(k) => out.push(dialect.bracket_kinds[*k].open),
            TokenKind::Close(k) => out.push(dialect.bracket_kinds[*k].close),
            TokenKind::Colon => out.push(glyph(dialect.colon, b':')),
            TokenKind::OpenMark => out.push(glyph(dialect.open_mark, b'^')),
            TokenKind::Separator { depth, explicit } => {
                out.push(glyph(dialect.cousin, b';'));
                if *explicit || *depth != 1 {
                    out.extend_from_slice(depth.to_string().as_bytes());
                }
            }
            TokenKind::Comma => out.push(glyph(dialect.comma, b',')),
            TokenKind::TypedOpen { kind, name } => {
                out.push(dialect.bracket_kinds[*kind].open);
                out.extend_from_slice(name);
            }
            TokenKind::TypeSigil(name) => {
                out.push(glyph(dialect.type_sigil, b'$'));
                out.extend_from_slice(name);
            }
            TokenKind::Data(bytes) | TokenKind::Ws(bytes) => out.extend_from_slice(bytes),
        }
    }

    pub fn lexeme_len(&self) -> usize {
        match self {
            TokenKind::Separator { depth, explicit } => {
                if *explicit || *depth != 1 {
                    1 + digits(*depth)
                } else {
                    1
                }
            }
            TokenKind::TypedOpen { name, .. } | TokenKind::TypeSigil(name) => 1 + name.len(),
            TokenKind::Data(bytes) | TokenKind::Ws(bytes) => bytes.len(),
            _ => 1,
        }
    }
}

fn glyph(configured: Option<u8>, fallback: u8) -> u8 {
    configured.unwrap_or(fallback)
}

fn digits(mut n: u32) -> usize {
    let mut count = 1;
    while n >= 10 {
        n /= 10;
        count += 1;
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub dialect: Dialect,
}

impl TokenStream {
    /// Builds a stream from bare kinds, assigning positions as if the
    /// stream had been rendered.
    pub fn from_kinds(dialect: Dialect, kinds: impl IntoIterator<Item = TokenKind>) -> Self {
        let mut pos = Pos::START;
        let mut scratch = Vec::new();
        let tokens = kinds
            .into_iter()
            .map(|kind| {
                let token = Token {
                    kind,
                    pos,
                };
                scratch.clear();
                token.kind.write_lexeme(&dialect, &mut scratch);
                pos.advance(&scratch);
                token
            })
            .collect();
        TokenStream { tokens, dialect }
    }

    pub fn kinds(&self) -> impl Iterator<Item = &TokenKind> {
        self.tokens.iter().map(|t| &t.kind)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn byte_len(&self) -> usize {
        self.kinds().map(TokenKind::lexeme_len).sum()
    }

    /// Position just past the last token.
    pub fn end_pos(&self) -> Pos {
        match self.tokens.last() {
            None => Pos::START,
            Some(t) => {
                let mut buf = Vec::new();
                t.kind.write_lexeme(&self.dialect, &mut buf);
                let mut pos = t.pos;
                pos.advance(&buf);
                pos
            }
        }
    }

    pub fn render(&self) -> Vec<u8> {
        render(self)
    }
}

pub fn render(stream: &TokenStream) -> Vec<u8> {
    let mut out = Vec::with_capacity(stream.byte_len());
    for token in &stream.tokens {
        token.kind.write_lexeme(&stream.dialect, &mut out);
    }
    out
}

fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

pub fn tokenize(text: &[u8], dialect: &Dialect) -> Result<TokenStream, TokenizeError> {
    let roles = dialect.roles();
    let typed_kind = dialect.typed_kind();
    let mut tokens = Vec::new();
    let mut pos = Pos::START;
    let mut i = 0;

    let push = |tokens: &mut Vec<Token>, kind: TokenKind, pos: &mut Pos, bytes: &[u8]| {
        tokens.push(Token { kind, pos: *pos });
        pos.advance(bytes);
    };

    while i < text.len() {
        let start = i;
        match roles[text[i] as usize] {
            Role::Ws => {
                while i < text.len() && roles[text[i] as usize] == Role::Ws {
                    i += 1;
                }
                let bytes = text[start..i].to_vec();
                push(&mut tokens, TokenKind::Ws(bytes), &mut pos, &text[start..i]);
            }
            Role::Data | Role::Escape | Role::Skip(_) => {
                i = scan_data(text, i, &roles, dialect, pos)?;
                let bytes = text[start..i].to_vec();
                push(&mut tokens, TokenKind::Data(bytes), &mut pos, &text[start..i]);
            }
            Role::Open(k) => {
                i += 1;
                let kind = if Some(k) == typed_kind
                    && i < text.len()
                    && is_name_byte(text[i])
                {
                    while i < text.len() && is_name_byte(text[i]) {
                        i += 1;
                    }
                    TokenKind::TypedOpen {
                        kind: k,
                        name: text[start + 1..i].to_vec(),
                    }
                } else {
                    TokenKind::Open(k)
                };
                push(&mut tokens, kind, &mut pos, &text[start..i]);
            }
            Role::Close(k) => {
                i += 1;
                push(&mut tokens, TokenKind::Close(k), &mut pos, &text[start..i]);
            }
            Role::Colon => {
                i += 1;
                push(&mut tokens, TokenKind::Colon, &mut pos, &text[start..i]);
            }
            Role::OpenMark => {
                i += 1;
                push(&mut tokens, TokenKind::OpenMark, &mut pos, &text[start..i]);
            }
            Role::Comma => {
                i += 1;
                push(&mut tokens, TokenKind::Comma, &mut pos, &text[start..i]);
            }
            Role::Cousin => {
                i += 1;
                let digits_start = i;
                while i < text.len() && text[i].is_ascii_digit() {
                    i += 1;
                }
                let numeral = &text[digits_start..i];
                // Only a canonical positive numeral is a depth; anything else
                // (leading zero, overflow) stays data after a depth-1 separator.
                let depth = if numeral.is_empty() || numeral[0] == b'0' {
                    None
                } else {
                    std::str::from_utf8(numeral)
                        .ok()
                        .and_then(|s| s.parse::<u32>().ok())
                };
                let kind = match depth {
                    Some(depth) => TokenKind::Separator {
                        depth,
                        explicit: true,
                    },
                    None => {
                        i = digits_start;
                        TokenKind::Separator {
                            depth: 1,
                            explicit: false,
                        }
                    }
                };
                push(&mut tokens, kind, &mut pos, &text[start..i]);
            }
            Role::Sigil => {
                i += 1;
                while i < text.len() && is_name_byte(text[i]) {
                    i += 1;
                }
                let name = text[start + 1..i].to_vec();
                push(&mut tokens, TokenKind::TypeSigil(name), &mut pos, &text[start..i]);
            }
        }
    }

    Ok(TokenStream {
        tokens,
        dialect: dialect.clone(),
    })
}

/// Consumes a maximal data run starting at `i`: plain data bytes, escaped
/// bytes and whole skip regions.
fn scan_data(
    text: &[u8],
    mut i: usize,
    roles: &[Role; 256],
    dialect: &Dialect,
    run_start: Pos,
) -> Result<usize, TokenizeError> {
    let mut pos = run_start;
    while i < text.len() {
        match roles[text[i] as usize] {
            Role::Data => {
                pos.advance(&text[i..i + 1]);
                i += 1;
            }
            Role::Escape => {
                let end = (i + 2).min(text.len());
                pos.advance(&text[i..end]);
                i = end;
            }
            Role::Skip(r) => {
                let region = dialect.skip_regions[r];
                let open_pos = pos;
                let mut j = i + 1;
                loop {
                    if j >= text.len() {
                        return Err(TokenizeError::UnterminatedSkip {
                            start: region.start,
                            pos: open_pos,
                        });
                    }
                    let b = text[j];
                    if region.escape == Some(region.end) && b == region.end {
                        if text.get(j + 1) == Some(&region.end) {
                            j += 2;
                            continue;
                        }
                        j += 1;
                        break;
                    }
                    if Some(b) == region.escape {
                        j += 2;
                        continue;
                    }
                    j += 1;
                    if b == region.end {
                        break;
                    }
                }
                pos.advance(&text[i..j]);
                i = j;
            }
            _ => break,
        }
    }
    Ok(i)
}
