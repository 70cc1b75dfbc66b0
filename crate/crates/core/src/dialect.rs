//! Reserved-symbol configurations.
//!
//! A [`Dialect`] decides how bytes split into structure and data: which
//! byte pairs are brackets, which glyphs stand for colons, open marks and
//! separators, and which regions (string literals, comments) are opaque.
//! Bracket kind 0 is the *plain* kind; only plain brackets are ever
//! collapsed into colons, marks or separators.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BracketKind {
    pub open: u8,
    pub close: u8,
}

/// An opaque region: everything from `start` through the next unescaped
/// `end` is data. When `escape == Some(end)` the end byte is escaped by
/// doubling it (Newick `''`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SkipRegion {
    pub start: u8,
    pub end: u8,
    pub escape: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dialect {
    pub name: String,
    pub bracket_kinds: Vec<BracketKind>,
    pub colon: Option<u8>,
    pub open_mark: Option<u8>,
    pub comma: Option<u8>,
    pub cousin: Option<u8>,
    /// Inside structured text the escape glyph turns the following byte into
    /// data.
    pub escape: Option<u8>,
    /// Open byte of the bracket kind whose opener may carry a type name.
    pub typed_open: Option<u8>,
    pub type_sigil: Option<u8>,
    /// Must be the close byte of one of the bracket kinds.
    pub universal_close: u8,
    pub skip_regions: Vec<SkipRegion>,
    pub ws: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DialectError {
    #[error("dialect defines no bracket kinds")]
    NoBrackets,
    #[error("reserved byte 0x{0:02x} is not ASCII")]
    NonAscii(u8),
    #[error("byte `{}` is reserved twice ({1} and {2})", char::from(*.0))]
    Duplicate(u8, &'static str, &'static str),
    #[error("universal close `{}` is not the close byte of any bracket kind", char::from(*.0))]
    UniversalNotClose(u8),
    #[error("typed opener `{}` is not the open byte of a non-plain bracket kind", char::from(*.0))]
    TypedOpenNotBracket(u8),
    #[error("whitespace byte `{}` is also reserved", char::from(*.0))]
    WsReserved(u8),
    #[error("unknown dialect `{0}`")]
    Unknown(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("cannot read dialect file: {0}")]
    Io(String),
}

/// What a single byte means to the tokenizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    Data,
    Ws,
    Open(usize),
    Close(usize),
    Colon,
    OpenMark,
    Comma,
    Cousin,
    Escape,
    Sigil,
    Skip(usize),
}

pub const BUILTIN_NAMES: [&str; 4] = ["default", "dyck", "sexpr", "newick"];

const DEFAULT_WS: [u8; 4] = *b" \t\n\r";

impl Dialect {
    /// Parentheses, square brackets and curly braces, with `{name` as the
    /// typed opener and `$name` as the type sigil.
    pub fn default_dialect() -> Self {
        Dialect {
            name: "default".into(),
            bracket_kinds: vec![
                BracketKind { open: b'(', close: b')' },
                BracketKind { open: b'[', close: b']' },
                BracketKind { open: b'{', close: b'}' },
            ],
            colon: Some(b':'),
            open_mark: Some(b'^'),
            comma: Some(b','),
            cousin: Some(b';'),
            escape: Some(b'\\'),
            typed_open: Some(b'{'),
            type_sigil: Some(b'$'),
            universal_close: b']',
            skip_regions: vec![SkipRegion {
                start: b'"',
                end: b'"',
                escape: Some(b'\\'),
            }],
            ws: DEFAULT_WS.to_vec(),
        }
    }

    /// Square brackets as the only bracket kind; the glyphs of the Dyck word
    /// tables.
    pub fn dyck() -> Self {
        Dialect {
            name: "dyck".into(),
            bracket_kinds: vec![BracketKind { open: b'[', close: b']' }],
            colon: Some(b':'),
            open_mark: Some(b'^'),
            comma: Some(b','),
            cousin: Some(b';'),
            escape: None,
            typed_open: None,
            type_sigil: None,
            universal_close: b']',
            skip_regions: Vec::new(),
            ws: DEFAULT_WS.to_vec(),
        }
    }

    /// Lisp-style text: plain parentheses plus `[]` and `{}`, double-quoted
    /// strings. `;` is the cousin separator, so line comments are not
    /// recognised.
    pub fn sexpr() -> Self {
        Dialect {
            name: "sexpr".into(),
            bracket_kinds: vec![
                BracketKind { open: b'(', close: b')' },
                BracketKind { open: b'[', close: b']' },
                BracketKind { open: b'{', close: b'}' },
            ],
            colon: Some(b':'),
            open_mark: Some(b'^'),
            comma: Some(b','),
            cousin: Some(b';'),
            escape: Some(b'\\'),
            typed_open: None,
            type_sigil: None,
            universal_close: b']',
            skip_regions: vec![SkipRegion {
                start: b'"',
                end: b'"',
                escape: Some(b'\\'),
            }],
            ws: DEFAULT_WS.to_vec(),
        }
    }

    /// Newick trees. Only the parentheses are structure; `,`, `;` and `:`
    /// stay data. Quoted labels and bracketed comments are opaque.
    pub fn newick() -> Self {
        Dialect {
            name: "newick".into(),
            bracket_kinds: vec![BracketKind { open: b'(', close: b')' }],
            colon: None,
            open_mark: Some(b'^'),
            comma: None,
            cousin: None,
            escape: None,
            typed_open: None,
            type_sigil: None,
            universal_close: b')',
            skip_regions: vec![
                SkipRegion {
                    start: b'\'',
                    end: b'\'',
                    escape: Some(b'\''),
                },
                SkipRegion {
                    start: b'[',
                    end: b']',
                    escape: None,
                },
            ],
            ws: DEFAULT_WS.to_vec(),
        }
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "default" => Some(Self::default_dialect()),
            "dyck" => Some(Self::dyck()),
            "sexpr" => Some(Self::sexpr()),
            "newick" => Some(Self::newick()),
            _ => None,
        }
    }

    pub fn plain(&self) -> BracketKind {
        self.bracket_kinds[0]
    }

    pub fn kind_of_close(&self, byte: u8) -> Option<usize> {
        self.bracket_kinds.iter().position(|k| k.close == byte)
    }

    /// Index of the bracket kind closed by the universal glyph.
    pub fn universal_kind(&self) -> usize {
        self.kind_of_close(self.universal_close).unwrap_or(0)
    }

    pub fn typed_kind(&self) -> Option<usize> {
        let open = self.typed_open?;
        self.bracket_kinds.iter().position(|k| k.open == open)
    }

    pub fn validate(&self) -> Result<(), DialectError> {
        if self.bracket_kinds.is_empty() {
            return Err(DialectError::NoBrackets);
        }
        let mut owner: [Option<&'static str>; 128] = [None; 128];
        let mut claim = |byte: u8, what: &'static str| -> Result<(), DialectError> {
            if byte >= 128 {
                return Err(DialectError::NonAscii(byte));
            }
            match owner[byte as usize] {
                Some(prev) => Err(DialectError::Duplicate(byte, prev, what)),
                None => {
                    owner[byte as usize] = Some(what);
                    Ok(())
                }
            }
        };
        for kind in &self.bracket_kinds {
            claim(kind.open, "bracket open")?;
            claim(kind.close, "bracket close")?;
        }
        let singles = [
            (self.colon, "colon"),
            (self.open_mark, "open mark"),
            (self.comma, "comma"),
            (self.cousin, "cousin separator"),
            (self.escape, "escape"),
            (self.type_sigil, "type sigil"),
        ];
        for (byte, what) in singles {
            if let Some(b) = byte {
                claim(b, what)?;
            }
        }
        for region in &self.skip_regions {
            claim(region.start, "skip region start")?;
        }
        if self.kind_of_close(self.universal_close).is_none() {
            return Err(DialectError::UniversalNotClose(self.universal_close));
        }
        if let Some(open) = self.typed_open {
            match self.bracket_kinds.iter().position(|k| k.open == open) {
                Some(k) if k > 0 => {}
                _ => return Err(DialectError::TypedOpenNotBracket(open)),
            }
        }
        for &b in &self.ws {
            if b < 128 && owner[b as usize].is_some() {
                return Err(DialectError::WsReserved(b));
            }
        }
        Ok(())
    }

    pub(crate) fn roles(&self) -> [Role; 256] {
        let mut roles = [Role::Data; 256];
        for &b in &self.ws {
            roles[b as usize] = Role::Ws;
        }
        for (i, region) in self.skip_regions.iter().enumerate() {
            roles[region.start as usize] = Role::Skip(i);
        }
        let singles = [
            (self.colon, Role::Colon),
            (self.open_mark, Role::OpenMark),
            (self.comma, Role::Comma),
            (self.cousin, Role::Cousin),
            (self.escape, Role::Escape),
            (self.type_sigil, Role::Sigil),
        ];
        for (byte, role) in singles {
            if let Some(b) = byte {
                roles[b as usize] = role;
            }
        }
        for (i, kind) in self.bracket_kinds.iter().enumerate() {
            roles[kind.open as usize] = Role::Open(i);
            roles[kind.close as usize] = Role::Close(i);
        }
        // Reserved symbols are ASCII only.
        for role in roles.iter_mut().skip(128) {
            *role = Role::Data;
        }
        roles
    }

    /// Loads a built-in by name, or a `NAME.dialect` file from `search_dir`,
    /// or a dialect file at the literal path.
    pub fn resolve(spec: &str, search_dir: Option<&Path>) -> Result<Self, DialectError> {
        if let Some(d) = Self::builtin(spec) {
            return Ok(d);
        }
        if let Some(dir) = search_dir {
            let candidate = dir.join(format!("{spec}.dialect"));
            if candidate.is_file() {
                return Self::from_file(&candidate);
            }
        }
        let path = Path::new(spec);
        if path.is_file() {
            return Self::from_file(path);
        }
        Err(DialectError::Unknown(spec.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, DialectError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DialectError::Io(format!("{}: {e}", path.display())))?;
        let mut d = Self::from_config(&text)?;
        if d.name.is_empty() {
            d.name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
        }
        Ok(d)
    }

    /// Parses the `key = value` form written by [`Dialect::to_config`].
    /// Unset keys keep the values of the `default` dialect.
    pub fn from_config(text: &str) -> Result<Self, DialectError> {
        let mut d = Self::default_dialect();
        d.name = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let syntax = |msg: String| DialectError::Syntax { line, msg };
            let (key, value) = trimmed
                .split_once('=')
                .ok_or_else(|| syntax("expected `key = value`".into()))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "name" => d.name = value.to_string(),
                "bracket_kinds" | "brackets" => {
                    d.bracket_kinds = split_list(value)
                        .map(|item| {
                            let parts = split_parts(item).map_err(&syntax)?;
                            match parts.as_slice() {
                                [open, close] => Ok(BracketKind {
                                    open: *open,
                                    close: *close,
                                }),
                                _ => Err(syntax(format!("bad bracket pair `{item}`"))),
                            }
                        })
                        .collect::<Result<_, _>>()?;
                }
                "skip_regions" => {
                    d.skip_regions = split_list(value)
                        .map(|item| {
                            let parts = split_parts(item).map_err(&syntax)?;
                            match parts.as_slice() {
                                [start, end] => Ok(SkipRegion {
                                    start: *start,
                                    end: *end,
                                    escape: None,
                                }),
                                [start, end, esc] => Ok(SkipRegion {
                                    start: *start,
                                    end: *end,
                                    escape: Some(*esc),
                                }),
                                _ => Err(syntax(format!("bad skip region `{item}`"))),
                            }
                        })
                        .collect::<Result<_, _>>()?;
                }
                "ws" | "ws_set" => {
                    d.ws = split_list(value)
                        .map(|item| parse_byte(item).map_err(&syntax))
                        .collect::<Result<_, _>>()?;
                }
                "universal_close" => {
                    d.universal_close = parse_byte(value).map_err(&syntax)?;
                }
                _ => {
                    let slot = match key {
                        "colon" | "colon_glyph" => &mut d.colon,
                        "open_mark" | "open_mark_glyph" => &mut d.open_mark,
                        "comma" | "comma_glyph" => &mut d.comma,
                        "cousin" | "cousin_glyph" => &mut d.cousin,
                        "escape" | "escape_glyph" => &mut d.escape,
                        "typed_open" => &mut d.typed_open,
                        "type_sigil" => &mut d.type_sigil,
                        _ => return Err(syntax(format!("unknown key `{key}`"))),
                    };
                    *slot = parse_opt_byte(value).map_err(&syntax)?;
                }
            }
        }
        d.validate()?;
        Ok(d)
    }

    pub fn to_config(&self) -> String {
        let mut out = String::new();
        let opt = |b: Option<u8>| b.map_or_else(|| "none".to_string(), show_byte);
        let _ = writeln!(out, "name = {}", self.name);
        let kinds: Vec<String> = self
            .bracket_kinds
            .iter()
            .map(|k| format!("{}:{}", show_byte(k.open), show_byte(k.close)))
            .collect();
        let _ = writeln!(out, "bracket_kinds = {}", kinds.join(","));
        let _ = writeln!(out, "colon = {}", opt(self.colon));
        let _ = writeln!(out, "open_mark = {}", opt(self.open_mark));
        let _ = writeln!(out, "comma = {}", opt(self.comma));
        let _ = writeln!(out, "cousin = {}", opt(self.cousin));
        let _ = writeln!(out, "escape = {}", opt(self.escape));
        let _ = writeln!(out, "typed_open = {}", opt(self.typed_open));
        let _ = writeln!(out, "type_sigil = {}", opt(self.type_sigil));
        let _ = writeln!(out, "universal_close = {}", show_byte(self.universal_close));
        let regions: Vec<String> = self
            .skip_regions
            .iter()
            .map(|r| {
                let mut s = format!("{}:{}", show_byte(r.start), show_byte(r.end));
                if let Some(e) = r.escape {
                    s.push(':');
                    s.push_str(&show_byte(e));
                }
                s
            })
            .collect();
        let _ = writeln!(out, "skip_regions = {}", regions.join(","));
        let ws: Vec<String> = self.ws.iter().map(|&b| show_byte(b)).collect();
        let _ = writeln!(out, "ws = {}", ws.join(","));
        out
    }
}

impl Default for Dialect {
    fn default() -> Self {
        Self::default_dialect()
    }
}

/// Comma-separated items; `none` is the empty list.
fn split_list(value: &str) -> impl Iterator<Item = &str> {
    let value = if value == "none" { "" } else { value };
    let mut items = Vec::new();
    let bytes = value.as_bytes();
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b',' => {
                items.push(&value[start..i]);
                start = i + 1;
                i += 1;
            }
            _ => i += 1,
        }
    }
    items.push(&value[start..]);
    items.into_iter().map(str::trim).filter(|s| !s.is_empty())
}

/// Splits `a:b[:c]` into bytes. A lone `:` is also accepted as a part, so
/// `:::)` style ambiguities resolve left to right over single-byte parts.
fn split_parts(item: &str) -> Result<Vec<u8>, String> {
    let bytes = item.as_bytes();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let end = part_end(bytes, i);
        parts.push(parse_byte(&item[i..end])?);
        i = end;
        if i < bytes.len() {
            if bytes[i] != b':' {
                return Err(format!("expected `:` in `{item}`"));
            }
            i += 1;
        }
    }
    Ok(parts)
}

fn part_end(bytes: &[u8], start: usize) -> usize {
    if bytes[start] == b'\\' {
        return (start + 2).min(bytes.len());
    }
    if bytes[start..].starts_with(b"0x") && bytes.len() >= start + 4 {
        return start + 4;
    }
    start + 1
}

fn parse_opt_byte(value: &str) -> Result<Option<u8>, String> {
    if value == "none" {
        Ok(None)
    } else {
        parse_byte(value).map(Some)
    }
}

fn parse_byte(value: &str) -> Result<u8, String> {
    match value.as_bytes() {
        [b] => Ok(*b),
        [b'\\', b's'] => Ok(b' '),
        [b'\\', b't'] => Ok(b'\t'),
        [b'\\', b'n'] => Ok(b'\n'),
        [b'\\', b'r'] => Ok(b'\r'),
        [b'\\', b] => Ok(*b),
        [b'0', b'x', ..] if value.len() == 4 => u8::from_str_radix(&value[2..], 16)
            .map_err(|_| format!("bad hex byte `{value}`")),
        _ => Err(format!("expected a single byte, found `{value}`")),
    }
}

fn show_byte(b: u8) -> String {
    match b {
        b' ' => "\\s".into(),
        b'\t' => "\\t".into(),
        b'\n' => "\\n".into(),
        b'\r' => "\\r".into(),
        b'\\' => "\\\\".into(),
        b',' => "\\,".into(),
        b':' => "\\:".into(),
        0x21..=0x7e => char::from(b).to_string(),
        _ => format!("0x{b:02x}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_valid() {
        for name in BUILTIN_NAMES {
            let d = Dialect::builtin(name).unwrap();
            d.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(d.name, name);
        }
    }

    #[test]
    fn config_round_trip() {
        for name in BUILTIN_NAMES {
            let d = Dialect::builtin(name).unwrap();
            let text = d.to_config();
            let back = Dialect::from_config(&text).unwrap();
            assert_eq!(back, d, "{text}");
        }
    }

    #[test]
    fn config_overrides_defaults() {
        let d = Dialect::from_config(
            "# custom\nname = mine\nbracket_kinds = <:>\ncolon = none\nuniversal_close = >\nskip_regions =\ntyped_open = none\n",
        )
        .unwrap();
        assert_eq!(d.bracket_kinds, vec![BracketKind { open: b'<', close: b'>' }]);
        assert_eq!(d.colon, None);
        assert_eq!(d.comma, Some(b','));
        assert!(d.skip_regions.is_empty());
    }

    #[test]
    fn rejects_duplicate_glyphs() {
        let mut d = Dialect::dyck();
        d.colon = Some(b',');
        assert!(matches!(d.validate(), Err(DialectError::Duplicate(b',', _, _))));
    }

    #[test]
    fn rejects_non_ascii() {
        let mut d = Dialect::dyck();
        d.open_mark = Some(0xC2);
        assert_eq!(d.validate(), Err(DialectError::NonAscii(0xC2)));
    }

    #[test]
    fn universal_close_must_close_something() {
        let mut d = Dialect::sexpr();
        d.universal_close = b'>';
        assert_eq!(d.validate(), Err(DialectError::UniversalNotClose(b'>')));
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = Dialect::from_config("name = x\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, DialectError::Syntax { line: 2, .. }));
    }
}
