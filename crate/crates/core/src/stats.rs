use std::fmt;

use crate::token::{TokenKind, TokenStream};
use crate::tree::{parse_with, ParseOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TokenCounts {
    pub opens: usize,
    pub closes: usize,
    pub colons: usize,
    pub open_marks: usize,
    pub separators: usize,
    pub commas: usize,
    pub typed_opens: usize,
    pub sigils: usize,
    pub data: usize,
    pub ws: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub byte_count: usize,
    pub counts: TokenCounts,
    /// Opens plus closes, typed openers included.
    pub paren_count: usize,
    /// `None` when the stream does not parse.
    pub max_depth: Option<usize>,
    pub depth_histogram: Option<Vec<usize>>,
    /// Bytes in structural tokens over all bytes; 0 for empty input.
    pub structural_fraction: f64,
}

pub fn stats(stream: &TokenStream) -> StatsReport {
    stats_with(stream, ParseOptions::default())
}

pub fn stats_with(stream: &TokenStream, opts: ParseOptions) -> StatsReport {
    let mut counts = TokenCounts::default();
    let mut structural_bytes = 0;
    let mut byte_count = 0;
    for token in &stream.tokens {
        let len = token.kind.lexeme_len();
        byte_count += len;
        if token.kind.is_structural() {
            structural_bytes += len;
        }
        let slot = match token.kind {
            TokenKind::Open(_) => &mut counts.opens,
            TokenKind::Close(_) => &mut counts.closes,
            TokenKind::Colon => &mut counts.colons,
            TokenKind::OpenMark => &mut counts.open_marks,
            TokenKind::Separator { .. } => &mut counts.separators,
            TokenKind::Comma => &mut counts.commas,
            TokenKind::TypedOpen { .. } => &mut counts.typed_opens,
            TokenKind::TypeSigil(_) => &mut counts.sigils,
            TokenKind::Data(_) => &mut counts.data,
            TokenKind::Ws(_) => &mut counts.ws,
        };
        *slot += 1;
    }
    let tree = parse_with(stream, opts).ok();
    StatsReport {
        byte_count,
        counts,
        paren_count: counts.opens + counts.typed_opens + counts.closes,
        max_depth: tree.as_ref().map(|t| t.max_depth()),
        depth_histogram: tree.as_ref().map(|t| t.depth_histogram()),
        structural_fraction: if byte_count == 0 {
            0.0
        } else {
            structural_bytes as f64 / byte_count as f64
        },
    }
}

impl StatsReport {
    /// `key=value` lines, one field per line.
    pub fn to_key_value(&self) -> String {
        let c = &self.counts;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        put("byte_count", self.byte_count.to_string());
        put("paren_count", self.paren_count.to_string());
        put("opens", (c.opens + c.typed_opens).to_string());
        put("closes", c.closes.to_string());
        put("colons", c.colons.to_string());
        put("open_marks", c.open_marks.to_string());
        put("separators", c.separators.to_string());
        put("commas", c.commas.to_string());
        put("sigils", c.sigils.to_string());
        put("data_tokens", c.data.to_string());
        put("ws_tokens", c.ws.to_string());
        put(
            "max_depth",
            self.max_depth.map_or_else(|| "absent".into(), |d| d.to_string()),
        );
        put(
            "depth_histogram",
            match &self.depth_histogram {
                Some(h) => h.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
                None => "absent".into(),
            },
        );
        put("structural_fraction", format!("{:.6}", self.structural_fraction));
        out
    }
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_key_value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialect::Dialect;
    use crate::token::tokenize;

    #[test]
    fn small_example() {
        let s = tokenize(b"((a))", &Dialect::sexpr()).unwrap();
        let r = stats(&s);
        assert_eq!(r.paren_count, 4);
        assert_eq!(r.max_depth, Some(2));
        assert_eq!(r.byte_count, 5);
        assert_eq!(r.depth_histogram.as_deref(), Some(&[1, 1][..]));
        assert!((r.structural_fraction - 0.8).abs() < 1e-12);
    }

    #[test]
    fn unbalanced_has_no_depth() {
        let s = tokenize(b"((a)", &Dialect::sexpr()).unwrap();
        let r = stats(&s);
        assert_eq!(r.max_depth, None);
        assert_eq!(r.paren_count, 3);
        assert!(r.to_key_value().contains("max_depth=absent\n"));
    }

    #[test]
    fn empty_input() {
        let s = tokenize(b"", &Dialect::sexpr()).unwrap();
        let r = stats(&s);
        assert_eq!(r.byte_count, 0);
        assert_eq!(r.max_depth, Some(0));
        assert_eq!(r.structural_fraction, 0.0);
    }
}
