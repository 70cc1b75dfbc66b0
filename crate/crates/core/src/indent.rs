//! Zero-width indentation controls.
//!
//! Four control bytes replace leading spaces. PUSH saves the current level
//! and indents one step, BOOST indents one step without saving, POP returns
//! to the last saved level (undoing any boosts since), and FWD moves to the
//! current indentation. BOOST relates to PUSH the way a colon relates to an
//! open bracket: the enclosing POP reverts it.

use thiserror::Error;

use crate::error::Pos;
use crate::tree::{Item, Node, NodeKind, StructTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndentConfig {
    pub unit: usize,
    pub push: u8,
    pub pop: u8,
    pub boost: u8,
    pub forward: u8,
    /// Reject indentation that is not a whole number of units, and tabs in
    /// leading whitespace.
    pub strict: bool,
}

impl Default for IndentConfig {
    fn default() -> Self {
        IndentConfig {
            unit: 4,
            push: 0x1C,
            pop: 0x1D,
            boost: 0x1E,
            forward: 0x1F,
            strict: false,
        }
    }
}

impl IndentConfig {
    pub fn with_unit(unit: usize) -> Self {
        IndentConfig {
            unit,
            ..IndentConfig::default()
        }
    }

    pub fn controls(&self) -> [u8; 4] {
        [self.push, self.pop, self.boost, self.forward]
    }

    fn is_control(&self, b: u8) -> bool {
        self.controls().contains(&b)
    }

    pub fn validate(&self) -> Result<(), IndentError> {
        if self.unit == 0 {
            return Err(IndentError::InvalidConfig("unit must be positive".into()));
        }
        let c = self.controls();
        for (i, &b) in c.iter().enumerate() {
            if b >= 0x20 || matches!(b, b'\n' | b'\r' | b'\t') {
                return Err(IndentError::InvalidConfig(format!(
                    "control byte {b:#04x} must be below 0x20 and not LF, CR or TAB"
                )));
            }
            if c[..i].contains(&b) {
                return Err(IndentError::InvalidConfig(format!("control byte {b:#04x} used twice")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndentError {
    #[error("line {line}: {spaces} leading spaces is not a multiple of {unit}")]
    NonMultipleIndent { line: usize, spaces: usize, unit: usize },
    #[error("line {line}: tab in leading whitespace")]
    TabInIndent { line: usize },
    #[error("control byte {byte:#04x} in text at {pos}")]
    ControlByteInText { pos: Pos, byte: u8 },
    #[error("pop underflow at {0}")]
    PopUnderflow(Pos),
    #[error("invalid indent configuration: {0}")]
    InvalidConfig(String),
}

impl IndentError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            IndentError::NonMultipleIndent { line, .. } | IndentError::TabInIndent { line } => Some(Pos {
                offset: 0,
                line: *line,
                col: 1,
            }),
            IndentError::ControlByteInText { pos, .. } | IndentError::PopUnderflow(pos) => Some(*pos),
            IndentError::InvalidConfig(_) => None,
        }
    }
}

/// Decoder state: the current level and the levels saved by PUSH.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndentState {
    pub level: usize,
    pub stack: Vec<usize>,
}

impl IndentState {
    pub fn push(&mut self) {
        self.stack.push(self.level);
        self.level += 1;
    }

    pub fn boost(&mut self) {
        self.level += 1;
    }

    pub fn pop(&mut self) -> Option<()> {
        self.level = self.stack.pop()?;
        Some(())
    }
}

/// Replaces leading spaces with controls. Each non-empty line becomes the
/// PUSH or POP bytes needed to reach its level, then FWD, then the line's
/// text. Empty lines stay empty. Outside strict mode, spaces beyond the
/// last whole unit are kept after FWD.
pub fn encode_indent(text: &[u8], cfg: &IndentConfig) -> Result<Vec<u8>, IndentError> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(text.len());
    let mut level = 0usize;
    let mut pos = Pos::START;
    for (n, line) in text.split(|&b| b == b'\n').enumerate() {
        if n > 0 {
            out.push(b'\n');
            pos.advance(b"\n");
        }
        if let Some(i) = line.iter().position(|&b| cfg.is_control(b)) {
            let mut at = pos;
            at.advance(&line[..i]);
            return Err(IndentError::ControlByteInText { pos: at, byte: line[i] });
        }
        let line_no = n + 1;
        pos.advance(line);
        if line.is_empty() {
            continue;
        }
        let spaces = line.iter().take_while(|&&b| b == b' ').count();
        if cfg.strict {
            if spaces % cfg.unit != 0 {
                return Err(IndentError::NonMultipleIndent {
                    line: line_no,
                    spaces,
                    unit: cfg.unit,
                });
            }
            if line.get(spaces) == Some(&b'\t') {
                return Err(IndentError::TabInIndent { line: line_no });
            }
        }
        let target = spaces / cfg.unit;
        let step = if target > level { cfg.push } else { cfg.pop };
        out.extend(std::iter::repeat(step).take(target.abs_diff(level)));
        level = target;
        out.push(cfg.forward);
        out.extend_from_slice(&line[target * cfg.unit..]);
    }
    Ok(out)
}

/// Materializes indentation: every FWD becomes `level * unit` spaces,
/// wherever it sits in a line. The other controls take no width.
pub fn decode_indent(coded: &[u8], cfg: &IndentConfig) -> Result<Vec<u8>, IndentError> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(coded.len() + coded.len() / 2);
    let mut state = IndentState::default();
    let mut pos = Pos::START;
    for &b in coded {
        if b == cfg.push {
            state.push();
        } else if b == cfg.pop {
            state.pop().ok_or(IndentError::PopUnderflow(pos))?;
        } else if b == cfg.boost {
            state.boost();
        } else if b == cfg.forward {
            out.resize(out.len() + state.level * cfg.unit, b' ');
        } else {
            out.push(b);
        }
        pos.advance(&[b]);
    }
    Ok(out)
}

/// Writes a tree as a control-coded outline, one line per stretch of data
/// between child nodes. Children sit one level deeper than their parent
/// inside PUSH and POP. A colon child uses BOOST instead when an enclosing
/// frame exists to revert it; top-level nodes have no frame of their own.
pub fn render_outline(tree: &StructTree, cfg: &IndentConfig) -> Vec<u8> {
    let mut out = Vec::new();
    Outline { cfg, out: &mut out }.body(&tree.root, false);
    out
}

struct Outline<'a> {
    cfg: &'a IndentConfig,
    out: &'a mut Vec<u8>,
}

impl Outline<'_> {
    fn line(&mut self, text: &[u8]) {
        self.out.push(self.cfg.forward);
        self.out.extend_from_slice(text);
        self.out.push(b'\n');
    }

    fn body(&mut self, node: &Node, in_frame: bool) {
        let mut line: Vec<u8> = Vec::new();
        if let NodeKind::Typed { name, .. } = &node.kind {
            line.extend_from_slice(name);
        }
        let has_text = !line.is_empty() || node.items.iter().any(|i| matches!(i, Item::Data(_) | Item::Sigil(_)));
        if node.kind != NodeKind::Root && !has_text {
            self.line(b"");
        }
        for item in &node.items {
            match item {
                Item::Data(b) | Item::Sigil(b) => line.extend_from_slice(b),
                Item::Ws(_) => {
                    if !line.is_empty() && line.last() != Some(&b' ') {
                        line.push(b' ');
                    }
                }
                Item::Node(child) => {
                    self.flush(&mut line);
                    if node.kind == NodeKind::Root {
                        self.body(child, false);
                    } else if child.kind == NodeKind::Colon && in_frame {
                        self.out.push(self.cfg.boost);
                        self.body(child, true);
                    } else {
                        self.out.push(self.cfg.push);
                        self.body(child, true);
                        self.out.push(self.cfg.pop);
                    }
                }
            }
        }
        self.flush(&mut line);
    }

    fn flush(&mut self, line: &mut Vec<u8>) {
        while line.last() == Some(&b' ') {
            line.pop();
        }
        if !line.is_empty() {
            self.line(line);
            line.clear();
        }
    }
}
