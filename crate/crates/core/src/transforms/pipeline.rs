use std::fmt;
use std::str::FromStr;

use super::{
    colon_collapse_with, colon_expand, open_collapse_with, open_expand, reject, restore_typed_close,
    sep_collapse, sep_expand, universal_close,
};
use crate::error::{ProfileError, Result, StructError, StructErrorKind};
use crate::token::{TokenKind, TokenStream};

/// How depth-1 separators and commas are read.
///
/// `Table` writes a depth-1 separator as the comma glyph. `Prose` keeps the
/// comma for a null child between two data items and writes depth-1
/// separators with the cousin glyph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Style {
    #[default]
    Table,
    Prose,
}

impl FromStr for Style {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, ProfileError> {
        match s {
            "table" => Ok(Style::Table),
            "prose" => Ok(Style::Prose),
            other => Err(ProfileError::UnknownStyle(other.to_string())),
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Style::Table => "table",
            Style::Prose => "prose",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Sep,
    Colon,
    Opening,
    Ucb,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Sep, Op::Colon, Op::Opening, Op::Ucb];

    pub fn name(self) -> &'static str {
        match self {
            Op::Sep => "sep",
            Op::Colon => "colon",
            Op::Opening => "opening",
            Op::Ucb => "ucb",
        }
    }
}

impl FromStr for Op {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, ProfileError> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| ProfileError::UnknownOp(s.to_string()))
    }
}

/// The set of enabled rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct OpSet {
    pub sep: bool,
    pub colon: bool,
    pub opening: bool,
    pub ucb: bool,
}

impl OpSet {
    pub const NONE: OpSet = OpSet {
        sep: false,
        colon: false,
        opening: false,
        ucb: false,
    };

    pub fn contains(&self, op: Op) -> bool {
        match op {
            Op::Sep => self.sep,
            Op::Colon => self.colon,
            Op::Opening => self.opening,
            Op::Ucb => self.ucb,
        }
    }

    pub fn insert(&mut self, op: Op) {
        match op {
            Op::Sep => self.sep = true,
            Op::Colon => self.colon = true,
            Op::Opening => self.opening = true,
            Op::Ucb => self.ucb = true,
        }
    }

    pub fn with(mut self, op: Op) -> Self {
        self.insert(op);
        self
    }

    /// All 16 subsets, including the invalid ones with both colon and
    /// opening.
    pub fn all_subsets() -> impl Iterator<Item = OpSet> {
        (0u8..16).map(|bits| {
            let mut set = OpSet::NONE;
            for (i, op) in Op::ALL.into_iter().enumerate() {
                if bits & (1 << i) != 0 {
                    set.insert(op);
                }
            }
            set
        })
    }
}

/// Parses a comma-separated list such as `sep,colon`. `none` and the empty
/// string give the empty set; `both` is shorthand for `sep,colon`.
impl FromStr for OpSet {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, ProfileError> {
        let mut set = OpSet::NONE;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "none" => {}
                "both" => set = set.with(Op::Sep).with(Op::Colon),
                name => set.insert(name.parse()?),
            }
        }
        Ok(set)
    }
}

impl fmt::Display for OpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Op::ALL
            .into_iter()
            .filter(|op| self.contains(*op))
            .map(Op::name)
            .collect();
        if names.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    pub style: Style,
    pub enabled: OpSet,
    pub fold_depth: u32,
    /// Emit colons only for childless last children.
    pub colon_only_terminal: bool,
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            style: Style::Table,
            enabled: OpSet::NONE,
            fold_depth: 1,
            colon_only_terminal: false,
        }
    }
}

impl Profile {
    pub fn new(enabled: OpSet) -> Self {
        Profile {
            enabled,
            ..Profile::default()
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.enabled.colon && self.enabled.opening {
            return Err(ProfileError::ColonWithOpening);
        }
        if self.fold_depth == 0 {
            return Err(ProfileError::ZeroFoldDepth);
        }
        Ok(())
    }
}

/// Separators first, then colons over the result.
pub fn both_collapse(stream: &TokenStream, profile: &Profile) -> Result<TokenStream, StructError> {
    let separated = sep_collapse(stream, profile)?;
    colon_collapse_with(&separated, profile.colon_only_terminal)
}

/// Colons must be expanded before separators: a separator read inside a
/// pending colon frame would close the wrong node.
pub fn both_expand(stream: &TokenStream, profile: &Profile) -> Result<TokenStream, StructError> {
    let expanded = colon_expand(stream)?;
    sep_expand(&expanded, profile)
}

pub fn pipeline(stream: &TokenStream, profile: &Profile) -> Result<TokenStream> {
    profile.validate()?;
    let ops = profile.enabled;
    let tokens = &stream.tokens;
    if ops.sep {
        reject(
            tokens,
            |k| matches!(k, TokenKind::Separator { .. } | TokenKind::Comma),
            StructErrorKind::NotationPresent("separators or commas"),
        )?;
    }
    if ops.colon {
        reject(tokens, |k| *k == TokenKind::Colon, StructErrorKind::NotationPresent("colons"))?;
    }
    if ops.opening {
        reject(
            tokens,
            |k| *k == TokenKind::OpenMark,
            StructErrorKind::NotationPresent("open marks"),
        )?;
    }

    let mut cur = stream.clone();
    if ops.sep {
        cur = sep_collapse(&cur, profile)?;
    }
    if ops.colon {
        cur = colon_collapse_with(&cur, profile.colon_only_terminal)?;
    }
    if ops.opening {
        cur = open_collapse_with(&cur, profile.colon_only_terminal)?;
    }
    if ops.ucb {
        cur = universal_close(&cur)?;
    }
    Ok(cur)
}

pub fn pipeline_inverse(stream: &TokenStream, profile: &Profile) -> Result<TokenStream> {
    profile.validate()?;
    let ops = profile.enabled;
    let mut cur = stream.clone();
    if ops.ucb {
        cur = restore_typed_close(&cur)?;
    }
    if ops.opening {
        cur = open_expand(&cur)?;
    }
    if ops.colon {
        cur = colon_expand(&cur)?;
    }
    if ops.sep {
        cur = sep_expand(&cur, profile)?;
    }
    Ok(cur)
}
