//! Reversible rewrites between bracket notations for interleaved
//! hierarchical text.
//!
//! Text is tokenized under a [`Dialect`] into a [`TokenStream`] whose
//! rendering reproduces the input byte for byte. The [`transforms`] rewrite
//! streams between the two-symbol bracket form and shorter forms (colons,
//! open marks, separators, a universal close), each with an exact inverse.
//! [`escapes`] and [`indent`] are byte codecs for repeated quantities and
//! zero-width indentation.
//!
//! ```
//! use strux_core::{tokenize, transforms, Dialect};
//!
//! let d = Dialect::sexpr();
//! let s = tokenize(b"(a (b (c)))", &d).unwrap();
//! let short = transforms::colon_collapse(&s).unwrap();
//! assert_eq!(short.render(), b"(a :b :c)");
//! assert_eq!(transforms::colon_expand(&short).unwrap(), s);
//! ```

pub mod adapters;
pub mod dialect;
pub mod error;
pub mod escapes;
pub mod indent;
pub mod stats;
pub mod token;
pub mod transforms;
pub mod tree;

pub use dialect::{BracketKind, Dialect, DialectError, SkipRegion};
pub use error::{Error, Pos, ProfileError, Result, StructError, StructErrorKind, TokenizeError};
pub use stats::{stats, StatsReport};
pub use token::{render, tokenize, Token, TokenKind, TokenStream};
pub use transforms::{Op, OpSet, Profile, Style};
pub use tree::{parse, parse_with, validate, CommaMode, Item, Node, NodeKind, ParseOptions, StructTree};
