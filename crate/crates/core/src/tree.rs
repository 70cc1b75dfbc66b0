//! Parsing token streams into trees, and balance validation.
//!
//! Bracket matching rules:
//! - a close pops every pending colon frame plus one bracket frame;
//! - a separator of depth `d` pops `d` frames and re-opens frames of the same
//!   kinds, so `(p:q;r)` parses like `(p(q)(r))`;
//! - a comma is an empty plain child, or a depth-1 separator when the
//!   profile says commas separate;
//! - streams with open marks are parsed through their mirror image, where
//!   marks become colons.

use crate::dialect::Dialect;
use crate::error::{Pos, StructError, StructErrorKind};
use crate::token::{Token, TokenKind, TokenStream};
use crate::transforms::mirror::mirror_tokens;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Root,
    Bracket(usize),
    Typed { kind: usize, name: Vec<u8> },
    /// Opened by a colon; closes with its enclosing node.
    Colon,
    /// Closed by an open mark; opens with its enclosing node.
    Mark,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    Node(Node),
    Data(Vec<u8>),
    Ws(Vec<u8>),
    Sigil(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub kind: NodeKind,
    pub items: Vec<Item>,
}

impl Node {
    pub fn new(kind: NodeKind) -> Self {
        Node {
            kind,
            items: Vec::new(),
        }
    }

    pub fn children(&self) -> impl Iterator<Item = &Node> {
        self.items.iter().filter_map(|item| match item {
            Item::Node(n) => Some(n),
            _ => None,
        })
    }

    /// Nesting depth below this node; a leaf node has height 0.
    pub fn height(&self) -> usize {
        self.children().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn count_nodes(&self) -> usize {
        self.children().map(|c| 1 + c.count_nodes()).sum()
    }

    /// A copy without whitespace items in which colon- and mark-opened
    /// nodes are plain brackets: the shape that every reversible rewrite
    /// preserves.
    pub fn normalized(&self) -> Node {
        let kind = match &self.kind {
            NodeKind::Colon | NodeKind::Mark => NodeKind::Bracket(0),
            other => other.clone(),
        };
        let items = self
            .items
            .iter()
            .filter_map(|item| match item {
                Item::Ws(_) => None,
                Item::Node(n) => Some(Item::Node(n.normalized())),
                other => Some(other.clone()),
            })
            .collect();
        Node { kind, items }
    }

    fn mirrored(self) -> Node {
        let kind = match self.kind {
            NodeKind::Colon => NodeKind::Mark,
            NodeKind::Mark => NodeKind::Colon,
            other => other,
        };
        let items = self
            .items
            .into_iter()
            .rev()
            .map(|item| match item {
                Item::Node(n) => Item::Node(n.mirrored()),
                Item::Data(mut b) => {
                    b.reverse();
                    Item::Data(b)
                }
                Item::Ws(mut b) => {
                    b.reverse();
                    Item::Ws(b)
                }
                other => other,
            })
            .collect();
        Node { kind, items }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructTree {
    pub root: Node,
    pub dialect: Dialect,
}

impl StructTree {
    /// Deepest bracket nesting; 0 for a tree without nodes.
    pub fn max_depth(&self) -> usize {
        if self.root.children().next().is_none() {
            0
        } else {
            self.root.height()
        }
    }

    /// Nodes per depth; index 0 holds the top-level node count.
    pub fn depth_histogram(&self) -> Vec<usize> {
        fn walk(node: &Node, depth: usize, hist: &mut Vec<usize>) {
            for child in node.children() {
                if hist.len() <= depth {
                    hist.resize(depth + 1, 0);
                }
                hist[depth] += 1;
                walk(child, depth + 1, hist);
            }
        }
        let mut hist = Vec::new();
        walk(&self.root, 0, &mut hist);
        hist
    }

    pub fn is_isomorphic(&self, other: &StructTree) -> bool {
        self.root.normalized() == other.root.normalized()
    }

    /// Renders the tree in two-symbol form: every node as an explicit open
    /// and close of its own kind (colon and mark nodes as plain brackets).
    pub fn to_stream(&self) -> TokenStream {
        fn emit(node: &Node, out: &mut Vec<TokenKind>) {
            for item in &node.items {
                match item {
                    Item::Data(b) => out.push(TokenKind::Data(b.clone())),
                    Item::Ws(b) => out.push(TokenKind::Ws(b.clone())),
                    Item::Sigil(b) => out.push(TokenKind::TypeSigil(b.clone())),
                    Item::Node(child) => {
                        let (open, close) = match &child.kind {
                            NodeKind::Bracket(k) => (TokenKind::Open(*k), *k),
                            NodeKind::Typed { kind, name } => (
                                TokenKind::TypedOpen {
                                    kind: *kind,
                                    name: name.clone(),
                                },
                                *kind,
                            ),
                            _ => (TokenKind::Open(0), 0),
                        };
                        out.push(open);
                        emit(child, out);
                        out.push(TokenKind::Close(close));
                    }
                }
            }
        }
        let mut kinds = Vec::new();
        emit(&self.root, &mut kinds);
        TokenStream::from_kinds(self.dialect.clone(), kinds)
    }
}

/// How commas are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CommaMode {
    /// An empty plain child: `a,b` is `a()b`.
    #[default]
    NullChild,
    /// A depth-1 separator: `[a,b]` is `[a][b]`.
    Separator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParseOptions {
    pub comma: CommaMode,
    /// Accept the universal close glyph as the close of any bracket kind.
    pub universal_close: bool,
}

pub fn parse(stream: &TokenStream) -> Result<StructTree, StructError> {
    parse_with(stream, ParseOptions::default())
}

pub fn parse_with(stream: &TokenStream, opts: ParseOptions) -> Result<StructTree, StructError> {
    let (root, mut errors) = run(stream, opts);
    if errors.is_empty() {
        Ok(StructTree {
            root,
            dialect: stream.dialect.clone(),
        })
    } else {
        errors.sort_by_key(|e| e.pos.offset);
        Err(errors.swap_remove(0))
    }
}

/// Every balance and nesting violation, ordered by position.
pub fn validate(stream: &TokenStream) -> Vec<StructError> {
    validate_with(stream, ParseOptions::default())
}

pub fn validate_with(stream: &TokenStream, opts: ParseOptions) -> Vec<StructError> {
    let (_, mut errors) = run(stream, opts);
    errors.sort_by_key(|e| e.pos.offset);
    errors
}

fn run(stream: &TokenStream, opts: ParseOptions) -> (Node, Vec<StructError>) {
    let has_mark = stream.kinds().any(|k| *k == TokenKind::OpenMark);
    if !has_mark {
        return Matcher::new(&stream.dialect, opts).run(&stream.tokens);
    }
    if let Some(colon) = stream.tokens.iter().find(|t| t.kind == TokenKind::Colon) {
        let err = StructError::new(
            StructErrorKind::Unsupported("colons and open marks in one stream"),
            colon.pos,
        );
        return (Node::new(NodeKind::Root), vec![err]);
    }
    let mirrored = match mirror_tokens(&stream.tokens) {
        Ok(m) => m,
        Err(e) => return (Node::new(NodeKind::Root), vec![e]),
    };
    let (root, errors) = Matcher::new(&stream.dialect, opts).run(&mirrored);
    let errors = errors.into_iter().map(unmirror_error).collect();
    (root.mirrored(), errors)
}

pub(crate) fn unmirror_error(mut e: StructError) -> StructError {
    e.kind = match e.kind {
        StructErrorKind::UnbalancedClose => StructErrorKind::UnclosedOpen,
        StructErrorKind::UnclosedOpen => StructErrorKind::UnbalancedClose,
        StructErrorKind::ColonAtTopLevel => StructErrorKind::OpenMarkAtTopLevel,
        StructErrorKind::OpenMarkAtTopLevel => StructErrorKind::ColonAtTopLevel,
        other => other,
    };
    e
}

struct Frame {
    node: Node,
    pos: Pos,
}

struct Matcher<'a> {
    dialect: &'a Dialect,
    opts: ParseOptions,
    stack: Vec<Frame>,
    errors: Vec<StructError>,
}

impl<'a> Matcher<'a> {
    fn new(dialect: &'a Dialect, opts: ParseOptions) -> Self {
        Matcher {
            dialect,
            opts,
            stack: vec![Frame {
                node: Node::new(NodeKind::Root),
                pos: Pos::START,
            }],
            errors: Vec::new(),
        }
    }

    fn top(&mut self) -> &mut Node {
        &mut self.stack.last_mut().expect("root frame").node
    }

    fn push(&mut self, kind: NodeKind, pos: Pos) {
        self.stack.push(Frame {
            node: Node::new(kind),
            pos,
        });
    }

    fn pop_into_parent(&mut self) {
        let frame = self.stack.pop().expect("non-root frame");
        self.top().items.push(Item::Node(frame.node));
    }

    fn has_bracket_frame(&self) -> bool {
        self.stack
            .iter()
            .skip(1)
            .any(|f| !matches!(f.node.kind, NodeKind::Colon))
    }

    fn error(&mut self, kind: StructErrorKind, pos: Pos) {
        self.errors.push(StructError::new(kind, pos));
    }

    fn run(mut self, tokens: &[Token]) -> (Node, Vec<StructError>) {
        for token in tokens {
            self.step(token);
        }
        self.finish()
    }

    fn step(&mut self, token: &Token) {
        let pos = token.pos;
        match &token.kind {
            TokenKind::Open(k) => self.push(NodeKind::Bracket(*k), pos),
            TokenKind::TypedOpen { kind, name } => self.push(
                NodeKind::Typed {
                    kind: *kind,
                    name: name.clone(),
                },
                pos,
            ),
            TokenKind::Colon => {
                if self.has_bracket_frame() {
                    self.push(NodeKind::Colon, pos);
                } else {
                    self.error(StructErrorKind::ColonAtTopLevel, pos);
                }
            }
            TokenKind::Close(k) => self.close(*k, pos),
            TokenKind::Separator { depth, .. } => self.separator(*depth, pos),
            TokenKind::Comma => match self.opts.comma {
                CommaMode::NullChild => self
                    .top()
                    .items
                    .push(Item::Node(Node::new(NodeKind::Bracket(0)))),
                CommaMode::Separator => self.separator(1, pos),
            },
            // Only reachable when a stream mixes marks into a mirrored parse.
            TokenKind::OpenMark => self.error(
                StructErrorKind::Unsupported("colons and open marks in one stream"),
                pos,
            ),
            TokenKind::TypeSigil(name) => self.top().items.push(Item::Sigil(name.clone())),
            TokenKind::Data(b) => self.top().items.push(Item::Data(b.clone())),
            TokenKind::Ws(b) => self.top().items.push(Item::Ws(b.clone())),
        }
    }

    fn close(&mut self, k: usize, pos: Pos) {
        if !self.has_bracket_frame() {
            self.error(StructErrorKind::UnbalancedClose, pos);
            return;
        }
        while matches!(self.top().kind, NodeKind::Colon) {
            self.pop_into_parent();
        }
        let open_kind = match &self.top().kind {
            NodeKind::Bracket(kk) => *kk,
            NodeKind::Typed { kind, .. } => *kind,
            _ => unreachable!("bracket frame present"),
        };
        let found = self.dialect.bracket_kinds[k].close;
        let universal = self.opts.universal_close && found == self.dialect.universal_close;
        if open_kind != k && !universal {
            let expected = self.dialect.bracket_kinds[open_kind].close;
            self.error(StructErrorKind::MismatchedCloseKind { expected, found }, pos);
            // Interleaved pairs such as `[x(y]z)` count once: the frame
            // below takes over the kind the top frame was waiting for.
            let below = self.stack.len() - 2;
            if below > 0 && self.stack[below].node.kind == NodeKind::Bracket(k) {
                self.stack[below].node.kind = NodeKind::Bracket(open_kind);
            }
        }
        self.pop_into_parent();
    }

    fn separator(&mut self, depth: u32, pos: Pos) {
        let available = self.stack.len() - 1;
        if (depth as usize) > available {
            self.error(StructErrorKind::SeparatorUnderflow { depth }, pos);
            return;
        }
        let mut reopened = Vec::with_capacity(depth as usize);
        for _ in 0..depth {
            let kind = self.top().kind.clone();
            match &kind {
                NodeKind::Bracket(0) | NodeKind::Colon | NodeKind::Mark => {}
                NodeKind::Bracket(k) | NodeKind::Typed { kind: k, .. } => {
                    let plain = self.dialect.plain().close;
                    let expected = self.dialect.bracket_kinds[*k].close;
                    self.error(
                        StructErrorKind::MismatchedCloseKind {
                            expected,
                            found: plain,
                        },
                        pos,
                    );
                }
                NodeKind::Root => unreachable!("depth checked"),
            }
            self.pop_into_parent();
            reopened.push(reopen_kind(kind));
        }
        for kind in reopened.into_iter().rev() {
            self.push(kind, pos);
        }
    }

    fn finish(mut self) -> (Node, Vec<StructError>) {
        while self.stack.len() > 1 {
            let frame = self.stack.last().expect("frame");
            if !matches!(frame.node.kind, NodeKind::Colon) {
                let pos = frame.pos;
                self.error(StructErrorKind::UnclosedOpen, pos);
            } else if !self.stack[..self.stack.len() - 1]
                .iter()
                .skip(1)
                .any(|f| !matches!(f.node.kind, NodeKind::Colon))
            {
                let pos = frame.pos;
                self.error(StructErrorKind::ColonAtTopLevel, pos);
            }
            self.pop_into_parent();
        }
        let root = self.stack.pop().expect("root").node;
        (root, self.errors)
    }
}

fn reopen_kind(kind: NodeKind) -> NodeKind {
    match kind {
        NodeKind::Typed { kind, .. } => NodeKind::Bracket(kind),
        other => other,
    }
}
