//! Parse tree of a source document. Every name carries the position it was
//! read from.

use std::fmt;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn new(text: impl Into<String>) -> Self {
        Name { text: text.into(), span: Span::default() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Colors,
    Collection,
    Multicategory,
    Multifunctor,
    Algebra,
    Bimodule,
}

impl BlockKind {
    pub const ALL: [BlockKind; 6] = [
        BlockKind::Colors,
        BlockKind::Collection,
        BlockKind::Multicategory,
        BlockKind::Multifunctor,
        BlockKind::Algebra,
        BlockKind::Bimodule,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Colors => "colors",
            BlockKind::Collection => "collection",
            BlockKind::Multicategory => "multicategory",
            BlockKind::Multifunctor => "multifunctor",
            BlockKind::Algebra => "algebra",
            BlockKind::Bimodule => "bimodule",
        }
    }
}

/// Flags shared by collection-like headers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    pub symmetric: bool,
    pub cap: Option<usize>,
    pub partial: bool,
}

#[derive(Debug, Clone)]
pub enum Header {
    Colors,
    Collection { over: Name, options: Options },
    Multicategory { over: Name, options: Options },
    Multifunctor { source: Name, target: Name },
    Algebra { over: Name },
    /// Left action by the first, right action by the second.
    Bimodule { left: Name, right: Name, options: Options },
}

#[derive(Debug, Clone)]
pub struct Block {
    pub kind: BlockKind,
    pub name: Name,
    pub header: Header,
    pub entries: Vec<Entry>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKeyword {
    Op,
    Generator,
    Element,
}

impl OpKeyword {
    pub fn keyword(self) -> &'static str {
        match self {
            OpKeyword::Op => "op",
            OpKeyword::Generator => "generator",
            OpKeyword::Element => "element",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub kind: EntryKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum EntryKind {
    Color(Name),
    Op { keyword: OpKeyword, name: Name, inputs: Vec<Name>, output: Name },
    Unit { color: Name, op: Name },
    /// Slots are 1-based in the text and stored 0-based.
    Comp { outer: Name, slot: usize, inner: Name, result: Name },
    Act { op: Name, perm: Vec<usize>, result: Name },
    Relation { lhs: Name, rhs: Name, color: Name },
    Saturate { arity: usize, vertices: usize },
    Object { from: Name, to: Name },
    Map { from: Name, to: Name },
    Carrier { color: Name, size: usize },
    Action { op: Name, table: Vec<usize> },
    Right { elem: Name, slot: usize, op: Name, result: Name },
    Left { op: Name, elems: Vec<Name>, result: Name },
}

impl EntryKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            EntryKind::Color(_) => "color",
            EntryKind::Op { keyword, .. } => keyword.keyword(),
            EntryKind::Unit { .. } => "unit",
            EntryKind::Comp { .. } => "comp",
            EntryKind::Act { .. } => "act",
            EntryKind::Relation { .. } => "relation",
            EntryKind::Saturate { .. } => "saturate",
            EntryKind::Object { .. } => "object",
            EntryKind::Map { .. } => "map",
            EntryKind::Carrier { .. } => "carrier",
            EntryKind::Action { .. } => "action",
            EntryKind::Right { .. } => "right",
            EntryKind::Left { .. } => "left",
        }
    }
}

/// Entry keywords accepted inside each block.
pub fn allowed(kind: BlockKind) -> &'static [&'static str] {
    match kind {
        BlockKind::Colors => &["color"],
        BlockKind::Collection => &["op", "act"],
        BlockKind::Multicategory => &["op", "unit", "comp", "act", "generator", "relation", "saturate"],
        BlockKind::Multifunctor => &["object", "map"],
        BlockKind::Algebra => &["carrier", "action"],
        BlockKind::Bimodule => &["element", "act", "right", "left"],
    }
}

impl Block {
    /// A multicategory block given by generators and relations.
    pub fn is_presentation(&self) -> bool {
        self.entries.iter().any(|e| matches!(e.kind, EntryKind::Op { keyword: OpKeyword::Generator, .. } | EntryKind::Relation { .. } | EntryKind::Saturate { .. }))
    }
}
