use crate::ast::Span;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    Lexical,
    Syntactic,
    Resolution,
    /// A table that fails to define the structure at all (missing entries,
    /// signature mismatches).
    Structural,
    Law,
}

/// Error codes. The leading digit names the phase.
pub mod code {
    pub const UNTERMINATED_STRING: &str = "E101";
    pub const UNBALANCED: &str = "E102";
    pub const CONTROL_CHAR: &str = "E103";

    pub const UNKNOWN_BLOCK: &str = "E201";
    pub const UNKNOWN_ENTRY: &str = "E202";
    pub const MALFORMED: &str = "E203";
    pub const MISSING_END: &str = "E204";
    pub const BAD_NUMBER: &str = "E205";
    pub const MIXED_BLOCK: &str = "E206";

    pub const UNKNOWN_COLOR: &str = "E301";
    pub const UNKNOWN_OP: &str = "E302";
    pub const UNKNOWN_BLOCK_REF: &str = "E303";
    pub const DUPLICATE: &str = "E304";
    pub const WRONG_KIND: &str = "E305";

    pub const STRUCTURAL: &str = "E401";
    pub const SIGNATURE: &str = "E402";

    pub const LAW: &str = "E501";
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: &'static str,
    pub phase: Phase,
    pub message: String,
    pub span: Option<Span>,
    pub file: Option<String>,
}

impl Diagnostic {
    pub fn new(code: &'static str, message: impl Into<String>, span: Option<Span>) -> Self {
        let phase = match code.as_bytes()[1] {
            b'1' => Phase::Lexical,
            b'2' => Phase::Syntactic,
            b'3' => Phase::Resolution,
            b'4' => Phase::Structural,
            _ => Phase::Law,
        };
        Diagnostic { code, phase, message: message.into(), span, file: None }
    }

    pub fn at(code: &'static str, message: impl Into<String>, span: Span) -> Self {
        Diagnostic::new(code, message, Some(span))
    }

    pub fn in_file(mut self, file: &str) -> Self {
        self.file.get_or_insert_with(|| file.to_string());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        if let Some(s) = self.span {
            write!(f, "{s}:")?;
        }
        if self.file.is_some() || self.span.is_some() {
            write!(f, " ")?;
        }
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}
