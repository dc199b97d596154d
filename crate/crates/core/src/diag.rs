//! Source locations and rendered diagnostics.

use std::fmt;

/// A position in the source text (1-based line and column, 0-based byte offset).
///
/// Locations never take part in structural comparison: two AST nodes that
/// differ only in where they were parsed compare equal.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Loc {
    pub offset: usize,
    pub line: u32,
    pub col: u32,
}

impl Loc {
    pub fn new(offset: usize, line: u32, col: u32) -> Self {
        Loc { offset, line, col }
    }
}

impl PartialEq for Loc {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl std::hash::Hash for Loc {
    fn hash<H: std::hash::Hasher>(&self, _state: &mut H) {}
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Compiler phase that produced a diagnostic. The ordering is the pipeline order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Lex,
    Parse,
    Type,
    Causality,
    Init,
    Mono,
    Network,
    Model,
    Stimulus,
    Simulation,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Lex => "lexical error",
            Phase::Parse => "syntax error",
            Phase::Type => "type error",
            Phase::Causality => "causality error",
            Phase::Init => "initialisation error",
            Phase::Mono => "monomorphisation error",
            Phase::Network => "network error",
            Phase::Model => "model error",
            Phase::Stimulus => "stimulus error",
            Phase::Simulation => "simulation error",
        };
        f.write_str(s)
    }
}

/// A user-facing error message with an optional source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub phase: Phase,
    pub loc: Option<Loc>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(phase: Phase, loc: Option<Loc>, message: impl Into<String>) -> Self {
        Diagnostic { phase, loc, message: message.into() }
    }

    /// Render as `file:line:col: <phase>: message`.
    pub fn render(&self, file: &str) -> String {
        match self.loc {
            Some(loc) => format!("{}:{}:{}: {}: {}", file, loc.line, loc.col, self.phase, self.message),
            None => format!("{}: {}: {}", file, self.phase, self.message),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.loc {
            Some(loc) => write!(f, "{}: {}: {}", loc, self.phase, self.message),
            None => write!(f, "{}: {}", self.phase, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Sort diagnostics by source position, then phase. Unlocated diagnostics go last.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by_key(|d| (d.loc.map(|l| (0u8, l.line, l.col)).unwrap_or((1, 0, 0)), d.phase));
}
