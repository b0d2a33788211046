//! The `.fmod` module document format.
//!
//! An XML dialect: `<objectModel>` with identification attributes, then the
//! sections `references`, `objects`, `interactions`, `dataTypes`,
//! `dimensions`, `transportations`, `synchronizations`, `updateRates`,
//! `switches` and `notes`. A class element whose only non-class child is
//! `<name>` is scaffolding. See `docs/fmod-format.md` for the grammar.

mod parse;
mod write;

use std::fmt;
use std::sync::Arc;

pub use parse::parse_module;
pub use write::serialize_module;

use crate::model::ObjectModule;
use crate::rule::RuleId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    /// 1-based.
    pub line: u32,
    /// 1-based, in characters.
    pub column: u32,
    pub message: String,
    pub rule: RuleId,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}[{}]: {}",
            self.line, self.column, self.severity, self.rule, self.message
        )
    }
}

/// A successfully parsed module with any warnings raised along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedModule {
    pub module: ObjectModule,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Diagnostics of a failed parse; at least one is an error.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}", self.0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
pub struct ParseErrors(pub Vec<ParseDiagnostic>);

impl ParseErrors {
    pub fn rules(&self) -> Vec<RuleId> {
        self.0
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| d.rule)
            .collect()
    }
}

/// A module together with the exact document it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleDocument {
    pub module: ObjectModule,
    pub source: Arc<[u8]>,
}

impl ModuleDocument {
    pub fn parse(source: impl Into<Arc<[u8]>>) -> Result<ModuleDocument, ParseErrors> {
        let source = source.into();
        let parsed = parse_module(&source)?;
        Ok(ModuleDocument {
            module: parsed.module,
            source,
        })
    }

    pub fn name(&self) -> &str {
        self.module.name()
    }
}

impl From<ObjectModule> for ModuleDocument {
    /// Uses the canonical serialization as the source document.
    fn from(module: ObjectModule) -> Self {
        let source: Arc<[u8]> = serialize_module(&module).into_bytes().into();
        ModuleDocument { module, source }
    }
}
