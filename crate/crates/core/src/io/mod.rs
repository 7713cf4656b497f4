//! Reading and writing the declarative formats: scenario files, the
//! canonical formatter, the JSON report emitter, and the small polynomial
//! expression language behind scenario templates.
//!
//! Scenario files are token-oriented: statements are keyword-led, tokens
//! are separated by any whitespace, and `#` starts a comment running to
//! the end of the line. The canonical formatter writes one statement per
//! line with two-space indentation; parsing a file, formatting it, and
//! parsing again yields the same scenario.
//!
//! Every failure carries a line, a column, and a stable diagnostic code,
//! so scripts can match on the code while people read the message.

mod json;
mod polyexpr;
mod scenario;
mod skeleton;

pub use json::{emit_germ_json, emit_json};
pub use polyexpr::{parse_poly, PolyExpr};
pub use scenario::{format_scenario, parse_scenario, ScenarioBody, ScenarioFile};
pub use skeleton::skeleton;

use std::fmt;

use thiserror::Error;

/// Stable machine-readable classification of an input failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticCode {
    /// Malformed statement structure.
    Syntax,
    /// A keyword or key that does not belong here.
    UnknownKeyword,
    /// An integer that does not parse or is out of range.
    BadInt,
    /// A zeta literal that does not parse.
    BadZeta,
    /// A required field or key is missing.
    MissingField,
    /// A field or key given twice.
    DuplicateField,
    /// A stratum label used twice in one namespace.
    DuplicateLabel,
    /// A value block declared twice.
    DuplicateValue,
    /// Stratum chis do not add up to the declared total.
    ChiSumMismatch,
    /// Zeta data or a section attached to a value never declared.
    UndeclaredValue,
    /// A value spelling reserved for another role.
    ReservedValue,
    /// A declared Milnor number contradicting its zeta-function.
    MuZetaMismatch,
    /// The infinity cover does not add up to the hyperplane at infinity.
    InfCoverIncomplete,
    /// A polynomial expression with no terms left.
    EmptyPolynomial,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::Syntax => "SYNTAX",
            DiagnosticCode::UnknownKeyword => "UNKNOWN_KEYWORD",
            DiagnosticCode::BadInt => "BAD_INT",
            DiagnosticCode::BadZeta => "BAD_ZETA",
            DiagnosticCode::MissingField => "MISSING_FIELD",
            DiagnosticCode::DuplicateField => "DUPLICATE_FIELD",
            DiagnosticCode::DuplicateLabel => "DUPLICATE_LABEL",
            DiagnosticCode::DuplicateValue => "DUPLICATE_VALUE",
            DiagnosticCode::ChiSumMismatch => "CHI_SUM_MISMATCH",
            DiagnosticCode::UndeclaredValue => "UNDECLARED_VALUE",
            DiagnosticCode::ReservedValue => "RESERVED_VALUE",
            DiagnosticCode::MuZetaMismatch => "MU_ZETA_MISMATCH",
            DiagnosticCode::InfCoverIncomplete => "INF_COVER_INCOMPLETE",
            DiagnosticCode::EmptyPolynomial => "EMPTY_POLYNOMIAL",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An input failure with its position. Lines and columns are 1-based;
/// the column counts characters, not bytes.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {code}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub code: DiagnosticCode,
    pub message: String,
}

impl ParseError {
    pub fn new(line: u32, col: u32, code: DiagnosticCode, message: impl Into<String>) -> Self {
        Self {
            line,
            col,
            code,
            message: message.into(),
        }
    }
}
