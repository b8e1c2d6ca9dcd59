//! Structured diagnostics.

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Error)]
#[error("{}", self.render())]
pub struct Diagnostic {
    pub code: String,
    pub message: String,
    /// Steps from the declaration root to the offending node.
    pub path: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decl: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<usize>,
}

impl Diagnostic {
    pub fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            code: code.into(),
            message: message.into(),
            path: vec![],
            expected: None,
            found: None,
            decl: None,
            file: None,
            line: None,
            col: None,
        }
    }

    pub fn mismatch(code: &str, message: impl Into<String>, expected: String, found: String) -> Self {
        let mut d = Diagnostic::new(code, message);
        d.expected = Some(expected);
        d.found = Some(found);
        d
    }

    pub fn with_path(mut self, path: Vec<String>) -> Self {
        self.path = path;
        self
    }

    pub fn in_decl(mut self, name: &str) -> Self {
        if self.decl.is_none() {
            self.decl = Some(name.to_string());
        }
        self
    }

    pub fn in_file(mut self, file: &str) -> Self {
        self.file = Some(file.to_string());
        self
    }

    pub fn at(mut self, line: usize, col: usize) -> Self {
        self.line = Some(line);
        self.col = Some(col);
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if let Some(f) = &self.file {
            s.push_str(f);
            s.push(':');
        }
        if let (Some(l), Some(c)) = (self.line, self.col) {
            s.push_str(&format!("{l}:{c}:"));
        }
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(&format!("error[{}]: {}", self.code, self.message));
        if let Some(d) = &self.decl {
            s.push_str(&format!(" (in `{d}`)"));
        }
        if let Some(e) = &self.expected {
            s.push_str(&format!("\n  expected: {e}"));
        }
        if let Some(f) = &self.found {
            s.push_str(&format!("\n  found:    {f}"));
        }
        if !self.path.is_empty() {
            s.push_str(&format!("\n  at: {}", self.path.join("/")));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}

impl From<crate::syntax::ParseError> for Diagnostic {
    fn from(e: crate::syntax::ParseError) -> Self {
        let mut d = Diagnostic::new("parse", e.message.clone()).at(e.line, e.col);
        if !e.expected.is_empty() {
            d.expected = Some(e.expected.join(", "));
        }
        d
    }
}
