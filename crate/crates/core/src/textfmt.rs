//! Line cursor and error type shared by the text formats.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

/// Non-blank lines with `#` comments stripped, numbered from 1.
pub struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { lines, pos: 0 }
    }

    pub fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    pub fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    /// Line number to blame when input ends early.
    pub fn last_line(&self) -> usize {
        self.lines.last().map_or(1, |l| l.0)
    }

    pub fn expect(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        self.next_line()
            .ok_or_else(|| FormatError::new(self.last_line(), format!("unexpected end of input, expected {what}")))
    }

    pub fn is_done(&self) -> bool {
        self.pos >= self.lines.len()
    }
}

/// Splits `key: rest` and checks the key.
pub fn keyed<'a>(line: (usize, &'a str), key: &str) -> Result<&'a str, FormatError> {
    let (n, l) = line;
    match l.split_once(':') {
        Some((k, rest)) if k.trim() == key => Ok(rest.trim()),
        _ => Err(FormatError::new(n, format!("expected `{key}:`, found `{l}`"))),
    }
}
