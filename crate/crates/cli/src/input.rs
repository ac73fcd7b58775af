//! Parsing of type strings `d;a1,a2,...,aN`.

use std::fmt;

use ballquot_core::{validate_type, CoveringType, TypeRejection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    /// Syntax error at a 1-based character column.
    Parse { column: usize, message: String },
    Invalid(TypeRejection),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse { column, message } => write!(f, "parse error at column {column}: {message}"),
            InputError::Invalid(r) => write!(f, "invalid covering type: {r}"),
        }
    }
}

fn number(s: &str, start: usize, what: &str) -> Result<u64, InputError> {
    let lead = s.len() - s.trim_start().len();
    let t = s.trim();
    let column = start + lead + 1;
    if t.is_empty() {
        return Err(InputError::Parse { column, message: format!("expected {what}") });
    }
    if let Some(off) = t.find(|c: char| !c.is_ascii_digit()) {
        let bad = t[off..].chars().next().unwrap();
        return Err(InputError::Parse { column: column + off, message: format!("unexpected character '{bad}' in {what}") });
    }
    t.parse().map_err(|_| InputError::Parse { column, message: format!("{what} is too large") })
}

pub fn parse_type(s: &str) -> Result<CoveringType, InputError> {
    let Some(semi) = s.find(';') else {
        return Err(InputError::Parse { column: s.len() + 1, message: "expected ';' after the degree".into() });
    };
    let d = number(&s[..semi], 0, "degree")?;
    let mut a = Vec::new();
    let mut start = semi + 1;
    for part in s[semi + 1..].split(',') {
        a.push(number(part, start, "exponent")?);
        start += part.len() + 1;
    }
    validate_type(d, &a).map_err(InputError::Invalid)
}
