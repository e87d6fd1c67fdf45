//! Signed Gauss codes of virtual knots.
//!
//! A code is the sequence of classical crossings met along one traversal of
//! the knot, e.g. `O1+U2+U1+O2+`. Each token is `O` or `U`, a positive label
//! and the crossing sign. Virtual crossings are not recorded. Only
//! single-component codes are accepted; the empty code is the unknot.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("label {label} occurs {count} times, expected exactly 2")]
    LabelCount { label: u32, count: usize },
    #[error("label {label} must be passed once over and once under")]
    Passage { label: u32 },
    #[error("label {label} carries both signs")]
    SignMismatch { label: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Passage {
    Over,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Self {
        if v > 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Token {
    pub label: u32,
    pub passage: Passage,
    pub sign: Sign,
}

impl Token {
    pub fn new(label: u32, passage: Passage, sign: Sign) -> Self {
        Self {
            label,
            passage,
            sign,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.passage {
            Passage::Over => 'O',
            Passage::Under => 'U',
        };
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{p}{}{s}", self.label)
    }
}

/// A validated signed Gauss code.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignedGaussCode {
    tokens: Vec<Token>,
}

impl SignedGaussCode {
    pub fn new(tokens: Vec<Token>) -> Result<Self, GaussError> {
        let mut order = Vec::new();
        let mut seen: HashMap<u32, Vec<&Token>> = HashMap::new();
        for t in &tokens {
            let e = seen.entry(t.label).or_default();
            if e.is_empty() {
                order.push(t.label);
            }
            e.push(t);
        }
        for label in &order {
            let count = seen[label].len();
            if count != 2 {
                return Err(GaussError::LabelCount {
                    label: *label,
                    count,
                });
            }
        }
        for label in &order {
            let occ = &seen[label];
            if occ[0].passage == occ[1].passage {
                return Err(GaussError::Passage { label: *label });
            }
        }
        for label in &order {
            let occ = &seen[label];
            if occ[0].sign != occ[1].sign {
                return Err(GaussError::SignMismatch { label: *label });
            }
        }
        Ok(Self { tokens })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn crossing_count(&self) -> usize {
        self.tokens.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Relabels crossings `1, 2, 3, ...` in order of first appearance.
    pub fn canonicalize(&self) -> Self {
        let mut map = HashMap::new();
        let tokens = self
            .tokens
            .iter()
            .map(|t| {
                let next = map.len() as u32 + 1;
                let label = *map.entry(t.label).or_insert(next);
                Token { label, ..*t }
            })
            .collect();
        Self { tokens }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// Token indices of the first and second occurrence of each label, in
    /// order of first appearance.
    pub fn occurrence_pairs(&self) -> Vec<(usize, usize)> {
        let mut first: HashMap<u32, usize> = HashMap::new();
        let mut pairs = Vec::with_capacity(self.crossing_count());
        for (idx, t) in self.tokens.iter().enumerate() {
            match first.get(&t.label) {
                Some(&f) => pairs.push((f, idx)),
                None => {
                    first.insert(t.label, idx);
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

impl fmt::Display for SignedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tokens {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for SignedGaussCode {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, GaussError> {
        parse_gauss(s)
    }
}

/// Parses tokens `[OU]<label>[+-]`, whitespace allowed between tokens, and
/// validates the result.
pub fn parse_gauss(text: &str) -> Result<SignedGaussCode, GaussError> {
    let bytes = text.as_bytes();
    let syntax = |offset: usize, message: &str| GaussError::Syntax {
        offset,
        message: message.to_string(),
    };
    let mut pos = 0;
    let mut tokens = Vec::new();
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let Some(&head) = bytes.get(pos) else { break };
        let passage = match head {
            b'O' => Passage::Over,
            b'U' => Passage::Under,
            _ => return Err(syntax(pos, "expected 'O' or 'U'")),
        };
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(syntax(pos, "expected a crossing label"));
        }
        let label: u32 = text[start..pos]
            .parse()
            .map_err(|_| syntax(start, "label out of range"))?;
        if label == 0 {
            return Err(syntax(start, "labels must be positive"));
        }
        let sign = match bytes.get(pos) {
            Some(b'+') => Sign::Plus,
            Some(b'-') => Sign::Minus,
            _ => return Err(syntax(pos, "expected '+' or '-'")),
        };
        pos += 1;
        tokens.push(Token::new(label, passage, sign));
    }
    SignedGaussCode::new(tokens)
}

pub fn format_gauss(code: &SignedGaussCode) -> String {
    code.to_string()
}
