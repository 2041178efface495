//! Text parser for sparse polynomials.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! poly   := ['+'|'-'] term ( ('+'|'-') term )*
//! term   := coeff ( '*' factor )* | factor ( '*' factor )*
//! factor := var [ '^' uint ]
//! coeff  := uint [ '/' uint ]
//! var    := 'x' uint          -- 1-based variable index
//! ```
//!
//! The ambient dimension is the largest variable index that occurs.
//! Exponents must be nonnegative; floating-point coefficients are
//! rejected. Inputs whose first non-space byte is `{` are treated as the
//! JSON interchange format instead.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::jsonio;
use crate::poly::{Exponent, PolyError, SparsePoly};
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("negative exponent at byte {position}")]
    NegativeExponent { position: usize },
    #[error("{0}")]
    Poly(#[from] PolyError),
    #[error("invalid JSON polynomial: {0}")]
    Json(String),
}

/// Parses either the text grammar or (when the input starts with `{`)
/// the JSON interchange format.
pub fn parse_poly(input: &str) -> Result<SparsePoly, ParseError> {
    if input.trim_start().starts_with('{') {
        return jsonio::poly_from_json_str(input).map_err(|e| ParseError::Json(e.to_string()));
    }
    TextParser::new(input).parse()
}

struct RawTerm {
    sign: i8,
    coeff: Rat,
    // (variable index 1-based, exponent)
    powers: Vec<(usize, i64)>,
}

struct TextParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TextParser<'a> {
    fn new(s: &'a str) -> Self {
        TextParser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn parse(mut self) -> Result<SparsePoly, ParseError> {
        let mut raw_terms = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut sign: i8 = 1;
        if let Some(b) = self.peek() {
            if b == b'+' || b == b'-' {
                self.bump();
                if b == b'-' {
                    sign = -1;
                }
            }
        }
        loop {
            let term = self.parse_term(sign)?;
            raw_terms.push(term);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.bump();
                    sign = 1;
                }
                Some(b'-') => {
                    self.bump();
                    sign = -1;
                }
                Some(c) => {
                    return self.err(format!("expected `+`, `-` or end of input, found `{}`", c as char))
                }
            }
        }
        let n = raw_terms
            .iter()
            .flat_map(|t| t.powers.iter().map(|(v, _)| *v))
            .max()
            .unwrap_or(1)
            .max(1);
        let mut terms = Vec::with_capacity(raw_terms.len());
        for t in raw_terms {
            let mut exp = vec![0i64; n];
            for (var, k) in t.powers {
                exp[var - 1] = exp[var - 1].saturating_add(k);
            }
            let c = if t.sign < 0 { -t.coeff } else { t.coeff };
            terms.push((Exponent(exp), c));
        }
        Ok(SparsePoly::new(n, terms)?)
    }

    fn parse_term(&mut self, sign: i8) -> Result<RawTerm, ParseError> {
        self.skip_ws();
        let mut coeff = Rat::one();
        let mut powers = Vec::new();
        let mut saw_factor = false;
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                coeff = self.parse_rational()?;
                saw_factor = true;
            }
            Some(b'x') => {}
            Some(c) => return self.err(format!("expected a term, found `{}`", c as char)),
            None => return self.err("expected a term, found end of input"),
        }
        loop {
            self.skip_ws();
            let star = if self.peek() == Some(b'*') {
                self.bump();
                self.skip_ws();
                true
            } else {
                false
            };
            match self.peek() {
                Some(b'x') => {
                    let (var, k) = self.parse_factor()?;
                    powers.push((var, k));
                    saw_factor = true;
                }
                Some(b) if b.is_ascii_digit() && star => {
                    return self.err("numeric coefficient must come first in a term");
                }
                _ if star => return self.err("expected a variable after `*`"),
                _ => break,
            }
        }
        if !saw_factor {
            return self.err("empty term");
        }
        Ok(RawTerm {
            sign,
            coeff,
            powers,
        })
    }

    fn parse_factor(&mut self) -> Result<(usize, i64), ParseError> {
        // caller guarantees peek() == 'x'
        self.bump();
        let idx_pos = self.pos;
        let idx = self.parse_uint()?;
        if idx == 0 {
            self.pos = idx_pos;
            return self.err("variable indices start at x1");
        }
        let idx = usize::try_from(idx).map_err(|_| ParseError::Syntax {
            position: idx_pos,
            message: "variable index too large".into(),
        })?;
        if idx > 64 {
            self.pos = idx_pos;
            return self.err("variable index exceeds supported dimension (64)");
        }
        let mut k: i64 = 1;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            if self.peek() == Some(b'-') {
                return Err(ParseError::NegativeExponent { position: self.pos });
            }
            let kp = self.pos;
            let raw = self.parse_uint()?;
            k = i64::try_from(raw).map_err(|_| ParseError::Syntax {
                position: kp,
                message: "exponent exceeds 64-bit range".into(),
            })?;
        }
        Ok((idx, k))
    }

    fn parse_uint(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return self.err("expected a digit");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: "integer literal too large".into(),
        })
    }

    fn parse_rational(&mut self) -> Result<Rat, ParseError> {
        let np = self.pos;
        let num = self.parse_bigint()?;
        self.skip_ws();
        if self.peek() == Some(b'.') {
            self.pos = np;
            return self.err("floating-point coefficients are not accepted; use p/q");
        }
        if self.peek() == Some(b'/') {
            self.bump();
            self.skip_ws();
            let dp = self.pos;
            let den = self.parse_bigint()?;
            if den == BigInt::from(0) {
                return Err(ParseError::Syntax {
                    position: dp,
                    message: "zero denominator".into(),
                });
            }
            Ok(Rat::new(num, den))
        } else {
            Ok(Rat::from_integer(num))
        }
    }

    fn parse_bigint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return self.err("expected a digit");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse().map_err(|_| ParseError::Syntax {
            position: start,
            message: "invalid integer".into(),
        })
    }
}
