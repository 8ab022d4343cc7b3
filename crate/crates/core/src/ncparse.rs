//! Text form of nc polynomials.
//!
//! ```text
//! poly     := ["-"] term (("+" | "-") term)*
//! term     := rational ["*"] factor ("*" factor)* | rational | factor ("*" factor)*
//! factor   := (atom | "(" poly ")") ["'" | "^T"] ["^" uint]
//! atom     := ("x" | "h") uint
//! rational := uint ["/" uint]
//! ```
//!
//! Whitespace is insignificant. The printer emits terms in word order,
//! suppresses unit coefficients and writes transposes as a postfix `'`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freealg::{Coeff, Family, Letter, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("variable index {index} at {pos} out of range 1..={vars}")]
    IndexOutOfRange { pos: usize, index: u64, vars: usize },
    #[error("malformed rational at {pos}: {message}")]
    MalformedRational { pos: usize, message: String },
}

/// Parse `text` in a context of `vars` variables.
pub fn parse(text: &str, vars: usize) -> Result<Polynomial, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let p = parser.poly()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(p)
}

/// Parse with the variable count taken from the largest index used
/// (at least 1).
pub fn parse_infer(text: &str) -> Result<Polynomial, ParseError> {
    let wide = parse(text, u32::MAX as usize)?;
    let vars = (wide.max_index() as usize).max(1);
    Ok(wide.with_vars(vars).expect("indices bounded by max_index"))
}

/// Canonical text form; `parse(&print(p), p.vars()) == p`.
pub fn print(p: &Polynomial) -> String {
    p.to_string()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (word, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if word.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{word}")?;
            } else {
                write!(f, "{mag}*{word}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        let negate_first = self.eat(b'-');
        let mut acc = self.term()?;
        if negate_first {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc + t;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc - t;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() => Some(self.rational()?),
            _ => None,
        };
        let mut acc = match coeff {
            Some(c) => {
                let star = self.eat(b'*');
                if !star && !self.at_factor_start() {
                    return Ok(Polynomial::constant(self.vars, c));
                }
                Polynomial::constant(self.vars, c) * self.factor()?
            }
            None => self.factor()?,
        };
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = acc * f;
        }
        Ok(acc)
    }

    fn at_factor_start(&mut self) -> bool {
        matches!(self.peek(), Some(b'x' | b'h' | b'('))
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                inner
            }
            Some(b'x' | b'h') => self.atom()?,
            Some(_) => return Err(self.syntax("expected a variable or '('")),
            None => return Err(self.syntax("unexpected end of input")),
        };
        let mut base = base;
        if self.eat(b'\'') {
            base = base.transpose();
        }
        if self.eat(b'^') {
            if self.eat(b'T') {
                base = base.transpose();
                if self.eat(b'^') {
                    let n = self.exponent()?;
                    base = base.pow(n);
                }
            } else {
                let n = self.exponent()?;
                base = base.pow(n);
            }
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits().ok_or_else(|| self.syntax("expected exponent"))?;
        digits.parse::<u32>().map_err(|_| ParseError::Syntax {
            pos: start,
            message: "exponent too large".into(),
        })
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let family = match self.src[self.pos] {
            b'x' => Family::X,
            _ => Family::H,
        };
        let start = self.pos;
        self.pos += 1;
        // The index must follow the letter directly.
        let digits = self
            .raw_digits()
            .ok_or_else(|| self.syntax("expected variable index"))?;
        let index: u64 = digits.parse().unwrap_or(u64::MAX);
        if index == 0 || index > self.vars as u64 || index > u32::MAX as u64 {
            return Err(ParseError::IndexOutOfRange {
                pos: start,
                index,
                vars: self.vars,
            });
        }
        let letter = Letter::new(family, index as u32, false);
        Ok(Polynomial::letter(self.vars, letter).expect("index checked above"))
    }

    fn raw_digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        self.raw_digits()
    }

    fn rational(&mut self) -> Result<Coeff, ParseError> {
        let start = self.pos;
        let num = self.digits().expect("caller saw a digit");
        let num: BigInt = num.parse().expect("ascii digits");
        if self.eat(b'/') {
            let den = self.digits().ok_or(ParseError::MalformedRational {
                pos: start,
                message: "missing denominator".into(),
            })?;
            let den: BigInt = den.parse().expect("ascii digits");
            if den.is_zero() {
                return Err(ParseError::MalformedRational {
                    pos: start,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }
}
