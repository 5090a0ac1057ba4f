//! Parser for polynomial expressions over named chart variables.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' exponent)?
//! exponent:= '-'? atom            (must evaluate to a non-negative integer)
//! atom    := number | identifier | '(' expr ')'
//! number  := digits ('.' digits)?
//! ```
//!
//! Division is only allowed by a non-zero constant. Identifiers are either
//! chart variables or named rational parameters.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{Poly, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}' at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("fractional exponent at position {pos}")]
    FractionalExponent { pos: usize },
    #[error("exponent at position {pos} is not a constant")]
    NonConstantExponent { pos: usize },
    #[error("exponent at position {pos} is too large")]
    ExponentTooLarge { pos: usize },
    #[error("division by a non-constant expression at position {pos}")]
    NonConstantDivisor { pos: usize },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
}

/// Names the parser resolves: chart variables (by position) and rational
/// parameters.
#[derive(Clone, Debug, Default)]
pub struct Scope<'a> {
    pub variables: &'a [String],
    pub parameters: BTreeMap<String, Rational>,
}

impl<'a> Scope<'a> {
    pub fn new(variables: &'a [String]) -> Self {
        Scope {
            variables,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with_parameter(mut self, name: impl Into<String>, value: Rational) -> Self {
        self.parameters.insert(name.into(), value);
        self
    }
}

pub fn parse_poly(src: &str, variables: &[String]) -> Result<Poly, ParseError> {
    parse_poly_in(src, &Scope::new(variables))
}

pub fn parse_poly_in(src: &str, scope: &Scope<'_>) -> Result<Poly, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        scope,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(out)
}

/// Parse a rational literal such as `3`, `-2/5` or `0.25`.
pub fn parse_rational(src: &str) -> Result<Rational, ParseError> {
    let p = parse_poly(src, &[])?;
    p.as_constant().ok_or(ParseError::Syntax {
        pos: 0,
        msg: "expected a rational constant".into(),
    })
}

struct Parser<'s, 'a> {
    src: &'s [u8],
    pos: usize,
    scope: &'s Scope<'a>,
}

impl Parser<'_, '_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let pos = self.pos;
                    let rhs = self.unary()?;
                    let c = rhs.as_constant().ok_or(ParseError::NonConstantDivisor { pos })?;
                    if c.is_zero() {
                        return Err(ParseError::DivisionByZero { pos });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let pos = self.pos;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.atom()?;
        let e = e.as_constant().ok_or(ParseError::NonConstantExponent { pos })?;
        if negative && !e.is_zero() || e.is_negative() {
            return Err(ParseError::NegativeExponent { pos });
        }
        if !e.is_integer() {
            return Err(ParseError::FractionalExponent { pos });
        }
        let k = e.to_integer().to_u32().filter(|&k| k <= 1024).ok_or(ParseError::ExponentTooLarge { pos })?;
        let mut out = Poly::one();
        for _ in 0..k {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Poly::constant(self.number())),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if let Some(i) = self.scope.variables.iter().position(|v| v == name) {
                    return Ok(Poly::var(i));
                }
                if let Some(v) = self.scope.parameters.get(name) {
                    return Ok(Poly::constant(v.clone()));
                }
                Err(ParseError::UnknownVariable {
                    name: name.to_string(),
                    pos: start,
                })
            }
            Some(c) => Err(self.syntax(format!("unexpected '{}'", c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Rational {
        let digits = |p: &mut Self| {
            let start = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            std::str::from_utf8(&p.src[start..p.pos]).expect("ascii digits").to_string()
        };
        let whole = digits(self);
        let mut value = Rational::from_integer(whole.parse::<BigInt>().expect("digit string"));
        if self.pos + 1 < self.src.len() && self.src[self.pos] == b'.' && self.src[self.pos + 1].is_ascii_digit() {
            self.pos += 1;
            let frac = digits(self);
            let den = num_traits::pow(BigInt::from(10), frac.len());
            value += Rational::new(frac.parse::<BigInt>().expect("digit string"), den);
        }
        value
    }
}

/// Inverse of [`parse_poly`] up to canonical form.
pub fn print_poly(p: &Poly, variables: &[String]) -> String {
    p.display_with(variables)
}

/// Whether the identifier is usable as a variable or parameter name.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat, Exponents};

    fn vars() -> Vec<String> {
        vec!["x1".into(), "x2".into()]
    }

    #[test]
    fn parses_example() {
        let p = parse_poly("2*x1^2 - 1/3", &vars()).unwrap();
        let mut want = Poly::monomial(Exponents::new(vec![2]), int(2));
        want.add_term(Exponents::one(), rat(-1, 3));
        assert_eq!(p, want);
        assert_eq!(print_poly(&p, &vars()), "2*x1^2 - 1/3");
    }

    #[test]
    fn distributes() {
        let p = parse_poly("x1*(x1+1)", &vars()).unwrap();
        assert_eq!(p, &(&Poly::var(0) * &Poly::var(0)) + &Poly::var(0));
    }

    #[test]
    fn exponent_errors() {
        assert!(matches!(parse_poly("x2^-1", &vars()), Err(ParseError::NegativeExponent { .. })));
        assert!(matches!(parse_poly("x2^(1/2)", &vars()), Err(ParseError::FractionalExponent { .. })));
        assert!(matches!(parse_poly("x2^0.5", &vars()), Err(ParseError::FractionalExponent { .. })));
        assert!(matches!(parse_poly("x2^x1", &vars()), Err(ParseError::NonConstantExponent { .. })));
    }

    #[test]
    fn reports_positions() {
        assert_eq!(
            parse_poly("x1 + y", &vars()),
            Err(ParseError::UnknownVariable { name: "y".into(), pos: 5 })
        );
        assert!(matches!(parse_poly("x1 + ", &vars()), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly("(x1", &vars()), Err(ParseError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly("x1 x2", &vars()), Err(ParseError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn division_rules() {
        assert_eq!(parse_poly("x1/2", &vars()).unwrap(), Poly::var(0).scale(&rat(1, 2)));
        assert!(matches!(parse_poly("1/x1", &vars()), Err(ParseError::NonConstantDivisor { .. })));
        assert!(matches!(parse_poly("1/(2-2)", &vars()), Err(ParseError::DivisionByZero { .. })));
    }

    #[test]
    fn parameters_and_decimals() {
        let v = vars();
        let scope = Scope::new(&v).with_parameter("gamma", rat(3, 4));
        assert_eq!(parse_poly_in("gamma*x2", &scope).unwrap(), Poly::var(1).scale(&rat(3, 4)));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-2/6").unwrap(), rat(-1, 3));
    }
}
