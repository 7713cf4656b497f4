//! A small parser for polynomial expressions such as `x + x^2*y`.
//!
//! The CLI accepts a polynomial on the command line only to derive the
//! shape of a scenario template: the number of variables and the degree.
//! Expressions are multivariate with integer coefficients, written with
//! explicit `*` for products, `^` for powers, and parentheses. The parsed
//! form is canonical: like monomials are combined and zero terms dropped,
//! so `x*y - y*x + x` and `x` are the same expression.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DiagnosticCode, ParseError};

type Monomial = BTreeMap<String, u64>;

/// A multivariate integer polynomial in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyExpr {
    terms: BTreeMap<Monomial, BigInt>,
}

impl PolyExpr {
    fn zero() -> Self {
        PolyExpr {
            terms: BTreeMap::new(),
        }
    }

    fn constant(value: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::new(), value);
        }
        PolyExpr { terms }
    }

    fn variable(name: &str) -> Self {
        let mut monomial = Monomial::new();
        monomial.insert(name.to_string(), 1);
        let mut terms = BTreeMap::new();
        terms.insert(monomial, BigInt::one());
        PolyExpr { terms }
    }

    fn add_term(&mut self, monomial: Monomial, coeff: BigInt) {
        let entry = self.terms.entry(monomial).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, c)| c.is_zero())
                .map(|(m, _)| m.clone())
                .expect("just zeroed");
            self.terms.remove(&key);
        }
    }

    fn add(&self, other: &PolyExpr) -> PolyExpr {
        let mut out = self.clone();
        for (monomial, coeff) in &other.terms {
            out.add_term(monomial.clone(), coeff.clone());
        }
        out
    }

    fn neg(&self) -> PolyExpr {
        PolyExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    fn mul(&self, other: &PolyExpr) -> PolyExpr {
        let mut out = PolyExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut monomial = ma.clone();
                for (var, exp) in mb {
                    *monomial.entry(var.clone()).or_insert(0) += exp;
                }
                out.add_term(monomial, ca * cb);
            }
        }
        out
    }

    fn pow(&self, exp: u64) -> PolyExpr {
        let mut out = PolyExpr::constant(BigInt::one());
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree: the largest sum of exponents over all monomials.
    pub fn degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.values().sum::<u64>())
            .max()
            .unwrap_or(0)
    }

    /// The variables that actually occur, sorted by name.
    pub fn vars(&self) -> Vec<String> {
        let mut vars: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.keys().cloned())
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (monomial, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.sign() == num_bigint::Sign::Minus;
            let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut written = false;
            if !magnitude.is_one() || monomial.is_empty() {
                write!(f, "{magnitude}")?;
                written = true;
            }
            for (var, exp) in monomial {
                if written {
                    write!(f, "*")?;
                }
                written = true;
                if *exp == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Lexeme {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

struct Lexed {
    lexeme: Lexeme,
    line: u32,
    col: u32,
}

fn lex(input: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 0u32;
    let mut chars = input.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch == '\n' {
            line += 1;
            col = 0;
            continue;
        }
        col += 1;
        if ch.is_whitespace() {
            continue;
        }
        let start = col;
        let lexeme = match ch {
            '+' => Lexeme::Plus,
            '-' => Lexeme::Minus,
            '*' => Lexeme::Star,
            '^' => Lexeme::Caret,
            '(' => Lexeme::Open,
            ')' => Lexeme::Close,
            c if c.is_ascii_digit() => {
                let mut digits = c.to_string();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                    col += 1;
                }
                Lexeme::Int(digits.parse().expect("digits parse"))
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = c.to_string();
                while let Some(d) = chars
                    .peek()
                    .filter(|d| d.is_ascii_alphanumeric())
                {
                    name.push(*d);
                    chars.next();
                    col += 1;
                }
                Lexeme::Ident(name)
            }
            other => {
                return Err(ParseError::new(
                    line,
                    start,
                    DiagnosticCode::Syntax,
                    format!("unexpected character `{other}` in a polynomial"),
                ))
            }
        };
        out.push(Lexed {
            lexeme,
            line,
            col: start,
        });
    }
    Ok(out)
}

struct ExprParser {
    tokens: Vec<Lexed>,
    pos: usize,
    end: (u32, u32),
}

impl ExprParser {
    fn peek(&self) -> Option<&Lexeme> {
        self.tokens.get(self.pos).map(|t| &t.lexeme)
    }

    fn here(&self) -> (u32, u32) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Lexeme> {
        let tok = self.tokens.get(self.pos).map(|t| t.lexeme.clone());
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, DiagnosticCode::Syntax, message)
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Lexeme::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Lexeme::Minus) => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Lexeme::Star) {
            self.bump();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        let (line, col) = self.here();
        match self.bump() {
            Some(Lexeme::Minus) => Ok(self.factor()?.neg()),
            Some(Lexeme::Int(value)) => self.maybe_power(PolyExpr::constant(value)),
            Some(Lexeme::Ident(name)) => self.maybe_power(PolyExpr::variable(&name)),
            Some(Lexeme::Open) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Lexeme::Close) => self.maybe_power(inner),
                    _ => Err(ParseError::new(
                        line,
                        col,
                        DiagnosticCode::Syntax,
                        "unclosed `(`",
                    )),
                }
            }
            Some(other) => Err(ParseError::new(
                line,
                col,
                DiagnosticCode::Syntax,
                format!("expected a variable, number or `(`, got `{other:?}`"),
            )),
            None => Err(ParseError::new(
                line,
                col,
                DiagnosticCode::Syntax,
                "expected a variable, number or `(`",
            )),
        }
    }

    fn maybe_power(&mut self, base: PolyExpr) -> Result<PolyExpr, ParseError> {
        if self.peek() != Some(&Lexeme::Caret) {
            return Ok(base);
        }
        self.bump();
        let (line, col) = self.here();
        match self.bump() {
            Some(Lexeme::Int(exp)) => {
                let exp: u64 = exp.try_into().map_err(|_| {
                    ParseError::new(line, col, DiagnosticCode::BadInt, "exponent out of range")
                })?;
                Ok(base.pow(exp))
            }
            _ => Err(ParseError::new(
                line,
                col,
                DiagnosticCode::Syntax,
                "expected an integer exponent after `^`",
            )),
        }
    }
}

/// Parses a polynomial expression. The zero polynomial is rejected: a
/// scenario needs a function, and `x - x` is almost always a typo.
pub fn parse_poly(input: &str) -> Result<PolyExpr, ParseError> {
    let tokens = lex(input)?;
    let end = tokens
        .last()
        .map(|t| (t.line, t.col + 1))
        .unwrap_or((1, 1));
    let mut parser = ExprParser {
        tokens,
        pos: 0,
        end,
    };
    let expr = parser.expr()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.error("trailing input after the polynomial"));
    }
    if expr.is_zero() {
        return Err(ParseError::new(
            1,
            1,
            DiagnosticCode::EmptyPolynomial,
            "the polynomial cancels to zero",
        ));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_products_and_powers() {
        let p = parse_poly("x + x^2*y").unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.vars(), vec!["x", "y"]);
        assert_eq!(p.to_string(), "x + x^2*y");
    }

    #[test]
    fn like_monomials_combine() {
        let p = parse_poly("x*y + y*x + x").unwrap();
        assert_eq!(p.to_string(), "x + 2*x*y");
    }

    #[test]
    fn parentheses_expand() {
        let p = parse_poly("(x + y)^2").unwrap();
        assert_eq!(p, parse_poly("x^2 + 2*x*y + y^2").unwrap());
    }

    #[test]
    fn product_binds_tighter_than_sum() {
        let p = parse_poly("x + y*z").unwrap();
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn unary_minus_and_constants() {
        let p = parse_poly("-x + 3").unwrap();
        assert_eq!(p.to_string(), "3 - x");
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn the_zero_polynomial_is_rejected() {
        let err = parse_poly("x - x").unwrap_err();
        assert_eq!(err.code, DiagnosticCode::EmptyPolynomial);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_poly("x + %").unwrap_err();
        assert_eq!(err.code, DiagnosticCode::Syntax);
        assert_eq!((err.line, err.col), (1, 5));

        let err = parse_poly("x^y").unwrap_err();
        assert_eq!(err.code, DiagnosticCode::Syntax);
        assert_eq!((err.line, err.col), (1, 3));
    }

    #[test]
    fn display_output_reparses_to_the_same_expression() {
        for src in ["x + x^2*y", "(x+y)*(x-y)", "2*x^3 - 5", "-x*y*z"] {
            let p = parse_poly(src).unwrap();
            assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }
}
