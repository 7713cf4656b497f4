//! The multiplicative group of finite products `∏ (1 - t^m)^{e_m}`.
//!
//! Zeta-functions of monodromy transformations are rational functions of a
//! very particular shape: a finite product of factors `1 - t^m` with integer
//! exponents of either sign. Everything downstream (integration against the
//! Euler characteristic, local model evaluation, global bookkeeping) only
//! ever multiplies, inverts and raises such products to integer powers, so
//! the representation keeps the exact factor map instead of an expanded
//! numerator and denominator. Exponents are arbitrary-precision integers:
//! they accumulate sums of Euler characteristics weighted by powers and can
//! leave the machine range on perfectly reasonable inputs.
//!
//! A product is stored canonically: orders are positive, exponents nonzero,
//! the factor map sorted by order. Two products are equal exactly when their
//! factor maps coincide, and the text form `[m:e,...]` lists the factors in
//! increasing order of `m`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// A finite product `∏ (1 - t^m)^{e_m}` with integer exponents.
///
/// The empty product is the unit of the group. Multiplication adds
/// exponents, inversion negates them, and factors whose exponent reaches
/// zero are dropped, so structural equality is semantic equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CyclotomicProduct {
    factors: BTreeMap<u64, BigInt>,
}

/// Violations of the order constraint on a single factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ZetaError {
    /// Factor orders index the power of `t` in `1 - t^m` and must be >= 1.
    #[error("factor order must be positive")]
    ZeroOrder,
}

impl CyclotomicProduct {
    /// The empty product, the unit of the group.
    pub fn unit() -> Self {
        Self::default()
    }

    /// The single factor `(1 - t^m)^e`. Fails when `m` is zero.
    pub fn cyclo(m: u64, e: impl Into<BigInt>) -> Result<Self, ZetaError> {
        if m == 0 {
            return Err(ZetaError::ZeroOrder);
        }
        let e = e.into();
        let mut factors = BTreeMap::new();
        if !e.is_zero() {
            factors.insert(m, e);
        }
        Ok(Self { factors })
    }

    /// The factor `1 - t`, the zeta-function of a one-point space with
    /// trivial monodromy. Smooth points contribute exactly this.
    pub fn one_minus_t() -> Self {
        Self::cyclo(1, 1).expect("order 1 is positive")
    }

    /// True for the empty product.
    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factor map, sorted by order. Exponents are never zero.
    pub fn factors(&self) -> &BTreeMap<u64, BigInt> {
        &self.factors
    }

    /// The exponent of `1 - t^m`, zero when the factor is absent.
    pub fn exponent(&self, m: u64) -> BigInt {
        self.factors.get(&m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Group multiplication: exponents of matching orders add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (m, e) in &other.factors {
            let entry = factors.entry(*m).or_insert_with(BigInt::zero);
            *entry += e;
            if entry.is_zero() {
                factors.remove(m);
            }
        }
        Self { factors }
    }

    /// Group inverse: every exponent negates.
    pub fn inv(&self) -> Self {
        Self {
            factors: self.factors.iter().map(|(m, e)| (*m, -e)).collect(),
        }
    }

    /// Integer power: every exponent scales by `n`. `n = 0` gives the unit,
    /// negative `n` inverts.
    pub fn pow(&self, n: impl Into<BigInt>) -> Self {
        let n = n.into();
        if n.is_zero() {
            return Self::unit();
        }
        Self {
            factors: self.factors.iter().map(|(m, e)| (*m, e * &n)).collect(),
        }
    }

    /// The degree `Σ m·e_m` of the product as a rational function of `t`.
    ///
    /// Degree is a group homomorphism onto the integers; for the
    /// zeta-function of a transformation with invertible action on homology
    /// it equals the Euler characteristic of the underlying space.
    pub fn degree(&self) -> BigInt {
        self.factors
            .iter()
            .map(|(m, e)| BigInt::from(*m) * e)
            .sum()
    }

    /// Expands the product into an explicit fraction of integer-coefficient
    /// polynomials: positive exponents multiply into the numerator, negative
    /// ones into the denominator. No cancellation is performed, so the cusp
    /// product `[2:1,3:1,6:-1]` expands to `(1-t^2)(1-t^3)` over `(1-t^6)`
    /// rather than to the reduced form.
    ///
    /// Panics when an exponent magnitude does not fit in `u64`; such a
    /// product could not be expanded in memory anyway.
    pub fn expand(&self) -> PolyFraction {
        let mut numerator = IntPoly::one();
        let mut denominator = IntPoly::one();
        for (m, e) in &self.factors {
            let count = e
                .abs()
                .to_u64()
                .expect("factor exponent too large to expand");
            let base = IntPoly::one_minus_t_pow(*m);
            let power = base.pow(count);
            if e.is_positive() {
                numerator = numerator.mul(&power);
            } else {
                denominator = denominator.mul(&power);
            }
        }
        PolyFraction {
            numerator,
            denominator,
        }
    }
}

impl std::ops::Mul for &CyclotomicProduct {
    type Output = CyclotomicProduct;

    fn mul(self, rhs: &CyclotomicProduct) -> CyclotomicProduct {
        CyclotomicProduct::mul(self, rhs)
    }
}

impl fmt::Display for CyclotomicProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_zeta(self))
    }
}

impl FromStr for CyclotomicProduct {
    type Err = ParseZetaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_zeta(s)
    }
}

/// Renders the canonical literal `[m:e,...]` with orders strictly
/// increasing; the unit renders as `[]`.
pub fn format_zeta(z: &CyclotomicProduct) -> String {
    let mut out = String::from("[");
    for (i, (m, e)) in z.factors.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&m.to_string());
        out.push(':');
        out.push_str(&e.to_string());
    }
    out.push(']');
    out
}

/// What went wrong while reading a zeta literal, located by character
/// offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("offset {offset}: {kind}")]
pub struct ParseZetaError {
    pub offset: usize,
    pub kind: ZetaParseKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaParseKind {
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("factor order must be positive")]
    ZeroOrder,
    #[error("duplicate factor order {0}")]
    DuplicateOrder(u64),
    #[error("trailing input after literal")]
    TrailingInput,
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8, what: &'static str) -> Result<(), ParseZetaError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseZetaError {
                offset: self.pos,
                kind: ZetaParseKind::Expected(what),
            })
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseZetaError> {
        let start = self.pos;
        while self
            .peek()
            .map(|b| b.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseZetaError {
                offset: start,
                kind: ZetaParseKind::Expected("a digit"),
            });
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits"))
    }
}

/// Parses the literal grammar `[m:e,...]`: ASCII, whitespace between tokens
/// ignored, orders positive, duplicate orders rejected. Zero exponents are
/// accepted and normalized away.
pub fn parse_zeta(text: &str) -> Result<CyclotomicProduct, ParseZetaError> {
    let mut sc = Scanner::new(text);
    sc.skip_ws();
    sc.eat(b'[', "'['")?;
    sc.skip_ws();
    let mut factors: BTreeMap<u64, BigInt> = BTreeMap::new();
    let mut seen: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    if sc.peek() != Some(b']') {
        loop {
            sc.skip_ws();
            let order_offset = sc.pos;
            let m: u64 = sc.digits()?.parse().map_err(|_| ParseZetaError {
                offset: order_offset,
                kind: ZetaParseKind::Expected("an order fitting in 64 bits"),
            })?;
            if m == 0 {
                return Err(ParseZetaError {
                    offset: order_offset,
                    kind: ZetaParseKind::ZeroOrder,
                });
            }
            sc.skip_ws();
            sc.eat(b':', "':'")?;
            sc.skip_ws();
            let negative = if sc.peek() == Some(b'-') {
                sc.pos += 1;
                true
            } else {
                false
            };
            let digits = sc.digits()?;
            let mut e = BigInt::parse_bytes(digits.as_bytes(), 10).expect("ascii digits");
            if negative {
                e = -e;
            }
            if !seen.insert(m) {
                return Err(ParseZetaError {
                    offset: order_offset,
                    kind: ZetaParseKind::DuplicateOrder(m),
                });
            }
            if !e.is_zero() {
                factors.insert(m, e);
            }
            sc.skip_ws();
            match sc.peek() {
                Some(b',') => {
                    sc.pos += 1;
                }
                Some(b']') => break,
                _ => {
                    return Err(ParseZetaError {
                        offset: sc.pos,
                        kind: ZetaParseKind::Expected("',' or ']'"),
                    })
                }
            }
        }
    }
    sc.eat(b']', "']'")?;
    sc.skip_ws();
    if sc.pos != sc.bytes.len() {
        return Err(ParseZetaError {
            offset: sc.pos,
            kind: ZetaParseKind::TrailingInput,
        });
    }
    Ok(CyclotomicProduct { factors })
}

/// A dense integer-coefficient polynomial in `t`, coefficients in ascending
/// order of the power and no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs<T: Into<BigInt>>(coeffs: impl IntoIterator<Item = T>) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while coeffs.last().map(Zero::is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// The binomial `1 - t^m`.
    pub fn one_minus_t_pow(m: u64) -> Self {
        let m = usize::try_from(m).expect("power too large for a dense polynomial");
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = BigInt::one();
        coeffs[m] = -BigInt::one();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in `t`, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// Power by repeated squaring.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if k == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                if k == 1 {
                    f.write_str("t")?;
                } else {
                    write!(f, "t^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// An expanded product as a fraction of integer polynomials. Structural
/// equality compares both halves verbatim; `equivalent` compares the
/// fractions as rational functions by cross-multiplication, which is the
/// form tests want.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFraction {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
}

impl PolyFraction {
    /// Equality as rational functions: `a/b == c/d` iff `a·d == c·b`.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.numerator.mul(&other.denominator) == other.numerator.mul(&self.denominator)
    }
}

impl fmt::Display for PolyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}
