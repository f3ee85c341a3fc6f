//! Canonical text form of polynomials and the expression parser.
//!
//! Terms are written in decreasing lex order as `c/d*v1^e1*...*vk^ek`, joined
//! by ` + ` / ` - `. Unit coefficients and unit exponents are elided; the zero
//! polynomial prints as `0`.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Exponent, Monomial, PolyError, Polynomial, Rational, VarContext};

fn write_rational(f: &mut impl fmt::Write, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

fn write_monomial(f: &mut impl fmt::Write, ctx: &VarContext, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (pos, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_char('*')?;
        }
        first = false;
        f.write_str(ctx.name(pos))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write_rational(f, &abs)?;
            } else {
                if !abs.is_one() {
                    write_rational(f, &abs)?;
                    f.write_char('*')?;
                }
                write_monomial(f, self.context(), m)?;
            }
        }
        Ok(())
    }
}

/// Parses `[coef][*var[^exp]]…` terms separated by `+`/`-`.
///
/// Whitespace is ignored, repeated variables accumulate exponents and
/// several numeric factors in one term multiply.
pub fn parse_polynomial(text: &str, ctx: &Arc<VarContext>) -> Result<Polynomial, PolyError> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx,
    }
    .expression()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a Arc<VarContext>,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Syntax {
            offset: self.pos,
            message: msg.into(),
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

    fn expression(mut self) -> Result<Polynomial, PolyError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            None => return Err(self.err("empty expression")),
            Some(b'-') => {
                self.pos += 1;
                -Rational::one()
            }
            Some(b'+') => {
                self.pos += 1;
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, c * &sign));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rational::one();
                }
                Some(ch) => return Err(self.err(format!("unexpected character '{}'", ch as char))),
            }
        }
        Ok(Polynomial::from_terms(self.ctx, terms))
    }

    fn term(&mut self) -> Result<(Monomial, Rational), PolyError> {
        let mut mono = Monomial::one(self.ctx.len());
        let mut coeff = Rational::one();
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let num = self.integer()?;
                    let value = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        self.skip_ws();
                        let den = self.integer()?;
                        if den.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        Rational::new(num, den)
                    } else {
                        Rational::from_integer(num)
                    };
                    coeff *= value;
                }
                Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric()
                            || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    let var = self.ctx.position(name).ok_or_else(|| PolyError::Syntax {
                        offset: start,
                        message: format!("unknown variable '{name}'"),
                    })?;
                    let exp: Exponent = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        self.skip_ws();
                        let at = self.pos;
                        let e = self.integer()?;
                        Exponent::try_from(e).map_err(|_| PolyError::Syntax {
                            offset: at,
                            message: "exponent out of range".into(),
                        })?
                    } else {
                        1
                    };
                    let total = mono
                        .exponent(var)
                        .checked_add(exp)
                        .ok_or_else(|| self.err("exponent overflow"))?;
                    mono.set(var, total);
                }
                Some(ch) => {
                    return Err(self.err(format!(
                        "expected coefficient or variable, found '{}'",
                        ch as char
                    )))
                }
                None => {
                    return Err(self.err("expected coefficient or variable, found end of input"))
                }
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((mono, coeff));
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digits parse"))
    }
}

/// Parses `n` or `n/d` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::Syntax {
        offset: 0,
        message: format!("invalid rational '{text}'"),
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `num/den` text, always with an explicit denominator.
pub fn format_rational(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarContext;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_grammar_examples() {
        let ctx = VarContext::decision(3);
        let p = parse_polynomial("3*x1 + x2", &ctx).unwrap();
        assert_eq!(p.to_string(), "3*x1 + x2");
        let q = parse_polynomial("-4/5*x1^2*x3", &ctx).unwrap();
        assert_eq!(q.terms().len(), 1);
        assert_eq!(q.terms()[0].1, r(-4, 5));
        assert_eq!(q.terms()[0].0.exponents(), &[2, 0, 1]);
        let s = parse_polynomial("x1*x1", &ctx).unwrap();
        assert_eq!(s.to_string(), "x1^2");
    }

    #[test]
    fn canonical_form_orders_and_elides() {
        let ctx = VarContext::decision(2);
        let p = parse_polynomial(" x2 - x1 +  x1^2 - 7 + 1/2*x1*x2", &ctx).unwrap();
        assert_eq!(p.to_string(), "x1^2 + 1/2*x1*x2 - x1 + x2 - 7");
        assert_eq!(parse_polynomial("x1 - x1", &ctx).unwrap().to_string(), "0");
        assert_eq!(parse_polynomial("-x2", &ctx).unwrap().to_string(), "-x2");
    }

    #[test]
    fn errors_report_offsets() {
        let ctx = VarContext::decision(2);
        match parse_polynomial("x1 + z9", &ctx) {
            Err(PolyError::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_polynomial("x1 +", &ctx) {
            Err(PolyError::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("", &ctx).is_err());
        assert!(parse_polynomial("3/0*x1", &ctx).is_err());
        assert!(parse_polynomial("x1 x2", &ctx).is_err());
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("-6/4").unwrap(), r(-3, 2));
        assert_eq!(parse_rational("5").unwrap(), r(5, 1));
        assert_eq!(format_rational(&r(5, 1)), "5/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
