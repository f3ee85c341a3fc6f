use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{Exponent, Monomial, PolyError, Rational, VarContext};

/// Sparse multivariate polynomial over Q.
///
/// Terms are kept in strictly decreasing lex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: Vec<(Monomial, Rational)>,
}

/// Shape of a polynomial as seen by the root finder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnivariateView {
    Constant(Rational),
    /// Dense coefficients, lowest degree first.
    Univariate {
        var: usize,
        coeffs: Vec<Rational>,
    },
    Multivariate,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Polynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rational) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(ctx.len()), c)]
        };
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, Rational::one())
    }

    pub fn var(ctx: &Arc<VarContext>, pos: usize) -> Self {
        assert!(pos < ctx.len(), "variable position out of range");
        Polynomial {
            ctx: ctx.clone(),
            terms: vec![(Monomial::var(ctx.len(), pos, 1), Rational::one())],
        }
    }

    pub fn var_named(ctx: &Arc<VarContext>, name: &str) -> Result<Self, PolyError> {
        let pos = ctx
            .position(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ctx, pos))
    }

    pub fn monomial(ctx: &Arc<VarContext>, mono: Monomial, c: Rational) -> Self {
        Self::from_terms(ctx, vec![(mono, c)])
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
    /// drops zeros.
    pub fn from_terms(ctx: &Arc<VarContext>, mut terms: Vec<(Monomial, Rational)>) -> Self {
        for (m, _) in &terms {
            assert_eq!(
                m.len(),
                ctx.len(),
                "monomial length differs from context size"
            );
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if matches!(out.last(), Some((_, c)) if c.is_zero()) {
            out.pop();
        }
        Polynomial {
            ctx: ctx.clone(),
            terms: out,
        }
    }

    /// Trusted constructor for terms already in canonical order.
    pub(crate) fn from_sorted_terms(
        ctx: &Arc<VarContext>,
        terms: Vec<(Monomial, Rational)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, pos: usize) -> Exponent {
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(pos))
            .max()
            .unwrap_or(0)
    }

    /// Positions of variables that occur with a nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ctx.len())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0))
            .collect()
    }

    /// Greatest variable occurring in the polynomial. Under lex it always
    /// appears in the leading monomial.
    pub fn leading_var(&self) -> Option<usize> {
        self.terms.first().and_then(|(m, _)| m.leading_var())
    }

    pub fn leading_term(&self) -> Result<(&Monomial, &Rational), PolyError> {
        self.terms
            .first()
            .map(|(m, c)| (m, c))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|(_, c)| c)
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(PolyError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        Ok(self.combine(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        Ok(self.combine(other, true))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ctx(other)?;
        Ok(self.product(other))
    }

    fn combine(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(
            b[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        Polynomial::from_sorted_terms(&self.ctx, out)
    }

    fn product(&self, other: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                let entry = acc.entry(m).or_insert_with(Rational::zero);
                *entry += c;
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Polynomial::from_sorted_terms(&self.ctx, terms)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial::from_sorted_terms(&self.ctx, terms)
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.mul(mono), k * c))
            .collect();
        Polynomial::from_sorted_terms(&self.ctx, terms)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        for _ in 0..e {
            acc = acc.product(self);
        }
        acc
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coefficient() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn partial_derivative(&self, pos: usize) -> Result<Polynomial, PolyError> {
        if pos >= self.ctx.len() {
            return Err(PolyError::UnknownVariable(format!("#{pos}")));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(pos);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.set(pos, e - 1);
            terms.push((dm, c * Rational::from_integer(e.into())));
        }
        // Lowering one exponent keeps distinct monomials distinct and ordered.
        Ok(Polynomial::from_sorted_terms(&self.ctx, terms))
    }

    pub fn partial_derivative_named(&self, name: &str) -> Result<Polynomial, PolyError> {
        let pos = self
            .ctx
            .position(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        self.partial_derivative(pos)
    }

    /// Substitutes the assigned variables; unassigned ones stay symbolic.
    pub fn evaluate(
        &self,
        assignment: &BTreeMap<usize, Rational>,
    ) -> Result<Polynomial, PolyError> {
        if let Some((&bad, _)) = assignment.iter().find(|(&p, _)| p >= self.ctx.len()) {
            return Err(PolyError::UnknownVariable(format!("#{bad}")));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = m.clone();
            for (&pos, val) in assignment {
                let e = m.exponent(pos);
                if e > 0 {
                    coeff *= pow_rational(val, e);
                    rest.set(pos, 0);
                }
            }
            terms.push((rest, coeff));
        }
        Ok(Polynomial::from_terms(&self.ctx, terms))
    }

    pub fn evaluate_named(&self, assignment: &[(&str, Rational)]) -> Result<Polynomial, PolyError> {
        let mut map = BTreeMap::new();
        for (name, v) in assignment {
            let pos = self
                .ctx
                .position(name)
                .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
            map.insert(pos, v.clone());
        }
        self.evaluate(&map)
    }

    /// Full evaluation at a point given as one value per context variable.
    pub fn eval_point(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.ctx.len(), "point dimension mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (pos, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rational(&point[pos], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn univariate_view(&self) -> UnivariateView {
        let support = self.support();
        match support.as_slice() {
            [] => UnivariateView::Constant(self.constant_value().unwrap_or_else(Rational::zero)),
            [var] => {
                let deg = self.degree_in(*var) as usize;
                let mut coeffs = vec![Rational::zero(); deg + 1];
                for (m, c) in &self.terms {
                    coeffs[m.exponent(*var) as usize] = c.clone();
                }
                UnivariateView::Univariate { var: *var, coeffs }
            }
            _ => UnivariateView::Multivariate,
        }
    }

    /// Re-expresses the polynomial in a larger context that contains every
    /// variable of the current one (matched by name). Missing variables get
    /// zero exponents.
    pub fn embed(&self, target: &Arc<VarContext>) -> Result<Polynomial, PolyError> {
        let mapping: Vec<usize> = self
            .ctx
            .vars()
            .iter()
            .map(|v| {
                target
                    .position(&v.name)
                    .ok_or_else(|| PolyError::UnknownVariable(v.name.clone()))
            })
            .collect::<Result<_, _>>()?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.extended(&mapping, target.len()), c.clone()))
            .collect();
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Substitutes each variable `pos` by `images[pos]` (all in `target`).
    pub fn substitute(&self, target: &Arc<VarContext>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ctx.len());
        let mut acc = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (pos, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.product(&images[pos].pow(e as u32));
                }
            }
            acc = acc.combine(&t, false);
        }
        acc
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_integer(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut den_lcm = num_bigint::BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = num_bigint::BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&v);
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.terms[0].1.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

pub(crate) fn pow_rational(v: &Rational, e: Exponent) -> Rational {
    num_traits::pow(v.clone(), e as usize)
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

// Operator forms panic on context mismatch; the checked methods above
// report it as an error instead.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs).expect("polynomial context mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::sub(self, rhs).expect("polynomial context mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs).expect("polynomial context mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
