//! Fraction-free Buchberger over Z[x] with primitive content.
//!
//! Polynomials are kept primitive with positive leading coefficient. The
//! reducer list is sorted by leading monomial ascending and the first
//! divisor in that order is always used, so every run is deterministic.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::Arc;

use dashu_int::ops::{Abs, Gcd};
use dashu_int::{IBig, Sign};
use num_bigint::BigInt;

use crate::poly::{Monomial, Polynomial, Rational, VarContext};

use super::order::TermOrder;
use super::GroebnerError;

pub(crate) fn to_ibig(b: &BigInt) -> IBig {
    IBig::from_le_bytes(&b.to_signed_bytes_le())
}

pub(crate) fn to_bigint(i: &IBig) -> BigInt {
    BigInt::from_signed_bytes_le(&i.to_le_bytes())
}

fn gcd(a: &IBig, b: &IBig) -> IBig {
    if a.is_zero() {
        return b.clone().abs();
    }
    if b.is_zero() {
        return a.clone().abs();
    }
    IBig::from(a.gcd(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    /// Strictly decreasing in the engine's term order.
    pub terms: Vec<(Monomial, IBig)>,
}

impl IntPoly {
    pub fn from_polynomial(p: &Polynomial, order: TermOrder) -> IntPoly {
        let prim = p.primitive_integer();
        let mut terms: Vec<(Monomial, IBig)> = prim
            .terms()
            .iter()
            .map(|(m, c)| (m.clone(), to_ibig(c.numer())))
            .collect();
        if order != TermOrder::Lex {
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        let mut out = IntPoly { terms };
        out.make_primitive();
        out
    }

    /// Rational polynomial with the same zero set, made monic with respect to
    /// the engine order.
    pub fn to_monic(&self, ctx: &Arc<VarContext>) -> Polynomial {
        let lc = match self.terms.first() {
            Some((_, c)) => to_bigint(c),
            None => return Polynomial::zero(ctx),
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), Rational::new(to_bigint(c), lc.clone())))
            .collect();
        Polynomial::from_terms(ctx, terms)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &IBig {
        &self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = IBig::ZERO;
        for (_, c) in &self.terms {
            g = gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.sign() == Sign::Negative {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
    }
}

/// Merges `a·p - b·mult·g` where `p` is given in ascending order (lead last)
/// and `g_terms` in descending order. Result is ascending.
fn sub_scaled_ascending(
    order: TermOrder,
    p_asc: Vec<(Monomial, IBig)>,
    a: &IBig,
    b: &IBig,
    mult: &Monomial,
    g_terms: &[(Monomial, IBig)],
) -> Vec<(Monomial, IBig)> {
    let mut out = Vec::with_capacity(p_asc.len() + g_terms.len());
    let scale_p = !a.is_one();
    let neg_b = -b;
    let scaled = |c: IBig| if scale_p { c * a } else { c };
    let mut g_iter = g_terms.iter().rev().map(|(m, c)| (m.mul(mult), &neg_b * c));
    let mut p_iter = p_asc.into_iter();
    let mut pcur = p_iter.next();
    let mut gcur = g_iter.next();
    loop {
        match (pcur.take(), gcur.take()) {
            (None, None) => break,
            (Some((m, c)), None) => {
                out.push((m, scaled(c)));
                pcur = p_iter.next();
            }
            (None, Some(t)) => {
                out.push(t);
                gcur = g_iter.next();
            }
            (Some((pm, pc)), Some((gm, gc))) => match order.cmp(&pm, &gm) {
                Ordering::Less => {
                    out.push((pm, scaled(pc)));
                    pcur = p_iter.next();
                    gcur = Some((gm, gc));
                }
                Ordering::Greater => {
                    out.push((gm, gc));
                    gcur = g_iter.next();
                    pcur = Some((pm, pc));
                }
                Ordering::Equal => {
                    let v = scaled(pc) + gc;
                    if !v.is_zero() {
                        out.push((pm, v));
                    }
                    pcur = p_iter.next();
                    gcur = g_iter.next();
                }
            },
        }
    }
    out
}

/// Step counter shared by every reduction of one computation.
pub(crate) struct Budget {
    pub steps: u64,
    pub limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { steps: 0, limit }
    }

    pub fn tick(&mut self) -> Result<(), GroebnerError> {
        self.steps += 1;
        if self.steps > self.limit {
            Err(GroebnerError::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Full fraction-free reduction of `p` by `reducers` (first divisor in the
/// given slice order wins). The result is primitive with positive leading
/// coefficient.
pub(crate) fn reduce_full(
    order: TermOrder,
    p: &IntPoly,
    reducers: &[&IntPoly],
    budget: &mut Budget,
) -> Result<IntPoly, GroebnerError> {
    let mut work: Vec<(Monomial, IBig)> = p.terms.iter().rev().cloned().collect();
    let mut rem: Vec<(Monomial, IBig)> = Vec::new();
    let mut since_content = 0usize;
    while let Some((m, c)) = work.last() {
        match reducers.iter().find(|g| g.lm().divides(m)) {
            None => {
                let t = work.pop().expect("nonempty");
                rem.push(t);
            }
            Some(g) => {
                budget.tick()?;
                let lg = g.lc();
                let d = gcd(c, lg);
                let a = lg / &d;
                let b = c / &d;
                let mult = g.lm().quotient_of(m);
                // the lead term cancels exactly; drop it before merging
                let mut w = std::mem::take(&mut work);
                w.pop();
                work = sub_scaled_ascending(order, w, &a, &b, &mult, &g.terms[1..]);
                if !a.is_one() {
                    for (_, rc) in rem.iter_mut() {
                        *rc *= &a;
                    }
                }
                since_content += 1;
                if since_content >= 8 {
                    since_content = 0;
                    strip_common_content(&mut work, &mut rem);
                }
            }
        }
    }
    let mut out = IntPoly { terms: rem };
    out.make_primitive();
    Ok(out)
}

fn strip_common_content(work: &mut [(Monomial, IBig)], rem: &mut [(Monomial, IBig)]) {
    let mut g = IBig::ZERO;
    for (_, c) in work.iter().chain(rem.iter()) {
        g = gcd(&g, c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in work.iter_mut().chain(rem.iter_mut()) {
        *c = &*c / &g;
    }
}

fn s_poly(order: TermOrder, f: &IntPoly, g: &IntPoly) -> IntPoly {
    let l = f.lm().lcm(g.lm());
    let mf = f.lm().quotient_of(&l);
    let mg = g.lm().quotient_of(&l);
    let d = gcd(f.lc(), g.lc());
    let a = g.lc() / &d;
    let b = f.lc() / &d;
    let f_tail: Vec<(Monomial, IBig)> = f.terms[1..]
        .iter()
        .rev()
        .map(|(m, c)| (m.mul(&mf), c.clone()))
        .collect();
    let asc = sub_scaled_ascending(order, f_tail, &a, &b, &mg, &g.terms[1..]);
    let mut out = IntPoly {
        terms: asc.into_iter().rev().collect(),
    };
    out.make_primitive();
    out
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

pub(crate) struct Engine {
    order: TermOrder,
    polys: Vec<IntPoly>,
    /// Active indices sorted by leading monomial ascending.
    reducers: Vec<usize>,
    pairs: Vec<Pair>,
    budget: Budget,
}

impl Engine {
    pub fn new(order: TermOrder, limit: u64) -> Self {
        Engine {
            order,
            polys: Vec::new(),
            reducers: Vec::new(),
            pairs: Vec::new(),
            budget: Budget::new(limit),
        }
    }

    fn reduce(&mut self, p: &IntPoly) -> Result<IntPoly, GroebnerError> {
        let refs: Vec<&IntPoly> = self.reducers.iter().map(|&i| &self.polys[i]).collect();
        reduce_full(self.order, p, &refs, &mut self.budget)
    }

    /// Runs Buchberger on `gens`, whose terms must already be sorted in the
    /// engine order. Returns the reduced basis sorted by leading monomial
    /// ascending (or `[1]` for the unit ideal) with the step count.
    pub fn run(mut self, mut gens: Vec<IntPoly>) -> Result<(Vec<IntPoly>, u64), GroebnerError> {
        gens.retain(|g| !g.is_zero());
        let order = self.order;
        gens.sort_by(|a, b| {
            order
                .cmp(a.lm(), b.lm())
                .then(a.terms.len().cmp(&b.terms.len()))
        });
        for g in gens {
            let g = self.reduce(&g)?;
            if g.is_zero() {
                continue;
            }
            if g.is_constant() {
                return Ok((vec![g], self.budget.steps));
            }
            self.insert(g);
        }
        while let Some(pair) = self.select_pair() {
            let s = s_poly(order, &self.polys[pair.i], &self.polys[pair.j]);
            if s.is_zero() {
                continue;
            }
            let h = self.reduce(&s)?;
            if h.is_zero() {
                continue;
            }
            if h.is_constant() {
                return Ok((vec![h], self.budget.steps));
            }
            self.insert(h);
        }
        let basis = self.finish()?;
        Ok((basis, self.budget.steps))
    }

    /// Normal selection strategy: smallest lcm, ties by index.
    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let better = order
                .cmp(&a.lcm, &b.lcm)
                .then((a.i, a.j).cmp(&(b.i, b.j)))
                .is_lt();
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    /// Gebauer–Möller update with the product and chain criteria.
    fn insert(&mut self, h: IntPoly) {
        let hi = self.polys.len();
        let hlm = h.lm().clone();
        self.polys.push(h);

        let mut candidates: VecDeque<(usize, Monomial, bool)> = self
            .reducers
            .iter()
            .map(|&g| {
                let glm = self.polys[g].lm();
                (g, hlm.lcm(glm), hlm.is_coprime(glm))
            })
            .collect();

        // a new pair survives if its leads are coprime or no other new pair
        // has an lcm dividing its own; coprime pairs stay as witnesses and
        // are dropped afterwards (product criterion)
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        while let Some((g, l, coprime)) = candidates.pop_front() {
            let dominated = !coprime
                && candidates
                    .iter()
                    .chain(kept.iter())
                    .any(|(_, l2, _)| l2.divides(&l));
            if !dominated {
                kept.push((g, l, coprime));
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(_, _, coprime)| !coprime)
            .map(|(g, l, _)| Pair {
                i: g.min(hi),
                j: g.max(hi),
                lcm: l,
            })
            .collect();

        // chain criterion on the old pairs
        let polys = &self.polys;
        self.pairs.retain(|p| {
            if !hlm.divides(&p.lcm) {
                return true;
            }
            let li = hlm.lcm(polys[p.i].lm());
            let lj = hlm.lcm(polys[p.j].lm());
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(new_pairs);

        // retire basis elements whose leading monomial h divides
        self.reducers.retain(|&g| !hlm.divides(polys[g].lm()));
        let order = self.order;
        let at = self
            .reducers
            .partition_point(|&g| order.cmp(polys[g].lm(), &hlm).is_lt());
        self.reducers.insert(at, hi);
    }

    /// Minimalizes and inter-reduces the active set.
    fn finish(&mut self) -> Result<Vec<IntPoly>, GroebnerError> {
        let basis: Vec<&IntPoly> = self.reducers.iter().map(|&i| &self.polys[i]).collect();
        let mut minimal: Vec<IntPoly> = Vec::with_capacity(basis.len());
        for (k, g) in basis.iter().enumerate() {
            let redundant = basis
                .iter()
                .enumerate()
                .any(|(j, o)| j != k && o.lm().divides(g.lm()) && (o.lm() != g.lm() || j < k));
            if !redundant {
                minimal.push((*g).clone());
            }
        }
        let order = self.order;
        minimal.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        let mut reduced = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let others: Vec<&IntPoly> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, g)| g)
                .collect();
            // no other lead divides this lead, so only the tail is rewritten
            reduced.push(reduce_full(order, &minimal[k], &others, &mut self.budget)?);
        }
        Ok(reduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, VarContext};

    #[test]
    fn bigint_round_trip() {
        for v in [
            "0",
            "1",
            "-1",
            "255",
            "-256",
            "123456789012345678901234567890",
            "-98765432109876543210",
        ] {
            let b: BigInt = v.parse().unwrap();
            assert_eq!(to_bigint(&to_ibig(&b)), b);
        }
    }

    #[test]
    fn from_polynomial_is_primitive_and_ordered() {
        let c = VarContext::decision(2);
        let p = parse_polynomial("-2/3*x1 + 4/9*x2^2", &c).unwrap();
        let q = IntPoly::from_polynomial(&p, TermOrder::DegRevLex);
        assert_eq!(q.terms[0].0.exponents(), &[0, 2]);
        assert_eq!(q.terms[0].1, IBig::from(2));
        assert_eq!(q.terms[1].1, IBig::from(-3));
        let q = IntPoly::from_polynomial(&p, TermOrder::Lex);
        assert_eq!(q.terms[0].1, IBig::from(3));
        assert_eq!(q.terms[1].1, IBig::from(-2));
    }
}
