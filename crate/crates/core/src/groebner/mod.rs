//! Multivariate division, Buchberger's algorithm and elimination views.

mod engine;
mod fglm;
mod order;

use std::sync::Arc;

use crate::poly::{Polynomial, VarContext};

use engine::{Budget, Engine, IntPoly};
pub use order::TermOrder;

/// Default cap on elementary reduction steps for one Buchberger run.
pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroebnerError {
    #[error("reduction step budget of {limit} exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("kept variables are not a trailing segment of the context order")]
    NotASuffix,
    #[error("polynomials belong to different variable contexts")]
    ContextMismatch,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
}

#[derive(Debug, Clone)]
pub struct Ideal {
    ctx: Arc<VarContext>,
    generators: Vec<Polynomial>,
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ctx: &Arc<VarContext>, generators: Vec<Polynomial>) -> Result<Self, GroebnerError> {
        if generators.iter().any(|g| !g.context().same_as(ctx)) {
            return Err(GroebnerError::ContextMismatch);
        }
        Ok(Ideal {
            ctx: ctx.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ctx: Arc<VarContext>,
    /// Sorted by leading monomial ascending.
    basis: Vec<Polynomial>,
    reduced: bool,
    steps: u64,
}

impl GroebnerBasis {
    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Reduction steps spent computing this basis.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// True iff the basis is `{1}`, i.e. the variety is empty.
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.basis)
    }

    /// One element per line in canonical text, sorted.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self.basis.iter().map(|p| p.to_string()).collect();
        lines.sort();
        lines.join("\n")
    }
}

/// Remainder of `p` on division by `divisors`, reducing every term and always
/// using the first divisor (in list order) whose leading monomial divides it.
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial]) -> Polynomial {
    let ctx = p.context().clone();
    let leads: Vec<_> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (m, c) = g.leading_term().expect("nonzero");
            (m.clone(), c.clone(), g)
        })
        .collect();
    let mut work = p.clone();
    let mut rem = Vec::new();
    while let Some((m, c)) = work.terms().first().cloned() {
        match leads.iter().find(|(lm, _, _)| lm.divides(&m)) {
            Some((lm, lc, g)) => {
                let q = lm.quotient_of(&m);
                let factor = &c / lc;
                work = &work - &g.mul_monomial(&q, &factor);
            }
            None => {
                rem.push((m.clone(), c.clone()));
                let rest = work.terms()[1..].to_vec();
                work = Polynomial::from_sorted_terms(&ctx, rest);
            }
        }
    }
    Polynomial::from_sorted_terms(&ctx, rem)
}

/// `(L/lt(p))·p − (L/lt(q))·q` with `L` the lcm of the leading monomials.
pub fn s_polynomial(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, GroebnerError> {
    if !p.context().same_as(q.context()) {
        return Err(GroebnerError::ContextMismatch);
    }
    let (pm, pc) = p
        .leading_term()
        .map_err(|_| GroebnerError::ZeroPolynomial)?;
    let (qm, qc) = q
        .leading_term()
        .map_err(|_| GroebnerError::ZeroPolynomial)?;
    let l = pm.lcm(qm);
    let left = p.mul_monomial(&pm.quotient_of(&l), &pc.recip());
    let right = q.mul_monomial(&qm.quotient_of(&l), &qc.recip());
    Ok(&left - &right)
}

/// Buchberger criterion: every pairwise S-polynomial reduces to zero.
pub fn is_groebner(g: &[Polynomial]) -> bool {
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            match s_polynomial(&g[i], &g[j]) {
                Ok(s) if normal_form(&s, g).is_zero() => {}
                _ => return false,
            }
        }
    }
    true
}

/// Reduced lex Gröbner basis of `ideal` using the default step budget.
pub fn buchberger(ideal: &Ideal) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with_budget(ideal, DEFAULT_STEP_BUDGET)
}

/// Reduced lex Gröbner basis of `ideal`, computed through degree reverse
/// lex (see [`lex_basis_via`]).
pub fn buchberger_with_budget(ideal: &Ideal, budget: u64) -> Result<GroebnerBasis, GroebnerError> {
    lex_basis_via(ideal, TermOrder::DegRevLex, budget)
}

/// Reduced lex Gröbner basis of `ideal`, first solving in `order`.
///
/// A zero-dimensional ideal is converted from the `order` basis by linear
/// algebra in the quotient ring; any other ideal falls back to Buchberger
/// in lex. Every route gives the same reduced basis.
pub fn lex_basis_via(
    ideal: &Ideal,
    order: TermOrder,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    if order == TermOrder::Lex {
        return buchberger_lex_direct(ideal, budget);
    }
    let ctx = ideal.context().clone();
    let n = ctx.len();
    let gens = int_gens(ideal, order);
    let (basis, steps) = Engine::new(order, budget).run(gens)?;
    let mut counter = Budget {
        steps,
        limit: budget,
    };
    match fglm::fglm(order, &basis, n, 0..n, &mut counter)? {
        Some(lex) => Ok(from_rational_terms(&ctx, lex, counter.steps)),
        None => {
            let mut direct = buchberger_lex_direct(ideal, budget.saturating_sub(counter.steps))?;
            direct.steps += counter.steps;
            Ok(direct)
        }
    }
}

/// Reduced lex Gröbner basis computed by running Buchberger in lex order
/// throughout.
pub fn buchberger_lex_direct(ideal: &Ideal, budget: u64) -> Result<GroebnerBasis, GroebnerError> {
    let ctx = ideal.context().clone();
    let gens = int_gens(ideal, TermOrder::Lex);
    let (basis, steps) = Engine::new(TermOrder::Lex, budget).run(gens)?;
    let mut polys: Vec<Polynomial> = basis.iter().map(|g| g.to_monic(&ctx)).collect();
    polys.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    Ok(GroebnerBasis {
        ctx,
        basis: polys,
        reduced: true,
        steps,
    })
}

/// Reduced lex Gröbner basis of the elimination ideal `I ∩ Q[x_start, ..]`.
///
/// Equal to `eliminate_before(&buchberger(ideal)?, start)`. When the
/// elimination ideal is zero-dimensional it is obtained from a block order
/// basis without computing the full lex basis.
pub fn elimination_basis(
    ideal: &Ideal,
    start: usize,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    let ctx = ideal.context().clone();
    let n = ctx.len();
    if start == 0 {
        return buchberger_with_budget(ideal, budget);
    }
    let order = TermOrder::Elimination { split: start };
    let gens = int_gens(ideal, order);
    let (basis, steps) = Engine::new(order, budget).run(gens)?;
    let kept: Vec<IntPoly> = basis
        .into_iter()
        .filter(|g| g.lm().exponents()[..start].iter().all(|&e| e == 0))
        .collect();
    let mut counter = Budget {
        steps,
        limit: budget,
    };
    match fglm::fglm(order, &kept, n, start..n, &mut counter)? {
        Some(lex) => Ok(from_rational_terms(&ctx, lex, counter.steps)),
        None => {
            let full = buchberger_lex_direct(ideal, budget.saturating_sub(counter.steps))?;
            let mut g = eliminate_before(&full, start);
            g.steps += counter.steps;
            Ok(g)
        }
    }
}

/// Same result as [`elimination_basis`] for ideals that contain
/// `x_i^2 - x_i` for every kept variable.
///
/// Such an ideal is the intersection of its specializations at the binary
/// points, so the elimination ideal is the vanishing ideal of the points
/// whose specialization is not the unit ideal. Each specialization is a
/// Gröbner basis computation in the eliminated variables only. Ideals
/// without the binary relations are handed to [`elimination_basis`].
pub fn binary_elimination_basis(
    ideal: &Ideal,
    start: usize,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    let ctx = ideal.context().clone();
    let n = ctx.len();
    let has_relations = (start..n).all(|i| {
        let rel =
            &(&Polynomial::var(&ctx, i) * &Polynomial::var(&ctx, i)) - &Polynomial::var(&ctx, i);
        ideal.generators().iter().any(|g| g.monic() == rel)
    });
    if start == 0 || start >= n || !has_relations {
        return elimination_basis(ideal, start, budget);
    }
    let width = n - start;
    if width >= 31 {
        return elimination_basis(ideal, start, budget);
    }
    let mut steps = 0u64;
    let mut points: Vec<Vec<crate::poly::Rational>> = Vec::new();
    for code in 0u32..(1u32 << width) {
        let values: Vec<crate::poly::Rational> = (0..width)
            .map(|i| crate::poly::Rational::from_integer(((code >> (width - 1 - i)) & 1).into()))
            .collect();
        let assignment: std::collections::BTreeMap<usize, crate::poly::Rational> = values
            .iter()
            .enumerate()
            .map(|(i, v)| (start + i, v.clone()))
            .collect();
        let gens: Vec<IntPoly> = ideal
            .generators()
            .iter()
            .map(|g| {
                let sub = g
                    .evaluate(&assignment)
                    .expect("positions inside the context");
                IntPoly::from_polynomial(&sub, TermOrder::DegRevLex)
            })
            .collect();
        let (basis, used) =
            Engine::new(TermOrder::DegRevLex, budget.saturating_sub(steps)).run(gens)?;
        steps += used;
        let unit = basis.len() == 1 && basis[0].is_constant();
        if !unit {
            points.push(values);
        }
    }
    let lex = fglm::vanishing_ideal(n, start..n, &points)?;
    Ok(from_rational_terms(&ctx, lex, steps))
}

fn int_gens(ideal: &Ideal, order: TermOrder) -> Vec<IntPoly> {
    ideal
        .generators()
        .iter()
        .map(|g| IntPoly::from_polynomial(g, order))
        .collect()
}

fn from_rational_terms(
    ctx: &Arc<VarContext>,
    lex: Vec<Vec<(crate::poly::Monomial, crate::poly::Rational)>>,
    steps: u64,
) -> GroebnerBasis {
    let basis = lex
        .into_iter()
        .map(|t| Polynomial::from_terms(ctx, t))
        .collect();
    GroebnerBasis {
        ctx: ctx.clone(),
        basis,
        reduced: true,
        steps,
    }
}

/// Elements of `g` whose support lies in `keep`, which must be a trailing
/// segment of the context order (positions `len - keep.len() .. len`).
pub fn elimination_subset(
    g: &GroebnerBasis,
    keep: &[usize],
) -> Result<GroebnerBasis, GroebnerError> {
    let n = g.ctx.len();
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let start = n - sorted.len().min(n);
    if sorted.len() != keep.len() || sorted.iter().copied().ne(start..n) {
        return Err(GroebnerError::NotASuffix);
    }
    let basis = g
        .basis
        .iter()
        .filter(|p| p.leading_var().is_none_or(|v| v >= start))
        .cloned()
        .collect();
    Ok(GroebnerBasis {
        ctx: g.ctx.clone(),
        basis,
        reduced: g.reduced,
        steps: g.steps,
    })
}

/// Elimination subset keeping every variable from position `start` on.
pub fn eliminate_before(g: &GroebnerBasis, start: usize) -> GroebnerBasis {
    let keep: Vec<usize> = (start..g.ctx.len()).collect();
    elimination_subset(g, &keep).expect("suffix by construction")
}

/// True iff `p` lies in the ideal generated by the basis.
pub fn contains(g: &GroebnerBasis, p: &Polynomial) -> bool {
    g.normal_form(p).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Block, ContextBuilder};

    fn ctx(names: usize) -> Arc<VarContext> {
        VarContext::decision(names)
    }

    fn p(s: &str, c: &Arc<VarContext>) -> Polynomial {
        parse_polynomial(s, c).unwrap()
    }

    fn gb(gens: &[&str], c: &Arc<VarContext>) -> GroebnerBasis {
        let ideal = Ideal::new(c, gens.iter().map(|s| p(s, c)).collect()).unwrap();
        buchberger(&ideal).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let c = ctx(2);
        assert_eq!(
            normal_form(&p("x1^2", &c), &[p("x1^2 - x1", &c)]).to_string(),
            "x1"
        );
        assert!(normal_form(&p("x1", &c), &[p("x1", &c)]).is_zero());
        // the only common root of {x1 - 1, x2 - 2} is (1, 2), where x1*x2 = 2
        let nf = normal_form(&p("x1*x2", &c), &[p("x1 - 1", &c), p("x2 - 2", &c)]);
        assert_eq!(nf.to_string(), "2");
    }

    #[test]
    fn s_polynomial_examples() {
        let c = ctx(2);
        let f = p("x1 - x2", &c);
        let g = p("x2^2", &c);
        // x2^2*(x1 - x2) - x1*x2^2 = -x2^3
        let s = s_polynomial(&f, &g).unwrap();
        assert_eq!(s.to_string(), "-x2^3");
        assert!(normal_form(&s, &[f.clone(), g.clone()]).is_zero());
        assert!(s_polynomial(&f, &f).unwrap().is_zero());
        let s = s_polynomial(&p("x1", &c), &p("x2", &c)).unwrap();
        assert!(normal_form(&s, &[p("x1", &c), p("x2", &c)]).is_zero());
        assert_eq!(
            s_polynomial(&f, &Polynomial::zero(&c)).unwrap_err(),
            GroebnerError::ZeroPolynomial
        );
    }

    #[test]
    fn buchberger_examples() {
        let c = ctx(2);
        assert_eq!(gb(&["x1^2 - x1"], &c).dump(), "x1^2 - x1");
        let unit = gb(&["x1", "x1 - 1"], &c);
        assert!(unit.is_unit());
        let g = gb(&["x1 - x2", "x2^2"], &c);
        assert_eq!(g.dump(), "x1 - x2\nx2^2");
        assert!(is_groebner(g.polys()));
    }

    #[test]
    fn is_groebner_examples() {
        let c = ctx(2);
        assert!(is_groebner(&[p("x1^2 - x1", &c)]));
        assert!(is_groebner(&[p("x1 - x2", &c), p("x2^2", &c)]));
        // S(x1*x2 - 1, x1^2 - x2) = x1*(x1*x2 - 1) - x2*(x1^2 - x2) = x2^2 - x1,
        // whose leading term x1 is not divisible by x1*x2 or x1^2
        let f = p("x1*x2 - 1", &c);
        let g = p("x1^2 - x2", &c);
        let s = s_polynomial(&f, &g).unwrap();
        assert_eq!(s.to_string(), "-x1 + x2^2");
        assert!(!normal_form(&s, &[f.clone(), g.clone()]).is_zero());
        assert!(!is_groebner(&[f, g]));
    }

    #[test]
    fn elimination_examples() {
        let mut b = ContextBuilder::new();
        b.push_block(Block::Decision, 1)
            .push_block(Block::Objective, 1);
        let c = b.build();
        let g = gb(&["x1 - y1", "y1^2 - 1"], &c);
        assert_eq!(elimination_subset(&g, &[1]).unwrap().dump(), "y1^2 - 1");
        assert_eq!(elimination_subset(&g, &[0, 1]).unwrap(), g);
        assert_eq!(
            elimination_subset(&g, &[0]).unwrap_err(),
            GroebnerError::NotASuffix
        );
        let unit = gb(&["x1", "x1 - 1"], &c);
        assert!(elimination_subset(&unit, &[1]).unwrap().is_unit());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let c = ctx(3);
        let ideal = Ideal::new(
            &c,
            vec![
                p("x1^2 - x2*x3 + 1", &c),
                p("x2^2 - x1*x3 - 2", &c),
                p("x3^2 - x1*x2 + 3", &c),
            ],
        )
        .unwrap();
        assert_eq!(
            buchberger_with_budget(&ideal, 3).unwrap_err(),
            GroebnerError::BudgetExceeded { limit: 3 }
        );
        let full = buchberger(&ideal).unwrap();
        assert!(is_groebner(full.polys()));
        for g in ideal.generators() {
            assert!(contains(&full, g));
        }
    }
}
