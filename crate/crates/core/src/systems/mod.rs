//! Polynomial systems whose varieties encode the efficient points of a
//! multiobjective binary program.
//!
//! Every builder returns a [`TransformedSystem`]: an ideal in a context whose
//! lex order places the decision block last, so that the elimination ideal in
//! `x` (or the objective block for [`build_alg1`]) can be read off a reduced
//! lex basis.

mod instance;

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::groebner::{GroebnerError, Ideal};
use crate::poly::{rat, Block, ContextBuilder, Polynomial, Rational, VarContext};

pub use instance::{
    binarize, slack_transform, BitLayout, ProblemInstance, SlackMode, SlackedConstraints,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("binarization requires integer bounds")]
    MissingBounds,
    #[error("bound of variable {index} must be at least 1")]
    InvalidBound { index: usize },
    #[error("instance has non-binary variables; binarize it first")]
    NotBinary,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Alg1,
    Kkt,
    Nr,
    Fj,
    Mofj,
}

#[derive(Debug, Clone)]
pub struct TransformedSystem {
    context: Arc<VarContext>,
    generators: Ideal,
    solve_order: Vec<usize>,
    sign_filters: BTreeSet<usize>,
    kind: SystemKind,
    slack_mode: SlackMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SystemStats {
    pub n_vars: usize,
    pub n_gens: usize,
    pub max_deg: u32,
}

impl TransformedSystem {
    fn new(
        context: Arc<VarContext>,
        generators: Vec<Polynomial>,
        sign_filters: BTreeSet<usize>,
        kind: SystemKind,
        slack_mode: SlackMode,
    ) -> Self {
        let generators =
            Ideal::new(&context, generators).expect("generators are built in the system context");
        let solve_order = (0..context.len()).rev().collect();
        TransformedSystem {
            context,
            generators,
            solve_order,
            sign_filters,
            kind,
            slack_mode,
        }
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.context
    }

    pub fn generators(&self) -> &Ideal {
        &self.generators
    }

    /// Variable positions, smallest (first to solve) first.
    pub fn solve_order(&self) -> &[usize] {
        &self.solve_order
    }

    pub fn sign_filters(&self) -> &BTreeSet<usize> {
        &self.sign_filters
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn slack_mode(&self) -> SlackMode {
        self.slack_mode
    }

    pub fn block(&self, block: Block) -> Vec<usize> {
        self.context.block_positions(block)
    }

    /// Position of the first decision variable; decision variables always
    /// form the trailing block of the conditions systems.
    pub fn decision_start(&self) -> usize {
        self.block(Block::Decision)
            .first()
            .copied()
            .unwrap_or(self.context.len())
    }

    pub fn stats(&self) -> SystemStats {
        system_stats(self)
    }
}

pub fn system_stats(ts: &TransformedSystem) -> SystemStats {
    let gens = ts.generators.generators();
    SystemStats {
        n_vars: ts.context.len(),
        n_gens: gens.len(),
        max_deg: gens.iter().map(Polynomial::total_degree).max().unwrap_or(0),
    }
}

/// Lower bound of `f` on the binary cube: every non-constant monomial takes
/// values in `{0, 1}`, so only negative coefficients can pull `f` down.
pub fn lower_bound(f: &Polynomial) -> Rational {
    f.terms().iter().fold(Rational::zero(), |acc, (m, c)| {
        if m.is_one() || c.is_negative() {
            acc + c
        } else {
            acc
        }
    })
}

fn lift(q: &Polynomial, ctx: &Arc<VarContext>) -> Polynomial {
    q.embed(ctx)
        .expect("source variables exist in the system context")
}

fn binary_relations(ctx: &Arc<VarContext>, xs: &[usize]) -> Vec<Polynomial> {
    xs.iter()
        .map(|&i| {
            let x = Polynomial::var(ctx, i);
            &(&x * &x) - &x
        })
        .collect()
}

fn sum_vars(ctx: &Arc<VarContext>, vars: &[usize]) -> Polynomial {
    vars.iter().fold(Polynomial::zero(ctx), |acc, &v| {
        &acc + &Polynomial::var(ctx, v)
    })
}

fn sum_squares(ctx: &Arc<VarContext>, vars: &[usize]) -> Polynomial {
    vars.iter().fold(Polynomial::zero(ctx), |acc, &v| {
        let t = Polynomial::var(ctx, v);
        &acc + &(&t * &t)
    })
}

/// Algorithm 1 system: `{h_r} ∪ {y_j - f_j} ∪ {x_i^2 - x_i}` plus slack
/// equalities in linear mode, ordered `x1 > … > xn > y1 > … > yk > w1 > … > wm`.
pub fn build_alg1(p: &ProblemInstance, mode: SlackMode) -> Result<TransformedSystem, SystemError> {
    p.require_binary()?;
    let slacked = slack_transform(p, mode);
    let mut b = ContextBuilder::new();
    b.push_block(Block::Decision, p.n())
        .push_block(Block::Objective, p.k())
        .push_block(Block::Slack, slacked.slacks.len());
    let ctx = b.build();
    let ys = ctx.block_positions(Block::Objective);
    let xs = ctx.block_positions(Block::Decision);
    let mut gens: Vec<Polynomial> = slacked.equalities.iter().map(|h| lift(h, &ctx)).collect();
    for (f, &y) in p.objectives().iter().zip(&ys) {
        gens.push(&Polynomial::var(&ctx, y) - &lift(f, &ctx));
    }
    gens.extend(slacked.slack_equalities.iter().map(|e| lift(e, &ctx)));
    gens.extend(binary_relations(&ctx, &xs));
    let filters = ctx.block_positions(Block::Slack).into_iter().collect();
    Ok(TransformedSystem::new(
        ctx,
        gens,
        filters,
        SystemKind::Alg1,
        mode,
    ))
}

/// Multiplier blocks shared by the conditions systems.
struct Multipliers {
    ctx: Arc<VarContext>,
    xs: Vec<usize>,
    beta: Vec<usize>,
    mu: Vec<usize>,
    nu: Vec<usize>,
    lambda: Vec<usize>,
    omega: Vec<usize>,
    gamma: Option<usize>,
    lambda0: Option<usize>,
}

struct Layout {
    lambda0: bool,
    scalarized: bool,
}

impl Multipliers {
    fn build(p: &ProblemInstance, slacked: &SlackedConstraints, layout: Layout) -> Self {
        let n_mu = slacked.equalities.len() + slacked.slack_equalities.len();
        let mut b = ContextBuilder::new();
        b.push_block(Block::Beta, p.n()).push_block(Block::Mu, n_mu);
        if layout.lambda0 {
            b.push_single(Block::Lambda0);
        }
        b.push_block(Block::Nu, p.k())
            .push_block(Block::Lambda, slacked.inequalities.len());
        if layout.scalarized {
            b.push_block(Block::Omega, p.k()).push_single(Block::Gamma);
        }
        b.push_block(Block::Slack, slacked.slacks.len())
            .push_block(Block::Decision, p.n());
        let ctx = b.build();
        let single = |blk| ctx.block_positions(blk).first().copied();
        Multipliers {
            xs: ctx.block_positions(Block::Decision),
            beta: ctx.block_positions(Block::Beta),
            mu: ctx.block_positions(Block::Mu),
            nu: ctx.block_positions(Block::Nu),
            lambda: ctx.block_positions(Block::Lambda),
            omega: ctx.block_positions(Block::Omega),
            gamma: single(Block::Gamma),
            lambda0: single(Block::Lambda0),
            ctx,
        }
    }

    fn var(&self, pos: usize) -> Polynomial {
        Polynomial::var(&self.ctx, pos)
    }

    /// `∑ w_i ∂f_i/∂x_l + ∑ λ_j ∂g_j/∂x_l + ∑ μ_r ∂h_r/∂x_l + β_l (2 x_l - 1)`
    /// for each `l`, where `w_i` is the objective weight polynomial.
    fn stationarity(
        &self,
        objective_weights: &[Polynomial],
        objectives: &[Polynomial],
        inequalities: &[Polynomial],
        equalities: &[Polynomial],
    ) -> Vec<Polynomial> {
        let ctx = &self.ctx;
        self.xs
            .iter()
            .enumerate()
            .map(|(l, &x)| {
                let d = |q: &Polynomial| q.partial_derivative(x).expect("x in context");
                let mut acc = Polynomial::zero(ctx);
                for (w, f) in objective_weights.iter().zip(objectives) {
                    acc = &acc + &(w * &d(f));
                }
                for (&lam, g) in self.lambda.iter().zip(inequalities) {
                    acc = &acc + &(&self.var(lam) * &d(g));
                }
                for (&mu, h) in self.mu.iter().zip(equalities) {
                    acc = &acc + &(&self.var(mu) * &d(h));
                }
                let two_x_minus_one = &self.var(x).scale(&rat(2)) - &Polynomial::one(ctx);
                &acc + &(&self.var(self.beta[l]) * &two_x_minus_one)
            })
            .collect()
    }
}

struct Lifted {
    objectives: Vec<Polynomial>,
    inequalities: Vec<Polynomial>,
    /// Original equalities followed by slack equalities.
    equalities: Vec<Polynomial>,
}

fn lift_all(p: &ProblemInstance, slacked: &SlackedConstraints, ctx: &Arc<VarContext>) -> Lifted {
    Lifted {
        objectives: p.objectives().iter().map(|f| lift(f, ctx)).collect(),
        inequalities: slacked.inequalities.iter().map(|g| lift(g, ctx)).collect(),
        equalities: slacked
            .equalities
            .iter()
            .chain(&slacked.slack_equalities)
            .map(|h| lift(h, ctx))
            .collect(),
    }
}

fn complementarity(mult: &Multipliers, lifted: &Lifted) -> Vec<Polynomial> {
    mult.lambda
        .iter()
        .zip(&lifted.inequalities)
        .map(|(&lam, g)| &mult.var(lam) * g)
        .collect()
}

/// Chebyshev-scalarized KKT system:
/// `1 - ∑ν_i`, stationarity with objective weights `ν_i ω_i`,
/// `ν_i ω_i (f_i - ŷ_i) - γ`, `λ_j g_j`, `h_r`, binary relations.
pub fn build_kkt(p: &ProblemInstance, mode: SlackMode) -> Result<TransformedSystem, SystemError> {
    p.require_binary()?;
    let slacked = slack_transform(p, mode);
    let mult = Multipliers::build(
        p,
        &slacked,
        Layout {
            lambda0: false,
            scalarized: true,
        },
    );
    let ctx = mult.ctx.clone();
    let lifted = lift_all(p, &slacked, &ctx);
    let weights: Vec<Polynomial> = mult
        .nu
        .iter()
        .zip(&mult.omega)
        .map(|(&nu, &om)| &mult.var(nu) * &mult.var(om))
        .collect();
    let gamma = mult.var(mult.gamma.expect("scalarized layout"));
    let mut gens = vec![&Polynomial::one(&ctx) - &sum_vars(&ctx, &mult.nu)];
    gens.extend(mult.stationarity(
        &weights,
        &lifted.objectives,
        &lifted.inequalities,
        &lifted.equalities,
    ));
    for (w, f) in weights.iter().zip(&lifted.objectives) {
        let shifted = f - &Polynomial::constant(&ctx, lower_bound(f));
        gens.push(&(w * &shifted) - &gamma);
    }
    gens.extend(complementarity(&mult, &lifted));
    gens.extend(lifted.equalities.iter().cloned());
    gens.extend(binary_relations(&ctx, &mult.xs));
    Ok(TransformedSystem::new(
        ctx,
        gens,
        BTreeSet::new(),
        SystemKind::Kkt,
        mode,
    ))
}

/// Non-regularity system: `∑ν_i = 0`, stationarity as in [`build_kkt`],
/// `λ_j g_j`, `h_r`, binary relations and the normalization
/// `∑λ_j + ∑μ_r² + ∑β_l² = 1`.
pub fn build_nr(p: &ProblemInstance, mode: SlackMode) -> Result<TransformedSystem, SystemError> {
    p.require_binary()?;
    let slacked = slack_transform(p, mode);
    let mult = Multipliers::build(
        p,
        &slacked,
        Layout {
            lambda0: false,
            scalarized: true,
        },
    );
    let ctx = mult.ctx.clone();
    let lifted = lift_all(p, &slacked, &ctx);
    let weights: Vec<Polynomial> = mult
        .nu
        .iter()
        .zip(&mult.omega)
        .map(|(&nu, &om)| &mult.var(nu) * &mult.var(om))
        .collect();
    let mut gens = vec![sum_vars(&ctx, &mult.nu)];
    gens.extend(mult.stationarity(
        &weights,
        &lifted.objectives,
        &lifted.inequalities,
        &lifted.equalities,
    ));
    gens.extend(complementarity(&mult, &lifted));
    gens.extend(lifted.equalities.iter().cloned());
    gens.extend(binary_relations(&ctx, &mult.xs));
    let norm = &(&sum_vars(&ctx, &mult.lambda) + &sum_squares(&ctx, &mult.mu))
        + &sum_squares(&ctx, &mult.beta);
    gens.push(&norm - &Polynomial::one(&ctx));
    Ok(TransformedSystem::new(
        ctx,
        gens,
        BTreeSet::new(),
        SystemKind::Nr,
        mode,
    ))
}

/// Chebyshev-scalarized Fritz-John system: `λ_0 - ∑ν_i`, stationarity,
/// `ν_i (ω_i (f_i - ŷ_i) - γ)`, `λ_j g_j`, `h_r`, binary relations and
/// `λ_0 + ∑λ_j + ∑ν_i + ∑μ_r² + ∑β_l² = 1`.
pub fn build_fj(p: &ProblemInstance, mode: SlackMode) -> Result<TransformedSystem, SystemError> {
    p.require_binary()?;
    let slacked = slack_transform(p, mode);
    let mult = Multipliers::build(
        p,
        &slacked,
        Layout {
            lambda0: true,
            scalarized: true,
        },
    );
    let ctx = mult.ctx.clone();
    let lifted = lift_all(p, &slacked, &ctx);
    let lambda0 = mult.var(mult.lambda0.expect("fritz-john layout"));
    let gamma = mult.var(mult.gamma.expect("scalarized layout"));
    let weights: Vec<Polynomial> = mult
        .nu
        .iter()
        .zip(&mult.omega)
        .map(|(&nu, &om)| &mult.var(nu) * &mult.var(om))
        .collect();
    let mut gens = vec![&lambda0 - &sum_vars(&ctx, &mult.nu)];
    gens.extend(mult.stationarity(
        &weights,
        &lifted.objectives,
        &lifted.inequalities,
        &lifted.equalities,
    ));
    for ((&nu, &om), f) in mult.nu.iter().zip(&mult.omega).zip(&lifted.objectives) {
        let shifted = f - &Polynomial::constant(&ctx, lower_bound(f));
        let inner = &(&mult.var(om) * &shifted) - &gamma;
        gens.push(&mult.var(nu) * &inner);
    }
    gens.extend(complementarity(&mult, &lifted));
    gens.extend(lifted.equalities.iter().cloned());
    gens.extend(binary_relations(&ctx, &mult.xs));
    let linear = &(&lambda0 + &sum_vars(&ctx, &mult.lambda)) + &sum_vars(&ctx, &mult.nu);
    let norm = &(&linear + &sum_squares(&ctx, &mult.mu)) + &sum_squares(&ctx, &mult.beta);
    gens.push(&norm - &Polynomial::one(&ctx));
    Ok(TransformedSystem::new(
        ctx,
        gens,
        BTreeSet::new(),
        SystemKind::Fj,
        mode,
    ))
}

/// Multiobjective Fritz-John system: stationarity with weights `ν_i`,
/// `λ_j g_j`, `h_r`, binary relations and
/// `∑ν_i + ∑λ_j + ∑μ_r² + ∑β_l² = 1`.
pub fn build_mofj(p: &ProblemInstance) -> Result<TransformedSystem, SystemError> {
    p.require_binary()?;
    let slacked = slack_transform(p, SlackMode::Keep);
    let mult = Multipliers::build(
        p,
        &slacked,
        Layout {
            lambda0: false,
            scalarized: false,
        },
    );
    let ctx = mult.ctx.clone();
    let lifted = lift_all(p, &slacked, &ctx);
    let weights: Vec<Polynomial> = mult.nu.iter().map(|&nu| mult.var(nu)).collect();
    let mut gens = mult.stationarity(
        &weights,
        &lifted.objectives,
        &lifted.inequalities,
        &lifted.equalities,
    );
    gens.extend(complementarity(&mult, &lifted));
    gens.extend(lifted.equalities.iter().cloned());
    gens.extend(binary_relations(&ctx, &mult.xs));
    let linear = &sum_vars(&ctx, &mult.nu) + &sum_vars(&ctx, &mult.lambda);
    let norm = &(&linear + &sum_squares(&ctx, &mult.mu)) + &sum_squares(&ctx, &mult.beta);
    gens.push(&norm - &Polynomial::one(&ctx));
    Ok(TransformedSystem::new(
        ctx,
        gens,
        BTreeSet::new(),
        SystemKind::Mofj,
        SlackMode::Keep,
    ))
}

pub fn build(
    kind: SystemKind,
    p: &ProblemInstance,
    mode: SlackMode,
) -> Result<TransformedSystem, SystemError> {
    match kind {
        SystemKind::Alg1 => build_alg1(p, mode),
        SystemKind::Kkt => build_kkt(p, mode),
        SystemKind::Nr => build_nr(p, mode),
        SystemKind::Fj => build_fj(p, mode),
        SystemKind::Mofj => build_mofj(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn instance(n: usize, f: &[&str], g: &[&str], h: &[&str]) -> ProblemInstance {
        let c = VarContext::decision(n);
        let parse = |v: &[&str]| {
            v.iter()
                .map(|s| parse_polynomial(s, &c).unwrap())
                .collect::<Vec<_>>()
        };
        ProblemInstance::in_context(&c, parse(f), parse(g), parse(h)).unwrap()
    }

    fn knap() -> ProblemInstance {
        instance(2, &["3*x1 + x2", "x1 + 2*x2"], &["1 - x1 - x2"], &[])
    }

    fn stats(ts: TransformedSystem) -> (usize, usize, u32) {
        let s = ts.stats();
        (s.n_vars, s.n_gens, s.max_deg)
    }

    #[test]
    fn alg1_knapsack_shape() {
        let ts = build_alg1(&knap(), SlackMode::Linear).unwrap();
        assert_eq!(stats(ts.clone()), (5, 5, 2));
        let names: Vec<&str> = ts
            .solve_order()
            .iter()
            .map(|&i| ts.context().name(i))
            .collect();
        assert_eq!(names, ["w1", "y2", "y1", "x2", "x1"]);
        assert_eq!(ts.sign_filters().len(), 1);
    }

    #[test]
    fn alg1_minimal_and_empty_problem() {
        let ts = build_alg1(&instance(1, &["x1"], &[], &[]), SlackMode::Linear).unwrap();
        let gens: Vec<String> = ts
            .generators()
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(gens, ["-x1 + y1", "x1^2 - x1"]);
        let ts = build_alg1(&instance(1, &["0"], &[], &[]), SlackMode::Linear).unwrap();
        assert_eq!(stats(ts), (2, 2, 2));
    }

    #[test]
    fn alg1_keeps_infeasible_equalities() {
        let ts = build_alg1(&instance(1, &["x1"], &[], &["x1 - 2"]), SlackMode::Linear).unwrap();
        assert_eq!(ts.generators().generators()[0].to_string(), "x1 - 2");
    }

    #[test]
    fn lower_bound_examples() {
        let c = VarContext::decision(2);
        let lb = |s: &str| lower_bound(&parse_polynomial(s, &c).unwrap());
        assert_eq!(lb("3*x1 + x2"), rat(0));
        assert_eq!(lb("-2*x1*x2 + x1"), rat(-2));
        assert_eq!(lb("-x1 - x2 - 5"), rat(-7));
    }

    #[test]
    fn conditions_system_counts() {
        let p = knap();
        assert_eq!(stats(build_kkt(&p, SlackMode::Keep).unwrap()), (10, 8, 3));
        // 2n + m + s + 2
        assert_eq!(stats(build_nr(&p, SlackMode::Keep).unwrap()).1, 7);
        assert_eq!(stats(build_fj(&p, SlackMode::Keep).unwrap()).0, 11);
        assert_eq!(stats(build_fj(&p, SlackMode::Keep).unwrap()).1, 9);
        assert_eq!(stats(build_mofj(&p).unwrap()), (7, 6, 2));
    }

    #[test]
    fn fj_degree_with_quadratic_objectives() {
        let p = instance(2, &["x1*x2 + x1", "x2^2"], &["1 - x1 - x2"], &[]);
        assert_eq!(build_fj(&p, SlackMode::Keep).unwrap().stats().max_deg, 4);
    }

    #[test]
    fn nr_without_constraints_normalizes_beta() {
        let ts = build_nr(&instance(2, &["x1", "x2"], &[], &[]), SlackMode::Keep).unwrap();
        let last = ts.generators().generators().last().unwrap().to_string();
        assert_eq!(last, "beta1^2 + beta2^2 - 1");
    }

    #[test]
    fn decision_block_is_last() {
        for kind in [
            SystemKind::Kkt,
            SystemKind::Nr,
            SystemKind::Fj,
            SystemKind::Mofj,
        ] {
            for mode in [SlackMode::Keep, SlackMode::Linear] {
                let ts = build(kind, &knap(), mode).unwrap();
                let ctx = ts.context();
                let start = ts.decision_start();
                assert_eq!(start + 2, ctx.len());
                assert_eq!(ts.solve_order()[0], ctx.len() - 1);
            }
        }
    }

    #[test]
    fn kkt_stationarity_text() {
        let ts = build_kkt(&knap(), SlackMode::Keep).unwrap();
        let gens = ts.generators().generators();
        assert_eq!(gens[0].to_string(), "-nu1 - nu2 + 1");
        assert_eq!(
            gens[1].to_string(),
            "2*beta1*x1 - beta1 + 3*nu1*omega1 + nu2*omega2 - lambda1"
        );
    }

    #[test]
    fn linear_slack_adds_multipliers() {
        let ts = build_kkt(&knap(), SlackMode::Linear).unwrap();
        assert_eq!(ts.context().count(Block::Lambda), 0);
        assert_eq!(ts.context().count(Block::Mu), 1);
        assert_eq!(ts.context().count(Block::Slack), 1);
    }

    #[test]
    fn bounded_instances_are_rejected() {
        let p = knap().with_bounds(vec![3, 1]).unwrap();
        assert_eq!(
            build_alg1(&p, SlackMode::Linear).unwrap_err(),
            SystemError::NotBinary
        );
    }
}
