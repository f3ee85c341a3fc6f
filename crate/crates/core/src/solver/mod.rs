//! Triangular back-substitution over reduced lex bases and the end-to-end
//! pipelines that turn a binary program into its Pareto front.

mod pareto;
mod roots;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::groebner::{
    binary_elimination_basis, buchberger_lex_direct, eliminate_before, lex_basis_via,
    GroebnerBasis, GroebnerError, TermOrder, DEFAULT_STEP_BUDGET,
};
use crate::poly::{format_rational, parse_rational, Block, Polynomial, Rational, UnivariateView};
use crate::systems::{
    build_alg1, build_fj, build_kkt, build_mofj, build_nr, ProblemInstance, SlackMode, SystemError,
    SystemKind, SystemStats, TransformedSystem,
};

pub use pareto::{dominates, pareto_filter};
pub use roots::rational_roots;

/// Default largest `n` accepted by [`brute_force`].
pub const DEFAULT_BRUTE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("root search on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not univariate: {0}")]
    NotUnivariate(String),
    #[error("every specialization vanishes for non-decision variable {var}")]
    AmbiguousExtension { var: String },
    #[error("variable {var} has a non-rational value on the variety")]
    IrrationalRoot { var: String },
    #[error("decision variable {var} took non-binary value {value}")]
    NonBinaryRoot { var: String, value: String },
    #[error("internal consistency violation: {0}")]
    Defect(String),
    #[error("brute force limited to n <= {cap}, got n = {n}")]
    BruteForceCap { n: usize, cap: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

impl SolveError {
    pub fn is_budget_exceeded(&self) -> bool {
        matches!(
            self,
            SolveError::Groebner(GroebnerError::BudgetExceeded { .. })
                | SolveError::System(SystemError::Groebner(GroebnerError::BudgetExceeded { .. }))
        )
    }
}

/// Which pipeline produced a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    Alg1,
    Kkt,
    Nr,
    Fj,
    Mofj,
    Brute,
}

impl From<SystemKind> for Provenance {
    fn from(k: SystemKind) -> Self {
        match k {
            SystemKind::Alg1 => Provenance::Alg1,
            SystemKind::Kkt => Provenance::Kkt,
            SystemKind::Nr => Provenance::Nr,
            SystemKind::Fj => Provenance::Fj,
            SystemKind::Mofj => Provenance::Mofj,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Solved,
    Infeasible,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Solved => "solved",
            Status::Infeasible => "infeasible",
        })
    }
}

/// Efficient objective vectors `Y_E` and the nondominated binary points `X_E`
/// mapping onto them, each tagged with the pipelines that found it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ResultDocument", try_from = "ResultDocument")]
pub struct ParetoResult {
    status: Status,
    y_e: BTreeSet<Vec<Rational>>,
    x_e: BTreeMap<Vec<u8>, BTreeSet<Provenance>>,
}

impl ParetoResult {
    pub fn infeasible() -> Self {
        ParetoResult {
            status: Status::Infeasible,
            y_e: BTreeSet::new(),
            x_e: BTreeMap::new(),
        }
    }

    /// Builds the result from feasible candidates: keeps the points whose
    /// objective vector is nondominated among all candidates.
    fn from_candidates(
        p: &ProblemInstance,
        candidates: BTreeMap<Vec<u8>, BTreeSet<Provenance>>,
    ) -> Result<Self, SolveError> {
        if candidates.is_empty() {
            return Ok(ParetoResult::infeasible());
        }
        let mut values: BTreeMap<Vec<u8>, Vec<Rational>> = BTreeMap::new();
        for x in candidates.keys() {
            values.insert(x.clone(), evaluate_objectives(x, p)?);
        }
        let y_e = pareto_filter(&values.values().cloned().collect());
        let x_e = candidates
            .into_iter()
            .filter(|(x, _)| y_e.contains(&values[x]))
            .collect();
        Ok(ParetoResult {
            status: Status::Solved,
            y_e,
            x_e,
        })
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Efficient objective vectors.
    pub fn y_e(&self) -> &BTreeSet<Vec<Rational>> {
        &self.y_e
    }

    /// Nondominated points with their provenance.
    pub fn x_e(&self) -> &BTreeMap<Vec<u8>, BTreeSet<Provenance>> {
        &self.x_e
    }

    pub fn x_points(&self) -> BTreeSet<Vec<u8>> {
        self.x_e.keys().cloned().collect()
    }

    /// Same `Y_E` and the same set of points, ignoring provenance.
    pub fn same_front(&self, other: &ParetoResult) -> bool {
        self.status == other.status && self.y_e == other.y_e && self.x_e.keys().eq(other.x_e.keys())
    }

    /// Checks feasibility of `X_E`, `f(X_E) = Y_E` and that `Y_E` is an
    /// antichain.
    pub fn check_invariants(&self, p: &ProblemInstance) -> Result<(), SolveError> {
        let mut image = BTreeSet::new();
        for x in self.x_e.keys() {
            if !check_feasible(x, p)? {
                return Err(SolveError::Defect(format!(
                    "point {x:?} in X_E is infeasible"
                )));
            }
            image.insert(evaluate_objectives(x, p)?);
        }
        if image != self.y_e {
            return Err(SolveError::Defect("f(X_E) differs from Y_E".into()));
        }
        if pareto_filter(&self.y_e) != self.y_e {
            return Err(SolveError::Defect("Y_E contains a dominated vector".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PointDocument {
    x: Vec<u8>,
    provenance: Vec<Provenance>,
}

#[derive(Serialize, Deserialize)]
struct ResultDocument {
    status: Status,
    y_e: Vec<Vec<String>>,
    x_e: Vec<PointDocument>,
}

impl From<ParetoResult> for ResultDocument {
    fn from(r: ParetoResult) -> Self {
        ResultDocument {
            status: r.status,
            y_e: r
                .y_e
                .iter()
                .map(|y| y.iter().map(format_rational).collect())
                .collect(),
            x_e: r
                .x_e
                .into_iter()
                .map(|(x, tags)| PointDocument {
                    x,
                    provenance: tags.into_iter().collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ResultDocument> for ParetoResult {
    type Error = String;

    fn try_from(d: ResultDocument) -> Result<Self, Self::Error> {
        let y_e = d
            .y_e
            .iter()
            .map(|y| {
                y.iter()
                    .map(|c| parse_rational(c).map_err(|e| e.to_string()))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        let x_e = d
            .x_e
            .into_iter()
            .map(|p| (p.x, p.provenance.into_iter().collect()))
            .collect();
        Ok(ParetoResult {
            status: d.status,
            y_e,
            x_e,
        })
    }
}

/// Values for a prefix of a system's solve order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartialSolution {
    assignment: BTreeMap<usize, Rational>,
}

impl PartialSolution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assignment(&self) -> &BTreeMap<usize, Rational> {
        &self.assignment
    }

    pub fn get(&self, pos: usize) -> Option<&Rational> {
        self.assignment.get(&pos)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Values at `positions`; panics if one is unassigned.
    pub fn values(&self, positions: &[usize]) -> Vec<Rational> {
        positions
            .iter()
            .map(|p| self.assignment[p].clone())
            .collect()
    }

    fn with(&self, pos: usize, value: Rational) -> Self {
        let mut next = self.clone();
        next.assignment.insert(pos, value);
        next
    }
}

/// Basis elements grouped by their greatest variable.
struct Triangular<'a> {
    ts: &'a TransformedSystem,
    by_var: Vec<Vec<&'a Polynomial>>,
}

impl<'a> Triangular<'a> {
    fn new(ts: &'a TransformedSystem, g: &'a GroebnerBasis) -> Self {
        let mut by_var = vec![Vec::new(); ts.context().len()];
        for p in g.polys() {
            if let Some(v) = p.leading_var() {
                by_var[v].push(p);
            }
        }
        Triangular { ts, by_var }
    }

    fn extend(
        &self,
        partial: &PartialSolution,
        v: usize,
    ) -> Result<Vec<PartialSolution>, SolveError> {
        let ctx = self.ts.context();
        let mut common: Option<Vec<Rational>> = None;
        for p in &self.by_var[v] {
            let s = p
                .evaluate(partial.assignment())
                .expect("solved positions lie in the context");
            let coeffs = match s.univariate_view() {
                UnivariateView::Constant(c) if c.is_zero() => continue,
                UnivariateView::Constant(_) => return Ok(Vec::new()),
                UnivariateView::Univariate { var, coeffs } if var == v => coeffs,
                _ => {
                    return Err(SolveError::Defect(format!(
                        "specialization of {p} is not univariate in {}",
                        ctx.name(v)
                    )))
                }
            };
            common = Some(match common {
                None => coeffs,
                Some(prev) => roots::gcd(&prev, &coeffs),
            });
        }
        let values: BTreeSet<Rational> = match common {
            Some(c) => {
                let found = roots::dense_roots(&c);
                if found.len() != roots::distinct_root_count(&c) {
                    return Err(SolveError::IrrationalRoot {
                        var: ctx.name(v).to_string(),
                    });
                }
                found
            }
            None if ctx.var(v).block == Block::Decision => {
                [Rational::zero(), Rational::one()].into_iter().collect()
            }
            None => {
                return Err(SolveError::AmbiguousExtension {
                    var: ctx.name(v).to_string(),
                })
            }
        };
        let signed = self.ts.sign_filters().contains(&v);
        Ok(values
            .into_iter()
            .filter(|val| !signed || *val >= Rational::zero())
            .map(|val| partial.with(v, val))
            .collect())
    }

    /// Breadth-first extension along the solve order, from `from` (an index
    /// into the solve order) up to and including index `to`.
    fn run(
        &self,
        mut frontier: Vec<PartialSolution>,
        from: usize,
        to: usize,
    ) -> Result<Vec<PartialSolution>, SolveError> {
        for &v in &self.ts.solve_order()[from..=to] {
            let mut next = Vec::new();
            for partial in &frontier {
                next.extend(self.extend(partial, v)?);
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        Ok(frontier)
    }
}

/// Extends `partial` by every admissible value of `v`, the next unsolved
/// variable in the solve order of `ts`.
pub fn extend(
    ts: &TransformedSystem,
    g: &GroebnerBasis,
    partial: &PartialSolution,
    v: usize,
) -> Result<Vec<PartialSolution>, SolveError> {
    Triangular::new(ts, g).extend(partial, v)
}

/// Index in the solve order of the last variable of `block`.
fn last_index_of(ts: &TransformedSystem, block: Block) -> Option<usize> {
    let ctx = ts.context();
    ts.solve_order()
        .iter()
        .rposition(|&v| ctx.var(v).block == block)
}

/// All partial solutions covering the solve order up to the last variable
/// of `through`. Returns no solutions for the unit ideal.
pub fn enumerate_variety(
    ts: &TransformedSystem,
    g: &GroebnerBasis,
    through: Block,
) -> Result<Vec<PartialSolution>, SolveError> {
    if g.is_unit() {
        return Ok(Vec::new());
    }
    match last_index_of(ts, through) {
        None => Ok(vec![PartialSolution::new()]),
        Some(to) => Triangular::new(ts, g).run(vec![PartialSolution::new()], 0, to),
    }
}

fn to_binary(
    values: &[Rational],
    ts: &TransformedSystem,
    xs: &[usize],
) -> Result<Vec<u8>, SolveError> {
    values
        .iter()
        .zip(xs)
        .map(|(v, &pos)| {
            if v.is_zero() {
                Ok(0)
            } else if v.is_one() {
                Ok(1)
            } else {
                Err(SolveError::NonBinaryRoot {
                    var: ts.context().name(pos).to_string(),
                    value: format_rational(v),
                })
            }
        })
        .collect()
}

fn as_rationals(x: &[u8]) -> Vec<Rational> {
    x.iter()
        .map(|&b| Rational::from_integer(b.into()))
        .collect()
}

/// Exact check of `g_j(x) <= 0` and `h_r(x) = 0`.
pub fn check_feasible(x: &[u8], p: &ProblemInstance) -> Result<bool, SolveError> {
    if x.len() != p.n() {
        return Err(SolveError::DimensionMismatch {
            expected: p.n(),
            got: x.len(),
        });
    }
    let point = as_rationals(x);
    Ok(p.inequalities()
        .iter()
        .all(|g| g.eval_point(&point) <= Rational::zero())
        && p.equalities()
            .iter()
            .all(|h| h.eval_point(&point).is_zero()))
}

pub fn evaluate_objectives(x: &[u8], p: &ProblemInstance) -> Result<Vec<Rational>, SolveError> {
    if x.len() != p.n() {
        return Err(SolveError::DimensionMismatch {
            expected: p.n(),
            got: x.len(),
        });
    }
    let point = as_rationals(x);
    Ok(p.objectives()
        .iter()
        .map(|f| f.eval_point(&point))
        .collect())
}

/// Exhaustive reference solver over `{0,1}^n`.
pub fn brute_force(p: &ProblemInstance) -> Result<ParetoResult, SolveError> {
    brute_force_with_cap(p, DEFAULT_BRUTE_CAP)
}

pub fn brute_force_with_cap(p: &ProblemInstance, cap: usize) -> Result<ParetoResult, SolveError> {
    p.require_binary()?;
    let n = p.n();
    if n > cap {
        return Err(SolveError::BruteForceCap { n, cap });
    }
    let mut candidates = BTreeMap::new();
    for code in 0u64..(1u64 << n) {
        let x: Vec<u8> = (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect();
        if check_feasible(&x, p)? {
            candidates.insert(x, BTreeSet::from([Provenance::Brute]));
        }
    }
    ParetoResult::from_candidates(p, candidates)
}

/// How Gröbner bases are obtained by the pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GbStrategy {
    /// Block orders converted to lex (Algorithm 1) and per-binary-point
    /// splitting for the decision elimination ideal (conditions pipelines).
    #[default]
    Auto,
    /// Buchberger run in lex on the whole system.
    DirectLex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// `None` picks the pipeline default: linear slack for Algorithm 1 and
    /// kept inequalities for the conditions pipelines.
    pub slack_mode: Option<SlackMode>,
    pub budget: u64,
    pub strategy: GbStrategy,
    pub brute_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            slack_mode: None,
            budget: DEFAULT_STEP_BUDGET,
            strategy: GbStrategy::Auto,
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

impl SolveOptions {
    pub fn with_slack(mut self, mode: SlackMode) -> Self {
        self.slack_mode = Some(mode);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_strategy(mut self, strategy: GbStrategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Result of one pipeline run with timing and system size information.
#[derive(Debug, Clone)]
pub struct Solved {
    pub result: ParetoResult,
    /// Time spent inside Gröbner basis computations.
    pub gb_time: Duration,
    pub total_time: Duration,
    /// Size of the (first) polynomial system; `None` for brute force.
    pub stats: Option<SystemStats>,
    pub steps: u64,
}

/// Algorithm 1: solve `{h, y - f(x), slack equalities, x^2 - x}`, read the
/// objective values off the lex basis, keep the minimal ones and lift them
/// back to decision vectors.
pub fn solve_alg1(p: &ProblemInstance) -> Result<ParetoResult, SolveError> {
    Ok(solve_alg1_with(p, &SolveOptions::default())?.result)
}

pub fn solve_alg1_with(p: &ProblemInstance, opts: &SolveOptions) -> Result<Solved, SolveError> {
    let start = Instant::now();
    let mode = opts.slack_mode.unwrap_or(SlackMode::Linear);
    let ts = build_alg1(p, mode)?;
    let gb_start = Instant::now();
    let g = match opts.strategy {
        GbStrategy::Auto => lex_basis_via(
            ts.generators(),
            TermOrder::EliminationTail { split: p.n() },
            opts.budget,
        )?,
        GbStrategy::DirectLex => buchberger_lex_direct(ts.generators(), opts.budget)?,
    };
    let gb_time = gb_start.elapsed();
    let finish = |result: ParetoResult| Solved {
        result,
        gb_time,
        total_time: start.elapsed(),
        stats: Some(ts.stats()),
        steps: g.steps(),
    };
    if g.is_unit() {
        return Ok(finish(ParetoResult::infeasible()));
    }
    let xs = ts.block(Block::Decision);
    let ys = ts.block(Block::Objective);
    let tri = Triangular::new(&ts, &g);
    let y_end = last_index_of(&ts, Block::Objective).expect("at least one objective");
    let x_end = ts.solve_order().len() - 1;
    let tag = BTreeSet::from([Provenance::Alg1]);

    let result = if mode == SlackMode::Keep && p.m() > 0 {
        // inequalities are not encoded in the ideal: filter whole points first
        let points = tri.run(vec![PartialSolution::new()], 0, x_end)?;
        let mut candidates = BTreeMap::new();
        for s in &points {
            let x = to_binary(&s.values(&xs), &ts, &xs)?;
            if check_feasible(&x, p)? {
                candidates.insert(x, tag.clone());
            }
        }
        ParetoResult::from_candidates(p, candidates)?
    } else {
        let level = tri.run(vec![PartialSolution::new()], 0, y_end)?;
        let omega: BTreeSet<Vec<Rational>> = level.iter().map(|s| s.values(&ys)).collect();
        if omega.is_empty() {
            return Ok(finish(ParetoResult::infeasible()));
        }
        let y_e = pareto_filter(&omega);
        let efficient: Vec<PartialSolution> = level
            .into_iter()
            .filter(|s| y_e.contains(&s.values(&ys)))
            .collect();
        let mut x_e = BTreeMap::new();
        for s in tri.run(efficient, y_end + 1, x_end)? {
            x_e.insert(to_binary(&s.values(&xs), &ts, &xs)?, tag.clone());
        }
        ParetoResult {
            status: Status::Solved,
            y_e,
            x_e,
        }
    };
    result.check_invariants(p)?;
    Ok(finish(result))
}

/// Pipelines built on necessary optimality conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionsKind {
    /// Union of the KKT system and the non-regular system.
    KktNr,
    Fj,
    Mofj,
}

/// Solves the conditions systems of `kind`, collects every binary point of
/// their decision elimination ideals, discards infeasible ones and keeps the
/// nondominated rest.
pub fn solve_via_conditions(
    p: &ProblemInstance,
    kind: ConditionsKind,
) -> Result<ParetoResult, SolveError> {
    Ok(solve_via_conditions_with(p, kind, &SolveOptions::default())?.result)
}

pub fn solve_via_conditions_with(
    p: &ProblemInstance,
    kind: ConditionsKind,
    opts: &SolveOptions,
) -> Result<Solved, SolveError> {
    let start = Instant::now();
    let mode = opts.slack_mode.unwrap_or(SlackMode::Keep);
    let systems = match kind {
        ConditionsKind::KktNr => vec![build_kkt(p, mode)?, build_nr(p, mode)?],
        ConditionsKind::Fj => vec![build_fj(p, mode)?],
        ConditionsKind::Mofj => vec![build_mofj(p)?],
    };
    let mut gb_time = Duration::ZERO;
    let mut steps = 0u64;
    let mut candidates: BTreeMap<Vec<u8>, BTreeSet<Provenance>> = BTreeMap::new();
    for ts in &systems {
        let x_start = ts.decision_start();
        let gb_start = Instant::now();
        let remaining = opts.budget.saturating_sub(steps);
        let gx = match opts.strategy {
            GbStrategy::Auto => binary_elimination_basis(ts.generators(), x_start, remaining)?,
            GbStrategy::DirectLex => {
                eliminate_before(&buchberger_lex_direct(ts.generators(), remaining)?, x_start)
            }
        };
        gb_time += gb_start.elapsed();
        steps += gx.steps();
        let xs = ts.block(Block::Decision);
        for s in enumerate_variety(ts, &gx, Block::Decision)? {
            let x = to_binary(&s.values(&xs), ts, &xs)?;
            candidates.entry(x).or_default().insert(ts.kind().into());
        }
    }
    let mut feasible = BTreeMap::new();
    for (x, tags) in candidates {
        if check_feasible(&x, p)? {
            feasible.insert(x, tags);
        }
    }
    let result = ParetoResult::from_candidates(p, feasible)?;
    result.check_invariants(p)?;
    Ok(Solved {
        result,
        gb_time,
        total_time: start.elapsed(),
        stats: Some(systems[0].stats()),
        steps,
    })
}

/// Named algorithm variants as used on the command line and in benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Alg1,
    Kkt,
    KktSl,
    Fj,
    FjSl,
    Mofj,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Alg1,
        Algorithm::Kkt,
        Algorithm::KktSl,
        Algorithm::Fj,
        Algorithm::FjSl,
        Algorithm::Mofj,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Kkt => "kkt",
            Algorithm::KktSl => "kkt_sl",
            Algorithm::Fj => "fj",
            Algorithm::FjSl => "fj_sl",
            Algorithm::Mofj => "mofj",
            Algorithm::Brute => "brute",
        }
    }

    /// Applies an explicit slack mode: `kkt` with linear slack is `kkt_sl`.
    pub fn with_slack_mode(self, mode: SlackMode) -> Algorithm {
        match (self, mode) {
            (Algorithm::Kkt | Algorithm::KktSl, SlackMode::Keep) => Algorithm::Kkt,
            (Algorithm::Kkt | Algorithm::KktSl, SlackMode::Linear) => Algorithm::KktSl,
            (Algorithm::Fj | Algorithm::FjSl, SlackMode::Keep) => Algorithm::Fj,
            (Algorithm::Fj | Algorithm::FjSl, SlackMode::Linear) => Algorithm::FjSl,
            (other, _) => other,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

/// Runs `algo` on `p`. The slack mode implied by the algorithm name wins
/// over `opts.slack_mode` for the conditions pipelines.
pub fn solve(
    p: &ProblemInstance,
    algo: Algorithm,
    opts: &SolveOptions,
) -> Result<Solved, SolveError> {
    let with_mode = |mode| SolveOptions {
        slack_mode: Some(mode),
        ..*opts
    };
    match algo {
        Algorithm::Alg1 => solve_alg1_with(p, opts),
        Algorithm::Kkt => {
            solve_via_conditions_with(p, ConditionsKind::KktNr, &with_mode(SlackMode::Keep))
        }
        Algorithm::KktSl => {
            solve_via_conditions_with(p, ConditionsKind::KktNr, &with_mode(SlackMode::Linear))
        }
        Algorithm::Fj => {
            solve_via_conditions_with(p, ConditionsKind::Fj, &with_mode(SlackMode::Keep))
        }
        Algorithm::FjSl => {
            solve_via_conditions_with(p, ConditionsKind::Fj, &with_mode(SlackMode::Linear))
        }
        Algorithm::Mofj => solve_via_conditions_with(p, ConditionsKind::Mofj, opts),
        Algorithm::Brute => {
            let start = Instant::now();
            let result = brute_force_with_cap(p, opts.brute_cap)?;
            Ok(Solved {
                result,
                gb_time: Duration::ZERO,
                total_time: start.elapsed(),
                stats: None,
                steps: 0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat, VarContext};

    fn instance(n: usize, f: &[&str], g: &[&str], h: &[&str]) -> ProblemInstance {
        let c = VarContext::decision(n);
        let parse = |v: &[&str]| v.iter().map(|s| parse_polynomial(s, &c).unwrap()).collect();
        ProblemInstance::in_context(&c, parse(f), parse(g), parse(h)).unwrap()
    }

    fn knapsack() -> ProblemInstance {
        instance(2, &["3*x1 + x2", "x1 + 2*x2"], &["1 - x1 - x2"], &[])
    }

    fn ys(v: &[&[i64]]) -> BTreeSet<Vec<Rational>> {
        v.iter()
            .map(|p| p.iter().map(|&c| rat(c)).collect())
            .collect()
    }

    fn xs(v: &[&[u8]]) -> BTreeSet<Vec<u8>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn alg1_knapsack() {
        let r = solve_alg1(&knapsack()).unwrap();
        assert_eq!(r.status(), Status::Solved);
        assert_eq!(r.y_e(), &ys(&[&[1, 2], &[3, 1]]));
        assert_eq!(r.x_points(), xs(&[&[0, 1], &[1, 0]]));
        assert!(r
            .x_e()
            .values()
            .all(|t| t == &BTreeSet::from([Provenance::Alg1])));
    }

    #[test]
    fn alg1_keep_mode_filters_points() {
        let opts = SolveOptions::default().with_slack(SlackMode::Keep);
        let r = solve_alg1_with(&knapsack(), &opts).unwrap().result;
        assert_eq!(r.y_e(), &ys(&[&[1, 2], &[3, 1]]));
    }

    #[test]
    fn knapsack_objective_level() {
        let p = knapsack();
        let ts = build_alg1(&p, SlackMode::Linear).unwrap();
        let g = crate::groebner::buchberger(ts.generators()).unwrap();
        let level = enumerate_variety(&ts, &g, Block::Objective).unwrap();
        let yb = ts.block(Block::Objective);
        let omega: BTreeSet<Vec<Rational>> = level.iter().map(|s| s.values(&yb)).collect();
        assert_eq!(omega, ys(&[&[1, 2], &[3, 1], &[4, 3]]));
        assert_eq!(pareto_filter(&omega), ys(&[&[1, 2], &[3, 1]]));
    }

    #[test]
    fn alg1_unconstrained_and_infeasible() {
        let r = solve_alg1(&instance(2, &["x1", "x2"], &[], &[])).unwrap();
        assert_eq!(r.y_e(), &ys(&[&[0, 0]]));
        assert_eq!(r.x_points(), xs(&[&[0, 0]]));
        let bad = instance(2, &["x1", "x2"], &["3 - x1 - x2"], &[]);
        assert_eq!(solve_alg1(&bad).unwrap().status(), Status::Infeasible);
        let unit = instance(1, &["x1"], &[], &["x1 - 2"]);
        let ts = build_alg1(&unit, SlackMode::Linear).unwrap();
        assert!(crate::groebner::buchberger(ts.generators())
            .unwrap()
            .is_unit());
        assert_eq!(solve_alg1(&unit).unwrap().status(), Status::Infeasible);
    }

    #[test]
    fn extend_examples() {
        // y2 = 1 + 3*x1 takes the values 1 and 4
        let p = instance(1, &["x1", "1 + 3*x1"], &[], &[]);
        let ts = build_alg1(&p, SlackMode::Linear).unwrap();
        let g = crate::groebner::buchberger(ts.generators()).unwrap();
        let y2 = ts.solve_order()[0];
        assert_eq!(ts.context().name(y2), "y2");
        let ext = extend(&ts, &g, &PartialSolution::new(), y2).unwrap();
        let vals: Vec<Rational> = ext.iter().map(|s| s.get(y2).unwrap().clone()).collect();
        assert_eq!(vals, vec![rat(1), rat(4)]);

        // constant inequality 3 <= 0 forces w = -3
        let p = instance(1, &["x1"], &["3"], &[]);
        let ts = build_alg1(&p, SlackMode::Linear).unwrap();
        let g = crate::groebner::buchberger(ts.generators()).unwrap();
        let w = ts.solve_order()[0];
        assert_eq!(ts.context().name(w), "w1");
        assert!(extend(&ts, &g, &PartialSolution::new(), w)
            .unwrap()
            .is_empty());

        // x2 - 1 together with x2^2 - x2 leaves only x2 = 1
        let p = instance(2, &["x1"], &[], &["x2 - 1"]);
        let ts = build_alg1(&p, SlackMode::Linear).unwrap();
        let g = crate::groebner::buchberger(ts.generators()).unwrap();
        let level = enumerate_variety(&ts, &g, Block::Objective).unwrap();
        let x2 = ts.context().position("x2").unwrap();
        let ext = extend(&ts, &g, &level[0], x2).unwrap();
        assert_eq!(ext.len(), 1);
        assert_eq!(ext[0].get(x2), Some(&rat(1)));
    }

    #[test]
    fn unit_ideal_enumerates_nothing() {
        let p = instance(1, &["x1"], &[], &["x1 - 2"]);
        let ts = build_alg1(&p, SlackMode::Linear).unwrap();
        let g = crate::groebner::buchberger(ts.generators()).unwrap();
        assert!(enumerate_variety(&ts, &g, Block::Decision)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn conditions_pipelines_on_knapsack() {
        let p = knapsack();
        let want = brute_force(&p).unwrap();
        for kind in [
            ConditionsKind::KktNr,
            ConditionsKind::Fj,
            ConditionsKind::Mofj,
        ] {
            let r = solve_via_conditions(&p, kind).unwrap();
            assert!(r.same_front(&want), "{kind:?}");
        }
        let mofj = solve_via_conditions(&p, ConditionsKind::Mofj).unwrap();
        assert!(mofj.same_front(&solve_alg1(&p).unwrap()));
        assert!(mofj.x_e().values().all(|t| t.contains(&Provenance::Mofj)));
    }

    #[test]
    fn kkt_nr_single_variable_trade_off() {
        let p = instance(1, &["x1", "1 - x1"], &[], &[]);
        let r = solve_via_conditions(&p, ConditionsKind::KktNr).unwrap();
        assert_eq!(r.x_points(), xs(&[&[0], &[1]]));
        assert!(r.same_front(&brute_force(&p).unwrap()));
    }

    #[test]
    fn conditions_infeasible() {
        let p = instance(2, &["x1", "x2"], &[], &["x1 + x2 - 3"]);
        for kind in [
            ConditionsKind::KktNr,
            ConditionsKind::Fj,
            ConditionsKind::Mofj,
        ] {
            assert_eq!(
                solve_via_conditions(&p, kind).unwrap().status(),
                Status::Infeasible
            );
        }
    }

    #[test]
    fn brute_force_examples() {
        let r = brute_force(&knapsack()).unwrap();
        assert_eq!(r.y_e(), &ys(&[&[1, 2], &[3, 1]]));
        let none = instance(2, &["x1"], &["3 - x1 - x2"], &[]);
        assert_eq!(brute_force(&none).unwrap().status(), Status::Infeasible);
        let single = instance(3, &["2*x1 - x2 + x3"], &[], &[]);
        assert_eq!(brute_force(&single).unwrap().y_e(), &ys(&[&[-1]]));
        let p = instance(3, &["x1"], &[], &[]);
        assert_eq!(
            brute_force_with_cap(&p, 2).unwrap_err(),
            SolveError::BruteForceCap { n: 3, cap: 2 }
        );
    }

    #[test]
    fn feasibility_and_objectives() {
        let p = knapsack();
        assert!(check_feasible(&[1, 0], &p).unwrap());
        assert_eq!(
            evaluate_objectives(&[1, 0], &p).unwrap(),
            vec![rat(3), rat(1)]
        );
        assert!(!check_feasible(&[0, 0], &p).unwrap());
        let eq = instance(2, &["x1"], &[], &["x1 - x2"]);
        assert!(check_feasible(&[1, 1], &eq).unwrap());
        assert_eq!(
            check_feasible(&[1], &p).unwrap_err(),
            SolveError::DimensionMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn result_serialization_round_trip_and_determinism() {
        let r = solve_via_conditions(&knapsack(), ConditionsKind::KktNr).unwrap();
        let a = serde_json::to_string(&r).unwrap();
        let b = serde_json::to_string(
            &solve_via_conditions(&knapsack(), ConditionsKind::KktNr).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"1/1\""));
        let back: ParetoResult = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!(
            Algorithm::Kkt.with_slack_mode(SlackMode::Linear),
            Algorithm::KktSl
        );
        assert!("simplex".parse::<Algorithm>().is_err());
    }

    #[test]
    fn direct_lex_strategy_agrees() {
        let p = knapsack();
        let opts = SolveOptions::default().with_strategy(GbStrategy::DirectLex);
        for algo in [
            Algorithm::Alg1,
            Algorithm::Kkt,
            Algorithm::FjSl,
            Algorithm::Mofj,
        ] {
            let direct = solve(&p, algo, &opts).unwrap().result;
            let auto = solve(&p, algo, &SolveOptions::default()).unwrap().result;
            assert_eq!(direct, auto, "{algo}");
        }
    }
}
