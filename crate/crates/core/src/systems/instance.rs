use std::sync::Arc;

use crate::poly::{Block, ContextBuilder, Polynomial, Rational, VarContext};

use super::SystemError;

/// A multiobjective polynomial program over decision variables `x1..xn`:
/// minimize `f` subject to `g_j(x) <= 0` and `h_r(x) = 0`, with `x` binary
/// unless integer upper bounds are attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    ctx: Arc<VarContext>,
    objectives: Vec<Polynomial>,
    inequalities: Vec<Polynomial>,
    equalities: Vec<Polynomial>,
    bounds: Option<Vec<u64>>,
}

impl ProblemInstance {
    pub fn new(
        n: usize,
        objectives: Vec<Polynomial>,
        inequalities: Vec<Polynomial>,
        equalities: Vec<Polynomial>,
    ) -> Result<Self, SystemError> {
        let ctx = VarContext::decision(n);
        Self::in_context(&ctx, objectives, inequalities, equalities)
    }

    /// Builds an instance whose polynomials already live in `ctx`, which must
    /// be a pure decision context.
    pub fn in_context(
        ctx: &Arc<VarContext>,
        objectives: Vec<Polynomial>,
        inequalities: Vec<Polynomial>,
        equalities: Vec<Polynomial>,
    ) -> Result<Self, SystemError> {
        if ctx.is_empty() || ctx.vars().iter().any(|v| v.block != Block::Decision) {
            return Err(SystemError::InvalidInstance(
                "context must consist of at least one decision variable".into(),
            ));
        }
        if objectives.is_empty() {
            return Err(SystemError::InvalidInstance(
                "at least one objective is required".into(),
            ));
        }
        let all = objectives.iter().chain(&inequalities).chain(&equalities);
        let mut out = Vec::new();
        for p in all {
            out.push(
                p.embed(ctx)
                    .map_err(|e| SystemError::InvalidInstance(e.to_string()))?,
            );
        }
        let k = objectives.len();
        let m = inequalities.len();
        let equalities = out.split_off(k + m);
        let inequalities = out.split_off(k);
        Ok(ProblemInstance {
            ctx: ctx.clone(),
            objectives: out,
            inequalities,
            equalities,
            bounds: None,
        })
    }

    /// Attaches integer upper bounds `0 <= x_i <= u_i`.
    pub fn with_bounds(mut self, bounds: Vec<u64>) -> Result<Self, SystemError> {
        if bounds.len() != self.n() {
            return Err(SystemError::InvalidInstance(format!(
                "expected {} bounds, got {}",
                self.n(),
                bounds.len()
            )));
        }
        self.bounds = Some(bounds);
        Ok(self)
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.len()
    }

    pub fn k(&self) -> usize {
        self.objectives.len()
    }

    pub fn m(&self) -> usize {
        self.inequalities.len()
    }

    pub fn s(&self) -> usize {
        self.equalities.len()
    }

    pub fn objectives(&self) -> &[Polynomial] {
        &self.objectives
    }

    pub fn inequalities(&self) -> &[Polynomial] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Polynomial] {
        &self.equalities
    }

    pub fn bounds(&self) -> Option<&[u64]> {
        self.bounds.as_deref()
    }

    pub fn is_binary(&self) -> bool {
        self.bounds
            .as_ref()
            .is_none_or(|b| b.iter().all(|&u| u == 1))
    }

    pub(crate) fn require_binary(&self) -> Result<(), SystemError> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(SystemError::NotBinary)
        }
    }

    /// Same instance with one objective multiplied by `factor`.
    pub fn scale_objective(&self, index: usize, factor: &Rational) -> ProblemInstance {
        let mut out = self.clone();
        out.objectives[index] = out.objectives[index].scale(factor);
        out
    }

    /// Maximum total degree over objectives, inequalities and equalities
    /// respectively (0 for an empty family).
    pub fn degrees(&self) -> (u32, u32, u32) {
        let deg = |ps: &[Polynomial]| ps.iter().map(Polynomial::total_degree).max().unwrap_or(0);
        (
            deg(&self.objectives),
            deg(&self.inequalities),
            deg(&self.equalities),
        )
    }
}

/// Bit layout of a binarized instance: original variable `i` is encoded by
/// the binary variables `offsets[i] .. offsets[i] + widths[i]`, least
/// significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitLayout {
    pub widths: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl BitLayout {
    /// Recovers the integer point from a binary one.
    pub fn decode(&self, bits: &[u8]) -> Vec<u64> {
        self.offsets
            .iter()
            .zip(&self.widths)
            .map(|(&o, &w)| (0..w).map(|j| (bits[o + j] as u64) << j).sum())
            .collect()
    }
}

fn bit_width(u: u64) -> usize {
    (u64::BITS - u.leading_zeros()) as usize
}

/// Replaces each bounded integer `x_i` by `sum_j 2^j z_ij` over
/// `floor(log2 u_i) + 1` fresh binary variables.
///
/// When the bits can encode values above `u_i` (that is, `u_i + 1` is not a
/// power of two) the inequality `sum_j 2^j z_ij - u_i <= 0` is appended after
/// the substituted inequalities.
///
/// The binary bits are renamed `x1..xN` in the output so it is again a plain
/// binary instance; [`BitLayout`] maps them back.
pub fn binarize(p: &ProblemInstance) -> Result<(ProblemInstance, BitLayout), SystemError> {
    let bounds = p.bounds().ok_or(SystemError::MissingBounds)?;
    if let Some(i) = bounds.iter().position(|&u| u == 0) {
        return Err(SystemError::InvalidBound { index: i });
    }
    let widths: Vec<usize> = bounds.iter().map(|&u| bit_width(u)).collect();
    let mut offsets = Vec::with_capacity(widths.len());
    let mut total = 0;
    for &w in &widths {
        offsets.push(total);
        total += w;
    }
    let mut b = ContextBuilder::new();
    b.push_block(Block::Decision, total);
    let target = b.build();
    let images: Vec<Polynomial> = offsets
        .iter()
        .zip(&widths)
        .map(|(&o, &w)| {
            (0..w).fold(Polynomial::zero(&target), |acc, j| {
                let bit = Polynomial::var(&target, o + j)
                    .scale(&Rational::from_integer((1u64 << j).into()));
                &acc + &bit
            })
        })
        .collect();
    let sub = |ps: &[Polynomial]| -> Vec<Polynomial> {
        ps.iter().map(|q| q.substitute(&target, &images)).collect()
    };
    let mut inequalities = sub(p.inequalities());
    for (image, (&u, &w)) in images.iter().zip(bounds.iter().zip(&widths)) {
        if u != (1u64 << w) - 1 {
            inequalities
                .push(image - &Polynomial::constant(&target, Rational::from_integer(u.into())));
        }
    }
    let out = ProblemInstance::in_context(
        &target,
        sub(p.objectives()),
        inequalities,
        sub(p.equalities()),
    )?;
    Ok((out, BitLayout { widths, offsets }))
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum SlackMode {
    /// Inequalities stay inequalities (complementarity or post-filtering).
    Keep,
    /// Each `g_j <= 0` becomes `g_j + w_j = 0` with `w_j >= 0`.
    Linear,
}

impl std::str::FromStr for SlackMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "keep" => Ok(SlackMode::Keep),
            "linear" | "linear_slack" => Ok(SlackMode::Linear),
            other => Err(format!("unknown slack mode '{other}'")),
        }
    }
}

/// Constraints after the slack transform, expressed over `x1..xn, w1..wm`.
///
/// The context order here is only a naming device; each system builder
/// embeds these polynomials into its own ordering.
#[derive(Debug, Clone)]
pub struct SlackedConstraints {
    pub context: Arc<VarContext>,
    pub inequalities: Vec<Polynomial>,
    pub equalities: Vec<Polynomial>,
    /// Slack equalities `g_j + w_j`, one per original inequality (linear mode).
    pub slack_equalities: Vec<Polynomial>,
    /// Names of the slack variables, all subject to `w >= 0`.
    pub slacks: Vec<String>,
}

pub fn slack_transform(p: &ProblemInstance, mode: SlackMode) -> SlackedConstraints {
    let slack_count = match mode {
        SlackMode::Keep => 0,
        SlackMode::Linear => p.m(),
    };
    let mut b = ContextBuilder::new();
    b.push_block(Block::Decision, p.n())
        .push_block(Block::Slack, slack_count);
    let ctx = b.build();
    let lift = |q: &Polynomial| q.embed(&ctx).expect("decision names are shared");
    let equalities = p.equalities().iter().map(lift).collect();
    let (inequalities, slack_equalities) = match mode {
        SlackMode::Keep => (p.inequalities().iter().map(lift).collect(), Vec::new()),
        SlackMode::Linear => (
            Vec::new(),
            p.inequalities()
                .iter()
                .enumerate()
                .map(|(j, g)| &lift(g) + &Polynomial::var(&ctx, p.n() + j))
                .collect(),
        ),
    };
    let slacks = ctx
        .block_positions(Block::Slack)
        .into_iter()
        .map(|i| ctx.name(i).to_string())
        .collect();
    SlackedConstraints {
        context: ctx,
        inequalities,
        equalities,
        slack_equalities,
        slacks,
    }
}
