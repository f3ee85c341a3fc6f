//! Seeded random instances of the benchmark families and the instance file
//! format.

mod format;
mod rng;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::poly::{rat, Polynomial, VarContext};
use crate::systems::ProblemInstance;

pub use format::{deserialize, read_instance, serialize, FormatError};
pub use rng::SplitMix64;

/// Coefficients are drawn uniformly from `[-COEFF_RANGE, COEFF_RANGE]`.
pub const COEFF_RANGE: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    BiobjLinkn,
    BiobjQkn,
    BiobjCubkn,
    TriobjLinkn,
    TriobjQkn,
    TriobjCubkn,
    Portfolio,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::BiobjLinkn,
        Family::BiobjQkn,
        Family::BiobjCubkn,
        Family::TriobjLinkn,
        Family::TriobjQkn,
        Family::TriobjCubkn,
        Family::Portfolio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::BiobjLinkn => "biobj_linkn",
            Family::BiobjQkn => "biobj_qkn",
            Family::BiobjCubkn => "biobj_cubkn",
            Family::TriobjLinkn => "triobj_linkn",
            Family::TriobjQkn => "triobj_qkn",
            Family::TriobjCubkn => "triobj_cubkn",
            Family::Portfolio => "portfolio",
        }
    }

    pub fn objectives(self) -> usize {
        match self {
            Family::TriobjLinkn | Family::TriobjQkn | Family::TriobjCubkn => 3,
            _ => 2,
        }
    }

    /// Degree of the objective polynomials.
    pub fn degree(self) -> u32 {
        match self {
            Family::BiobjLinkn | Family::TriobjLinkn => 1,
            Family::BiobjQkn | Family::TriobjQkn | Family::Portfolio => 2,
            Family::BiobjCubkn | Family::TriobjCubkn => 3,
        }
    }

    pub fn min_n(self) -> usize {
        if self.degree() == 3 {
            3
        } else {
            2
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenerateError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("family {family} needs n >= {min}, got {n}")]
    TooSmall {
        family: Family,
        n: usize,
        min: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Result<Self, GenerateError> {
        let spec = FamilySpec { family, n, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let min = self.family.min_n();
        if self.n < min {
            return Err(GenerateError::TooSmall {
                family: self.family,
                n: self.n,
                min,
            });
        }
        Ok(())
    }
}

/// The integer data an instance was built from.
///
/// `linear[t][i]` is the cost of item `i` in objective `t`;
/// `quadratic[t][i][j]` (for `i <= j`, zero below the diagonal) the pair
/// cost; `cubic[t]` lists the triple costs for `i < j < l` in lexicographic
/// order of `(i, j, l)`. Portfolio instances fill `mu` and the symmetric
/// `sigma` instead.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawData {
    pub a: Vec<i64>,
    pub b: i64,
    pub linear: Vec<Vec<i64>>,
    pub quadratic: Vec<Vec<Vec<i64>>>,
    pub cubic: Vec<Vec<i64>>,
    pub mu: Vec<i64>,
    pub sigma: Vec<Vec<i64>>,
}

/// A problem together with where it came from. Hand-written instances have
/// neither a family spec nor raw data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub spec: Option<FamilySpec>,
    pub problem: ProblemInstance,
    pub data: Option<RawData>,
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |l| (i, j, l))))
}

struct Builder {
    ctx: Arc<VarContext>,
}

impl Builder {
    fn x(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.ctx, i)
    }

    fn linear(&self, coeffs: &[i64]) -> Polynomial {
        coeffs
            .iter()
            .enumerate()
            .fold(Polynomial::zero(&self.ctx), |acc, (i, &c)| {
                &acc + &self.x(i).scale(&rat(c))
            })
    }

    fn pairs(&self, q: &[Vec<i64>]) -> Polynomial {
        let mut acc = Polynomial::zero(&self.ctx);
        for (i, row) in q.iter().enumerate() {
            for (j, &c) in row.iter().enumerate().skip(i) {
                acc = &acc + &(&self.x(i) * &self.x(j)).scale(&rat(c));
            }
        }
        acc
    }

    fn cubic(&self, n: usize, p: &[i64]) -> Polynomial {
        triples(n)
            .zip(p)
            .fold(Polynomial::zero(&self.ctx), |acc, ((i, j, l), &c)| {
                &acc + &(&(&self.x(i) * &self.x(j)) * &self.x(l)).scale(&rat(c))
            })
    }
}

fn draw_data(family: Family, n: usize, rng: &mut SplitMix64) -> RawData {
    let mut draw = || rng.uniform(-COEFF_RANGE, COEFF_RANGE);
    let a = loop {
        let a: Vec<i64> = (0..n).map(|_| draw()).collect();
        if a.iter().sum::<i64>() != 0 {
            break a;
        }
    };
    let mut data = RawData {
        a,
        ..RawData::default()
    };
    if family == Family::Portfolio {
        let mut sigma = vec![vec![0; n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in i..n {
                let v = draw();
                sigma[i][j] = v;
                sigma[j][i] = v;
            }
        }
        data.sigma = sigma;
        data.mu = (0..n).map(|_| draw()).collect();
    } else {
        for _ in 0..family.objectives() {
            match family.degree() {
                1 => data.linear.push((0..n).map(|_| draw()).collect()),
                deg => {
                    let mut q = vec![vec![0; n]; n];
                    for (i, row) in q.iter_mut().enumerate() {
                        for c in row.iter_mut().skip(i) {
                            *c = draw();
                        }
                    }
                    data.quadratic.push(q);
                    if deg == 3 {
                        data.cubic.push(triples(n).map(|_| draw()).collect());
                    }
                }
            }
        }
    }
    let total: i64 = data.a.iter().sum();
    data.b = rng.uniform(1, total.abs());
    data
}

/// Whether some binary point satisfies the drawn constraint. Portfolio
/// instances are always feasible (`x = 0`); a knapsack needs
/// `sum max(a_i, 0) >= b`.
fn feasible(family: Family, data: &RawData) -> bool {
    family == Family::Portfolio || data.a.iter().map(|&a| a.max(0)).sum::<i64>() >= data.b
}

/// Deterministic instance for `spec`.
///
/// Draw order: the profit vector `a` (redrawn whole while it sums to zero),
/// then for each objective in turn its linear costs, or its pair costs
/// `q_ij` for `i <= j` row by row followed by its triple costs; portfolio
/// draws `sigma_ij` for `i <= j` row by row and then `mu`. The right-hand
/// side `b` comes last, uniform in `[1, |sum a|]`. A knapsack draw that
/// admits no feasible point is discarded and the whole sequence is drawn
/// again from the same stream.
pub fn generate(spec: &FamilySpec) -> Result<GeneratedInstance, GenerateError> {
    spec.validate()?;
    let n = spec.n;
    let family = spec.family;
    let mut rng = SplitMix64::new(spec.seed);
    let data = loop {
        let data = draw_data(family, n, &mut rng);
        if feasible(family, &data) {
            break data;
        }
    };

    let b = Builder {
        ctx: VarContext::decision(n),
    };
    let rhs = Polynomial::constant(&b.ctx, rat(data.b));
    let (objectives, constraint) = if family == Family::Portfolio {
        let risk = {
            let mut acc = Polynomial::zero(&b.ctx);
            for i in 0..n {
                for j in 0..n {
                    acc = &acc + &(&b.x(i) * &b.x(j)).scale(&rat(data.sigma[i][j]));
                }
            }
            acc
        };
        let ret = b.linear(&data.mu).scale(&rat(-1));
        (vec![risk, ret], &b.linear(&data.a) - &rhs)
    } else {
        let objectives = (0..family.objectives())
            .map(|t| match family.degree() {
                1 => b.linear(&data.linear[t]),
                2 => b.pairs(&data.quadratic[t]),
                _ => &b.pairs(&data.quadratic[t]) + &b.cubic(n, &data.cubic[t]),
            })
            .collect();
        (objectives, &rhs - &b.linear(&data.a))
    };
    let problem = ProblemInstance::in_context(&b.ctx, objectives, vec![constraint], vec![])
        .expect("generated instances are well formed");
    Ok(GeneratedInstance {
        spec: Some(*spec),
        problem,
        data: Some(data),
    })
}
