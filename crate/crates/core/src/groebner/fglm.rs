//! Change of term order for zero-dimensional ideals by linear algebra in the
//! quotient ring (Faugère–Gianni–Lazard–Mora).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::ops::Range;

use num_traits::{One, Zero};

use crate::poly::{Monomial, Rational};

use super::engine::{to_bigint, Budget, IntPoly};
use super::order::TermOrder;
use super::GroebnerError;

type Terms = Vec<(Monomial, Rational)>;

#[derive(Clone, PartialEq, Eq)]
struct Key(Monomial, TermOrder);

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.1.cmp(&self.0, &other.0)
    }
}

struct Source {
    order: TermOrder,
    /// Monic, terms descending in `order`.
    polys: Vec<Terms>,
}

impl Source {
    fn new(order: TermOrder, basis: &[IntPoly]) -> Self {
        let polys = basis
            .iter()
            .map(|g| {
                let lc = to_bigint(g.lc());
                g.terms
                    .iter()
                    .map(|(m, c)| (m.clone(), Rational::new(to_bigint(c), lc.clone())))
                    .collect()
            })
            .collect();
        Source { order, polys }
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        !self.polys.iter().any(|g| g[0].0.divides(m))
    }

    /// Normal form of a single monomial.
    fn normal_form(&self, m: &Monomial, budget: &mut Budget) -> Result<Terms, GroebnerError> {
        let mut work: BTreeMap<Key, Rational> = BTreeMap::new();
        work.insert(Key(m.clone(), self.order), Rational::one());
        let mut rem = Vec::new();
        while let Some((Key(t, _), c)) = work.pop_last() {
            match self.polys.iter().find(|g| g[0].0.divides(&t)) {
                None => rem.push((t, c)),
                Some(g) => {
                    budget.tick()?;
                    let q = g[0].0.quotient_of(&t);
                    for (gm, gc) in &g[1..] {
                        let key = Key(gm.mul(&q), self.order);
                        let delta = -(&c * gc);
                        match work.get_mut(&key) {
                            Some(v) => {
                                *v += delta;
                                if v.is_zero() {
                                    work.remove(&key);
                                }
                            }
                            None => {
                                work.insert(key, delta);
                            }
                        }
                    }
                }
            }
        }
        Ok(rem)
    }
}

/// Reduced lex basis of the ideal whose reduced basis in `order` is `basis`,
/// working over the variables in `vars` (every element of `basis` must be
/// supported there). Returns `None` when the ideal is not zero-dimensional
/// in those variables. Output is monic and sorted by leading monomial
/// ascending.
pub(crate) fn fglm(
    order: TermOrder,
    basis: &[IntPoly],
    nvars: usize,
    vars: Range<usize>,
    budget: &mut Budget,
) -> Result<Option<Vec<Terms>>, GroebnerError> {
    let one = Monomial::one(nvars);
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(Some(vec![vec![(one, Rational::one())]]));
    }
    let zero_dim = vars.clone().all(|v| {
        basis.iter().any(|g| {
            let lm = g.lm();
            lm.exponent(v) > 0 && lm.total_degree() == lm.exponent(v) as u32
        })
    });
    if !zero_dim {
        return Ok(None);
    }
    let src = Source::new(order, basis);

    // staircase of the source basis
    let mut stair: Vec<Monomial> = vec![one.clone()];
    let mut index: HashMap<Monomial, usize> = HashMap::from([(one.clone(), 0)]);
    let mut k = 0;
    while k < stair.len() {
        for v in vars.clone() {
            let m = stair[k].mul(&Monomial::var(nvars, v, 1));
            if !index.contains_key(&m) && src.is_standard(&m) {
                index.insert(m.clone(), stair.len());
                stair.push(m);
            }
        }
        k += 1;
    }
    let dim = stair.len();

    // column j of the multiplication matrix for x_v, computed on demand
    let mut columns: HashMap<(usize, usize), Vec<(usize, Rational)>> = HashMap::new();
    let mut column = |v: usize,
                      j: usize,
                      budget: &mut Budget|
     -> Result<Vec<(usize, Rational)>, GroebnerError> {
        if let Some(c) = columns.get(&(v, j)) {
            return Ok(c.clone());
        }
        let m = stair[j].mul(&Monomial::var(nvars, v, 1));
        let col: Vec<(usize, Rational)> = match index.get(&m) {
            Some(&i) => vec![(i, Rational::one())],
            None => src
                .normal_form(&m, budget)?
                .into_iter()
                .map(|(t, c)| (index[&t], c))
                .collect(),
        };
        columns.insert((v, j), col.clone());
        Ok(col)
    };

    let mut unit = vec![Rational::zero(); dim];
    unit[0] = Rational::one();
    let lex = lex_from_vectors(nvars, vars, dim, unit, |v, u| {
        let mut out = vec![Rational::zero(); dim];
        for (j, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, e) in column(v, j, budget)? {
                out[i] += c * &e;
            }
        }
        Ok(out)
    })?;
    Ok(Some(lex))
}

/// Builds the reduced lex basis of an ideal of codimension `dim` from a
/// vector representation of the quotient: `1` maps to `unit` and `mul(v, u)`
/// gives the image of `x_v` times the monomial represented by `u`.
fn lex_from_vectors<F>(
    nvars: usize,
    vars: Range<usize>,
    dim: usize,
    unit: Vec<Rational>,
    mut mul: F,
) -> Result<Vec<Terms>, GroebnerError>
where
    F: FnMut(usize, &[Rational]) -> Result<Vec<Rational>, GroebnerError>,
{
    let one = Monomial::one(nvars);
    struct Row {
        pivot: usize,
        vec: Vec<Rational>,
        comb: Vec<Rational>,
    }
    let mut rows: Vec<Row> = Vec::new();
    let mut new_stair: Vec<Monomial> = Vec::new();
    let mut images: Vec<Vec<Rational>> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut out: Vec<Terms> = Vec::new();

    let mut candidates: BTreeSet<Monomial> = BTreeSet::from([one]);
    let mut origin: HashMap<Monomial, (usize, usize)> = HashMap::new();
    let mut seen: HashSet<Monomial> = HashSet::new();

    while let Some(t) = candidates.pop_first() {
        if !seen.insert(t.clone()) || leads.iter().any(|l| l.divides(&t)) {
            continue;
        }
        let image = match origin.get(&t) {
            None => unit.clone(),
            Some(&(pred, v)) => mul(v, &images[pred])?,
        };
        debug_assert_eq!(image.len(), dim);
        let mut vec = image.clone();
        let mut comb = vec![Rational::zero(); new_stair.len() + 1];
        for row in &rows {
            let f = vec[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (a, b) in vec.iter_mut().zip(&row.vec) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            for (a, b) in comb.iter_mut().zip(&row.comb) {
                if !b.is_zero() {
                    *a += &f * b;
                }
            }
        }
        match vec.iter().position(|c| !c.is_zero()) {
            None => {
                // image(t) = sum comb_i image(s_i)
                let mut terms: Terms = vec![(t.clone(), Rational::one())];
                for (s, c) in new_stair.iter().zip(&comb) {
                    if !c.is_zero() {
                        terms.push((s.clone(), -c));
                    }
                }
                leads.push(t);
                out.push(terms);
            }
            Some(p) => {
                let inv = vec[p].recip();
                let slot = new_stair.len();
                for a in comb.iter_mut() {
                    *a = -&*a * &inv;
                }
                comb[slot] = inv.clone();
                for a in vec.iter_mut() {
                    *a *= &inv;
                }
                for row in rows.iter_mut() {
                    row.comb.push(Rational::zero());
                }
                rows.push(Row {
                    pivot: p,
                    vec,
                    comb,
                });
                new_stair.push(t.clone());
                images.push(image);
                for v in vars.clone() {
                    let m = t.mul(&Monomial::var(nvars, v, 1));
                    origin.entry(m.clone()).or_insert((slot, v));
                    candidates.insert(m);
                }
            }
        }
    }
    Ok(out)
}

/// Reduced lex basis of the vanishing ideal of `points`, whose coordinates
/// are given for the variables in `vars` (in that order).
pub(crate) fn vanishing_ideal(
    nvars: usize,
    vars: Range<usize>,
    points: &[Vec<Rational>],
) -> Result<Vec<Terms>, GroebnerError> {
    let base = vars.start;
    lex_from_vectors(
        nvars,
        vars,
        points.len(),
        vec![Rational::one(); points.len()],
        |v, u| {
            Ok(u.iter()
                .zip(points)
                .map(|(c, p)| c * &p[v - base])
                .collect())
        },
    )
}
