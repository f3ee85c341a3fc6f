use std::collections::BTreeSet;

use crate::poly::Rational;

/// `a` dominates `b`: componentwise `a <= b` and `a != b`.
pub fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.len() == b.len() && a != b && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Minimal elements of `points` under the componentwise order.
pub fn pareto_filter(points: &BTreeSet<Vec<Rational>>) -> BTreeSet<Vec<Rational>> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(q, p)))
        .cloned()
        .collect()
}
