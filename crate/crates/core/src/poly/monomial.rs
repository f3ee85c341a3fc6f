use std::cmp::Ordering;

use smallvec::SmallVec;

pub type Exponent = u16;

/// Dense exponent vector aligned with a [`VarContext`](super::VarContext).
///
/// The derived ordering compares exponents position by position, which is
/// exactly lex order with position 0 as the greatest variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(SmallVec<[Exponent; 24]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, pos: usize, exp: Exponent) -> Self {
        let mut m = Self::one(nvars);
        m.0[pos] = exp;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[Exponent] {
        &self.0
    }

    pub fn exponent(&self, pos: usize) -> Exponent {
        self.0[pos]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Position of the greatest variable with a nonzero exponent.
    pub fn leading_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    /// # Panics
    /// On exponent overflow; degrees in this crate stay tiny, so overflow
    /// signals a runaway computation rather than a recoverable condition.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| b - a)
                .collect(),
        )
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        self.cmp(other)
    }

    pub(crate) fn set(&mut self, pos: usize, exp: Exponent) {
        self.0[pos] = exp;
    }

    /// Appends `extra` zero exponents (embedding into a larger context).
    pub(crate) fn extended(&self, mapping: &[usize], new_len: usize) -> Monomial {
        let mut m = Monomial::one(new_len);
        for (old, &new) in mapping.iter().enumerate() {
            m.0[new] = self.0[old];
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_prefers_earlier_variable() {
        let x1 = Monomial::from_exponents(&[1, 0]);
        let x2_cubed = Monomial::from_exponents(&[0, 3]);
        assert!(x1 > x2_cubed);
        assert!(Monomial::from_exponents(&[2, 1]) > Monomial::from_exponents(&[2, 0]));
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = Monomial::from_exponents(&[1, 2, 0]);
        let b = Monomial::from_exponents(&[2, 1, 1]);
        assert_eq!(a.lcm(&b).exponents(), &[2, 2, 1]);
        assert!(!a.divides(&b));
        assert!(a.divides(&a.lcm(&b)));
        assert_eq!(a.quotient_of(&a.lcm(&b)).exponents(), &[1, 0, 1]);
        assert!(!a.is_coprime(&b));
        assert!(Monomial::from_exponents(&[1, 0]).is_coprime(&Monomial::from_exponents(&[0, 4])));
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn overflow_is_fatal() {
        let a = Monomial::from_exponents(&[Exponent::MAX]);
        let _ = a.mul(&Monomial::from_exponents(&[1]));
    }
}
