//! Rational roots of univariate polynomials over Q.
//!
//! Candidates are found p-adically: pick a small prime modulo which the
//! squarefree part stays squarefree, find its roots there, lift them by
//! Newton iteration past the Cauchy-style bound on numerators and
//! denominators, then recover each rational by lattice reduction of the
//! residue and confirm it by exact evaluation.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Polynomial, Rational, UnivariateView};

use super::SolveError;

/// Dense univariate polynomial over Q, coefficients low to high, no trailing
/// zeros.
pub(crate) type Dense = Vec<Rational>;

fn trim(p: &mut Dense) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn derivative(p: &[Rational]) -> Dense {
    let mut d: Dense = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut d);
    d
}

/// Quotient and remainder of `a` by nonzero `b`.
fn div_rem(a: &[Rational], b: &[Rational]) -> (Dense, Dense) {
    let mut rem: Dense = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().expect("nonempty") / &lead;
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] -= &c * bc;
        }
        quot[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

fn monic(mut p: Dense) -> Dense {
    if let Some(l) = p.last().cloned() {
        for c in p.iter_mut() {
            *c /= &l;
        }
    }
    p
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub(crate) fn gcd(a: &[Rational], b: &[Rational]) -> Dense {
    let mut x: Dense = a.to_vec();
    let mut y: Dense = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

/// Product of the distinct irreducible factors, monic.
pub(crate) fn squarefree_part(p: &[Rational]) -> Dense {
    let g = gcd(p, &derivative(p));
    monic(div_rem(p, &g).0)
}

/// Clears denominators and content; the result has a positive leading
/// coefficient.
fn primitive_integer(p: &[Rational]) -> Vec<BigInt> {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(Signed::is_negative) {
        -1
    } else {
        1
    };
    let content = content * sign;
    for c in ints.iter_mut() {
        *c /= &content;
    }
    ints
}

fn eval_mod(p: &[u64], x: u64, l: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| (acc * x + c) % l)
}

fn poly_mod(p: &[BigInt], l: u64) -> Vec<u64> {
    let lb = BigInt::from(l);
    p.iter()
        .map(|c| {
            let r = c.mod_floor(&lb);
            u64::try_from(r).expect("reduced below a small prime")
        })
        .collect()
}

fn inv_mod_small(a: u64, l: u64) -> u64 {
    let mut r = 1u64;
    let mut base = a % l;
    let mut e = l - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % l;
        }
        base = base * base % l;
        e >>= 1;
    }
    r
}

fn trim_small(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// True iff `p` and its derivative are coprime over F_l.
fn squarefree_mod(p: &[u64], l: u64) -> bool {
    let mut a = p.to_vec();
    let mut b: Vec<u64> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % l) * c % l)
        .collect();
    trim_small(&mut a);
    trim_small(&mut b);
    while !b.is_empty() {
        let inv = inv_mod_small(*b.last().expect("nonempty"), l);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let c = a.last().expect("nonempty") * inv % l;
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + l - c * bc % l) % l;
            }
            trim_small(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() == 1
}

fn is_prime(v: u64) -> bool {
    v >= 2
        && (2..)
            .take_while(|d| d * d <= v)
            .all(|d| !v.is_multiple_of(d))
}

fn eval_big(p: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    p.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Smallest `a/b` with `|a| <= num_bound`, `0 < b <= den_bound` and
/// `a ≡ r·b (mod m)`, if one exists.
fn reconstruct(r: &BigInt, m: &BigInt, num_bound: &BigInt, den_bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > num_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > den_bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn is_root(p: &[BigInt], v: &Rational) -> bool {
    // homogeneous evaluation: sum p_i a^i b^(d-i)
    let (a, b) = (v.numer(), v.denom());
    let d = p.len() - 1;
    let mut acc = BigInt::zero();
    let mut apow = BigInt::one();
    for (i, c) in p.iter().enumerate() {
        acc += c * &apow * num_traits::pow(b.clone(), d - i);
        apow *= a;
    }
    acc.is_zero()
}

/// Rational roots of a squarefree primitive integer polynomial with nonzero
/// constant term.
fn padic_roots(f: &[BigInt]) -> BTreeSet<Rational> {
    let d = f.len() - 1;
    let mut out = BTreeSet::new();
    if d == 0 {
        return out;
    }
    if d == 1 {
        out.insert(Rational::new(-f[0].clone(), f[1].clone()));
        return out;
    }
    let num_bound = f[0].abs();
    let den_bound = f[d].abs();
    let target = BigInt::from(2) * &num_bound * &den_bound;
    let l = (3u64..)
        .filter(|&l| is_prime(l))
        .find(|&l| {
            let fl = poly_mod(f, l);
            fl[d] != 0 && squarefree_mod(&fl, l)
        })
        .expect("a squarefree polynomial stays squarefree modulo all but finitely many primes");
    let fl = poly_mod(f, l);
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    for r0 in (0..l).filter(|&x| eval_mod(&fl, x, l) == 0) {
        let mut m = BigInt::from(l);
        let mut r = BigInt::from(r0);
        while m <= target {
            m = &m * &m;
            let fr = eval_big(f, &r, &m);
            let dfr = eval_big(&df, &r, &m);
            r = (&r - fr * inv_mod(&dfr, &m)).mod_floor(&m);
        }
        if let Some(v) = reconstruct(&r, &m, &num_bound, &den_bound) {
            if is_root(f, &v) {
                out.insert(v);
            }
        }
    }
    out
}

/// Rational roots of a dense nonzero polynomial (multiplicities dropped).
pub(crate) fn dense_roots(p: &[Rational]) -> BTreeSet<Rational> {
    let mut p = p.to_vec();
    trim(&mut p);
    let mut out = BTreeSet::new();
    if p.len() <= 1 {
        return out;
    }
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        out.insert(Rational::zero());
        p.drain(..zeros);
    }
    let sqf = squarefree_part(&p);
    out.extend(padic_roots(&primitive_integer(&sqf)));
    out
}

/// Degree of the squarefree part, i.e. the number of distinct complex roots.
pub(crate) fn distinct_root_count(p: &[Rational]) -> usize {
    squarefree_part(p).len().saturating_sub(1)
}

/// The set of rational roots of a univariate (or constant) polynomial.
///
/// A nonzero constant has no roots. The zero polynomial is rejected because
/// every value is a root.
pub fn rational_roots(p: &Polynomial) -> Result<BTreeSet<Rational>, SolveError> {
    match p.univariate_view() {
        UnivariateView::Constant(c) if c.is_zero() => Err(SolveError::ZeroPolynomial),
        UnivariateView::Constant(_) => Ok(BTreeSet::new()),
        UnivariateView::Univariate { coeffs, .. } => Ok(dense_roots(&coeffs)),
        UnivariateView::Multivariate => Err(SolveError::NotUnivariate(p.to_string())),
    }
}
