use std::cmp::Ordering;

use crate::poly::Monomial;

/// Monomial orders Buchberger's algorithm can work in. Position 0 is always the greatest
/// variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOrder {
    Lex,
    DegRevLex,
    /// Degree reverse lex on `[0, split)`, ties broken by degree reverse lex
    /// on `[split, n)`. Eliminates the first block.
    Elimination {
        split: usize,
    },
    /// Degree reverse lex on `[split, n)`, ties broken by degree reverse lex
    /// on `[0, split)`. Eliminates the trailing block.
    EliminationTail {
        split: usize,
    },
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl TermOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::DegRevLex => grevlex(a.exponents(), b.exponents()),
            TermOrder::Elimination { split } => {
                let (a0, a1) = a.exponents().split_at(split);
                let (b0, b1) = b.exponents().split_at(split);
                grevlex(a0, b0).then_with(|| grevlex(a1, b1))
            }
            TermOrder::EliminationTail { split } => {
                let (a0, a1) = a.exponents().split_at(split);
                let (b0, b1) = b.exponents().split_at(split);
                grevlex(a1, b1).then_with(|| grevlex(a0, b0))
            }
        }
    }
}
