//! Exact solver for multiobjective polynomial binary and integer programs.
//!
//! Problems are turned into polynomial systems whose lexicographic Gröbner
//! bases are triangular; back-substitution over the rationals then yields the
//! efficient set and the nondominated points.

pub mod cli;
pub mod groebner;
pub mod poly;
pub mod problems;
pub mod solver;
pub mod systems;
