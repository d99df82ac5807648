//! Equations over groups with coefficients in a finite group.
//!
//! Words live in the free product `G[X]` of a finite coefficient group `G`
//! and a free group on `x_1..x_n`. Algebraic sets, radicals and coordinate
//! groups are computed over finite models `H`; verbal closures and their
//! certificates are computed for abelian and class-2 nilpotent varieties.
//!
//! ```
//! use groupgeom::finite_groups::build_symmetric;
//! use groupgeom::words::{parse_word, WordContext};
//! use std::sync::Arc;
//!
//! let s3 = Arc::new(build_symmetric(3).unwrap());
//! let ctx = WordContext::new(2, Some(s3));
//! let w = parse_word("x1*x2*x2^-1*g1", &ctx).unwrap();
//! assert_eq!(w.to_string(), "x1*g1");
//! ```

pub mod error;
pub mod finite_groups;
pub mod geometry;
pub mod intlinalg;
pub mod nullstellensatz;
pub mod varieties;
pub mod words;

pub use error::{Error, ParseError, Result};

/// Resource caps shared by the enumerating algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest finite group built or closed.
    pub order_cap: usize,
    /// Largest point space `|H|^n` enumerated.
    pub enumeration_cap: u64,
    /// Largest word ball enumerated.
    pub ball_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { order_cap: 10080, enumeration_cap: 10_000_000, ball_cap: 100_000 }
    }
}
