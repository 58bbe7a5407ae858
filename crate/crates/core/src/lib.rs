//! Exact harmonic analysis on the slice `{x ∈ {0,1}^n : |x| = ell}`.
//!
//! Functions on a slice are stored as exact rationals in ascending bitmask
//! order (coordinate `i` is bit `i − 1`). On top of that the crate provides
//!
//! * level projections and level weights ([`harmonic`]),
//! * the derivative operators `D_P` and the constructor that realises a
//!   prescribed family of shifted sorted derivatives ([`calculus`]),
//! * tuples, their classification and the shifting rewrite system
//!   ([`tuples`]),
//! * the slice Laplacian, the noise operator and hypergeometric tails
//!   ([`noise`]),
//! * the degree-`k` approximation algorithm and its supporting lemmas
//!   ([`structure`]),
//! * Boolean cube functions, their Fourier transform and the embedding into a
//!   large balanced slice ([`cube`]).
//!
//! ```
//! use slicekit::{approximate, make_domain, SliceFunction};
//!
//! let d = make_domain(6, 3).unwrap();
//! let f = SliceFunction::dictator(&d, 1).unwrap();
//! let r = approximate(&f, 1).unwrap();
//! assert_eq!(r.g, f);
//! ```

pub mod calculus;
pub mod checks;
pub mod combin;
pub mod cube;
pub mod error;
pub mod funcspec;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod noise;
pub mod rational;
pub mod slice;
pub mod structure;
pub mod tuples;

pub use calculus::{build_from_derivatives, derivative, DerivativeAssignment};
pub use cube::{fourier_transform, CubeFunction};
pub use error::{Result, SliceError};
pub use funcspec::FunctionSpec;
pub use harmonic::{level_weights, project_levels, LevelWeights};
pub use rational::{format_q, parse_q, Q};
pub use slice::{make_domain, Permutation, SliceDomain, SliceFunction};
pub use structure::approximate;
pub use tuples::{enumerate_shifted_sorted, expand_to_shifted_sorted, measure, rewrite_step, KTuple};
