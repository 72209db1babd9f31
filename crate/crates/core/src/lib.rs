//! Exact arithmetic for max-preserving maps on the nonnegative orthant.
//!
//! A map `A: ℝⁿ₊ → ℝⁿ₊` with `A(x ⊕ y) = Ax ⊕ Ay` is a matrix of monotone
//! scalar functions, `(Ax)_i = max_j a_ij(x_j)`. Such matrices form a
//! semiring under composition and pointwise maximum. This crate
//!
//! * represents the entries symbolically ([`fnalg`]) with exact rationals,
//! * composes and joins maps ([`mpmatrix`]),
//! * certifies stability from the cycles of the entry graph and computes the
//!   closure `A*` ([`analysis`]),
//! * builds the left and right eigenvectors of a stable map and the Lyapunov
//!   functions derived from them ([`spectral`]).
//!
//! ```
//! use maxpres::analysis::StableMap;
//! use maxpres::instances::three_node_example;
//! use maxpres::mpmatrix::NonnegVector;
//! use maxpres::spectral::{LeftEigenfunctional, LeftMode};
//!
//! let s = StableMap::new(three_node_example()).unwrap();
//! let l = LeftEigenfunctional::new(&s, None, LeftMode::Sum).unwrap();
//! let d = l.descent(&NonnegVector::ones(3)).unwrap();
//! assert!(d.after < d.before);
//! ```

pub mod analysis;
pub mod cli;
pub mod fnalg;
pub mod instances;
pub mod mpmatrix;
pub mod ratio;
pub mod spectral;
