//! Partially transposed permutation operators and their group-adapted matrix units.
//!
//! The algebra `A^d_{p,p}` is the span of permutation operators on
//! `(C^d)^{⊗2p}` partially transposed on the `p` primed slots — a matrix
//! representation of the walled Brauer algebra. This crate builds it at desk
//! scale (`p ≤ 3`) together with everything needed to verify its closed forms
//! against brute-force dense linear algebra:
//!
//! * [`partitions`] — Young diagrams, hook-length and hook-content formulas;
//! * [`symgroup`] — permutations and Young–Yamanouchi orthogonal irreps;
//! * [`tensor`] — dense complex operators, partial traces and transposes;
//! * [`matrixunits`] — irreducible matrix units `E^μ_ij` of `C[S_p]`;
//! * [`walled`] — arc operators `V^(r)`, projectors `Q^(k)`, contraction and
//!   the closed-form trace/sandwich coefficients;
//! * [`gram`] — the `Ĝ` generators, their Gram matrix and pure matrix bases;
//! * [`algebra22`] — the explicit decomposition of `A^d_{2,2}`;
//! * [`contraction33`] — single-arc squeezing of `C[S_3] ⊗ C[S_3]`;
//! * [`oracle`] — dense Gram matrices, span ranks and verification reports.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_op_in_unsafe_fn)]
#![warn(missing_docs)]

extern crate alloc;

pub mod algebra22;
pub mod contraction33;
pub mod error;
pub mod gram;
pub mod matrixunits;
pub mod oracle;
pub mod partitions;
pub mod symgroup;
pub mod tensor;
pub mod walled;

pub use error::{Error, Result};

/// Re-exported so downstream crates use the same matrix types.
pub use nalgebra;
