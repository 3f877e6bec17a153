//! Quasi-cyclic LDPC parity-check arrays from algebraic base matrices over
//! GF(2^r): construction, Fourier-transform-domain rank analysis, and
//! desk-scale decoding experiments.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`galois`] — GF(2^r) arithmetic, cyclotomic cosets of 2, and the
//!   length-e Fourier transform pair.
//! * [`matrix`] — dense matrices over GF(2^r) and packed binary matrices,
//!   with exact rank computation and the 2x2 submatrix / row-column
//!   constraint tests.
//! * [`transform`] — the transform-domain rank machinery: conjugacy classes
//!   of Hadamard powers, exact rank of a dispersed array without expanding
//!   it, and the two upper bounds with their redundancy corollaries.
//! * [`dispersion`] — expansion of a base matrix into its binary CPM/ZM
//!   array or nonbinary alpha-multiplied array, plus masking.
//! * [`constructions`] — base-matrix families (Latin square, Vandermonde,
//!   field partition, diamond, product-like, masked irregular) and their
//!   closed-form rank predictions.
//! * [`decoder`] — sum-product and min-sum decoding with Monte-Carlo
//!   statistics.
//! * [`io`] — alist and base-matrix file formats.
//! * [`cli`] — the `qcldpc` command-line front end.
//!
//! See the crate examples for end-to-end walkthroughs of each capability.

pub mod cli;
pub mod constructions;
pub mod decoder;
pub mod dispersion;
mod error;
pub mod galois;
pub mod io;
pub mod matrix;
pub mod transform;

pub use error::Error;
pub use galois::{FieldContext, FieldElement};
pub use matrix::{BaseMatrix, BinaryMatrix};
pub use transform::RankReport;
