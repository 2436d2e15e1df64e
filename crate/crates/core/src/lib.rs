//! A numerical laboratory for admissible vectors of unitary representations.
//!
//! Finite groups are modelled exactly (counting Haar measure), which turns the
//! convolution Hilbert-algebra machinery into dense linear algebra. The
//! `affine` module covers the nonunimodular case by quadrature on the
//! one-dimensional affine group.

pub mod affine;
pub mod error;
pub mod group;
pub mod hilbert_algebra;
pub mod linalg;
pub mod representations;
pub mod sampling;
pub mod standard_form;
pub mod synthesis;

pub use error::{Error, Result};
pub use group::{inner_product, validate_group, GroupFunction, GroupTable, ValidationReport};
pub use hilbert_algebra::{convolve, flat, sharp, Side};
