//! Exact computations for graded Milnor algebras of homogeneous polynomials,
//! their Koszul cohomology, and the pole order spectral sequence.

pub mod bsreport;
pub mod error;
pub mod exactla;
pub mod jacobian;
pub mod koszulss;
pub mod localinv;
pub mod polyforms;
pub mod spectra;
pub mod vfilt;

pub use error::{Error, Result};
pub use exactla::{Rational, RationalMatrix, SparseVec, Subspace};
pub use polyforms::{DiffForm, GradingConvention, Monomial, Poly};
