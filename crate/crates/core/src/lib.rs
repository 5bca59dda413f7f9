//! Point spectra of symmetric and antisymmetric tensor products of
//! unilateral weighted shifts.
//!
//! Two families of operators are covered:
//!
//! * `S_w ⊙ S_w*` and `S_w ∧ S_w*`, whose point spectra decompose over
//!   finite tridiagonal blocks `B_k^±` acting on the degree-`k` monomials
//!   (see [`blocks`] and [`spectrum`]).
//! * `S_α ⊙ M` and `S_α* ⊙ M` with `M` diagonal, covered by
//!   [`shiftdiag`]: kernel structure, norm bounds, and certified
//!   eigenvectors on a disk.
//!
//! Every recurrence-based result can be cross-checked against the dense
//! truncations in [`oracle`].

pub mod blocks;
pub mod dense;
pub mod eig;
mod error;
pub mod oracle;
pub mod shiftdiag;
pub mod spectrum;
pub mod weights;

pub use num_complex::Complex64;

pub use blocks::{BlockSpec, Kind, TridiagonalSym};
pub use dense::DenseMatrix;
pub use eig::{EigenEntry, EigenMultiset, MatchReport};
pub use error::{Error, Result};
pub use oracle::{BasisLabel, ProductKind, TruncatedOperator};
pub use shiftdiag::{DiskCertificate, NormBounds, SymCoefficientMap};
pub use spectrum::{BlockSpectrum, PointSpectrum};
pub use weights::{Aggregate, OutOfRange, WeightFamily, WeightSequence};
