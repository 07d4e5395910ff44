//! Exact computation with Cremona transformations of projective space,
//! polynomial automorphisms of affine space and projective linear groups.
//!
//! Everything is exact: coefficients live in `Q`, `Q(i)` or `F_p`
//! ([`scalar`]), polynomials are sparse with a fixed graded reverse
//! lexicographic order ([`poly`]), and equality of maps is structural
//! after a canonical normalization. Randomized checks of the constructions
//! live in [`suite`].

pub mod affine;
pub mod cocycle;
pub mod cremona;
pub mod deformation;
pub mod error;
pub mod linear;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod sample;
pub mod scalar;
pub mod suite;

pub use affine::PolyAuto;
pub use cocycle::Cocycle;
pub use error::{Error, Result};
pub use cremona::{ChartDecomposition, CremonaMap, ProjPoint};
pub use deformation::{DeformationFamily, ExtendabilityVerdict};
pub use linear::{DieudonneAutomorphism, ProjLinear, Transvection};
pub use matrix::Matrix;
pub use poly::{Monomial, Polynomial, RationalFunction};
pub use scalar::{AutomorphismKind, FieldAutomorphism, FieldSpec, Scalar};
pub use suite::{Failure, SuiteConfig, SuiteName, SuiteReport};
