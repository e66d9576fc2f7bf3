//! Exact computations in the derivation algebra of a rank-two free Lie
//! algebra, together with the combinatorial side structures the main
//! theorems run through: depth filtrations, a genus-zero embedding,
//! period polynomials of cusp forms, quadratic and cubic relations among
//! the canonical derivations, and weight filtrations of nilpotent
//! operators.
//!
//! Everything is over the rationals with arbitrary-precision arithmetic;
//! no floating point is used anywhere.

pub mod bridge;
pub mod depth;
pub mod derivation;
pub mod freelie;
pub mod linalg;
pub mod periodpoly;
pub mod relations;
pub mod scalar;
pub mod verify;
pub mod wtfilt;

pub use freelie::{Alphabet, LieElement, MultiDegree, NcPoly, Word};
pub use scalar::Rat;
