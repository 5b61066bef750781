//! Reconstruction of sparse sums from samples via Prony structures.
//!
//! The pipeline builds a matrix family from samples of `f`
//! ([`structures`], [`relative`]), takes kernels ([`linalg`]), recovers the
//! common zeros of the kernel polynomials ([`zerodim`]) and solves for the
//! coefficients ([`prony`]). Everything is generic over [`arith::Scalar`];
//! the aliases below fix the two scalar types used in practice.

pub mod arith;
pub mod linalg;
pub mod poly;
pub mod prony;
pub mod relative;
pub mod structures;
pub mod vanish;
pub mod zerodim;

pub use arith::{Approx, Rational, Scalar};
pub use poly::{Exponent, MonomialOrder, Poly};

pub type ExactPoly = poly::Poly<Rational>;
pub type FloatPoly = poly::Poly<Approx>;
pub type ExactMatrix = linalg::Matrix<Rational>;
pub type FloatMatrix = linalg::Matrix<Approx>;
pub type ExactPoints = vanish::PointSet<Rational>;
pub type FloatPoints = vanish::PointSet<Approx>;
pub type ExactOracle = prony::SampleOracle<Rational>;
pub type FloatOracle = prony::SampleOracle<Approx>;
pub type ExactOutcome = prony::PronyOutcome<Rational>;
pub type FloatOutcome = prony::PronyOutcome<Approx>;
