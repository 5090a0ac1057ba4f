//! Exact symbolic computations for Lie pairs: the Fedosov dg manifold of a
//! Lie pair, its quasi-isomorphisms, Atiyah classes of the dg manifold and of
//! the Lie pair, and the bigraded split of the connection operator.

pub mod algebroid;
pub mod atiyah;
pub mod cli;
pub mod ddg;
pub mod fedosov;
pub mod file;
pub mod graded;
pub mod homotopy;
pub mod parse;
pub mod poly;
pub mod report;
pub mod sample;
pub mod sections;
pub mod suites;
pub mod validation;

pub use algebroid::{AlgebroidError, ChartAlgebroid};
pub use graded::{Derivation, Dims, Gen, GradedElement};
pub use poly::{Poly, Rational};
pub use sections::{Carrier, DSection, HomSection};
pub use validation::{Check, ValidationReport};
