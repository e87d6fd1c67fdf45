//! Virtual multicrossings of knot diagrams.
//!
//! - [`crossing`]: concrete virtual n-crossings, their validity, types,
//!   resolutions and rotation/reflection canonical forms.
//! - [`counting`]: exact counts of crossing types (Bell numbers, fragmented
//!   permutations, Burnside orbit counts) and the brute-force census.
//! - [`gauss`]: signed Gauss codes.
//! - [`petal`]: compiling Gauss codes into single-multicrossing petal
//!   diagrams and reading them back.
//! - [`render`]: SVG output.

pub mod counting;
pub mod crossing;
pub mod gauss;
pub mod petal;
pub mod render;

pub use counting::{Census, CountError, CountReport, Estimate};
pub use crossing::{
    CrossingError, CrossingType, MulticrossingSpec, PairCrossing, PairKind, TripleType, Validity,
};
pub use gauss::{GaussError, Passage, Sign, SignedGaussCode, Token};
pub use petal::{PetalDiagram, PetalError, PetalViolation, SegmentTable};
pub use render::{RenderError, RenderOptions};
