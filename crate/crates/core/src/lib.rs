//! Exact counting, search, and bound verification for similar point
//! configurations in `F_q^d`.
//!
//! The crate is organized bottom-up:
//!
//! * [`ffield`]: odd-order finite fields in a polynomial-basis integer encoding.
//! * [`geom`]: the quadratic distance `‖x‖ = x_1² + … + x_d²`, spheres,
//!   perpendicular bisectors, distance sets and quotient sets.
//! * [`auxgraph`]: the auxiliary graph on `E × E` for a dilation ratio `r`,
//!   its degrees and exact walk counts.
//! * [`configs`]: star/path tuple counts, degenerate decompositions and
//!   witness search for arbitrary pattern graphs.
//! * [`bounds`]: exact evaluation of the lower bounds and size thresholds.
//! * [`harness`]: point-set generators, seeded experiments and the
//!   verification grid.
//!
//! Every count is an exact integer and every bound is an exact rational (or a
//! rational enclosure of an irrational value). No floating point is used in
//! any verdict.

pub mod auxgraph;
pub mod bounds;
pub mod brute;
pub mod configs;
pub mod error;
pub mod ffield;
pub mod geom;
pub mod harness;
pub mod io;

pub use auxgraph::{AuxGraph, DistProfile, SimpleGraph, WalkReport};
pub use bounds::{BoundReport, BoundValue, RDomain, Verdict};
pub use configs::{PatternGraph, SearchOptions, SearchOutcome, Witness};
pub use error::{Error, Result};
pub use ffield::Fq;
pub use geom::{Point, PointSet};
