//! Exact census engine for the dynamics of polynomials and rational maps over
//! finite fields.
//!
//! The crate enumerates maps over `GF(p^n)` (polynomials acting on the field,
//! rational maps acting on the projective line), builds their functional
//! graphs, and tallies cycles, components and periodic points. Averages are
//! kept as exact rationals so they can be compared for equality against the
//! closed forms in [`theory`]. Random functional graphs and in-degree
//! constrained "quadratic" graphs live in [`baseline`] for comparison.
//!
//! Most users start from [`census::poly_census`] or [`census::rat_census`];
//! the `examples/` directory has one runnable program per capability and the
//! `fqdyn` binary wraps everything in a command-line front end.

pub mod baseline;
pub mod census;
pub mod cli;
mod error;
pub mod ffield;
pub mod fgraph;
pub mod fmaps;
pub mod report;
pub mod theory;
pub mod verify;

pub use error::{Error, Result};
pub use ffield::{make_field, FieldCtx, FqElem};
pub use fgraph::{build_graph, cycle_census, rho_length, CycleStats, FunctionalGraph};
pub use fmaps::{Mobius, Poly, ProjPoint, RationalMap};
pub use report::{Comparison, Relation, Report, Status};
pub use theory::{BoundSet, Rational};
