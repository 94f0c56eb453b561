//! Hypergraphs induced by halfplane containment over convex bodies in the plane.
//!
//! A family of convex bodies defines a hypergraph whose hyperedges are the
//! subfamilies cut out by closed halfplanes: a subfamily is *realized* when
//! some halfplane fully contains exactly its members. This crate enumerates
//! realized subfamilies exactly (rational arithmetic throughout), computes
//! shattering and VC-dimension, generates the classical shattered families,
//! and builds the two downstream applications: weighted epsilon-nets driving
//! an iterative-reweighting hitting-set solver, and epsilon-approximations for
//! range counting.

pub mod cli;
pub mod constructions;
mod error;
pub mod geom;
pub mod hypergraph;
pub mod io;
pub mod mask;
pub mod nets;
pub mod solver;

pub use error::Error;
pub use geom::{
    Ambient, ConvexBody, Family, GeneralPosition, Halfplane, Rational, Rational2,
};
pub use hypergraph::{EdgeSet, Shattering, Witness};
pub use mask::BodySet;

/// Tool version embedded in CLI outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
