//! Kinetic proximity toolkit around the k-Semi-Yao graph of moving points.
//!
//! A point set in `R^d` moves along bounded-degree polynomial trajectories.
//! This crate builds and maintains, under an exact event-driven simulation:
//!
//! * the k-Semi-Yao graph (each point linked, per cone of a fixed cone cover,
//!   to the k points of smallest axis projection inside that cone),
//! * all k-nearest neighbors and the closest pair,
//! * reverse k-nearest-neighbor answers at arbitrary times,
//! * (1+eps)-approximate nearest neighbors via the relative-NN graph.
//!
//! All certificate arithmetic is exact: trajectory coefficients are
//! rationals, event times are isolated real algebraic numbers, and event
//! order is a total order obtained by interval refinement. A brute-force
//! oracle module mirrors every maintained attribute for verification.

pub mod containers;
pub mod engine;
pub mod error;
pub mod events;
pub mod geom;
pub mod motion;
pub mod num;
pub mod oracle;
pub mod proximity;
pub mod range;
pub mod scenario;
pub mod sim;
pub mod wire;

pub use error::{Error, Result};
