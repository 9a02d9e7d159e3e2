//! Last-passage percolation toolkit: the planar (Hammersley) model with its
//! boundary-coupled equilibrium version and exit points, the exponential
//! lattice model, the rescaled fluctuation processes, and the statistical
//! tests the verification harness runs against them.

pub mod equilibrium;
pub mod error;
pub mod lattice;
pub mod passage;
pub mod process;
pub mod rescale;
pub mod rng;
pub mod stats;
pub mod step;

pub use error::{Error, Result};
pub use process::{BoundaryProcess, PlanarPoint, PointSet, Rect};
pub use rng::{SeedSpec, Stream, Substream};
