//! Quiver models for moduli of sheaves supported on reducible curves in
//! K3 surfaces: the Mukai lattice of a curve configuration, the Ext-quiver
//! at a polystable sheaf, wall-and-chamber structures on both sides of the
//! local correspondence, representations with a moment-map solver and a
//! stability checker, and the stratification of the local model.

pub mod lattice;
pub mod linalg;
pub mod quiver;
pub mod rational;
pub mod reps;
pub mod strata;
pub mod walls;

pub use lattice::{BetaVector, CurveConfig, DegreeVector, LatticeError, MukaiVector};
pub use quiver::{CbVerdict, Decomposition, DimVector, Part, Quiver, QuiverError};
pub use rational::Q;
pub use walls::{ThetaVector, WallError};
