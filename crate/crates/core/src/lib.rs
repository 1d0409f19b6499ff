pub mod catalog;
pub mod curvature;
pub mod error;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod nice;
pub mod rational;
pub mod signature;

pub use catalog::{Catalog, CatalogEntry};
pub use curvature::Metric;
pub use error::{Error, Result};
pub use lie::{Bracket, DimensionProfile, LieAlgebra};
pub use linalg::{RationalMatrix, SignatureTriple, Subspace};
pub use rational::Q;
