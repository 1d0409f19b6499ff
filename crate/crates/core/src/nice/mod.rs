//! Nice bases, the diagonal Ricci polynomial system and realization of
//! signatures.

pub mod newton;
pub mod poly;
pub mod realize;
pub mod surd;
pub mod system;

pub use newton::{newton_realize, DiagonalFamily, NewtonConfig, ReducedDiagonalFamily};
pub use poly::{parse_poly, Poly};
pub use realize::{Certificate, Method, Outcome, RealizeConfig, Realizer};
pub use surd::Surd;
pub use system::{
    check_nice_algebra, diagonal_ricci_system, is_nice_basis, standard_nice_frame, NiceAlgebraReport,
    NiceBasisReport, NiceViolation, PolynomialSystem, SystemMode,
};
