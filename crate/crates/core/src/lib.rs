//! Digital (0,n,2)-nets in base 2 and the exact L2 discrepancy of their shifted
//! and symmetrized versions.
//!
//! All values are exact rationals. The same quantity is available by independent
//! routes: Warnock's formula on the generated points ([`discrepancy`]), Parseval
//! summation of Haar coefficients ([`haar`]) and closed forms ([`formulas`]).

pub mod bitmatrix;
pub mod discrepancy;
pub mod error;
pub mod formulas;
pub mod haar;
pub mod netgen;
pub mod points;
pub mod rational;

pub use bitmatrix::BitMatrix;
pub use discrepancy::{l2_squared, lp_discrepancy_mc, star_discrepancy, warnock_l2_squared, McEstimate};
pub use error::{Error, Result};
pub use haar::{classify_region, haar_coefficient, parseval_l2_squared, HaarIndex, RegionId};
pub use netgen::{generate, Family, NetSpec, ShiftVector, TriEntries};
pub use points::DyadicPointSet;
pub use rational::Rational;
