//! Approximating-integrand energies for circle-valued maps: scalar vortex
//! calculus, ball growing and merging, and discrete minimization on the disk.

pub mod defects;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod integrand;
pub mod merging;
pub mod mesh;
pub mod quadrature;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use integrand::{FamilySchedule, Integrand, IntegrandSpec};
