//! Rational Dunkl analysis on ℝⁿ for the group generated by the coordinate
//! reflections: Dunkl kernel, heat semigroup, Dunkl transform, generalized
//! translations and Hardy space H¹ machinery, together with grid scans that
//! measure the constants in the standard estimates.

pub mod cli;
pub mod error;
pub mod grid;
pub mod hardy;
pub mod heat;
pub mod measure;
pub mod quadrature;
pub mod report;
pub mod scan;
pub mod specfn;
pub mod transform;
pub mod translation;

pub use error::{DunklError, Result};
pub use specfn::MultiplicityVector;
