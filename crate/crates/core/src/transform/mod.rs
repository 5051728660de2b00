//! Dunkl transform, its inverse and multiplier operators.

mod fourier;
pub use fourier::apply_axes;
mod multiplier;

pub use fourier::{
    axis_normalization, dunkl_inverse, dunkl_transform, dunkl_transform_grid, plancherel_defect,
    transform_normalization, TransformPlan,
};
pub use multiplier::{
    annulus_cutoff, hormander_m, multiplier_apply, multiplier_apply_with, HormanderEstimate,
    HormanderGrid, MultiplierSpec,
};
