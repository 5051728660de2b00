//! Heat kernel, truncated kernel and the heat semigroup, with scans that
//! measure the constants in their estimates.

mod checks;
mod cutoff;
mod kernel;
mod scans;
mod semigroup;

pub use checks::{euclidean_defect, heat_equation_residual, heat_mass_defect, semigroup_defect};
pub use cutoff::{
    cutoff_chi, error_kernel_1d, ln_truncated_kernel_1d, smooth_step, smooth_step_deriv,
    truncated_grad_y_1d, truncated_kernel_1d, Bump, CutoffSpec, KernelField, KernelKind,
    ProductKernel,
};
pub use kernel::{gaussian_kernel, heat_kernel_nd, HeatKernel1D};
pub use scans::*;
pub use semigroup::{heat_apply, maximal_heat, HeatSemigroup, TimeGrid, EDGE_TOLERANCE};
