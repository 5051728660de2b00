//! Special functions: gamma, Kummer's ₁F₁ and the Dunkl kernel.

mod checks;
pub mod gamma;
pub mod kernel;
pub mod kummer;
mod multiplicity;

pub use checks::{
    branch_agreement, eigen_residual, envelope_correction, envelope_ratio_defect,
    kernel_symmetry_defect,
};
pub use kernel::{
    asymptotic_envelope, dunkl_kernel_1d, dunkl_kernel_1d_scaled, dunkl_kernel_complex_1d,
    dunkl_kernel_nd, ComplexKernel,
};
pub use kummer::{hyp1f1, hyp1f1_deriv, hyp1f1_scaled, KummerParams, Scaled, Strategy};
pub use multiplicity::MultiplicityVector;
