//! Atoms, the maximal H¹ norm, the Uchiyama kernel and multiplier bounds on
//! atoms.

mod atom;
mod maximal;
mod uchiyama;

pub use atom::{make_atom, validate_atom, Atom, AtomCheck, AtomProfile, ATOM_ORDER};
pub use maximal::{
    atom_image_norm, atom_image_norms, h1_maximal_norm, maximal_window, multiplier_atom_bound,
    multiplier_atom_bounds, spectral_grid, spectral_h1_norm, spectral_maximal, AtomFamily,
    SpectralTable, SPECTRAL_TOLERANCE,
};
pub use uchiyama::*;
