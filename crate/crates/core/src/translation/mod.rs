//! Generalized translations, Dunkl convolution and orbit tail bounds.

mod density;
mod ops;

pub use density::{
    nu_density, total_variation, TranslationKind, TranslationMeasure, TranslationRules,
    DEFAULT_ORDER,
};
pub use ops::*;
