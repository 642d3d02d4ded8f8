//! Free group of the punctured disk, its mapping classes and curves.

pub mod automorphism;
pub mod curve;
pub mod word;

pub use automorphism::{
    boundary_word, dehn_twist, full_twist, halftwist, mirror_involution, DiskAutomorphism,
    MappingWord, Move, Sign,
};
pub use curve::{
    all_forms, curve_equal, recognize, recognize_exhaustive, CurveClass, CurveForm, Side,
};
pub use word::{FreeWord, Letter};
