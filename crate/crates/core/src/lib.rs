//! Entanglement-assisted quantum error-correcting codes over the binary
//! symplectic representation of Pauli operators.

pub mod catalog;
pub mod circuit;
pub mod circulant;
pub mod code;
pub mod enumerate;
pub mod error;
pub mod frame;
pub mod gf2;
pub mod io;
pub mod pauli;
pub mod search;

pub use circuit::{synthesize_encoding, Circuit, Gate, Synthesis};
pub use code::{
    analyze, centralizer_basis, degeneracy_check, ebit_count, isotropic_basis, min_distance,
    min_distance_with_logicals, singleton_bound, validate, CodeParams, CodeReport, LogicalMatrix,
    SimplifiedCheckMatrix, Violation, WeightEnumerator,
};
pub use error::{Error, Result};
pub use frame::{count_partner_subspaces, EbitPattern, FrameOp, PartnerSubspace, SelectionParams, SymplecticFrame};
pub use gf2::{BitMatrix, BitVector};
pub use pauli::{lambda_gram, SymplecticGram, SymplecticVector};
