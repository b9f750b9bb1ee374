//! Exact arithmetic over intersection lattices and Seifert-bundle homology.

pub mod fixtures;
pub mod lattice;
pub mod seifert;

pub use lattice::{
    multiple_curve_invariants, resolution_genus, CurveClass, IntersectionLattice,
    MultipleCurveQuery, RealizabilityReport, Signature, SymplecticDivisor,
};
pub use seifert::{seifert_h2, theorem11_group, AbelianGroupDescriptor, IsotropyDatum, SeifertInput};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Q is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("integer overflow")]
    Overflow,
    #[error("K·c + c^2 + 2 = {0} is odd")]
    NonIntegral(i128),
    #[error("adjunction gives negative genus {0}")]
    NegativeGenus(i128),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("{nodes} nodes cannot connect {components} components")]
    Disconnected { nodes: u64, components: u64 },
    #[error("stored genus {stored} of {label} disagrees with adjunction ({computed:?})")]
    AdjunctionBroken {
        label: String,
        stored: u64,
        computed: Option<u64>,
    },
    #[error("unknown curve label {0}")]
    UnknownLabel(String),
    #[error("D_{i} and D_{j} intersect but their multiplicities are not coprime")]
    GcdViolation { i: usize, j: usize },
    #[error("prime constraint violated: {0}")]
    PrimeConstraintViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
