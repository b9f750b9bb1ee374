//! Surfaces as graphs over a Darboux chart of `(C^2, w0)` and the
//! perturbations that straighten their intersections.

pub mod cutoff;
pub mod node;
pub mod perturb;
pub mod surface;
pub mod verify;

pub use cutoff::{CutoffKind, CutoffProfile};
pub use node::{
    node_retraction, resolve_node, retraction_seam_jump, smoothing_c1_distance, NodeReport,
    NodeResolution, RetractionChart,
};
pub use perturb::{
    arrangement_constants, linearize_step, nice_pipeline, orthogonalize_double_point,
    orthogonalize_with_lambda, remove_antiholomorphic_step, separate_multiple_point,
    shift_slope, ArrangementConstants, ComplexLikeModel, DoublePoint, NiceReport, Separation,
};
pub use surface::{
    Arrangement, Cutoff, CutoffArg, Jet, LocalGraphSurface, Perturbation, PolyTerm, Residual,
};
pub use verify::{
    bit_identical_outside, locate_intersections, verify_symplectic_grid, GridSpec,
    IntersectionPoint, Region,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChartError {
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("invalid residual: {0}")]
    InvalidResidual(String),
    #[error("chart too small: {0}")]
    ChartTooSmall(String),
    #[error("|eps| = {eps} exceeds the admissible bound {bound}")]
    EpsTooLarge { eps: f64, bound: f64 },
    #[error("shifted slope of surface {j} collides with surface {k}")]
    SlopeCollision { j: usize, k: usize },
    #[error("surface {0} is not linear near the origin")]
    NotLinear(usize),
    #[error("Newton refinement did not converge near z = {re} + {im}i")]
    NonConvergent { re: f64, im: f64 },
    #[error("no admissible eps after {attempts} halvings")]
    NoAdmissibleEps { attempts: u32 },
    #[error("point ({z_abs}, {w_abs}) outside the retraction domain")]
    OutOfDomain { z_abs: f64, w_abs: f64 },
}
