//! Verification laboratory for thermodynamic limits of abstract energy
//! functionals on bounded open subsets of three-dimensional space.
//!
//! The crate provides four layers:
//!
//! * [`geom`] — exact and Monte Carlo geometric measure: convex polytopes,
//!   signed distances, boundary-sausage volumes and Fisher regularity audits;
//! * [`motion`] — the sliding group of orientation-preserving isometries,
//!   Haar-uniform rotation sampling and the translation averaging identity;
//! * [`tiling`] — the simplex tiling of space by the order-24 cube rotation
//!   group and inner approximations of domains by kept tiles;
//! * [`models`], [`ssa`], [`harness`] — concrete energy models, the audits of
//!   the assumptions they must satisfy, strongly subadditive set functions,
//!   and the convergence experiments that measure the limit itself.
//!
//! All Monte Carlo paths are deterministic in `(seed, shard)` and produce the
//! same bits regardless of thread count; see [`mc`].

pub mod geom;
pub mod harness;
pub mod mc;
pub mod models;
pub mod motion;
pub mod ssa;
pub mod tiling;

pub use geom::{Aabb, Domain, EtaClass, Polytope, Vec3};
pub use mc::{MeasureEstimate, Quality};
pub use motion::{RigidMotion, Rotation};
pub use tiling::{TileIndex, TilingFrame};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty bounding box")]
    EmptyBoundingBox,
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("eta undefined: t = {t} outside [0, {c})")]
    EtaUndefined { t: f64, c: f64 },
    #[error("sausage width {width} exceeds inflated bounding box validity")]
    SausageTooWide { width: f64 },
    #[error("support not covered: sampling box radius {radius} < circumradius {needed}")]
    SupportNotCovered { radius: f64, needed: f64 },
    #[error("inner-approximation guards violated: ell = {ell} outside ({lo}, {hi}]")]
    InnerApproxGuards { ell: f64, lo: f64, hi: f64 },
    #[error("model not decomposable: {0}")]
    NotDecomposable(String),
    #[error("kernel degenerate: covariance matrix is not positive definite")]
    KernelDegenerate,
    #[error("extrapolation unstable: residuals not decreasing ({0})")]
    ExtrapolationUnstable(String),
    #[error("sequence not regular: {0}")]
    NotRegular(String),
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("guard violated: {0}")]
    GuardViolated(String),
    #[error("ground set too small: need at least {need}, got {got}")]
    GroundTooSmall { need: usize, got: usize },
    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Absolute tolerance for exact geometric predicates on coordinates of order one.
pub const GEOM_TOL: f64 = 1e-9;
