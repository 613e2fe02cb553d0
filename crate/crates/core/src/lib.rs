//! Lie group coordinate maps, local-global transition (LGT) maps and
//! time integrators for rigid multibody systems modelled in absolute
//! coordinates.
//!
//! The crate is organised bottom-up:
//!
//! * [`rotmaps`]: closed-form maps on SO(3) and Sp(1) (exp, log, Cayley,
//!   their right-trivialized differentials, quaternions, BCH composition).
//! * [`motiongroups`]: poses under SE(3) or SO(3)×R³ semantics and the
//!   charts on those groups.
//! * [`lgt`]: absolute coordinates, local coordinates and the eight
//!   local-global transition maps.
//! * [`dynamics`]: descriptor-form equations of motion and the KKT solve.
//! * [`integrate`]: Munthe-Kaas RK4, the vector-space RK4 on the local
//!   model, a classical quaternion RK4 baseline and constraint projection.
//! * [`models`]: concrete rigid-body models (free body, pinned body,
//!   two-body chain).

pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod lgt;
pub mod models;
pub mod motiongroups;
pub mod rotmaps;

pub use dynamics::{MbsModel, MbsState};
pub use error::{DynamicsError, IntegrateError, LgtError, MapError};
pub use integrate::{IntegratorConfig, Projection, Scheme, TrajectoryRecord};
pub use lgt::{AbsCoords, AbsKind, LgtCombo, LocalCoords, LocalKind};
pub use motiongroups::{GroupModel, Pose, Twist, TwistRepr};
pub use rotmaps::UnitQuaternion;

/// Column 3-vector used for rotation vectors, positions and velocities.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3×3 matrix. Rotation matrices use this type; their orthonormality is an
/// invariant of the producing map, not of the type.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// 6-vector in (angular, linear) ordering.
pub type Vec6 = nalgebra::Vector6<f64>;
/// 6×6 matrix acting on (angular, linear) 6-vectors.
pub type Mat6 = nalgebra::Matrix6<f64>;
