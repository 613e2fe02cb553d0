//! Coordinate maps, differentials and composition formulas on SO(3) and
//! Sp(1).
//!
//! All functions are pure and operate on plain values.

pub mod compose;
pub mod quat;
pub mod so3;
pub mod trig;

pub use compose::{bch_so3, compose_axisangle_rodrigues};
pub use quat::{exp_sp1, quat_mul, quat_to_rotmat, rodrigues_to_quat, UnitQuaternion};
pub use so3::{
    cay_so3, cayley_sigma, dcay_inv_so3, dcay_so3, dexp_inv_so3, dexp_so3, exp_so3, hat,
    log_so3, log_so3_strict, vee,
};
pub use trig::{sinc, TrigCoefficients};
