//! Fixtures shared by the criterion benches.

use lgt_core::dynamics::MbsState;
use lgt_core::lgt::{AbsCoords, LgtCombo};
use lgt_core::models::{free_rigid_body, pinned_body, BodyParams, RigidBodySystem};
use lgt_core::motiongroups::{GroupModel, Twist};
use lgt_core::Vec3;
use nalgebra::DVector;

/// Asymmetric free body with no gravity.
pub fn free_body(group: GroupModel) -> RigidBodySystem {
    free_rigid_body(
        BodyParams {
            mass: 3.0,
            inertia: Vec3::new(1.0, 2.0, 3.0),
            com_offset: Vec3::zeros(),
            gravity: Vec3::zeros(),
        },
        group,
    )
}

/// Heavy top pinned at the origin, centre of mass 0.5 m below the pin.
pub fn pendulum(group: GroupModel) -> RigidBodySystem {
    let body = BodyParams {
        mass: 2.0,
        inertia: Vec3::new(0.1, 0.12, 0.05),
        com_offset: Vec3::new(0.0, 0.0, -0.5),
        gravity: Vec3::new(0.0, 0.0, -9.81),
    };
    pinned_body(body, Vec3::zeros(), Vec3::zeros(), group)
}

/// Tumbling free-body state in the coordinates of `combo`.
pub fn tumbling_state(combo: LgtCombo) -> MbsState {
    let q = AbsCoords::from_rotation_vector(combo.absolute, &Vec3::new(0.3, -0.2, 0.5), Vec3::new(0.1, 0.2, 0.3));
    let tw = Twist::from_physical(combo.group(), &q.rotation(), Vec3::new(2.0, 5.0, -3.0), Vec3::new(0.5, -0.25, 1.0));
    MbsState::new(vec![q], DVector::from_column_slice(tw.to_vec6().as_slice()), 0.0)
}

/// Tilted, spinning pendulum state with the pin at rest.
pub fn pendulum_state(combo: LgtCombo) -> MbsState {
    let q = AbsCoords::from_rotation_vector(combo.absolute, &Vec3::new(0.5, 0.3, 0.0), Vec3::zeros());
    let tw = Twist::from_physical(combo.group(), &q.rotation(), Vec3::new(0.5, -0.3, 2.0), Vec3::zeros());
    MbsState::new(vec![q], DVector::from_column_slice(tw.to_vec6().as_slice()), 0.0)
}
