//! Rigid-body models with spherical joints under uniform gravity.
//!
//! Each body carries its own frame; the centre of mass sits at `com_offset`
//! in that frame. Dynamics are assembled from the body-fixed Newton-Euler
//! equations about the frame origin. Under SO(3)×R³ the same equations are
//! mapped to mixed twists (ω, ṙ) by V_body = T V_mixed, T = diag(I, Rᵀ),
//! which makes the mass matrix configuration dependent when the frame is
//! off the centre of mass.

use crate::dynamics::MbsModel;
use crate::lgt::AbsCoords;
use crate::motiongroups::GroupModel;
use crate::rotmaps::hat;
use crate::{Mat3, Mat6, Vec3, Vec6};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodyParams {
    /// kg
    pub mass: f64,
    /// Principal moments about the centre of mass in body axes, kg·m².
    pub inertia: Vec3,
    /// Centre of mass relative to the body frame origin, m.
    pub com_offset: Vec3,
    /// m/s², inertial frame.
    pub gravity: Vec3,
}

impl BodyParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.mass > 0.0) {
            return Err(format!("mass must be positive, got {}", self.mass));
        }
        if self.inertia.iter().any(|&i| !(i > 0.0)) {
            return Err(format!("inertia entries must be positive, got {:?}", self.inertia));
        }
        Ok(())
    }

    /// Inertia tensor about the body frame origin.
    pub fn origin_inertia(&self) -> Mat3 {
        let sh = hat(&self.com_offset);
        Mat3::from_diagonal(&self.inertia) - sh * sh * self.mass
    }

    /// Constant mass matrix for body-fixed twists (ω, v) at the frame origin.
    pub fn body_mass_matrix(&self) -> Mat6 {
        let sh = hat(&self.com_offset) * self.mass;
        crate::motiongroups::blocks(
            &self.origin_inertia(),
            &sh,
            &(-sh),
            &(Mat3::identity() * self.mass),
        )
    }

    /// Gyroscopic bias plus gravity for a body-fixed twist.
    fn body_forces(&self, rot: &Mat3, w: &Vec3, v: &Vec3) -> Vec6 {
        let mv = self.body_mass_matrix() * Vec6::new(w.x, w.y, w.z, v.x, v.y, v.z);
        let h: Vec3 = mv.fixed_rows::<3>(0).into_owned();
        let p: Vec3 = mv.fixed_rows::<3>(3).into_owned();
        let fg = rot.transpose() * self.gravity * self.mass;
        let torque = -w.cross(&h) - v.cross(&p) + self.com_offset.cross(&fg);
        let force = -w.cross(&p) + fg;
        Vec6::new(torque.x, torque.y, torque.z, force.x, force.y, force.z)
    }
}

/// Where one side of a spherical joint is attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Attachment {
    /// Fixed inertial point.
    Ground(Vec3),
    /// Point given in the frame of body `body`.
    Body { body: usize, point: Vec3 },
}

/// Coincidence of two points, three constraint rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalJoint {
    pub a: Attachment,
    pub b: Attachment,
}

/// Bodies, joints and the group whose twists parameterize velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidBodySystem {
    pub bodies: Vec<BodyParams>,
    pub joints: Vec<SphericalJoint>,
    pub group: GroupModel,
}

fn twist_parts(v: &DVector<f64>, i: usize) -> (Vec3, Vec3) {
    (
        v.fixed_rows::<3>(6 * i).into_owned(),
        v.fixed_rows::<3>(6 * i + 3).into_owned(),
    )
}

impl RigidBodySystem {
    pub fn new(bodies: Vec<BodyParams>, joints: Vec<SphericalJoint>, group: GroupModel) -> Self {
        RigidBodySystem { bodies, joints, group }
    }

    /// Same bodies and joints with velocities in another group's twists.
    pub fn with_group(&self, group: GroupModel) -> Self {
        RigidBodySystem { group, ..self.clone() }
    }

    fn point_position(&self, q: &[AbsCoords], at: &Attachment) -> Vec3 {
        match *at {
            Attachment::Ground(p) => p,
            Attachment::Body { body, point } => q[body].position() + q[body].rotation() * point,
        }
    }

    /// d(point)/dt = J V_body-block for an attached body point.
    fn point_jacobian(&self, rot: &Mat3, point: &Vec3) -> (Mat3, Mat3) {
        let ang = -(rot * hat(point));
        let lin = match self.group {
            GroupModel::SemiDirect => *rot,
            GroupModel::DirectProduct => Mat3::identity(),
        };
        (ang, lin)
    }

    fn point_bias(&self, rot: &Mat3, point: &Vec3, w: &Vec3, v: &Vec3) -> Vec3 {
        match self.group {
            GroupModel::SemiDirect => rot * w.cross(&(v + w.cross(point))),
            GroupModel::DirectProduct => rot * w.cross(&w.cross(point)),
        }
    }

    /// Twist of body `i` converted to the body-fixed representation.
    fn body_twist(&self, q: &AbsCoords, w: Vec3, v: Vec3) -> (Vec3, Vec3) {
        match self.group {
            GroupModel::SemiDirect => (w, v),
            GroupModel::DirectProduct => (w, q.rotation().transpose() * v),
        }
    }

    /// Angular momentum about the inertial origin, resolved in the inertial
    /// frame.
    pub fn spatial_angular_momentum(&self, q: &[AbsCoords], v: &DVector<f64>) -> Vec3 {
        let mut total = Vec3::zeros();
        for (i, b) in self.bodies.iter().enumerate() {
            let (w, vv) = twist_parts(v, i);
            let (w, vb) = self.body_twist(&q[i], w, vv);
            let mv = b.body_mass_matrix() * Vec6::new(w.x, w.y, w.z, vb.x, vb.y, vb.z);
            let rot = q[i].rotation();
            let h: Vec3 = rot * mv.fixed_rows::<3>(0).into_owned();
            let p: Vec3 = rot * mv.fixed_rows::<3>(3).into_owned();
            total += h + q[i].position().cross(&p);
        }
        total
    }
}

impl MbsModel for RigidBodySystem {
    fn body_count(&self) -> usize {
        self.bodies.len()
    }

    fn group_model(&self) -> GroupModel {
        self.group
    }

    fn mass_matrix(&self, q: &[AbsCoords]) -> DMatrix<f64> {
        let n = self.bodies.len();
        let mut m = DMatrix::zeros(6 * n, 6 * n);
        for (i, b) in self.bodies.iter().enumerate() {
            let mb = b.body_mass_matrix();
            let block = match self.group {
                GroupModel::SemiDirect => mb,
                GroupModel::DirectProduct => {
                    let t = crate::motiongroups::blocks(
                        &Mat3::identity(),
                        &Mat3::zeros(),
                        &Mat3::zeros(),
                        &q[i].rotation().transpose(),
                    );
                    t.transpose() * mb * t
                }
            };
            m.fixed_view_mut::<6, 6>(6 * i, 6 * i).copy_from(&block);
        }
        m
    }

    fn forces(&self, q: &[AbsCoords], v: &DVector<f64>, _t: f64) -> DVector<f64> {
        let n = self.bodies.len();
        let mut out = DVector::zeros(6 * n);
        for (i, b) in self.bodies.iter().enumerate() {
            let rot = q[i].rotation();
            let (w, vv) = twist_parts(v, i);
            let f = match self.group {
                GroupModel::SemiDirect => b.body_forces(&rot, &w, &vv),
                GroupModel::DirectProduct => {
                    let vb = rot.transpose() * vv;
                    // Q_mixed = Tᵀ (Q_body − M_body Ṫ V), Ṫ V = (0, −ω × v_body)
                    let wv = -w.cross(&vb);
                    let corr = b.body_mass_matrix() * Vec6::new(0.0, 0.0, 0.0, wv.x, wv.y, wv.z);
                    let qb = b.body_forces(&rot, &w, &vb) - corr;
                    let ang: Vec3 = qb.fixed_rows::<3>(0).into_owned();
                    let lin: Vec3 = rot * qb.fixed_rows::<3>(3).into_owned();
                    Vec6::new(ang.x, ang.y, ang.z, lin.x, lin.y, lin.z)
                }
            };
            out.fixed_rows_mut::<6>(6 * i).copy_from(&f);
        }
        out
    }

    fn constraint_count(&self) -> usize {
        3 * self.joints.len()
    }

    fn constraints(&self, q: &[AbsCoords]) -> DVector<f64> {
        let mut g = DVector::zeros(3 * self.joints.len());
        for (j, joint) in self.joints.iter().enumerate() {
            let d = self.point_position(q, &joint.a) - self.point_position(q, &joint.b);
            g.fixed_rows_mut::<3>(3 * j).copy_from(&d);
        }
        g
    }

    fn jacobian(&self, q: &[AbsCoords]) -> DMatrix<f64> {
        let n = self.bodies.len();
        let mut a = DMatrix::zeros(3 * self.joints.len(), 6 * n);
        for (j, joint) in self.joints.iter().enumerate() {
            for (at, sign) in [(&joint.a, 1.0), (&joint.b, -1.0)] {
                if let Attachment::Body { body, point } = *at {
                    let (ang, lin) = self.point_jacobian(&q[body].rotation(), &point);
                    let mut blk = a.fixed_view_mut::<3, 6>(3 * j, 6 * body);
                    let ang = ang * sign + blk.fixed_view::<3, 3>(0, 0);
                    let lin = lin * sign + blk.fixed_view::<3, 3>(0, 3);
                    blk.fixed_view_mut::<3, 3>(0, 0).copy_from(&ang);
                    blk.fixed_view_mut::<3, 3>(0, 3).copy_from(&lin);
                }
            }
        }
        a
    }

    fn adot_v(&self, q: &[AbsCoords], v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(3 * self.joints.len());
        for (j, joint) in self.joints.iter().enumerate() {
            let mut acc = Vec3::zeros();
            for (at, sign) in [(&joint.a, 1.0), (&joint.b, -1.0)] {
                if let Attachment::Body { body, point } = *at {
                    let (w, vv) = twist_parts(v, body);
                    acc += self.point_bias(&q[body].rotation(), &point, &w, &vv) * sign;
                }
            }
            out.fixed_rows_mut::<3>(3 * j).copy_from(&acc);
        }
        out
    }

    fn potential_energy(&self, q: &[AbsCoords]) -> f64 {
        self.bodies
            .iter()
            .zip(q)
            .map(|(b, qi)| {
                let com = qi.position() + qi.rotation() * b.com_offset;
                -b.mass * b.gravity.dot(&com)
            })
            .sum()
    }
}

/// Single unconstrained body. The body frame should sit at the centre of
/// mass so that translation and rotation decouple.
pub fn free_rigid_body(params: BodyParams, group: GroupModel) -> RigidBodySystem {
    RigidBodySystem::new(vec![params], Vec::new(), group)
}

/// One body whose point `pin_point_body` is held at the inertial `anchor`.
pub fn pinned_body(
    params: BodyParams,
    pin_point_body: Vec3,
    anchor: Vec3,
    group: GroupModel,
) -> RigidBodySystem {
    RigidBodySystem::new(
        vec![params],
        vec![SphericalJoint {
            a: Attachment::Body { body: 0, point: pin_point_body },
            b: Attachment::Ground(anchor),
        }],
        group,
    )
}

/// Attachment points of a two-body spherical chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainJoints {
    /// Inertial anchor of the first joint.
    pub anchor: Vec3,
    /// First joint in body 1's frame.
    pub body1_pin: Vec3,
    /// Second joint in body 1's frame.
    pub body1_tip: Vec3,
    /// Second joint in body 2's frame.
    pub body2_pin: Vec3,
}

/// Ground–body 1 and body 1–body 2 spherical joints.
pub fn two_body_chain(
    params1: BodyParams,
    params2: BodyParams,
    joints: ChainJoints,
    group: GroupModel,
) -> RigidBodySystem {
    RigidBodySystem::new(
        vec![params1, params2],
        vec![
            SphericalJoint {
                a: Attachment::Body { body: 0, point: joints.body1_pin },
                b: Attachment::Ground(joints.anchor),
            },
            SphericalJoint {
                a: Attachment::Body { body: 0, point: joints.body1_tip },
                b: Attachment::Body { body: 1, point: joints.body2_pin },
            },
        ],
        group,
    )
}
