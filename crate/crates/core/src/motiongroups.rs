//! Rigid body poses under SE(3) or SO(3)×R³ semantics, and the exponential
//! and Cayley charts on those groups.
//!
//! A [`Pose`] is stored as (R, r); the [`GroupModel`] passed to each
//! operation decides whether translations compose directly (r1 + r2) or
//! through the rotation (r1 + R1 r2). 6-vectors are ordered
//! (angular, linear) throughout.

use crate::rotmaps::{
    cay_so3, dcay_inv_so3, dexp_inv_so3, dexp_so3, exp_so3, exp_sp1, hat,
    trig::{b_coefficient_over_phi4, one_minus_gamma_over_phi2},
    UnitQuaternion,
};
use crate::error::MapError;
use crate::{Mat3, Mat6, Vec3, Vec6};
use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

/// Composition semantics for (R, r) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupModel {
    /// SO(3)×R³: (R1 R2, r1 + r2).
    DirectProduct,
    /// SE(3): (R1 R2, r1 + R1 r2).
    SemiDirect,
}

impl GroupModel {
    /// Twist representation paired with this group.
    pub fn twist_repr(self) -> TwistRepr {
        match self {
            GroupModel::DirectProduct => TwistRepr::Mixed,
            GroupModel::SemiDirect => TwistRepr::BodyFixed,
        }
    }
}

/// Body configuration: rotation from body to inertial frame and position of
/// the body frame origin in the inertial frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub rot: Mat3,
    pub pos: Vec3,
}

impl Pose {
    pub fn new(rot: Mat3, pos: Vec3) -> Self {
        Pose { rot, pos }
    }

    pub fn identity() -> Self {
        Pose::new(Mat3::identity(), Vec3::zeros())
    }

    /// 4×4 homogeneous transformation matrix.
    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rot);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.pos);
        m
    }

    pub fn from_homogeneous(m: &Matrix4<f64>) -> Self {
        Pose::new(
            m.fixed_view::<3, 3>(0, 0).into_owned(),
            m.fixed_view::<3, 1>(0, 3).into_owned(),
        )
    }

    /// Largest absolute entry difference in R and r.
    pub fn distance(&self, other: &Pose) -> f64 {
        (self.rot - other.rot)
            .amax()
            .max((self.pos - other.pos).amax())
    }
}

pub fn compose(model: GroupModel, a: &Pose, b: &Pose) -> Pose {
    let pos = match model {
        GroupModel::DirectProduct => a.pos + b.pos,
        GroupModel::SemiDirect => a.pos + a.rot * b.pos,
    };
    Pose::new(a.rot * b.rot, pos)
}

pub fn inverse(model: GroupModel, c: &Pose) -> Pose {
    let rt = c.rot.transpose();
    let pos = match model {
        GroupModel::DirectProduct => -c.pos,
        GroupModel::SemiDirect => -(rt * c.pos),
    };
    Pose::new(rt, pos)
}

/// Screw coordinates X = (x, y) on se(3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScrewCoords {
    pub x: Vec3,
    pub y: Vec3,
}

/// Extended Rodrigues parameters X = (c, d) on se(3).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtRodriguesCoords {
    pub c: Vec3,
    pub d: Vec3,
}

/// Which frames the two halves of a twist are resolved in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistRepr {
    /// (ω, Rᵀ ṙ): left-trivialized SE(3) velocity.
    BodyFixed,
    /// (ω, ṙ): body-fixed angular velocity with inertial linear velocity.
    Mixed,
}

/// Velocity of one body as (angular, linear) with its representation tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Twist {
    pub w: Vec3,
    pub v: Vec3,
    pub repr: TwistRepr,
}

impl Twist {
    /// Twist from body-fixed angular velocity and the inertial velocity of
    /// the frame origin, expressed in the representation of `model`.
    pub fn from_physical(model: GroupModel, rot: &Mat3, w: Vec3, rdot: Vec3) -> Self {
        match model {
            GroupModel::DirectProduct => Twist { w, v: rdot, repr: TwistRepr::Mixed },
            GroupModel::SemiDirect => Twist {
                w,
                v: rot.transpose() * rdot,
                repr: TwistRepr::BodyFixed,
            },
        }
    }

    /// Inertial velocity of the body frame origin.
    pub fn origin_velocity(&self, rot: &Mat3) -> Vec3 {
        match self.repr {
            TwistRepr::Mixed => self.v,
            TwistRepr::BodyFixed => rot * self.v,
        }
    }

    pub fn to_vec6(&self) -> Vec6 {
        Vec6::new(self.w.x, self.w.y, self.w.z, self.v.x, self.v.y, self.v.z)
    }

    pub fn from_vec6(repr: TwistRepr, v: &Vec6) -> Self {
        Twist {
            w: v.fixed_rows::<3>(0).into_owned(),
            v: v.fixed_rows::<3>(3).into_owned(),
            repr,
        }
    }
}

pub(crate) fn blocks(a: &Mat3, b: &Mat3, c: &Mat3, d: &Mat3) -> Mat6 {
    let mut m = Mat6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(a);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(b);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(c);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(d);
    m
}

/// exp on SE(3): (exp x̃, dexp_x y). For x = 0 this is (I, y).
pub fn exp_se3(x: &ScrewCoords) -> Pose {
    Pose::new(exp_so3(&x.x), dexp_so3(&x.x) * x.y)
}

/// Inverse right-trivialized differential of exp on SE(3),
/// [[dexp⁻¹_x, 0], [B(y), dexp⁻¹_x]].
pub fn dexp_inv_se3(x: &ScrewCoords) -> Result<Mat6, MapError> {
    let d = dexp_inv_so3(&x.x)?;
    let phi = x.x.norm();
    let xh = hat(&x.x);
    let yh = hat(&x.y);
    let b = yh * -0.5
        + (xh * yh + yh * xh) * one_minus_gamma_over_phi2(phi)
        + xh * xh * (x.x.dot(&x.y) * b_coefficient_over_phi4(phi));
    Ok(blocks(&d, &Mat3::zeros(), &b, &d))
}

/// Cayley map on SE(3): (cay c̃, (I + cay c̃) d).
pub fn cay_se3(x: &ExtRodriguesCoords) -> Pose {
    let r = cay_so3(&x.c);
    Pose::new(r, (Mat3::identity() + r) * x.d)
}

/// Inverse right-trivialized differential of the SE(3) Cayley map,
/// [[dcay⁻¹_c, 0], [½ (c̃ − I) d̃, ½ (I − c̃)]].
pub fn dcay_inv_se3(x: &ExtRodriguesCoords) -> Mat6 {
    let ch = hat(&x.c);
    let i = Mat3::identity();
    blocks(
        &dcay_inv_so3(&x.c),
        &Mat3::zeros(),
        &((ch - i) * hat(&x.d) * 0.5),
        &((i - ch) * 0.5),
    )
}

/// exp on SO(3)×R³: (exp x̃, r).
pub fn exp_dp(x: &Vec3, r: &Vec3) -> Pose {
    Pose::new(exp_so3(x), *r)
}

/// Right-trivialized differential of exp on SO(3)×R³: diag(dexp_x, I).
pub fn dexp_dp(x: &Vec3) -> Mat6 {
    blocks(&dexp_so3(x), &Mat3::zeros(), &Mat3::zeros(), &Mat3::identity())
}

/// exp on Sp(1)×R³: (exp(0, x/2), r).
pub fn exp_sp1xr3(x: &Vec3, r: &Vec3) -> (UnitQuaternion, Vec3) {
    (exp_sp1(x), *r)
}
