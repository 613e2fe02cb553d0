//! Unit quaternions (Sp(1)) and their relation to SO(3).
//!
//! No map in this module canonicalizes the quaternion sign: Q and −Q give
//! the same rotation, and flipping signs would break continuity of
//! quaternion trajectories.

use super::so3::{cayley_sigma, hat};
use super::trig::sinc;
use crate::{Mat3, Vec3};
use serde::{Deserialize, Serialize};
use std::ops::{Mul, Neg};

/// Quaternion (p0, p) with scalar part p0 and vector part p.
///
/// The type does not enforce unit norm; maps in this crate produce unit
/// quaternions to rounding, and the classical baseline integrator
/// deliberately carries non-unit intermediates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitQuaternion {
    pub p0: f64,
    pub p: Vec3,
}

impl UnitQuaternion {
    pub const fn new(p0: f64, p: Vec3) -> Self {
        UnitQuaternion { p0, p }
    }

    pub fn identity() -> Self {
        UnitQuaternion::new(1.0, Vec3::zeros())
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        UnitQuaternion::new(a[0], Vec3::new(a[1], a[2], a[3]))
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.p0, self.p.x, self.p.y, self.p.z]
    }

    pub fn conjugate(self) -> Self {
        UnitQuaternion::new(self.p0, -self.p)
    }

    pub fn norm(self) -> f64 {
        (self.p0 * self.p0 + self.p.norm_squared()).sqrt()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        UnitQuaternion::new(self.p0 / n, self.p / n)
    }

    /// Rotate a vector: Q · (0, v) · Q*.
    pub fn rotate(self, v: &Vec3) -> Vec3 {
        (self * UnitQuaternion::new(0.0, *v) * self.conjugate()).p
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        quat_mul(&self, &rhs)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> UnitQuaternion {
        UnitQuaternion::new(-self.p0, -self.p)
    }
}

/// (q10 q20 − q1·q2, q10 q2 + q20 q1 + q1 × q2).
pub fn quat_mul(a: &UnitQuaternion, b: &UnitQuaternion) -> UnitQuaternion {
    UnitQuaternion::new(
        a.p0 * b.p0 - a.p.dot(&b.p),
        b.p * a.p0 + a.p * b.p0 + a.p.cross(&b.p),
    )
}

/// exp(0, x/2) = (cos(‖x‖/2), ½ sinc(‖x‖/2) x).
pub fn exp_sp1(x: &Vec3) -> UnitQuaternion {
    let half = 0.5 * x.norm();
    UnitQuaternion::new(half.cos(), x * (0.5 * sinc(half)))
}

/// R = I + 2 (p0 p̃ + p̃²).
pub fn quat_to_rotmat(q: &UnitQuaternion) -> Mat3 {
    let ph = hat(&q.p);
    Mat3::identity() + (ph * q.p0 + ph * ph) * 2.0
}

/// Unit quaternion of the Gibbs-Rodrigues vector c: (√(σ/2), √(σ/2) c).
pub fn rodrigues_to_quat(c: &Vec3) -> UnitQuaternion {
    let s = (0.5 * cayley_sigma(c)).sqrt();
    UnitQuaternion::new(s, c * s)
}
