//! Local-global transition (LGT) maps.
//!
//! An LGT map τ(q, X) produces the absolute coordinates reached from q by
//! the incremental motion ψ(X), where X are local coordinates on the
//! configuration group G. The eight supported cells combine
//!
//! | absolute \ local | a) screw | b) axis-angle+Δr | c) Rodrigues+Δr | d) ext. Rodrigues |
//! |---|---|---|---|---|
//! | 1) quaternion+position | SE(3), exp | SO(3)×R³, exp | SO(3)×R³, cay | SE(3), cay |
//! | 2) rotation vector+position | SE(3), exp | SO(3)×R³, exp | SO(3)×R³, cay | SE(3), cay |
//!
//! and every cell satisfies α(τ(q, X)) = α(q) ·_G ψ(X).

use crate::error::{LgtError, MapError};
use crate::motiongroups::{
    cay_se3, dcay_inv_se3, dexp_inv_se3, exp_se3, ExtRodriguesCoords, GroupModel, Pose,
    ScrewCoords,
};
use crate::rotmaps::{
    bch_so3, cay_so3, compose_axisangle_rodrigues, dcay_inv_so3, dexp_inv_so3, dexp_so3,
    exp_so3, exp_sp1, hat, quat_mul, rodrigues_to_quat, UnitQuaternion,
};
use crate::{Mat3, Mat6, Vec3, Vec6};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Absolute coordinate family (row of the table).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AbsKind {
    /// (Q, r), ν = 7.
    QuatPos,
    /// (ρ, r), ν = 6.
    AxisAnglePos,
}

/// Local coordinate family (column of the table).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LocalKind {
    Screw,
    AxisAngleDelta,
    RodriguesDelta,
    ExtRodrigues,
}

/// Rotation chart used by a local coordinate family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotChart {
    Exp,
    Cay,
}

impl LocalKind {
    pub fn group(self) -> GroupModel {
        match self {
            LocalKind::Screw | LocalKind::ExtRodrigues => GroupModel::SemiDirect,
            LocalKind::AxisAngleDelta | LocalKind::RodriguesDelta => GroupModel::DirectProduct,
        }
    }

    pub fn chart(self) -> RotChart {
        match self {
            LocalKind::Screw | LocalKind::AxisAngleDelta => RotChart::Exp,
            LocalKind::RodriguesDelta | LocalKind::ExtRodrigues => RotChart::Cay,
        }
    }
}

/// One cell of the absolute × local table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LgtCombo {
    pub absolute: AbsKind,
    pub local: LocalKind,
}

impl LgtCombo {
    pub const fn new(absolute: AbsKind, local: LocalKind) -> Self {
        LgtCombo { absolute, local }
    }

    /// The eight cells in table order 1a..1d, 2a..2d.
    pub fn all() -> [LgtCombo; 8] {
        let mut out = [LgtCombo::new(AbsKind::QuatPos, LocalKind::Screw); 8];
        let locals = [
            LocalKind::Screw,
            LocalKind::AxisAngleDelta,
            LocalKind::RodriguesDelta,
            LocalKind::ExtRodrigues,
        ];
        for (i, a) in [AbsKind::QuatPos, AbsKind::AxisAnglePos].into_iter().enumerate() {
            for (j, l) in locals.into_iter().enumerate() {
                out[4 * i + j] = LgtCombo::new(a, l);
            }
        }
        out
    }

    pub fn group(self) -> GroupModel {
        self.local.group()
    }

    pub fn chart(self) -> RotChart {
        self.local.chart()
    }
}

impl fmt::Display for LgtCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.absolute {
            AbsKind::QuatPos => '1',
            AbsKind::AxisAnglePos => '2',
        };
        let l = match self.local {
            LocalKind::Screw => 'a',
            LocalKind::AxisAngleDelta => 'b',
            LocalKind::RodriguesDelta => 'c',
            LocalKind::ExtRodrigues => 'd',
        };
        write!(f, "{a}{l}")
    }
}

impl FromStr for LgtCombo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let b = s.trim().as_bytes();
        if b.len() != 2 {
            return Err(format!("invalid combo id {s:?}; expected one of 1a..1d, 2a..2d"));
        }
        let absolute = match b[0] {
            b'1' => AbsKind::QuatPos,
            b'2' => AbsKind::AxisAnglePos,
            _ => return Err(format!("invalid combo id {s:?}; absolute part must be 1 or 2")),
        };
        let local = match b[1].to_ascii_lowercase() {
            b'a' => LocalKind::Screw,
            b'b' => LocalKind::AxisAngleDelta,
            b'c' => LocalKind::RodriguesDelta,
            b'd' => LocalKind::ExtRodrigues,
            _ => return Err(format!("invalid combo id {s:?}; local part must be a..d")),
        };
        Ok(LgtCombo { absolute, local })
    }
}

/// Absolute coordinates of one body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AbsCoords {
    QuatPos { q: UnitQuaternion, r: Vec3 },
    AxisAnglePos { rho: Vec3, r: Vec3 },
}

impl AbsCoords {
    pub fn kind(&self) -> AbsKind {
        match self {
            AbsCoords::QuatPos { .. } => AbsKind::QuatPos,
            AbsCoords::AxisAnglePos { .. } => AbsKind::AxisAnglePos,
        }
    }

    pub fn position(&self) -> Vec3 {
        match self {
            AbsCoords::QuatPos { r, .. } | AbsCoords::AxisAnglePos { r, .. } => *r,
        }
    }

    /// Rotation matrix R(q).
    pub fn rotation(&self) -> Mat3 {
        match self {
            AbsCoords::QuatPos { q, .. } => crate::rotmaps::quat_to_rotmat(q),
            AbsCoords::AxisAnglePos { rho, .. } => exp_so3(rho),
        }
    }

    /// Coordinates of `kind` describing the given rotation vector and
    /// position.
    pub fn from_rotation_vector(kind: AbsKind, x: &Vec3, r: Vec3) -> Self {
        match kind {
            AbsKind::QuatPos => AbsCoords::QuatPos { q: exp_sp1(x), r },
            AbsKind::AxisAnglePos => AbsCoords::AxisAnglePos { rho: wrap_rotation_vector(x), r },
        }
    }

    /// |‖Q‖ − 1| for quaternion coordinates.
    pub fn quat_norm_error(&self) -> Option<f64> {
        match self {
            AbsCoords::QuatPos { q, .. } => Some((q.norm() - 1.0).abs()),
            AbsCoords::AxisAnglePos { .. } => None,
        }
    }

    /// Flat parameter vector: (p0, p, r) or (ρ, r).
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            AbsCoords::QuatPos { q, r } => {
                vec![q.p0, q.p.x, q.p.y, q.p.z, r.x, r.y, r.z]
            }
            AbsCoords::AxisAnglePos { rho, r } => vec![rho.x, rho.y, rho.z, r.x, r.y, r.z],
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            AbsCoords::QuatPos { .. } => "QuatPos",
            AbsCoords::AxisAnglePos { .. } => "AxisAnglePos",
        }
    }
}

/// Map a rotation vector to the equivalent one with ‖x‖ ≤ π.
pub fn wrap_rotation_vector(x: &Vec3) -> Vec3 {
    let phi = x.norm();
    if phi <= PI {
        return *x;
    }
    let wrapped = (phi + PI).rem_euclid(2.0 * PI) - PI;
    x * (wrapped / phi)
}

/// Local coordinates of one body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LocalCoords {
    Screw(ScrewCoords),
    AxisAngleDelta { x: Vec3, dr: Vec3 },
    RodriguesDelta { c: Vec3, dr: Vec3 },
    ExtRodrigues(ExtRodriguesCoords),
}

impl LocalCoords {
    pub fn zero(kind: LocalKind) -> Self {
        LocalCoords::from_vec6(kind, &Vec6::zeros())
    }

    pub fn kind(&self) -> LocalKind {
        match self {
            LocalCoords::Screw(_) => LocalKind::Screw,
            LocalCoords::AxisAngleDelta { .. } => LocalKind::AxisAngleDelta,
            LocalCoords::RodriguesDelta { .. } => LocalKind::RodriguesDelta,
            LocalCoords::ExtRodrigues(_) => LocalKind::ExtRodrigues,
        }
    }

    pub fn from_vec6(kind: LocalKind, v: &Vec6) -> Self {
        let a: Vec3 = v.fixed_rows::<3>(0).into_owned();
        let b: Vec3 = v.fixed_rows::<3>(3).into_owned();
        match kind {
            LocalKind::Screw => LocalCoords::Screw(ScrewCoords { x: a, y: b }),
            LocalKind::AxisAngleDelta => LocalCoords::AxisAngleDelta { x: a, dr: b },
            LocalKind::RodriguesDelta => LocalCoords::RodriguesDelta { c: a, dr: b },
            LocalKind::ExtRodrigues => LocalCoords::ExtRodrigues(ExtRodriguesCoords { c: a, d: b }),
        }
    }

    pub fn to_vec6(&self) -> Vec6 {
        let (a, b) = self.parts();
        Vec6::new(a.x, a.y, a.z, b.x, b.y, b.z)
    }

    /// (rotation part, translation part).
    pub fn parts(&self) -> (Vec3, Vec3) {
        match *self {
            LocalCoords::Screw(ScrewCoords { x, y }) => (x, y),
            LocalCoords::AxisAngleDelta { x, dr } => (x, dr),
            LocalCoords::RodriguesDelta { c, dr } => (c, dr),
            LocalCoords::ExtRodrigues(ExtRodriguesCoords { c, d }) => (c, d),
        }
    }

    /// Rotation angle of the incremental rotation ψ(X).
    pub fn rotation_angle(&self) -> f64 {
        let (rot, _) = self.parts();
        match self.kind().chart() {
            RotChart::Exp => rot.norm(),
            RotChart::Cay => 2.0 * rot.norm().atan(),
        }
    }

    fn variant_name(&self) -> &'static str {
        match self {
            LocalCoords::Screw(_) => "Screw",
            LocalCoords::AxisAngleDelta { .. } => "AxisAngleDelta",
            LocalCoords::RodriguesDelta { .. } => "RodriguesDelta",
            LocalCoords::ExtRodrigues(_) => "ExtRodrigues",
        }
    }
}

/// Pose parameterized by absolute coordinates.
pub fn alpha_map(q: &AbsCoords) -> Pose {
    Pose::new(q.rotation(), q.position())
}

/// The chart map ψ(X) ∈ G of the local coordinates.
pub fn psi(x: &LocalCoords) -> Pose {
    match x {
        LocalCoords::Screw(s) => exp_se3(s),
        LocalCoords::AxisAngleDelta { x, dr } => Pose::new(exp_so3(x), *dr),
        LocalCoords::RodriguesDelta { c, dr } => Pose::new(cay_so3(c), *dr),
        LocalCoords::ExtRodrigues(e) => cay_se3(e),
    }
}

/// Incremental quaternion of a local rotation in the given chart.
pub fn delta_quat(rot_local: &Vec3, chart: RotChart) -> UnitQuaternion {
    match chart {
        RotChart::Exp => exp_sp1(rot_local),
        RotChart::Cay => rodrigues_to_quat(rot_local),
    }
}

/// Q′ = Q · ΔQ. No renormalization.
pub fn tau_r_quat(q: &UnitQuaternion, rot_local: &Vec3, chart: RotChart) -> UnitQuaternion {
    quat_mul(q, &delta_quat(rot_local, chart))
}

/// ρ′ with exp(ρ̃′) = exp(ρ̃) ψ_R(x), wrapped to ‖ρ′‖ ≤ π.
pub fn tau_r_axisangle(rho: &Vec3, rot_local: &Vec3, chart: RotChart) -> Result<Vec3, MapError> {
    if *rot_local == Vec3::zeros() {
        return Ok(wrap_rotation_vector(rho));
    }
    match chart {
        RotChart::Exp => bch_so3(rho, rot_local),
        RotChart::Cay => compose_axisangle_rodrigues(rho, rot_local),
    }
}

/// Δr = dexp_x y, body-frame displacement of a screw motion.
pub fn delta_r_screw(x: &ScrewCoords) -> Vec3 {
    dexp_so3(&x.x) * x.y
}

/// Δr = (I + cay c̃) d, body-frame displacement of an SE(3) Cayley motion.
pub fn delta_r_cayley(x: &ExtRodriguesCoords) -> Vec3 {
    (Mat3::identity() + cay_so3(&x.c)) * x.d
}

/// r′ = r + R(q) Δr with Δr resolved in the body frame at q.
///
/// For quaternions the rotation is applied in the expanded form
/// Δr + 2 (p0 p̃ + p̃²) Δr.
pub fn tau_t(q: &AbsCoords, dr_body: &Vec3) -> Vec3 {
    match q {
        AbsCoords::QuatPos { q, r } => {
            let ph = hat(&q.p);
            r + dr_body + (ph * q.p0 + ph * ph) * dr_body * 2.0
        }
        AbsCoords::AxisAnglePos { rho, r } => r + exp_so3(rho) * dr_body,
    }
}

fn mismatch(combo: LgtCombo, found: &'static str) -> LgtError {
    LgtError::VariantMismatch { combo: combo.to_string(), found }
}

/// q′ = τ(q, X) for the given table cell.
///
/// SE(3) cells move the position through the rotated body-frame
/// displacement, r′ = r + R(q) Δr(X). SO(3)×R³ cells add the inertial
/// increment, r′ = r + Δr, matching the direct-product composition.
pub fn apply_lgt(combo: LgtCombo, q: &AbsCoords, x: &LocalCoords) -> Result<AbsCoords, LgtError> {
    if q.kind() != combo.absolute {
        return Err(mismatch(combo, q.variant_name()));
    }
    if x.kind() != combo.local {
        return Err(mismatch(combo, x.variant_name()));
    }
    let (rot_local, _) = x.parts();
    let chart = combo.chart();
    let r_new = match x {
        LocalCoords::Screw(s) => tau_t(q, &delta_r_screw(s)),
        LocalCoords::ExtRodrigues(e) => tau_t(q, &delta_r_cayley(e)),
        LocalCoords::AxisAngleDelta { dr, .. } | LocalCoords::RodriguesDelta { dr, .. } => {
            q.position() + dr
        }
    };
    Ok(match q {
        AbsCoords::QuatPos { q, .. } => AbsCoords::QuatPos {
            q: tau_r_quat(q, &rot_local, chart),
            r: r_new,
        },
        AbsCoords::AxisAnglePos { rho, .. } => AbsCoords::AxisAnglePos {
            rho: tau_r_axisangle(rho, &rot_local, chart)?,
            r: r_new,
        },
    })
}

/// Matrix of the local kinematic reconstruction Ẋ = dψ⁻¹_{−X}(V) for one
/// body, with V in the twist representation of the cell's group.
pub fn local_kinematics(x: &LocalCoords) -> Result<Mat6, MapError> {
    let (rot, tr) = x.parts();
    Ok(match x.kind() {
        LocalKind::Screw => dexp_inv_se3(&ScrewCoords { x: -rot, y: -tr })?,
        LocalKind::ExtRodrigues => dcay_inv_se3(&ExtRodriguesCoords { c: -rot, d: -tr }),
        LocalKind::AxisAngleDelta => {
            let mut m = Mat6::identity();
            m.fixed_view_mut::<3, 3>(0, 0).copy_from(&dexp_inv_so3(&-rot)?);
            m
        }
        LocalKind::RodriguesDelta => {
            let mut m = Mat6::identity();
            m.fixed_view_mut::<3, 3>(0, 0).copy_from(&dcay_inv_so3(&-rot));
            m
        }
    })
}
