//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls the closed-form maps under test: exponentials are
//! truncated matrix power series, Cayley maps are explicit matrix inverses
//! and quaternion products are written out component-wise.
#![allow(dead_code)]

use lgt_core::dynamics::MbsState;
use lgt_core::integrate::{integrate, IntegratorConfig, Projection, Scheme, TrajectoryRecord};
use lgt_core::lgt::{AbsCoords, AbsKind, LgtCombo};
use lgt_core::models::{free_rigid_body, pinned_body, BodyParams, RigidBodySystem};
use lgt_core::motiongroups::{GroupModel, Twist};
use lgt_core::{Mat3, Vec3};
use nalgebra::{DVector, Matrix4, SMatrix, Vector4};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the ball of radius `r`.
pub fn ball(rng: &mut ChaCha8Rng, r: f64) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if v.norm_squared() <= 1.0 {
            return v * r;
        }
    }
}

pub fn skew(x: &Vec3) -> Mat3 {
    Mat3::new(0.0, -x.z, x.y, x.z, 0.0, -x.x, -x.y, x.x, 0.0)
}

pub fn unskew(m: &Mat3) -> Vec3 {
    Vec3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]) * 0.5
}

/// Σ_{k<terms} A^k / k!
pub fn series_expm<const D: usize>(a: &SMatrix<f64, D, D>, terms: usize) -> SMatrix<f64, D, D> {
    let mut sum = SMatrix::<f64, D, D>::identity();
    let mut term = SMatrix::<f64, D, D>::identity();
    for k in 1..terms {
        term = term * a / k as f64;
        sum += term;
    }
    sum
}

pub fn twist_hat(x: &Vec3, y: &Vec3) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&skew(x));
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(y);
    m
}

pub fn twist_vee(m: &Matrix4<f64>) -> (Vec3, Vec3) {
    (
        unskew(&m.fixed_view::<3, 3>(0, 0).into_owned()),
        m.fixed_view::<3, 1>(0, 3).into_owned(),
    )
}

pub fn oracle_exp_so3(x: &Vec3) -> Mat3 {
    series_expm(&skew(x), 30)
}

pub fn oracle_exp_se3(x: &Vec3, y: &Vec3) -> Matrix4<f64> {
    series_expm(&twist_hat(x, y), 30)
}

/// (I − c̃)⁻¹ (I + c̃)
pub fn oracle_cay_so3(c: &Vec3) -> Mat3 {
    let s = skew(c);
    (Mat3::identity() - s).try_inverse().unwrap() * (Mat3::identity() + s)
}

/// (I − X̂)⁻¹ (I + X̂) on 4×4 homogeneous matrices.
pub fn oracle_cay_se3(c: &Vec3, d: &Vec3) -> Matrix4<f64> {
    let s = twist_hat(c, d);
    (Matrix4::identity() - s).try_inverse().unwrap() * (Matrix4::identity() + s)
}

pub fn homogeneous(rot: &Mat3, pos: &Vec3) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(rot);
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(pos);
    m
}

/// Hamilton product of (w, x, y, z) quaternions.
pub fn oracle_qmul(a: &Vector4<f64>, b: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    )
}

/// Quaternion of the rotation vector x, computed from axis and half angle.
pub fn oracle_quat(x: &Vec3) -> Vector4<f64> {
    let phi = x.norm();
    if phi == 0.0 {
        return Vector4::new(1.0, 0.0, 0.0, 0.0);
    }
    let n = x / phi;
    let s = (phi / 2.0).sin();
    Vector4::new((phi / 2.0).cos(), s * n.x, s * n.y, s * n.z)
}

/// Rotation matrix of a unit quaternion written out entry by entry.
pub fn oracle_quat_rotation(q: &Vector4<f64>) -> Mat3 {
    let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
    Mat3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - w * z),
        2.0 * (x * z + w * y),
        2.0 * (x * y + w * z),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - w * x),
        2.0 * (x * z - w * y),
        2.0 * (y * z + w * x),
        1.0 - 2.0 * (x * x + y * y),
    )
}

/// Homogeneous matrix of absolute coordinates without using the library's
/// parameterization maps.
pub fn oracle_pose(q: &AbsCoords) -> Matrix4<f64> {
    match q {
        AbsCoords::QuatPos { q, r } => {
            homogeneous(&oracle_quat_rotation(&Vector4::new(q.p0, q.p.x, q.p.y, q.p.z)), r)
        }
        AbsCoords::AxisAnglePos { rho, r } => homogeneous(&oracle_exp_so3(rho), r),
    }
}

pub fn asymmetric_body() -> BodyParams {
    BodyParams {
        mass: 3.0,
        inertia: Vec3::new(1.0, 2.0, 3.0),
        com_offset: Vec3::zeros(),
        gravity: Vec3::zeros(),
    }
}

/// Pendulum body: frame origin at the pin, centre of mass `l` below it.
pub fn pendulum_body(l: f64) -> BodyParams {
    BodyParams {
        mass: 2.0,
        inertia: Vec3::new(0.1, 0.12, 0.05),
        com_offset: Vec3::new(0.0, 0.0, -l),
        gravity: Vec3::new(0.0, 0.0, -9.81),
    }
}

pub fn pendulum(group: GroupModel) -> RigidBodySystem {
    pinned_body(pendulum_body(0.5), Vec3::zeros(), Vec3::zeros(), group)
}

pub fn free_body(group: GroupModel) -> RigidBodySystem {
    free_rigid_body(asymmetric_body(), group)
}

/// Single-body state from a rotation vector, position, body angular
/// velocity and inertial origin velocity.
pub fn body_state(
    kind: AbsKind,
    group: GroupModel,
    rot: Vec3,
    pos: Vec3,
    w: Vec3,
    rdot: Vec3,
) -> MbsState {
    let q = AbsCoords::from_rotation_vector(kind, &rot, pos);
    let tw = Twist::from_physical(group, &q.rotation(), w, rdot);
    MbsState::new(vec![q], DVector::from_column_slice(tw.to_vec6().as_slice()), 0.0)
}

/// Unstable-axis tumbling of the asymmetric free body with some drift.
pub fn tumbling_state(combo: LgtCombo) -> MbsState {
    body_state(
        combo.absolute,
        combo.group(),
        Vec3::new(0.3, -0.2, 0.5),
        Vec3::new(0.1, 0.2, 0.3),
        Vec3::new(0.1, 2.0, 0.1),
        Vec3::new(0.5, -0.25, 1.0),
    )
}

/// Vigorous tumbling, used where errors must stay well above roundoff.
pub fn fast_tumbling_state(combo: LgtCombo) -> MbsState {
    body_state(
        combo.absolute,
        combo.group(),
        Vec3::new(0.3, -0.2, 0.5),
        Vec3::new(0.1, 0.2, 0.3),
        Vec3::new(2.0, 5.0, -3.0),
        Vec3::new(0.5, -0.25, 1.0),
    )
}

/// Near-axial spin at one revolution per second with a small wobble.
pub fn wobbling_spin_state(combo: LgtCombo) -> MbsState {
    body_state(
        combo.absolute,
        combo.group(),
        Vec3::new(0.3, -0.2, 0.5),
        Vec3::zeros(),
        Vec3::new(0.5, 2.0 * std::f64::consts::PI, 0.5),
        Vec3::new(0.5, -0.25, 1.0),
    )
}

pub fn run(
    model: &RigidBodySystem,
    combo: LgtCombo,
    h: f64,
    t_end: f64,
    state0: &MbsState,
    projection: bool,
) -> TrajectoryRecord {
    let mut cfg = IntegratorConfig::new(Scheme::MuntheKaasRK4, combo, h, t_end);
    if projection {
        cfg = cfg.with_projection(1e-12, 10);
    }
    integrate(model, &cfg, state0).unwrap_or_else(|e| panic!("{combo} h={h}: {e}"))
}

pub fn run_baseline(model: &RigidBodySystem, h: f64, t_end: f64, state0: &MbsState) -> TrajectoryRecord {
    let mut cfg = IntegratorConfig::new(Scheme::BaselineQuatRK4, LgtCombo::all()[0], h, t_end);
    cfg.projection = Projection::Off;
    integrate(model, &cfg, state0).unwrap()
}

/// max entry difference of the final homogeneous poses.
pub fn final_pose_gap(a: &TrajectoryRecord, b: &TrajectoryRecord) -> f64 {
    (oracle_pose(&a.last().q[0]) - oracle_pose(&b.last().q[0])).amax()
}

/// Global error of a run against a reference: pose and twist.
pub fn global_error(run: &TrajectoryRecord, reference: &TrajectoryRecord) -> f64 {
    let mut e: f64 = 0.0;
    for (qa, qb) in run.last().q.iter().zip(&reference.last().q) {
        e = e.max((oracle_pose(qa) - oracle_pose(qb)).amax());
    }
    e.max((&run.last().v - &reference.last().v).amax())
}

/// Least-squares slope and R² of log(err) against log(h).
pub fn loglog_fit(h: &[f64], err: &[f64]) -> (f64, f64) {
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, sxy * sxy / (sxx * syy))
}

pub const CHAIN: lgt_core::models::ChainJoints = lgt_core::models::ChainJoints {
    anchor: Vec3::new(0.0, 0.0, 0.0),
    body1_pin: Vec3::new(0.0, 0.0, 0.0),
    body1_tip: Vec3::new(0.0, 0.0, -1.0),
    body2_pin: Vec3::new(0.0, 0.0, 0.0),
};

pub fn chain(group: GroupModel) -> RigidBodySystem {
    lgt_core::models::two_body_chain(pendulum_body(0.5), pendulum_body(0.4), CHAIN, group)
}

/// Consistent chain state from body rotations and body angular velocities.
pub fn chain_state(combo: LgtCombo, x1: Vec3, x2: Vec3, w1: Vec3, w2: Vec3) -> MbsState {
    let q1 = AbsCoords::from_rotation_vector(combo.absolute, &x1, Vec3::zeros());
    let r1 = q1.rotation();
    let r2 = r1 * CHAIN.body1_tip;
    let q2 = AbsCoords::from_rotation_vector(combo.absolute, &x2, r2);
    let rdot2 = r1 * w1.cross(&CHAIN.body1_tip);
    let t1 = Twist::from_physical(combo.group(), &r1, w1, Vec3::zeros());
    let t2 = Twist::from_physical(combo.group(), &q2.rotation(), w2, rdot2);
    let mut v = DVector::zeros(12);
    v.fixed_rows_mut::<6>(0).copy_from(&t1.to_vec6());
    v.fixed_rows_mut::<6>(6).copy_from(&t2.to_vec6());
    MbsState::new(vec![q1, q2], v, 0.0)
}
