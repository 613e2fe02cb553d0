//! Fixed-step integrators for absolute-coordinate models.
//!
//! The Lie group schemes integrate the local model (V, X) from X(t_k) = 0
//! with classical RK4 and map back with q_{k+1} = τ(q_k, X(t_{k+1})). The
//! baseline scheme integrates (Q, r, V) directly and renormalizes Q after
//! every step.

use crate::dynamics::{
    apply_lgt_stacked, check_group, constraint_residuals, local_rhs, solve_kkt_at, total_energy,
    MbsModel, MbsState,
};
use crate::error::{DynamicsError, IntegrateError, MapError};
use crate::lgt::{local_kinematics, AbsCoords, AbsKind, LgtCombo, LocalCoords, LocalKind};
use crate::motiongroups::GroupModel;
use crate::rotmaps::{quat_to_rotmat, UnitQuaternion};
use crate::{Mat6, Vec3};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Initial states must satisfy g and A V to this level.
pub const INITIAL_CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    MuntheKaasRK4,
    LocalVectorRK4,
    BaselineQuatRK4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    Off,
    PositionVelocity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    /// Ignored by the baseline scheme except to pick the projection chart.
    pub combo: LgtCombo,
    /// Step size, s.
    pub h: f64,
    /// s
    pub t_end: f64,
    pub projection: Projection,
    pub projection_tol: f64,
    pub projection_max_iter: usize,
}

impl IntegratorConfig {
    pub fn new(scheme: Scheme, combo: LgtCombo, h: f64, t_end: f64) -> Self {
        IntegratorConfig {
            scheme,
            combo,
            h,
            t_end,
            projection: Projection::Off,
            projection_tol: 1e-12,
            projection_max_iter: 10,
        }
    }

    pub fn with_projection(mut self, tol: f64, max_iter: usize) -> Self {
        self.projection = Projection::PositionVelocity;
        self.projection_tol = tol;
        self.projection_max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<(), IntegrateError> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(IntegrateError::Config(format!("h must be positive, got {}", self.h)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(IntegrateError::Config(format!("t_end must be non-negative, got {}", self.t_end)));
        }
        if !(self.projection_tol > 0.0) {
            return Err(IntegrateError::Config(format!(
                "projection_tol must be positive, got {}",
                self.projection_tol
            )));
        }
        Ok(())
    }

    /// Number of steps, floor(t_end / h).
    pub fn step_count(&self) -> usize {
        (self.t_end / self.h + 1e-9).floor() as usize
    }
}

/// Diagnostics recorded after each step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub q: Vec<AbsCoords>,
    pub v: DVector<f64>,
    pub energy: f64,
    pub gnorm: f64,
    pub gvnorm: f64,
    /// Per-body |‖Q‖ − 1|; for the baseline scheme this is measured before
    /// renormalization. Empty for rotation-vector coordinates.
    pub qnorm_err: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryRecord {
    pub rows: Vec<TrajectoryRow>,
}

impl TrajectoryRecord {
    pub fn last(&self) -> &TrajectoryRow {
        self.rows.last().expect("trajectory always holds the initial state")
    }

    pub fn final_state(&self) -> MbsState {
        let r = self.last();
        MbsState::new(r.q.clone(), r.v.clone(), r.t)
    }

    /// max_k |E_k − E_0| / |E_0|.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let e0 = self.rows[0].energy;
        self.rows
            .iter()
            .map(|r| (r.energy - e0).abs() / e0.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    pub fn max_gnorm(&self) -> f64 {
        self.rows.iter().map(|r| r.gnorm).fold(0.0, f64::max)
    }

    pub fn max_qnorm_err(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.qnorm_err.iter().copied())
            .fold(0.0, f64::max)
    }
}

fn check_chart_budget(combo: LgtCombo, x: &DVector<f64>) -> Result<(), MapError> {
    for i in 0..x.len() / 6 {
        let local = LocalCoords::from_vec6(combo.local, &x.fixed_rows::<6>(6 * i).into_owned());
        let angle = local.rotation_angle();
        if !(angle < PI) {
            return Err(MapError::ChartBoundary { angle, limit: PI });
        }
    }
    Ok(())
}

/// Classical RK4 on the local model from X = 0; returns (X(t+h), V(t+h)).
fn rk4_local(
    model: &dyn MbsModel,
    combo: LgtCombo,
    state: &MbsState,
    h: f64,
) -> Result<(DVector<f64>, DVector<f64>), DynamicsError> {
    let (q0, v0, t) = (&state.q, &state.v, state.t);
    let x0 = DVector::zeros(v0.len());
    let (k1v, k1x) = local_rhs(model, combo, q0, &x0, v0, t)?;
    let x2 = &k1x * (0.5 * h);
    let v2 = v0 + &k1v * (0.5 * h);
    check_chart_budget(combo, &x2)?;
    let (k2v, k2x) = local_rhs(model, combo, q0, &x2, &v2, t + 0.5 * h)?;
    let x3 = &k2x * (0.5 * h);
    let v3 = v0 + &k2v * (0.5 * h);
    check_chart_budget(combo, &x3)?;
    let (k3v, k3x) = local_rhs(model, combo, q0, &x3, &v3, t + 0.5 * h)?;
    let x4 = &k3x * h;
    let v4 = v0 + &k3v * h;
    check_chart_budget(combo, &x4)?;
    let (k4v, k4x) = local_rhs(model, combo, q0, &x4, &v4, t + h)?;
    let x1 = (k1x + (k2x + k3x) * 2.0 + k4x) * (h / 6.0);
    let v1 = v0 + (k1v + (k2v + k3v) * 2.0 + k4v) * (h / 6.0);
    check_chart_budget(combo, &x1)?;
    Ok((x1, v1))
}

fn local_step(
    model: &dyn MbsModel,
    combo: LgtCombo,
    state: &MbsState,
    h: f64,
) -> Result<MbsState, IntegrateError> {
    let (x1, v1) = rk4_local(model, combo, state, h)?;
    let q1 = apply_lgt_stacked(combo, &state.q, &x1)?;
    Ok(MbsState::new(q1, v1, state.t + h))
}

/// One Munthe-Kaas RK4 step: local coordinates start at zero, q advances
/// through the LGT map of `combo`.
pub fn step_munthe_kaas(
    model: &dyn MbsModel,
    combo: LgtCombo,
    state: &MbsState,
    h: f64,
) -> Result<MbsState, IntegrateError> {
    local_step(model, combo, state, h)
}

/// One step of a vector-space RK4 applied to the LGT-based local model.
///
/// With a single-step scheme this is the same discretization as
/// [`step_munthe_kaas`]; it is kept as its own entry point so that
/// multistep-free vector-space methods can be slotted in here.
pub fn step_local_vector(
    model: &dyn MbsModel,
    combo: LgtCombo,
    state: &MbsState,
    h: f64,
) -> Result<MbsState, IntegrateError> {
    local_step(model, combo, state, h)
}

/// Q̇ = ½ Q ∘ (0, ω).
fn quat_rate(q: &UnitQuaternion, w: &Vec3) -> UnitQuaternion {
    let d = *q * UnitQuaternion::new(0.0, *w);
    UnitQuaternion::new(0.5 * d.p0, d.p * 0.5)
}

/// Baseline RK4 on (Q, r, V) followed by renormalization of Q.
///
/// Returns the new state and the per-body |‖Q‖ − 1| before
/// renormalization.
pub fn step_baseline_quat(
    model: &dyn MbsModel,
    state: &MbsState,
    h: f64,
) -> Result<(MbsState, Vec<f64>), IntegrateError> {
    let n = state.q.len();
    let mut quats = Vec::with_capacity(n);
    let mut pos = Vec::with_capacity(n);
    for q in &state.q {
        match q {
            AbsCoords::QuatPos { q, r } => {
                quats.push(*q);
                pos.push(*r);
            }
            AbsCoords::AxisAnglePos { .. } => return Err(IntegrateError::NotQuaternion),
        }
    }
    let group = model.group_model();
    let build = |qs: &[UnitQuaternion], rs: &[Vec3]| -> Vec<AbsCoords> {
        qs.iter().zip(rs).map(|(q, r)| AbsCoords::QuatPos { q: *q, r: *r }).collect()
    };
    let rates = |qs: &[UnitQuaternion], rs: &[Vec3], v: &DVector<f64>, t: f64| {
        let coords = build(qs, rs);
        let vdot = solve_kkt_at(model, &coords, v, t)?.vdot;
        let mut dq = Vec::with_capacity(n);
        let mut dr = Vec::with_capacity(n);
        for (i, q) in qs.iter().enumerate() {
            let w: Vec3 = v.fixed_rows::<3>(6 * i).into_owned();
            let lin: Vec3 = v.fixed_rows::<3>(6 * i + 3).into_owned();
            dq.push(quat_rate(q, &w));
            dr.push(match group {
                GroupModel::DirectProduct => lin,
                GroupModel::SemiDirect => quat_to_rotmat(q) * lin,
            });
        }
        Ok::<_, DynamicsError>((dq, dr, vdot))
    };
    let axpy = |qs: &[UnitQuaternion], rs: &[Vec3], dq: &[UnitQuaternion], dr: &[Vec3], s: f64| {
        let q: Vec<UnitQuaternion> = qs
            .iter()
            .zip(dq)
            .map(|(a, b)| UnitQuaternion::new(a.p0 + s * b.p0, a.p + b.p * s))
            .collect();
        let r: Vec<Vec3> = rs.iter().zip(dr).map(|(a, b)| a + b * s).collect();
        (q, r)
    };
    let (t, v0) = (state.t, &state.v);
    let (dq1, dr1, dv1) = rates(&quats, &pos, v0, t)?;
    let (q2, r2) = axpy(&quats, &pos, &dq1, &dr1, 0.5 * h);
    let v2 = v0 + &dv1 * (0.5 * h);
    let (dq2, dr2, dv2) = rates(&q2, &r2, &v2, t + 0.5 * h)?;
    let (q3, r3) = axpy(&quats, &pos, &dq2, &dr2, 0.5 * h);
    let v3 = v0 + &dv2 * (0.5 * h);
    let (dq3, dr3, dv3) = rates(&q3, &r3, &v3, t + 0.5 * h)?;
    let (q4, r4) = axpy(&quats, &pos, &dq3, &dr3, h);
    let v4 = v0 + &dv3 * h;
    let (dq4, dr4, dv4) = rates(&q4, &r4, &v4, t + h)?;

    let mut q_new = Vec::with_capacity(n);
    let mut drift = Vec::with_capacity(n);
    for i in 0..n {
        let comb = |a: f64, b: f64, c: f64, d: f64| (a + 2.0 * (b + c) + d) * (h / 6.0);
        let dq0 = comb(dq1[i].p0, dq2[i].p0, dq3[i].p0, dq4[i].p0);
        let dqv = (dq1[i].p + (dq2[i].p + dq3[i].p) * 2.0 + dq4[i].p) * (h / 6.0);
        let raw = UnitQuaternion::new(quats[i].p0 + dq0, quats[i].p + dqv);
        drift.push((raw.norm() - 1.0).abs());
        let r = pos[i] + (dr1[i] + (dr2[i] + dr3[i]) * 2.0 + dr4[i]) * (h / 6.0);
        q_new.push(AbsCoords::QuatPos { q: raw.normalized(), r });
    }
    let v1 = v0 + (dv1 + (dv2 + dv3) * 2.0 + dv4) * (h / 6.0);
    Ok((MbsState::new(q_new, v1, t + h), drift))
}

/// Chart differential at the origin, dψ_0, mapping local increments to
/// twists.
fn chart_jacobian_at_origin(kind: LocalKind) -> Mat6 {
    local_kinematics(&LocalCoords::zero(kind))
        .ok()
        .and_then(|m| m.try_inverse())
        .unwrap_or_else(Mat6::identity)
}

/// Outcome of [`project`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projected {
    pub state: MbsState,
    pub iterations: usize,
}

/// Post-step constraint stabilization.
///
/// Positions: Gauss-Newton on g(q) = 0 with minimum-norm chart increments
/// δX solving (A dψ_0) δX = −g, applied through the LGT map. Velocities:
/// V ← V − Aᵀ (A Aᵀ)⁻¹ A V.
pub fn project(
    model: &dyn MbsModel,
    combo: LgtCombo,
    state: &MbsState,
    tol: f64,
    max_iter: usize,
) -> Result<Projected, IntegrateError> {
    let m = model.constraint_count();
    let mbar = model.velocity_constraint_count();
    if mbar == 0 {
        return Ok(Projected { state: state.clone(), iterations: 0 });
    }
    let nb = model.body_count();
    let chart = chart_jacobian_at_origin(combo.local);
    let mut j = DMatrix::zeros(6 * nb, 6 * nb);
    for i in 0..nb {
        j.fixed_view_mut::<6, 6>(6 * i, 6 * i).copy_from(&chart);
    }
    let mut q = state.q.clone();
    let mut iterations = 0;
    if m > 0 {
        loop {
            let g = model.constraints(&q);
            let gnorm = g.amax();
            if gnorm < tol {
                break;
            }
            if iterations == max_iter {
                return Err(IntegrateError::NoConvergence { iterations, gnorm });
            }
            let a = model.jacobian(&q).rows(0, m).into_owned();
            let b = a * &j;
            let bbt = &b * b.transpose();
            let chol = bbt.cholesky().ok_or(DynamicsError::SingularKkt { rcond: 0.0 })?;
            let dx = -(b.transpose() * chol.solve(&g));
            q = apply_lgt_stacked(combo, &q, &dx)?;
            iterations += 1;
        }
    }
    let a = model.jacobian(&q);
    let av = &a * &state.v;
    let v = if av.amax() < tol {
        state.v.clone()
    } else {
        let aat = &a * a.transpose();
        let chol = aat.cholesky().ok_or(DynamicsError::SingularKkt { rcond: 0.0 })?;
        &state.v - a.transpose() * chol.solve(&av)
    };
    Ok(Projected { state: MbsState::new(q, v, state.t), iterations })
}

/// Chart used to project baseline states.
fn baseline_projection_combo(model: &dyn MbsModel) -> LgtCombo {
    let local = match model.group_model() {
        GroupModel::SemiDirect => LocalKind::Screw,
        GroupModel::DirectProduct => LocalKind::AxisAngleDelta,
    };
    LgtCombo::new(AbsKind::QuatPos, local)
}

/// Advance one step with the configured scheme and projection. Returns the
/// state and the per-body quaternion norm error to record.
pub fn step(
    model: &dyn MbsModel,
    config: &IntegratorConfig,
    state: &MbsState,
) -> Result<(MbsState, Vec<f64>), IntegrateError> {
    let (next, qerr, proj_combo) = match config.scheme {
        Scheme::MuntheKaasRK4 | Scheme::LocalVectorRK4 => {
            let next = if config.scheme == Scheme::MuntheKaasRK4 {
                step_munthe_kaas(model, config.combo, state, config.h)?
            } else {
                step_local_vector(model, config.combo, state, config.h)?
            };
            let qerr = next.q.iter().filter_map(AbsCoords::quat_norm_error).collect();
            (next, qerr, config.combo)
        }
        Scheme::BaselineQuatRK4 => {
            let (next, drift) = step_baseline_quat(model, state, config.h)?;
            (next, drift, baseline_projection_combo(model))
        }
    };
    let next = match config.projection {
        Projection::Off => next,
        Projection::PositionVelocity => {
            project(model, proj_combo, &next, config.projection_tol, config.projection_max_iter)?.state
        }
    };
    Ok((next, qerr))
}

fn row(model: &dyn MbsModel, state: &MbsState, qnorm_err: Vec<f64>) -> TrajectoryRow {
    let (gnorm, gvnorm) = constraint_residuals(model, state);
    TrajectoryRow {
        t: state.t,
        q: state.q.clone(),
        v: state.v.clone(),
        energy: total_energy(model, state),
        gnorm,
        gvnorm,
        qnorm_err,
    }
}

/// Fixed-step driver recording diagnostics at every step.
pub fn integrate(
    model: &dyn MbsModel,
    config: &IntegratorConfig,
    state0: &MbsState,
) -> Result<TrajectoryRecord, IntegrateError> {
    config.validate()?;
    match config.scheme {
        Scheme::BaselineQuatRK4 => {
            if state0.q.iter().any(|q| q.kind() != AbsKind::QuatPos) {
                return Err(IntegrateError::NotQuaternion);
            }
        }
        _ => {
            check_group(model, config.combo)?;
            if let Some(q) = state0.q.iter().find(|q| q.kind() != config.combo.absolute) {
                return Err(crate::error::LgtError::VariantMismatch {
                    combo: config.combo.to_string(),
                    found: match q.kind() {
                        AbsKind::QuatPos => "QuatPos",
                        AbsKind::AxisAnglePos => "AxisAnglePos",
                    },
                }
                .into());
            }
        }
    }
    if state0.q.len() != model.body_count() || state0.v.len() != 6 * model.body_count() {
        return Err(DynamicsError::Dimension {
            expected: model.body_count(),
            found: state0.q.len(),
        }
        .into());
    }
    let (gnorm, gvnorm) = constraint_residuals(model, state0);
    if !(gnorm < INITIAL_CONSISTENCY_TOL && gvnorm < INITIAL_CONSISTENCY_TOL) {
        return Err(IntegrateError::InconsistentInitialState { gnorm, gvnorm });
    }
    let steps = config.step_count();
    let mut rows = Vec::with_capacity(steps + 1);
    let q0err = state0.q.iter().filter_map(AbsCoords::quat_norm_error).collect();
    rows.push(row(model, state0, q0err));
    let mut state = state0.clone();
    for k in 0..steps {
        let (mut next, qerr) = step(model, config, &state).map_err(|e| IntegrateError::Step {
            step: k + 1,
            t: state.t,
            source: Box::new(e),
        })?;
        next.t = state0.t + (k + 1) as f64 * config.h;
        rows.push(row(model, &next, qerr));
        state = next;
    }
    Ok(TrajectoryRecord { rows })
}
