//! Descriptor-form equations of motion
//!
//! ```text
//! M(q) V̇ + Aᵀ(q) λ = Q(q, V, t)
//!          A(q) V̇ = −Ȧ V
//! ```
//!
//! solved as one dense saddle-point (KKT) system, and the right-hand side
//! of the local-coordinate model used inside a Lie group integration step.

use crate::error::DynamicsError;
use crate::lgt::{apply_lgt, local_kinematics, AbsCoords, LgtCombo, LocalCoords};
use crate::motiongroups::GroupModel;
use crate::Vec6;
use nalgebra::{DMatrix, DVector};

/// KKT systems whose 1-norm reciprocal condition number falls below this
/// are reported as singular.
pub const RCOND_MIN: f64 = 1e-12;

/// A multibody model over N bodies in absolute coordinates.
///
/// Velocities are stacked per body as (ω, v) in the twist representation
/// of [`MbsModel::group_model`]: body-fixed for SE(3), mixed for SO(3)×R³.
/// The first `constraint_count` rows of the Jacobian are ∂g/∂(twist).
pub trait MbsModel: Send + Sync {
    fn body_count(&self) -> usize;

    fn group_model(&self) -> GroupModel;

    /// 6N×6N symmetric positive definite mass matrix.
    fn mass_matrix(&self, q: &[AbsCoords]) -> DMatrix<f64>;

    /// Generalized forces including velocity-dependent bias terms.
    fn forces(&self, q: &[AbsCoords], v: &DVector<f64>, t: f64) -> DVector<f64>;

    /// Number m of geometric constraints g(q) = 0.
    fn constraint_count(&self) -> usize {
        0
    }

    /// Number m̄ ≥ m of velocity constraints A(q) V = 0.
    fn velocity_constraint_count(&self) -> usize {
        self.constraint_count()
    }

    fn constraints(&self, _q: &[AbsCoords]) -> DVector<f64> {
        DVector::zeros(0)
    }

    /// m̄ × 6N constraint Jacobian A(q).
    fn jacobian(&self, _q: &[AbsCoords]) -> DMatrix<f64> {
        DMatrix::zeros(0, 6 * self.body_count())
    }

    /// Ȧ V at the given state; the acceleration constraint reads A V̇ = −Ȧ V.
    fn adot_v(&self, _q: &[AbsCoords], _v: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(0)
    }

    fn potential_energy(&self, _q: &[AbsCoords]) -> f64 {
        0.0
    }
}

/// Absolute coordinates, stacked twists and time.
#[derive(Debug, Clone, PartialEq)]
pub struct MbsState {
    pub q: Vec<AbsCoords>,
    pub v: DVector<f64>,
    pub t: f64,
}

impl MbsState {
    pub fn new(q: Vec<AbsCoords>, v: DVector<f64>, t: f64) -> Self {
        MbsState { q, v, t }
    }

    pub fn twist(&self, body: usize) -> Vec6 {
        self.v.fixed_rows::<6>(6 * body).into_owned()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KktSolution {
    pub vdot: DVector<f64>,
    pub lambda: DVector<f64>,
}

fn check_dims(model: &dyn MbsModel, q: &[AbsCoords], v: &DVector<f64>) -> Result<(), DynamicsError> {
    let n = model.body_count();
    if q.len() != n {
        return Err(DynamicsError::Dimension { expected: n, found: q.len() });
    }
    if v.len() != 6 * n {
        return Err(DynamicsError::Dimension { expected: 6 * n, found: v.len() });
    }
    Ok(())
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solve [[M, Aᵀ], [A, 0]] (V̇, λ) = (Q, −Ȧ V) at configuration q.
pub fn solve_kkt_at(
    model: &dyn MbsModel,
    q: &[AbsCoords],
    v: &DVector<f64>,
    t: f64,
) -> Result<KktSolution, DynamicsError> {
    check_dims(model, q, v)?;
    let n = 6 * model.body_count();
    let mbar = model.velocity_constraint_count();
    let mass = model.mass_matrix(q);
    let force = model.forces(q, v, t);
    let size = n + mbar;
    let mut k = DMatrix::zeros(size, size);
    k.view_mut((0, 0), (n, n)).copy_from(&mass);
    let mut rhs = DVector::zeros(size);
    rhs.rows_mut(0, n).copy_from(&force);
    if mbar > 0 {
        let a = model.jacobian(q);
        k.view_mut((n, 0), (mbar, n)).copy_from(&a);
        k.view_mut((0, n), (n, mbar)).copy_from(&a.transpose());
        rhs.rows_mut(n, mbar).copy_from(&(-model.adot_v(q, v)));
    }
    let norm = one_norm(&k);
    let lu = k.lu();
    let inv = lu.try_inverse().ok_or(DynamicsError::SingularKkt { rcond: 0.0 })?;
    let rcond = 1.0 / (norm * one_norm(&inv));
    if !(rcond >= RCOND_MIN) {
        return Err(DynamicsError::SingularKkt { rcond });
    }
    let sol = inv * rhs;
    Ok(KktSolution {
        vdot: sol.rows(0, n).into_owned(),
        lambda: sol.rows(n, mbar).into_owned(),
    })
}

pub fn solve_kkt(model: &dyn MbsModel, state: &MbsState) -> Result<KktSolution, DynamicsError> {
    solve_kkt_at(model, &state.q, &state.v, state.t)
}

/// V̇ of the index-1 formulation.
pub fn forward_dynamics(model: &dyn MbsModel, state: &MbsState) -> Result<DVector<f64>, DynamicsError> {
    Ok(solve_kkt(model, state)?.vdot)
}

/// Split stacked local coordinates into per-body values of `combo`'s kind.
pub fn unstack_local(combo: LgtCombo, x: &DVector<f64>) -> Vec<LocalCoords> {
    (0..x.len() / 6)
        .map(|i| LocalCoords::from_vec6(combo.local, &x.fixed_rows::<6>(6 * i).into_owned()))
        .collect()
}

/// Per-body τ(q_k, X) over the stacked state.
pub fn apply_lgt_stacked(
    combo: LgtCombo,
    q_k: &[AbsCoords],
    x: &DVector<f64>,
) -> Result<Vec<AbsCoords>, DynamicsError> {
    q_k.iter()
        .zip(unstack_local(combo, x))
        .map(|(q, l)| apply_lgt(combo, q, &l).map_err(DynamicsError::from))
        .collect()
}

/// Ensure the model's group matches the combo's group.
pub fn check_group(model: &dyn MbsModel, combo: LgtCombo) -> Result<(), DynamicsError> {
    if model.group_model() != combo.group() {
        return Err(DynamicsError::GroupMismatch {
            model: model.group_model(),
            combo: combo.to_string(),
            required: combo.group(),
        });
    }
    Ok(())
}

/// Right-hand side of the local model: V̇ = f(τ(q_k, X), V, t) and
/// Ẋ = dψ⁻¹_{−X}(V), body by body.
pub fn local_rhs(
    model: &dyn MbsModel,
    combo: LgtCombo,
    q_k: &[AbsCoords],
    x: &DVector<f64>,
    v: &DVector<f64>,
    t: f64,
) -> Result<(DVector<f64>, DVector<f64>), DynamicsError> {
    check_group(model, combo)?;
    check_dims(model, q_k, v)?;
    if x.len() != v.len() {
        return Err(DynamicsError::Dimension { expected: v.len(), found: x.len() });
    }
    let q = apply_lgt_stacked(combo, q_k, x)?;
    let vdot = solve_kkt_at(model, &q, v, t)?.vdot;
    let mut xdot = DVector::zeros(x.len());
    for (i, local) in unstack_local(combo, x).iter().enumerate() {
        let m = local_kinematics(local)?;
        let vi: Vec6 = v.fixed_rows::<6>(6 * i).into_owned();
        xdot.fixed_rows_mut::<6>(6 * i).copy_from(&(m * vi));
    }
    Ok((vdot, xdot))
}

/// (‖g(q)‖∞, ‖A(q) V‖∞).
pub fn constraint_residuals(model: &dyn MbsModel, state: &MbsState) -> (f64, f64) {
    if model.velocity_constraint_count() == 0 {
        return (0.0, 0.0);
    }
    let g = model.constraints(&state.q);
    let av = model.jacobian(&state.q) * &state.v;
    (g.amax(), av.amax())
}

/// ½ Vᵀ M V.
pub fn kinetic_energy(model: &dyn MbsModel, state: &MbsState) -> f64 {
    0.5 * state.v.dot(&(model.mass_matrix(&state.q) * &state.v))
}

pub fn total_energy(model: &dyn MbsModel, state: &MbsState) -> f64 {
    kinetic_energy(model, state) + model.potential_energy(&state.q)
}
