mod common;

use common::*;
use lgt_core::dynamics::{
    apply_lgt_stacked, forward_dynamics, kinetic_energy, local_rhs, solve_kkt, MbsModel, MbsState,
};
use lgt_core::lgt::{local_kinematics, AbsKind, LgtCombo, LocalCoords, LocalKind};
use lgt_core::models::{pinned_body, Attachment, BodyParams, RigidBodySystem, SphericalJoint};
use lgt_core::motiongroups::{GroupModel, Twist};
use lgt_core::{DynamicsError, Vec3};
use nalgebra::{DMatrix, DVector};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 1e-6;

/// Local increment that moves every body along its twist for unit time.
fn chart_direction(combo: LgtCombo, v: &DVector<f64>) -> DVector<f64> {
    let k0 = local_kinematics(&LocalCoords::zero(combo.local)).unwrap();
    let mut out = DVector::zeros(v.len());
    for i in 0..v.len() / 6 {
        let vi = v.fixed_rows::<6>(6 * i).into_owned();
        out.fixed_rows_mut::<6>(6 * i).copy_from(&(k0 * vi));
    }
    out
}

fn random_chain_state(rng: &mut ChaCha8Rng, combo: LgtCombo) -> MbsState {
    chain_state(combo, ball(rng, 3.0), ball(rng, 3.0), ball(rng, 3.0), ball(rng, 3.0))
}

fn models_and_states(rng: &mut ChaCha8Rng, combo: LgtCombo) -> Vec<(RigidBodySystem, MbsState)> {
    let g = combo.group();
    let pend = pendulum(g);
    let s = body_state(combo.absolute, g, ball(rng, 3.0), Vec3::zeros(), ball(rng, 3.0), Vec3::zeros());
    vec![(pend, s), (chain(g), random_chain_state(rng, combo))]
}

#[test]
fn constraint_jacobian_matches_finite_differences() {
    let mut rng = rng(21);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        for combo in LgtCombo::all() {
            for (model, s) in models_and_states(&mut rng, combo) {
                let v = DVector::from_iterator(s.v.len(), (0..s.v.len()).map(|_| ball(&mut rng, 1.0).x));
                let d = chart_direction(combo, &v);
                let plus = model.constraints(&apply_lgt_stacked(combo, &s.q, &(&d * EPS)).unwrap());
                let minus = model.constraints(&apply_lgt_stacked(combo, &s.q, &(&d * -EPS)).unwrap());
                let fd = (plus - minus) / (2.0 * EPS);
                worst = worst.max((fd - model.jacobian(&s.q) * &v).amax());
            }
        }
    }
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn adot_v_matches_finite_differences() {
    let mut rng = rng(22);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        for combo in LgtCombo::all() {
            for (model, s) in models_and_states(&mut rng, combo) {
                let d = chart_direction(combo, &s.v);
                let a_plus = model.jacobian(&apply_lgt_stacked(combo, &s.q, &(&d * EPS)).unwrap());
                let a_minus = model.jacobian(&apply_lgt_stacked(combo, &s.q, &(&d * -EPS)).unwrap());
                let fd = (a_plus - a_minus) / (2.0 * EPS) * &s.v;
                worst = worst.max((fd - model.adot_v(&s.q, &s.v)).amax());
            }
        }
    }
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn hanging_body_rests_with_weight_as_multiplier() {
    for combo in LgtCombo::all() {
        let s = body_state(combo.absolute, combo.group(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros());
        let model = pendulum(combo.group());
        let sol = solve_kkt(&model, &s).unwrap();
        assert!(sol.vdot.amax() < 1e-14);
        let weight = Vec3::new(0.0, 0.0, -9.81) * model.bodies[0].mass;
        assert!((Vec3::from_column_slice(sol.lambda.as_slice()) - weight).amax() < 1e-12);
    }
}

#[test]
fn duplicated_joint_gives_singular_kkt() {
    let joint = SphericalJoint {
        a: Attachment::Body { body: 0, point: Vec3::zeros() },
        b: Attachment::Ground(Vec3::zeros()),
    };
    let model = RigidBodySystem::new(vec![pendulum_body(0.5)], vec![joint, joint], GroupModel::SemiDirect);
    let s = body_state(AbsKind::QuatPos, GroupModel::SemiDirect, Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros());
    assert!(matches!(solve_kkt(&model, &s), Err(DynamicsError::SingularKkt { .. })));
}

#[test]
fn torque_free_body_follows_euler_equations() {
    let mut rng = rng(23);
    let inertia = asymmetric_body().inertia;
    for _ in 0..50 {
        let w = ball(&mut rng, 5.0);
        for group in [GroupModel::SemiDirect, GroupModel::DirectProduct] {
            let s = body_state(AbsKind::QuatPos, group, ball(&mut rng, 3.0), Vec3::zeros(), w, ball(&mut rng, 2.0));
            let vdot = forward_dynamics(&free_body(group), &s).unwrap();
            let h = inertia.component_mul(&w);
            let expect = -w.cross(&h).component_div(&inertia);
            assert!((Vec3::from_column_slice(&vdot.as_slice()[..3]) - expect).amax() < 1e-12);
        }
    }
}

/// Physical accelerations (ω̇, r̈) agree between the two twist conventions.
#[test]
fn group_models_agree_on_physical_acceleration() {
    let mut rng = rng(24);
    let params = BodyParams {
        mass: 1.7,
        inertia: Vec3::new(0.3, 0.5, 0.6),
        com_offset: Vec3::new(0.2, -0.1, 0.3),
        gravity: Vec3::new(0.0, 0.0, -9.81),
    };
    for _ in 0..50 {
        let x = ball(&mut rng, 3.0);
        let w = ball(&mut rng, 4.0);
        let rdot = ball(&mut rng, 2.0);
        let pin = ball(&mut rng, 0.5);
        let mut acc = Vec::new();
        let mut energy = Vec::new();
        for group in [GroupModel::SemiDirect, GroupModel::DirectProduct] {
            let free = lgt_core::models::free_rigid_body(params, group);
            let s = body_state(AbsKind::AxisAnglePos, group, x, Vec3::zeros(), w, rdot);
            energy.push(kinetic_energy(&free, &s));
            let vdot = forward_dynamics(&free, &s).unwrap();
            let wdot = Vec3::from_column_slice(&vdot.as_slice()[..3]);
            let lin = Vec3::from_column_slice(&vdot.as_slice()[3..]);
            let rot = s.q[0].rotation();
            let rddot = match group {
                GroupModel::SemiDirect => {
                    let vb = Vec3::from_column_slice(&s.v.as_slice()[3..]);
                    rot * (lin + w.cross(&vb))
                }
                GroupModel::DirectProduct => lin,
            };
            acc.push((wdot, rddot));
            // pinned variant: the constraint force must also agree
            let p = pinned_body(params, pin, s.q[0].position() + rot * pin, group);
            let tw = Twist::from_physical(group, &rot, w, -(rot * w.cross(&pin)));
            let sp = MbsState::new(s.q.clone(), DVector::from_column_slice(tw.to_vec6().as_slice()), 0.0);
            energy.push(solve_kkt(&p, &sp).unwrap().lambda.norm());
        }
        assert!((acc[0].0 - acc[1].0).amax() < 1e-11);
        assert!((acc[0].1 - acc[1].1).amax() < 1e-11);
        assert!((energy[0] - energy[2]).abs() < 1e-11 * energy[0].max(1.0));
        assert!((energy[1] - energy[3]).abs() < 1e-10 * energy[1].max(1.0));
    }
}

#[test]
fn mass_matrices_are_symmetric_positive_definite() {
    let mut rng = rng(25);
    for combo in LgtCombo::all() {
        let s = random_chain_state(&mut rng, combo);
        let m: DMatrix<f64> = chain(combo.group()).mass_matrix(&s.q);
        assert!((&m - m.transpose()).amax() < 1e-14);
        assert!(m.cholesky().is_some());
    }
}

#[test]
fn local_rhs_rejects_mismatched_group() {
    let combo: LgtCombo = "1a".parse().unwrap();
    let s = body_state(AbsKind::QuatPos, GroupModel::DirectProduct, Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), Vec3::zeros());
    let x = DVector::zeros(6);
    let err = local_rhs(&free_body(GroupModel::DirectProduct), combo, &s.q, &x, &s.v, 0.0).unwrap_err();
    assert!(matches!(err, DynamicsError::GroupMismatch { .. }));
}

#[test]
fn local_rhs_at_origin_maps_twist_through_chart() {
    for combo in LgtCombo::all() {
        let s = body_state(combo.absolute, combo.group(), Vec3::new(0.2, 0.1, 0.0), Vec3::zeros(), Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.5, 0.0, 0.0));
        let (_, xdot) = local_rhs(&free_body(combo.group()), combo, &s.q, &DVector::zeros(6), &s.v, 0.0).unwrap();
        // Cayley charts halve the rotation rate at the origin; the SE(3)
        // Cayley chart halves the translation rate too.
        let (rot, lin) = match combo.local {
            LocalKind::Screw | LocalKind::AxisAngleDelta => (1.0, 1.0),
            LocalKind::RodriguesDelta => (0.5, 1.0),
            LocalKind::ExtRodrigues => (0.5, 0.5),
        };
        let scale = DVector::from_column_slice(&[rot, rot, rot, lin, lin, lin]);
        assert!((xdot - s.v.component_mul(&scale)).amax() < 1e-15, "{combo}");
    }
}
