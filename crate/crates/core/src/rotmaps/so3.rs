//! Exponential and Cayley charts on SO(3) with their right-trivialized
//! differentials.
//!
//! Conventions: `exp_so3(x)` rotates by ‖x‖ about x/‖x‖. The differentials
//! are right-trivialized, (D_x exp)(y) = (dexp_x y)~ exp(x̃), so body-fixed
//! angular velocities satisfy ω = dexp_{−x} ẋ and ẋ = dexp⁻¹_{−x} ω.

use super::trig::{one_minus_alpha_over_phi2, one_minus_gamma_over_phi2, TrigCoefficients};
use crate::error::MapError;
use crate::{Mat3, Vec3};
use std::f64::consts::PI;

/// Distance from 2π at which dexp⁻¹ on SO(3) is declared singular.
pub const CHART_TOL: f64 = 1e-6;

/// Threshold on trace(R) + 1 below which the log is treated as a half turn.
pub const NEAR_PI_TRACE_TOL: f64 = 1e-8;

/// Skew-symmetric matrix x̃ with x̃ y = x × y.
#[inline]
pub fn hat(x: &Vec3) -> Mat3 {
    Mat3::new(0.0, -x.z, x.y, x.z, 0.0, -x.x, -x.y, x.x, 0.0)
}

/// Inverse of [`hat`] on the skew part of `m`.
#[inline]
pub fn vee(m: &Mat3) -> Vec3 {
    Vec3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// R = I + α x̃ + ½ β x̃².
pub fn exp_so3(x: &Vec3) -> Mat3 {
    let c = TrigCoefficients::new(x.norm());
    let xh = hat(x);
    Mat3::identity() + xh * c.alpha + xh * xh * (0.5 * c.beta)
}

fn log_core(r: &Mat3) -> (Vec3, bool) {
    let cos_phi = (0.5 * (r.trace() - 1.0)).clamp(-1.0, 1.0);
    let axis_sin = vee(r); // sin φ · n
    let sin_phi = axis_sin.norm();
    let phi = sin_phi.atan2(cos_phi);
    let near_pi = r.trace() + 1.0 < NEAR_PI_TRACE_TOL;
    if phi < 3.0 {
        // φ/sin φ is smooth on [0, 3)
        let scale = if phi < 1e-4 {
            1.0 + phi * phi / 6.0
        } else {
            phi / sin_phi
        };
        return (axis_sin * scale, near_pi);
    }
    // Close to a half turn: extract the axis from the symmetric part,
    // S = (R + Rᵀ)/2 − cos φ I = (1 − cos φ) n nᵀ.
    let s = (r + r.transpose()) * 0.5 - Mat3::identity() * cos_phi;
    let k = (0..3)
        .max_by(|&a, &b| s[(a, a)].total_cmp(&s[(b, b)]))
        .unwrap_or(0);
    let mut n: Vec3 = s.column(k).into_owned();
    n /= n.norm();
    if n.dot(&axis_sin) < 0.0 {
        n = -n;
    }
    (n * phi.min(PI), near_pi)
}

/// Rotation vector with ‖x‖ ∈ [0, π] such that exp_so3(x) = R.
///
/// At a half turn both ±x are valid; the axis extracted from the symmetric
/// part is returned with the sign suggested by the (tiny) skew part.
pub fn log_so3(r: &Mat3) -> Vec3 {
    log_core(r).0
}

/// Like [`log_so3`] but reports [`MapError::NearPiAmbiguity`] when
/// trace(R) + 1 < [`NEAR_PI_TRACE_TOL`].
pub fn log_so3_strict(r: &Mat3) -> Result<Vec3, MapError> {
    match log_core(r) {
        (_, true) => Err(MapError::NearPiAmbiguity),
        (x, false) => Ok(x),
    }
}

/// dexp_x = I + (β/2) x̃ + (1 − α) ñ².
pub fn dexp_so3(x: &Vec3) -> Mat3 {
    let phi = x.norm();
    let c = TrigCoefficients::new(phi);
    let xh = hat(x);
    Mat3::identity() + xh * (0.5 * c.beta) + xh * xh * one_minus_alpha_over_phi2(phi)
}

/// dexp⁻¹_x = I − ½ x̃ + ‖x‖⁻² (1 − γ) x̃².
pub fn dexp_inv_so3(x: &Vec3) -> Result<Mat3, MapError> {
    let phi = x.norm();
    let limit = 2.0 * PI - CHART_TOL;
    if !(phi < limit) {
        return Err(MapError::ChartBoundary { angle: phi, limit });
    }
    let xh = hat(x);
    Ok(Mat3::identity() - xh * 0.5 + xh * xh * one_minus_gamma_over_phi2(phi))
}

/// σ = 2/(1 + ‖c‖²).
#[inline]
pub fn cayley_sigma(c: &Vec3) -> f64 {
    2.0 / (1.0 + c.norm_squared())
}

/// cay(c̃) = I + σ (c̃ + c̃²).
pub fn cay_so3(c: &Vec3) -> Mat3 {
    let ch = hat(c);
    Mat3::identity() + (ch + ch * ch) * cayley_sigma(c)
}

/// dcay_c = σ (I + c̃).
pub fn dcay_so3(c: &Vec3) -> Mat3 {
    (Mat3::identity() + hat(c)) * cayley_sigma(c)
}

/// dcay⁻¹_c = (1/σ) I + ½ (c̃² − c̃).
pub fn dcay_inv_so3(c: &Vec3) -> Mat3 {
    let ch = hat(c);
    Mat3::identity() / cayley_sigma(c) + (ch * ch - ch) * 0.5
}
