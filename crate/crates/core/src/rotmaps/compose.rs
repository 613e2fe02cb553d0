//! Closed-form composition of rotation vectors.
//!
//! Both maps compare the quaternion product Q(x) = Q1 · Q2 term by term and
//! read off x = a x1 + b x2 + c x1 × x2. The compound angle φ comes from the
//! scalar part; when φ > π the result is rewrapped to ‖x‖ ≤ π by
//! x ← x (φ − 2π)/φ, which amounts to using −Q instead of Q.

use super::so3::cayley_sigma;
use super::trig::sinc;
use crate::error::MapError;
use crate::Vec3;

/// Scalar factor turning the quaternion vector part into the wrapped
/// rotation vector: returns (±1, sinc(φ_eff/2)) with ‖x‖ = φ_eff ≤ π.
fn wrap_factor(scalar: f64, vector_norm: f64) -> Result<(f64, f64), MapError> {
    if !(scalar.is_finite() && vector_norm.is_finite()) {
        return Err(MapError::CompoundAnglePi);
    }
    let sign = if scalar < 0.0 { -1.0 } else { 1.0 };
    let half = vector_norm.atan2(scalar * sign);
    Ok((sign, sinc(half)))
}

/// Rotation vector x with exp(x̃) = exp(x̃1) exp(x̃2), ‖x‖ ≤ π.
pub fn bch_so3(x1: &Vec3, x2: &Vec3) -> Result<Vec3, MapError> {
    let (h1, h2) = (0.5 * x1.norm(), 0.5 * x2.norm());
    let (c1, c2) = (h1.cos(), h2.cos());
    let (s1, s2) = (sinc(h1), sinc(h2));
    let cross = x1.cross(x2);
    let scalar = c1 * c2 - 0.25 * s1 * s2 * x1.dot(x2);
    let vector = x1 * (0.5 * s1 * c2) + x2 * (0.5 * c1 * s2) + cross * (0.25 * s1 * s2);
    let (sign, sinc_half) = wrap_factor(scalar, vector.norm())?;
    let k = sign / sinc_half;
    let alpha = k * s1 * c2;
    let beta = k * c1 * s2;
    let gamma = k * 0.5 * s1 * s2;
    Ok(x1 * alpha + x2 * beta + cross * gamma)
}

/// Rotation vector x with exp(x̃) = exp(ρ̃) cay(c̃), ‖x‖ ≤ π.
pub fn compose_axisangle_rodrigues(rho: &Vec3, c: &Vec3) -> Result<Vec3, MapError> {
    let h1 = 0.5 * rho.norm();
    let (c1, s1) = (h1.cos(), sinc(h1));
    let w = (0.5 * cayley_sigma(c)).sqrt();
    let cross = rho.cross(c);
    let scalar = w * (c1 - 0.5 * s1 * rho.dot(c));
    let vector = (rho * (0.5 * s1) + c * c1 + cross * (0.5 * s1)) * w;
    let (sign, sinc_half) = wrap_factor(scalar, vector.norm())?;
    let k = sign * w / sinc_half;
    let alpha = k * s1;
    let beta = k * 2.0 * c1;
    let gamma = k * s1;
    Ok(rho * alpha + c * beta + cross * gamma)
}
