//! Trigonometric coefficient functions shared by the SO(3) and SE(3) maps.
//!
//! Every denominator in these coefficients is a removable singularity at
//! φ = 0. Plain coefficients (α, β, γ) switch to a short Taylor series below
//! [`SMALL_ANGLE`]. The divided coefficients ((1−α)/φ², (1−γ)/φ²,
//! (1/β+γ−2)/φ⁴) suffer catastrophic cancellation long before that, so they
//! use an eighth-order-in-φ² series below [`SERIES_CROSSOVER`].

/// Below this angle α, β, γ and sinc use their Taylor series.
pub const SMALL_ANGLE: f64 = 1e-4;

/// Below this angle the divided coefficients use their Taylor series.
pub const SERIES_CROSSOVER: f64 = 0.5;

/// sin(φ)/φ with the removable singularity at 0.
pub fn sinc(phi: f64) -> f64 {
    if phi.abs() < SMALL_ANGLE {
        let p2 = phi * phi;
        1.0 - p2 / 6.0 + p2 * p2 / 120.0
    } else {
        phi.sin() / phi
    }
}

/// The coefficients α = sinc φ, β = sinc²(φ/2), γ = α/β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl TrigCoefficients {
    pub fn new(phi: f64) -> Self {
        if phi.abs() < SMALL_ANGLE {
            let p2 = phi * phi;
            let p4 = p2 * p2;
            TrigCoefficients {
                alpha: 1.0 - p2 / 6.0 + p4 / 120.0,
                beta: 1.0 - p2 / 12.0 + p4 / 360.0,
                gamma: 1.0 - p2 / 12.0 - p4 / 720.0,
            }
        } else {
            let alpha = phi.sin() / phi;
            let half = sinc(0.5 * phi);
            let beta = half * half;
            TrigCoefficients {
                alpha,
                beta,
                gamma: alpha / beta,
            }
        }
    }
}

fn poly(p2: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * p2 + c)
}

/// (1 − sinc φ)/φ², the ñ² coefficient of dexp divided by φ².
pub fn one_minus_alpha_over_phi2(phi: f64) -> f64 {
    if phi.abs() < SERIES_CROSSOVER {
        poly(
            phi * phi,
            &[
                1.0 / 6.0,
                -1.0 / 120.0,
                1.0 / 5040.0,
                -1.0 / 362880.0,
                1.0 / 39916800.0,
                -1.0 / 6227020800.0,
                1.0 / 1307674368000.0,
                -1.0 / 355687428096000.0,
            ],
        )
    } else {
        (1.0 - phi.sin() / phi) / (phi * phi)
    }
}

/// (1 − γ)/φ², the x̃² coefficient of dexp⁻¹.
pub fn one_minus_gamma_over_phi2(phi: f64) -> f64 {
    if phi.abs() < SERIES_CROSSOVER {
        poly(
            phi * phi,
            &[
                1.0 / 12.0,
                1.0 / 720.0,
                1.0 / 30240.0,
                1.0 / 1209600.0,
                1.0 / 47900160.0,
                691.0 / 1307674368000.0,
                1.0 / 74724249600.0,
                3617.0 / 10670622842880000.0,
            ],
        )
    } else {
        (1.0 - TrigCoefficients::new(phi).gamma) / (phi * phi)
    }
}

/// (1/β + γ − 2)/φ⁴, the (xᵀy) x̃² coefficient in the SE(3) dexp⁻¹ block.
pub fn b_coefficient_over_phi4(phi: f64) -> f64 {
    if phi.abs() < SERIES_CROSSOVER {
        poly(
            phi * phi,
            &[
                1.0 / 360.0,
                1.0 / 7560.0,
                1.0 / 201600.0,
                1.0 / 5987520.0,
                691.0 / 130767436800.0,
                1.0 / 6227020800.0,
                3617.0 / 762187345920000.0,
                43867.0 / 319318388573184000.0,
            ],
        )
    } else {
        let c = TrigCoefficients::new(phi);
        let p2 = phi * phi;
        (1.0 / c.beta + c.gamma - 2.0) / (p2 * p2)
    }
}
