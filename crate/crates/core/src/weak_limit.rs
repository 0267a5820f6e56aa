//! Weak limit of the rescaled position `X_t / t` for the Hadamard coin.
//!
//! The limit law has a point mass `c₀₀` at the origin plus a density on
//! `(-1/√2, 1/√2)`:
//!
//! ```text
//! f(y) = c₀₀ δ₀(y) + (c₀ + c₁ y + c₂ y²) / (π (1 - y²) √(1 - 2y²))
//! ```
//!
//! The coefficients are quadratic forms in the initial coin state and only
//! hold for `A(π/4) ⊗ A(π/4)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};

use num_complex::Complex64;

use crate::coin::InitialCoinState;
use crate::error::{Error, Result};
use crate::walk::simulate;
use crate::{CoinOperator, HADAMARD_BETA};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCoefficients {
    /// Weight of the point mass at `y = 0`.
    pub c00: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Evaluates the closed-form coefficients for initial state `alpha`.
///
/// The bracketed cross terms of `c₀₀` and `c₂` are taken inside a single
/// real part.
pub fn density_coefficients(alpha: &InitialCoinState) -> DensityCoefficients {
    let [a1, a2, a3, a4] = alpha.spinor().0;
    // Re(a · conj(b))
    let re = |a: Complex64, b: Complex64| (a * b.conj()).re;
    let n = |a: Complex64| a.norm_sqr();

    let c00 = SQRT_2 / 4.0
        + 0.5 * (2.0 - SQRT_2) * (n(a2) + n(a3))
        + 0.5
            * ((2.0 - SQRT_2) * (re(a2, a4) + re(a3, a4) - re(a1, a2) - re(a1, a3))
                + (3.0 * SQRT_2 - 4.0) * re(a1, a4)
                - SQRT_2 * re(a2, a3));
    let c0 = 0.5 + re(a2, a3) - re(a1, a4);
    let c1 = n(a1) - n(a4) + re(a1, a2) + re(a1, a3) + re(a2, a4) + re(a3, a4);
    let c2 = 0.5 * (n(a1) + n(a4) - n(a2) - n(a3))
        + (3.0 * re(a1, a4) + re(a1, a2) + re(a1, a3) - re(a2, a3) - re(a2, a4) - re(a3, a4));

    DensityCoefficients { c00, c0, c1, c2 }
}

/// [`density_coefficients`], rejecting coins other than the Hadamard one.
pub fn density_coefficients_for(
    alpha: &InitialCoinState,
    beta: f64,
) -> Result<DensityCoefficients> {
    ensure_hadamard(beta)?;
    Ok(density_coefficients(alpha))
}

fn ensure_hadamard(beta: f64) -> Result<()> {
    if (beta - HADAMARD_BETA).abs() > 1e-12 {
        return Err(Error::UnsupportedCoin { beta });
    }
    Ok(())
}

/// Half-width of the continuous part's support, `1/√2`.
pub const SUPPORT_EDGE: f64 = FRAC_1_SQRT_2;

impl DensityCoefficients {
    fn numerator(&self, y: f64) -> f64 {
        self.c0 + self.c1 * y + self.c2 * y * y
    }

    /// Continuous part of the density at `y`. Zero outside
    /// `(-1/√2, 1/√2)`; an error exactly at the integrable singularities
    /// `y = ±1/√2`.
    pub fn eval(&self, y: f64) -> Result<f64> {
        if y.abs() == SUPPORT_EDGE {
            return Err(Error::Singularity { y });
        }
        if y.abs() > SUPPORT_EDGE {
            return Ok(0.0);
        }
        Ok(self.numerator(y) / (PI * (1.0 - y * y) * (1.0 - 2.0 * y * y).sqrt()))
    }

    /// `∫ yⁿ f(y) dy` including the point mass (which only enters `n = 0`).
    ///
    /// With `y = sin(u)/√2` the square-root singularity cancels against
    /// `dy`, and the integral over `u ∈ [-π/2, π/2]` equals half the integral
    /// over a full period, where the trapezoid rule is exponentially accurate.
    pub fn moment(&self, n: u32) -> Result<f64> {
        if n > MAX_MOMENT_ORDER {
            return Err(Error::InvalidOrder {
                order: n as usize,
                max: MAX_MOMENT_ORDER as usize,
            });
        }
        let integrand = |u: f64| {
            let y = u.sin() * FRAC_1_SQRT_2;
            y.powi(n as i32) * self.numerator(y) / (PI * (1.0 - y * y)) * FRAC_1_SQRT_2
        };
        let mut points = 64usize;
        let mut previous = trapezoid_full_period(&integrand, points);
        let continuous = loop {
            points *= 2;
            let next = trapezoid_full_period(&integrand, points);
            if (next - previous).abs() < 1e-14 || points >= 1 << 16 {
                break next;
            }
            previous = next;
        };
        Ok(continuous + if n == 0 { self.c00 } else { 0.0 })
    }

    /// Mass of the absolutely continuous part.
    pub fn continuous_mass(&self) -> f64 {
        self.moment(0).expect("order 0 is valid") - self.c00
    }
}

/// `½ ∫₀^{2π} g(u) du` by the trapezoid rule.
fn trapezoid_full_period(g: &impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = TAU / n as f64;
    0.5 * h * (0..n).map(|j| g(h * j as f64)).sum::<f64>()
}

pub const MAX_MOMENT_ORDER: u32 = 8;

pub fn density_eval(y: f64, coeffs: &DensityCoefficients) -> Result<f64> {
    coeffs.eval(y)
}

pub fn density_moment(coeffs: &DensityCoefficients, n: u32) -> Result<f64> {
    coeffs.moment(n)
}

/// Limit-law moments next to the empirical moments of `X_t / t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub coefficients: DensityCoefficients,
    pub orders: Vec<u32>,
    pub moments: Vec<f64>,
    pub empirical_moments: Vec<f64>,
    pub max_moment_gap: f64,
}

pub const MIN_EMPIRICAL_TIME: usize = 500;
pub const MAX_EMPIRICAL_ORDER: u32 = 4;

/// Simulates `t` steps and compares `E[(X_t/t)^n]` with the limit law.
pub fn empirical_vs_limit(
    alpha: &InitialCoinState,
    beta: f64,
    t: usize,
    orders: &[u32],
) -> Result<DensityReport> {
    ensure_hadamard(beta)?;
    if t < MIN_EMPIRICAL_TIME {
        return Err(Error::Precondition(format!(
            "empirical comparison needs t >= {MIN_EMPIRICAL_TIME}, got {t}"
        )));
    }
    if let Some(&n) = orders.iter().find(|&&n| n > MAX_EMPIRICAL_ORDER) {
        return Err(Error::InvalidOrder {
            order: n as usize,
            max: MAX_EMPIRICAL_ORDER as usize,
        });
    }
    let coefficients = density_coefficients(alpha);
    let moments = orders
        .iter()
        .map(|&n| coefficients.moment(n))
        .collect::<Result<Vec<_>>>()?;
    let state = simulate(alpha, &CoinOperator::new(beta), t);
    let empirical_moments = state.rescaled_moments(orders)?;
    let max_moment_gap = moments
        .iter()
        .zip(&empirical_moments)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(DensityReport {
        coefficients,
        orders: orders.to_vec(),
        moments,
        empirical_moments,
        max_moment_gap,
    })
}
