//! Long-time limits of the walk.
//!
//! As `t → ∞` only the degenerate eigenspace of `U_ec(k)` contributes at a
//! fixed site. Writing `W(k) = P_deg(k) α` for the initial coin state `α`, the
//! limiting amplitude at `x` is the Fourier coefficient
//!
//! ```text
//! c_x = (1/2π) ∫₀^{2π} e^{-ixk} W(k) dk,      p(x) = ‖c_x‖²,
//! ```
//!
//! up to the unit phase `e^{iθt}` that drops out of `p(x)`. Since `W` is smooth
//! and 2π-periodic, the uniform trapezoid rule converges exponentially fast.

use std::f64::consts::TAU;

use nalgebra::Vector4;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::asymptotics::{fit_decay_exponent, ExponentFit};
use crate::coin::{CoinSpinor, InitialCoinState};
use crate::error::{Error, Result};
use crate::spectral::degenerate_projector;

/// Grid sizes never grow beyond this.
pub const MAX_POINTS: usize = 1 << 16;

/// Successive refinements closer than this count as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    /// Uniform grid size on `[0, 2π)`; a power of two, at least 256.
    pub n_points: usize,
    /// Growth factor between refinement passes, at least 2.
    pub refine_factor: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            n_points: 4096,
            refine_factor: 2,
        }
    }
}

impl QuadratureConfig {
    pub fn new(n_points: usize) -> Result<Self> {
        let cfg = QuadratureConfig {
            n_points,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n_points.is_power_of_two() || self.n_points < 256 {
            return Err(Error::InvalidQuadrature(format!(
                "n_points must be a power of two >= 256, got {}",
                self.n_points
            )));
        }
        if self.n_points > MAX_POINTS {
            return Err(Error::InvalidQuadrature(format!(
                "n_points must not exceed {MAX_POINTS}, got {}",
                self.n_points
            )));
        }
        if self.refine_factor < 2 {
            return Err(Error::InvalidQuadrature(format!(
                "refine_factor must be at least 2, got {}",
                self.refine_factor
            )));
        }
        Ok(())
    }

    /// Largest `|x|` whose coefficient the grid resolves without aliasing.
    pub fn alias_limit(&self) -> i64 {
        (self.n_points / 4) as i64
    }

    /// Grid sizes visited by the refinement loop.
    fn schedule(&self) -> impl Iterator<Item = usize> {
        let factor = self.refine_factor;
        std::iter::successors(Some(self.n_points), move |&n| {
            n.checked_mul(factor).filter(|&m| m <= MAX_POINTS)
        })
    }
}

/// `(1/n) Σ_j f(2πj/n)`, the trapezoid rule for `(1/2π) ∫₀^{2π} f(k) dk`.
pub fn periodic_mean<T, F>(f: F, n: usize) -> T
where
    T: std::iter::Sum<T> + std::ops::Div<f64, Output = T>,
    F: Fn(f64) -> T,
{
    (0..n).map(|j| f(TAU * j as f64 / n as f64)).sum::<T>() / n as f64
}

/// `W(k_j) = P_deg(k_j) α` on the uniform grid of size `n`.
pub fn degenerate_samples(
    alpha: &InitialCoinState,
    beta: f64,
    n: usize,
) -> Vec<Vector4<Complex64>> {
    let a = alpha.as_vector();
    (0..n)
        .map(|j| {
            let k = TAU * j as f64 / n as f64;
            degenerate_projector(k, beta).0 * a
        })
        .collect()
}

/// Trapezoid value of `c_x` by direct summation over the samples.
fn coefficient_direct(samples: &[Vector4<Complex64>], x: i64) -> Vector4<Complex64> {
    let n = samples.len() as i64;
    let mut acc = Vector4::zeros();
    for (j, w) in samples.iter().enumerate() {
        // twiddle angle from x·j reduced mod n
        let m = (x * j as i64).rem_euclid(n);
        let twiddle = Complex64::from_polar(1.0, -TAU * m as f64 / n as f64);
        acc += w * twiddle;
    }
    acc / Complex64::new(n as f64, 0.0)
}

fn spinor_distance(a: &Vector4<Complex64>, b: &Vector4<Complex64>) -> f64 {
    (a - b).norm()
}

/// Limiting amplitude `c_x`, refined until two successive grids agree to
/// within `1e-10`.
pub fn limiting_amplitude(
    x: i64,
    alpha: &InitialCoinState,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<CoinSpinor> {
    cfg.validate()?;
    let limit = cfg.alias_limit();
    if x.abs() > limit {
        return Err(Error::Aliasing { x, limit });
    }
    let mut previous: Option<Vector4<Complex64>> = None;
    for n in cfg.schedule() {
        let c = coefficient_direct(&degenerate_samples(alpha, beta, n), x);
        if let Some(prev) = previous {
            if spinor_distance(&prev, &c) < CONVERGENCE_TOLERANCE {
                return Ok(CoinSpinor::from_vector(&c));
            }
        }
        previous = Some(c);
    }
    Ok(CoinSpinor::from_vector(
        &previous.expect("schedule is never empty"),
    ))
}

/// `p(x) = ‖c_x‖²`.
pub fn limiting_probability(
    x: i64,
    alpha: &InitialCoinState,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Ok(limiting_amplitude(x, alpha, beta, cfg)?.norm_sqr())
}

/// All trapezoid coefficients `c_x` of one grid, computed with an FFT.
#[derive(Debug, Clone)]
pub struct FourierCoefficients {
    coeffs: Vec<Vector4<Complex64>>,
}

impl FourierCoefficients {
    pub fn compute(alpha: &InitialCoinState, beta: f64, n: usize) -> Self {
        Self::from_samples(&degenerate_samples(alpha, beta, n))
    }

    pub fn from_samples(samples: &[Vector4<Complex64>]) -> Self {
        let n = samples.len();
        let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
        let mut coeffs = vec![Vector4::zeros(); n];
        let mut buffer = vec![Complex64::new(0.0, 0.0); n];
        for comp in 0..4 {
            for (b, w) in buffer.iter_mut().zip(samples) {
                *b = w[comp];
            }
            fft.process(&mut buffer);
            for (c, b) in coeffs.iter_mut().zip(&buffer) {
                c[comp] = b / n as f64;
            }
        }
        FourierCoefficients { coeffs }
    }

    pub fn n_points(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_x`, aliased modulo the grid size.
    pub fn get(&self, x: i64) -> Vector4<Complex64> {
        self.coeffs[x.rem_euclid(self.coeffs.len() as i64) as usize]
    }

    pub fn probability(&self, x: i64) -> f64 {
        self.get(x).norm_squared()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationSum {
    /// `(1/2π) ∫ ⟨α, P_deg(k) α⟩ dk`.
    pub value: f64,
    /// `Σ_{|x| ≤ window} ‖c_x‖²`.
    pub partial_sum: f64,
    pub window: i64,
}

/// Total mass retained by the limiting probabilities, `Σ_x p(x)`.
pub fn localization_sum(
    alpha: &InitialCoinState,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<LocalizationSum> {
    cfg.validate()?;
    let a = alpha.as_vector();
    let integrand = |k: f64| (a.adjoint() * degenerate_projector(k, beta).0 * a)[(0, 0)].re;

    let mut value: Option<f64> = None;
    for n in cfg.schedule() {
        let v = periodic_mean(integrand, n);
        if let Some(prev) = value {
            if (v - prev).abs() < CONVERGENCE_TOLERANCE {
                value = Some(v);
                break;
            }
        }
        value = Some(v);
    }

    let window = (cfg.n_points / 8) as i64;
    let coeffs = FourierCoefficients::compute(alpha, beta, cfg.n_points);
    let partial_sum = (-window..=window).map(|x| coeffs.probability(x)).sum();
    Ok(LocalizationSum {
        value: value.expect("schedule is never empty"),
        partial_sum,
        window,
    })
}

/// Large-`|x|` behaviour of `p(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    /// `‖P_deg(0) α - P_deg(2π) α‖²`, the coefficient of `1/x²` predicted by
    /// integrating by parts once.
    pub coefficient: f64,
    /// Log-log fit of `‖c_x‖²` against `x` for `x ∈ [16, 128]`; `None` if
    /// fewer than four samples are positive.
    pub empirical_fit: Option<ExponentFit>,
    /// Slope of `ln ‖c_x‖²` against `x` over the sites where `‖c_x‖²`
    /// exceeds `1e-24`; `None` with fewer than three such sites.
    pub exponential_rate: Option<f64>,
}

pub const TAIL_FIT_RANGE: (i64, i64) = (16, 128);
const EXPONENTIAL_FLOOR: f64 = 1e-24;

pub fn tail_coefficient(
    alpha: &InitialCoinState,
    beta: f64,
    cfg: &QuadratureConfig,
) -> Result<TailReport> {
    cfg.validate()?;
    let a = alpha.as_vector();
    let diff = degenerate_projector(0.0, beta).0 * a - degenerate_projector(TAU, beta).0 * a;
    let coefficient = diff.norm_squared();

    let coeffs = FourierCoefficients::compute(alpha, beta, cfg.n_points);
    let (lo, hi) = TAIL_FIT_RANGE;
    let hi = hi.min(cfg.alias_limit());
    let samples: Vec<(f64, f64)> = (lo..=hi)
        .map(|x| (x as f64, coeffs.probability(x)))
        .filter(|&(_, p)| p > 0.0)
        .collect();
    let empirical_fit = if samples.len() >= 4 {
        fit_decay_exponent(&samples).ok()
    } else {
        None
    };

    let above_floor: Vec<(f64, f64)> = (1..=cfg.alias_limit())
        .map(|x| (x as f64, coeffs.probability(x)))
        .take_while(|&(_, p)| p > EXPONENTIAL_FLOOR)
        .map(|(x, p)| (x, p.ln()))
        .collect();
    let exponential_rate = (above_floor.len() >= 3).then(|| least_squares_slope(&above_floor));

    Ok(TailReport {
        coefficient,
        empirical_fit,
        exponential_rate,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Limiting probabilities on `|x| ≤ x_max` with the accompanying totals.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitProfile {
    pub probabilities: Vec<(i64, f64)>,
    pub localization_sum: f64,
    pub tail_coefficient: f64,
}

pub fn limit_profile(
    alpha: &InitialCoinState,
    beta: f64,
    cfg: &QuadratureConfig,
    x_max: i64,
) -> Result<LimitProfile> {
    cfg.validate()?;
    let limit = cfg.alias_limit();
    if x_max > limit {
        return Err(Error::Aliasing { x: x_max, limit });
    }
    let coeffs = FourierCoefficients::compute(alpha, beta, cfg.n_points);
    Ok(LimitProfile {
        probabilities: (-x_max..=x_max)
            .map(|x| (x, coeffs.probability(x)))
            .collect(),
        localization_sum: localization_sum(alpha, beta, cfg)?.value,
        tail_coefficient: tail_coefficient(alpha, beta, cfg)?.coefficient,
    })
}

/// Step of the one-sided difference stencils at the interval endpoints.
pub const ENDPOINT_FD_STEP: f64 = 1e-4;

pub const MAX_ENDPOINT_ORDER: usize = 3;

/// `B_N(x) - A_N(x)` from given derivative values `g^{(n)}(0)` and
/// `g^{(n)}(2π)`, `n = 0..N-1`, where
/// `A_N(x) = Σ_{n<N} i^{n-1} g^{(n)}(0) (-x)^{-n-1}` and `B_N` likewise at `2π`.
/// This is the large-`|x|` expansion of `∫₀^{2π} e^{-ixk} g(k) dk` for integer `x`.
pub fn endpoint_asymptotics_from_derivatives(
    at_start: &[Complex64],
    at_end: &[Complex64],
    x: i64,
) -> Result<Complex64> {
    if at_start.len() != at_end.len() || at_start.is_empty() {
        return Err(Error::Precondition(
            "endpoint derivative lists must be non-empty and of equal length".into(),
        ));
    }
    if x == 0 {
        return Err(Error::Precondition(
            "endpoint expansion needs x != 0".into(),
        ));
    }
    let i = Complex64::i();
    let mx = -(x as f64);
    let mut total = Complex64::new(0.0, 0.0);
    for (n, (ga, gb)) in at_start.iter().zip(at_end).enumerate() {
        let factor = i.powi(n as i32 - 1) * mx.powi(-(n as i32) - 1);
        total += factor * (gb - ga);
    }
    Ok(total)
}

/// [`endpoint_asymptotics_from_derivatives`] with derivatives of `g` taken
/// by one-sided finite differences (step `1e-4`) at each endpoint.
pub fn endpoint_asymptotics<F>(g: F, order: usize, x: i64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if order == 0 || order > MAX_ENDPOINT_ORDER {
        return Err(Error::InvalidOrder {
            order,
            max: MAX_ENDPOINT_ORDER,
        });
    }
    let h = ENDPOINT_FD_STEP;
    // one-sided stencils of second-order accuracy; `dir` points into the interval
    let derivs = |origin: f64, dir: f64| -> Vec<Complex64> {
        let s = |m: f64| g(origin + dir * m * h);
        let mut out = vec![s(0.0)];
        if order >= 2 {
            out.push((s(0.0) * -3.0 + s(1.0) * 4.0 - s(2.0)) / (2.0 * h) * dir);
        }
        if order >= 3 {
            out.push((s(0.0) * 2.0 - s(1.0) * 5.0 + s(2.0) * 4.0 - s(3.0)) / (h * h));
        }
        out
    };
    endpoint_asymptotics_from_derivatives(&derivs(0.0, 1.0), &derivs(TAU, -1.0), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::HADAMARD_BETA;
    use std::f64::consts::SQRT_2;

    fn bell() -> InitialCoinState {
        InitialCoinState::bell_phi_plus()
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(4096).is_ok());
        assert!(QuadratureConfig::new(128).is_err());
        assert!(QuadratureConfig::new(1000).is_err());
        assert!(QuadratureConfig::new(1 << 17).is_err());
        let bad = QuadratureConfig {
            n_points: 512,
            refine_factor: 1,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn origin_amplitude_for_bell_hadamard() {
        let cfg = QuadratureConfig::default();
        let c = limiting_amplitude(0, &bell(), HADAMARD_BETA, &cfg).unwrap();
        let half = (2.0 - SQRT_2) / 2.0;
        assert!((c[0].norm() - half).abs() < 1e-12);
        assert!((c[3].norm() - half).abs() < 1e-12);
        assert!(c[1].norm() < 1e-14 && c[2].norm() < 1e-14);
        assert!((c.norm_sqr() - (3.0 - 2.0 * SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn bell_is_not_localized_without_mixing() {
        let cfg = QuadratureConfig::default();
        for x in [0, 1, 7] {
            assert!(limiting_probability(x, &bell(), 0.0, &cfg).unwrap() < 1e-20);
        }
        assert!(localization_sum(&bell(), 0.0, &cfg).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn aliasing_guard() {
        let cfg = QuadratureConfig::new(256).unwrap();
        assert!(limiting_amplitude(64, &bell(), HADAMARD_BETA, &cfg).is_ok());
        assert_eq!(
            limiting_amplitude(65, &bell(), HADAMARD_BETA, &cfg),
            Err(Error::Aliasing { x: 65, limit: 64 })
        );
    }

    #[test]
    fn fft_matches_direct_sum() {
        let samples = degenerate_samples(&bell(), 0.9, 512);
        let fft = FourierCoefficients::from_samples(&samples);
        for x in [-40, -3, 0, 5, 17] {
            assert!(spinor_distance(&fft.get(x), &coefficient_direct(&samples, x)) < 1e-14);
        }
    }

    #[test]
    fn mirror_sites_have_equal_mass() {
        let cfg = QuadratureConfig::default();
        for x in 1..6 {
            let p = limiting_probability(x, &bell(), HADAMARD_BETA, &cfg).unwrap();
            let q = limiting_probability(-x, &bell(), HADAMARD_BETA, &cfg).unwrap();
            assert!((p - q).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn tail_endpoint_term_vanishes() {
        let cfg = QuadratureConfig::default();
        let report = tail_coefficient(&bell(), HADAMARD_BETA, &cfg).unwrap();
        assert!(report.coefficient < 1e-24);
        assert!(report.exponential_rate.unwrap() < -3.0);
        assert_eq!(
            tail_coefficient(&bell(), 0.0, &cfg).unwrap().coefficient,
            0.0
        );
    }

    #[test]
    fn endpoint_expansion_of_linear_function() {
        let g = |k: f64| Complex64::new(k, 0.0);
        let v = endpoint_asymptotics(g, 1, 3).unwrap();
        assert!((v - Complex64::new(0.0, TAU / 3.0)).norm() < 1e-12);
        let one = endpoint_asymptotics(|_| Complex64::new(1.0, 0.0), 1, 5).unwrap();
        assert_eq!(one, Complex64::new(0.0, 0.0));
        assert!(endpoint_asymptotics(g, 4, 3).is_err());
        assert!(endpoint_asymptotics(g, 1, 0).is_err());
    }
}
