//! Finite-time behaviour of `p_t(x)` for large `t`.
//!
//! The position axis splits into regimes by how fast `p_t(x)` decays:
//!
//! | regime                | band                                   | order      |
//! |-----------------------|----------------------------------------|------------|
//! | origin                | `x = 0`                                | `p(0)`     |
//! | minor spike           | `||x| - tM| ≤ δ`                       | `t^{-2/3}` |
//! | exterior              | `t(M+ε) ≤ |x| ≤ t`                     | `t^{-2}`   |
//! | interior ballistic    | `t^{1/2} ≤ |x| ≤ t(M-ε)`               | `t^{-1}`   |
//! | diffusive edge        | `t^{1/4} ≤ |x| < t^{1/2}`              | `t^{-1}`   |
//! | near-origin plateau   | `0 < |x| < t^{1/4}`                    | `p(x)`     |
//!
//! where `M` is the extremal group velocity from
//! [`crate::spectral::group_velocity_extremum`]. Sites between `t(M-ε)` and
//! `t(M+ε)` that are not within `δ` of the front fall in no regime.

use statrs::function::gamma::gamma;

use crate::coin::{CoinOperator, InitialCoinState};
use crate::error::{Error, Result};
use crate::limit::{limiting_probability, QuadratureConfig};
use crate::walk::{PositionDistribution, WalkState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Origin,
    MinorSpike,
    Exterior,
    InteriorBallistic,
    DiffusiveEdge,
    NearOriginPlateau,
}

impl Regime {
    pub const ALL: [Regime; 6] = [
        Regime::Origin,
        Regime::MinorSpike,
        Regime::Exterior,
        Regime::InteriorBallistic,
        Regime::DiffusiveEdge,
        Regime::NearOriginPlateau,
    ];

    /// Exponent `(numerator, denominator)` of `t` governing `p_t(x)`. Zero
    /// means `p_t(x)` converges to the nonzero limit `p(x)`.
    pub fn predicted_order(self) -> (i32, i32) {
        match self {
            Regime::Origin | Regime::NearOriginPlateau => (0, 1),
            Regime::MinorSpike => (-2, 3),
            Regime::Exterior => (-2, 1),
            Regime::InteriorBallistic | Regime::DiffusiveEdge => (-1, 1),
        }
    }

    pub fn predicted_exponent(self) -> f64 {
        let (num, den) = self.predicted_order();
        num as f64 / den as f64
    }

    pub fn tag(self) -> &'static str {
        match self {
            Regime::Origin => "ORIGIN",
            Regime::MinorSpike => "MINOR_SPIKE",
            Regime::Exterior => "EXTERIOR",
            Regime::InteriorBallistic => "INTERIOR_BALLISTIC",
            Regime::DiffusiveEdge => "DIFFUSIVE_EDGE",
            Regime::NearOriginPlateau => "NEAR_ORIGIN_PLATEAU",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Regime(Regime),
    /// `x` lies in no regime for the given `ε` and `δ`.
    Gap,
}

/// Band parameters of the regime table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeBands {
    pub m: f64,
    pub eps: f64,
    pub delta: f64,
}

pub const DEFAULT_EPS: f64 = 0.05;
pub const DEFAULT_DELTA: f64 = 2.0;

impl RegimeBands {
    pub fn new(m: f64, eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < m) {
            return Err(Error::Precondition(format!(
                "need 0 < eps < M, got eps = {eps}, M = {m}"
            )));
        }
        if delta.is_nan() || delta < 1.0 {
            return Err(Error::Precondition(format!("need delta >= 1, got {delta}")));
        }
        Ok(RegimeBands { m, eps, delta })
    }

    /// Regime of site `x` at time `t`; precedence follows the table order.
    pub fn classify(&self, x: i64, t: usize) -> Result<Classification> {
        if t < 4 {
            return Err(Error::Precondition(format!(
                "classification needs t >= 4, got {t}"
            )));
        }
        if x.unsigned_abs() as usize > t {
            return Err(Error::OutsideLightCone { x, t });
        }
        let tf = t as f64;
        let ax = x.abs() as f64;
        let regime = if x == 0 {
            Regime::Origin
        } else if (ax - tf * self.m).abs() <= self.delta {
            Regime::MinorSpike
        } else if ax >= tf * (self.m + self.eps) {
            Regime::Exterior
        } else if ax >= tf.sqrt() && ax <= tf * (self.m - self.eps) {
            Regime::InteriorBallistic
        } else if ax < tf.sqrt() && ax >= tf.powf(0.25) {
            Regime::DiffusiveEdge
        } else if ax < tf.powf(0.25) {
            Regime::NearOriginPlateau
        } else {
            return Ok(Classification::Gap);
        };
        Ok(Classification::Regime(regime))
    }
}

/// Regime of `(x, t)` given the front speed `m` and band widths.
pub fn classify_region(x: i64, t: usize, m: f64, eps: f64, delta: f64) -> Result<Classification> {
    RegimeBands::new(m, eps, delta)?.classify(x, t)
}

/// Positions and smoothed heights of the two drifting spikes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikePair {
    pub x_left: i64,
    pub x_right: i64,
    pub height_left: f64,
    pub height_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpikeSearch {
    Found(SpikePair),
    /// No positive local maximum on at least one side.
    Absent,
}

impl SpikeSearch {
    pub fn found(self) -> Option<SpikePair> {
        match self {
            SpikeSearch::Found(p) => Some(p),
            SpikeSearch::Absent => None,
        }
    }
}

pub const MIN_SPIKE_TIME: usize = 50;

/// Highest local maxima of the 3-site smoothed distribution on `x > t/4` and
/// on `x < -t/4`.
pub fn locate_spikes(distribution: &PositionDistribution, t: usize) -> Result<SpikeSearch> {
    if t < MIN_SPIKE_TIME {
        return Err(Error::Precondition(format!(
            "spike search needs t >= {MIN_SPIKE_TIME}, got {t}"
        )));
    }
    let smooth = distribution.smoothed();
    let quarter = t as f64 / 4.0;
    let best = |range: Box<dyn Iterator<Item = i64>>| -> Option<(i64, f64)> {
        range
            .filter(|&x| {
                let p = smooth.get(x);
                p > 0.0 && p >= smooth.get(x - 1) && p >= smooth.get(x + 1)
            })
            .map(|x| (x, smooth.get(x)))
            .fold(None, |acc: Option<(i64, f64)>, cand| match acc {
                Some(a) if a.1 >= cand.1 => Some(a),
                _ => Some(cand),
            })
    };
    let lo = smooth.min_x();
    let hi = smooth.max_x();
    let right = best(Box::new((lo..=hi).filter(move |&x| x as f64 > quarter)));
    let left = best(Box::new(
        (lo..=hi).rev().filter(move |&x| (x as f64) < -quarter),
    ));
    Ok(match (left, right) {
        (Some((xl, hl)), Some((xr, hr))) => SpikeSearch::Found(SpikePair {
            x_left: xl,
            x_right: xr,
            height_left: hl,
            height_right: hr,
        }),
        _ => SpikeSearch::Absent,
    })
}

/// Maximum of the smoothed distribution over the minor-spike bands
/// `||x| - tM| ≤ δ`.
pub fn measured_spike_height(
    distribution: &PositionDistribution,
    t: usize,
    m: f64,
    delta: f64,
) -> f64 {
    let smooth = distribution.smoothed();
    let centre = t as f64 * m;
    let lo = (centre - delta).ceil() as i64;
    let hi = (centre + delta).floor() as i64;
    (lo..=hi)
        .flat_map(|x| [smooth.get(x), smooth.get(-x)])
        .fold(0.0, f64::max)
}

/// Least-squares line through `(ln t, ln value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: Vec<(f64, f64)>,
}

pub fn fit_decay_exponent(samples: &[(f64, f64)]) -> Result<ExponentFit> {
    if samples.len() < 4 {
        return Err(Error::InvalidSamples(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    if let Some(&(t, v)) = samples.iter().find(|&&(t, v)| !(t > 0.0 && v > 0.0)) {
        return Err(Error::InvalidSamples(format!(
            "samples must be positive, got ({t}, {v})"
        )));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidSamples("all sample times are equal".into()));
    }
    let exponent = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ExponentFit {
        exponent,
        intercept: my - exponent * mx,
        r_squared,
        samples: samples.to_vec(),
    })
}

/// `(6√2)^{2/3} Γ(1/3)² / (6π²)`, the spike-height constant of the Hadamard
/// walk launched from the Bell state.
pub fn spike_height_constant() -> f64 {
    let g = gamma(1.0 / 3.0);
    (6.0 * std::f64::consts::SQRT_2).powf(2.0 / 3.0) * g * g / (6.0 * std::f64::consts::PI.powi(2))
}

/// Predicted minor-spike height `C t^{-2/3}` for the Hadamard/Bell walk.
pub fn spike_height_prediction(t: usize) -> Result<f64> {
    if t == 0 {
        return Err(Error::Precondition("spike prediction needs t >= 1".into()));
    }
    Ok(spike_height_constant() * (t as f64).powf(-2.0 / 3.0))
}

/// `|p_t(0) - p(0)|` at the requested times.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginConvergence {
    pub limit: f64,
    /// `(t, p_t(0), |p_t(0) - p(0)|)` in increasing `t`.
    pub samples: Vec<(usize, f64, f64)>,
}

impl OriginConvergence {
    pub fn residuals(&self) -> Vec<(usize, f64)> {
        self.samples.iter().map(|&(t, _, r)| (t, r)).collect()
    }

    pub fn even(&self) -> Vec<(usize, f64)> {
        self.residuals()
            .into_iter()
            .filter(|(t, _)| t % 2 == 0)
            .collect()
    }

    pub fn odd(&self) -> Vec<(usize, f64)> {
        self.residuals()
            .into_iter()
            .filter(|(t, _)| t % 2 == 1)
            .collect()
    }
}

pub const MIN_ORIGIN_TIME: usize = 10;

/// Runs one walk up to `max(t_list)` and records the origin residual at each
/// requested time.
pub fn origin_convergence(
    alpha: &InitialCoinState,
    beta: f64,
    t_list: &[usize],
    cfg: &QuadratureConfig,
) -> Result<OriginConvergence> {
    if let Some(&t) = t_list.iter().find(|&&t| t < MIN_ORIGIN_TIME) {
        return Err(Error::Precondition(format!(
            "origin convergence needs t >= {MIN_ORIGIN_TIME}, got {t}"
        )));
    }
    let limit = limiting_probability(0, alpha, beta, cfg)?;
    let mut wanted: Vec<usize> = t_list.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let t_max = wanted.last().copied().unwrap_or(0);
    let coin = CoinOperator::new(beta);
    let mut samples = Vec::with_capacity(wanted.len());
    WalkState::initial(alpha).evolve_observing(&coin, t_max, |s| {
        if wanted.binary_search(&s.time()).is_ok() {
            let p0 = s.position_distribution().get(0);
            samples.push((s.time(), p0, (p0 - limit).abs()));
        }
    });
    Ok(OriginConvergence { limit, samples })
}

/// Snapshots of one walk at several times.
pub fn distributions_at(
    alpha: &InitialCoinState,
    beta: f64,
    t_list: &[usize],
) -> Vec<(usize, PositionDistribution)> {
    let mut wanted: Vec<usize> = t_list.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let t_max = wanted.last().copied().unwrap_or(0);
    let coin = CoinOperator::new(beta);
    let mut out = Vec::with_capacity(wanted.len());
    if wanted.first() == Some(&0) {
        out.push((0, WalkState::initial(alpha).position_distribution()));
    }
    WalkState::initial(alpha).evolve_observing(&coin, t_max, |s| {
        if wanted.binary_search(&s.time()).is_ok() {
            out.push((s.time(), s.position_distribution()));
        }
    });
    out
}
