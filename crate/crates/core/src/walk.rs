//! Exact state-vector evolution on the integer line.
//!
//! The state is stored densely over the window of sites that can carry
//! amplitude. A walk launched from the origin occupies `[-t, t]` after `t`
//! steps; every step grows the window by one site on each side. No amplitude
//! is ever pruned.

use num_complex::Complex64;

use crate::coin::{CoinOperator, CoinSpinor, InitialCoinState};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coin-register index that moves right under the shift.
pub const RIGHT: usize = 0;
/// Coin-register index that moves left under the shift.
pub const LEFT: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    time: usize,
    /// Position of `amplitudes[0]`.
    min_x: i64,
    amplitudes: Vec<[Complex64; 4]>,
}

impl WalkState {
    /// All amplitude on the origin, `t = 0`.
    pub fn initial(alpha: &InitialCoinState) -> Self {
        WalkState {
            time: 0,
            min_x: 0,
            amplitudes: vec![alpha.spinor().0],
        }
    }

    /// Builds a state from a dense window starting at `min_x`.
    pub fn from_window(time: usize, min_x: i64, amplitudes: Vec<CoinSpinor>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Precondition("empty amplitude window".into()));
        }
        if !amplitudes.iter().all(CoinSpinor::is_finite) {
            return Err(Error::NonFinite("walk state"));
        }
        Ok(WalkState {
            time,
            min_x,
            amplitudes: amplitudes.into_iter().map(|s| s.0).collect(),
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    /// Inclusive range of positions held by the window.
    pub fn window(&self) -> (i64, i64) {
        (self.min_x, self.min_x + self.amplitudes.len() as i64 - 1)
    }

    pub fn amplitude(&self, x: i64) -> CoinSpinor {
        let idx = x - self.min_x;
        if idx < 0 || idx as usize >= self.amplitudes.len() {
            CoinSpinor::ZERO
        } else {
            CoinSpinor(self.amplitudes[idx as usize])
        }
    }

    pub fn total_probability(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.iter().map(Complex64::norm_sqr).sum::<f64>())
            .sum()
    }

    /// One application of `U = S (I ⊗ A_ec)`.
    pub fn step(&self, coin: &CoinOperator) -> WalkState {
        let n = self.amplitudes.len();
        let mut next = vec![[ZERO; 4]; n + 2];
        // site i of the old window sits at index i + 1 of the new one
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let c = coin.apply(amp);
            next[i + 2][RIGHT] += c[0];
            next[i + 1][1] += c[1];
            next[i + 1][2] += c[2];
            next[i][LEFT] += c[3];
        }
        WalkState {
            time: self.time + 1,
            min_x: self.min_x - 1,
            amplitudes: next,
        }
    }

    /// `t` applications of [`WalkState::step`]. `t = 0` returns the input.
    pub fn evolve(self, coin: &CoinOperator, t: usize) -> WalkState {
        let mut state = self;
        for _ in 0..t {
            state = state.step(coin);
        }
        state
    }

    /// Evolves for `t` steps, calling `observe` after every step.
    pub fn evolve_observing<F>(self, coin: &CoinOperator, t: usize, mut observe: F) -> WalkState
    where
        F: FnMut(&WalkState),
    {
        let mut state = self;
        for _ in 0..t {
            state = state.step(coin);
            observe(&state);
        }
        state
    }

    /// `p_t(x) = Σ_j |ψ_t(x, j)|²` over the stored window.
    pub fn position_distribution(&self) -> PositionDistribution {
        PositionDistribution {
            min_x: self.min_x,
            probs: self
                .amplitudes
                .iter()
                .map(|a| a.iter().map(Complex64::norm_sqr).sum())
                .collect(),
        }
    }

    /// `E[(X/t)^n] = Σ_x (x/t)^n p_t(x)` for each requested order.
    pub fn rescaled_moments(&self, orders: &[u32]) -> Result<Vec<f64>> {
        if self.time == 0 {
            return Err(Error::Precondition("rescaled moments need time > 0".into()));
        }
        Ok(self
            .position_distribution()
            .rescaled_moments(self.time, orders))
    }
}

/// Launches the walk at the origin and evolves it for `t` steps.
pub fn simulate(alpha: &InitialCoinState, coin: &CoinOperator, t: usize) -> WalkState {
    WalkState::initial(alpha).evolve(coin, t)
}

/// Probabilities over a contiguous window of positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    min_x: i64,
    probs: Vec<f64>,
}

impl PositionDistribution {
    pub fn from_window(min_x: i64, probs: Vec<f64>) -> Self {
        PositionDistribution { min_x, probs }
    }

    /// `p(x)`, zero outside the stored window.
    pub fn get(&self, x: i64) -> f64 {
        let idx = x - self.min_x;
        if idx < 0 || idx as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[idx as usize]
        }
    }

    pub fn min_x(&self) -> i64 {
        self.min_x
    }

    pub fn max_x(&self) -> i64 {
        self.min_x + self.probs.len() as i64 - 1
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.min_x + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn rescaled_moments(&self, time: usize, orders: &[u32]) -> Vec<f64> {
        let scale = 1.0 / time as f64;
        orders
            .iter()
            .map(|&n| {
                self.iter()
                    .map(|(x, p)| (x as f64 * scale).powi(n as i32) * p)
                    .sum()
            })
            .collect()
    }

    /// Three-site moving average `(p(x-1) + p(x) + p(x+1)) / 3` on the same
    /// window. Suppresses the site-to-site parity oscillation of `p_t`.
    pub fn smoothed(&self) -> PositionDistribution {
        let probs = (self.min_x..=self.max_x())
            .map(|x| (self.get(x - 1) + self.get(x) + self.get(x + 1)) / 3.0)
            .collect();
        PositionDistribution {
            min_x: self.min_x,
            probs,
        }
    }

    /// Largest `|p(x) - p(-x)|` over the window.
    pub fn reflection_asymmetry(&self) -> f64 {
        self.iter()
            .map(|(x, p)| (p - self.get(-x)).abs())
            .fold(0.0, f64::max)
    }
}
