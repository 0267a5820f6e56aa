#![allow(dead_code)]

use entwalk::{CoinSpinor, InitialCoinState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_alpha(rng: &mut impl Rng) -> InitialCoinState {
    let mut parts = [0.0; 8];
    for p in parts.iter_mut() {
        *p = rng.random_range(-1.0..1.0);
    }
    let norm = parts.iter().map(|p| p * p).sum::<f64>().sqrt();
    for p in parts.iter_mut() {
        *p /= norm;
    }
    InitialCoinState::new(CoinSpinor::from_re_im(parts)).expect("unit draw")
}

pub fn random_beta(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05)
}
