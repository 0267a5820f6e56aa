//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes and returns plain numbers or `Float64Array`s so the
//! page can draw straight onto a canvas.

use std::f64::consts::TAU;

use entwalk::spectral::phase_function;
use entwalk::walk::simulate;
use entwalk::weak_limit::{density_coefficients, SUPPORT_EDGE};
use entwalk::{CoinOperator, CoinSpinor, InitialCoinState};
use wasm_bindgen::prelude::*;

/// Largest number of steps the page may request.
pub const MAX_STEPS: usize = 5000;
/// Largest grid the page may request.
pub const MAX_SAMPLES: usize = 1 << 16;

fn parse_alpha(alpha: &[f64]) -> Result<InitialCoinState, String> {
    let parts: [f64; 8] = alpha
        .try_into()
        .map_err(|_| format!("alpha needs 8 numbers, got {}", alpha.len()))?;
    let spinor = CoinSpinor::from_re_im(parts);
    let norm = spinor.norm_sqr().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err("alpha must be a nonzero finite vector".into());
    }
    InitialCoinState::new(CoinSpinor(spinor.0.map(|z| z / norm))).map_err(|e| e.to_string())
}

/// `p_t(x)` for `x = -t ..= t`.
pub fn distribution(beta: f64, alpha: &[f64], t: usize) -> Result<Vec<f64>, String> {
    if t > MAX_STEPS {
        return Err(format!("t must be at most {MAX_STEPS}"));
    }
    let alpha = parse_alpha(alpha)?;
    let dist = simulate(&alpha, &CoinOperator::new(beta), t).position_distribution();
    Ok((-(t as i64)..=t as i64).map(|x| dist.get(x)).collect())
}

/// Interleaved `(k, φ, φ')` on `n` points of `[0, 2π]`.
pub fn phase_curve(beta: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_SAMPLES).contains(&n) {
        return Err(format!("n must lie in 2..={MAX_SAMPLES}"));
    }
    Ok((0..n)
        .flat_map(|j| {
            let k = TAU * j as f64 / (n - 1) as f64;
            let p = phase_function(k, beta);
            [k, p.phi, p.dphi]
        })
        .collect())
}

/// `[c00, y₀, f(y₀), y₁, f(y₁), …]` on `n` interior points of the support.
pub fn density_curve(alpha: &[f64], n: usize) -> Result<Vec<f64>, String> {
    if !(1..=MAX_SAMPLES).contains(&n) {
        return Err(format!("n must lie in 1..={MAX_SAMPLES}"));
    }
    let c = density_coefficients(&parse_alpha(alpha)?);
    let mut out = Vec::with_capacity(2 * n + 1);
    out.push(c.c00);
    for j in 0..n {
        let y = SUPPORT_EDGE * (2.0 * (j as f64 + 0.5) / n as f64 - 1.0);
        out.push(y);
        out.push(c.eval(y).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(beta: f64, alpha: &[f64], t: usize) -> Result<Vec<f64>, JsError> {
    distribution(beta, alpha, t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = phaseCurve)]
pub fn phase_curve_js(beta: f64, n: usize) -> Result<Vec<f64>, JsError> {
    phase_curve(beta, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = densityCurve)]
pub fn density_curve_js(alpha: &[f64], n: usize) -> Result<Vec<f64>, JsError> {
    density_curve(alpha, n).map_err(|e| JsError::new(&e))
}
