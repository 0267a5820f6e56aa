//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2, TAU};
use std::time::{Duration, Instant};

use entwalk::asymptotics::{
    distributions_at, fit_decay_exponent, locate_spikes, measured_spike_height,
    spike_height_prediction, DEFAULT_DELTA,
};
use entwalk::limit::{
    endpoint_asymptotics, limiting_probability, localization_sum, periodic_mean, tail_coefficient,
    FourierCoefficients, QuadratureConfig,
};
use entwalk::oracle::brute_force_distribution;
use entwalk::spectral::{degenerate_projector, full_evolution, group_velocity_extremum};
use entwalk::walk::simulate;
use entwalk::weak_limit::{density_coefficients, empirical_vs_limit};
use entwalk::{CoinOperator, CoinSpinor, Complex64, InitialCoinState, HADAMARD_BETA};
use entwalk_cli::{run, Command, RunConfig};
use nalgebra::{Matrix4, Schur};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P0: f64 = 0.171_572_875_253_809_9; // 3 - 2√2
const M: f64 = FRAC_1_SQRT_2;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn bell() -> InitialCoinState {
    InitialCoinState::bell_phi_plus()
}

fn summary_f64(output: &entwalk_cli::RunOutput, key: &str) -> f64 {
    output.summary[key].as_f64().unwrap_or(f64::NAN)
}

fn ac1_origin_limit() -> Outcome {
    let start = Instant::now();
    let out = run(&RunConfig::new(Command::Limit)).expect("limit runs");
    let p0 = summary_f64(&out, "p0");
    let direct = limiting_probability(
        0,
        &bell(),
        HADAMARD_BETA,
        &QuadratureConfig::new(4096).unwrap(),
    )
    .unwrap();
    let elapsed = start.elapsed();
    let err = (p0 - P0).abs().max((direct - P0).abs());
    outcome(
        err < 1e-9 && elapsed < Duration::from_secs(1),
        format!("p(0) = {p0:.12}, |err| = {err:.1e}, {elapsed:.2?}"),
    )
}

fn ac2_finite_time_origin() -> Outcome {
    let start = Instant::now();
    let mut config = RunConfig::new(Command::Simulate);
    config.t = Some(400);
    let out = run(&config).expect("simulate runs");
    let elapsed = start.elapsed();
    let p = summary_f64(&out, "p0");
    let err = (p - P0).abs();
    outcome(
        err < 0.005 && out.failures.is_empty() && elapsed < Duration::from_secs(5),
        format!("p_400(0) = {p:.7}, |p - p(0)| = {err:.2e}, {elapsed:.2?}"),
    )
}

fn ac3_localization_sum() -> Outcome {
    let cfg = QuadratureConfig::new(4096).unwrap();
    let sum = localization_sum(&bell(), HADAMARD_BETA, &cfg)
        .unwrap()
        .value;
    let coeffs = FourierCoefficients::compute(&bell(), HADAMARD_BETA, cfg.n_points);
    let partial: f64 = (-256..=256).map(|x| coeffs.probability(x)).sum();
    let exact = SQRT_2 - 1.0;
    let e1 = (sum - exact).abs();
    let e2 = (sum - partial).abs();
    outcome(
        e1 < 1e-9 && e2 < 1e-8,
        format!("sum = {sum:.12}, |sum - (√2-1)| = {e1:.1e}, |sum - Σ_{{|x|≤256}}| = {e2:.1e}"),
    )
}

fn ac4_weak_limit_coefficients() -> Outcome {
    let c = density_coefficients(&bell());
    let coeff_err = [c.c00 - (SQRT_2 - 1.0), c.c0, c.c1, c.c2 - 2.0]
        .iter()
        .map(|e| e.abs())
        .fold(0.0, f64::max);
    let total = c.moment(0).unwrap();
    let mass = c.continuous_mass();
    let norm_err = (total - 1.0).abs();
    let mass_err = (mass - (2.0 - SQRT_2)).abs();
    outcome(
        coeff_err < 1e-12 && norm_err < 1e-8 && mass_err < 1e-8,
        format!(
            "(c00, c0, c1, c2) = ({:.12}, {:.1e}, {:.1e}, {:.12}), |mass - 1| = {norm_err:.1e}, \
             |continuous - (2-√2)| = {mass_err:.1e}",
            c.c00, c.c0, c.c1, c.c2
        ),
    )
}

fn ac5_spike_drift() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut passed = true;
    for (t, dist) in distributions_at(&bell(), HADAMARD_BETA, &[400, 800, 1600]) {
        match locate_spikes(&dist, t).unwrap().found() {
            Some(s) => {
                let drift = (s.x_right as f64 / t as f64 - M).abs();
                passed &= drift < 0.01;
                parts.push(format!("t={t}: x_right={} |x/t-M|={drift:.4}", s.x_right));
            }
            None => {
                passed = false;
                parts.push(format!("t={t}: no spike"));
            }
        }
    }
    let elapsed = start.elapsed();
    passed &= elapsed < Duration::from_secs(120);
    outcome(passed, format!("{}, {elapsed:.2?}", parts.join("; ")))
}

fn ac6_spike_decay() -> Outcome {
    let times = [200, 400, 800, 1600];
    let dists = distributions_at(&bell(), HADAMARD_BETA, &times);
    let heights: Vec<(f64, f64)> = dists
        .iter()
        .map(|(t, d)| (*t as f64, measured_spike_height(d, *t, M, DEFAULT_DELTA)))
        .collect();
    let fit = fit_decay_exponent(&heights).unwrap();
    let ratios: Vec<f64> = heights
        .iter()
        .map(|&(t, h)| h / spike_height_prediction(t as usize).unwrap())
        .collect();
    let passed =
        (-0.78..=-0.55).contains(&fit.exponent) && ratios.iter().all(|r| (0.1..=4.0).contains(r));
    let ratios: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    outcome(
        passed,
        format!(
            "exponent = {:.4}, measured/predicted = [{}]",
            fit.exponent,
            ratios.join(", ")
        ),
    )
}

/// `p_t` by summing amplitudes over every coin history `j₁ … j_t`.
fn path_enumeration(alpha: &InitialCoinState, beta: f64, t: usize) -> Vec<f64> {
    const STEP: [i64; 4] = [1, 0, 0, -1];
    let coin = CoinOperator::new(beta);
    let a = coin.matrix();
    let width = 2 * t + 1;
    let mut amp = vec![[Complex64::new(0.0, 0.0); 4]; width];
    let histories = 4usize.pow(t as u32);
    for j0 in 0..4 {
        let start = alpha.spinor().0[j0];
        if start == Complex64::new(0.0, 0.0) {
            continue;
        }
        for h in 0..histories {
            let mut code = h;
            let mut prev = j0;
            let mut value = start;
            let mut x = 0i64;
            for _ in 0..t {
                let j = code % 4;
                code /= 4;
                value *= a[(j, prev)];
                x += STEP[j];
                prev = j;
            }
            amp[(x + t as i64) as usize][prev] += value;
        }
    }
    amp.iter()
        .map(|s| s.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

fn random_alpha(rng: &mut impl Rng) -> InitialCoinState {
    let mut parts = [0.0; 8];
    for p in parts.iter_mut() {
        *p = rng.random_range(-1.0..1.0);
    }
    let norm = parts.iter().map(|p| p * p).sum::<f64>().sqrt();
    InitialCoinState::new(CoinSpinor::from_re_im(parts.map(|p| p / norm))).unwrap()
}

fn ac7_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let alpha = random_alpha(&mut rng);
        let beta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        for t in 0..=6 {
            let paths = path_enumeration(&alpha, beta, t);
            let evolved = simulate(&alpha, &CoinOperator::new(beta), t).position_distribution();
            let dense = brute_force_distribution(&alpha, beta, t).unwrap();
            for (i, p) in paths.iter().enumerate() {
                let x = i as i64 - t as i64;
                worst = worst
                    .max((evolved.get(x) - p).abs())
                    .max((dense.get(x) - p).abs());
            }
        }
    }
    outcome(
        worst < 1e-12,
        format!("50 random (α, β), t ≤ 6: max |Δp| = {worst:.1e}"),
    )
}

fn ac8_spectral_closed_forms() -> Outcome {
    let n = 1024;
    let mut eig_err = 0.0f64;
    for j in 0..n {
        let k = TAU * j as f64 / (n - 1) as f64;
        let phi = 2.0 * ((k / 2.0).sin() / SQRT_2).asin();
        let (_, t) = Schur::new(full_evolution(k, HADAMARD_BETA)).unpack();
        let mut found: Vec<Complex64> = (0..4).map(|i| t[(i, i)]).collect();
        for e in [
            Complex64::from_polar(1.0, phi),
            Complex64::from_polar(1.0, -phi),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ] {
            let (best, d) = found
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            eig_err = eig_err.max(d);
            found.swap_remove(best);
        }
    }
    let m = group_velocity_extremum(HADAMARD_BETA).unwrap().m;
    let m_err = (m - M).abs();
    let w = |k: f64| 1.0 / (1.0 + (k / 2.0).cos().powi(2));
    let i0: f64 = periodic_mean(w, 4096);
    let i1: f64 = periodic_mean(|k| k.cos() * w(k), 4096);
    let i2: f64 = periodic_mean(|k| k.sin() * w(k), 4096);
    let int_err = (i0 - FRAC_1_SQRT_2)
        .abs()
        .max((i1 - (2.0 - 1.5 * SQRT_2)).abs())
        .max(i2.abs());
    outcome(
        eig_err < 1e-10 && m_err < 1e-10 && int_err < 1e-12,
        format!("eigenvalue err = {eig_err:.1e}, |M - √2/2| = {m_err:.1e}, integral err = {int_err:.1e}"),
    )
}

fn max_abs(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn ac9_projector_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let betas: Vec<f64> = (0..10)
        .map(|_| rng.random_range(0.05..FRAC_PI_2 - 0.05))
        .collect();
    let (mut idem, mut herm, mut trace, mut period) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &beta in &betas {
        for j in 0..1024 {
            let k = TAU * j as f64 / 1023.0;
            let (p, _) = degenerate_projector(k, beta);
            idem = idem.max(max_abs(&(p * p - p)));
            herm = herm.max(max_abs(&(p.adjoint() - p)));
            trace = trace.max((p.trace() - Complex64::new(2.0, 0.0)).norm());
        }
        let gap = degenerate_projector(0.0, beta).0 - degenerate_projector(TAU, beta).0;
        period = period.max(max_abs(&gap));
    }
    let worst = idem.max(herm).max(trace).max(period);
    outcome(
        worst < 1e-12,
        format!(
            "10 β × 1024 k: |P²-P| = {idem:.1e}, |P†-P| = {herm:.1e}, |tr P - 2| = {trace:.1e}, \
             |P(0)-P(2π)| = {period:.1e}"
        ),
    )
}

fn ac10_endpoint_asymptotics() -> Outcome {
    let mut linear_err = 0.0f64;
    for x in [3i64, 16, 64] {
        let approx = endpoint_asymptotics(|k| Complex64::new(k, 0.0), 1, x).unwrap();
        linear_err = linear_err.max((approx - Complex64::new(0.0, TAU / x as f64)).norm());
    }
    let x = 64i64;
    let n = 1 << 20;
    let h = TAU / n as f64;
    let f = |k: f64| Complex64::from_polar((k / 2.0).sin(), -(x as f64) * k);
    // composite Simpson as the high-resolution reference
    let mut quad = f(0.0) + f(TAU);
    for j in 1..n {
        quad += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    quad *= h / 3.0;
    let approx = endpoint_asymptotics(|k| Complex64::new((k / 2.0).sin(), 0.0), 2, x).unwrap();
    let sine_err = (approx - quad).norm();
    outcome(
        linear_err < 1e-12 && sine_err < 1e-3,
        format!("g=k: max err = {linear_err:.1e}; g=sin(k/2), N=2, x=64: err = {sine_err:.1e}"),
    )
}

fn ac11_moment_convergence() -> Outcome {
    let early = empirical_vs_limit(&bell(), HADAMARD_BETA, 500, &[2]).unwrap();
    let late = empirical_vs_limit(&bell(), HADAMARD_BETA, 2000, &[2]).unwrap();
    let (g500, g2000) = (early.max_moment_gap, late.max_moment_gap);
    outcome(
        g2000 < 0.01 && g2000 < g500,
        format!(
            "∫y²f = {:.8}, gap(t=500) = {g500:.2e}, gap(t=2000) = {g2000:.2e}",
            late.moments[0]
        ),
    )
}

fn ac12_tail_report() -> Outcome {
    let report = tail_coefficient(&bell(), HADAMARD_BETA, &QuadratureConfig::default()).unwrap();
    let exponent = report.empirical_fit.as_ref().map(|f| f.exponent);
    let emitted = report.coefficient.is_finite() && exponent.is_some_and(f64::is_finite);
    outcome(
        emitted,
        format!(
            "reported only: endpoint coefficient = {:.3e}, log-log exponent on [16, 128] = {}, \
             exponential rate of ‖c_x‖² = {}",
            report.coefficient,
            exponent.map_or("none".into(), |e| format!("{e:.3}")),
            report
                .exponential_rate
                .map_or("none".into(), |r| format!("{r:.3} per site")),
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1", "origin spike limit", ac1_origin_limit),
        ("AC2", "finite-time origin spike", ac2_finite_time_origin),
        ("AC3", "localization sum", ac3_localization_sum),
        (
            "AC4",
            "weak-limit coefficients",
            ac4_weak_limit_coefficients,
        ),
        ("AC5", "spike drift", ac5_spike_drift),
        ("AC6", "spike decay exponent", ac6_spike_decay),
        ("AC7", "oracle equivalence", ac7_oracle_equivalence),
        ("AC8", "spectral closed forms", ac8_spectral_closed_forms),
        ("AC9", "projector properties", ac9_projector_properties),
        ("AC10", "endpoint asymptotics", ac10_endpoint_asymptotics),
        ("AC11", "moment convergence", ac11_moment_convergence),
        ("AC12", "tail report", ac12_tail_report),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Outcome {
            passed: false,
            detail: "panicked".into(),
        });
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {id} {name}: {} ({:.2?})",
            result.detail,
            start.elapsed()
        );
        if !result.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
