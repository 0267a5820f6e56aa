mod common;

use std::f64::consts::{SQRT_2, TAU};

use entwalk::limit::{
    endpoint_asymptotics, limiting_amplitude, localization_sum, tail_coefficient,
    FourierCoefficients, QuadratureConfig,
};
use entwalk::{Complex64, InitialCoinState, HADAMARD_BETA};
use nalgebra::Vector4;

fn bell() -> InitialCoinState {
    InitialCoinState::bell_phi_plus()
}

#[test]
fn grid_doubling_leaves_limits_unchanged() {
    let mut rng = common::rng(3);
    for alpha in [bell(), common::random_alpha(&mut rng)] {
        let coarse = FourierCoefficients::compute(&alpha, HADAMARD_BETA, 4096);
        let fine = FourierCoefficients::compute(&alpha, HADAMARD_BETA, 8192);
        for x in -64..=64 {
            assert!((coarse.probability(x) - fine.probability(x)).abs() < 1e-10);
        }
    }
}

#[test]
fn parseval_window_matches_localization_sum() {
    let cfg = QuadratureConfig::new(2048).unwrap();
    for alpha in [bell(), InitialCoinState::basis(0)] {
        let sum = localization_sum(&alpha, HADAMARD_BETA, &cfg).unwrap();
        assert_eq!(sum.window, 256);
        assert!((sum.value - sum.partial_sum).abs() < 1e-8);
    }
    let bell_sum = localization_sum(&bell(), HADAMARD_BETA, &cfg).unwrap();
    assert!((bell_sum.value - (SQRT_2 - 1.0)).abs() < 1e-9);
}

#[test]
fn localization_sum_is_at_most_one() {
    let mut rng = common::rng(5);
    let cfg = QuadratureConfig::default();
    for _ in 0..20 {
        let alpha = common::random_alpha(&mut rng);
        let beta = common::random_beta(&mut rng);
        let s = localization_sum(&alpha, beta, &cfg).unwrap().value;
        assert!((0.0..=1.0 + 1e-12).contains(&s), "sum {s}");
    }
}

/// Degenerate-subspace component `Σ_{j=2,3} ⟨V_j, α⟩ V_j` assembled from the
/// explicit Hadamard eigenvectors written with `γ₁`, `γ₂`, `N₁`, `N₂`.
fn explicit_hadamard_component(k: f64, alpha: &Vector4<Complex64>) -> Vector4<Complex64> {
    let c = (k / 2.0).cos();
    let root = (1.0 + c * c).sqrt();
    let g1 = -c + root;
    let g2 = -c - root;
    let n1 = 2.0 - 2.0 * g1 * c;
    let n2 = 2.0 - 2.0 * g2 * c;
    let e = Complex64::from_polar(1.0, k);
    let eh = Complex64::from_polar(1.0, k / 2.0);
    let scale = 1.0 / (n1 * n2).sqrt();
    let minus_one = Complex64::new(-1.0, 0.0);
    let v2 = Vector4::new(e, eh * g2, eh * g1, minus_one) * Complex64::new(scale, 0.0);
    let v3 = Vector4::new(e, eh * g1, eh * g2, minus_one) * Complex64::new(scale, 0.0);
    v2 * v2.dotc(alpha) + v3 * v3.dotc(alpha)
}

#[test]
fn projector_route_matches_explicit_eigenvectors() {
    let cfg = QuadratureConfig::default();
    let mut rng = common::rng(13);
    for alpha in [
        bell(),
        InitialCoinState::basis(1),
        common::random_alpha(&mut rng),
    ] {
        let a = alpha.as_vector();
        for x in [-7i64, -1, 0, 1, 2, 5, 12] {
            let n = cfg.n_points;
            let explicit = (0..n)
                .map(|j| {
                    let k = TAU * j as f64 / n as f64;
                    explicit_hadamard_component(k, &a) * Complex64::from_polar(1.0, -(x as f64) * k)
                })
                .sum::<Vector4<Complex64>>()
                .map(|z| z / n as f64);
            let projector = limiting_amplitude(x, &alpha, HADAMARD_BETA, &cfg)
                .unwrap()
                .as_vector();
            assert!((explicit - projector).norm() < 1e-10, "x={x}");
        }
    }
}

#[test]
fn tail_endpoint_term_vanishes_and_decay_is_fast() {
    let report = tail_coefficient(&bell(), HADAMARD_BETA, &QuadratureConfig::default()).unwrap();
    assert!(report.coefficient < 1e-24);
    assert!(report.exponential_rate.unwrap() < -1.0);
    let trivial = tail_coefficient(
        &InitialCoinState::basis(1),
        0.0,
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert_eq!(trivial.coefficient, 0.0);
}

#[test]
fn endpoint_expansion_of_linear_function() {
    for x in [3i64, 16, 64] {
        let approx = endpoint_asymptotics(|k| Complex64::new(k, 0.0), 1, x).unwrap();
        let exact = Complex64::new(0.0, TAU / x as f64);
        assert!((approx - exact).norm() < 1e-12, "x={x}");
    }
    let flat = endpoint_asymptotics(|_| Complex64::new(1.0, 0.0), 1, 9).unwrap();
    assert_eq!(flat, Complex64::new(0.0, 0.0));
}

#[test]
fn endpoint_expansion_of_half_sine() {
    let x = 64i64;
    // composite Simpson on a fine grid
    let n = 1 << 20;
    let h = TAU / n as f64;
    let f = |k: f64| Complex64::from_polar((k / 2.0).sin(), -(x as f64) * k);
    let mut quad = f(0.0) + f(TAU);
    for j in 1..n {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        quad += f(j as f64 * h) * w;
    }
    quad *= h / 3.0;
    let exact = 4.0 / (1.0 - 4.0 * (x * x) as f64);
    assert!((quad.re - exact).abs() < 1e-9 && quad.im.abs() < 1e-9);

    let approx = endpoint_asymptotics(|k| Complex64::new((k / 2.0).sin(), 0.0), 2, x).unwrap();
    assert!((approx - quad).norm() < 1e-3);
    assert!((approx.re + 1.0 / (x * x) as f64).abs() < 1e-9);
}
