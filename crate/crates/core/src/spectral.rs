//! Fourier-space evolution and its eigen-decomposition.
//!
//! With the Fourier convention `Ψ̂(k) = Σ_x Ψ(x) e^{ikx}` a walk step becomes
//! multiplication by
//!
//! ```text
//! U_ec(k) = diag(e^{ik}, 1, 1, e^{-ik}) · (A ⊗ A) = U(k/2) ⊗ U(k/2),
//! U(k/2)  = diag(e^{ik/2}, e^{-ik/2}) · A.
//! ```
//!
//! For `A(β) = [[c, s], [s, -c]]` (with `c = cos β`, `s = sin β`) the
//! eigenvalues of `U(k/2)` are `λ₁ = e^{iη}` and `λ₂ = -e^{-iη}` with
//! `η(k) = asin(c · sin(k/2))`, the branch continuous in `k` with `η(0) = 0`.
//! `U_ec(k)` then has eigenvalues `e^{iφ}`, `-1`, `-1`, `e^{-iφ}` with
//! `φ = 2η`. The doubly degenerate `-1` does not depend on `k`; its
//! eigenspace projector drives every localization effect.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::coin::{single_coin, CoinOperator};
use crate::error::{Error, Result};

/// Phase of `det A(β)`; `A(β)` is a reflection, so the determinant is `-1`.
pub const THETA: f64 = PI;

/// Below this separation `|Λ₁ - Λ₂|` the eigenspaces are treated as colliding.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Offset used to take the projector limit at a collision point.
const COLLISION_OFFSET: f64 = 1e-6;

/// Step used by the finite-difference derivative route.
pub const FD_STEP: f64 = 1e-5;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `U(k/2)` at a given momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEvolution {
    pub k: f64,
    pub matrix: Matrix2<Complex64>,
}

pub fn reduced_evolution(k: f64, beta: f64) -> ReducedEvolution {
    let half = Complex64::from_polar(1.0, k / 2.0);
    let d = Matrix2::new(half, ZERO, ZERO, half.conj());
    ReducedEvolution {
        k,
        matrix: d * single_coin(beta),
    }
}

/// `U_ec(k) = diag(e^{ik}, 1, 1, e^{-ik}) · A_ec`.
pub fn full_evolution(k: f64, beta: f64) -> Matrix4<Complex64> {
    let coin = CoinOperator::new(beta);
    let phase = Complex64::from_polar(1.0, k);
    let d = Matrix4::from_diagonal(&Vector4::new(phase, ONE, ONE, phase.conj()));
    d * coin.matrix()
}

/// `U(k/2) ⊗ U(k/2)`; equal to [`full_evolution`] up to rounding.
pub fn full_evolution_tensor(k: f64, beta: f64) -> Matrix4<Complex64> {
    let u = reduced_evolution(k, beta).matrix;
    u.kronecker(&u).fixed_view::<4, 4>(0, 0).into_owned()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDerivatives {
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
}

/// Shared trigonometric pieces of the half-angle eigenproblem.
#[derive(Debug, Clone, Copy)]
struct HalfAngle {
    cos_beta: f64,
    sin_beta: f64,
    sin_half: f64,
    cos_half: f64,
    /// `sqrt(1 - cos²β sin²(k/2))`, the real part of `λ₁`.
    root: f64,
}

impl HalfAngle {
    fn new(k: f64, beta: f64) -> Self {
        let (sin_beta, cos_beta) = beta.sin_cos();
        let (sin_half, cos_half) = (k / 2.0).sin_cos();
        let cs = cos_beta * sin_half;
        HalfAngle {
            cos_beta,
            sin_beta,
            sin_half,
            cos_half,
            root: (1.0 - cs * cs).max(0.0).sqrt(),
        }
    }

    fn eta(&self) -> f64 {
        (self.cos_beta * self.sin_half).clamp(-1.0, 1.0).asin()
    }
}

/// `φ(k)` with its first two derivatives, in closed form.
///
/// `φ = 2 asin(cos β sin(k/2))`, `φ' = cos β cos(k/2) / D^{1/2}` and
/// `φ'' = -cos β sin²β sin(k/2) / (2 D^{3/2})` with
/// `D = 1 - cos²β sin²(k/2)`. At `β = π/4` these reduce to
/// `φ' = cos(k/2) / sqrt(2 - sin²(k/2))`.
pub fn phase_function(k: f64, beta: f64) -> PhaseDerivatives {
    let h = HalfAngle::new(k, beta);
    let r = h.root;
    PhaseDerivatives {
        phi: 2.0 * h.eta(),
        dphi: h.cos_beta * h.cos_half / r,
        d2phi: -h.cos_beta * h.sin_beta * h.sin_beta * h.sin_half / (2.0 * r * r * r),
    }
}

/// Centered finite differences of `φ` with step `step`.
pub fn phase_function_fd(k: f64, beta: f64, step: f64) -> PhaseDerivatives {
    let phi = |k: f64| 2.0 * HalfAngle::new(k, beta).eta();
    let dphi = |k: f64| (phi(k + step) - phi(k - step)) / (2.0 * step);
    PhaseDerivatives {
        phi: phi(k),
        dphi: dphi(k),
        d2phi: (dphi(k + step) - dphi(k - step)) / (2.0 * step),
    }
}

/// Eigenpairs of `U(k/2)`: `λ₁ = e^{iη}`, `λ₂ = -e^{-iη}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfAngleEigenpairs {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub v1: Vector2<Complex64>,
    pub v2: Vector2<Complex64>,
}

/// Unit eigenvectors of `U(k/2)`, or `None` when `λ₁` and `λ₂` collide.
///
/// Each eigenvector is read off the row of `U - λI` that avoids
/// cancellation: with `u = cos β cos(k/2)` and `r = Re λ₁`,
/// `(r + u)(r - u) = sin²β`, so whichever of `r ± u` is large carries the
/// direction and the small one is never formed.
pub fn half_angle_eigenpairs(k: f64, beta: f64) -> Option<HalfAngleEigenpairs> {
    let h = HalfAngle::new(k, beta);
    let r = h.root;
    if 2.0 * r < DEGENERACY_TOLERANCE {
        return None;
    }
    let cs = h.cos_beta * h.sin_half;
    let lambda1 = Complex64::new(r, cs);
    let lambda2 = Complex64::new(-r, cs);

    let u = h.cos_beta * h.cos_half;
    let e_half = Complex64::from_polar(h.sin_beta, k / 2.0);
    let e_half_conj = e_half.conj();
    let (v1, v2) = if u >= 0.0 {
        (
            Vector2::new(Complex64::new(r + u, 0.0), e_half_conj),
            Vector2::new(e_half, Complex64::new(-(r + u), 0.0)),
        )
    } else {
        (
            Vector2::new(e_half, Complex64::new(r - u, 0.0)),
            Vector2::new(Complex64::new(-(r - u), 0.0), e_half_conj),
        )
    };
    Some(HalfAngleEigenpairs {
        lambda1,
        lambda2,
        v1: v1.normalize(),
        v2: v2.normalize(),
    })
}

/// Tensor eigenvectors `V₁ = v₁⊗v₁`, `V₂ = v₁⊗v₂`, `V₃ = v₂⊗v₁`,
/// `V₄ = v₂⊗v₂`. `V₂` and `V₃` are one gauge choice inside the degenerate
/// eigenspace.
pub fn tensor_eigenvectors(k: f64, beta: f64) -> Option<[Vector4<Complex64>; 4]> {
    let pairs = half_angle_eigenpairs(k, beta)?;
    let kron = |a: &Vector2<Complex64>, b: &Vector2<Complex64>| {
        Vector4::new(a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    };
    Some([
        kron(&pairs.v1, &pairs.v1),
        kron(&pairs.v1, &pairs.v2),
        kron(&pairs.v2, &pairs.v1),
        kron(&pairs.v2, &pairs.v2),
    ])
}

fn projector_from_pairs(pairs: &HalfAngleEigenpairs) -> Matrix4<Complex64> {
    let kron =
        |a: &Vector2<Complex64>| Vector4::new(a[0] * a[0], a[0] * a[1], a[1] * a[0], a[1] * a[1]);
    let v1 = kron(&pairs.v1);
    let v4 = kron(&pairs.v2);
    Matrix4::identity() - v1 * v1.adjoint() - v4 * v4.adjoint()
}

/// Projector onto the eigenspace of `U_ec(k)` for the eigenvalue `e^{iθ} = -1`,
/// built as `I - V₁V₁† - V₄V₄†` so it does not depend on how `V₂`, `V₃` are
/// chosen. Returns the projector and whether `k` is a collision point, where
/// the projector is the average of its values at `k ± 1e-6`.
pub fn degenerate_projector(k: f64, beta: f64) -> (Matrix4<Complex64>, bool) {
    match half_angle_eigenpairs(k, beta) {
        Some(pairs) => (projector_from_pairs(&pairs), false),
        None => {
            let side = |k: f64| {
                half_angle_eigenpairs(k, beta)
                    .map(|p| projector_from_pairs(&p))
                    .unwrap_or_else(Matrix4::zeros)
            };
            let avg = (side(k - COLLISION_OFFSET) + side(k + COLLISION_OFFSET)).map(|z| z * 0.5);
            (avg, true)
        }
    }
}

/// Spectral data of `U_ec(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub k: f64,
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
    /// `[e^{iφ}, e^{iθ}, e^{iθ}, e^{i(2θ - φ)}]`.
    pub lambdas: [Complex64; 4],
    pub theta: f64,
    pub projector: Matrix4<Complex64>,
    /// `|Λ₁ - Λ₂| < 1e-8` at this `k`.
    pub near_degenerate: bool,
}

pub fn eigen_system(k: f64, beta: f64) -> SpectralData {
    let PhaseDerivatives { phi, dphi, d2phi } = phase_function(k, beta);
    // e^{iθ} with θ = π
    let degenerate = Complex64::new(-1.0, 0.0);
    let lambda1 = Complex64::from_polar(1.0, phi);
    let (projector, collision) = degenerate_projector(k, beta);
    SpectralData {
        k,
        phi,
        dphi,
        d2phi,
        lambdas: [lambda1, degenerate, degenerate, lambda1.conj()],
        theta: THETA,
        projector,
        near_degenerate: collision || (lambda1 - degenerate).norm() < DEGENERACY_TOLERANCE,
    }
}

/// `β` values (mod π/2) for which the walk is trivial.
pub fn is_trivial_beta(beta: f64) -> bool {
    let quarter = std::f64::consts::FRAC_PI_2;
    let r = beta.rem_euclid(quarter);
    r.min(quarter - r) < 1e-12
}

/// Location of the extremal group velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPointReport {
    /// Zero of `φ''` where `|φ'|` is largest.
    pub k0: f64,
    /// `|φ'(k0)|`, the speed of the ballistic fronts.
    pub m: f64,
}

pub const EXTREMUM_GRID: usize = 4096;

/// Finds the zeros of `φ''` on `[0, 2π]` by sign changes on a 4096-point
/// grid refined by bisection, and returns the one with the largest `|φ'|`.
pub fn group_velocity_extremum(beta: f64) -> Result<StationaryPointReport> {
    if is_trivial_beta(beta) {
        return Err(Error::TrivialCoin { beta });
    }
    let d2 = |k: f64| phase_function(k, beta).d2phi;
    let grid: Vec<f64> = (0..EXTREMUM_GRID)
        .map(|j| TAU * j as f64 / (EXTREMUM_GRID - 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&k| d2(k)).collect();

    let mut zeros = Vec::new();
    for (j, (&k, &v)) in grid.iter().zip(&values).enumerate() {
        if v.abs() < 1e-12 {
            zeros.push(k);
            continue;
        }
        if let Some(&next) = values.get(j + 1) {
            if next.abs() >= 1e-12 && v.signum() != next.signum() {
                zeros.push(bisect(&d2, k, grid[j + 1]));
            }
        }
    }

    zeros
        .into_iter()
        .map(|k0| StationaryPointReport {
            k0,
            m: phase_function(k0, beta).dphi.abs(),
        })
        .fold(
            None,
            |best: Option<StationaryPointReport>, cand| match best {
                Some(b) if b.m >= cand.m => Some(b),
                _ => Some(cand),
            },
        )
        .ok_or_else(|| Error::Precondition(format!("no zero of phi'' found for beta = {beta}")))
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.abs() < 1e-12 || hi - lo < 1e-15 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::unitarity_defect;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn max_diff(a: &Matrix4<Complex64>, b: &Matrix4<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn reduced_evolution_examples() {
        let h = FRAC_1_SQRT_2;
        let at0 = reduced_evolution(0.0, FRAC_PI_4).matrix;
        let had = Matrix2::new(h, h, h, -h).map(|v| Complex64::new(v, 0.0));
        assert!((at0 - had).iter().all(|z| z.norm() < 1e-15));

        let i = Complex64::i();
        let expected = Matrix2::new(i * h, i * h, -i * h, i * h);
        let at_pi = reduced_evolution(PI, FRAC_PI_4).matrix;
        assert!((at_pi - expected).iter().all(|z| z.norm() < 1e-15));

        for (k, beta) in [(0.3, 0.2), (5.0, 1.3), (TAU, -0.4)] {
            assert!(unitarity_defect(&reduced_evolution(k, beta).matrix) < 1e-14);
        }
    }

    #[test]
    fn full_evolution_routes_agree() {
        assert!(max_diff(&full_evolution(1.0, 0.7), &full_evolution_tensor(1.0, 0.7)) < 1e-13);
        let hh = *CoinOperator::hadamard().matrix();
        assert!(max_diff(&full_evolution(0.0, FRAC_PI_4), &hh) < 1e-15);
        let minus = Matrix4::<Complex64>::identity().map(|z| -z);
        assert!(max_diff(&full_evolution(PI, 0.0), &minus) < 1e-15);
    }

    #[test]
    fn hadamard_phase_values() {
        let p0 = phase_function(0.0, FRAC_PI_4);
        assert_eq!(p0.phi, 0.0);
        assert!((p0.dphi - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(p0.d2phi, 0.0);
        let ppi = phase_function(PI, FRAC_PI_4);
        assert!((ppi.phi - PI / 2.0).abs() < 1e-15);
        assert!(ppi.dphi.abs() < 1e-15);
        assert!((phase_function(TAU, FRAC_PI_4).dphi + FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn finite_differences_track_closed_form() {
        for beta in [FRAC_PI_4, 0.3, 1.2] {
            for j in 1..64 {
                let k = TAU * j as f64 / 64.0;
                let exact = phase_function(k, beta);
                let fd = phase_function_fd(k, beta, FD_STEP);
                assert!((exact.dphi - fd.dphi).abs() < 1e-7, "beta={beta} k={k}");
                assert!((exact.d2phi - fd.d2phi).abs() < 1e-4, "beta={beta} k={k}");
            }
        }
    }

    #[test]
    fn degenerate_eigenvalue_is_exactly_minus_one() {
        for k in [0.0, 1.0, PI, 5.5] {
            let s = eigen_system(k, FRAC_PI_4);
            assert_eq!(s.lambdas[1], Complex64::new(-1.0, 0.0));
            assert_eq!(s.lambdas[2], Complex64::new(-1.0, 0.0));
            assert!(!s.near_degenerate);
        }
    }

    #[test]
    fn projector_fixes_bell_state_at_pi() {
        let h = FRAC_1_SQRT_2;
        let bell = Vector4::new(h, 0.0, 0.0, h).map(|v| Complex64::new(v, 0.0));
        let (p, _) = degenerate_projector(PI, FRAC_PI_4);
        assert!(((p * bell) - bell).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn collision_point_is_flagged() {
        let s = eigen_system(PI, 0.0);
        assert!(s.near_degenerate);
        let expected = Matrix4::from_diagonal(&Vector4::new(ZERO, ONE, ONE, ZERO));
        assert!(max_diff(&s.projector, &expected) < 1e-12);
    }

    #[test]
    fn extremum_for_hadamard() {
        let r = group_velocity_extremum(FRAC_PI_4).unwrap();
        assert!(r.k0 == 0.0 || (r.k0 - TAU).abs() < 1e-12);
        assert!((r.m - FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(phase_function(r.k0, FRAC_PI_4).d2phi.abs() < 1e-10);
    }

    #[test]
    fn trivial_betas_rejected() {
        for beta in [0.0, std::f64::consts::FRAC_PI_2, PI] {
            assert_eq!(
                group_velocity_extremum(beta),
                Err(Error::TrivialCoin { beta })
            );
        }
        assert!(group_velocity_extremum(1e-6).is_ok());
    }
}
