use std::fmt;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::INPUT_NORM_TOLERANCE;

/// Amplitudes of the two-qubit coin register at a single site, in the basis
/// order `00, 01, 10, 11`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoinSpinor(pub [Complex64; 4]);

impl CoinSpinor {
    pub const ZERO: CoinSpinor = CoinSpinor([Complex64::new(0.0, 0.0); 4]);

    pub fn new(a00: Complex64, a01: Complex64, a10: Complex64, a11: Complex64) -> Self {
        CoinSpinor([a00, a01, a10, a11])
    }

    /// Builds a spinor from interleaved `(re, im)` pairs.
    pub fn from_re_im(parts: [f64; 8]) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        for (j, amp) in amps.iter_mut().enumerate() {
            *amp = Complex64::new(parts[2 * j], parts[2 * j + 1]);
        }
        CoinSpinor(amps)
    }

    pub fn from_real(parts: [f64; 4]) -> Self {
        CoinSpinor(parts.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn to_re_im(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (j, a) in self.0.iter().enumerate() {
            out[2 * j] = a.re;
            out[2 * j + 1] = a.im;
        }
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    pub fn as_vector(&self) -> Vector4<Complex64> {
        Vector4::from_row_slice(&self.0)
    }

    pub fn from_vector(v: &Vector4<Complex64>) -> Self {
        CoinSpinor([v[0], v[1], v[2], v[3]])
    }
}

impl std::ops::Index<usize> for CoinSpinor {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

/// A validated initial coin state `[α₁, α₂, α₃, α₄]` with unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCoinState {
    alpha: CoinSpinor,
}

impl InitialCoinState {
    /// Accepts `alpha` if its squared norm is within `1e-9` of one.
    /// The stored state is not rescaled; see [`InitialCoinState::normalized`].
    pub fn new(alpha: CoinSpinor) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite("initial coin state"));
        }
        let norm_sqr = alpha.norm_sqr();
        if (norm_sqr - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm_sqr,
                tolerance: INPUT_NORM_TOLERANCE,
            });
        }
        Ok(InitialCoinState { alpha })
    }

    /// Accepts `alpha` if its squared norm is within `tolerance` of one and
    /// rescales it to unit norm.
    pub fn normalized_within(alpha: CoinSpinor, tolerance: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite("initial coin state"));
        }
        let norm_sqr = alpha.norm_sqr();
        if (norm_sqr - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized {
                norm_sqr,
                tolerance,
            });
        }
        let scale = norm_sqr.sqrt().recip();
        Ok(InitialCoinState {
            alpha: CoinSpinor(alpha.0.map(|a| a * scale)),
        })
    }

    /// [`InitialCoinState::normalized_within`] at the default input tolerance.
    pub fn normalized(alpha: CoinSpinor) -> Result<Self> {
        Self::normalized_within(alpha, INPUT_NORM_TOLERANCE)
    }

    /// Bell state `(|00⟩ + |11⟩)/√2`.
    pub fn bell_phi_plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        InitialCoinState {
            alpha: CoinSpinor::from_real([h, 0.0, 0.0, h]),
        }
    }

    /// One of the four computational basis states, `index` in `0..4`.
    pub fn basis(index: usize) -> Self {
        let mut parts = [0.0; 4];
        parts[index] = 1.0;
        InitialCoinState {
            alpha: CoinSpinor::from_real(parts),
        }
    }

    pub fn spinor(&self) -> &CoinSpinor {
        &self.alpha
    }

    pub fn as_vector(&self) -> Vector4<Complex64> {
        self.alpha.as_vector()
    }
}

impl fmt::Display for InitialCoinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.alpha.0;
        write!(f, "[{}, {}, {}, {}]", a[0], a[1], a[2], a[3])
    }
}

/// Single-qubit coin `A(β) = [[cos β, sin β], [sin β, −cos β]]`.
///
/// `det A(β) = −1` for every `β`, and `A(π/4)` is the Hadamard matrix.
pub fn single_coin(beta: f64) -> Matrix2<Complex64> {
    let (s, c) = beta.sin_cos();
    Matrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-c, 0.0),
    )
}

/// The two-qubit coin `A(β) ⊗ A(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    beta: f64,
    matrix: Matrix4<Complex64>,
}

impl CoinOperator {
    pub fn new(beta: f64) -> Self {
        let a = single_coin(beta);
        CoinOperator {
            beta,
            matrix: a.kronecker(&a).fixed_view::<4, 4>(0, 0).into_owned(),
        }
    }

    pub fn hadamard() -> Self {
        Self::new(crate::HADAMARD_BETA)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    /// Multiplies a coin spinor by the operator.
    #[inline]
    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let m = &self.matrix;
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = m[(i, 0)] * v[0] + m[(i, 1)] * v[1] + m[(i, 2)] * v[2] + m[(i, 3)] * v[3];
        }
        out
    }
}

/// Shorthand for [`CoinOperator::new`].
pub fn make_coin_operator(beta: f64) -> CoinOperator {
    CoinOperator::new(beta)
}

/// Largest elementwise deviation of `M†M` from the identity.
pub fn unitarity_defect<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> f64 {
    let prod = m.adjoint() * m;
    let mut worst = 0.0f64;
    for i in 0..N {
        for j in 0..N {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}
