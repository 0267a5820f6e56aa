//! Quantum random walks on the line driven by two entangled coins.
//!
//! The walker carries a four-dimensional coin register (two qubits, basis
//! `00, 01, 10, 11`). Each step applies the coin `A(β) ⊗ A(β)` at every site
//! and then shifts: `00` moves right, `11` moves left, `01` and `10` stay put.
//! Because the shift leaves part of the coin space at rest, the Fourier-space
//! evolution `U_ec(k)` has a `k`-independent eigenvalue, and the walker keeps
//! a finite probability near its starting point forever.
//!
//! Modules:
//!
//! - [`walk`]: exact state-vector evolution and position distributions,
//!   plus a dense-matrix oracle in [`oracle`].
//! - [`spectral`]: `U(k/2)`, `U_ec(k)`, the phase function `φ(k)` and the
//!   projector onto the degenerate eigenspace.
//! - [`limit`]: limiting probabilities `p(x)`, the localization sum and
//!   endpoint asymptotics of Fourier integrals.
//! - [`asymptotics`]: regime classification, minor-spike tracking and
//!   decay-exponent fits for finite `t`.
//! - [`weak_limit`]: the limiting density of `X_t / t` for the Hadamard coin.

pub mod asymptotics;
pub mod coin;
pub mod error;
pub mod limit;
pub mod oracle;
pub mod spectral;
pub mod walk;
pub mod weak_limit;

pub use coin::{CoinOperator, CoinSpinor, InitialCoinState};
pub use error::{Error, Result};
pub use walk::{PositionDistribution, WalkState};

pub use num_complex::Complex64;

/// `β` for which `A(β)` is the Hadamard matrix.
pub const HADAMARD_BETA: f64 = std::f64::consts::FRAC_PI_4;

/// Tolerance used when accepting user-supplied coin states.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-9;
