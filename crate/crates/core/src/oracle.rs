//! Dense-matrix reference evolution for small `t`.
//!
//! Builds the full evolution operator `U = S (I ⊗ A_ec)` on the truncated
//! lattice `[-t, t]` as an explicit matrix, raises it to the `t`-th power and
//! applies it to the initial vector. Shares nothing with [`crate::walk`]
//! beyond the coin matrix, so it serves as an independent check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coin::{CoinOperator, InitialCoinState};
use crate::error::{Error, Result};
use crate::walk::PositionDistribution;

pub const MAX_ORACLE_STEPS: usize = 8;

/// Position step taken by each coin basis state under the shift.
const DISPLACEMENT: [i64; 4] = [1, 0, 0, -1];

fn shift_operator(sites: usize) -> DMatrix<Complex64> {
    let dim = 4 * sites;
    let mut s = DMatrix::zeros(dim, dim);
    for site in 0..sites {
        for (coin, &dx) in DISPLACEMENT.iter().enumerate() {
            let target = site as i64 + dx;
            if (0..sites as i64).contains(&target) {
                s[(4 * target as usize + coin, 4 * site + coin)] = Complex64::new(1.0, 0.0);
            }
        }
    }
    s
}

/// `U^t ψ₀` over `[-t, t]` by explicit matrix powers.
pub fn brute_force_distribution(
    alpha: &InitialCoinState,
    beta: f64,
    t: usize,
) -> Result<PositionDistribution> {
    if t > MAX_ORACLE_STEPS {
        return Err(Error::OracleTooLarge {
            t,
            max: MAX_ORACLE_STEPS,
        });
    }
    let sites = 2 * t + 1;
    let coin = CoinOperator::new(beta);
    let coin_dense = DMatrix::from_fn(4, 4, |i, j| coin.matrix()[(i, j)]);
    let identity = DMatrix::<Complex64>::identity(sites, sites);
    let u = shift_operator(sites) * identity.kronecker(&coin_dense);

    let mut power = DMatrix::<Complex64>::identity(4 * sites, 4 * sites);
    for _ in 0..t {
        power = &u * power;
    }

    let mut psi0 = DVector::<Complex64>::zeros(4 * sites);
    for j in 0..4 {
        psi0[4 * t + j] = alpha.spinor().0[j];
    }
    let psi = power * psi0;
    let probs = (0..sites)
        .map(|site| (0..4).map(|j| psi[4 * site + j].norm_sqr()).sum())
        .collect();
    Ok(PositionDistribution::from_window(-(t as i64), probs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_large_t() {
        let err = brute_force_distribution(&InitialCoinState::bell_phi_plus(), 0.5, 9);
        assert_eq!(err, Err(Error::OracleTooLarge { t: 9, max: 8 }));
    }

    #[test]
    fn zero_steps_is_point_mass() {
        let p = brute_force_distribution(&InitialCoinState::bell_phi_plus(), 0.5, 0).unwrap();
        assert_eq!(p.probabilities().len(), 1);
        assert!((p.get(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_bell_first_steps() {
        let alpha = InitialCoinState::bell_phi_plus();
        let p1 = brute_force_distribution(&alpha, crate::HADAMARD_BETA, 1).unwrap();
        assert!((p1.get(1) - 0.5).abs() < 1e-14 && (p1.get(-1) - 0.5).abs() < 1e-14);
        let p2 = brute_force_distribution(&alpha, crate::HADAMARD_BETA, 2).unwrap();
        for (x, e) in [(-2, 0.125), (-1, 0.25), (0, 0.25), (1, 0.25), (2, 0.125)] {
            assert!((p2.get(x) - e).abs() < 1e-14);
        }
    }
}
