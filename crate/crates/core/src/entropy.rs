//! Von Neumann entropy (base 2) and the entropy bias `S(ρ_b) - S(ρ_c)`.

use serde::{Deserialize, Serialize};

use crate::channels::Isometry;
use crate::error::{Error, Result};
use crate::linalg::ComplexVector;
use crate::state::DensityOperator;
use crate::{ENTROPY_CUTOFF, PSD_TOL, RANK_TOL};

/// Output entropies and their difference, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasValue {
    pub s_b: f64,
    pub s_c: f64,
    pub delta: f64,
}

/// `-Σ λ log₂ λ` over `λ > tol`. Eigenvalues below `-PSD_TOL` are rejected.
pub fn entropy_of_spectrum(eigenvalues: &[f64], tol: f64) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigenvalues {
        if lam < -PSD_TOL {
            return Err(Error::NotPositive {
                eigenvalue: lam,
                tol: PSD_TOL,
            });
        }
        if lam > tol {
            s -= lam * lam.log2();
        }
    }
    Ok(s.max(0.0))
}

pub fn von_neumann_entropy(rho: &DensityOperator, tol: f64) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues(), tol)
}

pub fn entropy_bias(j: &Isometry, rho: &DensityOperator) -> Result<BiasValue> {
    let (b, c) = j.outputs(rho)?;
    let s_b = von_neumann_entropy(&b, ENTROPY_CUTOFF)?;
    let s_c = von_neumann_entropy(&c, ENTROPY_CUTOFF)?;
    Ok(BiasValue {
        s_b,
        s_c,
        delta: s_b - s_c,
    })
}

/// Common nonzero spectrum of `B([ψ])` and `C([ψ])`: squared Schmidt
/// coefficients of `J|ψ⟩`, descending.
pub fn output_spectra_pure(j: &Isometry, psi: &ComplexVector) -> Result<Vec<f64>> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > PSD_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let out = j.apply_vector(psi)?;
    let d_c = j.d_c();
    let coeffs = crate::linalg::ComplexMatrix::from_fn(j.d_b(), d_c, |ib, ic| out[ib * d_c + ic]);
    let mut spec: Vec<f64> = coeffs
        .singular_values()
        .iter()
        .map(|q| q * q)
        .filter(|&x| x > RANK_TOL)
        .collect();
    spec.sort_by(|a, b| b.total_cmp(a));
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{build_erasure, build_pedagogic, build_qutrit, tensor_pair};
    use crate::linalg::{self, c};
    use crate::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xlog(x: f64) -> f64 {
        if x > 0.0 {
            -x * x.log2()
        } else {
            0.0
        }
    }

    #[test]
    fn simple_entropies() {
        assert!(
            (von_neumann_entropy(&DensityOperator::maximally_mixed(2), ENTROPY_CUTOFF).unwrap()
                - 1.0)
                .abs()
                < 1e-15
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pure = DensityOperator::pure(&random::random_pure(&mut rng, 4)).unwrap();
        assert!(von_neumann_entropy(&pure, ENTROPY_CUTOFF).unwrap().abs() < 1e-12);
        let d = DensityOperator::diagonal(&[0.7, 0.3, 0.0]).unwrap();
        let expected = -0.7 * 0.7f64.log2() - 0.3 * 0.3f64.log2();
        assert!((von_neumann_entropy(&d, ENTROPY_CUTOFF).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn negative_spectrum_is_rejected() {
        assert!(matches!(
            entropy_of_spectrum(&[1.1, -0.1], 1e-12),
            Err(Error::NotPositive { .. })
        ));
        // tiny negatives clamp to zero
        assert_eq!(entropy_of_spectrum(&[1.0, -1e-14], 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn pure_input_bias_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..=20 {
            let x = k as f64 * 0.05;
            for j in [
                build_pedagogic(x).unwrap(),
                build_qutrit(x).unwrap(),
                build_erasure(x).unwrap(),
            ] {
                let psi = random::random_pure(&mut rng, j.d_a());
                let bias = entropy_bias(&j, &DensityOperator::pure(&psi).unwrap()).unwrap();
                assert!(bias.delta.abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn erasure_bias_closed_form() {
        let j = build_erasure(0.75).unwrap();
        let bias = entropy_bias(&j, &DensityOperator::maximally_mixed(2)).unwrap();
        assert!((bias.delta - 0.5).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for lambda in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let j = build_erasure(lambda).unwrap();
            let rho = random::random_density(&mut rng, 2);
            let s = von_neumann_entropy(&rho, ENTROPY_CUTOFF).unwrap();
            let bias = entropy_bias(&j, &rho).unwrap();
            assert!((bias.delta - (2.0 * lambda - 1.0) * s).abs() < 1e-12);
        }
    }

    #[test]
    fn pedagogic_bias_positive_for_small_eps() {
        let j = build_pedagogic(0.3).unwrap();
        for eps in [1e-4, 1e-3, 1e-2] {
            let rho = DensityOperator::basis(3, 0)
                .mix(&DensityOperator::basis(3, 1), eps)
                .unwrap();
            let bias = entropy_bias(&j, &rho).unwrap();
            let sb = xlog(0.7 * (1.0 - eps)) + xlog(0.3 * (1.0 - eps)) + xlog(eps);
            let sc = xlog(0.7 * (1.0 - eps)) + xlog(0.3 + 0.7 * eps);
            assert!((bias.s_b - sb).abs() < 1e-12 && (bias.s_c - sc).abs() < 1e-12);
            assert!(bias.delta > 0.0);
        }
    }

    #[test]
    fn bias_is_additive_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let j1 = random::random_isometry(&mut rng, 2, 2, 3);
            let j2 = random::random_isometry(&mut rng, 3, 3, 2);
            let r1 = random::random_density(&mut rng, 2);
            let r2 = random::random_density(&mut rng, 3);
            let joint = entropy_bias(&tensor_pair(&j1, &j2), &r1.tensor(&r2)).unwrap();
            let sum = entropy_bias(&j1, &r1).unwrap().delta + entropy_bias(&j2, &r2).unwrap().delta;
            assert!((joint.delta - sum).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_spectra_match_outputs() {
        let j = Isometry::identity_like(3);
        assert_eq!(
            output_spectra_pure(&j, &linalg::basis_vector(3, 1)).unwrap(),
            vec![1.0]
        );

        let j = build_pedagogic(0.3).unwrap();
        let spec = output_spectra_pure(&j, &linalg::basis_vector(3, 0)).unwrap();
        assert!((spec[0] - 0.7).abs() < 1e-14 && (spec[1] - 0.3).abs() < 1e-14 && spec.len() == 2);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let j = random::random_isometry(&mut rng, 3, 3, 2);
            let psi = random::random_pure(&mut rng, 3);
            let spec = output_spectra_pure(&j, &psi).unwrap();
            let (b, cc) = j.outputs(&DensityOperator::pure(&psi).unwrap()).unwrap();
            for out in [b, cc] {
                let ev: Vec<f64> = out
                    .eigenvalues()
                    .into_iter()
                    .filter(|&x| x > RANK_TOL)
                    .collect();
                assert_eq!(ev.len(), spec.len());
                for (x, y) in ev.iter().zip(&spec) {
                    assert!((x - y).abs() <= 1e-10);
                }
            }
        }
        let bad = ComplexVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            output_spectra_pure(&j, &bad),
            Err(Error::NotNormalized { .. })
        ));
    }

    proptest! {
        #[test]
        fn entropy_additive_on_products(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::random_density(&mut rng, d1);
            let b = random::random_density(&mut rng, d2);
            let sa = von_neumann_entropy(&a, ENTROPY_CUTOFF).unwrap();
            let sb = von_neumann_entropy(&b, ENTROPY_CUTOFF).unwrap();
            let sab = von_neumann_entropy(&a.tensor(&b), ENTROPY_CUTOFF).unwrap();
            prop_assert!((sab - sa - sb).abs() <= 1e-9);
        }

        #[test]
        fn entropy_concave(seed in any::<u64>(), d in 2usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::random_density_rank(&mut rng, d, 1 + (seed as usize) % d);
            let b = random::random_density(&mut rng, d);
            let mid = a.mix(&b, 0.5).unwrap();
            let s = |r: &DensityOperator| von_neumann_entropy(r, ENTROPY_CUTOFF).unwrap();
            prop_assert!(s(&mid) + 1e-12 >= 0.5 * s(&a) + 0.5 * s(&b));
            prop_assert!(s(&b) <= (d as f64).log2() + 1e-12);
        }
    }
}
