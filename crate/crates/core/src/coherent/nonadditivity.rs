//! Amplitude damping paired with the qutrit channel: a correlated input whose
//! direct-side log-singularity outruns the complement's.

use serde::Serialize;

use super::qutrit::{q1_qutrit, Q1_GRID_TOL};
use crate::channels::{build_qubit_family, build_qutrit, tensor_pair, Isometry};
use crate::entropy::entropy_bias;
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexVector};
use crate::singularity::{fitted_emergence_rate, FittedRate, StateFamily, DEFAULT_FIT_GRID};
use crate::state::DensityOperator;
use crate::RANK_TOL;

pub const DEFAULT_EPS_GRID: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Probe grid reaching the small `ε` needed when the two rates are close or
/// the complement output has small eigenvalues.
pub const WIDE_EPS_GRID: [f64; 9] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Nonadditive,
    NotShown,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonAdditivityReport {
    pub p: f64,
    pub s: f64,
    pub w_star: f64,
    pub k: f64,
    pub p_bar: f64,
    /// `(1-p) w*`.
    pub rate_b: f64,
    /// `p k w*`.
    pub rate_c: f64,
    pub fitted_b: FittedRate,
    pub fitted_c: FittedRate,
    /// Single-letter value of the qutrit channel; amplitude damping contributes 0 for `p >= 1/2`.
    pub q1_sum: f64,
    pub delta0: f64,
    pub delta_eps: f64,
    pub eps_used: f64,
    pub verdict: Verdict,
}

/// `(1-w)[00] + w[χ_ε]` with `χ_ε = √(1-ε)|01⟩ + √ε|12⟩` on qubit ⊗ qutrit.
pub fn nonadditivity_family(w: f64) -> Result<StateFamily> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::OutOfRange {
            name: "w",
            value: w,
            min: 0.0,
            max: 1.0,
        });
    }
    StateFamily::general(move |eps| {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::OutOfRange {
                name: "eps",
                value: eps,
                min: 0.0,
                max: 1.0,
            });
        }
        let mut chi = ComplexVector::zeros(6);
        chi[1] = c((1.0 - eps).sqrt(), 0.0);
        chi[5] = c(eps.sqrt(), 0.0);
        DensityOperator::basis(6, 0).mix(&DensityOperator::pure(&chi)?, w)
    })
}

fn null_rank(rho: &DensityOperator) -> usize {
    rho.dim() - rho.rank(RANK_TOL)
}

fn side_fit(j: &Isometry, family: &StateFamily, side: usize) -> Result<FittedRate> {
    let outputs = |eps: f64| -> Result<DensityOperator> {
        let (b, c) = j.outputs(&family.evaluate(eps)?)?;
        Ok(if side == 0 { b } else { c })
    };
    let base = outputs(0.0)?;
    fitted_emergence_rate(outputs, null_rank(&base), &DEFAULT_FIT_GRID)
}

/// Rates, biases and verdict for damping probability `p ∈ [1/2, 1]` and `s ∈ [0, 1/2]`.
pub fn nonadditivity_report(p: f64, s: f64, eps_grid: &[f64]) -> Result<NonAdditivityReport> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            min: 0.5,
            max: 1.0,
        });
    }
    if !(0.0..=0.5).contains(&s) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            min: 0.0,
            max: 0.5,
        });
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::InvalidGrid("eps values must lie in (0, 1]".into()));
    }

    let j = tensor_pair(&build_qubit_family(0.0, p)?, &build_qutrit(s)?);
    let q1 = q1_qutrit(s, Q1_GRID_TOL)?;
    let w = q1.w_star;
    let rest = (1.0 - s) * (1.0 - w);
    let k = rest / (w + rest);
    let rate_b = (1.0 - p) * w;
    let rate_c = p * k * w;

    let family = nonadditivity_family(w)?;
    let fitted_b = side_fit(&j, &family, 0)?;
    let fitted_c = side_fit(&j, &family, 1)?;

    let delta0 = entropy_bias(&j, family.base())?.delta;
    let (mut eps_used, mut delta_eps) = (eps_grid[0], f64::NEG_INFINITY);
    for &eps in eps_grid {
        let d = entropy_bias(&j, &family.evaluate(eps)?)?.delta;
        if d > delta_eps {
            delta_eps = d;
            eps_used = eps;
        }
    }
    let verdict = if rate_b > rate_c && delta_eps > delta0 + 1e-9 {
        Verdict::Nonadditive
    } else {
        Verdict::NotShown
    };
    Ok(NonAdditivityReport {
        p,
        s,
        w_star: w,
        k,
        p_bar: 1.0 / (1.0 + k),
        rate_b,
        rate_c,
        fitted_b,
        fitted_c,
        q1_sum: q1.value,
        delta0,
        delta_eps,
        eps_used,
        verdict,
    })
}
