//! One-parameter reduction of the qutrit channel and the non-additivity threshold.

use std::fmt::Write as _;

use serde::Serialize;

use crate::channels::{build_qutrit, Isometry};
use crate::entropy::entropy_bias;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{c, ComplexVector};
use crate::optimize::golden_section_max;
use crate::random;
use crate::state::DensityOperator;

/// Bracket width at which the golden-section search over `w` stops.
pub const Q1_GRID_TOL: f64 = 1e-10;
pub const THRESHOLD_CSV_HEADER: &str = "s,w_star,k,p_bar";

/// `h(x) = -x log₂ x - (1-x) log₂(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |y: f64| if y > 0.0 { -y * y.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QutritOptimum {
    pub value: f64,
    pub w_star: f64,
    /// The bias changes by less than `1e-12` within `±1e-4` of `w_star`.
    pub flat: bool,
}

fn check_s(s: f64, max: f64) -> Result<()> {
    if !(0.0..=max).contains(&s) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            min: 0.0,
            max,
        });
    }
    Ok(())
}

/// `(1-w)[0] + w[φ_z]` with `φ_z` the real unit vector in span{|1⟩, |2⟩}
/// of Bloch coordinate `z` (`z = 1` is `|1⟩`, `z = -1` is `|2⟩`).
fn family_state(w: f64, z: f64) -> DensityOperator {
    let phi = ComplexVector::from_vec(vec![
        c(0.0, 0.0),
        c(((1.0 + z) / 2.0).max(0.0).sqrt(), 0.0),
        c(((1.0 - z) / 2.0).max(0.0).sqrt(), 0.0),
    ]);
    DensityOperator::basis(3, 0)
        .mix(&DensityOperator::pure(&phi).expect("unit vector"), w)
        .expect("w in [0, 1]")
}

fn maximize_family(j: &Isometry, z: f64, grid_tol: f64) -> QutritOptimum {
    let f = |w: f64| {
        entropy_bias(j, &family_state(w, z))
            .map(|b| b.delta)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let best = golden_section_max(f, 0.0, 1.0, grid_tol);
    let probe = 1e-4;
    let flat = [best.x - probe, best.x + probe]
        .iter()
        .filter(|w| (0.0..=1.0).contains(*w))
        .all(|&w| (f(w) - best.value).abs() < 1e-12);
    QutritOptimum {
        value: best.value,
        w_star: best.x,
        flat,
    }
}

/// Maximum of `Δ` over `(1-w)[0] + w[φ_z]` for the qutrit channel at any `s ∈ [0, 1]`.
pub fn q1_qutrit_family(s: f64, z: f64, grid_tol: f64) -> Result<QutritOptimum> {
    check_s(s, 1.0)?;
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::OutOfRange {
            name: "z",
            value: z,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(maximize_family(&build_qutrit(s)?, z, grid_tol))
}

/// Coherent information of the qutrit channel from the family `(1-w)[0] + w[1]`, `s ∈ [0, 1/2]`.
pub fn q1_qutrit(s: f64, grid_tol: f64) -> Result<QutritOptimum> {
    check_s(s, 0.5)?;
    q1_qutrit_family(s, 1.0, grid_tol)
}

/// [`q1_qutrit`] continued to `s ∈ [0, 1]`: the better of the `[1]` and `[2]` families.
/// Ties keep the `[1]` family.
pub fn q1_qutrit_extended(s: f64, grid_tol: f64) -> Result<QutritOptimum> {
    let a = q1_qutrit_family(s, 1.0, grid_tol)?;
    let b = q1_qutrit_family(s, -1.0, grid_tol)?;
    Ok(if b.value > a.value { b } else { a })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionCheck {
    pub bound: f64,
    pub max_sampled: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Samples input states of the qutrit channel and checks `Δ(ρ) <= bound + 1e-8`.
///
/// Even-indexed samples are full-rank Ginibre states; odd-indexed samples mix
/// a random state into the family optimum at weight `t ∈ (0, 0.1)` to probe
/// its neighbourhood. Sample `i` uses stream `i` of `seed`.
pub fn reduction_check_against(
    s: f64,
    z: f64,
    bound: f64,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<ReductionCheck> {
    let j = build_qutrit(s)?;
    let center = family_state(q1_qutrit_family(s, z, Q1_GRID_TOL)?.w_star, z);
    let values = exec.map_range(samples, |i| {
        let mut rng = random::indexed_rng(seed, i as u64);
        let sample = random::random_density(&mut rng, 3);
        let rho = if i % 2 == 0 {
            sample
        } else {
            let t = 0.1 * rand::Rng::random::<f64>(&mut rng);
            center.mix(&sample, t).expect("t in [0, 1]")
        };
        entropy_bias(&j, &rho).map(|b| b.delta)
    });
    let mut max_sampled = f64::NEG_INFINITY;
    for v in values {
        max_sampled = max_sampled.max(v?);
    }
    Ok(ReductionCheck {
        bound,
        max_sampled,
        samples,
        passed: max_sampled <= bound + 1e-8,
    })
}

/// Empirical check that no sampled qutrit input beats [`q1_qutrit`].
pub fn appendix_c_reduction_check(s: f64, samples: usize, seed: u64) -> Result<bool> {
    let bound = q1_qutrit(s, Q1_GRID_TOL)?.value;
    Ok(reduction_check_against(s, 1.0, bound, samples, seed, Exec::default())?.passed)
}

/// One row of the non-additivity threshold curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub s: f64,
    pub w_star: f64,
    pub k: f64,
    pub p_bar: f64,
}

pub fn threshold_point(s: f64) -> Result<ThresholdPoint> {
    let w = q1_qutrit(s, Q1_GRID_TOL)?.w_star;
    let rest = (1.0 - s) * (1.0 - w);
    let k = rest / (w + rest);
    Ok(ThresholdPoint {
        s,
        w_star: w,
        k,
        p_bar: 1.0 / (1.0 + k),
    })
}

/// Threshold `p̄(s) = 1/(1+k)` per grid point, in grid order.
pub fn threshold_curve(s_grid: &[f64], exec: Exec) -> Result<Vec<ThresholdPoint>> {
    exec.map_slice(s_grid, |&s| threshold_point(s))
        .into_iter()
        .collect()
}

/// CSV with header `s,w_star,k,p_bar`; floats use the shortest round-trip form.
pub fn threshold_csv(points: &[ThresholdPoint]) -> String {
    let mut out = String::from(THRESHOLD_CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(out, "{},{},{},{}", p.s, p.w_star, p.k, p.p_bar);
    }
    out
}
