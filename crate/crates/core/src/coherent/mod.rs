//! Maximization of the entropy bias and the qutrit / amplitude-damping
//! non-additivity analysis built on it.

mod nonadditivity;
mod qutrit;

pub use nonadditivity::{
    nonadditivity_family, nonadditivity_report, NonAdditivityReport, Verdict, DEFAULT_EPS_GRID,
    WIDE_EPS_GRID,
};
pub use qutrit::{
    appendix_c_reduction_check, binary_entropy, q1_qutrit, q1_qutrit_extended, q1_qutrit_family,
    reduction_check_against, threshold_csv, threshold_curve, threshold_point, QutritOptimum,
    ReductionCheck, ThresholdPoint, Q1_GRID_TOL, THRESHOLD_CSV_HEADER,
};

use serde::Serialize;

use crate::channels::Isometry;
use crate::entropy::entropy_bias;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, c, ComplexMatrix};
use crate::optimize::NelderMead;
use crate::random;
use crate::state::DensityOperator;

pub const DEFAULT_RESTARTS: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct OptimizationResult {
    /// Best bias found, in bits.
    pub value: f64,
    pub argmax: DensityOperator,
    pub restarts_used: usize,
    /// Best two restarts agree within the requested tolerance.
    pub converged: bool,
    /// Final value of every restart, warm starts first.
    pub restart_values: Vec<f64>,
    pub evaluations: usize,
}

/// Multi-start simplex maximization of `Δ(ρ)` over density operators.
///
/// States are parametrized as `ρ = V V† / Tr(V V†)` with an unconstrained
/// complex `d_a × d_a` matrix `V`. Restart `r` draws its starting `V` from
/// stream `r` of `seed`; warm starts, if any, run before the random restarts.
#[derive(Debug, Clone)]
pub struct BiasSearch {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    pub exec: Exec,
    pub simplex: NelderMead,
    pub warm_starts: Vec<DensityOperator>,
}

impl BiasSearch {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self {
            restarts,
            seed,
            tol: 1e-6,
            exec: Exec::default(),
            simplex: NelderMead::default(),
            warm_starts: Vec::new(),
        }
    }

    pub fn with_warm_start(mut self, rho: DensityOperator) -> Self {
        self.warm_starts.push(rho);
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn run(&self, j: &Isometry) -> Result<OptimizationResult> {
        if self.restarts == 0 && self.warm_starts.is_empty() {
            return Err(Error::OutOfRange {
                name: "restarts",
                value: 0.0,
                min: 1.0,
                max: f64::INFINITY,
            });
        }
        let d = j.d_a();
        if let Some(bad) = self.warm_starts.iter().find(|r| r.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.dim(),
            });
        }
        let n_warm = self.warm_starts.len();
        let total = n_warm + self.restarts;
        let runs = self.exec.map_range(total, |r| {
            let v0 = if r < n_warm {
                sqrt_psd(self.warm_starts[r].matrix())
            } else {
                let mut rng = random::indexed_rng(self.seed, (r - n_warm) as u64);
                random::ginibre(&mut rng, d, d)
            };
            let x0 = pack(&v0);
            let res = self.simplex.minimize(|x| -bias_at(j, x), &x0);
            (res.x, -res.value, res.evaluations, res.converged)
        });

        let mut best = 0;
        for (i, run) in runs.iter().enumerate() {
            if run.1 > runs[best].1 {
                best = i;
            }
        }
        let values: Vec<f64> = runs.iter().map(|r| r.1).collect();
        let converged = if values.len() >= 2 {
            let mut sorted = values.clone();
            sorted.sort_by(|a, b| b.total_cmp(a));
            sorted[0] - sorted[1] <= self.tol
        } else {
            runs[0].3
        };
        let argmax = unpack_state(&runs[best].0, d)?;
        let value = entropy_bias(j, &argmax)?.delta;
        Ok(OptimizationResult {
            value,
            argmax,
            restarts_used: total,
            converged,
            restart_values: values,
            evaluations: runs.iter().map(|r| r.2).sum(),
        })
    }
}

/// [`BiasSearch`] with default settings and the given restarts, seed and agreement tolerance.
pub fn maximize_bias(
    j: &Isometry,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<OptimizationResult> {
    let mut search = BiasSearch::new(restarts, seed);
    search.tol = tol;
    search.run(j)
}

fn pack(v: &ComplexMatrix) -> Vec<f64> {
    v.iter()
        .map(|z| z.re)
        .chain(v.iter().map(|z| z.im))
        .collect()
}

fn unpack(x: &[f64], d: usize) -> ComplexMatrix {
    let n = d * d;
    ComplexMatrix::from_iterator(d, d, (0..n).map(|k| c(x[k], x[n + k])))
}

fn unpack_state(x: &[f64], d: usize) -> Result<DensityOperator> {
    let v = unpack(x, d);
    let m = &v * v.adjoint();
    let t = linalg::trace_re(&m);
    if t.is_nan() || t <= 0.0 || t.is_infinite() {
        return Err(Error::NonFinite);
    }
    Ok(DensityOperator::from_psd_unchecked(m.unscale(t)))
}

fn bias_at(j: &Isometry, x: &[f64]) -> f64 {
    match unpack_state(x, j.d_a()).and_then(|rho| entropy_bias(j, &rho)) {
        Ok(b) => b.delta,
        Err(_) => f64::NEG_INFINITY,
    }
}

fn sqrt_psd(m: &ComplexMatrix) -> ComplexMatrix {
    let sp = linalg::hermitian_spectrum(m, 0.0).expect("density operator is square");
    let mut out = ComplexMatrix::zeros(m.nrows(), m.ncols());
    for (k, &lam) in sp.eigenvalues.iter().enumerate() {
        let v = sp.eigenvectors.column(k);
        out += (v * v.adjoint()).scale(lam.max(0.0).sqrt());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{build_amplitude_damping, build_erasure, build_qutrit};

    #[test]
    fn pack_round_trip_and_sqrt() {
        let mut rng = random::indexed_rng(3, 0);
        let rho = random::random_density(&mut rng, 3);
        let v = sqrt_psd(rho.matrix());
        assert!(linalg::max_abs(&(&v * &v - rho.matrix())) < 1e-12);
        let back = unpack_state(&pack(&v), 3).unwrap();
        assert!(linalg::max_abs(&(back.matrix() - rho.matrix())) < 1e-12);
    }

    #[test]
    fn erasure_value() {
        let j = build_erasure(0.75).unwrap();
        let r = maximize_bias(&j, 4, 1, 1e-6).unwrap();
        assert!((r.value - 0.5).abs() < 1e-4, "{}", r.value);
        assert!((entropy_bias(&j, &r.argmax).unwrap().delta - r.value).abs() <= 1e-8);
    }

    #[test]
    fn antidegradable_amplitude_damping() {
        let r = maximize_bias(&build_amplitude_damping(0.6).unwrap(), 4, 2, 1e-6).unwrap();
        assert!(r.value <= 1e-6);
    }

    #[test]
    fn warm_start_is_never_worse() {
        let j = build_qutrit(0.3).unwrap();
        let warm = DensityOperator::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        let start = entropy_bias(&j, &warm).unwrap().delta;
        let r = BiasSearch::new(0, 0).with_warm_start(warm).run(&j).unwrap();
        assert!(r.value >= start);
        assert_eq!(r.restarts_used, 1);
    }

    #[test]
    fn rejects_empty_search() {
        assert!(maximize_bias(&build_qutrit(0.1).unwrap(), 0, 0, 1e-6).is_err());
    }

    #[test]
    fn modes_agree() {
        let j = build_qutrit(0.2).unwrap();
        let a = BiasSearch::new(3, 5)
            .with_exec(Exec::Sequential)
            .run(&j)
            .unwrap();
        let b = BiasSearch::new(3, 5)
            .with_exec(Exec::Parallel)
            .run(&j)
            .unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
