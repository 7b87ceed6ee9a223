//! Derivative-free scalar and simplex search.

/// Result of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMax {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is narrower than `xtol`.
///
/// When the two interior probes tie, the left sub-interval is kept, so flat
/// maxima resolve toward smaller `x`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> ScalarMax {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 2;
    while b - a > xtol && evaluations < 10_000 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
    }
    if f1 >= f2 {
        ScalarMax {
            x: x1,
            value: f1,
            evaluations,
        }
    } else {
        ScalarMax {
            x: x2,
            value: f2,
            evaluations,
        }
    }
}

/// Nelder–Mead simplex minimizer with dimension-adaptive coefficients.
///
/// After the simplex collapses the search restarts from the best vertex with a
/// fresh simplex, and stops once a restart fails to improve by more than `ftol`.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub step: f64,
    pub ftol: f64,
    pub xtol: f64,
    pub max_evals: usize,
    pub max_rebuilds: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            step: 0.3,
            ftol: 1e-12,
            xtol: 1e-10,
            max_evals: 200_000,
            max_rebuilds: 30,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F: FnMut(&[f64]) -> f64>(&self, mut f: F, x0: &[f64]) -> SimplexResult {
        let mut best_x = x0.to_vec();
        let mut best = f(&best_x);
        let mut evaluations = 1;
        let mut converged = false;
        let mut step = self.step;
        for _ in 0..self.max_rebuilds {
            let budget = self.max_evals.saturating_sub(evaluations);
            if budget == 0 {
                break;
            }
            let (x, value, used, collapsed) = self.run(&mut f, &best_x, step, budget);
            evaluations += used;
            let improvement = best - value;
            if value < best {
                best = value;
                best_x = x;
            }
            if collapsed && improvement <= self.ftol {
                converged = true;
                break;
            }
            step = (step * 0.5).max(1e-4);
        }
        SimplexResult {
            x: best_x,
            value: best,
            evaluations,
            converged,
        }
    }

    fn run<F: FnMut(&[f64]) -> f64>(
        &self,
        f: &mut F,
        x0: &[f64],
        step: f64,
        budget: usize,
    ) -> (Vec<f64>, f64, usize, bool) {
        let n = x0.len();
        let nf = n as f64;
        let alpha = 1.0;
        let gamma = 1.0 + 2.0 / nf;
        let rho = 0.75 - 1.0 / (2.0 * nf);
        let sigma = 1.0 - 1.0 / nf;

        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        simplex.push(x0.to_vec());
        for i in 0..n {
            let mut v = x0.to_vec();
            v[i] += if v[i].abs() > 1e-3 {
                step * v[i].abs().max(0.1)
            } else {
                step
            };
            simplex.push(v);
        }
        let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
        let mut evals = n + 1;

        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];
        loop {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let fspread = values[n] - values[0];
            let xspread = simplex[1..]
                .iter()
                .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if (fspread <= self.ftol && xspread <= self.xtol.max(1e-6)) || xspread <= self.xtol {
                return (simplex[0].clone(), values[0], evals, true);
            }
            if evals >= budget {
                return (simplex[0].clone(), values[0], evals, false);
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / nf;
                }
            }
            let worst = simplex[n].clone();
            for k in 0..n {
                trial[k] = centroid[k] + alpha * (centroid[k] - worst[k]);
            }
            let fr = f(&trial);
            evals += 1;
            if fr < values[0] {
                for k in 0..n {
                    trial2[k] = centroid[k] + gamma * (trial[k] - centroid[k]);
                }
                let fe = f(&trial2);
                evals += 1;
                if fe < fr {
                    simplex[n].copy_from_slice(&trial2);
                    values[n] = fe;
                } else {
                    simplex[n].copy_from_slice(&trial);
                    values[n] = fr;
                }
                continue;
            }
            if fr < values[n - 1] {
                simplex[n].copy_from_slice(&trial);
                values[n] = fr;
                continue;
            }
            // contraction, outside if the reflection beat the worst vertex
            let outside = fr < values[n];
            for k in 0..n {
                trial2[k] = if outside {
                    centroid[k] + rho * (trial[k] - centroid[k])
                } else {
                    centroid[k] + rho * (worst[k] - centroid[k])
                };
            }
            let fc = f(&trial2);
            evals += 1;
            if (outside && fc <= fr) || (!outside && fc < values[n]) {
                simplex[n].copy_from_slice(&trial2);
                values[n] = fc;
                continue;
            }
            let best = simplex[0].clone();
            for i in 1..=n {
                for k in 0..n {
                    simplex[i][k] = best[k] + sigma * (simplex[i][k] - best[k]);
                }
                values[i] = f(&simplex[i]);
            }
            evals += n;
        }
    }
}
