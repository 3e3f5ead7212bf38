//! Derivative-free minimization by the Nelder-Mead simplex method.
//!
//! Constraints are expressed by the objective itself: any point where the
//! objective is not finite is treated as infeasible and never accepted. After
//! the simplex collapses, the search is restarted around the best vertex
//! until a restart no longer improves the minimum.

/// Outcome of a minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_evaluations: usize,
    /// Convergence when the spread of objective values over the simplex
    /// falls below this.
    pub f_tolerance: f64,
    /// ... and the simplex diameter falls below this.
    pub x_tolerance: f64,
    pub initial_step: f64,
    pub max_restarts: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evaluations: 20_000,
            f_tolerance: 1e-10,
            x_tolerance: 1e-7,
            initial_step: 0.25,
            max_restarts: 8,
        }
    }
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Counter<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

impl NelderMead {
    /// Minimizes `f` starting from `x0`. The starting point should be
    /// feasible; if it is not, the result reports an infinite value.
    pub fn minimize<F>(&self, f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        let mut counter = Counter { f, evaluations: 0 };
        let mut best_x = x0.to_vec();
        let mut best_f = counter.eval(x0);
        if x0.is_empty() || !best_f.is_finite() {
            return Minimum {
                x: best_x,
                value: best_f,
                iterations: 0,
                evaluations: counter.evaluations,
                converged: x0.is_empty() && best_f.is_finite(),
            };
        }

        let mut iterations = 0;
        let mut converged = false;
        for _ in 0..=self.max_restarts {
            let (x, fx, iters, ok) = self.run(&mut counter, &best_x, best_f);
            iterations += iters;
            let improvement = best_f - fx;
            if fx <= best_f {
                best_x = x;
                best_f = fx;
            }
            converged = ok;
            if !ok || improvement.abs() <= self.f_tolerance {
                break;
            }
        }
        Minimum { x: best_x, value: best_f, iterations, evaluations: counter.evaluations, converged }
    }

    fn initial_simplex<F: FnMut(&[f64]) -> f64>(
        &self,
        counter: &mut Counter<F>,
        x0: &[f64],
        f0: f64,
    ) -> (Vec<Vec<f64>>, Vec<f64>) {
        let n = x0.len();
        let mut points = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        points.push(x0.to_vec());
        values.push(f0);
        for i in 0..n {
            let mut step = self.initial_step;
            let mut vertex = x0.to_vec();
            let mut value = f64::INFINITY;
            // Try both directions, halving the step until a feasible vertex appears.
            'search: for _ in 0..40 {
                for sign in [1.0, -1.0] {
                    vertex[i] = x0[i] + sign * step;
                    value = counter.eval(&vertex);
                    if value.is_finite() {
                        break 'search;
                    }
                }
                step *= 0.5;
            }
            points.push(vertex);
            values.push(value);
        }
        (points, values)
    }

    fn run<F: FnMut(&[f64]) -> f64>(
        &self,
        counter: &mut Counter<F>,
        x0: &[f64],
        f0: f64,
    ) -> (Vec<f64>, f64, usize, bool) {
        let n = x0.len();
        let (mut pts, mut vals) = self.initial_simplex(counter, x0, f0);
        let mut order: Vec<usize> = (0..=n).collect();
        let mut iterations = 0;

        loop {
            order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
            let (best, worst, second) = (order[0], order[n], order[n - 1]);

            let spread = vals[worst] - vals[best];
            let diameter = order[1..]
                .iter()
                .map(|&j| {
                    pts[j]
                        .iter()
                        .zip(&pts[best])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread.is_finite() && spread <= self.f_tolerance && diameter <= self.x_tolerance {
                return (pts[best].clone(), vals[best], iterations, true);
            }
            if counter.evaluations >= self.max_evaluations {
                return (pts[best].clone(), vals[best], iterations, false);
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for &j in &order[..n] {
                for (c, x) in centroid.iter_mut().zip(&pts[j]) {
                    *c += x / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&pts[worst])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(REFLECT);
            let fr = counter.eval(&xr);
            if fr < vals[best] {
                let xe = along(REFLECT * EXPAND);
                let fe = counter.eval(&xe);
                if fe < fr {
                    pts[worst] = xe;
                    vals[worst] = fe;
                } else {
                    pts[worst] = xr;
                    vals[worst] = fr;
                }
                continue;
            }
            if fr < vals[second] {
                pts[worst] = xr;
                vals[worst] = fr;
                continue;
            }
            let (xc, fc) = if fr < vals[worst] {
                let xc = along(REFLECT * CONTRACT);
                let fc = counter.eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-CONTRACT);
                let fc = counter.eval(&xc);
                (xc, fc)
            };
            if fc < vals[worst].min(fr) {
                pts[worst] = xc;
                vals[worst] = fc;
                continue;
            }
            let anchor = pts[best].clone();
            for &j in &order[1..] {
                for (x, a) in pts[j].iter_mut().zip(&anchor) {
                    *x = a + SHRINK * (*x - a);
                }
                vals[j] = counter.eval(&pts[j]);
            }
        }
    }
}

/// Runs the optimizer from every start and keeps the lowest minimum. Ties go
/// to the earliest start, so the result depends only on the start order.
pub fn multistart<F>(optimizer: &NelderMead, mut f: F, starts: &[Vec<f64>]) -> Option<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut best: Option<Minimum> = None;
    let mut iterations = 0;
    let mut evaluations = 0;
    for x0 in starts {
        let m = optimizer.minimize(&mut f, x0);
        iterations += m.iterations;
        evaluations += m.evaluations;
        if best.as_ref().is_none_or(|b| m.value < b.value) {
            best = Some(m);
        }
    }
    best.map(|mut b| {
        b.iterations = iterations;
        b.evaluations = evaluations;
        b
    })
}
