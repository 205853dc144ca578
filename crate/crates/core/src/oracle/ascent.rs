//! Gradient-free local ascent.
//!
//! The oracles must stay independent of the closed forms they check, so the
//! climber never sees the objective's algebraic structure: gradients are
//! estimated by central differences and steps are chosen by backtracking
//! line search. The stop rule is a flat objective: improvement below
//! `min_improvement` over `window` consecutive iterations.

#[derive(Debug, Clone)]
pub struct AscentOptions {
    /// Central-difference step.
    pub grad_step: f64,
    /// Iterations the objective may stay flat before stopping.
    pub window: usize,
    /// Improvement that resets the flatness window.
    pub min_improvement: f64,
    /// Hard iteration cap.
    pub max_iters: usize,
    /// Initial line-search step length.
    pub init_step: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self { grad_step: 1e-5, window: 50, min_improvement: 1e-10, max_iters: 4000, init_step: 0.25 }
    }
}

/// Climb from `x0`; returns the best value and its parameter vector.
pub fn maximize(f: impl Fn(&[f64]) -> f64, x0: Vec<f64>, opts: &AscentOptions) -> (f64, Vec<f64>) {
    let mut x = x0;
    let n = x.len();
    let mut fx = f(&x);
    let mut step = opts.init_step;
    let mut anchor = fx;
    let mut stale = 0usize;
    let mut grad = vec![0.0f64; n];

    for _ in 0..opts.max_iters {
        let mut gnorm_sq = 0.0;
        for i in 0..n {
            let xi = x[i];
            x[i] = xi + opts.grad_step;
            let fp = f(&x);
            x[i] = xi - opts.grad_step;
            let fm = f(&x);
            x[i] = xi;
            let g = (fp - fm) / (2.0 * opts.grad_step);
            grad[i] = g;
            gnorm_sq += g * g;
        }
        let gnorm = gnorm_sq.sqrt();

        let mut improved = false;
        if gnorm > 1e-14 {
            let mut s = step;
            for _ in 0..40 {
                let candidate: Vec<f64> =
                    x.iter().zip(&grad).map(|(xi, gi)| xi + s * gi / gnorm).collect();
                let fc = f(&candidate);
                if fc > fx {
                    x = candidate;
                    fx = fc;
                    step = (s * 1.5).min(1.0);
                    improved = true;
                    break;
                }
                s *= 0.5;
                if s < 1e-12 {
                    break;
                }
            }
        }
        if !improved {
            step = (step * 0.5).max(1e-9);
        }

        if fx - anchor >= opts.min_improvement {
            anchor = fx;
            stale = 0;
        } else {
            stale += 1;
            if stale >= opts.window {
                break;
            }
        }
    }
    (fx, x)
}
