//! Derivative-free multi-start ascent for scale-invariant objectives.
//!
//! Every supremum over a unit sphere in this crate (operator norms, numerical
//! radii, dual norms of non-polyhedral spaces) is phrased as maximizing a
//! function `h` with `h(c·x) = h(x)` for `c > 0`, so the search runs in plain
//! real coordinates and renormalizes after each move. The objectives are
//! often nonsmooth (sup norms, polyhedral faces), hence compass search with
//! random polling rather than gradients.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone)]
pub struct AscentOptions {
    /// Number of candidates that receive a full local search.
    pub local_searches: usize,
    pub initial_step: f64,
    pub step_tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
    /// Stop as soon as the objective reaches this value.
    pub target: Option<f64>,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            local_searches: 8,
            initial_step: 0.3,
            step_tol: 1e-10,
            max_sweeps: 4000,
            seed: 0,
            target: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentOutcome {
    pub value: f64,
    pub point: Vec<f64>,
    pub evaluations: usize,
    pub local_searches: usize,
}

fn unit(v: &mut [f64]) -> bool {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

fn score(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Ranks `candidates` by objective value and runs compass search from the
/// best `opts.local_searches` of them. Ties in the ranking keep candidate
/// order, so the result depends only on the inputs and the seed.
pub fn maximize_scale_invariant<F>(
    mut f: F,
    candidates: Vec<Vec<f64>>,
    opts: &AscentOptions,
) -> AscentOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let mut evaluations = 0usize;
    let mut ranked: Vec<(f64, Vec<f64>)> = candidates
        .into_iter()
        .filter_map(|mut c| {
            if !unit(&mut c) {
                return None;
            }
            evaluations += 1;
            Some((score(f(&c)), c))
        })
        .collect();
    ranked.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_a5ce);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let reached = |v: f64| opts.target.is_some_and(|t| v >= t);
    let mut searches = 0;
    for (start_value, start) in ranked.iter().take(opts.local_searches) {
        if reached(best.0) || reached(*start_value) {
            break;
        }
        searches += 1;
        let (v, x, evals) = compass_search(&mut f, start.clone(), *start_value, opts, &mut rng);
        evaluations += evals;
        if v > best.0 {
            best = (v, x);
        }
    }
    // Candidates that were only ranked still count as lower bounds.
    if let Some((v, x)) = ranked.first() {
        if *v > best.0 {
            best = (*v, x.clone());
        }
    }
    AscentOutcome {
        value: best.0,
        point: best.1,
        evaluations,
        local_searches: searches,
    }
}

fn compass_search<F>(
    f: &mut F,
    mut x: Vec<f64>,
    mut fx: f64,
    opts: &AscentOptions,
    rng: &mut ChaCha8Rng,
) -> (f64, Vec<f64>, usize)
where
    F: FnMut(&[f64]) -> f64,
{
    let d = x.len();
    let mut step = opts.initial_step;
    let mut evals = 0usize;
    let mut trial = vec![0.0; d];
    let mut dir = vec![0.0; d];
    let mut sweeps = 0usize;
    let mut streak = 0usize;
    while step > opts.step_tol && sweeps < opts.max_sweeps && !opts.target.is_some_and(|t| fx >= t)
    {
        sweeps += 1;
        let mut improved = false;
        for k in 0..d {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                trial[k] += sign * step;
                if !unit(&mut trial) {
                    continue;
                }
                evals += 1;
                let v = score(f(&trial));
                if v > fx {
                    fx = v;
                    x.copy_from_slice(&trial);
                    improved = true;
                }
            }
        }
        if !improved {
            // Random polling escapes ridges where no coordinate direction ascends.
            for _ in 0..d.max(2) {
                for z in dir.iter_mut() {
                    *z = StandardNormal.sample(rng);
                }
                unit(&mut dir);
                for sign in [1.0, -1.0] {
                    for (t, (xi, di)) in trial.iter_mut().zip(x.iter().zip(dir.iter())) {
                        *t = xi + sign * step * di;
                    }
                    if !unit(&mut trial) {
                        continue;
                    }
                    evals += 1;
                    let v = score(f(&trial));
                    if v > fx {
                        fx = v;
                        x.copy_from_slice(&trial);
                        improved = true;
                    }
                }
            }
        }
        if improved {
            streak += 1;
            if streak >= 2 {
                step = (step * 2.0).min(opts.initial_step);
                streak = 0;
            }
        } else {
            streak = 0;
            step *= 0.5;
        }
    }
    (fx, x, evals)
}
