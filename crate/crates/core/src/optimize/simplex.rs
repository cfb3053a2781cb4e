use alloc::vec::Vec;
use core::cell::Cell;

use crate::math;

/// Result of a downhill-simplex run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub best: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Largest distance from the best vertex to any other vertex at exit.
    pub diameter: f64,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Nelder-Mead maximization.
///
/// `f` returns `None` for infeasible points, which rank below every feasible value.
/// The initial simplex is `start` plus `start + step[i] e_i`. Stops when the simplex
/// diameter is at most `tol` or after `max_evals` evaluations. The returned point is
/// the best vertex ever evaluated.
pub fn nelder_mead_max<F>(
    mut f: F,
    start: &[f64],
    step: &[f64],
    tol: f64,
    max_evals: usize,
) -> SimplexOutcome
where
    F: FnMut(&[f64]) -> Option<f64>,
{
    let n = start.len();
    assert_eq!(step.len(), n, "one step per coordinate");
    let evaluations = Cell::new(0usize);
    let mut eval = |x: &[f64]| -> f64 {
        evaluations.set(evaluations.get() + 1);
        match f(x) {
            Some(v) if !v.is_nan() => v,
            _ => f64::NEG_INFINITY,
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += step[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let diameter = |s: &[(Vec<f64>, f64)]| -> f64 {
        s[1..]
            .iter()
            .map(|(x, _)| dist(x, &s[0].0))
            .fold(0.0, f64::max)
    };

    loop {
        // Best first; stable so earlier vertices win ties.
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(core::cmp::Ordering::Equal));
        if diameter(&simplex) <= tol || evaluations.get() >= max_evals {
            break;
        }

        let worst = simplex[n].clone();
        let mut centroid = alloc::vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(REFLECT);
        let fr = eval(&reflected);
        if fr > simplex[0].1 {
            let expanded = along(EXPAND);
            let fe = eval(&expanded);
            simplex[n] = if fe > fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        if fr > worst.1 {
            let x = along(CONTRACT);
            let v = eval(&x);
            if v >= fr {
                simplex[n] = (x, v);
                continue;
            }
        } else {
            let x = along(-CONTRACT);
            let v = eval(&x);
            if v > worst.1 {
                simplex[n] = (x, v);
                continue;
            }
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + SHRINK * (v - b))
                .collect();
            let v = eval(&x);
            *vertex = (x, v);
        }
    }

    let d = diameter(&simplex);
    let (best, value) = simplex.swap_remove(0);
    SimplexOutcome {
        best,
        value,
        evaluations: evaluations.get(),
        diameter: d,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    math::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_smooth_bowl() {
        let out = nelder_mead_max(
            |x| Some(-(x[0] - 1.0) * (x[0] - 1.0) - 2.0 * (x[1] + 0.5) * (x[1] + 0.5)),
            &[0.0, 0.0],
            &[0.5, 0.5],
            1e-9,
            10_000,
        );
        assert!((out.best[0] - 1.0).abs() < 1e-6);
        assert!((out.best[1] + 0.5).abs() < 1e-6);
        assert!(out.diameter <= 1e-9);
    }

    #[test]
    fn handles_kinked_one_dimensional_maximum() {
        let out = nelder_mead_max(
            |x| Some((x[0]).min(1.0 - x[0])),
            &[0.1],
            &[0.05],
            1e-10,
            10_000,
        );
        assert!((out.best[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        let out = nelder_mead_max(
            |x| if x[0] > 0.7 { None } else { Some(x[0]) },
            &[0.0],
            &[0.1],
            1e-9,
            10_000,
        );
        assert!(out.best[0] <= 0.7 && out.best[0] > 0.7 - 1e-8);
    }

    #[test]
    fn respects_evaluation_budget() {
        let out = nelder_mead_max(|x| Some(x[0] + x[1]), &[0.0, 0.0], &[1.0, 1.0], 0.0, 50);
        assert!(out.evaluations <= 50 + 3);
    }
}
