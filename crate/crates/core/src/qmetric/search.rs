//! Derivative-free local maximizer used by the metric searches.
//!
//! Each start runs forward-difference gradient ascent with backtracking and
//! then a coordinate pattern search with shrinking steps. Starts are
//! evaluated in parallel and reduced in start order, so results do not
//! depend on scheduling.

use rayon::prelude::*;

pub(crate) struct SearchOutcome {
    pub x: Vec<f64>,
    pub value: f64,
}

fn unit(mut x: Vec<f64>) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    x
}

/// Maximizes a scale-invariant objective from each start; iterates are
/// kept on the unit sphere.
pub(crate) fn maximize<F>(f: &F, starts: Vec<Vec<f64>>, iterations: usize) -> SearchOutcome
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let runs: Vec<SearchOutcome> = starts
        .into_par_iter()
        .map(|x0| local_ascent(f, unit(x0), iterations))
        .collect();
    runs.into_iter()
        .fold(None::<SearchOutcome>, |best, r| match best {
            Some(b) if b.value >= r.value => Some(b),
            _ => Some(r),
        })
        .unwrap_or(SearchOutcome {
            x: Vec::new(),
            value: f64::NEG_INFINITY,
        })
}

fn local_ascent<F: Fn(&[f64]) -> f64>(f: &F, mut x: Vec<f64>, iterations: usize) -> SearchOutcome {
    let k = x.len();
    let mut value = f(&x);
    if !value.is_finite() {
        value = f64::NEG_INFINITY;
    }
    let mut step = 0.25;
    let h = 1e-7;
    for _ in 0..iterations {
        let mut grad = vec![0.0; k];
        for i in 0..k {
            let mut xp = x.clone();
            xp[i] += h;
            grad[i] = (f(&xp) - value) / h;
        }
        let gn = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !(gn.is_finite() && gn > 0.0) {
            break;
        }
        let mut moved = false;
        while step > 1e-12 {
            let cand = unit(x.iter().zip(&grad).map(|(a, g)| a + step * g / gn).collect());
            let v = f(&cand);
            if v > value {
                x = cand;
                value = v;
                step *= 2.0;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }

    // pattern search polish
    let mut h = 0.1;
    let mut evals = 0usize;
    let max_evals = iterations.max(1) * 2 * k.max(1);
    while h > 1e-9 && evals < max_evals {
        let mut improved = false;
        for i in 0..k {
            for s in [h, -h] {
                let mut cand = x.clone();
                cand[i] += s;
                let cand = unit(cand);
                let v = f(&cand);
                evals += 1;
                if v > value {
                    x = cand;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    SearchOutcome { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_direction_of_linear_functional_on_l1_ball() {
        // max <c, x> / ‖x‖₁ = ‖c‖_∞
        let c = [0.3, -2.0, 1.1];
        let f = |x: &[f64]| {
            let l1: f64 = x.iter().map(|v| v.abs()).sum();
            x.iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() / l1
        };
        let out = maximize(&f, vec![vec![1.0, 1.0, 1.0], vec![0.2, 0.1, -0.4]], 100);
        assert!((out.value - 2.0).abs() < 1e-5, "{}", out.value);
    }
}
