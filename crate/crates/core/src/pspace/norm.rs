//! Certified p→p operator norms.
//!
//! For `p ∈ {1, 2}` the norm is computed exactly (column sums, largest
//! singular value). For other `p` the result is an interval: the lower end
//! is the best value of a multi-start generalized power iteration together
//! with random probes, the upper end is the smallest Riesz–Thorin
//! interpolation bound available from the exact `1`, `2` and `∞` norms.

use bitflags::bitflags;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{counting_norm, to_counting, OperatorMatrix, PExponent};
use crate::error::{Error, Result};
use crate::linalg::{self, phase, random_complex_vector, stream_rng};
use crate::{CMatrix, CVector, Complex64};

bitflags! {
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
    pub struct NormMethod: u8 {
        const EXACT_P1 = 0b0_0001;
        const EXACT_P2 = 0b0_0010;
        const POWER_ITERATION = 0b0_0100;
        const INTERPOLATION = 0b0_1000;
        const ORACLE = 0b1_0000;
    }
}

impl NormMethod {
    pub fn label(self) -> String {
        let names: Vec<&str> = self
            .iter_names()
            .map(|(name, _)| match name {
                "EXACT_P1" => "exact-p1",
                "EXACT_P2" => "exact-p2",
                "POWER_ITERATION" => "power-iteration",
                "INTERPOLATION" => "interpolation",
                _ => "oracle",
            })
            .collect();
        names.join("+")
    }
}

/// Settings for the iterative norm estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            starts: 16,
            iterations: 200,
            tolerance: 1e-12,
            seed: 0,
        }
    }
}

impl Budget {
    pub fn with_seed(seed: u64) -> Self {
        Budget {
            seed,
            ..Budget::default()
        }
    }
}

/// Interval `[lower, upper]` containing an operator norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub method: NormMethod,
}

impl NormEstimate {
    pub fn exact(value: f64, method: NormMethod) -> Self {
        NormEstimate {
            lower: value,
            upper: value,
            method,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method
            .intersects(NormMethod::EXACT_P1 | NormMethod::EXACT_P2)
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Norm of `a` as a map `L^p(domain) → L^p(codomain)`.
pub fn op_norm(a: &OperatorMatrix, p: PExponent, budget: &Budget) -> Result<NormEstimate> {
    op_norm_with_starts(a, p, budget, &[]).map(|(est, _)| est)
}

/// Certified upper end of [`op_norm`] without running the power iteration.
/// Exact for `p ∈ {1, 2}`.
pub fn op_norm_upper(a: &OperatorMatrix, p: PExponent) -> f64 {
    let tilde = to_counting(a, p);
    if p.is_one() {
        linalg::max_col_sum(&tilde)
    } else if p.is_two() {
        linalg::spectral_norm(&tilde)
    } else {
        interpolation_upper(&tilde, p.value())
    }
}

/// Like [`op_norm`], with extra start vectors (domain coordinates) for the
/// power iteration. Also returns a unit vector in domain coordinates whose
/// image norm equals the lower bound.
pub fn op_norm_with_starts(
    a: &OperatorMatrix,
    p: PExponent,
    budget: &Budget,
    extra_starts: &[CVector],
) -> Result<(NormEstimate, CVector)> {
    let tilde = to_counting(a, p);
    let n = tilde.ncols();
    let inv_p = 1.0 / p.value();
    let to_domain = |x: &CVector| -> CVector {
        CVector::from_fn(n, |i, _| x[i] * a.domain().weights()[i].powf(-inv_p))
    };

    if p.is_one() {
        let (j, value) = best_column(&tilde, 1.0);
        let witness = to_domain(&unit(n, j));
        return Ok((NormEstimate::exact(value, NormMethod::EXACT_P1), witness));
    }
    if p.is_two() {
        let (value, x) = top_singular(&tilde);
        return Ok((
            NormEstimate::exact(value, NormMethod::EXACT_P2),
            to_domain(&x),
        ));
    }
    if budget.starts == 0 {
        return Err(Error::ZeroBudget);
    }

    let upper = interpolation_upper(&tilde, p.value());
    let weights = a.domain().weights();
    let starts: Vec<CVector> = extra_starts
        .iter()
        .filter(|s| s.len() == n)
        .map(|s| CVector::from_fn(n, |i, _| s[i] * weights[i].powf(inv_p)))
        .collect();
    let (lower, x) = power_lower(&tilde, p, budget, &starts);

    let lower = lower.min(upper);
    let estimate = NormEstimate {
        lower,
        upper,
        method: NormMethod::POWER_ITERATION | NormMethod::INTERPOLATION,
    };
    Ok((estimate, to_domain(&x)))
}

fn unit(n: usize, j: usize) -> CVector {
    let mut e = CVector::zeros(n);
    if n > 0 {
        e[j] = Complex64::new(1.0, 0.0);
    }
    e
}

/// Column with the largest counting p-norm.
fn best_column(a: &CMatrix, p: f64) -> (usize, f64) {
    let mut best = (0, 0.0);
    for (j, col) in a.column_iter().enumerate() {
        let v: Vec<Complex64> = col.iter().copied().collect();
        let nv = counting_norm(&v, p);
        if nv > best.1 {
            best = (j, nv);
        }
    }
    best
}

fn top_singular(a: &CMatrix) -> (f64, CVector) {
    let n = a.ncols();
    if a.is_empty() {
        return (0.0, CVector::zeros(n));
    }
    let svd = a.clone().svd(false, true);
    let (k, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |acc, (i, s)| if *s > acc.1 { (i, *s) } else { acc });
    let v_t = svd.v_t.expect("v_t requested");
    let x = v_t.row(k).adjoint();
    (s, x)
}

/// `min` of the Riesz–Thorin bounds through the exact 1, 2 and ∞ norms.
pub(crate) fn interpolation_upper(a: &CMatrix, p: f64) -> f64 {
    let n1 = linalg::max_col_sum(a);
    let ninf = linalg::max_row_sum(a);
    let mut upper = n1.powf(1.0 / p) * ninf.powf(1.0 - 1.0 / p);
    let n2 = linalg::spectral_norm(a);
    let two_sided = if p < 2.0 {
        let theta = 2.0 * (1.0 - 1.0 / p);
        n1.powf(1.0 - theta) * n2.powf(theta)
    } else {
        let theta = 1.0 - 2.0 / p;
        n2.powf(1.0 - theta) * ninf.powf(theta)
    };
    upper = upper.min(two_sided);
    if p == 2.0 {
        upper = upper.min(n2);
    }
    upper
}

/// `x_i ↦ |x_i|^{r−1} phase(x_i)`, scaled by the largest modulus first.
fn dual_map(x: &CVector, r: f64) -> CVector {
    let s = x.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if s == 0.0 {
        return x.clone();
    }
    x.map(|z| phase(z) * (z.norm() / s).powf(r - 1.0))
}

fn normalized(x: CVector, p: f64) -> Option<CVector> {
    let nx = counting_norm(x.as_slice(), p);
    (nx > 0.0 && nx.is_finite()).then(|| x.unscale(nx))
}

fn image_norm(a: &CMatrix, x: &CVector, p: f64) -> f64 {
    counting_norm((a * x).as_slice(), p)
}

fn power_iterate(
    a: &CMatrix,
    ah: &CMatrix,
    start: CVector,
    p: f64,
    q: f64,
    iterations: usize,
    tol: f64,
) -> (f64, CVector) {
    let Some(mut x) = normalized(start.clone(), p) else {
        return (0.0, start);
    };
    let mut best = image_norm(a, &x, p);
    let mut best_x = x.clone();
    let mut prev = best;
    for _ in 0..iterations {
        let y = a * &x;
        let z = ah * dual_map(&y, p);
        let Some(next) = normalized(dual_map(&z, q), p) else {
            break;
        };
        let value = image_norm(a, &next, p);
        if value > best {
            best = value;
            best_x = next.clone();
        }
        if (value - prev).abs() <= tol * value {
            break;
        }
        prev = value;
        x = next;
    }
    (best, best_x)
}

fn power_lower(a: &CMatrix, p: PExponent, budget: &Budget, extra: &[CVector]) -> (f64, CVector) {
    let n = a.ncols();
    let pv = p.value();
    let q = p.conjugate();
    let ah = a.adjoint();

    // deterministic candidates first: best column, the all-ones vector
    let (j, col_value) = best_column(a, pv);
    let mut best = (col_value, unit(n, j));

    let mut starts: Vec<CVector> = Vec::with_capacity(budget.starts + extra.len() + 2);
    starts.push(unit(n, j));
    starts.push(CVector::from_element(n, Complex64::new(1.0, 0.0)));
    starts.extend(extra.iter().cloned());
    let fixed = starts.len();

    let runs: Vec<(f64, CVector)> = (0..fixed + budget.starts)
        .into_par_iter()
        .map(|i| {
            let start = if i < fixed {
                starts[i].clone()
            } else {
                random_complex_vector(&mut stream_rng(budget.seed, i as u64), n)
            };
            power_iterate(a, &ah, start, pv, q, budget.iterations, budget.tolerance)
        })
        .collect();

    let probes: Vec<(f64, CVector)> = (0..4 * budget.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(budget.seed ^ 0x005e_ed0f_9b0b, i as u64);
            let x = random_complex_vector(&mut rng, n);
            match normalized(x.clone(), pv) {
                Some(x) => (image_norm(a, &x, pv), x),
                None => (0.0, x),
            }
        })
        .collect();

    for cand in runs.into_iter().chain(probes) {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    best
}
