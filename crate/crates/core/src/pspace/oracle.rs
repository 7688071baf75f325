//! Brute-force norm oracle for small operators.
//!
//! Works directly in weighted coordinates and shares no code with the power
//! iteration in `norm.rs`, so tests can use it as an independent check.

use super::{weighted_norm, OperatorMatrix, PExponent};
use crate::error::{Error, Result};
use crate::linalg::{phase, random_complex_vector, stream_rng};
use crate::{CVector, Complex64};

pub const ORACLE_MAX_DIM: usize = 4;

const GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
const RANDOM_STARTS: u64 = 32;
const ASCENT_STEPS: usize = 400;

/// Lower estimate of `‖a‖_{p→p}` by projected gradient ascent on the unit
/// p-sphere, started from a real grid and seeded random complex points.
pub fn oracle_norm(a: &OperatorMatrix, p: PExponent, seed: u64) -> Result<f64> {
    let n = a.domain().len();
    if n > ORACLE_MAX_DIM {
        return Err(Error::Precondition(format!(
            "oracle needs domain dimension <= {ORACLE_MAX_DIM}, got {n}"
        )));
    }
    let pv = p.value();
    let mut best = 0.0_f64;

    let mut idx = vec![0usize; n];
    loop {
        let x = CVector::from_fn(n, |i, _| Complex64::new(GRID[idx[i]], 0.0));
        best = best.max(ascend(a, x, pv));
        // odometer over the grid
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < GRID.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    for s in 0..RANDOM_STARTS {
        let x = random_complex_vector(&mut stream_rng(seed, s), n);
        best = best.max(ascend(a, x, pv));
    }
    Ok(best)
}

fn ratio(a: &OperatorMatrix, x: &CVector, p: f64) -> f64 {
    let nx = weighted_norm(x.as_slice(), a.domain().weights(), p);
    if nx == 0.0 {
        return 0.0;
    }
    let y = a.entries() * x;
    weighted_norm(y.as_slice(), a.codomain().weights(), p) / nx
}

fn project(a: &OperatorMatrix, x: CVector, p: f64) -> Option<CVector> {
    let nx = weighted_norm(x.as_slice(), a.domain().weights(), p);
    (nx > 0.0).then(|| x.unscale(nx))
}

fn ascend(a: &OperatorMatrix, x: CVector, p: f64) -> f64 {
    let Some(mut x) = project(a, x, p) else {
        return 0.0;
    };
    let mut value = ratio(a, &x, p);
    let mut step = 0.5;
    let cod_w = a.codomain().weights();
    for _ in 0..ASCENT_STEPS {
        let y = a.entries() * &x;
        let weighted = CVector::from_fn(y.len(), |i, _| {
            phase(y[i]) * cod_w[i] * y[i].norm().powf(p - 1.0)
        });
        let g = a.entries().adjoint() * weighted;
        let gn = g.norm();
        if gn == 0.0 {
            break;
        }
        let dir = g.unscale(gn);
        let mut improved = false;
        while step > 1e-14 {
            if let Some(cand) = project(a, &x + dir.scale(step), p) {
                let v = ratio(a, &cand, p);
                if v > value {
                    value = v;
                    x = cand;
                    step *= 1.5;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    value
}
