use serde::{Deserialize, Serialize};

use super::{LevelOperator, UhfTower};
use crate::error::{Error, Result};
use crate::linalg::{self, max_abs_diff};
use crate::pspace::OperatorMatrix;
use crate::{CMatrix, Complex64};

/// Coefficients `α_0 = 0, α_1, …, α_M` of the Dirac operator `Σ α_n Q_n`.
///
/// Zero coefficients beyond `α_0` are accepted so degenerate operators can
/// be probed; [`AlphaSeq::is_strict`] tells whether every `α_n`, `n ≥ 1`, is
/// positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSeq {
    values: Vec<f64>,
}

impl AlphaSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            Some(v) if *v == 0.0 => {}
            Some(v) => return Err(Error::Precondition(format!("alpha_0 must be 0, got {v}"))),
            None => return Err(Error::Precondition("alpha must be nonempty".into())),
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Precondition(format!(
                "alpha entries must be finite and >= 0, got {v}"
            )));
        }
        Ok(AlphaSeq { values })
    }

    pub fn zeros(levels: usize) -> Self {
        AlphaSeq {
            values: vec![0.0; levels + 1],
        }
    }

    /// `α_n = n`.
    pub fn linear(levels: usize) -> Self {
        AlphaSeq {
            values: (0..=levels).map(|n| n as f64).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn levels(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_strict(&self) -> bool {
        self.values[1..].iter().all(|v| *v > 0.0)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }
}

fn check_alpha(tower: &UhfTower, alpha: &AlphaSeq) -> Result<()> {
    if alpha.levels() != tower.levels() {
        return Err(Error::ShapeMismatch(format!(
            "alpha has {} entries, tower needs {}",
            alpha.values.len(),
            tower.levels() + 1
        )));
    }
    Ok(())
}

/// `D_α = Σ_{n=1}^{M} α_n Q_n` on `L^p(X_{≤M})`.
pub fn dirac(tower: &UhfTower, alpha: &AlphaSeq) -> Result<OperatorMatrix> {
    check_alpha(tower, alpha)?;
    let n = tower.dim();
    let mut d = CMatrix::zeros(n, n);
    for (k, a) in alpha.values.iter().enumerate().skip(1) {
        d += tower.q(k).entries() * Complex64::new(*a, 0.0);
    }
    OperatorMatrix::square(tower.full_space().clone(), d)
}

const INVERSE_TOL: f64 = 1e-10;
const COMMUTE_TOL: f64 = 1e-12;

/// `(I + D²)⁻¹ = P_0 + Σ_{n≥1} (1+α_n²)⁻¹ Q_n`, checked as a two-sided
/// inverse entrywise.
pub fn resolvent_inverse(tower: &UhfTower, alpha: &AlphaSeq) -> Result<OperatorMatrix> {
    let d = dirac(tower, alpha)?;
    let mut r = tower.projection(0).entries().clone();
    for (k, a) in alpha.values.iter().enumerate().skip(1) {
        r += tower.q(k).entries() * Complex64::new(1.0 / (1.0 + a * a), 0.0);
    }
    let n = tower.dim();
    let id = CMatrix::identity(n, n);
    let i_plus_d2 = &id + d.entries() * d.entries();
    let left = max_abs_diff(&(&i_plus_d2 * &r), &id);
    let right = max_abs_diff(&(&r * &i_plus_d2), &id);
    if left.max(right) > INVERSE_TOL {
        return Err(Error::InvariantViolated(format!(
            "(I+D^2)R deviates from I by {}",
            left.max(right)
        )));
    }
    d.with_entries(r)
}

/// `[D_α, a] = D a − a D`, after checking `[Q_m, a] = 0` for every
/// `m > level(a)`.
pub fn commutator(tower: &UhfTower, alpha: &AlphaSeq, a: &LevelOperator) -> Result<OperatorMatrix> {
    if a.dims() != tower.spec().dims() {
        return Err(Error::ShapeMismatch(
            "level operator was built on a different tower".into(),
        ));
    }
    let d = dirac(tower, alpha)?;
    let e = a.embedded().entries();
    for m in a.level() + 1..=tower.levels() {
        let q = tower.q(m).entries();
        let dev = linalg::max_abs(&linalg::commutator(q, e));
        if dev > COMMUTE_TOL {
            return Err(Error::InvariantViolated(format!(
                "[Q_{m}, a] = {dev:e} for a level-{} element",
                a.level()
            )));
        }
    }
    d.with_entries(linalg::commutator(d.entries(), e))
}

/// Eigenvalues of a Hermitian operator, ascending.
pub fn eigenvalue_multiset(op: &OperatorMatrix) -> Vec<f64> {
    linalg::hermitian_eigenvalues(op.entries())
}
