//! Finite weighted L^p spaces and p→p operator norms.
//!
//! A [`WeightedPointSpace`] is a finite set of points with positive weights;
//! it stands in for `L^p(μ)` at finite truncation. Operators between such
//! spaces are [`OperatorMatrix`] values. Norms of operators are reduced to
//! unweighted (counting-measure) norms by [`to_counting`], which is an
//! isometric change of coordinates.

mod norm;
mod oracle;

pub use norm::{op_norm, op_norm_upper, op_norm_with_starts, Budget, NormEstimate, NormMethod};
pub use oracle::{oracle_norm, ORACLE_MAX_DIM};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, Complex64};

/// An exponent `p ∈ [1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent(f64);

impl PExponent {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 1.0 {
            Ok(PExponent(value))
        } else {
            Err(Error::InvalidExponent(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Hölder conjugate `q = p/(p−1)`; infinite for `p = 1`.
    pub fn conjugate(self) -> f64 {
        if self.0 == 1.0 {
            f64::INFINITY
        } else {
            self.0 / (self.0 - 1.0)
        }
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }

    pub fn is_two(self) -> bool {
        self.0 == 2.0
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        PExponent::new(v)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.0
    }
}

impl std::fmt::Display for PExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceKind {
    /// Weights sum to one.
    Probability,
    /// Every weight is one.
    Counting,
    /// Positive weights with no normalization, e.g. mixed products.
    General,
}

const PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPointSpace {
    weights: Vec<f64>,
    kind: SpaceKind,
}

impl WeightedPointSpace {
    /// Validates the weights against the requested kind.
    pub fn new(weights: Vec<f64>, kind: SpaceKind) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("space has no points".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        match kind {
            SpaceKind::Probability => {
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > PROBABILITY_TOL {
                    return Err(Error::InvalidWeights(format!(
                        "probability weights sum to {total}"
                    )));
                }
            }
            SpaceKind::Counting => {
                if weights.iter().any(|w| *w != 1.0) {
                    return Err(Error::InvalidWeights(
                        "counting weights must all equal 1".into(),
                    ));
                }
            }
            SpaceKind::General => {}
        }
        Ok(WeightedPointSpace { weights, kind })
    }

    /// Picks the most specific kind the weights satisfy.
    pub fn infer(weights: Vec<f64>) -> Result<Self> {
        if !weights.is_empty() && weights.iter().all(|w| *w == 1.0) {
            return Self::new(weights, SpaceKind::Counting);
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() <= PROBABILITY_TOL {
            Self::new(weights, SpaceKind::Probability)
        } else {
            Self::new(weights, SpaceKind::General)
        }
    }

    pub fn counting(n: usize) -> Self {
        assert!(n > 0, "counting space needs at least one point");
        WeightedPointSpace {
            weights: vec![1.0; n],
            kind: SpaceKind::Counting,
        }
    }

    /// Normalized counting measure on `n` points.
    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform space needs at least one point");
        WeightedPointSpace {
            weights: vec![1.0 / n as f64; n],
            kind: SpaceKind::Probability,
        }
    }

    /// The one-point probability space.
    pub fn point() -> Self {
        WeightedPointSpace {
            weights: vec![1.0],
            kind: SpaceKind::Probability,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }
}

/// A vector in `L^p` of a finite weighted space.
#[derive(Debug, Clone, PartialEq)]
pub struct PVector {
    space: WeightedPointSpace,
    coords: CVector,
}

impl PVector {
    pub fn new(space: WeightedPointSpace, coords: CVector) -> Result<Self> {
        if coords.len() != space.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for a space of {} points",
                coords.len(),
                space.len()
            )));
        }
        Ok(PVector { space, coords })
    }

    pub fn constant(space: WeightedPointSpace, value: Complex64) -> Self {
        let coords = CVector::from_element(space.len(), value);
        PVector { space, coords }
    }

    pub fn space(&self) -> &WeightedPointSpace {
        &self.space
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }
}

/// `(Σ_i w_i |v_i|^p)^{1/p}`.
pub fn vec_norm(v: &PVector, p: PExponent) -> f64 {
    weighted_norm(v.coords.as_slice(), v.space.weights(), p.value())
}

pub(crate) fn weighted_norm(coords: &[Complex64], weights: &[f64], p: f64) -> f64 {
    let scale = coords.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = coords
        .iter()
        .zip(weights)
        .map(|(z, w)| w * (z.norm() / scale).powf(p))
        .sum();
    scale * s.powf(1.0 / p)
}

/// Unweighted p-norm of a coordinate vector.
pub(crate) fn counting_norm(coords: &[Complex64], p: f64) -> f64 {
    let scale = coords.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = coords.iter().map(|z| (z.norm() / scale).powi(2)).sum();
        return scale * s.sqrt();
    }
    let s: f64 = coords.iter().map(|z| (z.norm() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

/// A bounded operator between finite weighted spaces, stored as a dense
/// `codomain.len() × domain.len()` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    domain: WeightedPointSpace,
    codomain: WeightedPointSpace,
    entries: CMatrix,
}

impl OperatorMatrix {
    pub fn new(
        domain: WeightedPointSpace,
        codomain: WeightedPointSpace,
        entries: CMatrix,
    ) -> Result<Self> {
        if entries.nrows() != codomain.len() || entries.ncols() != domain.len() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{} but spaces need {}x{}",
                entries.nrows(),
                entries.ncols(),
                codomain.len(),
                domain.len()
            )));
        }
        Ok(OperatorMatrix {
            domain,
            codomain,
            entries,
        })
    }

    /// Operator on counting spaces matching the matrix shape.
    pub fn on_counting(entries: CMatrix) -> Self {
        let (r, c) = entries.shape();
        OperatorMatrix {
            domain: WeightedPointSpace::counting(c),
            codomain: WeightedPointSpace::counting(r),
            entries,
        }
    }

    /// Endomorphism of `space`.
    pub fn square(space: WeightedPointSpace, entries: CMatrix) -> Result<Self> {
        Self::new(space.clone(), space, entries)
    }

    pub fn identity(space: WeightedPointSpace) -> Self {
        let n = space.len();
        OperatorMatrix {
            domain: space.clone(),
            codomain: space,
            entries: CMatrix::identity(n, n),
        }
    }

    pub fn domain(&self) -> &WeightedPointSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &WeightedPointSpace {
        &self.codomain
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    /// Same spaces, new entries.
    pub fn with_entries(&self, entries: CMatrix) -> Result<Self> {
        Self::new(self.domain.clone(), self.codomain.clone(), entries)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        OperatorMatrix {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: self.entries.map(|z| z * c),
        }
    }

    /// Composition `self ∘ rhs`.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<Self> {
        if rhs.codomain.len() != self.domain.len() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}-point domain with {}-point codomain",
                self.domain.len(),
                rhs.codomain.len()
            )));
        }
        Ok(OperatorMatrix {
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries * &rhs.entries,
        })
    }

    pub fn apply(&self, v: &PVector) -> Result<PVector> {
        if v.coords.len() != self.domain.len() {
            return Err(Error::ShapeMismatch("vector does not match domain".into()));
        }
        Ok(PVector {
            space: self.codomain.clone(),
            coords: &self.entries * &v.coords,
        })
    }
}

/// Rescales `a` so that its p→p norm on counting spaces equals the norm of
/// `a` on its weighted spaces: `ã_ij = (w_i^cod)^{1/p} a_ij (w_j^dom)^{−1/p}`.
pub fn to_counting(a: &OperatorMatrix, p: PExponent) -> CMatrix {
    let inv_p = 1.0 / p.value();
    let row_scale: Vec<f64> = a.codomain.weights().iter().map(|w| w.powf(inv_p)).collect();
    let col_scale: Vec<f64> = a.domain.weights().iter().map(|w| w.powf(-inv_p)).collect();
    let same_uniform = a.domain.is_uniform()
        && a.codomain.is_uniform()
        && a.domain.weights()[0] == a.codomain.weights()[0];
    if same_uniform {
        // factors cancel exactly
        return a.entries.clone();
    }
    CMatrix::from_fn(a.entries.nrows(), a.entries.ncols(), |i, j| {
        a.entries[(i, j)] * (row_scale[i] * col_scale[j])
    })
}
