//! Spatial tensor products of finite weighted spaces and their operators.
//!
//! Points of a product are flattened row-major: the first factor varies
//! slowest. Every multi-factor object in the crate uses this convention, so
//! iterated products are associative by construction.

use crate::error::{Error, Result};
use crate::linalg;
use crate::pspace::{OperatorMatrix, PVector, SpaceKind, WeightedPointSpace};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    factors: Vec<WeightedPointSpace>,
    flat: WeightedPointSpace,
}

impl ProductSpace {
    pub fn factors(&self) -> &[WeightedPointSpace] {
        &self.factors
    }

    pub fn flat(&self) -> &WeightedPointSpace {
        &self.flat
    }

    pub fn into_flat(self) -> WeightedPointSpace {
        self.flat
    }

    /// Flat index of a multi-index.
    pub fn flat_index(&self, multi: &[usize]) -> usize {
        assert_eq!(multi.len(), self.factors.len());
        multi
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (i, f)| acc * f.len() + i)
    }

    /// Multi-index of a flat index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, f) in out.iter_mut().zip(&self.factors).rev() {
            *slot = flat % f.len();
            flat /= f.len();
        }
        out
    }
}

/// Product of weighted spaces. An empty list gives the one-point counting
/// space (the empty product).
pub fn product_space(factors: &[WeightedPointSpace]) -> ProductSpace {
    if factors.is_empty() {
        return ProductSpace {
            factors: Vec::new(),
            flat: WeightedPointSpace::counting(1),
        };
    }
    let mut weights = vec![1.0];
    for f in factors {
        let mut next = Vec::with_capacity(weights.len() * f.len());
        for w in &weights {
            for v in f.weights() {
                next.push(w * v);
            }
        }
        weights = next;
    }
    let kind = if factors.iter().all(|f| f.kind() == SpaceKind::Counting) {
        SpaceKind::Counting
    } else if factors.iter().all(|f| f.kind() == SpaceKind::Probability) {
        SpaceKind::Probability
    } else {
        SpaceKind::General
    };
    let flat = match kind {
        // rounding in long products can drift past the probability tolerance
        SpaceKind::Probability => WeightedPointSpace::new(weights.clone(), kind)
            .or_else(|_| WeightedPointSpace::new(weights, SpaceKind::General)),
        _ => WeightedPointSpace::new(weights, kind),
    }
    .expect("products of positive weights are positive");
    ProductSpace {
        factors: factors.to_vec(),
        flat,
    }
}

/// Spatial tensor product of two operators:
/// `(a ⊗ b)[(i,k),(j,l)] = a[i,j] · b[k,l]` on the product spaces.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    let domain = product_space(&[a.domain().clone(), b.domain().clone()]).into_flat();
    let codomain = product_space(&[a.codomain().clone(), b.codomain().clone()]).into_flat();
    OperatorMatrix::new(domain, codomain, linalg::kron(a.entries(), b.entries()))
        .expect("kronecker shape matches product spaces")
}

/// Elementary tensor `ξ ⊗ η`.
pub fn kron_vec(x: &PVector, y: &PVector) -> PVector {
    let space = product_space(&[x.space().clone(), y.space().clone()]).into_flat();
    PVector::new(space, linalg::kron_vec(x.coords(), y.coords()))
        .expect("kronecker length matches product space")
}

/// Tensor product of several operators, left to right.
pub fn kron_all(ops: &[OperatorMatrix]) -> Result<OperatorMatrix> {
    let (first, rest) = ops
        .split_first()
        .ok_or_else(|| Error::Precondition("empty tensor product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, b| kron(&acc, b)))
}
