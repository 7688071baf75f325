//! Truncated L^p UHF algebras of tensor product type.
//!
//! Level spaces are uniform probability spaces `X_j` with `d(j)` points and
//! `d(0) = 1`; matrices act on them coordinatewise (the spatial
//! representation). The tower is truncated at level `M`: the trailing
//! product `X_{≥n+1}` is represented by the finite block `X_{(n,M]}`, and
//! every identity between the structural maps holds exactly at this level.
//!
//! Structural maps on `X_{≤M}` (first factor slowest-varying):
//!
//! * `ι_n : L^p(X_{≤n}) → L^p(X_{≤M})` extends a function constantly in the
//!   trailing coordinates,
//! * `π_n : L^p(X_{≤M}) → L^p(X_{≤n})` averages over the trailing coordinates,
//! * `P_n = ι_n π_n` and `Q_0 = P_0`, `Q_n = P_n − P_{n−1}`.

mod dirac;

pub use dirac::{commutator, dirac, eigenvalue_multiset, resolvent_inverse, AlphaSeq};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, kron};
use crate::pspace::{vec_norm, OperatorMatrix, PExponent, PVector, WeightedPointSpace};
use crate::tensor::{product_space, ProductSpace};
use crate::{CMatrix, Complex64};

pub const DEFAULT_TOWER_CAP: usize = 4096;

/// Eigenvalue threshold used for ranks of the idempotents `Q_n`.
pub const RANK_TOL: f64 = 1e-8;

/// Level dimensions `d(0), …, d(M)` of a truncated UHF algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UhfSpec {
    dims: Vec<usize>,
}

impl UhfSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        match dims.first() {
            None => return Err(Error::Precondition("dims must be nonempty".into())),
            Some(1) => {}
            Some(d) => {
                return Err(Error::Precondition(format!("d(0) must be 1, got {d}")));
            }
        }
        if let Some((j, d)) = dims.iter().enumerate().skip(1).find(|(_, d)| **d < 2) {
            return Err(Error::Precondition(format!("d({j}) must be >= 2, got {d}")));
        }
        Ok(UhfSpec { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Truncation level `M`.
    pub fn levels(&self) -> usize {
        self.dims.len() - 1
    }

    /// `Π_{j≤n} d(j)`, saturating on overflow.
    pub fn level_dim(&self, n: usize) -> usize {
        self.dims[..=n]
            .iter()
            .fold(1usize, |acc, d| acc.saturating_mul(*d))
    }

    pub fn total_dim(&self) -> usize {
        self.level_dim(self.levels())
    }
}

#[derive(Debug, Clone)]
pub struct UhfTower {
    spec: UhfSpec,
    spaces: Vec<ProductSpace>,
    iota: Vec<OperatorMatrix>,
    pi: Vec<OperatorMatrix>,
    proj: Vec<OperatorMatrix>,
    q: Vec<OperatorMatrix>,
}

/// Builds the truncated tower. Fails when `Π d(j)` exceeds `cap`.
pub fn build_tower(spec: &UhfSpec, cap: usize) -> Result<UhfTower> {
    let total = spec.total_dim();
    if total > cap {
        return Err(Error::ResourceCap {
            what: "tower",
            size: total,
            cap,
        });
    }
    let m = spec.levels();
    let factors: Vec<WeightedPointSpace> = spec
        .dims
        .iter()
        .map(|d| WeightedPointSpace::uniform(*d))
        .collect();
    let spaces: Vec<ProductSpace> = (0..=m).map(|n| product_space(&factors[..=n])).collect();
    let full = spaces[m].flat().clone();

    let mut iota = Vec::with_capacity(m + 1);
    let mut pi = Vec::with_capacity(m + 1);
    let mut proj = Vec::with_capacity(m + 1);
    for (n, space) in spaces.iter().enumerate() {
        let nn = spec.level_dim(n);
        let trailing = total / nn;
        let head = linalg::identity(nn);
        let ones_col = CMatrix::from_element(trailing, 1, Complex64::new(1.0, 0.0));
        let avg_row = CMatrix::from_element(1, trailing, Complex64::new(1.0 / trailing as f64, 0.0));
        let avg = CMatrix::from_element(
            trailing,
            trailing,
            Complex64::new(1.0 / trailing as f64, 0.0),
        );
        iota.push(OperatorMatrix::new(space.flat().clone(), full.clone(), kron(&head, &ones_col))?);
        pi.push(OperatorMatrix::new(full.clone(), space.flat().clone(), kron(&head, &avg_row))?);
        proj.push(OperatorMatrix::square(full.clone(), kron(&head, &avg))?);
    }
    let mut q = Vec::with_capacity(m + 1);
    q.push(proj[0].clone());
    for n in 1..=m {
        q.push(proj[n].with_entries(proj[n].entries() - proj[n - 1].entries())?);
    }
    Ok(UhfTower {
        spec: spec.clone(),
        spaces,
        iota,
        pi,
        proj,
        q,
    })
}

impl UhfTower {
    pub fn spec(&self) -> &UhfSpec {
        &self.spec
    }

    pub fn levels(&self) -> usize {
        self.spec.levels()
    }

    pub fn dim(&self) -> usize {
        self.spec.total_dim()
    }

    /// `X_{≤n}` as a product space.
    pub fn space(&self, n: usize) -> &ProductSpace {
        &self.spaces[n]
    }

    /// The flat probability space `X_{≤M}`.
    pub fn full_space(&self) -> &WeightedPointSpace {
        self.spaces[self.levels()].flat()
    }

    pub fn iota(&self, n: usize) -> &OperatorMatrix {
        &self.iota[n]
    }

    pub fn pi(&self, n: usize) -> &OperatorMatrix {
        &self.pi[n]
    }

    pub fn projection(&self, n: usize) -> &OperatorMatrix {
        &self.proj[n]
    }

    pub fn q(&self, n: usize) -> &OperatorMatrix {
        &self.q[n]
    }

    /// Ranks of `Q_0, …, Q_M` by eigenvalue thresholding.
    pub fn q_ranks(&self) -> Vec<usize> {
        self.q
            .iter()
            .map(|q| linalg::hermitian_rank(q.entries(), RANK_TOL))
            .collect()
    }

    /// The constant function 1 on `X_{≤M}`.
    pub fn one(&self) -> PVector {
        PVector::constant(self.full_space().clone(), Complex64::new(1.0, 0.0))
    }

    /// `‖P_n η − η‖_p` for `n = 0, …, M`.
    pub fn strong_convergence_profile(&self, eta: &PVector, p: PExponent) -> Result<Vec<f64>> {
        self.proj
            .iter()
            .map(|pn| {
                let img = pn.apply(eta)?;
                let diff = PVector::new(eta.space().clone(), img.coords() - eta.coords())?;
                Ok(vec_norm(&diff, p))
            })
            .collect()
    }

    /// Random level-`n` element with entries uniform in the unit square.
    pub fn random_level_operator<R: Rng>(&self, n: usize, rng: &mut R) -> Result<LevelOperator> {
        let nn = self.spec.level_dim(n);
        embed_algebra(self, n, linalg::random_complex_matrix(rng, nn, nn))
    }
}

/// `P_{m,n}` on the trailing space `X_{(n,M]}`: identity on the coordinates
/// `n+1..=m`, averaging over `m+1..=M`. Satisfies
/// `P_m = Id_{≤n} ⊗ P_{m,n}`.
pub fn partial_projector(tower: &UhfTower, n: usize, m: usize) -> Result<OperatorMatrix> {
    let top = tower.levels();
    if !(n <= m && m <= top) {
        return Err(Error::Precondition(format!(
            "partial projector needs 0 <= n <= m <= {top}, got n={n}, m={m}"
        )));
    }
    let dims = tower.spec.dims();
    let trailing_factors: Vec<WeightedPointSpace> = dims[n + 1..]
        .iter()
        .map(|d| WeightedPointSpace::uniform(*d))
        .collect();
    let space = product_space(&trailing_factors).into_flat();
    let kept: usize = dims[n + 1..=m].iter().product();
    let averaged: usize = dims[m + 1..].iter().product();
    let avg = CMatrix::from_element(
        averaged,
        averaged,
        Complex64::new(1.0 / averaged as f64, 0.0),
    );
    OperatorMatrix::square(space, kron(&linalg::identity(kept), &avg))
}

/// An element of `A_n` acting on `L^p(X_{≤M})` as `core ⊗ Id`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelOperator {
    level: usize,
    dims: Vec<usize>,
    core: CMatrix,
    embedded: OperatorMatrix,
}

impl LevelOperator {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn core(&self) -> &CMatrix {
        &self.core
    }

    pub fn embedded(&self) -> &OperatorMatrix {
        &self.embedded
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Re-reads this element as a level-`m` element `core ⊗ Id`.
    pub fn lift(&self, tower: &UhfTower, m: usize) -> Result<LevelOperator> {
        if m < self.level || m > tower.levels() {
            return Err(Error::Precondition(format!(
                "cannot lift level {} to level {m}",
                self.level
            )));
        }
        let fill = tower.spec.level_dim(m) / tower.spec.level_dim(self.level);
        embed_algebra(tower, m, kron(&self.core, &linalg::identity(fill)))
    }
}

/// Embeds a level-`n` core matrix into `B(L^p(X_{≤M}))` as `core ⊗ Id`.
pub fn embed_algebra(tower: &UhfTower, n: usize, core: CMatrix) -> Result<LevelOperator> {
    if n > tower.levels() {
        return Err(Error::Precondition(format!(
            "level {n} exceeds truncation level {}",
            tower.levels()
        )));
    }
    let nn = tower.spec.level_dim(n);
    if core.shape() != (nn, nn) {
        return Err(Error::ShapeMismatch(format!(
            "level-{n} core must be {nn}x{nn}, got {}x{}",
            core.nrows(),
            core.ncols()
        )));
    }
    let fill = tower.dim() / nn;
    let embedded = OperatorMatrix::square(
        tower.full_space().clone(),
        kron(&core, &linalg::identity(fill)),
    )?;
    Ok(LevelOperator {
        level: n,
        dims: tower.spec.dims().to_vec(),
        core,
        embedded,
    })
}
