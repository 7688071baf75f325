//! States, the spectral distance `mk_D` and the seminorm constants `c_n`
//! on a truncated UHF tower.

mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, random_complex_matrix, stream_rng};
use crate::pspace::{
    op_norm, op_norm_upper, weighted_norm, Budget, NormEstimate, NormMethod, OperatorMatrix,
    PExponent,
};
use crate::uhf::{commutator, dirac, AlphaSeq, LevelOperator, UhfTower};
use crate::{CMatrix, CVector, Complex64};

/// Tolerance of the derivative-free metric searches.
pub const SEARCH_TOL: f64 = 2.5e-3;
/// Threshold below which a seminorm value is treated as zero.
pub const KERNEL_TOL: f64 = 1e-10;
/// `a` counts as commuting with `D` when `‖[D, a]‖ < COMMUTANT_TOL`.
pub const COMMUTANT_TOL: f64 = 1e-9;

const STATE_SUM_TOL: f64 = 1e-12;
const CLUSTER_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateKind {
    Point(usize),
    Trace,
    Custom,
}

/// Diagonal functional `ω(a) = Σ_x c_x a_xx` with `Σ c_x = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    weights: Vec<Complex64>,
    kind: StateKind,
}

impl State {
    /// Evaluation at point `x` of `X_{≤M}`.
    pub fn point(tower: &UhfTower, x: usize) -> Result<Self> {
        let n = tower.dim();
        if x >= n {
            return Err(Error::Precondition(format!(
                "point {x} outside a space of {n} points"
            )));
        }
        let mut weights = vec![Complex64::new(0.0, 0.0); n];
        weights[x] = Complex64::new(1.0, 0.0);
        Ok(State {
            weights,
            kind: StateKind::Point(x),
        })
    }

    /// Normalized trace.
    pub fn trace(tower: &UhfTower) -> Self {
        let n = tower.dim();
        State {
            weights: vec![Complex64::new(1.0 / n as f64, 0.0); n],
            kind: StateKind::Trace,
        }
    }

    pub fn custom(tower: &UhfTower, weights: Vec<Complex64>) -> Result<Self> {
        if weights.len() != tower.dim() {
            return Err(Error::ShapeMismatch(format!(
                "state has {} weights, tower has {} points",
                weights.len(),
                tower.dim()
            )));
        }
        if weights.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidWeights("state weights must be finite".into()));
        }
        let total: Complex64 = weights.iter().sum();
        if (total - Complex64::new(1.0, 0.0)).norm() > STATE_SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "state weights sum to {total}, expected 1"
            )));
        }
        Ok(State {
            weights,
            kind: StateKind::Custom,
        })
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn evaluate(&self, a: &CMatrix) -> Result<Complex64> {
        let n = self.weights.len();
        if a.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "state on {n} points applied to a {}x{} matrix",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(self.weights.iter().enumerate().map(|(x, c)| c * a[(x, x)]).sum())
    }
}

/// Bounds on `mk_D(ω, ψ)`. `lower` is attained by `witness`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEstimate {
    pub lower: f64,
    pub upper: f64,
    pub witness: Option<CMatrix>,
}

/// Result of the seminorm comparison on one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelConstant {
    pub level: usize,
    /// `Q_n a 1 = 0` forces `Q_n a = 0` on the searched subspace.
    pub kernel_flag: bool,
    /// Best ratio `op_norm(Q_n a).upper / ‖Q_n a 1‖_p`; infinite when the
    /// kernel flag is false.
    pub c: f64,
    /// The same ratio with the norm's lower end at the best point found.
    pub c_lower: f64,
    pub dimension: usize,
    /// Maximizer of the ratio, or a kernel element when the flag is false.
    pub witness: Option<CMatrix>,
}

/// Per-level constants `c_1, …, c_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CnTable {
    levels: Vec<LevelConstant>,
}

impl CnTable {
    /// Table with prescribed constants (used for synthetic experiments).
    /// Infinite entries mark degenerate levels.
    pub fn from_constants(c: &[f64]) -> Result<Self> {
        let levels = c
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c.is_nan() || c < 1.0 {
                    return Err(Error::Precondition(format!("c_{} = {c} must be >= 1", i + 1)));
                }
                Ok(LevelConstant {
                    level: i + 1,
                    kernel_flag: c.is_finite(),
                    c,
                    c_lower: c,
                    dimension: 0,
                    witness: None,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CnTable { levels })
    }

    pub fn levels(&self) -> &[LevelConstant] {
        &self.levels
    }

    pub fn constants(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.c).collect()
    }

    pub fn kernel_flags(&self) -> Vec<bool> {
        self.levels.iter().map(|l| l.kernel_flag).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn first_degenerate(&self) -> Option<usize> {
        self.levels.iter().find(|l| !l.c.is_finite()).map(|l| l.level)
    }
}

fn full_op(tower: &UhfTower, m: CMatrix) -> Result<OperatorMatrix> {
    OperatorMatrix::square(tower.full_space().clone(), m)
}

fn norm_of_image_of_one(tower: &UhfTower, m: &CMatrix, p: PExponent) -> f64 {
    let v = m * tower.one().coords();
    weighted_norm(v.as_slice(), tower.full_space().weights(), p.value())
}

/// `(‖Q_n [D, a] Q_0 1‖_p, α_n ‖Q_n a 1‖_p)`, which must agree.
pub fn key_estimate(
    tower: &UhfTower,
    alpha: &AlphaSeq,
    a: &LevelOperator,
    n: usize,
    p: PExponent,
) -> Result<(f64, f64)> {
    if n == 0 || n > tower.levels() {
        return Err(Error::Precondition(format!(
            "level {n} outside 1..={}",
            tower.levels()
        )));
    }
    let c = commutator(tower, alpha, a)?;
    let q = tower.q(n).entries();
    let weights = tower.full_space().weights();
    let q0_one = tower.projection(0).entries() * tower.one().coords();
    let lhs_vec = q * c.entries() * q0_one;
    let lhs = weighted_norm(lhs_vec.as_slice(), weights, p.value());
    let rhs = alpha.values()[n] * norm_of_image_of_one(tower, &(q * a.embedded().entries()), p);
    if (lhs - rhs).abs() > 1e-10 * rhs.max(1.0) {
        return Err(Error::InvariantViolated(format!(
            "key estimate at level {n}: {lhs} != {rhs}"
        )));
    }
    Ok((lhs, rhs))
}

fn unpack(x: &[f64], basis: &[CMatrix]) -> CMatrix {
    let (r, c) = basis[0].shape();
    let mut m = CMatrix::zeros(r, c);
    for (k, b) in basis.iter().enumerate() {
        let z = Complex64::new(x[2 * k], x[2 * k + 1]);
        if z != Complex64::new(0.0, 0.0) {
            m += b * z;
        }
    }
    m
}

fn pack(z: &CVector) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Scales so the largest entry is `1`, using the first entry (row-major)
/// of maximal modulus as the phase reference.
pub fn normalize_witness(m: &CMatrix) -> CMatrix {
    let max = linalg::max_abs(m);
    if max == 0.0 {
        return m.clone();
    }
    let mut pivot = Complex64::new(max, 0.0);
    'outer: for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)].norm() >= max * (1.0 - 1e-12) {
                pivot = m[(i, j)];
                break 'outer;
            }
        }
    }
    m.map(|z| z / pivot)
}

/// Supremum of `op_norm(b).upper / ‖b 1‖_p` over the span of `basis`
/// (matrices on the full tower space), or a kernel witness when some
/// nonzero `b` has `b 1 = 0`.
pub fn seminorm_constant(
    tower: &UhfTower,
    level: usize,
    basis: &[CMatrix],
    p: PExponent,
    budget: &Budget,
) -> Result<LevelConstant> {
    let n = tower.dim();
    let d = basis.len();
    if let Some(b) = basis.iter().find(|b| b.shape() != (n, n)) {
        return Err(Error::ShapeMismatch(format!(
            "basis element is {}x{}, expected {n}x{n}",
            b.nrows(),
            b.ncols()
        )));
    }
    if d == 0 {
        return Ok(LevelConstant {
            level,
            kernel_flag: true,
            c: 1.0,
            c_lower: 1.0,
            dimension: 0,
            witness: None,
        });
    }
    if budget.starts == 0 {
        return Err(Error::ZeroBudget);
    }

    // kernel of b ↦ b·1 on the span, via the Gram matrix of the images
    let one = tower.one().coords().clone();
    let images = CMatrix::from_fn(n, d, |i, k| (&basis[k] * &one)[i]);
    let gram = images.adjoint() * &images;
    let eig = gram.symmetric_eigen();
    let (kmin, emin) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, e)| if *e < acc.1 { (i, *e) } else { acc });
    if emin.max(0.0).sqrt() <= KERNEL_TOL {
        let v = eig.eigenvectors.column(kmin).into_owned();
        let w = unpack(&pack(&v), basis);
        return Ok(LevelConstant {
            level,
            kernel_flag: false,
            c: f64::INFINITY,
            c_lower: f64::INFINITY,
            dimension: d,
            witness: Some(normalize_witness(&w)),
        });
    }

    let space = tower.full_space().clone();
    let f = |x: &[f64]| -> f64 {
        let b = unpack(x, basis);
        let den = norm_of_image_of_one(tower, &b, p);
        if den <= 0.0 {
            return f64::NEG_INFINITY;
        }
        match OperatorMatrix::square(space.clone(), b) {
            Ok(op) => op_norm_upper(&op, p) / den,
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let mut starts: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut x = vec![0.0; 2 * d];
            x[2 * k] = 1.0;
            x
        })
        .take(budget.starts)
        .collect();
    starts.extend((0..budget.starts).map(|s| {
        let mut rng = stream_rng(budget.seed, s as u64);
        pack(&linalg::random_complex_vector(&mut rng, d))
    }));
    let best = search::maximize(&f, starts, budget.iterations);
    let b = unpack(&best.x, basis);
    let den = norm_of_image_of_one(tower, &b, p);
    let lower = op_norm(&full_op(tower, b.clone())?, p, budget)?.lower / den;
    let c = best.value.max(1.0);
    Ok(LevelConstant {
        level,
        kernel_flag: true,
        c,
        c_lower: lower.min(c),
        dimension: d,
        witness: Some(b.unscale(den)),
    })
}

/// Orthonormal basis `{u_k e_jᵀ}` of `V_n = {Q_n a}` where `u_k` runs over
/// an orthonormal basis of the range of `Q_n`.
pub fn level_subspace_basis(tower: &UhfTower, n: usize) -> Result<Vec<CMatrix>> {
    if n > tower.levels() {
        return Err(Error::Precondition(format!("level {n} out of range")));
    }
    let dim = tower.dim();
    let eig = tower.q(n).entries().clone().symmetric_eigen();
    let mut basis = Vec::new();
    for (k, e) in eig.eigenvalues.iter().enumerate() {
        if *e > 0.5 {
            let u = eig.eigenvectors.column(k);
            for j in 0..dim {
                let mut m = CMatrix::zeros(dim, dim);
                m.set_column(j, &u);
                basis.push(m);
            }
        }
    }
    Ok(basis)
}

/// `c_n` for `n = 1, …, M`.
pub fn cn_constants(tower: &UhfTower, p: PExponent, budget: &Budget) -> Result<CnTable> {
    let levels = (1..=tower.levels())
        .map(|n| {
            let basis = level_subspace_basis(tower, n)?;
            let b = Budget {
                seed: budget.seed.wrapping_add(n as u64),
                ..*budget
            };
            seminorm_constant(tower, n, &basis, p, &b)
        })
        .collect::<Result<_>>()?;
    Ok(CnTable { levels })
}

/// `α_n = 2ⁿ max(c_n, 1)`.
pub fn alpha_auto(cn: &CnTable) -> Result<AlphaSeq> {
    if let Some(level) = cn.first_degenerate() {
        return Err(Error::Degenerate {
            level,
            reason: "c_n is infinite (kernel flag false)".into(),
        });
    }
    let mut values = vec![0.0];
    values.extend(
        cn.levels
            .iter()
            .map(|l| 2f64.powi(l.level as i32) * l.c.max(1.0)),
    );
    AlphaSeq::new(values)
}

/// `2 Σ c_n / α_n`, infinite if any term is.
pub fn mk_upper(alpha: &AlphaSeq, cn: &CnTable) -> Result<f64> {
    if alpha.levels() != cn.len() {
        return Err(Error::ShapeMismatch(format!(
            "alpha has {} levels, c table has {}",
            alpha.levels(),
            cn.len()
        )));
    }
    let mut total = 0.0;
    for (l, a) in cn.levels.iter().zip(&alpha.values()[1..]) {
        if !l.c.is_finite() || *a == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += l.c / a;
    }
    Ok(2.0 * total)
}

/// Frobenius-orthonormal basis of `{a : [D, a] = 0}` for Hermitian `D`,
/// built from eigenvector pairs inside each eigenvalue cluster, together
/// with the cluster spectral projectors.
fn commutant(d: &CMatrix) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let n = d.nrows();
    let eig = d.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if (eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()]).abs() < CLUSTER_GAP => {
                c.push(i)
            }
            _ => clusters.push(vec![i]),
        }
    }
    let mut basis = Vec::new();
    let mut projectors = Vec::new();
    for c in &clusters {
        let mut proj = CMatrix::zeros(n, n);
        for &i in c {
            let vi = eig.eigenvectors.column(i);
            proj += vi * vi.adjoint();
            for &j in c {
                basis.push(vi * eig.eigenvectors.column(j).adjoint());
            }
        }
        projectors.push(proj);
    }
    (basis, projectors)
}

fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn project_off(m: &CMatrix, basis: &[CMatrix]) -> CMatrix {
    let mut out = m.clone();
    for b in basis {
        let c = frobenius_inner(b, m);
        out -= b * c;
    }
    out
}

/// Lower bound on `mk_D(ω, ψ)` by searching `a ∈ A_M` with certified
/// `‖[D, a]‖ ≤ 1`. If `ω − ψ` is nonzero on the commutant of `D` the
/// distance is infinite and the offending commutant element is returned.
pub fn mk_lower(
    tower: &UhfTower,
    alpha: &AlphaSeq,
    omega: &State,
    psi: &State,
    p: PExponent,
    budget: &Budget,
) -> Result<MetricEstimate> {
    let n = tower.dim();
    if omega.weights.len() != n || psi.weights.len() != n {
        return Err(Error::ShapeMismatch("states live on a different tower".into()));
    }
    if budget.starts == 0 {
        return Err(Error::ZeroBudget);
    }
    let delta: Vec<Complex64> = omega
        .weights
        .iter()
        .zip(&psi.weights)
        .map(|(a, b)| a - b)
        .collect();
    let diff = |a: &CMatrix| -> Complex64 { delta.iter().enumerate().map(|(x, c)| c * a[(x, x)]).sum() };
    if delta.iter().all(|c| c.norm() == 0.0) {
        return Ok(MetricEstimate {
            lower: 0.0,
            upper: 0.0,
            witness: Some(CMatrix::zeros(n, n)),
        });
    }

    let d = dirac(tower, alpha)?;
    let (comm, _) = commutant(d.entries());
    if let Some(b) = comm.iter().find(|b| diff(b).norm() > COMMUTANT_TOL) {
        return Ok(MetricEstimate {
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            witness: Some(normalize_witness(b)),
        });
    }

    let space = tower.full_space().clone();
    let dm = d.entries().clone();
    let units: Vec<CMatrix> = (0..n * n)
        .map(|k| {
            let mut m = CMatrix::zeros(n, n);
            m[(k / n, k % n)] = Complex64::new(1.0, 0.0);
            m
        })
        .collect();
    let lip = |a: &CMatrix| -> f64 {
        let c = linalg::commutator(&dm, a);
        OperatorMatrix::square(space.clone(), c)
            .map(|op| op_norm_upper(&op, p))
            .unwrap_or(f64::INFINITY)
    };
    let f = |x: &[f64]| -> f64 {
        let a = project_off(&unpack(x, &units), &comm);
        let l = lip(&a);
        let scale = a.norm();
        if l.is_nan() || l <= 1e-12 * scale {
            return f64::NEG_INFINITY;
        }
        diff(&a).re / l
    };

    let to_x = |m: &CMatrix| -> Vec<f64> { m.transpose().iter().flat_map(|c| [c.re, c.im]).collect() };
    let signs = CMatrix::from_diagonal(&CVector::from_iterator(
        n,
        delta.iter().map(|c| linalg::phase(c.conj())),
    ));
    let mut starts = vec![to_x(&signs)];
    starts.extend((0..budget.starts).map(|s| {
        let mut rng = stream_rng(budget.seed, s as u64);
        to_x(&random_complex_matrix(&mut rng, n, n))
    }));
    let best = search::maximize(&f, starts, budget.iterations);
    if !best.value.is_finite() {
        return Ok(MetricEstimate {
            lower: 0.0,
            upper: f64::INFINITY,
            witness: Some(CMatrix::zeros(n, n)),
        });
    }
    let mut w = project_off(&unpack(&best.x, &units), &comm);
    // rescale onto the constraint boundary; repeat in case rounding left
    // the certified norm slightly above 1
    for _ in 0..4 {
        let l = lip(&w);
        if l == 1.0 || (l < 1.0 && l > 1.0 - 1e-15) {
            break;
        }
        w = w.unscale(l);
    }
    while lip(&w) > 1.0 {
        w = w.unscale(1.0 + 1e-15);
    }
    Ok(MetricEstimate {
        lower: diff(&w).re.max(0.0),
        upper: f64::INFINITY,
        witness: Some(w),
    })
}

/// Interval for `min_λ ‖a − λ I‖_p`, the norm of `a` modulo scalars.
pub fn quotient_distance(
    tower: &UhfTower,
    a: &LevelOperator,
    p: PExponent,
    budget: &Budget,
) -> Result<NormEstimate> {
    if a.dims() != tower.spec().dims() {
        return Err(Error::ShapeMismatch(
            "level operator was built on a different tower".into(),
        ));
    }
    let op = a.embedded();
    let m = op.entries();
    let n = m.nrows();
    let id = CMatrix::identity(n, n);
    let eval = |z: Complex64| -> f64 {
        op.with_entries(m - &id * z)
            .map(|o| op_norm_upper(&o, p))
            .unwrap_or(f64::INFINITY)
    };

    // entries of the counting representative bound every p-norm from below
    let tilde = crate::pspace::to_counting(op, p);
    let mut lower = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                lower = lower.max(tilde[(i, j)].norm());
            } else {
                for k in 0..n {
                    lower = lower.max(0.5 * (tilde[(i, i)] - tilde[(k, k)]).norm());
                }
            }
        }
    }

    let radius = 2.0 * op_norm_upper(op, p);
    let trace_mean = m.trace() / Complex64::new(n.max(1) as f64, 0.0);
    let mut best = (eval(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
    let v = eval(trace_mean);
    if v < best.0 {
        best = (v, trace_mean);
    }
    if radius > 0.0 && best.0 > 0.0 {
        let cells = 20;
        let h = 2.0 * radius / cells as f64;
        for i in 0..=cells {
            for j in 0..=cells {
                let z = Complex64::new(-radius + i as f64 * h, -radius + j as f64 * h);
                if z.norm() <= radius {
                    let v = eval(z);
                    if v < best.0 {
                        best = (v, z);
                    }
                }
            }
        }
        let iters = budget.iterations.clamp(20, 80);
        let centre = best.1;
        let inner = |re: f64| -> (f64, f64) {
            golden_min(|im| eval(Complex64::new(re, im)), centre.im - h, centre.im + h, iters)
        };
        let (re, _) = golden_min(|re| inner(re).1, centre.re - h, centre.re + h, iters);
        let (im, v) = inner(re);
        if v < best.0 {
            best = (v, Complex64::new(re, im));
        }
    }
    let upper = best.0;
    Ok(NormEstimate {
        lower: lower.min(upper),
        upper,
        method: NormMethod::ORACLE,
    })
}

/// Golden-section search for a minimum of `f` on `[a, b]`; returns the
/// argument and value.
fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iterations: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Numerical kernel of `a ↦ [D, a]` on `A_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    pub dimension: usize,
    pub algebra_dimension: usize,
    pub basis: Vec<CMatrix>,
    /// Normalized spectral projectors of `D` other than the identity.
    pub witnesses: Vec<CMatrix>,
    /// Largest `‖[D, b]‖_p` over the basis.
    pub max_residual: f64,
}

impl DegeneracyReport {
    /// Distance from `m` to the span of the basis, in Frobenius norm.
    pub fn span_residual(&self, m: &CMatrix) -> f64 {
        project_off(m, &self.basis).norm()
    }
}

pub fn degeneracy_probe(tower: &UhfTower, alpha: &AlphaSeq, p: PExponent) -> Result<DegeneracyReport> {
    let d = dirac(tower, alpha)?;
    let (basis, projectors) = commutant(d.entries());
    let mut max_residual = 0.0_f64;
    for b in &basis {
        let c = d.with_entries(linalg::commutator(d.entries(), b))?;
        max_residual = max_residual.max(op_norm_upper(&c, p));
    }
    if max_residual >= COMMUTANT_TOL {
        return Err(Error::InvariantViolated(format!(
            "commutant basis element has ‖[D, b]‖ = {max_residual:e}"
        )));
    }
    let witnesses = if projectors.len() > 1 {
        projectors.iter().map(normalize_witness).collect()
    } else {
        Vec::new()
    };
    let n = tower.dim();
    Ok(DegeneracyReport {
        dimension: basis.len(),
        algebra_dimension: n * n,
        basis,
        witnesses,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uhf::{build_tower, embed_algebra, UhfSpec, DEFAULT_TOWER_CAP};

    fn tower(dims: &[usize]) -> UhfTower {
        build_tower(&UhfSpec::new(dims.to_vec()).unwrap(), DEFAULT_TOWER_CAP).unwrap()
    }
    fn alpha(v: &[f64]) -> AlphaSeq {
        AlphaSeq::new(v.to_vec()).unwrap()
    }
    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }
    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn states_validate() {
        let t = tower(&[1, 2]);
        assert!(State::point(&t, 2).is_err());
        assert!(State::custom(&t, vec![c(0.5), c(0.4)]).is_err());
        assert!(State::custom(&t, vec![c(0.5)]).is_err());
        let s = State::custom(&t, vec![c(2.0), c(-1.0)]).unwrap();
        assert_eq!(s.evaluate(&CMatrix::identity(2, 2)).unwrap(), c(1.0));
        assert_eq!(State::trace(&t).evaluate(&CMatrix::identity(2, 2)).unwrap(), c(1.0));
    }

    #[test]
    fn key_estimate_identity() {
        let t = tower(&[1, 2, 2]);
        let al = alpha(&[0.0, 1.0, 3.0]);
        let id = embed_algebra(&t, 2, CMatrix::identity(4, 4)).unwrap();
        assert_eq!(key_estimate(&t, &al, &id, 1, p(2.0)).unwrap(), (0.0, 0.0));
        let mut rng = stream_rng(5, 0);
        let a = t.random_level_operator(2, &mut rng).unwrap();
        let (l, r) = key_estimate(&t, &al, &a, 1, p(2.0)).unwrap();
        assert!((l - r).abs() < 1e-10);
        let (l2, r2) = key_estimate(&t, &al.scaled(3.0).unwrap(), &a, 2, p(1.5)).unwrap();
        let (l1, _) = key_estimate(&t, &al, &a, 2, p(1.5)).unwrap();
        assert!((l2 - 3.0 * l1).abs() < 1e-10 && (l2 - r2).abs() < 1e-10);
        assert!(key_estimate(&t, &al, &a, 0, p(2.0)).is_err());
        assert!(key_estimate(&t, &al, &a, 3, p(2.0)).is_err());
    }

    #[test]
    fn alpha_auto_formula() {
        let a = alpha_auto(&CnTable::from_constants(&[1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(a.values(), &[0.0, 2.0, 4.0, 8.0]);
        let a = alpha_auto(&CnTable::from_constants(&[3.0, 1.0]).unwrap()).unwrap();
        assert_eq!(a.values(), &[0.0, 6.0, 4.0]);
        let err = alpha_auto(&CnTable::from_constants(&[1.0, f64::INFINITY]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Degenerate { level: 2, .. }));
        assert!(CnTable::from_constants(&[0.5]).is_err());
    }

    #[test]
    fn mk_upper_geometric() {
        let cn = CnTable::from_constants(&[1.0, 1.0, 1.0]).unwrap();
        let a = alpha_auto(&cn).unwrap();
        assert!(mk_upper(&a, &cn).unwrap() <= 2.0);
        let cn = CnTable::from_constants(&[1.0, f64::INFINITY]).unwrap();
        assert_eq!(mk_upper(&alpha(&[0.0, 1.0, 1.0]), &cn).unwrap(), f64::INFINITY);
        assert!(mk_upper(&alpha(&[0.0, 1.0]), &cn).is_err());
    }

    #[test]
    fn spatial_kernel_is_degenerate() {
        let t = tower(&[1, 2]);
        let cn = cn_constants(&t, p(2.0), &Budget::default()).unwrap();
        let l = &cn.levels()[0];
        assert!(!l.kernel_flag && l.c.is_infinite());
        let w = l.witness.as_ref().unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(1.0), c(-1.0), c(-1.0), c(1.0)]);
        assert!(linalg::max_abs_diff(w, &want) < 1e-10, "{w}");
    }

    #[test]
    fn restricted_seminorm_ratio_is_one() {
        let t = tower(&[1, 2, 2]);
        let one = t.one().coords().clone();
        for n in 1..=2 {
            let q = t.q(n).entries();
            let basis: Vec<CMatrix> = level_subspace_basis(&t, n)
                .unwrap()
                .iter()
                .map(|b| q * b * &one * one.transpose() / c(4.0))
                .collect();
            // keep a linearly independent subset: one element per range vector
            let basis: Vec<CMatrix> = basis.into_iter().step_by(4).collect();
            for pv in [1.0, 2.0] {
                let lc = seminorm_constant(&t, n, &basis, p(pv), &Budget::default()).unwrap();
                assert!(lc.kernel_flag);
                assert!(lc.c >= 1.0 && lc.c < 1.0 + 1e-6, "{}", lc.c);
            }
        }
    }

    #[test]
    fn mk_between_equal_states_is_zero() {
        let t = tower(&[1, 2]);
        let s = State::point(&t, 0).unwrap();
        let e = mk_lower(&t, &alpha(&[0.0, 1.0]), &s, &s, p(2.0), &Budget::default()).unwrap();
        assert_eq!(e.lower, 0.0);
        assert_eq!(linalg::max_abs(e.witness.as_ref().unwrap()), 0.0);
    }

    #[test]
    fn mk_two_points() {
        let t = tower(&[1, 2]);
        let w = State::point(&t, 0).unwrap();
        let s = State::point(&t, 1).unwrap();
        let b = Budget {
            starts: 4,
            iterations: 60,
            ..Budget::default()
        };
        let e = mk_lower(&t, &alpha(&[0.0, 1.0]), &w, &s, p(2.0), &b).unwrap();
        assert!((e.lower - 2.0).abs() < SEARCH_TOL, "{}", e.lower);
        let e3 = mk_lower(&t, &alpha(&[0.0, 3.0]), &w, &s, p(2.0), &b).unwrap();
        assert!((e3.lower - 2.0 / 3.0).abs() < 2.0 * SEARCH_TOL);
    }

    #[test]
    fn mk_infinite_when_commutant_separates() {
        // D = 0: every matrix commutes, point states differ on diag(1, 0)
        let t = tower(&[1, 2]);
        let w = State::point(&t, 0).unwrap();
        let s = State::point(&t, 1).unwrap();
        let e = mk_lower(&t, &AlphaSeq::zeros(1), &w, &s, p(2.0), &Budget::default()).unwrap();
        assert!(e.lower.is_infinite());
        assert!(mk_lower(&t, &AlphaSeq::zeros(1), &w, &s, p(2.0), &Budget { starts: 0, ..Budget::default() }).is_err());
    }

    #[test]
    fn quotient_distance_examples() {
        let t = tower(&[1, 2]);
        let id = embed_algebra(&t, 1, CMatrix::identity(2, 2)).unwrap();
        let q = quotient_distance(&t, &id, p(2.0), &Budget::default()).unwrap();
        assert_eq!((q.lower, q.upper), (0.0, 0.0));

        let a = embed_algebra(&t, 1, CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(-1.0)]))).unwrap();
        let q = quotient_distance(&t, &a, p(2.0), &Budget::default()).unwrap();
        assert!((q.lower - 1.0).abs() < 1e-12 && (q.upper - 1.0).abs() < 1e-12);

        let small = CMatrix::from_row_slice(2, 2, &[c(0.01), c(-0.02), c(0.0), c(0.015)]);
        let a = embed_algebra(&t, 1, CMatrix::identity(2, 2) * c(3.0) + &small).unwrap();
        let q = quotient_distance(&t, &a, p(3.0), &Budget::default()).unwrap();
        let b = OperatorMatrix::square(t.full_space().clone(), small).unwrap();
        assert!(q.upper <= op_norm_upper(&b, p(3.0)) + 1e-9);
        assert!(q.lower <= q.upper);
    }

    #[test]
    fn degeneracy_examples() {
        let t = tower(&[1, 2]);
        let r = degeneracy_probe(&t, &alpha(&[0.0, 1.0]), p(2.0)).unwrap();
        assert_eq!(r.dimension, 2);
        let want = CMatrix::from_row_slice(2, 2, &[c(1.0), c(-1.0), c(-1.0), c(1.0)]);
        assert!(r.witnesses.iter().any(|w| linalg::max_abs_diff(w, &want) < 1e-10));
        assert!(r.span_residual(&want) < 1e-10);
        assert!(r.span_residual(&CMatrix::identity(2, 2)) < 1e-10);

        let t = tower(&[1, 2, 2]);
        let r = degeneracy_probe(&t, &AlphaSeq::zeros(2), p(1.5)).unwrap();
        assert_eq!(r.dimension, 16);
        let r = degeneracy_probe(&t, &alpha(&[0.0, 1.0, 2.0]), p(2.0)).unwrap();
        assert!(r.dimension >= 1);
    }
}
