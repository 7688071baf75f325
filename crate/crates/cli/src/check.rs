//! The invariant suite behind `lpst check`.
//!
//! Every suite draws its random data from its own seeded stream, runs its
//! cases in a fixed order and records the largest deviation seen, so the
//! report is byte-identical for a given seed at any thread count.

use lpst_core::group::{
    ball, commutator_bound, commutator_matrix, commutator_norm_est, commutator_series,
    dirac_matrix, lambda_matrix, resolvent_approx, GroupAlgElem, GroupElement, GroupModel,
    LengthFn, ResolventMode, DEFAULT_BALL_CAP,
};
use lpst_core::io::{self, AlphaChoice, StateSpec, UhfSpecFile};
use lpst_core::linalg::{
    self, max_abs, max_abs_diff, random_complex_matrix, random_complex_vector, stream_rng,
};
use lpst_core::pspace::{
    op_norm, op_norm_upper, oracle_norm, vec_norm, Budget, OperatorMatrix, PExponent, PVector,
    SpaceKind, WeightedPointSpace,
};
use lpst_core::qmetric::{
    alpha_auto, cn_constants, degeneracy_probe, key_estimate, level_subspace_basis, mk_lower,
    mk_upper, quotient_distance, seminorm_constant, CnTable, State, SEARCH_TOL,
};
use lpst_core::tensor::{kron, kron_vec, product_space};
use lpst_core::uhf::{
    build_tower, dirac, eigenvalue_multiset, embed_algebra, resolvent_inverse,
    AlphaSeq, UhfSpec, UhfTower, DEFAULT_TOWER_CAP,
};
use lpst_core::{CMatrix, CVector, Complex64};
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::report::{num, Report, Table};

pub const PROFILES: [&[usize]; 4] = [&[1, 2], &[1, 2, 2], &[1, 3, 2], &[1, 2, 2, 2]];
pub const EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

/// Spectral distance between the two point states of `dims = (1, 2)` with
/// `α = (0, 1)` at `p = 2`, from a dense grid over real 2×2 cores.
pub const MK_GRID_ORACLE: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub cases: usize,
    pub passed: usize,
    pub max_deviation: f64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str, tolerance: f64) -> Self {
        SuiteResult {
            name,
            tolerance,
            cases: 0,
            passed: 0,
            max_deviation: 0.0,
            failures: Vec::new(),
        }
    }

    /// Records a case whose violation size is `deviation`.
    fn check(&mut self, case: impl FnOnce() -> String, deviation: f64) {
        self.cases += 1;
        if deviation.is_nan() {
            self.max_deviation = f64::NAN;
        } else if !self.max_deviation.is_nan() {
            self.max_deviation = self.max_deviation.max(deviation);
        }
        if deviation <= self.tolerance {
            self.passed += 1;
        } else {
            self.failures.push(format!("{}: deviation {}", case(), num(deviation)));
        }
    }

    fn holds(&mut self, case: impl FnOnce() -> String, ok: bool) {
        self.cases += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(case());
        }
    }

    fn error(&mut self, case: impl FnOnce() -> String, e: impl std::fmt::Display) {
        self.cases += 1;
        self.failures.push(format!("{}: error: {e}", case()));
    }

    fn result<T, E: std::fmt::Display>(
        &mut self,
        case: impl Fn() -> String,
        r: Result<T, E>,
    ) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(case, e);
                None
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub seed: u64,
    pub quick: bool,
}

impl Ctx {
    fn rng(&self, suite: u64, case: u64) -> impl Rng + use<> {
        stream_rng(self.seed.wrapping_add(suite << 32), case)
    }

    fn count(&self, full: usize) -> usize {
        if self.quick {
            full.div_ceil(4)
        } else {
            full
        }
    }

    fn budget(&self) -> Budget {
        Budget::with_seed(self.seed)
    }
}

fn pe(p: f64) -> PExponent {
    PExponent::new(p).expect("exponent constants are valid")
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn tower(dims: &[usize]) -> UhfTower {
    build_tower(
        &UhfSpec::new(dims.to_vec()).expect("profile is valid"),
        DEFAULT_TOWER_CAP,
    )
    .expect("profile fits the cap")
}

fn random_space<R: Rng>(rng: &mut R, n: usize) -> WeightedPointSpace {
    match rng.random_range(0..3) {
        0 => WeightedPointSpace::counting(n),
        1 => WeightedPointSpace::uniform(n),
        _ => WeightedPointSpace::new(
            (0..n).map(|_| rng.random_range(0.2..2.0)).collect(),
            SpaceKind::General,
        )
        .expect("positive weights"),
    }
}

fn random_op<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> OperatorMatrix {
    let dom = random_space(rng, cols);
    let cod = random_space(rng, rows);
    let m = random_complex_matrix(rng, rows, cols);
    OperatorMatrix::new(dom, cod, m).expect("shapes match")
}

fn random_square_counting<R: Rng>(rng: &mut R, n: usize) -> OperatorMatrix {
    OperatorMatrix::on_counting(random_complex_matrix(rng, n, n))
}

// ---------------------------------------------------------------- pspace

fn pspace_interval_order(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("pspace.interval_order", 0.0);
    for (k, &p) in EXPONENTS.iter().enumerate() {
        for c in 0..ctx.count(20) {
            let mut rng = ctx.rng(1, (k * 1000 + c) as u64);
            let (r, n) = (rng.random_range(1..5), rng.random_range(1..5));
            let a = random_op(&mut rng, r, n);
            let case = || format!("p={p} case={c}");
            if let Some(e) = s.result(case, op_norm(&a, pe(p), &ctx.budget())) {
                s.check(case, (e.lower - e.upper).max(0.0));
            }
        }
    }
    s
}

fn pspace_scaling(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("pspace.scaling", 1e-10);
    for (k, &p) in EXPONENTS.iter().enumerate() {
        for c in 0..ctx.count(10) {
            let mut rng = ctx.rng(2, (k * 1000 + c) as u64);
            let a = random_op(&mut rng, 3, 3);
            let z = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let case = || format!("p={p} case={c}");
            let both = op_norm(&a, pe(p), &ctx.budget())
                .and_then(|x| Ok((x, op_norm(&a.scale(z), pe(p), &ctx.budget())?)));
            if let Some((x, y)) = s.result(case, both) {
                let dev = rel(y.lower, z.norm() * x.lower).max(rel(y.upper, z.norm() * x.upper));
                s.check(case, dev);
            }
        }
    }
    s
}

fn pspace_p2_oracle(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("pspace.p2_oracle", 1e-3);
    for c in 0..ctx.count(12) {
        let mut rng = ctx.rng(3, c as u64);
        let a = random_square_counting(&mut rng, 3);
        let case = || format!("case={c}");
        let r = op_norm(&a, pe(2.0), &ctx.budget())
            .and_then(|e| Ok((e, oracle_norm(&a, pe(2.0), ctx.seed)?)));
        if let Some((e, o)) = s.result(case, r) {
            s.check(case, rel(o, e.lower));
        }
    }
    s
}

fn pspace_oracle_bounds(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("pspace.oracle_within_upper", 1e-9);
    for &p in &[1.5, 3.0] {
        for c in 0..ctx.count(8) {
            let mut rng = ctx.rng(4, (p * 10.0) as u64 * 1000 + c as u64);
            let a = random_square_counting(&mut rng, 3);
            let case = || format!("p={p} case={c}");
            let r = op_norm(&a, pe(p), &ctx.budget())
                .and_then(|e| Ok((e, oracle_norm(&a, pe(p), ctx.seed)?)));
            if let Some((e, o)) = s.result(case, r) {
                s.check(case, (o - e.upper).max(0.0) / e.upper.max(1e-300));
            }
        }
    }
    s
}

fn pspace_submultiplicative(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("pspace.oracle_submultiplicative", 1e-6);
    for &p in &[1.5, 3.0] {
        for c in 0..ctx.count(6) {
            let mut rng = ctx.rng(5, (p * 10.0) as u64 * 1000 + c as u64);
            let a = random_square_counting(&mut rng, 3);
            let b = random_square_counting(&mut rng, 3);
            let case = || format!("p={p} case={c}");
            let ab = a.compose(&b).and_then(|ab| oracle_norm(&ab, pe(p), ctx.seed));
            if let Some(o) = s.result(case, ab) {
                let bound = op_norm_upper(&a, pe(p)) * op_norm_upper(&b, pe(p));
                s.check(case, (o - bound).max(0.0));
            }
        }
    }
    s
}

fn pspace_uniform_invariance(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("pspace.uniform_invariance", 0.0);
    for (k, &p) in EXPONENTS.iter().enumerate() {
        for c in 0..ctx.count(8) {
            let mut rng = ctx.rng(6, (k * 1000 + c) as u64);
            let n = rng.random_range(1..6);
            let m = random_complex_matrix(&mut rng, n, n);
            let u = OperatorMatrix::square(WeightedPointSpace::uniform(n), m.clone());
            let case = || format!("p={p} n={n} case={c}");
            let r = u.and_then(|u| {
                Ok((
                    op_norm(&u, pe(p), &ctx.budget())?,
                    op_norm(&OperatorMatrix::on_counting(m), pe(p), &ctx.budget())?,
                ))
            });
            if let Some((x, y)) = s.result(case, r) {
                s.check(case, (x.lower - y.lower).abs().max((x.upper - y.upper).abs()));
            }
        }
    }
    s
}

// ---------------------------------------------------------------- tensor

fn tensor_mixed_product(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("tensor.mixed_product", 1e-12);
    for c in 0..ctx.count(20) {
        let mut rng = ctx.rng(7, c as u64);
        let (n, m) = (rng.random_range(1..4), rng.random_range(1..4));
        let a1 = random_complex_matrix(&mut rng, n, n);
        let a2 = random_complex_matrix(&mut rng, n, n);
        let b1 = random_complex_matrix(&mut rng, m, m);
        let b2 = random_complex_matrix(&mut rng, m, m);
        let lhs = linalg::kron(&a1, &b1) * linalg::kron(&a2, &b2);
        let rhs = linalg::kron(&(&a1 * &a2), &(&b1 * &b2));
        s.check(|| format!("case={c}"), max_abs_diff(&lhs, &rhs));
    }
    s
}

fn tensor_elementary_norm(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("tensor.elementary_norm", 1e-12);
    for (k, &p) in EXPONENTS.iter().enumerate() {
        for c in 0..ctx.count(10) {
            let mut rng = ctx.rng(8, (k * 1000 + c) as u64);
            let (n, m) = (rng.random_range(1..5), rng.random_range(1..5));
            let sx = random_space(&mut rng, n);
            let sy = random_space(&mut rng, m);
            let x = PVector::new(sx, random_complex_vector(&mut rng, n)).expect("length");
            let y = PVector::new(sy, random_complex_vector(&mut rng, m)).expect("length");
            let xy = kron_vec(&x, &y);
            let want = vec_norm(&x, pe(p)) * vec_norm(&y, pe(p));
            s.check(|| format!("p={p} case={c}"), rel(vec_norm(&xy, pe(p)), want));
        }
    }
    s
}

fn tensor_dimension(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("tensor.flat_dimension", 0.0);
    for c in 0..ctx.count(10) {
        let mut rng = ctx.rng(9, c as u64);
        let k = rng.random_range(1..4);
        let factors: Vec<WeightedPointSpace> = (0..k)
            .map(|_| {
                let n = rng.random_range(1..5);
                random_space(&mut rng, n)
            })
            .collect();
        let ps = product_space(&factors);
        let want: usize = factors.iter().map(WeightedPointSpace::len).product();
        let round_trip = (0..ps.flat().len()).all(|i| ps.flat_index(&ps.multi_index(i)) == i);
        s.holds(|| format!("case={c}"), ps.flat().len() == want && round_trip);
    }
    s
}

fn tensor_multiplicativity_p2(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("tensor.multiplicativity_p2", 1e-8);
    for c in 0..ctx.count(50) {
        let mut rng = ctx.rng(10, c as u64);
        let n = if c % 2 == 0 { 2 } else { 3 };
        let a = random_square_counting(&mut rng, n);
        let b = random_square_counting(&mut rng, n);
        let p = pe(2.0);
        let ab = kron(&a, &b);
        s.check(
            || format!("n={n} case={c}"),
            rel(op_norm_upper(&ab, p), op_norm_upper(&a, p) * op_norm_upper(&b, p)),
        );
    }
    s
}

fn tensor_interval_containment(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("tensor.interval_containment", 1e-9);
    for &p in &[1.5, 3.0] {
        for c in 0..ctx.count(20) {
            let mut rng = ctx.rng(11, (p * 10.0) as u64 * 1000 + c as u64);
            let n = if c % 2 == 0 { 2 } else { 3 };
            let a = random_square_counting(&mut rng, n);
            let b = random_square_counting(&mut rng, n);
            let case = || format!("p={p} n={n} case={c}");
            let budget = ctx.budget();
            let r = (|| {
                Ok::<_, lpst_core::Error>((
                    op_norm(&a, pe(p), &budget)?,
                    op_norm(&b, pe(p), &budget)?,
                    op_norm(&kron(&a, &b), pe(p), &budget)?,
                ))
            })();
            if let Some((x, y, xy)) = s.result(case, r) {
                let dev = (x.lower * y.lower - xy.upper)
                    .max(xy.lower - x.upper * y.upper)
                    .max(0.0);
                s.check(case, dev);
            }
        }
    }
    s
}

// ---------------------------------------------------------------- group

const GROUPS: [GroupModel; 4] = [
    GroupModel::Integers,
    GroupModel::Lattice(2),
    GroupModel::Free(2),
    GroupModel::Cyclic(6),
];

fn random_group_elem<R: Rng>(rng: &mut R, pool: &[GroupElement], max_support: usize) -> GroupAlgElem {
    let k = rng.random_range(1..=max_support);
    GroupAlgElem::new((0..k).map(|_| {
        let g = pool[rng.random_range(0..pool.len())].clone();
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        (g, z)
    }))
}

fn group_length_axioms(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.length_axioms", 0.0);
    for model in GROUPS {
        let length = LengthFn::standard(model);
        let case = || format!("group={model}");
        let Some(t) = s.result(case, ball(model, length, 3.0, DEFAULT_BALL_CAP)) else {
            continue;
        };
        let mut rng = ctx.rng(12, t.len() as u64);
        let e = model.identity();
        s.holds(|| format!("group={model} identity"), length.eval(&e) == 0.0);
        for c in 0..ctx.count(40) {
            let g = &t.elements()[rng.random_range(0..t.len())];
            let h = &t.elements()[rng.random_range(0..t.len())];
            let ok = length.eval(&model.invert(g)) == length.eval(g)
                && length.eval(&model.multiply(g, h)) <= length.eval(g) + length.eval(h)
                && (length.eval(g) > 0.0 || *g == e);
            s.holds(|| format!("group={model} case={c}"), ok);
        }
    }
    s
}

fn group_homomorphism(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.homomorphism_half_ball", 1e-12);
    for (k, model) in GROUPS.into_iter().enumerate() {
        let length = LengthFn::standard(model);
        let (Ok(full), Ok(half)) = (
            ball(model, length, 4.0, DEFAULT_BALL_CAP),
            ball(model, length, 2.0, DEFAULT_BALL_CAP),
        ) else {
            s.error(|| format!("group={model}"), "ball construction failed");
            continue;
        };
        let small = ball(model, length, 1.0, DEFAULT_BALL_CAP).expect("radius 1 ball is tiny");
        for c in 0..ctx.count(8) {
            let mut rng = ctx.rng(13, (k * 1000 + c) as u64);
            let a = random_group_elem(&mut rng, small.elements(), 3);
            let b = random_group_elem(&mut rng, small.elements(), 3);
            let ab = a.convolve(&b, &model);
            let la = lambda_matrix(&a, &full);
            let lb = lambda_matrix(&b, &full);
            let lab = lambda_matrix(&ab, &full);
            let prod = la.entries() * lb.entries();
            let idx: Vec<usize> = half
                .elements()
                .iter()
                .map(|g| full.index_of(g).expect("half ball inside full ball"))
                .collect();
            let mut dev = 0.0_f64;
            for &i in &idx {
                for &j in &idx {
                    dev = dev.max((prod[(i, j)] - lab.entries()[(i, j)]).norm());
                }
            }
            s.check(|| format!("group={model} case={c}"), dev);
        }
    }
    s
}

fn group_dirac_spectrum(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.dirac_spectrum", 0.0);
    for model in GROUPS {
        let length = LengthFn::standard(model);
        let t = ball(model, length, 3.0, DEFAULT_BALL_CAP).expect("small ball");
        let d = dirac_matrix(&t);
        let lengths = t.lengths();
        let mut dev = 0.0_f64;
        for (i, &len) in lengths.iter().enumerate() {
            for j in 0..t.len() {
                let want = if i == j { re(len) } else { re(0.0) };
                dev = dev.max((d.entries()[(i, j)] - want).norm());
            }
        }
        s.check(|| format!("group={model}"), dev);
    }
    s
}

fn group_commutator_bound(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.commutator_below_analytic_bound", 1e-9);
    let budget = ctx.budget();
    for (k, model) in GROUPS.into_iter().enumerate() {
        let length = LengthFn::standard(model);
        let pool = ball(model, length, 2.0, DEFAULT_BALL_CAP).expect("small ball");
        let t = ball(model, length, 3.0, DEFAULT_BALL_CAP).expect("small ball");
        let cases: Vec<(f64, usize)> = EXPONENTS
            .iter()
            .flat_map(|&p| (0..ctx.count(8)).map(move |c| (p, c)))
            .collect();
        let results: Vec<_> = cases
            .par_iter()
            .map(|&(p, c)| {
                let mut rng = ctx.rng(14, (k * 100_000) as u64 + (p * 10.0) as u64 * 1000 + c as u64);
                let a = random_group_elem(&mut rng, pool.elements(), 4);
                let est = commutator_norm_est(&a, &t, pe(p), &budget);
                (est, commutator_bound(&a, &length, pe(p)))
            })
            .collect();
        for (&(p, c), (est, bound)) in cases.iter().zip(results) {
            let case = || format!("group={model} p={p} case={c}");
            if let Some(e) = s.result(case, est) {
                s.check(case, (e.lower - bound).max(0.0));
            }
        }
    }
    s
}

fn delta_one() -> GroupAlgElem {
    GroupAlgElem::delta(GroupElement::Int(1))
}

fn group_monotone(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.monotone_in_radius", 0.0);
    let budget = ctx.budget();
    let radii: Vec<f64> = (2..=8).map(f64::from).collect();
    for &p in &EXPONENTS {
        let case = || format!("z delta1 p={p}");
        let r = commutator_series(&delta_one(), GroupModel::Integers, &radii, pe(p), &budget, DEFAULT_BALL_CAP);
        if let Some(series) = s.result(case, r) {
            for w in series.windows(2) {
                s.check(|| format!("z delta1 p={p} R={}", w[1].0), (w[0].1.lower - w[1].1.lower).max(0.0));
            }
        }
    }
    let model = GroupModel::Free(2);
    let pool = ball(model, LengthFn::standard(model), 1.0, DEFAULT_BALL_CAP).expect("tiny ball");
    for c in 0..ctx.count(4) {
        let mut rng = ctx.rng(15, c as u64);
        let a = random_group_elem(&mut rng, pool.elements(), 3);
        let r = commutator_series(&a, model, &[1.0, 2.0, 3.0], pe(1.5), &budget, DEFAULT_BALL_CAP);
        if let Some(series) = s.result(|| format!("free2 case={c}"), r) {
            for w in series.windows(2) {
                s.check(|| format!("free2 case={c} R={}", w[1].0), (w[0].1.lower - w[1].1.lower).max(0.0));
            }
        }
    }
    s
}

fn group_delta_one(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.delta1_commutator_p2", 1e-8);
    let length = LengthFn::standard(GroupModel::Integers);
    for r in 3..=8 {
        let case = || format!("R={r}");
        let est = ball(GroupModel::Integers, length, r as f64, DEFAULT_BALL_CAP)
            .and_then(|t| commutator_norm_est(&delta_one(), &t, pe(2.0), &ctx.budget()));
        if let Some(e) = s.result(case, est) {
            s.check(case, (e.lower - 1.0).abs());
        }
    }
    s
}

fn group_resolvent(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.resolvent", 1e-12);
    let length = LengthFn::standard(GroupModel::Integers);
    for r in 1..=8 {
        let t = ball(GroupModel::Integers, length, r as f64, DEFAULT_BALL_CAP).expect("small ball");
        let case = || format!("squared R={r}");
        if let Some((_, residual)) = s.result(case, resolvent_approx(&t, ResolventMode::Squared)) {
            let next = (r + 1) as f64;
            s.check(case, (residual - 1.0 / (1.0 + next * next)).abs());
        }
    }
    let lambda = Complex64::new(0.5, 0.5);
    for model in GROUPS {
        let t = ball(model, LengthFn::standard(model), 3.0, DEFAULT_BALL_CAP).expect("small ball");
        let case = || format!("shifted group={model}");
        if let Some((j, _)) = s.result(case, resolvent_approx(&t, ResolventMode::Shifted(lambda))) {
            let d = dirac_matrix(&t);
            let n = t.len();
            let shifted = d.entries() - CMatrix::identity(n, n) * lambda;
            s.check(case, max_abs_diff(&(shifted * j.entries()), &CMatrix::identity(n, n)));
        }
    }
    s
}

fn group_commutator_support(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("group.support_precondition", 0.0);
    let length = LengthFn::standard(GroupModel::Integers);
    let t = ball(GroupModel::Integers, length, 2.0, DEFAULT_BALL_CAP).expect("small ball");
    let far = GroupAlgElem::delta(GroupElement::Int(5));
    s.holds(|| "support outside ball rejected".into(), commutator_matrix(&far, &t).is_err());
    s
}

// ---------------------------------------------------------------- uhf

fn uhf_tower_algebra(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.tower_algebra", 1e-12);
    for dims in PROFILES {
        let t = tower(dims);
        let m = t.levels();
        let n_all = t.dim();
        let id = CMatrix::identity(n_all, n_all);
        let tag = format!("{dims:?}");
        let mut sum = CMatrix::zeros(n_all, n_all);
        for n in 0..=m {
            let nn = t.spec().level_dim(n);
            let pi_iota = t.pi(n).entries() * t.iota(n).entries();
            s.check(|| format!("{tag} pi∘iota n={n}"), max_abs_diff(&pi_iota, &CMatrix::identity(nn, nn)));
            let q = t.q(n).entries();
            s.check(|| format!("{tag} Q^2 n={n}"), max_abs_diff(&(q * q), q));
            sum += q;
            for k in 0..=m {
                let pp = t.projection(n).entries() * t.projection(k).entries();
                s.check(
                    || format!("{tag} P_{n}P_{k}"),
                    max_abs_diff(&pp, t.projection(n.min(k)).entries()),
                );
                if k != n {
                    s.check(|| format!("{tag} Q_{n}Q_{k}"), max_abs(&(q * t.q(k).entries())));
                }
            }
        }
        s.check(|| format!("{tag} sum Q"), max_abs_diff(&sum, &id));
    }
    s
}

fn uhf_tower_norms(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.tower_norms", 1e-9);
    let budget = ctx.budget();
    for dims in PROFILES {
        let t = tower(dims);
        for &p in &EXPONENTS {
            for n in 0..=t.levels() {
                let case = || format!("{dims:?} p={p} n={n}");
                let r = op_norm(t.iota(n), pe(p), &budget)
                    .and_then(|i| Ok((i, op_norm(t.pi(n), pe(p), &budget)?)));
                if let Some((iota, pi)) = s.result(case, r) {
                    let iso = (iota.lower - 1.0).max(1.0 - iota.upper).max(0.0);
                    s.check(|| format!("{dims:?} p={p} iota n={n}"), iso);
                    s.check(|| format!("{dims:?} p={p} pi n={n}"), (pi.upper - 1.0).max(0.0));
                }
            }
        }
    }
    s
}

fn uhf_commutation(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.commutation_lemma", 1e-12);
    for (k, dims) in PROFILES.iter().enumerate() {
        let t = tower(dims);
        for n in 0..=t.levels() {
            for c in 0..ctx.count(20) {
                let mut rng = ctx.rng(16, (k * 100_000 + n * 1000 + c) as u64);
                let Some(a) = s.result(|| format!("{dims:?} n={n}"), t.random_level_operator(n, &mut rng)) else {
                    continue;
                };
                let e = a.embedded().entries();
                let mut dev = 0.0_f64;
                for m in n..=t.levels() {
                    let pm = t.projection(m).entries();
                    dev = dev.max(max_abs_diff(&(e * pm), &(pm * e)));
                }
                s.check(|| format!("{dims:?} n={n} case={c}"), dev);
            }
        }
    }
    s
}

fn uhf_dirac(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.dirac_spectrum", 1e-8);
    let t = tower(&[1, 2, 2]);
    let alpha = AlphaSeq::new(vec![0.0, 1.0, 2.0]).expect("valid alpha");
    if let Some(d) = s.result(|| "(1,2,2)".into(), dirac(&t, &alpha)) {
        let ev = eigenvalue_multiset(&d);
        let dev = ev
            .iter()
            .zip([0.0, 1.0, 2.0, 2.0])
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        s.check(|| "(1,2,2) alpha=(0,1,2)".into(), dev);
    }
    for dims in PROFILES {
        let t = tower(dims);
        let alpha = AlphaSeq::linear(t.levels());
        let ranks = t.q_ranks();
        let mut want: Vec<f64> = ranks
            .iter()
            .enumerate()
            .flat_map(|(n, r)| std::iter::repeat_n(n as f64, *r))
            .collect();
        want.sort_by(f64::total_cmp);
        if let Some(d) = s.result(|| format!("{dims:?}"), dirac(&t, &alpha)) {
            let ev = eigenvalue_multiset(&d);
            let dev = if ev.len() == want.len() {
                ev.iter().zip(&want).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
            } else {
                f64::INFINITY
            };
            s.check(|| format!("{dims:?} linear alpha"), dev);
        }
    }
    s
}

fn uhf_resolvent(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.resolvent_inverse", 1e-10);
    for dims in PROFILES {
        let t = tower(dims);
        let alpha = AlphaSeq::new((0..=t.levels()).map(|n| (n * n) as f64 * 0.75).collect()).expect("valid");
        let case = || format!("{dims:?}");
        let r = dirac(&t, &alpha).and_then(|d| Ok((d, resolvent_inverse(&t, &alpha)?)));
        if let Some((d, r)) = s.result(case, r) {
            let n = t.dim();
            let id = CMatrix::identity(n, n);
            let lhs = (&id + d.entries() * d.entries()) * r.entries();
            s.check(case, max_abs_diff(&lhs, &id));
        }
    }
    s
}

fn uhf_q_ranks(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.q_ranks", 0.0);
    for dims in PROFILES {
        let t = tower(dims);
        let ranks = t.q_ranks();
        for (n, r) in ranks.iter().enumerate() {
            let want = if n == 0 {
                1
            } else {
                t.spec().level_dim(n) - t.spec().level_dim(n - 1)
            };
            s.holds(|| format!("{dims:?} n={n}: rank {r}, want {want}"), *r == want);
        }
    }
    s
}

fn uhf_strong_convergence(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("uhf.strong_convergence", 0.0);
    for (k, dims) in PROFILES.iter().enumerate() {
        let t = tower(dims);
        for &p in &EXPONENTS {
            let mut rng = ctx.rng(17, (k * 1000) as u64 + (p * 10.0) as u64);
            let eta = PVector::new(t.full_space().clone(), random_complex_vector(&mut rng, t.dim()))
                .expect("length");
            let case = || format!("{dims:?} p={p}");
            if let Some(profile) = s.result(case, t.strong_convergence_profile(&eta, pe(p))) {
                let bound = 2.0 * vec_norm(&eta, pe(p));
                let over = profile.iter().fold(0.0_f64, |m, v| m.max(v - bound));
                s.check(|| format!("{dims:?} p={p} terms"), over.max(0.0));
                s.check(|| format!("{dims:?} p={p} last"), *profile.last().expect("nonempty"));
            }
        }
    }
    s
}

// ---------------------------------------------------------------- qmetric

fn random_alpha<R: Rng>(rng: &mut R, levels: usize) -> AlphaSeq {
    let mut v = vec![0.0];
    v.extend((0..levels).map(|_| rng.random_range(0.1..5.0)));
    AlphaSeq::new(v).expect("positive alpha")
}

fn qmetric_key_estimate(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.key_estimate", 1e-10);
    for c in 0..30 {
        let mut rng = ctx.rng(18, c as u64);
        let dims = PROFILES[c % PROFILES.len()];
        let t = tower(dims);
        let level = rng.random_range(0..=t.levels());
        let n = rng.random_range(1..=t.levels());
        let p = EXPONENTS[rng.random_range(0..EXPONENTS.len())];
        let alpha = random_alpha(&mut rng, t.levels());
        let case = || format!("{dims:?} level={level} n={n} p={p}");
        let r = t
            .random_level_operator(level, &mut rng)
            .and_then(|a| key_estimate(&t, &alpha, &a, n, pe(p)));
        if let Some((l, r)) = s.result(case, r) {
            s.check(case, (l - r).abs());
        }
    }
    let t = tower(&[1, 2, 2]);
    let id = embed_algebra(&t, 2, CMatrix::identity(4, 4)).expect("shape");
    let r = key_estimate(&t, &AlphaSeq::linear(2), &id, 1, pe(2.0));
    if let Some((l, r)) = s.result(|| "identity".into(), r) {
        s.check(|| "identity".into(), l.abs().max(r.abs()));
    }
    s
}

fn qmetric_states(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.state_normalization", 1e-12);
    for dims in PROFILES {
        let t = tower(dims);
        let n = t.dim();
        let id = CMatrix::identity(n, n);
        let mut states = vec![State::trace(&t)];
        states.extend((0..n).filter_map(|x| State::point(&t, x).ok()));
        let mut w: Vec<Complex64> = (0..n).map(|x| re((x + 1) as f64)).collect();
        let total: Complex64 = w.iter().sum();
        w.iter_mut().for_each(|z| *z /= total);
        states.extend(State::custom(&t, w).ok());
        for (k, st) in states.iter().enumerate() {
            let case = || format!("{dims:?} state={k}");
            if let Some(v) = s.result(case, st.evaluate(&id)) {
                s.check(case, (v - re(1.0)).norm());
            }
        }
    }
    s
}

fn two_point() -> (UhfTower, AlphaSeq) {
    (tower(&[1, 2]), AlphaSeq::new(vec![0.0, 1.0]).expect("valid"))
}

fn mk_budget(ctx: &Ctx) -> Budget {
    Budget {
        starts: 4,
        iterations: 60,
        ..ctx.budget()
    }
}

fn test_states(t: &UhfTower) -> Vec<(&'static str, State)> {
    vec![
        ("point0", State::point(t, 0).expect("in range")),
        ("point1", State::point(t, 1).expect("in range")),
        ("trace", State::trace(t)),
        ("custom", State::custom(t, vec![re(0.7), re(0.3)]).expect("sums to 1")),
    ]
}

fn qmetric_mk_identical(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.mk_identical_states", 0.0);
    for dims in PROFILES {
        let t = tower(dims);
        let alpha = AlphaSeq::linear(t.levels());
        for st in [State::trace(&t), State::point(&t, 1).expect("in range")] {
            for &p in &EXPONENTS {
                let case = || format!("{dims:?} p={p} {:?}", st.kind());
                if let Some(e) = s.result(case, mk_lower(&t, &alpha, &st, &st, pe(p), &mk_budget(ctx))) {
                    s.check(case, e.lower.abs());
                }
            }
        }
    }
    s
}

fn qmetric_mk_oracle(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.mk_grid_oracle", 5e-3);
    let (t, alpha) = two_point();
    let st = test_states(&t);
    let case = || "(1,2) alpha=(0,1) p=2 point0-point1".to_string();
    if let Some(e) = s.result(case, mk_lower(&t, &alpha, &st[0].1, &st[1].1, pe(2.0), &ctx.budget())) {
        s.check(case, (e.lower - MK_GRID_ORACLE).abs());
    }
    s
}

fn qmetric_mk_homogeneity(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.mk_homogeneity", 2.0 * SEARCH_TOL);
    let (t, alpha) = two_point();
    let st = test_states(&t);
    for &p in &[2.0, 3.0] {
        let base = mk_lower(&t, &alpha, &st[0].1, &st[2].1, pe(p), &mk_budget(ctx));
        let Some(base) = s.result(|| format!("p={p} base"), base) else {
            continue;
        };
        for &c in &[0.5, 2.0, 3.0] {
            let case = || format!("p={p} c={c}");
            let scaled = alpha.scaled(c).and_then(|a| mk_lower(&t, &a, &st[0].1, &st[2].1, pe(p), &mk_budget(ctx)));
            if let Some(e) = s.result(case, scaled) {
                s.check(case, (c * e.lower - base.lower).abs());
            }
        }
    }
    s
}

fn qmetric_mk_symmetry(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.mk_symmetry", SEARCH_TOL);
    let (t, alpha) = two_point();
    let st = test_states(&t);
    for &p in &[2.0, 3.0] {
        for i in 0..st.len() {
            for j in i + 1..st.len() {
                let case = || format!("p={p} {}-{}", st[i].0, st[j].0);
                let r = mk_lower(&t, &alpha, &st[i].1, &st[j].1, pe(p), &mk_budget(ctx))
                    .and_then(|a| Ok((a, mk_lower(&t, &alpha, &st[j].1, &st[i].1, pe(p), &mk_budget(ctx))?)));
                if let Some((a, b)) = s.result(case, r) {
                    s.check(case, (a.lower - b.lower).abs());
                }
            }
        }
    }
    s
}

fn qmetric_mk_triangle(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.mk_triangle_p2", 1e-2);
    let (t, alpha) = two_point();
    let st = test_states(&t);
    let n = st.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                match mk_lower(&t, &alpha, &st[i].1, &st[j].1, pe(2.0), &mk_budget(ctx)) {
                    Ok(e) => d[i][j] = e.lower,
                    Err(e) => s.error(|| format!("{i}-{j}"), e),
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let case = || format!("{}-{}-{}", st[i].0, st[j].0, st[k].0);
                s.check(case, (d[i][k] - d[i][j] - d[j][k]).max(0.0));
            }
        }
    }
    s
}

fn qmetric_mk_feasibility(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.mk_witness_feasible", 1e-12);
    for dims in [&[1usize, 2][..], &[1, 2, 2]] {
        let t = tower(dims);
        let alpha = AlphaSeq::linear(t.levels());
        let w = State::point(&t, 0).expect("in range");
        let v = State::point(&t, 1).expect("in range");
        for &p in &[1.5, 2.0, 3.0] {
            let case = || format!("{dims:?} p={p}");
            let Some(e) = s.result(case, mk_lower(&t, &alpha, &w, &v, pe(p), &mk_budget(ctx))) else {
                continue;
            };
            let Some(wit) = e.witness.filter(|_| e.lower.is_finite()) else {
                continue;
            };
            let d = dirac(&t, &alpha).expect("valid alpha");
            let c = d.with_entries(linalg::commutator(d.entries(), &wit)).expect("square");
            let gap = (w.evaluate(&wit).expect("shape") - v.evaluate(&wit).expect("shape")).re - e.lower;
            s.check(case, (op_norm_upper(&c, pe(p)) - 1.0).max(0.0).max(gap.abs()));
        }
    }
    s
}

fn qmetric_cn(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.seminorm_constants", 1e-10);
    let (t, _) = two_point();
    let want = CMatrix::from_row_slice(2, 2, &[re(1.0), re(-1.0), re(-1.0), re(1.0)]);
    if let Some(cn) = s.result(|| "(1,2)".into(), cn_constants(&t, pe(2.0), &ctx.budget())) {
        let l = &cn.levels()[0];
        s.holds(|| "(1,2) kernel flag false at n=1".into(), !l.kernel_flag && l.c.is_infinite());
        let dev = l.witness.as_ref().map_or(f64::INFINITY, |w| max_abs_diff(w, &want));
        s.check(|| "(1,2) kernel witness".into(), dev);
    }
    // restricted to rank-one cores with nonzero row sums the ratio is finite
    for dims in PROFILES {
        let t = tower(dims);
        let one = t.one().coords().clone();
        let nn = t.dim() as f64;
        for n in 1..=t.levels() {
            let Some(basis) = s.result(|| format!("{dims:?} n={n}"), level_subspace_basis(&t, n)) else {
                continue;
            };
            let restricted: Vec<CMatrix> = basis
                .iter()
                .step_by(t.dim())
                .map(|b| b * &one * one.transpose() / re(nn))
                .collect();
            for &p in &[1.0, 2.0] {
                let case = || format!("{dims:?} n={n} p={p}");
                let budget = Budget { starts: 2, iterations: 30, ..ctx.budget() };
                if let Some(lc) = s.result(case, seminorm_constant(&t, n, &restricted, pe(p), &budget)) {
                    s.holds(|| format!("{dims:?} n={n} p={p} flag"), lc.kernel_flag && lc.c >= 1.0);
                    s.check(case, (lc.c - 1.0).abs());
                }
            }
        }
    }
    s
}

fn qmetric_alpha_auto(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.alpha_auto", 0.0);
    let cases: [(&[f64], &[f64]); 2] = [(&[1.0, 1.0, 1.0], &[0.0, 2.0, 4.0, 8.0]), (&[3.0, 1.0], &[0.0, 6.0, 4.0])];
    for (c, want) in cases {
        let r = CnTable::from_constants(c).and_then(|cn| Ok((alpha_auto(&cn)?, cn)));
        if let Some((a, cn)) = s.result(|| format!("c={c:?}"), r) {
            s.holds(|| format!("c={c:?} alpha"), a.values() == want);
            let up = mk_upper(&a, &cn).unwrap_or(f64::INFINITY);
            s.holds(|| format!("c={c:?} mk_upper={up}"), up <= 2.0);
        }
    }
    let inf = CnTable::from_constants(&[1.0, f64::INFINITY]).expect("valid table");
    s.holds(|| "infinite c rejected".into(), alpha_auto(&inf).is_err());
    let up = mk_upper(&AlphaSeq::linear(2), &inf).unwrap_or(0.0);
    s.holds(|| "infinite c propagates".into(), up.is_infinite());
    s
}

fn qmetric_quotient(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.quotient_distance", 1e-9);
    let (t, _) = two_point();
    let budget = ctx.budget();
    let id = embed_algebra(&t, 1, CMatrix::identity(2, 2)).expect("shape");
    if let Some(q) = s.result(|| "identity".into(), quotient_distance(&t, &id, pe(2.0), &budget)) {
        s.check(|| "identity".into(), q.upper.abs().max(q.lower.abs()));
    }
    let diag = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(-1.0)]));
    let a = embed_algebra(&t, 1, diag).expect("shape");
    if let Some(q) = s.result(|| "diag(1,-1)".into(), quotient_distance(&t, &a, pe(2.0), &budget)) {
        s.check(|| "diag(1,-1)".into(), (q.lower - 1.0).abs().max((q.upper - 1.0).abs()));
    }
    for (k, dims) in PROFILES.iter().enumerate() {
        let t = tower(dims);
        let n = t.dim();
        for &p in &EXPONENTS {
            let mut rng = ctx.rng(19, (k * 1000) as u64 + (p * 10.0) as u64);
            let b = random_complex_matrix(&mut rng, n, n) * re(0.01);
            let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let case = || format!("{dims:?} p={p} translation");
            let a = embed_algebra(&t, t.levels(), CMatrix::identity(n, n) * z + &b);
            let r = a.and_then(|a| quotient_distance(&t, &a, pe(p), &budget));
            if let Some(q) = s.result(case, r) {
                let bop = OperatorMatrix::square(t.full_space().clone(), b).expect("square");
                s.check(case, (q.upper - op_norm_upper(&bop, pe(p))).max(0.0).max(q.lower - q.upper));
            }
        }
    }
    s
}

fn qmetric_degeneracy(_ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("qmetric.degeneracy_probe", 1e-10);
    let (t, alpha) = two_point();
    let want = CMatrix::from_row_slice(2, 2, &[re(1.0), re(-1.0), re(-1.0), re(1.0)]);
    if let Some(r) = s.result(|| "(1,2)".into(), degeneracy_probe(&t, &alpha, pe(2.0))) {
        s.holds(|| format!("(1,2) dimension {} >= 2", r.dimension), r.dimension >= 2);
        let dev = r
            .witnesses
            .iter()
            .map(|w| max_abs_diff(w, &want))
            .fold(f64::INFINITY, f64::min);
        s.check(|| "(1,2) witness".into(), dev);
    }
    for dims in PROFILES {
        let t = tower(dims);
        let n = t.dim();
        let case = || format!("{dims:?} zero alpha");
        if let Some(r) = s.result(case, degeneracy_probe(&t, &AlphaSeq::zeros(t.levels()), pe(1.5))) {
            s.holds(case, r.dimension == n * n);
        }
        let case = || format!("{dims:?} linear alpha");
        if let Some(r) = s.result(case, degeneracy_probe(&t, &AlphaSeq::linear(t.levels()), pe(2.0))) {
            s.holds(case, r.dimension >= 1);
            s.check(|| format!("{dims:?} scalars in kernel"), r.span_residual(&CMatrix::identity(n, n)));
        }
    }
    s
}

// ---------------------------------------------------------------- io

fn io_round_trip(ctx: &Ctx) -> SuiteResult {
    let mut s = SuiteResult::new("io.round_trip", 0.0);
    for c in 0..ctx.count(20) {
        let mut rng = ctx.rng(20, c as u64);
        let (r, n) = (rng.random_range(1..5), rng.random_range(1..5));
        let a = random_op(&mut rng, r, n);
        let back = io::parse_matrix(&io::write_matrix(&a));
        let ok = back.is_ok_and(|b| {
            b.entries() == a.entries()
                && b.domain().weights() == a.domain().weights()
                && b.codomain().weights() == a.codomain().weights()
        });
        s.holds(|| format!("matrix case={c}"), ok);

        let model = GROUPS[c % GROUPS.len()];
        let pool = ball(model, LengthFn::standard(model), 2.0, DEFAULT_BALL_CAP).expect("small ball");
        let g = random_group_elem(&mut rng, pool.elements(), 4);
        let back = io::parse_group_element(&io::write_group_element(&g, &model), &model);
        s.holds(|| format!("group element case={c}"), back.is_ok_and(|b| b == g));

        let spec = match c % 3 {
            0 => StateSpec::Point(rng.random_range(0..100)),
            1 => StateSpec::Trace,
            _ => StateSpec::Custom(random_complex_vector(&mut rng, 3).iter().copied().collect()),
        };
        let back = io::parse_state(&io::write_state(&spec));
        s.holds(|| format!("state case={c}"), back.is_ok_and(|b| b == spec));
    }
    for dims in PROFILES {
        let f = UhfSpecFile {
            spec: UhfSpec::new(dims.to_vec()).expect("valid"),
            alpha: AlphaChoice::Explicit((0..dims.len()).map(|n| n as f64).collect()),
            p: EXPONENTS.iter().map(|&p| pe(p)).collect(),
        };
        let back = io::parse_uhf_spec(&io::write_uhf_spec(&f));
        s.holds(|| format!("uhf spec {dims:?}"), back.is_ok_and(|b| b == f));
    }
    s
}

type SuiteFn = fn(&Ctx) -> SuiteResult;

const SUITES: &[SuiteFn] = &[
    pspace_interval_order,
    pspace_scaling,
    pspace_p2_oracle,
    pspace_oracle_bounds,
    pspace_submultiplicative,
    pspace_uniform_invariance,
    tensor_mixed_product,
    tensor_elementary_norm,
    tensor_dimension,
    tensor_multiplicativity_p2,
    tensor_interval_containment,
    group_length_axioms,
    group_homomorphism,
    group_dirac_spectrum,
    group_commutator_bound,
    group_monotone,
    group_delta_one,
    group_resolvent,
    group_commutator_support,
    uhf_tower_algebra,
    uhf_tower_norms,
    uhf_commutation,
    uhf_dirac,
    uhf_resolvent,
    uhf_q_ranks,
    uhf_strong_convergence,
    qmetric_key_estimate,
    qmetric_states,
    qmetric_mk_identical,
    qmetric_mk_oracle,
    qmetric_mk_homogeneity,
    qmetric_mk_symmetry,
    qmetric_mk_triangle,
    qmetric_mk_feasibility,
    qmetric_cn,
    qmetric_alpha_auto,
    qmetric_quotient,
    qmetric_degeneracy,
    io_round_trip,
];

/// Runs every suite. Suites run concurrently; results keep the fixed order.
pub fn run_suites(ctx: &Ctx) -> Vec<SuiteResult> {
    SUITES.par_iter().map(|f| f(ctx)).collect()
}

pub fn check_report(ctx: &Ctx, results: &[SuiteResult]) -> Report {
    let mut table = Table::new(
        "check.csv",
        &["suite", "cases", "passed", "failed", "max_deviation", "tolerance"],
    );
    let mut failures = Vec::new();
    for r in results {
        table.push(vec![
            r.name.to_string(),
            r.cases.to_string(),
            r.passed.to_string(),
            (r.cases - r.passed).to_string(),
            format!("{:.3e}", r.max_deviation),
            format!("{:e}", r.tolerance),
        ]);
        failures.extend(r.failures.iter().map(|f| json!({ "suite": r.name, "case": f })));
    }
    let mut report = Report::new("check");
    report.tables.push(table);
    report.diagnostics = json!({
        "seed": ctx.seed,
        "quick": ctx.quick,
        "suites": results.len(),
        "cases": results.iter().map(|r| r.cases).sum::<usize>(),
        "failed": failures.len(),
        "failures": failures,
    });
    report
}

/// Machine-readable failure list of a report produced by [`check_report`].
pub fn failures(report: &Report) -> Vec<serde_json::Value> {
    report.diagnostics["failures"]
        .as_array()
        .cloned()
        .unwrap_or_default()
}
