use super::{ball, BallTruncation, GroupAlgElem, GroupModel, LengthFn};
use crate::error::{Error, Result};
use crate::pspace::{op_norm_with_starts, Budget, NormEstimate, OperatorMatrix, PExponent};
use crate::{CMatrix, CVector, Complex64};

/// Compression of the left regular representation `λ_p(a)` to `ℓ^p` of the
/// ball: `M[g,h] = a(g·h⁻¹)`. The matrix does not depend on `p`.
pub fn lambda_matrix(a: &GroupAlgElem, t: &BallTruncation) -> OperatorMatrix {
    let n = t.len();
    let mut m = CMatrix::zeros(n, n);
    for (j, h) in t.elements().iter().enumerate() {
        for (s, coeff) in a.support() {
            let g = t.model().multiply(s, h);
            if let Some(i) = t.index_of(&g) {
                m[(i, j)] += coeff;
            }
        }
    }
    OperatorMatrix::square(t.space().clone(), m).expect("square on the ball")
}

/// Diagonal Dirac operator `(Dξ)(g) = 𝕃(g) ξ(g)` on the ball.
pub fn dirac_matrix(t: &BallTruncation) -> OperatorMatrix {
    let lengths = CVector::from_iterator(
        t.len(),
        t.lengths().into_iter().map(|l| Complex64::new(l, 0.0)),
    );
    OperatorMatrix::square(t.space().clone(), CMatrix::from_diagonal(&lengths))
        .expect("square on the ball")
}

/// Analytic bound `(‖a‖₁^p Σ_{g∈supp a} 𝕃(g)^p)^{1/p}` for `‖[D, λ_p(a)]‖`.
pub fn commutator_bound(a: &GroupAlgElem, length: &LengthFn, p: PExponent) -> f64 {
    let pv = p.value();
    let sum: f64 = a.support().iter().map(|(g, _)| length.eval(g).powf(pv)).sum();
    a.l1_norm() * sum.powf(1.0 / pv)
}

fn check_support(a: &GroupAlgElem, t: &BallTruncation) -> Result<()> {
    match a.support().iter().find(|(g, _)| t.index_of(g).is_none()) {
        Some((g, _)) => Err(Error::Precondition(format!(
            "support element {} lies outside the ball of radius {}",
            t.model().format_element(g),
            t.radius()
        ))),
        None => Ok(()),
    }
}

/// `[D, λ(a)] = D·M − M·D` on the ball; entry `(g,h)` is
/// `(𝕃(g) − 𝕃(h)) a(g·h⁻¹)`.
pub fn commutator_matrix(a: &GroupAlgElem, t: &BallTruncation) -> Result<OperatorMatrix> {
    check_support(a, t)?;
    let m = lambda_matrix(a, t);
    let d = dirac_matrix(t);
    let c = d.entries() * m.entries() - m.entries() * d.entries();
    m.with_entries(c)
}

/// Norm interval for the compressed commutator. Its lower end is a valid
/// lower bound for the untruncated `‖[D_𝕃, λ_p(a)]‖`.
pub fn commutator_norm_est(
    a: &GroupAlgElem,
    t: &BallTruncation,
    p: PExponent,
    budget: &Budget,
) -> Result<NormEstimate> {
    let c = commutator_matrix(a, t)?;
    op_norm_with_starts(&c, p, budget, &[]).map(|(est, _)| est)
}

/// Commutator estimates over increasing radii. The maximizing vector of each
/// radius seeds the next one (zero-padded), so the lower ends never decrease.
pub fn commutator_series(
    a: &GroupAlgElem,
    model: GroupModel,
    radii: &[f64],
    p: PExponent,
    budget: &Budget,
    cap: usize,
) -> Result<Vec<(f64, NormEstimate)>> {
    let length = LengthFn::standard(model);
    let mut out: Vec<(f64, NormEstimate)> = Vec::with_capacity(radii.len());
    let mut previous: Option<(BallTruncation, CVector)> = None;
    for &r in radii {
        let t = ball(model, length, r, cap)?;
        let c = commutator_matrix(a, &t)?;
        let warm: Vec<CVector> = previous
            .iter()
            .map(|(old, x)| {
                let mut y = CVector::zeros(t.len());
                for (i, g) in old.elements().iter().enumerate() {
                    if let Some(j) = t.index_of(g) {
                        y[j] = x[i];
                    }
                }
                y
            })
            .collect();
        let (mut est, x) = op_norm_with_starts(&c, p, budget, &warm)?;
        // compressions to larger balls dominate smaller ones
        if let Some((_, prev)) = out.last() {
            est.lower = est.lower.max(prev.lower).min(est.upper);
        }
        out.push((r, est));
        previous = Some((t, x));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResolventMode {
    /// Approximates `(I + D²)⁻¹`.
    Squared,
    /// Approximates `(D − λI)⁻¹`.
    Shifted(Complex64),
}

const SPECTRUM_TOL: f64 = 1e-12;

/// Finite-rank diagonal approximant of a resolvent on the ball, with the
/// analytic sup of the neglected diagonal entries outside the ball.
///
/// In shifted mode `λ` is checked against lengths achieved inside the ball
/// only; a `λ` equal to a length outside it yields an infinite residual.
pub fn resolvent_approx(t: &BallTruncation, mode: ResolventMode) -> Result<(OperatorMatrix, f64)> {
    let lengths = t.lengths();
    let length = t.length();
    let (diag, residual): (Vec<Complex64>, f64) = match mode {
        ResolventMode::Squared => {
            let diag = lengths
                .iter()
                .map(|l| Complex64::new(1.0 / (1.0 + l * l), 0.0))
                .collect();
            let residual = length
                .next_length_beyond(t.radius())
                .map_or(0.0, |l| 1.0 / (1.0 + l * l));
            (diag, residual)
        }
        ResolventMode::Shifted(lambda) => {
            if let Some(l) = lengths
                .iter()
                .find(|l| (Complex64::new(**l, 0.0) - lambda).norm() <= SPECTRUM_TOL)
            {
                return Err(Error::Precondition(format!(
                    "shift {lambda} lies on the spectrum (length {l})"
                )));
            }
            let diag = lengths
                .iter()
                .map(|l| Complex64::new(1.0, 0.0) / (Complex64::new(*l, 0.0) - lambda))
                .collect();
            let nearest = length
                .lengths_beyond_near(t.radius(), lambda.re)
                .into_iter()
                .map(|l| (Complex64::new(l, 0.0) - lambda).norm())
                .fold(f64::INFINITY, f64::min);
            let residual = if nearest.is_infinite() {
                0.0
            } else if nearest <= SPECTRUM_TOL {
                log::warn!("shift {lambda} equals a length outside the ball");
                f64::INFINITY
            } else {
                1.0 / nearest
            };
            (diag, residual)
        }
    };
    let m = CMatrix::from_diagonal(&CVector::from_vec(diag));
    Ok((OperatorMatrix::square(t.space().clone(), m)?, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupElement, DEFAULT_BALL_CAP};
    use crate::linalg::{self, max_abs_diff};

    fn p(v: f64) -> PExponent {
        PExponent::new(v).unwrap()
    }
    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn b(model: GroupModel, r: f64) -> BallTruncation {
        ball(model, LengthFn::standard(model), r, DEFAULT_BALL_CAP).unwrap()
    }

    #[test]
    fn unit_maps_to_identity() {
        for model in [GroupModel::Integers, GroupModel::Free(2), GroupModel::Cyclic(5)] {
            let t = b(model, 2.0);
            let m = lambda_matrix(&GroupAlgElem::delta(model.identity()), &t);
            assert_eq!(m.entries(), &CMatrix::identity(t.len(), t.len()));
        }
    }

    #[test]
    fn integer_translation_is_a_shift() {
        let t = b(GroupModel::Integers, 2.0);
        let m = lambda_matrix(&GroupAlgElem::delta(GroupElement::Int(1)), &t);
        let mut expect = CMatrix::zeros(5, 5);
        for n in -1..=2i64 {
            let i = t.index_of(&GroupElement::Int(n)).unwrap();
            let j = t.index_of(&GroupElement::Int(n - 1)).unwrap();
            expect[(i, j)] = one();
        }
        assert_eq!(m.entries(), &expect);
    }

    #[test]
    fn compressed_translations_are_contractions() {
        let t = b(GroupModel::Free(2), 2.0);
        for g in t.elements().iter().take(9) {
            let m = lambda_matrix(&GroupAlgElem::delta(g.clone()), &t);
            for pv in [1.0, 1.5, 2.0, 3.0] {
                let est = crate::pspace::op_norm(&m, p(pv), &Budget::default()).unwrap();
                assert!(est.lower <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn dirac_diagonals() {
        let diag = |model, r| -> Vec<f64> {
            let d = dirac_matrix(&b(model, r));
            d.entries().diagonal().iter().map(|z| z.re).collect()
        };
        assert_eq!(diag(GroupModel::Integers, 2.0), vec![0.0, 1.0, 1.0, 2.0, 2.0]);
        assert_eq!(diag(GroupModel::Free(2), 1.0), vec![0.0, 1.0, 1.0, 1.0, 1.0]);
        let mut cyc = diag(GroupModel::Cyclic(4), 2.0);
        cyc.sort_by(f64::total_cmp);
        assert_eq!(cyc, vec![0.0, 1.0, 1.0, 2.0]);
    }

    #[test]
    fn analytic_bounds() {
        let l = LengthFn::standard(GroupModel::Integers);
        let delta0 = GroupAlgElem::delta(GroupElement::Int(0));
        let delta1 = GroupAlgElem::delta(GroupElement::Int(1));
        let sym = GroupAlgElem::new([(GroupElement::Int(1), one()), (GroupElement::Int(-1), one())]);
        assert_eq!(commutator_bound(&delta0, &l, p(2.0)), 0.0);
        for pv in [1.0, 1.5, 2.0, 3.0] {
            assert!((commutator_bound(&delta1, &l, p(pv)) - 1.0).abs() < 1e-15);
        }
        assert_eq!(commutator_bound(&sym, &l, p(1.0)), 4.0);
    }

    #[test]
    fn commutator_of_unit_vanishes() {
        let t = b(GroupModel::Free(2), 2.0);
        let est = commutator_norm_est(
            &GroupAlgElem::delta(GroupModel::Free(2).identity()),
            &t,
            p(1.5),
            &Budget::default(),
        )
        .unwrap();
        assert_eq!((est.lower, est.upper), (0.0, 0.0));
    }

    #[test]
    fn integer_shift_commutator_at_p2() {
        let t = b(GroupModel::Integers, 5.0);
        let est = commutator_norm_est(
            &GroupAlgElem::delta(GroupElement::Int(1)),
            &t,
            p(2.0),
            &Budget::default(),
        )
        .unwrap();
        assert!((est.lower - 1.0).abs() < 1e-8);
    }

    #[test]
    fn commutator_scales_linearly() {
        let t = b(GroupModel::Integers, 4.0);
        let a = GroupAlgElem::new([
            (GroupElement::Int(1), Complex64::new(0.5, -1.0)),
            (GroupElement::Int(-2), Complex64::new(2.0, 0.3)),
        ]);
        let two = a.scale(Complex64::new(2.0, 0.0));
        for pv in [1.0, 2.0, 3.0] {
            let e1 = commutator_norm_est(&a, &t, p(pv), &Budget::default()).unwrap();
            let e2 = commutator_norm_est(&two, &t, p(pv), &Budget::default()).unwrap();
            assert!((e2.lower - 2.0 * e1.lower).abs() < 1e-10);
            assert!((e2.upper - 2.0 * e1.upper).abs() < 1e-10);
        }
    }

    #[test]
    fn support_outside_ball_rejected() {
        let t = b(GroupModel::Integers, 1.0);
        let a = GroupAlgElem::delta(GroupElement::Int(2));
        assert!(matches!(
            commutator_norm_est(&a, &t, p(2.0), &Budget::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn homomorphism_on_half_ball() {
        let model = GroupModel::Free(2);
        let t = b(model, 4.0);
        let half = b(model, 2.0);
        let a = GroupAlgElem::new([
            (model.parse_element("ab").unwrap(), Complex64::new(1.0, 2.0)),
            (model.parse_element("A").unwrap(), Complex64::new(-0.5, 0.0)),
        ]);
        let c = GroupAlgElem::new([
            (model.parse_element("Ba").unwrap(), Complex64::new(0.3, -1.0)),
            (model.parse_element("b").unwrap(), Complex64::new(2.0, 0.0)),
        ]);
        let prod = lambda_matrix(&a, &t).entries() * lambda_matrix(&c, &t).entries();
        let conv = lambda_matrix(&a.convolve(&c, &model), &t);
        let idx: Vec<usize> = half.elements().iter().map(|g| t.index_of(g).unwrap()).collect();
        let sub = |m: &CMatrix| CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
        assert!(max_abs_diff(&sub(&prod), &sub(conv.entries())) < 1e-12);
    }

    #[test]
    fn squared_resolvent() {
        let t = b(GroupModel::Integers, 2.0);
        let (k, residual) = resolvent_approx(&t, ResolventMode::Squared).unwrap();
        assert_eq!(residual, 1.0 / (1.0 + 9.0));
        assert_eq!(k.entries()[(0, 0)], one());
        assert!((k.entries()[(3, 3)].re - 0.2).abs() < 1e-15);
        let (_, none) = resolvent_approx(&b(GroupModel::Cyclic(4), 2.0), ResolventMode::Squared).unwrap();
        assert_eq!(none, 0.0);
    }

    #[test]
    fn shifted_resolvent() {
        let t = b(GroupModel::Integers, 2.0);
        let lambda = Complex64::new(-1.0, 0.0);
        let (j, residual) = resolvent_approx(&t, ResolventMode::Shifted(lambda)).unwrap();
        for (i, l) in t.lengths().iter().enumerate() {
            assert!((j.entries()[(i, i)].re - 1.0 / (l + 1.0)).abs() < 1e-15);
        }
        assert!((residual - 0.25).abs() < 1e-15);
        let shifted = dirac_matrix(&t).entries() - CMatrix::identity(5, 5) * lambda;
        assert!(linalg::max_abs_diff(&(shifted * j.entries()), &CMatrix::identity(5, 5)) < 1e-12);
        assert!(resolvent_approx(&t, ResolventMode::Shifted(Complex64::new(2.0, 0.0))).is_err());
        let (_, far) = resolvent_approx(&t, ResolventMode::Shifted(Complex64::new(4.5, 0.0))).unwrap();
        assert!((far - 2.0).abs() < 1e-12);
    }

    #[test]
    fn series_is_monotone() {
        let model = GroupModel::Free(2);
        let a = GroupAlgElem::new([
            (model.parse_element("a").unwrap(), Complex64::new(1.0, 0.5)),
            (model.parse_element("bA").unwrap(), Complex64::new(-0.7, 0.0)),
        ]);
        for pv in [1.5, 2.0, 3.0] {
            let s = commutator_series(&a, model, &[2.0, 3.0, 4.0], p(pv), &Budget::default(), DEFAULT_BALL_CAP)
                .unwrap();
            for w in s.windows(2) {
                assert!(w[1].1.lower >= w[0].1.lower, "p={pv}: {s:?}");
            }
        }
    }
}
