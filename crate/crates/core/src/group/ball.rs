use std::collections::{HashMap, HashSet};

use super::{GroupElement, GroupModel, LengthFn};
use crate::error::{Error, Result};
use crate::pspace::WeightedPointSpace;

pub const DEFAULT_BALL_CAP: usize = 100_000;

/// The ball `B_𝕃(R)` as an ordered point set with counting measure.
///
/// Elements are sorted by length, then by [`GroupElement::encoding_key`].
#[derive(Debug, Clone)]
pub struct BallTruncation {
    model: GroupModel,
    length: LengthFn,
    radius: f64,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    space: WeightedPointSpace,
}

impl BallTruncation {
    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn length(&self) -> &LengthFn {
        &self.length
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn space(&self) -> &WeightedPointSpace {
        &self.space
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.elements.iter().map(|g| self.length.eval(g)).collect()
    }
}

/// Enumerates `B_𝕃(R) = 𝕃⁻¹([0, R])` by breadth-first search over the
/// generators. Fails once more than `cap` elements have been found.
pub fn ball(model: GroupModel, length: LengthFn, radius: f64, cap: usize) -> Result<BallTruncation> {
    model.validate()?;
    if !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::Precondition(format!(
            "radius must be finite and >= 0, got {radius}"
        )));
    }
    if length.model() != model {
        return Err(Error::Precondition(
            "length function belongs to a different group".into(),
        ));
    }
    let gens = model.generators();
    let identity = model.identity();
    let mut seen: HashSet<GroupElement> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut frontier = elements.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = model.multiply(g, s);
                if length.eval(&h) <= radius && seen.insert(h.clone()) {
                    if seen.len() > cap {
                        return Err(Error::ResourceCap {
                            what: "ball",
                            size: seen.len(),
                            cap,
                        });
                    }
                    next.push(h);
                }
            }
        }
        elements.extend(next.iter().cloned());
        frontier = next;
    }
    elements.sort_by(|a, b| {
        length
            .eval(a)
            .total_cmp(&length.eval(b))
            .then_with(|| a.encoding_key().cmp(&b.encoding_key()))
    });
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let space = WeightedPointSpace::counting(elements.len());
    Ok(BallTruncation {
        model,
        length,
        radius,
        elements,
        index,
        space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(model: GroupModel, r: f64) -> BallTruncation {
        ball(model, LengthFn::standard(model), r, DEFAULT_BALL_CAP).unwrap()
    }

    #[test]
    fn integer_ball() {
        let t = b(GroupModel::Integers, 3.0);
        assert_eq!(t.len(), 7);
        let order: Vec<i64> = t
            .elements()
            .iter()
            .map(|g| match g {
                GroupElement::Int(n) => *n,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(order, vec![0, -1, 1, -2, 2, -3, 3]);
    }

    #[test]
    fn free_group_ball_counts() {
        assert_eq!(b(GroupModel::Free(2), 2.0).len(), 17);
        assert_eq!(b(GroupModel::Free(2), 3.0).len(), 53);
        assert_eq!(b(GroupModel::Free(3), 2.0).len(), 1 + 6 + 30);
    }

    #[test]
    fn lattice_and_cyclic_balls() {
        assert_eq!(b(GroupModel::Lattice(2), 1.0).len(), 5);
        assert_eq!(b(GroupModel::Lattice(2), 2.0).len(), 13);
        assert_eq!(b(GroupModel::Cyclic(6), 10.0).len(), 6);
        assert_eq!(b(GroupModel::Cyclic(1), 2.0).len(), 1);
    }

    #[test]
    fn fractional_radius_rounds_down() {
        assert_eq!(b(GroupModel::Integers, 2.5).len(), 5);
        assert_eq!(b(GroupModel::Integers, 0.0).len(), 1);
    }

    #[test]
    fn ball_is_symmetric_and_bounded() {
        for model in [GroupModel::Free(2), GroupModel::Lattice(3), GroupModel::Cyclic(7)] {
            let t = b(model, 2.0);
            assert_eq!(t.elements()[0], model.identity());
            for g in t.elements() {
                assert!(t.length().eval(g) <= 2.0);
                assert!(t.index_of(&model.invert(g)).is_some());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = ball(GroupModel::Free(3), LengthFn::standard(GroupModel::Free(3)), 8.0, 1000)
            .unwrap_err();
        assert!(matches!(err, Error::ResourceCap { what: "ball", .. }));
    }

    #[test]
    fn bad_radius_rejected() {
        let m = GroupModel::Integers;
        assert!(ball(m, LengthFn::standard(m), -1.0, 10).is_err());
        assert!(ball(m, LengthFn::standard(GroupModel::Free(1)), 1.0, 10).is_err());
    }
}
