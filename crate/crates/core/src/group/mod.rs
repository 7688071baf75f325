//! Reduced group algebras with length-function Dirac operators, truncated
//! to balls of the length function.
//!
//! Four group families are built in: the integers, integer lattices, free
//! groups and finite cyclic groups, each with its standard word length.
//! All operators act on `ℓ^p` of a ball `B_𝕃(R)` with counting measure; a
//! compression of an operator on `ℓ^p(G)` to a coordinate subspace never
//! has larger norm, so norms measured here are lower bounds for the
//! untruncated operators.

mod ball;
mod triple;

pub use ball::{ball, BallTruncation, DEFAULT_BALL_CAP};
pub use triple::{
    commutator_bound, commutator_matrix, commutator_norm_est, commutator_series, dirac_matrix,
    lambda_matrix, resolvent_approx, ResolventMode,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::Complex64;

/// A letter of a free-group word: `+g` is generator `g` (1-based), `−g` its
/// inverse.
pub type Letter = i32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(i64),
    Vector(Vec<i64>),
    Word(Vec<Letter>),
}

impl GroupElement {
    /// Lexicographic encoding used to order ball elements of equal length.
    pub fn encoding_key(&self) -> Vec<i64> {
        match self {
            GroupElement::Int(n) => vec![*n],
            GroupElement::Vector(v) => v.clone(),
            GroupElement::Word(w) => w
                .iter()
                .map(|l| 2 * (l.unsigned_abs() as i64 - 1) + i64::from(*l < 0))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupModel {
    Integers,
    Lattice(usize),
    Free(usize),
    Cyclic(u64),
}

impl GroupModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GroupModel::Lattice(0) => Err(Error::Precondition("lattice rank must be >= 1".into())),
            GroupModel::Free(0) => Err(Error::Precondition("free group rank must be >= 1".into())),
            GroupModel::Free(k) if k > 26 => Err(Error::Precondition(
                "free groups are limited to 26 generators (one letter each)".into(),
            )),
            GroupModel::Cyclic(0) => Err(Error::Precondition("cyclic order must be >= 1".into())),
            _ => Ok(()),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupModel::Integers | GroupModel::Cyclic(_) => GroupElement::Int(0),
            GroupModel::Lattice(d) => GroupElement::Vector(vec![0; d]),
            GroupModel::Free(_) => GroupElement::Word(Vec::new()),
        }
    }

    /// Whether `g` is a well-formed element of this group.
    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupModel::Integers, GroupElement::Int(_)) => true,
            (GroupModel::Cyclic(m), GroupElement::Int(n)) => *n >= 0 && (*n as u64) < *m,
            (GroupModel::Lattice(d), GroupElement::Vector(v)) => v.len() == *d,
            (GroupModel::Free(k), GroupElement::Word(w)) => {
                w.iter().all(|l| *l != 0 && l.unsigned_abs() as usize <= *k)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (self, g, h) {
            (GroupModel::Integers, GroupElement::Int(a), GroupElement::Int(b)) => {
                GroupElement::Int(a + b)
            }
            (GroupModel::Cyclic(m), GroupElement::Int(a), GroupElement::Int(b)) => {
                GroupElement::Int((a + b).rem_euclid(*m as i64))
            }
            (GroupModel::Lattice(_), GroupElement::Vector(a), GroupElement::Vector(b)) => {
                GroupElement::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupModel::Free(_), GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut out = a.clone();
                for l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(*l);
                    }
                }
                GroupElement::Word(out)
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn invert(&self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (GroupModel::Integers, GroupElement::Int(a)) => GroupElement::Int(-a),
            (GroupModel::Cyclic(m), GroupElement::Int(a)) => {
                GroupElement::Int((-a).rem_euclid(*m as i64))
            }
            (GroupModel::Lattice(_), GroupElement::Vector(v)) => {
                GroupElement::Vector(v.iter().map(|x| -x).collect())
            }
            (GroupModel::Free(_), GroupElement::Word(w)) => {
                GroupElement::Word(w.iter().rev().map(|l| -l).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Symmetric generating set.
    pub fn generators(&self) -> Vec<GroupElement> {
        match *self {
            GroupModel::Integers => vec![GroupElement::Int(1), GroupElement::Int(-1)],
            GroupModel::Cyclic(m) => {
                let mut g = vec![GroupElement::Int(1 % m as i64)];
                if m > 2 {
                    g.push(GroupElement::Int(m as i64 - 1));
                }
                g
            }
            GroupModel::Lattice(d) => (0..d)
                .flat_map(|i| {
                    [1, -1].into_iter().map(move |s| {
                        let mut v = vec![0; d];
                        v[i] = s;
                        GroupElement::Vector(v)
                    })
                })
                .collect(),
            GroupModel::Free(k) => (1..=k as Letter)
                .flat_map(|g| [GroupElement::Word(vec![g]), GroupElement::Word(vec![-g])])
                .collect(),
        }
    }

    /// Parses the text encoding: integers (`3`), comma vectors (`1,-2`), or
    /// words over `a..z` with capitals for inverses (`aBa`, `1` for the
    /// empty word).
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let bad = |msg: &str| Error::parse(0, format!("{msg}: {s:?}"));
        let g = match *self {
            GroupModel::Integers => {
                GroupElement::Int(s.parse::<i64>().map_err(|_| bad("expected an integer"))?)
            }
            GroupModel::Cyclic(m) => {
                let n = s.parse::<i64>().map_err(|_| bad("expected an integer"))?;
                GroupElement::Int(n.rem_euclid(m as i64))
            }
            GroupModel::Lattice(d) => {
                let v = s
                    .split(',')
                    .map(|t| t.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("expected comma-separated integers"))?;
                if v.len() != d {
                    return Err(bad(&format!("expected {d} components")));
                }
                GroupElement::Vector(v)
            }
            GroupModel::Free(k) => {
                if s == "1" {
                    return Ok(GroupElement::Word(Vec::new()));
                }
                let mut word = GroupElement::Word(Vec::new());
                for ch in s.chars() {
                    let letter = match ch {
                        'a'..='z' => (ch as u8 - b'a' + 1) as Letter,
                        'A'..='Z' => -((ch as u8 - b'A' + 1) as Letter),
                        _ => return Err(bad("expected letters a-z / A-Z")),
                    };
                    if letter.unsigned_abs() as usize > k {
                        return Err(bad(&format!("letter outside the {k} generators")));
                    }
                    word = self.multiply(&word, &GroupElement::Word(vec![letter]));
                }
                word
            }
        };
        Ok(g)
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        match g {
            GroupElement::Int(n) => n.to_string(),
            GroupElement::Vector(v) => v
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            GroupElement::Word(w) if w.is_empty() => "1".into(),
            GroupElement::Word(w) => w
                .iter()
                .map(|l| {
                    let c = (b'a' + (l.unsigned_abs() as u8 - 1)) as char;
                    if *l < 0 {
                        c.to_ascii_uppercase()
                    } else {
                        c
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::Integers => write!(f, "z"),
            GroupModel::Lattice(d) => write!(f, "lattice:{d}"),
            GroupModel::Free(k) => write!(f, "free:{k}"),
            GroupModel::Cyclic(m) => write!(f, "cyclic:{m}"),
        }
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    /// `z`, `lattice:D`, `free:K` or `cyclic:M`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || Error::Precondition(format!("unknown group {s:?}"));
        let model = match s.split_once(':') {
            None if s == "z" || s == "integers" => GroupModel::Integers,
            Some(("lattice", n)) | Some(("zd", n)) => {
                GroupModel::Lattice(n.parse().map_err(|_| bad())?)
            }
            Some(("free", n)) => GroupModel::Free(n.parse().map_err(|_| bad())?),
            Some(("cyclic", n)) => GroupModel::Cyclic(n.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        model.validate()?;
        Ok(model)
    }
}

/// The standard word length of a built-in group: `|n|` on the integers,
/// the ℓ¹ length on lattices, reduced word length on free groups and
/// `min(k, m−k)` on `ℤ/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthFn {
    model: GroupModel,
}

impl LengthFn {
    pub fn standard(model: GroupModel) -> Self {
        LengthFn { model }
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn eval(&self, g: &GroupElement) -> f64 {
        match (self.model, g) {
            (GroupModel::Integers, GroupElement::Int(n)) => n.unsigned_abs() as f64,
            (GroupModel::Cyclic(m), GroupElement::Int(n)) => {
                let k = n.rem_euclid(m as i64) as u64;
                k.min(m - k) as f64
            }
            (GroupModel::Lattice(_), GroupElement::Vector(v)) => {
                v.iter().map(|x| x.unsigned_abs()).sum::<u64>() as f64
            }
            (GroupModel::Free(_), GroupElement::Word(w)) => w.len() as f64,
            (model, g) => panic!("{g:?} is not an element of {model}"),
        }
    }

    /// Largest achieved length, when the group is finite.
    pub fn max_length(&self) -> Option<f64> {
        match self.model {
            GroupModel::Cyclic(m) => Some((m / 2) as f64),
            _ => None,
        }
    }

    /// Smallest achieved length strictly greater than `r`, if any. All
    /// built-in lengths take every integer value up to their maximum.
    pub fn next_length_beyond(&self, r: f64) -> Option<f64> {
        let next = r.floor() + 1.0;
        match self.max_length() {
            Some(max) if next > max => None,
            _ => Some(next.max(0.0)),
        }
    }

    /// Achieved lengths in `(r, ∞)` closest to `target` (at most three
    /// candidates).
    pub(crate) fn lengths_beyond_near(&self, r: f64, target: f64) -> Vec<f64> {
        let Some(next) = self.next_length_beyond(r) else {
            return Vec::new();
        };
        let max = self.max_length().unwrap_or(f64::INFINITY);
        let mut out = vec![next];
        for cand in [target.floor(), target.ceil()] {
            if cand >= next && cand <= max {
                out.push(cand);
            }
        }
        out
    }
}

/// Finitely supported element of the group algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgElem {
    support: Vec<(GroupElement, Complex64)>,
}

impl GroupAlgElem {
    /// Merges repeated elements and drops zero coefficients. The support is
    /// kept in first-appearance order.
    pub fn new(terms: impl IntoIterator<Item = (GroupElement, Complex64)>) -> Self {
        let mut order: Vec<GroupElement> = Vec::new();
        let mut sums: BTreeMap<GroupElement, Complex64> = BTreeMap::new();
        for (g, c) in terms {
            let slot = sums.entry(g.clone()).or_insert_with(|| {
                order.push(g);
                Complex64::new(0.0, 0.0)
            });
            *slot += c;
        }
        let support = order
            .into_iter()
            .filter_map(|g| {
                let c = sums[&g];
                (c != Complex64::new(0.0, 0.0)).then_some((g, c))
            })
            .collect();
        GroupAlgElem { support }
    }

    pub fn delta(g: GroupElement) -> Self {
        Self::new([(g, Complex64::new(1.0, 0.0))])
    }

    pub fn support(&self) -> &[(GroupElement, Complex64)] {
        &self.support
    }

    pub fn coefficient(&self, g: &GroupElement) -> Complex64 {
        self.support
            .iter()
            .find(|(h, _)| h == g)
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.support.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.support.iter().map(|(g, c)| (g.clone(), c * s)))
    }

    /// Convolution `(a*b)(g) = Σ_k a(k) b(k⁻¹g)`.
    pub fn convolve(&self, other: &GroupAlgElem, model: &GroupModel) -> Self {
        let mut terms = Vec::with_capacity(self.support.len() * other.support.len());
        for (k, a) in &self.support {
            for (h, b) in &other.support {
                terms.push((model.multiply(k, h), a * b));
            }
        }
        Self::new(terms)
    }

    pub fn max_length(&self, length: &LengthFn) -> f64 {
        self.support
            .iter()
            .map(|(g, _)| length.eval(g))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(model: &GroupModel, s: &str) -> GroupElement {
        model.parse_element(s).unwrap()
    }

    #[test]
    fn parse_models() {
        assert_eq!("z".parse::<GroupModel>().unwrap(), GroupModel::Integers);
        assert_eq!("free:2".parse::<GroupModel>().unwrap(), GroupModel::Free(2));
        assert_eq!("cyclic:6".parse::<GroupModel>().unwrap(), GroupModel::Cyclic(6));
        assert_eq!("lattice:3".parse::<GroupModel>().unwrap(), GroupModel::Lattice(3));
        assert!("free:0".parse::<GroupModel>().is_err());
        assert!("heisenberg".parse::<GroupModel>().is_err());
    }

    #[test]
    fn words_reduce() {
        let f2 = GroupModel::Free(2);
        assert_eq!(word(&f2, "aA"), f2.identity());
        assert_eq!(word(&f2, "abBa"), GroupElement::Word(vec![1, 1]));
        assert_eq!(f2.format_element(&word(&f2, "aBa")), "aBa");
        assert_eq!(f2.format_element(&f2.identity()), "1");
        assert!(f2.parse_element("c").is_err());
        assert!(f2.parse_element("a1").is_err());
    }

    #[test]
    fn element_formats() {
        let z2 = GroupModel::Lattice(2);
        assert_eq!(word(&z2, "1,-2"), GroupElement::Vector(vec![1, -2]));
        assert!(z2.parse_element("1").is_err());
        assert_eq!(GroupModel::Cyclic(4).parse_element("-1").unwrap(), GroupElement::Int(3));
    }

    #[test]
    fn cyclic_lengths() {
        let l = LengthFn::standard(GroupModel::Cyclic(4));
        let vals: Vec<f64> = (0..4).map(|k| l.eval(&GroupElement::Int(k))).collect();
        assert_eq!(vals, vec![0.0, 1.0, 2.0, 1.0]);
        assert_eq!(l.next_length_beyond(1.0), Some(2.0));
        assert_eq!(l.next_length_beyond(2.0), None);
    }

    #[test]
    fn algebra_elements_merge_and_drop_zeros() {
        let one = Complex64::new(1.0, 0.0);
        let a = GroupAlgElem::new([
            (GroupElement::Int(1), one),
            (GroupElement::Int(2), one),
            (GroupElement::Int(1), -one),
            (GroupElement::Int(1), one * 3.0),
        ]);
        assert_eq!(a.support().len(), 2);
        assert_eq!(a.coefficient(&GroupElement::Int(1)), one * 3.0);
        assert_eq!(a.l1_norm(), 4.0);
    }

    #[test]
    fn convolution_of_deltas_multiplies() {
        let f2 = GroupModel::Free(2);
        let a = GroupAlgElem::delta(word(&f2, "ab"));
        let b = GroupAlgElem::delta(word(&f2, "Ba"));
        let ab = a.convolve(&b, &f2);
        assert_eq!(ab, GroupAlgElem::delta(word(&f2, "aa")));
    }

    fn arb_model() -> impl Strategy<Value = GroupModel> {
        prop_oneof![
            Just(GroupModel::Integers),
            (1usize..4).prop_map(GroupModel::Lattice),
            (1usize..4).prop_map(GroupModel::Free),
            (1u64..9).prop_map(GroupModel::Cyclic),
        ]
    }

    fn arb_element(model: GroupModel) -> BoxedStrategy<GroupElement> {
        match model {
            GroupModel::Integers => (-20i64..20).prop_map(GroupElement::Int).boxed(),
            GroupModel::Cyclic(m) => (0..m as i64).prop_map(GroupElement::Int).boxed(),
            GroupModel::Lattice(d) => proptest::collection::vec(-5i64..5, d)
                .prop_map(GroupElement::Vector)
                .boxed(),
            GroupModel::Free(k) => proptest::collection::vec(1..=k as Letter, 0..6)
                .prop_flat_map(|gens| {
                    let n = gens.len();
                    (Just(gens), proptest::collection::vec(any::<bool>(), n))
                })
                .prop_map(move |(gens, signs)| {
                    let letters = gens
                        .into_iter()
                        .zip(signs)
                        .map(|(g, s)| GroupElement::Word(vec![if s { g } else { -g }]));
                    letters.fold(model.identity(), |acc, l| model.multiply(&acc, &l))
                })
                .boxed(),
        }
    }

    fn arb_triple() -> impl Strategy<Value = (GroupModel, GroupElement, GroupElement)> {
        arb_model().prop_flat_map(|m| (Just(m), arb_element(m), arb_element(m)))
    }

    proptest! {
        #[test]
        fn length_function_axioms((model, g, h) in arb_triple()) {
            let l = LengthFn::standard(model);
            prop_assert!(model.contains(&g));
            prop_assert_eq!(model.multiply(&g, &model.invert(&g)), model.identity());
            prop_assert_eq!(l.eval(&model.invert(&g)), l.eval(&g));
            prop_assert!(l.eval(&model.multiply(&g, &h)) <= l.eval(&g) + l.eval(&h));
            prop_assert_eq!(l.eval(&g) == 0.0, g == model.identity());
            let text = model.format_element(&g);
            prop_assert_eq!(model.parse_element(&text).unwrap(), g);
        }
    }
}
