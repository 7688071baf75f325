//! Text formats: matrices, group algebra elements, states and UHF spec files.
//!
//! Lines starting with `#` and blank lines are ignored everywhere. Complex
//! numbers are written `re+imj` (`1.5`, `-2j`, `0.5-1e-3j` are all accepted).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupAlgElem, GroupModel};
use crate::pspace::{OperatorMatrix, PExponent, WeightedPointSpace};
use crate::qmetric::State;
use crate::uhf::{AlphaSeq, UhfSpec, UhfTower};
use crate::{CMatrix, Complex64};

/// Parses `re`, `imj`, or `re±imj`. Non-finite parts are rejected.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() || !s.is_ascii() {
        return None;
    }
    let finite = |v: f64| v.is_finite().then_some(v);
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        return Some(Complex64::new(finite(s.parse().ok()?)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => finite(t.parse().ok()?),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(finite(body[..k].parse().ok()?)?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

/// Inverse of [`parse_complex`]; round-trips exactly.
pub fn format_complex(z: Complex64) -> String {
    let im = if z.im.is_sign_negative() {
        format!("-{}", -z.im)
    } else {
        format!("+{}", z.im)
    };
    format!("{}{im}j", z.re)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_reals(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::parse(line, format!("not a number: {t:?}")))
        })
        .collect()
}

/// Matrix file: `rows cols`, then `rows` lines of entries, then optional
/// `domain-weights:` / `codomain-weights:` blocks (weights on the same line
/// or on following lines). Missing blocks mean counting measure.
pub fn parse_matrix(text: &str) -> Result<OperatorMatrix> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty matrix file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [rows, cols] = dims[..] else {
        return Err(Error::parse(hl, "header must be \"rows cols\""));
    };
    if rows.checked_mul(cols).is_none_or(|n| n > 1 << 24) {
        return Err(Error::parse(hl, "matrix too large"));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| Error::parse(hl, format!("expected {rows} rows, found {r}")))?;
        let row: Vec<Complex64> = l
            .split_whitespace()
            .map(|t| parse_complex(t).ok_or_else(|| Error::parse(ln, format!("bad entry {t:?}"))))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::parse(ln, format!("expected {cols} entries, found {}", row.len())));
        }
        entries.extend(row);
    }

    let mut domain: Option<Vec<f64>> = None;
    let mut codomain: Option<Vec<f64>> = None;
    let mut current: Option<(usize, bool)> = None;
    for (ln, l) in lines {
        let (target, rest) = if let Some(rest) = l.strip_prefix("domain-weights:") {
            (Some(false), rest)
        } else if let Some(rest) = l.strip_prefix("codomain-weights:") {
            (Some(true), rest)
        } else {
            (None, l)
        };
        if let Some(is_codomain) = target {
            let slot = if is_codomain { &mut codomain } else { &mut domain };
            if slot.is_some() {
                return Err(Error::parse(ln, "weights block given twice"));
            }
            *slot = Some(Vec::new());
            current = Some((ln, is_codomain));
        }
        let Some((_, is_codomain)) = current else {
            return Err(Error::parse(ln, "unexpected content after matrix rows"));
        };
        let values = parse_reals(ln, rest)?;
        let slot = if is_codomain { &mut codomain } else { &mut domain };
        slot.get_or_insert_with(Vec::new).extend(values);
    }

    let space = |w: Option<Vec<f64>>, n: usize| -> Result<WeightedPointSpace> {
        match w {
            None => Ok(WeightedPointSpace::counting(n)),
            Some(w) if w.len() == n => WeightedPointSpace::infer(w),
            Some(w) => Err(Error::ShapeMismatch(format!(
                "{} weights for a space of {n} points",
                w.len()
            ))),
        }
    };
    let matrix = CMatrix::from_row_iterator(rows, cols, entries);
    OperatorMatrix::new(space(domain, cols)?, space(codomain, rows)?, matrix)
}

pub fn write_matrix(a: &OperatorMatrix) -> String {
    let m = a.entries();
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for r in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let block = |name: &str, w: &[f64]| -> String {
        let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
        format!("{name}: {}\n", w.join(" "))
    };
    if !is_counting(a.domain()) {
        out.push_str(&block("domain-weights", a.domain().weights()));
    }
    if !is_counting(a.codomain()) {
        out.push_str(&block("codomain-weights", a.codomain().weights()));
    }
    out
}

fn is_counting(s: &WeightedPointSpace) -> bool {
    s.weights().iter().all(|w| *w == 1.0)
}

/// Group algebra file: lines `element coefficient`, elements in the
/// encoding of `model`. Repeated elements are summed.
pub fn parse_group_element(text: &str, model: &GroupModel) -> Result<GroupAlgElem> {
    model.validate()?;
    let mut terms = Vec::new();
    for (ln, l) in content_lines(text) {
        let mut parts = l.split_whitespace();
        let (Some(g), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::parse(ln, "expected \"element coefficient\""));
        };
        let g = model
            .parse_element(g)
            .map_err(|e| Error::parse(ln, e.to_string()))?;
        let c = parse_complex(c).ok_or_else(|| Error::parse(ln, format!("bad coefficient {c:?}")))?;
        terms.push((g, c));
    }
    Ok(GroupAlgElem::new(terms))
}

pub fn write_group_element(a: &GroupAlgElem, model: &GroupModel) -> String {
    a.support()
        .iter()
        .map(|(g, c)| format!("{} {}\n", model.format_element(g), format_complex(*c)))
        .collect()
}

/// A state description independent of any particular tower.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Point(usize),
    Trace,
    Custom(Vec<Complex64>),
}

impl StateSpec {
    pub fn realize(&self, tower: &UhfTower) -> Result<State> {
        match self {
            StateSpec::Point(x) => State::point(tower, *x),
            StateSpec::Trace => Ok(State::trace(tower)),
            StateSpec::Custom(w) => State::custom(tower, w.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            StateSpec::Point(x) => format!("point{x}"),
            StateSpec::Trace => "trace".into(),
            StateSpec::Custom(_) => "custom".into(),
        }
    }
}

/// State file: `point INDEX`, `trace`, or `custom` followed by one complex
/// weight per line.
pub fn parse_state(text: &str) -> Result<StateSpec> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| Error::parse(0, "empty state file"))?;
    let mut words = head.split_whitespace();
    let spec = match (words.next(), words.next(), words.next()) {
        (Some("point"), Some(x), None) => StateSpec::Point(
            x.parse()
                .map_err(|_| Error::parse(ln, format!("bad point index {x:?}")))?,
        ),
        (Some("trace"), None, None) => StateSpec::Trace,
        (Some("custom"), None, None) => {
            let weights = lines
                .by_ref()
                .map(|(ln, l)| parse_complex(l).ok_or_else(|| Error::parse(ln, format!("bad weight {l:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if weights.is_empty() {
                return Err(Error::parse(ln, "custom state without weights"));
            }
            StateSpec::Custom(weights)
        }
        _ => return Err(Error::parse(ln, "expected \"point INDEX\", \"trace\" or \"custom\"")),
    };
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content"));
    }
    Ok(spec)
}

pub fn write_state(s: &StateSpec) -> String {
    match s {
        StateSpec::Point(x) => format!("point {x}\n"),
        StateSpec::Trace => "trace\n".into(),
        StateSpec::Custom(w) => {
            let mut out = String::from("custom\n");
            for z in w {
                out.push_str(&format_complex(*z));
                out.push('\n');
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum AlphaChoice {
    Explicit(Vec<f64>),
    Auto {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUhfFile {
    dims: Vec<usize>,
    alpha: AlphaChoice,
    #[serde(default = "default_p")]
    p: Vec<f64>,
}

fn default_p() -> Vec<f64> {
    vec![2.0]
}

/// Validated UHF spec file (`dims`, `alpha`, `p`).
#[derive(Debug, Clone, PartialEq)]
pub struct UhfSpecFile {
    pub spec: UhfSpec,
    pub alpha: AlphaChoice,
    pub p: Vec<PExponent>,
}

impl UhfSpecFile {
    /// The explicit alpha sequence, checked against the tower depth.
    pub fn explicit_alpha(&self) -> Option<Result<AlphaSeq>> {
        match &self.alpha {
            AlphaChoice::Explicit(v) => Some(AlphaSeq::new(v.clone()).and_then(|a| {
                if a.levels() == self.spec.levels() {
                    Ok(a)
                } else {
                    Err(Error::ShapeMismatch(format!(
                        "alpha has {} entries, dims has {}",
                        v.len(),
                        self.spec.dims().len()
                    )))
                }
            })),
            AlphaChoice::Auto {} => None,
        }
    }
}

/// Parses and validates a TOML UHF spec file.
pub fn parse_uhf_spec(text: &str) -> Result<UhfSpecFile> {
    let raw: RawUhfFile = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(0);
        Error::parse(line, e.message().to_string())
    })?;
    let spec = UhfSpec::new(raw.dims)?;
    if raw.p.is_empty() {
        return Err(Error::Precondition("p list must be nonempty".into()));
    }
    let p = raw.p.into_iter().map(PExponent::new).collect::<Result<Vec<_>>>()?;
    let file = UhfSpecFile {
        spec,
        alpha: raw.alpha,
        p,
    };
    if let Some(a) = file.explicit_alpha() {
        a?;
    }
    Ok(file)
}

pub fn write_uhf_spec(f: &UhfSpecFile) -> String {
    let raw = RawUhfFile {
        dims: f.spec.dims().to_vec(),
        alpha: f.alpha.clone(),
        p: f.p.iter().map(|p| p.value()).collect(),
    };
    toml::to_string(&raw).expect("plain data serializes")
}
