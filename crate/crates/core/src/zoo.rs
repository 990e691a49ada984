//! Example O-spaces and the model file format.
//!
//! ```text
//! space <size>
//! orth <i> <j>        # unordered orthogonal pair, symmetry implied
//! orth> <i> <j>       # one-directional pair (only for diagnosing defective relations)
//! flat <i1> <i2> ...  # optional; without any `flat` line the family is generated
//! ```

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::finite::{FiniteOSpace, StateId, StateSet, DEFAULT_FAMILY_CAP};
use crate::ospace::AxiomReport;

/// Describes a model to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    ClassicalSets(usize),
    Powerset(usize),
    Mo(usize),
    Union(Box<ModelSpec>, Box<ModelSpec>),
    File(String),
}

impl ModelSpec {
    pub fn build(&self) -> Result<FiniteOSpace> {
        match self {
            ModelSpec::ClassicalSets(n) => classical_sets(*n),
            ModelSpec::Powerset(m) => powerset_space(*m),
            ModelSpec::Mo(k) => mo_space(*k),
            ModelSpec::Union(a, b) => Ok(union(&a.build()?, &b.build()?)),
            ModelSpec::File(path) => Ok(load_model(path, Strictness::Strict)?.space),
        }
    }
}

/// `sets:N`, `powerset:M`, `mo:K`, or `A+B` for the union of two specs.
/// Anything else is taken as a model file path.
impl FromStr for ModelSpec {
    type Err = ParseError;

    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('+') {
            return Ok(ModelSpec::Union(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        let number = |n: &str| {
            n.parse::<usize>()
                .map_err(|_| ParseError::new(format!("`{n}` is not a model size in `{text}`")))
        };
        match text.split_once(':') {
            Some(("sets", n)) => Ok(ModelSpec::ClassicalSets(number(n)?)),
            Some(("powerset", n)) => Ok(ModelSpec::Powerset(number(n)?)),
            Some(("mo", n)) => Ok(ModelSpec::Mo(number(n)?)),
            _ if text.is_empty() => Err(ParseError::new("empty model specification")),
            _ => Ok(ModelSpec::File(text.to_string())),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::ClassicalSets(n) => write!(f, "sets:{n}"),
            ModelSpec::Powerset(m) => write!(f, "powerset:{m}"),
            ModelSpec::Mo(k) => write!(f, "mo:{k}"),
            ModelSpec::Union(a, b) => write!(f, "{a}+{b}"),
            ModelSpec::File(path) => f.write_str(path),
        }
    }
}

/// Carrier `{0..n−1}` with `x ⊥ y` iff `x ≠ y` and every subset a flat.
/// Flats are listed by binary counting over the carrier.
pub fn classical_sets(n: usize) -> Result<FiniteOSpace> {
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            pairs.push((x, y));
        }
    }
    let flats = all_subsets(n);
    FiniteOSpace::from_pairs(n, &pairs, Some(flats))
}

/// Carrier `2^Y` for `|Y| = m`, state `S ⊆ Y` at index `Σ_{i∈S} 2^i`;
/// `x ⊥ y` iff `x ∩ y = ∅`. The flats are the sets `2^B`, `B ⊆ Y`.
pub fn powerset_space(m: usize) -> Result<FiniteOSpace> {
    if m >= usize::BITS as usize - 1 {
        return Err(Error::CapExceeded {
            what: "powerset carrier",
            needed: 1u128 << m.min(127),
            cap: 1u128 << (usize::BITS - 2),
        });
    }
    let size = 1usize << m;
    let mut pairs = Vec::new();
    for x in 0..size {
        for y in x..size {
            if x & y == 0 {
                pairs.push((x, y));
            }
        }
    }
    let flats = (0..size)
        .map(|b| {
            let mut s = StateSet::empty(size);
            for x in (0..size).filter(|x| x & !b == 0) {
                s.insert(x);
            }
            s
        })
        .collect();
    FiniteOSpace::from_pairs(size, &pairs, Some(flats))
}

/// `k` orthogonal pairs of states `2i ⊥ 2i+1` and nothing else orthogonal.
/// The flats are `∅`, the singletons and the carrier: the lattice MO_k, which
/// for `k = 2` matches the standard ℚ² family closed under complement.
pub fn mo_space(k: usize) -> Result<FiniteOSpace> {
    if k == 0 {
        return Err(Error::EmptyCarrier);
    }
    let pairs: Vec<(StateId, StateId)> = (0..k).map(|i| (2 * i, 2 * i + 1)).collect();
    FiniteOSpace::from_pairs(2 * k, &pairs, None)
}

/// Sum of two spaces: `s1` is shifted by `|X₀|`.
pub fn union(s0: &FiniteOSpace, s1: &FiniteOSpace) -> FiniteOSpace {
    s0.sum(s1)
}

fn all_subsets(n: usize) -> Vec<StateSet> {
    (0u64..1 << n)
        .map(|mask| {
            let mut s = StateSet::empty(n);
            for i in (0..n).filter(|i| mask & (1 << i) != 0) {
                s.insert(i);
            }
            s
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    /// Refuse models failing any axiom.
    Strict,
    /// Load anyway; failures are returned in the report.
    Lenient,
}

#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub space: FiniteOSpace,
    pub report: AxiomReport,
    /// Whether the file listed its flats (otherwise they were generated).
    pub explicit_flats: bool,
}

/// Parses model text. With [`Strictness::Strict`] an axiom failure is an
/// error; otherwise it is reported alongside the model.
pub fn parse_model(text: &str, strictness: Strictness) -> Result<LoadedModel> {
    let mut size: Option<usize> = None;
    let mut sym: Vec<(StateId, StateId)> = Vec::new();
    let mut directed: Vec<(StateId, StateId)> = Vec::new();
    let mut flats: Vec<Vec<StateId>> = Vec::new();
    let mut explicit_flats = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::from(ParseError::new(m).on_line(lineno + 1));
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap_or_default();
        let nums: Vec<usize> = words
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| err(format!("`{w}` is not a state index")))
            })
            .collect::<Result<_>>()?;
        match keyword {
            "space" => {
                if size.is_some() {
                    return Err(err("duplicate `space` statement".into()));
                }
                match nums.as_slice() {
                    [n] => size = Some(*n),
                    _ => return Err(err("`space` takes exactly one size".into())),
                }
            }
            "orth" | "orth>" => {
                if size.is_none() {
                    return Err(err(format!("`{keyword}` before `space`")));
                }
                match nums.as_slice() {
                    [i, j] if keyword == "orth" => sym.push((*i, *j)),
                    [i, j] => directed.push((*i, *j)),
                    _ => return Err(err(format!("`{keyword}` takes two state indices"))),
                }
            }
            "flat" => {
                if size.is_none() {
                    return Err(err("`flat` before `space`".into()));
                }
                explicit_flats = true;
                flats.push(nums);
            }
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }

    let size = size.ok_or_else(|| Error::from(ParseError::new("missing `space` statement")))?;
    if size == 0 {
        return Err(Error::EmptyCarrier);
    }
    let mut matrix = vec![vec![false; size]; size];
    for &(i, j) in &sym {
        for s in [i, j] {
            if s >= size {
                return Err(Error::StateOutOfRange { state: s, size });
            }
        }
        matrix[i][j] = true;
        matrix[j][i] = true;
    }
    for &(i, j) in &directed {
        for s in [i, j] {
            if s >= size {
                return Err(Error::StateOutOfRange { state: s, size });
            }
        }
        matrix[i][j] = true;
    }
    let family = if explicit_flats {
        Some(
            flats
                .into_iter()
                .map(|f| StateSet::from_elements(size, f))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let space = match FiniteOSpace::new_unchecked(&matrix, family) {
        Ok(space) => space,
        Err(e @ Error::CapExceeded { .. }) if strictness == Strictness::Strict => return Err(e),
        Err(Error::CapExceeded { .. }) => FiniteOSpace::new_unchecked(&matrix, Some(Vec::new()))?,
        Err(e) => return Err(e),
    };
    let report = space.check_axioms();
    if strictness == Strictness::Strict {
        if let Some(f) = report.failures.first() {
            return Err(Error::AxiomViolation {
                axiom: f.axiom.to_string(),
                witness: f.witness.clone(),
            });
        }
    }
    Ok(LoadedModel {
        space,
        report,
        explicit_flats,
    })
}

/// Canonical text: `space`, symmetric pairs `i ≤ j` in order, one-way pairs,
/// then every flat in family order.
pub fn model_to_string(space: &FiniteOSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space {}", space.size());
    let (both, one_way) = space.pairs();
    for (i, j) in both {
        let _ = writeln!(out, "orth {i} {j}");
    }
    for (i, j) in one_way {
        let _ = writeln!(out, "orth> {i} {j}");
    }
    for f in space.flats() {
        out.push_str("flat");
        for e in f.elements() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

pub fn load_model(path: impl AsRef<Path>, strictness: Strictness) -> Result<LoadedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_model(&text, strictness)
}

pub fn save_model(space: &FiniteOSpace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model_to_string(space)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Generated family with the default cap, for callers that want to compare
/// against a loaded file.
pub fn generated_family(space: &FiniteOSpace) -> Result<Vec<StateSet>> {
    space.generate_family(&[], DEFAULT_FAMILY_CAP)
}
