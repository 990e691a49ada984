//! Interpretation of propositions and sequents in an O-space, exhaustive
//! validity checks and countermodel search.
//!
//! A sequent `α₁, …, αₙ ⊢ β₁, …, βₘ` holds under `v` when
//! `((v(α₁) ⊗ v(α₂)) ⊗ …) ⊗ v(αₙ) ⊆ v(β₁) ⊕ (v(β₂) ⊕ (… ⊕ v(βₘ)))`.
//! An empty left side is `X`, an empty right side is `Z`; in particular the
//! bare turnstile `⊢` holds only in spaces where `X = Z`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::finite::{FiniteOSpace, StateSet};
use crate::laws::{check_laws, check_restrictions, LawFailure};
use crate::ospace::{AxiomReport, OSpace};
use crate::rational::{parse_subspace, standard_q2_flats, RationalSpace, Subspace};
use crate::syntax::{Prop, Sequent};
use crate::zoo::ModelSpec;

/// Atom name to flat.
pub type Assignment<F> = BTreeMap<Arc<str>, F>;

/// Upper bound on the number of assignments a validity query may visit.
pub const DEFAULT_ASSIGNMENT_CAP: u128 = 1_000_000;

pub fn eval_prop<S: OSpace>(space: &S, v: &Assignment<S::Flat>, p: &Prop) -> Result<S::Flat> {
    Ok(match p {
        Prop::Atom(a) => v.get(a).cloned().ok_or_else(|| Error::UnassignedAtom(a.to_string()))?,
        Prop::Neg(q) => space.complement(&eval_prop(space, v, q)?),
        Prop::And(l, r) => space.project(&eval_prop(space, v, l)?, &eval_prop(space, v, r)?),
        Prop::Or(l, r) => space.dual_sum(&eval_prop(space, v, l)?, &eval_prop(space, v, r)?),
    })
}

/// Left-associated `⊗` fold of the left side; `X` when empty.
pub fn eval_lhs<S: OSpace>(space: &S, v: &Assignment<S::Flat>, lhs: &[Prop]) -> Result<S::Flat> {
    lhs.iter()
        .try_fold(space.top(), |acc, p| Ok(space.project(&acc, &eval_prop(space, v, p)?)))
}

/// Right-associated `⊕` fold of the right side; `Z` when empty.
pub fn eval_rhs<S: OSpace>(space: &S, v: &Assignment<S::Flat>, rhs: &[Prop]) -> Result<S::Flat> {
    let Some((last, init)) = rhs.split_last() else {
        return Ok(space.zero());
    };
    init.iter().rev().try_fold(eval_prop(space, v, last)?, |acc, p| {
        Ok(space.dual_sum(&eval_prop(space, v, p)?, &acc))
    })
}

/// The two sides of a sequent under an assignment.
pub fn eval_sequent<S: OSpace>(space: &S, v: &Assignment<S::Flat>, s: &Sequent) -> Result<(S::Flat, S::Flat)> {
    Ok((eval_lhs(space, v, &s.lhs)?, eval_rhs(space, v, &s.rhs)?))
}

pub fn eval_sequent_holds<S: OSpace>(space: &S, v: &Assignment<S::Flat>, s: &Sequent) -> Result<bool> {
    let (l, r) = eval_sequent(space, v, s)?;
    Ok(space.is_subset(&l, &r))
}

/// An assignment under which a sequent fails, with both evaluated sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<F> {
    pub assignment: Assignment<F>,
    pub lhs: F,
    pub rhs: F,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<F> {
    Valid,
    Countermodel(Witness<F>),
}

impl<F> Verdict<F> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn witness(&self) -> Option<&Witness<F>> {
        match self {
            Verdict::Valid => None,
            Verdict::Countermodel(w) => Some(w),
        }
    }
}

/// Number of assignments of `family` to `atoms` atoms, or `None` past `u128`.
pub fn assignment_count(family_len: usize, atoms: usize) -> Option<u128> {
    (family_len as u128).checked_pow(atoms as u32)
}

/// Checks `s` under every assignment of atoms to members of `family`. Atoms
/// are taken in name order, the last atom varying fastest, so the reported
/// witness is the first violation in that order.
pub fn valid_in_model<S: OSpace>(space: &S, family: &[S::Flat], s: &Sequent, cap: u128) -> Result<Verdict<S::Flat>> {
    let atoms = s.atoms();
    let needed = assignment_count(family.len(), atoms.len()).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded {
            what: "assignments",
            needed,
            cap,
        });
    }
    if family.is_empty() && !atoms.is_empty() {
        return Ok(Verdict::Valid);
    }
    let mut digits = vec![0usize; atoms.len()];
    loop {
        let v: Assignment<S::Flat> = atoms
            .iter()
            .zip(&digits)
            .map(|(a, &d)| (a.clone(), family[d].clone()))
            .collect();
        let (lhs, rhs) = eval_sequent(space, &v, s)?;
        if !space.is_subset(&lhs, &rhs) {
            return Ok(Verdict::Countermodel(Witness {
                assignment: v,
                lhs,
                rhs,
            }));
        }
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(Verdict::Valid);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < family.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// A flat from either backend.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FlatValue {
    Set(StateSet),
    Span(Subspace),
}

impl fmt::Display for FlatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatValue::Set(s) => write!(f, "{s}"),
            FlatValue::Span(s) => write!(f, "{s}"),
        }
    }
}

impl fmt::Debug for FlatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A countermodel found in a named model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelWitness {
    pub model: String,
    pub witness: Witness<FlatValue>,
}

impl fmt::Display for ModelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# countermodel in {}", self.model)?;
        f.write_str(&format_assignment(&self.witness.assignment))?;
        writeln!(f, "# lhs = {}", self.witness.lhs)?;
        write!(f, "# rhs = {}", self.witness.rhs)
    }
}

/// A concrete model together with the finite flat list that assignments
/// range over.
#[derive(Debug, Clone)]
pub enum Model {
    Finite {
        label: String,
        space: FiniteOSpace,
    },
    Rational {
        label: String,
        space: RationalSpace,
        flats: Vec<Subspace>,
    },
}

impl Model {
    pub fn finite(label: impl Into<String>, space: FiniteOSpace) -> Self {
        Model::Finite {
            label: label.into(),
            space,
        }
    }

    /// ℚ² with the five standard flats.
    pub fn q2() -> Self {
        Model::Rational {
            label: "zoo:q2".into(),
            space: RationalSpace::new(2).expect("dimension 2"),
            flats: standard_q2_flats(),
        }
    }

    /// Resolves `zoo:q2`, `zoo:<spec>` (see [`ModelSpec`]) or a model file.
    pub fn from_name(name: &str) -> Result<Self> {
        if name == "zoo:q2" {
            return Ok(Model::q2());
        }
        let spec = match name.strip_prefix("zoo:") {
            Some(rest) => {
                let spec: ModelSpec = rest.parse()?;
                if matches!(spec, ModelSpec::File(_)) {
                    return Err(ParseError::new(format!("unknown zoo model `{name}`")).into());
                }
                spec
            }
            None => ModelSpec::File(name.to_string()),
        };
        Ok(Model::finite(name, spec.build()?))
    }

    pub fn label(&self) -> &str {
        match self {
            Model::Finite { label, .. } | Model::Rational { label, .. } => label,
        }
    }

    pub fn family_len(&self) -> usize {
        match self {
            Model::Finite { space, .. } => space.flats().len(),
            Model::Rational { flats, .. } => flats.len(),
        }
    }

    pub fn family(&self) -> Vec<FlatValue> {
        match self {
            Model::Finite { space, .. } => space.flats().iter().cloned().map(FlatValue::Set).collect(),
            Model::Rational { flats, .. } => flats.iter().cloned().map(FlatValue::Span).collect(),
        }
    }

    /// Exhaustive on finite models; sampled over the flat list on ℚⁿ.
    pub fn check_axioms(&self) -> AxiomReport {
        match self {
            Model::Finite { space, .. } => space.check_axioms(),
            Model::Rational { space, flats, .. } => space.check_axioms_sampled(flats),
        }
    }

    /// Failures of the algebraic laws and of the O-subspace law.
    pub fn check_laws(&self) -> Vec<LawFailure> {
        match self {
            Model::Finite { space, .. } => {
                let states = space.states();
                let mut out = check_laws(space, &states, space.flats());
                out.extend(check_restrictions(space, &states, space.flats()));
                out
            }
            Model::Rational { space, flats, .. } => {
                let states = space.sample_vectors();
                let mut out = check_laws(space, &states, flats);
                out.extend(check_restrictions(space, &states, flats));
                out
            }
        }
    }

    pub fn valid(&self, s: &Sequent, cap: u128) -> Result<Option<ModelWitness>> {
        let found = match self {
            Model::Finite { space, .. } => valid_in_model(space, space.flats(), s, cap)?
                .witness()
                .map(|w| map_witness(w, |f| FlatValue::Set(f.clone()))),
            Model::Rational { space, flats, .. } => valid_in_model(space, flats, s, cap)?
                .witness()
                .map(|w| map_witness(w, |f| FlatValue::Span(f.clone()))),
        };
        Ok(found.map(|witness| ModelWitness {
            model: self.label().to_string(),
            witness,
        }))
    }

    /// Evaluates both sides of `s` under `v`.
    pub fn eval_sequent(&self, v: &Assignment<FlatValue>, s: &Sequent) -> Result<(FlatValue, FlatValue)> {
        match self {
            Model::Finite { space, .. } => {
                let v = self.unwrap_sets(v)?;
                let (l, r) = eval_sequent(space, &v, s)?;
                Ok((FlatValue::Set(l), FlatValue::Set(r)))
            }
            Model::Rational { space, .. } => {
                let v = self.unwrap_spans(v)?;
                let (l, r) = eval_sequent(space, &v, s)?;
                Ok((FlatValue::Span(l), FlatValue::Span(r)))
            }
        }
    }

    pub fn holds(&self, v: &Assignment<FlatValue>, s: &Sequent) -> Result<bool> {
        Ok(match self.eval_sequent(v, s)? {
            (FlatValue::Set(l), FlatValue::Set(r)) => l.is_subset(&r),
            (FlatValue::Span(l), FlatValue::Span(r)) => l.is_subspace_of(&r),
            _ => unreachable!("both sides come from the same backend"),
        })
    }

    pub fn eval_prop(&self, v: &Assignment<FlatValue>, p: &Prop) -> Result<FlatValue> {
        match self {
            Model::Finite { space, .. } => Ok(FlatValue::Set(eval_prop(space, &self.unwrap_sets(v)?, p)?)),
            Model::Rational { space, .. } => Ok(FlatValue::Span(eval_prop(space, &self.unwrap_spans(v)?, p)?)),
        }
    }

    fn unwrap_sets(&self, v: &Assignment<FlatValue>) -> Result<Assignment<StateSet>> {
        v.iter()
            .map(|(a, f)| match f {
                FlatValue::Set(s) => Ok((a.clone(), s.clone())),
                FlatValue::Span(s) => Err(Error::NotInFamily(format!("{a} = {s}"))),
            })
            .collect()
    }

    fn unwrap_spans(&self, v: &Assignment<FlatValue>) -> Result<Assignment<Subspace>> {
        v.iter()
            .map(|(a, f)| match f {
                FlatValue::Span(s) => Ok((a.clone(), s.clone())),
                FlatValue::Set(s) => Err(Error::NotInFamily(format!("{a} = {s}"))),
            })
            .collect()
    }

    /// Reads a flat literal valid in this model: `{i, j}` on a finite model
    /// (which must be a member of its family), `span[…]` on ℚⁿ.
    pub fn parse_flat(&self, text: &str) -> std::result::Result<FlatValue, Error> {
        match self {
            Model::Finite { space, .. } => {
                let set = parse_state_set(text, space.size())?;
                if !space.flats().contains(&set) {
                    return Err(Error::NotInFamily(set.to_string()));
                }
                Ok(FlatValue::Set(set))
            }
            Model::Rational { space, .. } => Ok(FlatValue::Span(parse_subspace(text, space.dim())?)),
        }
    }
}

fn map_witness<F, G>(w: &Witness<F>, f: impl Fn(&F) -> G) -> Witness<G> {
    Witness {
        assignment: w.assignment.iter().map(|(a, x)| (a.clone(), f(x))).collect(),
        lhs: f(&w.lhs),
        rhs: f(&w.rhs),
    }
}

/// Parses `{i, j, …}` over a carrier of `size` states.
pub fn parse_state_set(text: &str, size: usize) -> Result<StateSet> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| ParseError::new(format!("expected `{{…}}` state set, found `{}`", text.trim())))?;
    let mut elements = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() && inner.trim().is_empty() {
            break;
        }
        elements.push(
            part.parse::<usize>()
                .map_err(|_| ParseError::new(format!("`{part}` is not a state index")))?,
        );
    }
    StateSet::from_elements(size, elements)
}

/// One `atom = flat` line per atom, in name order.
pub fn format_assignment(v: &Assignment<FlatValue>) -> String {
    v.iter().map(|(a, f)| format!("{a} = {f}\n")).collect()
}

/// Reads the assignment file format: `atom = <flat literal>` per line, with
/// `#` comments and blank lines ignored.
pub fn parse_assignment(text: &str, model: &Model) -> Result<Assignment<FlatValue>> {
    let mut v = Assignment::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let on_line = |e: Error| match e {
            Error::Parse(p) => Error::Parse(p.on_line(lineno + 1)),
            other => other,
        };
        let (atom, flat) = line
            .split_once('=')
            .ok_or_else(|| Error::from(ParseError::new("expected `atom = flat`").on_line(lineno + 1)))?;
        let atom = atom.trim();
        match Prop::parse(atom) {
            Ok(Prop::Atom(name)) => {
                let value = model.parse_flat(flat).map_err(on_line)?;
                if v.insert(name, value).is_some() {
                    return Err(ParseError::new(format!("atom `{atom}` assigned twice"))
                        .on_line(lineno + 1)
                        .into());
                }
            }
            _ => {
                return Err(ParseError::new(format!("`{atom}` is not an atom name"))
                    .on_line(lineno + 1)
                    .into())
            }
        }
    }
    Ok(v)
}

/// Models tried by [`find_countermodel`] when none are given: small
/// classical and powerset spaces, their union, then ℚ² with its five flats.
pub fn default_models() -> Vec<Model> {
    [
        "zoo:sets:1",
        "zoo:sets:2",
        "zoo:powerset:1",
        "zoo:powerset:2",
        "zoo:sets:2+powerset:2",
        "zoo:q2",
    ]
    .iter()
    .map(|name| Model::from_name(name).expect("built-in model"))
    .collect()
}

/// Outcome of a countermodel search.
#[derive(Debug, Clone, Default)]
pub struct CountermodelSearch {
    pub witness: Option<ModelWitness>,
    /// Models not examined because their assignment space exceeded the cap.
    pub skipped: Vec<String>,
}

/// Tries each model in order and returns the first violation found.
pub fn find_countermodel(s: &Sequent, models: &[Model], cap: u128) -> Result<CountermodelSearch> {
    let mut out = CountermodelSearch::default();
    for m in models {
        match m.valid(s, cap) {
            Ok(Some(w)) => {
                out.witness = Some(w);
                return Ok(out);
            }
            Ok(None) => {}
            Err(Error::CapExceeded { .. }) => out.skipped.push(m.label().to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
