//! The ten-rule calculus: rules, proof scripts, and the step checker.
//!
//! Every sequent in a script has an empty right side and only atomic
//! negations. Where a rule mentions `¬α` the checker uses [`negate`], so the
//! calculus never leaves the restricted language.
//!
//! Script text:
//!
//! ```text
//! goal: p & q, ~q |-
//! 1: R6 NegAtomic [sigma=q]            : q, ~q |-
//! 2: R3 LeftWeakening [alpha=p] from 1 : p, q, ~q |-
//! 3: R7 LeftAnd from 2                 : p & q, ~q |-
//! ```
//!
//! A step is `index: rule [bindings] from i,j : sequent`. The rule may be
//! written as its code (`R6`), its name (`NegAtomic`) or both. Bindings are
//! `name=value` pairs separated by `;` where `Gamma` and `Delta` take
//! comma-separated lists and `alpha`, `beta`, `gamma`, `sigma` take single
//! propositions. They are optional; when present they must agree with the
//! instantiation the checker infers. `index: Assume : sequent` introduces a
//! hypothesis. Lines starting with `#` are comments.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::ParseError;
use crate::syntax::{negate, Prop, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    Cut,
    Exchange,
    LeftWeakening,
    RightWeakening,
    Stuttering,
    NegAtomic,
    LeftAnd,
    RightAnd,
    NegVee1,
    VeeIntro,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::Cut,
        RuleId::Exchange,
        RuleId::LeftWeakening,
        RuleId::RightWeakening,
        RuleId::Stuttering,
        RuleId::NegAtomic,
        RuleId::LeftAnd,
        RuleId::RightAnd,
        RuleId::NegVee1,
        RuleId::VeeIntro,
    ];

    /// 1 to 10.
    pub fn number(self) -> usize {
        RuleId::ALL.iter().position(|&r| r == self).expect("listed") + 1
    }

    pub fn code(self) -> String {
        format!("R{}", self.number())
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Cut => "Cut",
            RuleId::Exchange => "Exchange",
            RuleId::LeftWeakening => "LeftWeakening",
            RuleId::RightWeakening => "RightWeakening",
            RuleId::Stuttering => "Stuttering",
            RuleId::NegAtomic => "NegAtomic",
            RuleId::LeftAnd => "LeftAnd",
            RuleId::RightAnd => "RightAnd",
            RuleId::NegVee1 => "NegVee1",
            RuleId::VeeIntro => "VeeIntro",
        }
    }

    pub fn premise_count(self) -> usize {
        match self {
            RuleId::NegAtomic | RuleId::NegVee1 => 0,
            RuleId::Cut | RuleId::Stuttering | RuleId::VeeIntro => 2,
            _ => 1,
        }
    }

    /// Metavariables the rule schema mentions.
    pub fn metas(self) -> &'static [Meta] {
        use Meta::*;
        match self {
            RuleId::Cut | RuleId::Stuttering => &[Gamma, Alpha, Delta],
            RuleId::Exchange | RuleId::NegVee1 => &[Alpha, Beta],
            RuleId::LeftWeakening | RuleId::RightWeakening => &[Gamma, Alpha],
            RuleId::NegAtomic => &[Sigma],
            RuleId::LeftAnd => &[Alpha, Beta, Delta],
            RuleId::RightAnd => &[Gamma, Alpha, Beta],
            RuleId::VeeIntro => &[Gamma, Alpha, Beta, Delta],
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{} {}", self.number(), self.name())
    }
}

impl FromStr for RuleId {
    type Err = ParseError;

    /// Accepts `R6`, `NegAtomic` or `R6 NegAtomic`.
    fn from_str(text: &str) -> Result<Self, ParseError> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let by_word = |w: &str| {
            RuleId::ALL
                .iter()
                .copied()
                .find(|r| r.code().eq_ignore_ascii_case(w) || r.name().eq_ignore_ascii_case(w))
        };
        match words.as_slice() {
            [w] => by_word(w).ok_or_else(|| ParseError::new(format!("unknown rule `{w}`"))),
            [code, name] => match (by_word(code), by_word(name)) {
                (Some(a), Some(b)) if a == b => Ok(a),
                (Some(a), Some(b)) => Err(ParseError::new(format!(
                    "rule code {} does not match name {}",
                    a.code(),
                    b.name()
                ))),
                _ => Err(ParseError::new(format!("unknown rule `{text}`"))),
            },
            _ => Err(ParseError::new(format!("unknown rule `{text}`"))),
        }
    }
}

/// Schematic variables. `Gamma` and `Delta` range over lists, the rest over
/// single propositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Meta {
    Gamma,
    Delta,
    Alpha,
    Beta,
    LowerGamma,
    Sigma,
}

impl Meta {
    pub const ALL: [Meta; 6] = [
        Meta::Gamma,
        Meta::Delta,
        Meta::Alpha,
        Meta::Beta,
        Meta::LowerGamma,
        Meta::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Meta::Gamma => "Gamma",
            Meta::Delta => "Delta",
            Meta::Alpha => "alpha",
            Meta::Beta => "beta",
            Meta::LowerGamma => "gamma",
            Meta::Sigma => "sigma",
        }
    }

    pub fn is_list(self) -> bool {
        matches!(self, Meta::Gamma | Meta::Delta)
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Binding {
    One(Prop),
    List(Vec<Prop>),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::One(p) => write!(f, "{p}"),
            Binding::List(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A (possibly partial) instantiation of metavariables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Bindings(pub BTreeMap<Meta, Binding>);

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(mut self, meta: Meta, p: Prop) -> Self {
        self.0.insert(meta, Binding::One(p));
        self
    }

    pub fn with_list(mut self, meta: Meta, ps: Vec<Prop>) -> Self {
        self.0.insert(meta, Binding::List(ps));
        self
    }

    pub fn one(&self, meta: Meta) -> Option<&Prop> {
        match self.0.get(&meta) {
            Some(Binding::One(p)) => Some(p),
            _ => None,
        }
    }

    pub fn list(&self, meta: Meta) -> Option<&[Prop]> {
        match self.0.get(&meta) {
            Some(Binding::List(ps)) => Some(ps),
            _ => None,
        }
    }

    /// Every proposition mentioned, for restriction checks.
    fn props(&self) -> impl Iterator<Item = &Prop> {
        self.0.values().flat_map(|b| match b {
            Binding::One(p) => std::slice::from_ref(p),
            Binding::List(ps) => ps.as_slice(),
        })
    }

    /// Parses `name=value; name=value`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut out = Bindings::new();
        for part in text.split(';') {
            if part.trim().is_empty() {
                continue;
            }
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| ParseError::new(format!("expected `name=value`, found `{}`", part.trim())))?;
            let name = name.trim();
            let meta = Meta::ALL
                .iter()
                .copied()
                .find(|m| m.name() == name)
                .ok_or_else(|| ParseError::new(format!("unknown metavariable `{name}`")))?;
            let binding = if meta.is_list() {
                Binding::List(Sequent::parse(&format!("{value} |-"))?.lhs)
            } else {
                Binding::One(Prop::parse(value)?)
            };
            if out.0.insert(meta, binding).is_some() {
                return Err(ParseError::new(format!("metavariable `{name}` bound twice")));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, b)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{m}={b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Rule {
        rule: RuleId,
        premises: Vec<usize>,
        bindings: Bindings,
    },
    /// A hypothesis leaf.
    Assume,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    /// 1-based position in the script.
    pub index: usize,
    pub conclusion: Sequent,
    pub justification: Justification,
}

impl ProofStep {
    fn header(&self) -> String {
        match &self.justification {
            Justification::Assume => format!("{}: Assume", self.index),
            Justification::Rule {
                rule,
                premises,
                bindings,
            } => {
                let mut h = format!("{}: {rule}", self.index);
                if !bindings.is_empty() {
                    h.push_str(&format!(" [{bindings}]"));
                }
                if !premises.is_empty() {
                    let list: Vec<String> = premises.iter().map(|p| p.to_string()).collect();
                    h.push_str(&format!(" from {}", list.join(",")));
                }
                h
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub goal: Sequent,
    pub steps: Vec<ProofStep>,
}

impl ProofScript {
    /// No hypothesis steps.
    pub fn is_closed(&self) -> bool {
        self.assumptions().is_empty()
    }

    pub fn assumptions(&self) -> Vec<&Sequent> {
        self.steps
            .iter()
            .filter(|s| s.justification == Justification::Assume)
            .map(|s| &s.conclusion)
            .collect()
    }

    /// Count of steps using each rule.
    pub fn rule_usage(&self) -> BTreeMap<RuleId, usize> {
        let mut out = BTreeMap::new();
        for s in &self.steps {
            if let Justification::Rule { rule, .. } = s.justification {
                *out.entry(rule).or_insert(0) += 1;
            }
        }
        out
    }

    /// Height of the derivation tree ending in the last step (axioms and
    /// hypotheses have height 1).
    pub fn height(&self) -> usize {
        let mut heights: Vec<usize> = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let h = match &s.justification {
                Justification::Assume => 1,
                Justification::Rule { premises, .. } => {
                    1 + premises
                        .iter()
                        .map(|&p| heights.get(p.wrapping_sub(1)).copied().unwrap_or(0))
                        .max()
                        .unwrap_or(0)
                }
            };
            heights.push(h);
        }
        heights.last().copied().unwrap_or(0)
    }

    pub fn parse(text: &str) -> Result<ProofScript, ParseError> {
        let mut goal = None;
        let mut steps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let on_line = |e: ParseError| e.on_line(lineno + 1);
            if let Some(rest) = line.strip_prefix("goal:") {
                if goal.is_some() {
                    return Err(on_line(ParseError::new("duplicate `goal:` line")));
                }
                goal = Some(Sequent::parse(rest).map_err(on_line)?);
                continue;
            }
            if goal.is_none() {
                return Err(on_line(ParseError::new("expected `goal:` before the first step")));
            }
            steps.push(parse_step(line).map_err(on_line)?);
        }
        let goal = goal.ok_or_else(|| ParseError::new("missing `goal:` line"))?;
        Ok(ProofScript { goal, steps })
    }
}

fn parse_step(line: &str) -> Result<ProofStep, ParseError> {
    let (index, rest) = line
        .split_once(':')
        .ok_or_else(|| ParseError::new("expected `index: rule … : sequent`"))?;
    let index: usize = index
        .trim()
        .parse()
        .map_err(|_| ParseError::new(format!("`{}` is not a step index", index.trim())))?;
    let (header, sequent) = rest
        .split_once(':')
        .ok_or_else(|| ParseError::new("expected `: sequent` after the rule"))?;
    let conclusion = Sequent::parse(sequent)?;
    let header = header.trim();

    let (head, tail) = match header.split_once('[') {
        Some((h, t)) => {
            let (b, after) = t
                .split_once(']')
                .ok_or_else(|| ParseError::new("unterminated `[` in bindings"))?;
            (h.trim(), Some((b, after.trim())))
        }
        None => (header, None),
    };
    let (rule_text, bindings, from_text) = match tail {
        Some((b, after)) => (head, Bindings::parse(b)?, after),
        None => match head.split_once(" from ") {
            Some((r, f)) => (r.trim(), Bindings::new(), f.trim()),
            None => match head.strip_suffix(" from") {
                Some(_) => return Err(ParseError::new("`from` needs premise indices")),
                None => (head, Bindings::new(), ""),
            },
        },
    };
    let from_text = if from_text.is_empty() {
        ""
    } else if let Some(f) = from_text.strip_prefix("from ") {
        f.trim()
    } else if from_text.starts_with("from") {
        from_text["from".len()..].trim()
    } else {
        from_text
    };
    let premises = if from_text.is_empty() {
        Vec::new()
    } else {
        from_text
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(format!("`{}` is not a step index", p.trim())))
            })
            .collect::<Result<_, _>>()?
    };
    if rule_text.eq_ignore_ascii_case("assume") {
        if !premises.is_empty() || !bindings.is_empty() {
            return Err(ParseError::new("`Assume` takes no premises or bindings"));
        }
        return Ok(ProofStep {
            index,
            conclusion,
            justification: Justification::Assume,
        });
    }
    Ok(ProofStep {
        index,
        conclusion,
        justification: Justification::Rule {
            rule: rule_text.parse()?,
            premises,
            bindings,
        },
    })
}

/// Canonical text. The `: sequent` column is aligned across steps.
impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "goal: {}", self.goal)?;
        let headers: Vec<String> = self.steps.iter().map(ProofStep::header).collect();
        let width = headers.iter().map(|h| h.chars().count()).max().unwrap_or(0);
        for (h, s) in headers.iter().zip(&self.steps) {
            writeln!(f, "{h:width$} : {}", s.conclusion)?;
        }
        Ok(())
    }
}

/// Why a script was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{message}", self.location())]
pub struct Violation {
    /// 1-based step index, when the problem is in a step.
    pub step: Option<usize>,
    pub rule: Option<RuleId>,
    /// 1-based formula position in the conclusion, when one is to blame.
    pub position: Option<usize>,
    pub message: String,
}

impl Violation {
    fn script(message: impl Into<String>) -> Self {
        Violation {
            step: None,
            rule: None,
            position: None,
            message: message.into(),
        }
    }

    fn location(&self) -> String {
        let mut out = String::new();
        if let Some(s) = self.step {
            out.push_str(&format!("step {s}"));
            if let Some(r) = self.rule {
                out.push_str(&format!(" ({r})"));
            }
            if let Some(p) = self.position {
                out.push_str(&format!(", formula {p}"));
            }
            out.push_str(": ");
        }
        out
    }
}

/// A schema mismatch before it is attributed to a step.
struct Mismatch {
    position: Option<usize>,
    message: String,
}

impl Mismatch {
    fn new(message: impl Into<String>) -> Self {
        Mismatch {
            position: None,
            message: message.into(),
        }
    }
}

/// A way the premises instantiate the rule: the conclusion it licenses and
/// the metavariable values.
struct Instance {
    conclusion: Vec<Prop>,
    bindings: Bindings,
}

fn concat(parts: &[&[Prop]]) -> Vec<Prop> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn common_prefix(a: &[Prop], b: &[Prop]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `Γ,α,Δ` and `Γ,¬α,Δ`.
fn cut_instances(p1: &[Prop], p2: &[Prop]) -> Result<Vec<Instance>, Mismatch> {
    if p1.len() != p2.len() {
        return Err(Mismatch::new(format!(
            "premises have {} and {} formulas; they must differ in exactly one position",
            p1.len(),
            p2.len()
        )));
    }
    let k = common_prefix(p1, p2);
    if k == p1.len() {
        return Err(Mismatch::new("premises are identical"));
    }
    if p1[k + 1..] != p2[k + 1..] {
        return Err(Mismatch::new(format!(
            "premises differ in more than one position (first at formula {})",
            k + 1
        )));
    }
    if p2[k] != negate(&p1[k]) {
        return Err(Mismatch::new(format!(
            "formula {} of the premises, `{}` and `{}`, are not negations of each other",
            k + 1,
            p1[k],
            p2[k]
        )));
    }
    let conclusion = concat(&[&p1[..k], &p1[k + 1..]]);
    let make = |alpha: &Prop| Instance {
        conclusion: conclusion.clone(),
        bindings: Bindings::new()
            .with_list(Meta::Gamma, p1[..k].to_vec())
            .with(Meta::Alpha, alpha.clone())
            .with_list(Meta::Delta, p1[k + 1..].to_vec()),
    };
    Ok(vec![make(&p1[k]), make(&p2[k])])
}

/// `Γ,Δ` and `Γ,α`.
fn stutter_instance(p1: &[Prop], p2: &[Prop]) -> Result<Instance, Mismatch> {
    let Some((alpha, gamma)) = p2.split_last() else {
        return Err(Mismatch::new("second premise `Γ, α` is empty"));
    };
    if !p1.starts_with(gamma) {
        return Err(Mismatch::new(format!(
            "first premise does not start with Γ = `{}`",
            Binding::List(gamma.to_vec())
        )));
    }
    let delta = &p1[gamma.len()..];
    Ok(Instance {
        conclusion: concat(&[gamma, &[negate(alpha)], delta]),
        bindings: Bindings::new()
            .with_list(Meta::Gamma, gamma.to_vec())
            .with(Meta::Alpha, alpha.clone())
            .with_list(Meta::Delta, delta.to_vec()),
    })
}

/// `Γ,α,Δ` and `Γ,¬α,β,Δ`.
fn vee_instance(p1: &[Prop], p2: &[Prop]) -> Result<Instance, Mismatch> {
    if p2.len() != p1.len() + 1 {
        return Err(Mismatch::new(
            "second premise must have exactly one formula more than the first",
        ));
    }
    let k = common_prefix(p1, p2);
    if k == p1.len() {
        return Err(Mismatch::new("first premise has no formula α after the shared prefix"));
    }
    let alpha = &p1[k];
    if p2[k] != negate(alpha) {
        return Err(Mismatch::new(format!(
            "formula {} of the second premise should be `{}`, found `{}`",
            k + 1,
            negate(alpha),
            p2[k]
        )));
    }
    let beta = &p2[k + 1];
    let delta = &p1[k + 1..];
    if &p2[k + 2..] != delta {
        return Err(Mismatch::new("premises disagree after `¬α, β`"));
    }
    Ok(Instance {
        conclusion: concat(&[&p1[..k], &[Prop::or(alpha.clone(), beta.clone())], delta]),
        bindings: Bindings::new()
            .with_list(Meta::Gamma, p1[..k].to_vec())
            .with(Meta::Alpha, alpha.clone())
            .with(Meta::Beta, beta.clone())
            .with_list(Meta::Delta, delta.to_vec()),
    })
}

/// Tries `f(a, b)` and then `f(b, a)`; reports the first failure.
fn either_order(
    a: &[Prop],
    b: &[Prop],
    f: impl Fn(&[Prop], &[Prop]) -> Result<Instance, Mismatch>,
) -> Result<Vec<Instance>, Mismatch> {
    match (f(a, b), f(b, a)) {
        (Err(e), Err(_)) => Err(e),
        (x, y) => Ok(x.into_iter().chain(y).collect()),
    }
}

fn instances(rule: RuleId, prem: &[&[Prop]], c: &[Prop]) -> Result<Vec<Instance>, Mismatch> {
    let one = |i: Instance| Ok(vec![i]);
    match rule {
        RuleId::Cut => cut_instances(prem[0], prem[1]),
        RuleId::Exchange => match prem[0] {
            [a, b] => one(Instance {
                conclusion: vec![b.clone(), a.clone()],
                bindings: Bindings::new().with(Meta::Alpha, a.clone()).with(Meta::Beta, b.clone()),
            }),
            p => Err(Mismatch::new(format!(
                "premise has {} formulas; exchange needs exactly two",
                p.len()
            ))),
        },
        RuleId::LeftWeakening => match c.first() {
            Some(alpha) => one(Instance {
                conclusion: concat(&[&[alpha.clone()], prem[0]]),
                bindings: Bindings::new()
                    .with_list(Meta::Gamma, prem[0].to_vec())
                    .with(Meta::Alpha, alpha.clone()),
            }),
            None => Err(Mismatch::new("conclusion is empty")),
        },
        RuleId::RightWeakening => match c.last() {
            Some(alpha) => one(Instance {
                conclusion: concat(&[prem[0], &[alpha.clone()]]),
                bindings: Bindings::new()
                    .with_list(Meta::Gamma, prem[0].to_vec())
                    .with(Meta::Alpha, alpha.clone()),
            }),
            None => Err(Mismatch::new("conclusion is empty")),
        },
        RuleId::Stuttering => either_order(prem[0], prem[1], stutter_instance),
        RuleId::NegAtomic => match c.first() {
            Some(sigma @ Prop::Atom(_)) => one(Instance {
                conclusion: vec![sigma.clone(), Prop::not(sigma.clone())],
                bindings: Bindings::new().with(Meta::Sigma, sigma.clone()),
            }),
            Some(other) => Err(Mismatch {
                position: Some(1),
                message: format!("`{other}` is not atomic"),
            }),
            None => Err(Mismatch::new("conclusion is empty")),
        },
        RuleId::LeftAnd => match prem[0] {
            [a, b, delta @ ..] => one(Instance {
                conclusion: concat(&[&[Prop::and(a.clone(), b.clone())], delta]),
                bindings: Bindings::new()
                    .with(Meta::Alpha, a.clone())
                    .with(Meta::Beta, b.clone())
                    .with_list(Meta::Delta, delta.to_vec()),
            }),
            _ => Err(Mismatch::new("premise needs at least two formulas")),
        },
        RuleId::RightAnd => match prem[0] {
            [gamma @ .., a, b] => one(Instance {
                conclusion: concat(&[gamma, &[Prop::and(b.clone(), a.clone())]]),
                bindings: Bindings::new()
                    .with_list(Meta::Gamma, gamma.to_vec())
                    .with(Meta::Alpha, a.clone())
                    .with(Meta::Beta, b.clone()),
            }),
            _ => Err(Mismatch::new("premise needs at least two formulas")),
        },
        RuleId::NegVee1 => match c {
            [x, y, ..] => {
                let (alpha, beta) = (negate(x), negate(y));
                one(Instance {
                    conclusion: vec![x.clone(), y.clone(), Prop::or(beta.clone(), alpha.clone())],
                    bindings: Bindings::new().with(Meta::Alpha, alpha).with(Meta::Beta, beta),
                })
            }
            _ => Err(Mismatch::new("axiom has exactly three formulas")),
        },
        RuleId::VeeIntro => either_order(prem[0], prem[1], vee_instance),
    }
}

/// First position where `found` departs from `expected`.
fn compare(expected: &[Prop], found: &[Prop]) -> Option<Mismatch> {
    let k = common_prefix(expected, found);
    if k == expected.len() && k == found.len() {
        return None;
    }
    let message = match (expected.get(k), found.get(k)) {
        (Some(e), Some(f)) => format!("expected `{e}`, found `{f}`"),
        (Some(e), None) => format!("conclusion ends early; expected `{e}`"),
        (None, Some(f)) => format!("unexpected extra formula `{f}`"),
        (None, None) => unreachable!("handled above"),
    };
    Some(Mismatch {
        position: Some(k + 1),
        message,
    })
}

fn check_restricted(s: &Sequent) -> Result<(), String> {
    if !s.rhs.is_empty() {
        return Err(format!("`{s}` has a nonempty right side"));
    }
    match s.lhs.iter().find(|p| !p.is_restricted()) {
        Some(p) => Err(format!("`{p}` negates a compound proposition")),
        None => Ok(()),
    }
}

/// Checks one step against the steps before it (`earlier[i]` has index
/// `i + 1`).
pub fn check_step(step: &ProofStep, earlier: &[ProofStep]) -> Result<(), Violation> {
    let (rule, premises, given) = match &step.justification {
        Justification::Assume => (None, &[][..], None),
        Justification::Rule {
            rule,
            premises,
            bindings,
        } => (Some(*rule), premises.as_slice(), Some(bindings)),
    };
    let fail = |position: Option<usize>, message: String| Violation {
        step: Some(step.index),
        rule,
        position,
        message,
    };
    check_restricted(&step.conclusion).map_err(|m| fail(None, m))?;
    let (Some(rule), Some(given)) = (rule, given) else {
        return Ok(());
    };
    if premises.len() != rule.premise_count() {
        return Err(fail(
            None,
            format!("expects {} premise(s), got {}", rule.premise_count(), premises.len()),
        ));
    }
    let mut prem: Vec<&[Prop]> = Vec::new();
    for &p in premises {
        if p == 0 || p >= step.index {
            return Err(fail(None, format!("premise {p} is not an earlier step")));
        }
        let earlier_step = earlier
            .get(p - 1)
            .ok_or_else(|| fail(None, format!("premise {p} does not exist")))?;
        prem.push(&earlier_step.conclusion.lhs);
    }
    if let Some(p) = given.props().find(|p| !p.is_restricted()) {
        return Err(fail(None, format!("binding `{p}` negates a compound proposition")));
    }
    for meta in given.0.keys() {
        if !rule.metas().contains(meta) {
            return Err(fail(None, format!("the rule has no metavariable `{meta}`")));
        }
    }
    let candidates = instances(rule, &prem, &step.conclusion.lhs).map_err(|m| fail(m.position, m.message))?;
    let mut first_error = None;
    let mut binding_error = None;
    for inst in &candidates {
        if let Some(m) = compare(&inst.conclusion, &step.conclusion.lhs) {
            first_error.get_or_insert(m);
            continue;
        }
        let clash = given
            .0
            .iter()
            .find(|(meta, value)| inst.bindings.0.get(meta) != Some(value));
        match clash {
            None => return Ok(()),
            Some((meta, value)) => {
                binding_error.get_or_insert_with(|| {
                    format!(
                        "binding {meta}={value} disagrees with the inferred {meta}={}",
                        inst.bindings.0.get(meta).map(|b| b.to_string()).unwrap_or_default()
                    )
                });
            }
        }
    }
    if let Some(message) = binding_error {
        return Err(fail(None, message));
    }
    let m = first_error.unwrap_or_else(|| Mismatch::new("no instance of the rule applies"));
    Err(fail(m.position, m.message))
}

/// Checks every step in order and that the last one proves the goal.
pub fn check_script(script: &ProofScript) -> Result<(), Violation> {
    check_restricted(&script.goal).map_err(|m| Violation::script(format!("goal: {m}")))?;
    if script.steps.is_empty() {
        return Err(Violation::script("script has no steps"));
    }
    for (i, step) in script.steps.iter().enumerate() {
        if step.index != i + 1 {
            return Err(Violation {
                step: Some(step.index),
                rule: None,
                position: None,
                message: format!("expected step number {}", i + 1),
            });
        }
        check_step(step, &script.steps[..i])?;
    }
    let last = script.steps.last().expect("nonempty");
    if last.conclusion != script.goal {
        return Err(Violation::script(format!(
            "last step proves `{}`, not the goal `{}`",
            last.conclusion, script.goal
        )));
    }
    Ok(())
}

/// Incrementally assembles a script. A sequent already present is reused
/// instead of derived again.
#[derive(Debug, Default, Clone)]
pub struct ScriptBuilder {
    steps: Vec<ProofStep>,
    seen: HashMap<Vec<Prop>, usize>,
}

impl ScriptBuilder {
    pub fn new() -> Self {
        ScriptBuilder::default()
    }

    pub fn lhs(&self, index: usize) -> &[Prop] {
        &self.steps[index - 1].conclusion.lhs
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn push(&mut self, lhs: Vec<Prop>, justification: Justification) -> usize {
        if let Some(&i) = self.seen.get(&lhs) {
            return i;
        }
        let index = self.steps.len() + 1;
        self.seen.insert(lhs.clone(), index);
        self.steps.push(ProofStep {
            index,
            conclusion: Sequent::left(lhs),
            justification,
        });
        index
    }

    pub fn assume(&mut self, lhs: Vec<Prop>) -> usize {
        self.push(lhs, Justification::Assume)
    }

    /// Adds a rule step; `bindings` are recorded as given.
    pub fn rule(&mut self, rule: RuleId, premises: &[usize], lhs: Vec<Prop>, bindings: Bindings) -> usize {
        self.push(
            lhs,
            Justification::Rule {
                rule,
                premises: premises.to_vec(),
                bindings,
            },
        )
    }

    /// `σ, ¬σ` by R6.
    pub fn neg_atomic(&mut self, sigma: &Prop) -> usize {
        self.rule(
            RuleId::NegAtomic,
            &[],
            vec![sigma.clone(), Prop::not(sigma.clone())],
            Bindings::new().with(Meta::Sigma, sigma.clone()),
        )
    }

    /// `x, y, ¬y ∨ ¬x` by R9.
    pub fn neg_vee(&mut self, x: &Prop, y: &Prop) -> usize {
        let (alpha, beta) = (negate(x), negate(y));
        self.rule(
            RuleId::NegVee1,
            &[],
            vec![x.clone(), y.clone(), Prop::or(beta.clone(), alpha.clone())],
            Bindings::new().with(Meta::Alpha, alpha).with(Meta::Beta, beta),
        )
    }

    pub fn exchange(&mut self, from: usize) -> usize {
        let lhs = self.lhs(from);
        assert_eq!(lhs.len(), 2, "exchange needs two formulas");
        let swapped = vec![lhs[1].clone(), lhs[0].clone()];
        self.rule(RuleId::Exchange, &[from], swapped, Bindings::new())
    }

    /// Prepends `gamma` one formula at a time, last formula first.
    pub fn weaken_left(&mut self, from: usize, gamma: &[Prop]) -> usize {
        gamma.iter().rev().fold(from, |acc, alpha| {
            let lhs = concat(&[&[alpha.clone()], self.lhs(acc)]);
            self.rule(
                RuleId::LeftWeakening,
                &[acc],
                lhs,
                Bindings::new().with(Meta::Alpha, alpha.clone()),
            )
        })
    }

    /// Appends `delta` one formula at a time.
    pub fn weaken_right(&mut self, from: usize, delta: &[Prop]) -> usize {
        delta.iter().fold(from, |acc, alpha| {
            let lhs = concat(&[self.lhs(acc), &[alpha.clone()]]);
            self.rule(
                RuleId::RightWeakening,
                &[acc],
                lhs,
                Bindings::new().with(Meta::Alpha, alpha.clone()),
            )
        })
    }

    /// `α ∧ β, Δ` from `α, β, Δ`.
    pub fn left_and(&mut self, from: usize) -> usize {
        let p = self.lhs(from);
        let lhs = concat(&[&[Prop::and(p[0].clone(), p[1].clone())], &p[2..]]);
        self.rule(RuleId::LeftAnd, &[from], lhs, Bindings::new())
    }

    /// `Γ, β ∧ α` from `Γ, α, β`.
    pub fn right_and(&mut self, from: usize) -> usize {
        let p = self.lhs(from);
        let n = p.len();
        let lhs = concat(&[&p[..n - 2], &[Prop::and(p[n - 1].clone(), p[n - 2].clone())]]);
        self.rule(RuleId::RightAnd, &[from], lhs, Bindings::new())
    }

    /// Cut on the single position where the two premises differ.
    pub fn cut(&mut self, a: usize, b: usize) -> usize {
        let (p1, p2) = (self.lhs(a), self.lhs(b));
        let k = common_prefix(p1, p2);
        let lhs = concat(&[&p1[..k], &p1[k + 1..]]);
        self.rule(RuleId::Cut, &[a, b], lhs, Bindings::new())
    }

    /// Stuttering from `Γ, Δ` (`rest`) and `Γ, α` (`head`).
    pub fn stutter(&mut self, rest: usize, head: usize) -> usize {
        let (p1, p2) = (self.lhs(rest), self.lhs(head));
        let (alpha, gamma) = p2.split_last().expect("nonempty premise");
        let lhs = concat(&[gamma, &[negate(alpha)], &p1[gamma.len()..]]);
        self.rule(RuleId::Stuttering, &[rest, head], lhs, Bindings::new())
    }

    /// ∨-introduction from `Γ, α, Δ` and `Γ, ¬α, β, Δ`.
    pub fn vee_intro(&mut self, a: usize, b: usize) -> usize {
        let (p1, p2) = (self.lhs(a), self.lhs(b));
        let k = common_prefix(p1, p2);
        let lhs = concat(&[&p1[..k], &[Prop::or(p1[k].clone(), p2[k + 1].clone())], &p1[k + 1..]]);
        self.rule(RuleId::VeeIntro, &[a, b], lhs, Bindings::new())
    }

    /// The script ending at step `last`; later steps are dropped.
    pub fn finish(mut self, last: usize) -> ProofScript {
        self.steps.truncate(last);
        ProofScript {
            goal: self.steps[last - 1].conclusion.clone(),
            steps: self.steps,
        }
    }
}
