//! Derived rules as macros over the ten primitive rules.
//!
//! Each expansion yields a script whose hypotheses (the derived rule's
//! premises) appear as `Assume` steps and whose last step is the derived
//! conclusion. `¬` below is [`negate`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::kernel::{Binding, Bindings, Meta, ProofScript, ScriptBuilder};
use crate::syntax::{negate, Prop};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivedRule {
    /// `α, ¬α ⊢` for any α.
    LogicalAxiom,
    /// `Γ, α, Δ ⊢` gives `Γ, α, α, Δ ⊢`.
    Repetition,
    /// `Γ, α, α, Δ ⊢` gives `Γ, α, Δ ⊢`.
    Contraction,
    /// `α ∧ β, Δ ⊢` gives `α, β, Δ ⊢`.
    AndLeftElim,
    /// `α, β, γ ⊢` gives `γ, β, α ⊢`.
    Circ,
    /// `Γ, α ∧ β ⊢` gives `Γ, β, α ⊢`.
    AndRightElim,
    /// `α ∨ β, Δ ⊢` gives `α, Δ ⊢`.
    VeeLeftElim,
    /// `Γ, α ∨ β ⊢` gives `Γ, α ⊢`.
    VeeRightElim,
}

impl DerivedRule {
    pub const ALL: [DerivedRule; 8] = [
        DerivedRule::LogicalAxiom,
        DerivedRule::Repetition,
        DerivedRule::Contraction,
        DerivedRule::AndLeftElim,
        DerivedRule::Circ,
        DerivedRule::AndRightElim,
        DerivedRule::VeeLeftElim,
        DerivedRule::VeeRightElim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DerivedRule::LogicalAxiom => "LogicalAxiom",
            DerivedRule::Repetition => "Repetition",
            DerivedRule::Contraction => "Contraction",
            DerivedRule::AndLeftElim => "AndLeftElim",
            DerivedRule::Circ => "Circ",
            DerivedRule::AndRightElim => "AndRightElim",
            DerivedRule::VeeLeftElim => "VeeLeftElim",
            DerivedRule::VeeRightElim => "VeeRightElim",
        }
    }

    /// Metavariables the rule needs. List variables default to empty.
    pub fn metas(self) -> &'static [Meta] {
        use Meta::*;
        match self {
            DerivedRule::LogicalAxiom => &[Alpha],
            DerivedRule::Repetition | DerivedRule::Contraction => &[Gamma, Alpha, Delta],
            DerivedRule::AndLeftElim | DerivedRule::VeeLeftElim => &[Alpha, Beta, Delta],
            DerivedRule::Circ => &[Alpha, Beta, LowerGamma],
            DerivedRule::AndRightElim | DerivedRule::VeeRightElim => &[Gamma, Alpha, Beta],
        }
    }
}

impl fmt::Display for DerivedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DerivedRule {
    type Err = ParseError;

    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        DerivedRule::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(text.trim()))
            .ok_or_else(|| ParseError::new(format!("unknown derived rule `{}`", text.trim())))
    }
}

/// `α, ¬α`, by cases on the shape of α.
pub fn logical_axiom(b: &mut ScriptBuilder, alpha: &Prop) -> usize {
    match alpha {
        Prop::Atom(_) => b.neg_atomic(alpha),
        Prop::Neg(sigma) => {
            let base = b.neg_atomic(sigma);
            b.exchange(base)
        }
        Prop::And(beta, gamma) => {
            let ax = b.neg_vee(beta, gamma);
            b.left_and(ax)
        }
        Prop::Or(beta, gamma) => {
            let ax = b.neg_vee(&negate(gamma), &negate(beta));
            let joined = b.left_and(ax);
            b.exchange(joined)
        }
    }
}

/// `Γ, α, α, Δ` from step `premise` proving `Γ, α, Δ`.
pub fn repetition(b: &mut ScriptBuilder, premise: usize, gamma: &[Prop], alpha: &Prop) -> usize {
    let ax = logical_axiom(b, alpha);
    let head = b.weaken_left(ax, gamma);
    b.stutter(premise, head)
}

/// `Γ, α, Δ` from step `premise` proving `Γ, α, α, Δ`.
pub fn contraction(b: &mut ScriptBuilder, premise: usize, gamma: &[Prop], alpha: &Prop, delta: &[Prop]) -> usize {
    let ax = logical_axiom(b, alpha);
    let left = b.weaken_left(ax, gamma);
    let full = b.weaken_right(left, delta);
    b.cut(premise, full)
}

/// `α, β, Δ` from step `premise` proving `α ∧ β, Δ`.
pub fn and_left_elim(b: &mut ScriptBuilder, premise: usize, alpha: &Prop, beta: &Prop, delta: &[Prop]) -> usize {
    let widened = b.weaken_left(premise, &[alpha.clone(), beta.clone()]);
    let ax = b.neg_vee(alpha, beta);
    let other = b.weaken_right(ax, delta);
    b.cut(widened, other)
}

/// `γ, β, α` from step `premise` proving `α, β, γ`.
pub fn circ(b: &mut ScriptBuilder, premise: usize) -> usize {
    let p = b.lhs(premise).to_vec();
    let [alpha, beta, gamma] = p.as_slice() else {
        panic!("Circ needs three formulas");
    };
    let joined = b.right_and(premise);
    let swapped = b.exchange(joined);
    and_left_elim(b, swapped, gamma, beta, std::slice::from_ref(alpha))
}

/// `Γ, β, α` from step `premise` proving `Γ, α ∧ β`.
pub fn and_right_elim(b: &mut ScriptBuilder, premise: usize, gamma: &[Prop], alpha: &Prop, beta: &Prop) -> usize {
    let ax = b.neg_vee(alpha, beta);
    let rotated = circ(b, ax);
    let other = b.weaken_left(rotated, gamma);
    let widened = b.weaken_right(premise, &[beta.clone(), alpha.clone()]);
    b.cut(widened, other)
}

/// `α, Δ` from step `premise` proving `α ∨ β, Δ`.
pub fn vee_left_elim(b: &mut ScriptBuilder, premise: usize, alpha: &Prop, beta: &Prop, delta: &[Prop]) -> usize {
    let ax = logical_axiom(b, alpha);
    let with_beta = b.weaken_right(ax, &[negate(beta)]);
    let joined = b.right_and(with_beta);
    let other = b.weaken_right(joined, delta);
    let widened = b.weaken_left(premise, std::slice::from_ref(alpha));
    b.cut(widened, other)
}

/// `Γ, α` from step `premise` proving `Γ, α ∨ β`.
pub fn vee_right_elim(b: &mut ScriptBuilder, premise: usize, gamma: &[Prop], alpha: &Prop, beta: &Prop) -> usize {
    let ax = logical_axiom(b, alpha);
    let swapped = b.exchange(ax);
    let with_beta = b.weaken_left(swapped, &[negate(beta)]);
    let joined = b.left_and(with_beta);
    let other = b.weaken_left(joined, gamma);
    let widened = b.weaken_right(premise, std::slice::from_ref(alpha));
    b.cut(widened, other)
}

fn concat(parts: &[&[Prop]]) -> Vec<Prop> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn restricted(p: &Prop) -> Result<()> {
    if p.is_restricted() {
        Ok(())
    } else {
        Err(Error::NotRestricted(p.to_string()))
    }
}

fn fetch_one(bindings: &Bindings, rule: DerivedRule, meta: Meta) -> Result<Prop> {
    match bindings.0.get(&meta) {
        Some(Binding::One(p)) => {
            restricted(p)?;
            Ok(p.clone())
        }
        Some(Binding::List(_)) => Err(Error::InvalidBindings(format!("{meta} must be a single proposition"))),
        None => Err(Error::InvalidBindings(format!("{rule} needs a binding for {meta}"))),
    }
}

fn fetch_list(bindings: &Bindings, meta: Meta) -> Result<Vec<Prop>> {
    match bindings.0.get(&meta) {
        Some(Binding::List(ps)) => {
            ps.iter().try_for_each(restricted)?;
            Ok(ps.clone())
        }
        Some(Binding::One(p)) => {
            restricted(p)?;
            Ok(vec![p.clone()])
        }
        None => Ok(Vec::new()),
    }
}

/// Expands a derived rule instance into primitive steps. The rule's premise
/// becomes the first `Assume` step.
pub fn expand_derived(rule: DerivedRule, bindings: &Bindings) -> Result<ProofScript> {
    if let Some(meta) = bindings.0.keys().find(|m| !rule.metas().contains(m)) {
        return Err(Error::InvalidBindings(format!("{rule} has no metavariable {meta}")));
    }
    let one = |m| fetch_one(bindings, rule, m);
    let list = |m| fetch_list(bindings, m);
    let mut b = ScriptBuilder::new();
    let last = match rule {
        DerivedRule::LogicalAxiom => logical_axiom(&mut b, &one(Meta::Alpha)?),
        DerivedRule::Repetition => {
            let (gamma, alpha, delta) = (list(Meta::Gamma)?, one(Meta::Alpha)?, list(Meta::Delta)?);
            let p = b.assume(concat(&[&gamma, &[alpha.clone()], &delta]));
            repetition(&mut b, p, &gamma, &alpha)
        }
        DerivedRule::Contraction => {
            let (gamma, alpha, delta) = (list(Meta::Gamma)?, one(Meta::Alpha)?, list(Meta::Delta)?);
            let p = b.assume(concat(&[&gamma, &[alpha.clone(), alpha.clone()], &delta]));
            contraction(&mut b, p, &gamma, &alpha, &delta)
        }
        DerivedRule::AndLeftElim => {
            let (alpha, beta, delta) = (one(Meta::Alpha)?, one(Meta::Beta)?, list(Meta::Delta)?);
            let p = b.assume(concat(&[&[Prop::and(alpha.clone(), beta.clone())], &delta]));
            and_left_elim(&mut b, p, &alpha, &beta, &delta)
        }
        DerivedRule::Circ => {
            let p = b.assume(vec![one(Meta::Alpha)?, one(Meta::Beta)?, one(Meta::LowerGamma)?]);
            circ(&mut b, p)
        }
        DerivedRule::AndRightElim => {
            let (gamma, alpha, beta) = (list(Meta::Gamma)?, one(Meta::Alpha)?, one(Meta::Beta)?);
            let p = b.assume(concat(&[&gamma, &[Prop::and(alpha.clone(), beta.clone())]]));
            and_right_elim(&mut b, p, &gamma, &alpha, &beta)
        }
        DerivedRule::VeeLeftElim => {
            let (alpha, beta, delta) = (one(Meta::Alpha)?, one(Meta::Beta)?, list(Meta::Delta)?);
            let p = b.assume(concat(&[&[Prop::or(alpha.clone(), beta.clone())], &delta]));
            vee_left_elim(&mut b, p, &alpha, &beta, &delta)
        }
        DerivedRule::VeeRightElim => {
            let (gamma, alpha, beta) = (list(Meta::Gamma)?, one(Meta::Alpha)?, one(Meta::Beta)?);
            let p = b.assume(concat(&[&gamma, &[Prop::or(alpha.clone(), beta.clone())]]));
            vee_right_elim(&mut b, p, &gamma, &alpha, &beta)
        }
    };
    Ok(b.finish(last))
}

/// From `α, ¬β ⊢` and `β, ¬γ ⊢` derive `α, ¬γ ⊢`: implication is transitive.
pub fn transitivity(alpha: &Prop, beta: &Prop, gamma: &Prop) -> Result<ProofScript> {
    for p in [alpha, beta, gamma] {
        restricted(p)?;
    }
    let mut b = ScriptBuilder::new();
    let ab = b.assume(vec![alpha.clone(), negate(beta)]);
    let bc = b.assume(vec![beta.clone(), negate(gamma)]);
    let ab = b.exchange(ab);
    let bc = b.exchange(bc);
    let left = b.weaken_left(ab, &[negate(gamma)]);
    let right = b.weaken_right(bc, std::slice::from_ref(alpha));
    let cut = b.cut(right, left);
    let last = b.exchange(cut);
    Ok(b.finish(last))
}

/// From `α, β ⊢` derive `α ∨ β, ¬(β ∨ α) ⊢`.
fn or_commutes_one_way(b: &mut ScriptBuilder, orth: usize, alpha: &Prop, beta: &Prop) -> usize {
    let ax_a = logical_axiom(b, alpha);
    let first = b.stutter(ax_a, orth);
    let ax_b = logical_axiom(b, beta);
    let widened = b.weaken_left(ax_b, &[negate(alpha)]);
    let second = b.weaken_right(widened, &[negate(alpha)]);
    let intro = b.vee_intro(first, second);
    b.right_and(intro)
}

/// Given `α, β ⊢`, the two scripts establishing `α ∨ β → β ∨ α` and
/// `β ∨ α → α ∨ β`: disjunction of orthogonal propositions commutes.
pub fn orthogonal_or_commutes(alpha: &Prop, beta: &Prop) -> Result<(ProofScript, ProofScript)> {
    restricted(alpha)?;
    restricted(beta)?;
    let mut b = ScriptBuilder::new();
    let orth = b.assume(vec![alpha.clone(), beta.clone()]);
    let forward = or_commutes_one_way(&mut b, orth, alpha, beta);
    let forward = b.finish(forward);

    let mut b = ScriptBuilder::new();
    let orth = b.assume(vec![alpha.clone(), beta.clone()]);
    let flipped = b.exchange(orth);
    let backward = or_commutes_one_way(&mut b, flipped, beta, alpha);
    Ok((forward, b.finish(backward)))
}
