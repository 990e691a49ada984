//! The uniform interface over structures ⟨X, ⊥, 𝓕⟩ and the operations
//! defined from the orthogonality relation alone: complement, closure,
//! the Sasaki projection and its dual.
//!
//! Backends supply orthogonality, complement and the boolean set operations;
//! everything else is derived here. Projection is always computed as
//! `B̄ ∩ (B̄ ∩ A^⊥)^⊥` and never through one of the identities it satisfies.

use std::fmt::{self, Debug};
use std::hash::Hash;

/// A carrier with an orthogonality relation, seen through the subsets it can
/// represent.
///
/// `Flat` is the backend's subset type. Finite backends represent arbitrary
/// subsets, so operations accept non-closed arguments; the subspace backend
/// only represents subspaces, and its [`OSpace::union`] returns the span,
/// which has the same complement and closure as the set union.
pub trait OSpace {
    type Flat: Clone + Eq + Hash + Debug;
    type State: Clone + Debug;

    fn orthogonal(&self, x: &Self::State, y: &Self::State) -> bool;

    /// The subset `{x}`.
    fn singleton(&self, x: &Self::State) -> Self::Flat;

    fn contains(&self, a: &Self::Flat, x: &Self::State) -> bool;

    /// `A^⊥ = { b | b ⊥ a for all a ∈ A }`.
    fn complement(&self, a: &Self::Flat) -> Self::Flat;

    /// The whole carrier `X`.
    fn top(&self) -> Self::Flat;

    fn intersect(&self, a: &Self::Flat, b: &Self::Flat) -> Self::Flat;

    fn union(&self, a: &Self::Flat, b: &Self::Flat) -> Self::Flat;

    fn is_subset(&self, a: &Self::Flat, b: &Self::Flat) -> bool;

    /// The empty subset (the zero subspace for the subspace backend).
    fn empty(&self) -> Self::Flat;

    /// States whose union (span, for subspaces) is `a`.
    fn generators(&self, a: &Self::Flat) -> Vec<Self::State>;

    /// Whether every flat of the carrier belongs to 𝓕, so that membership
    /// needs no lookup in an explicit list.
    fn family_is_total(&self) -> bool {
        false
    }

    /// `Ā = A^⊥⊥`.
    fn closure(&self, a: &Self::Flat) -> Self::Flat {
        self.complement(&self.complement(a))
    }

    fn is_flat(&self, a: &Self::Flat) -> bool {
        self.closure(a) == *a
    }

    /// `Z = X^⊥`, the states orthogonal to every state.
    fn zero(&self) -> Self::Flat {
        self.complement(&self.top())
    }

    /// Sasaki projection of `a` onto `b`: `B̄ ∩ (B̄ ∩ A^⊥)^⊥`.
    fn project(&self, a: &Self::Flat, b: &Self::Flat) -> Self::Flat {
        let b_bar = self.closure(b);
        let inner = self.intersect(&b_bar, &self.complement(a));
        self.intersect(&b_bar, &self.complement(&inner))
    }

    /// `A ⊕ B = (B^⊥ ⊗ A^⊥)^⊥`.
    fn dual_sum(&self, a: &Self::Flat, b: &Self::Flat) -> Self::Flat {
        self.complement(&self.project(&self.complement(b), &self.complement(a)))
    }

    /// `closure(A ∪ B)`.
    fn join(&self, a: &Self::Flat, b: &Self::Flat) -> Self::Flat {
        self.closure(&self.union(a, b))
    }

    /// `⋃_{a ∈ A} {a} ⊗ B`.
    fn pointwise_projection(&self, a: &Self::Flat, b: &Self::Flat) -> Self::Flat {
        self.generators(a).iter().fold(self.empty(), |acc, x| {
            self.union(&acc, &self.project(&self.singleton(x), b))
        })
    }

    /// `A ⊥ B`: every element of `a` is orthogonal to every element of `b`.
    fn flats_orthogonal(&self, a: &Self::Flat, b: &Self::Flat) -> bool {
        self.is_subset(a, &self.complement(b))
    }

    /// `x ~ y` iff `{x}^⊥ = {y}^⊥`.
    fn equivalent_states(&self, x: &Self::State, y: &Self::State) -> bool {
        self.complement(&self.singleton(x)) == self.complement(&self.singleton(y))
    }
}

/// The five defining conditions of an O-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    S,
    Z,
    F,
    O,
    A,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::S, Axiom::Z, Axiom::F, Axiom::O, Axiom::A];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::S => "S (symmetry)",
            Axiom::Z => "Z (self-orthogonal states are zero)",
            Axiom::F => "F (flat family closure)",
            Axiom::O => "O (superposition of projections)",
            Axiom::A => "A (pointwise projection)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub witness: String,
}

/// Per-axiom outcome. Only the first failure of each axiom is kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self, axiom: Axiom) -> bool {
        self.failure(axiom).is_none()
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }

    fn record(&mut self, axiom: Axiom, witness: impl FnOnce() -> String) {
        if self.passed(axiom) {
            self.failures.push(AxiomFailure {
                axiom,
                witness: witness(),
            });
        }
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for axiom in Axiom::ALL {
            match self.failure(axiom) {
                None => writeln!(f, "{axiom}: pass")?,
                Some(fail) => writeln!(f, "{axiom}: FAIL ({})", fail.witness)?,
            }
        }
        Ok(())
    }
}

/// Checks S, Z, F, O and A quantifying over `states` and `family`.
///
/// Finite backends pass their whole carrier and family, which makes the
/// check exhaustive; the subspace backend passes a deterministic sample of
/// vectors and a finite list of subspaces.
pub fn check_axioms<S: OSpace>(space: &S, states: &[S::State], family: &[S::Flat]) -> AxiomReport {
    let mut report = AxiomReport::default();
    let in_family = |a: &S::Flat| {
        if space.family_is_total() {
            space.is_flat(a)
        } else {
            family.contains(a)
        }
    };

    for (i, x) in states.iter().enumerate() {
        for y in &states[i..] {
            if space.orthogonal(x, y) != space.orthogonal(y, x) {
                report.record(Axiom::S, || format!("{x:?} and {y:?} disagree on orthogonality"));
            }
        }
    }

    let zero = space.zero();
    for x in states {
        if space.orthogonal(x, x) && !space.contains(&zero, x) {
            report.record(Axiom::Z, || format!("{x:?} is self-orthogonal but not in Z"));
        }
    }

    for a in family {
        if !space.is_flat(a) {
            report.record(Axiom::F, || format!("{a:?} is not a flat"));
        }
    }
    if !in_family(&zero) {
        report.record(Axiom::F, || format!("Z = {zero:?} is missing from the family"));
    }
    for x in states {
        let closure = space.closure(&space.singleton(x));
        if !in_family(&closure) {
            report.record(Axiom::F, || {
                format!("closure of {{{x:?}}} = {closure:?} is missing from the family")
            });
        }
    }
    for a in family {
        let c = space.complement(a);
        if !in_family(&c) {
            report.record(Axiom::F, || {
                format!("complement of {a:?} = {c:?} is missing from the family")
            });
        }
        for b in family {
            let p = space.project(a, b);
            if !in_family(&p) {
                report.record(Axiom::F, || format!("{a:?} ⊗ {b:?} = {p:?} is missing from the family"));
            }
        }
    }

    for x in states {
        let sx = space.singleton(x);
        for a in family {
            let onto = space.project(&sx, a);
            let away = space.project(&sx, &space.complement(a));
            if !space.contains(&space.join(&onto, &away), x) {
                report.record(Axiom::O, || {
                    format!("x = {x:?} is not in the closure of its projections on A = {a:?} and A^⊥")
                });
            }
            if !space.is_subset(&onto, &space.join(&sx, &away)) {
                report.record(Axiom::O, || {
                    format!("{{x}} ⊗ A is not below closure({{x}} ∪ {{x}} ⊗ A^⊥) for x = {x:?}, A = {a:?}")
                });
            }
        }
    }

    for a in family {
        for b in family {
            let whole = space.project(a, b);
            let pointwise = space.pointwise_projection(a, b);
            if !space.is_subset(&whole, &pointwise) {
                report.record(Axiom::A, || format!("A ⊗ B ⊄ ⋃ {{a}} ⊗ B for A = {a:?}, B = {b:?}"));
            }
        }
    }

    report
}

/// The O-subspace induced by a member `C` of 𝓕: carrier `C`, the restricted
/// orthogonality, and flats `𝓕 ∩ 2^C`.
///
/// Complements are taken relative to `C`; all other operations are derived
/// from that complement, so the restriction is itself a full [`OSpace`].
#[derive(Debug, Clone)]
pub struct Restriction<'a, S: OSpace> {
    parent: &'a S,
    carrier: S::Flat,
}

impl<'a, S: OSpace> Restriction<'a, S> {
    /// Fails when `carrier` is not a member of `family` (or not a flat, for
    /// backends whose family is total).
    pub fn new(parent: &'a S, carrier: S::Flat, family: &[S::Flat]) -> crate::Result<Self> {
        let member = if parent.family_is_total() {
            parent.is_flat(&carrier)
        } else {
            family.contains(&carrier)
        };
        if !member {
            return Err(crate::Error::NotInFamily(format!("{carrier:?}")));
        }
        Ok(Restriction { parent, carrier })
    }

    pub fn carrier(&self) -> &S::Flat {
        &self.carrier
    }

    /// `𝓕 ∩ 2^C`.
    pub fn family(&self, family: &[S::Flat]) -> Vec<S::Flat> {
        family
            .iter()
            .filter(|a| self.parent.is_subset(a, &self.carrier))
            .cloned()
            .collect()
    }

    /// Parent states that lie in the carrier.
    pub fn states(&self, states: &[S::State]) -> Vec<S::State> {
        states
            .iter()
            .filter(|x| self.parent.contains(&self.carrier, x))
            .cloned()
            .collect()
    }
}

impl<'a, S: OSpace> OSpace for Restriction<'a, S> {
    type Flat = S::Flat;
    type State = S::State;

    fn orthogonal(&self, x: &S::State, y: &S::State) -> bool {
        self.parent.orthogonal(x, y)
    }

    fn singleton(&self, x: &S::State) -> S::Flat {
        self.parent.singleton(x)
    }

    fn contains(&self, a: &S::Flat, x: &S::State) -> bool {
        self.parent.contains(a, x)
    }

    fn complement(&self, a: &S::Flat) -> S::Flat {
        self.parent.intersect(&self.parent.complement(a), &self.carrier)
    }

    fn top(&self) -> S::Flat {
        self.carrier.clone()
    }

    fn intersect(&self, a: &S::Flat, b: &S::Flat) -> S::Flat {
        self.parent.intersect(a, b)
    }

    fn union(&self, a: &S::Flat, b: &S::Flat) -> S::Flat {
        self.parent.union(a, b)
    }

    fn is_subset(&self, a: &S::Flat, b: &S::Flat) -> bool {
        self.parent.is_subset(a, b)
    }

    fn empty(&self) -> S::Flat {
        self.parent.empty()
    }

    fn generators(&self, a: &S::Flat) -> Vec<S::State> {
        self.parent.generators(a)
    }

    fn family_is_total(&self) -> bool {
        self.parent.family_is_total()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{FiniteOSpace, StateSet};
    use crate::zoo::{classical_sets, powerset_space};

    fn set(size: usize, xs: &[usize]) -> StateSet {
        StateSet::from_elements(size, xs.iter().copied()).unwrap()
    }

    #[test]
    fn classical_projection_and_sum_are_boolean() {
        let s = classical_sets(3).unwrap();
        let subsets: Vec<StateSet> = (0..8usize)
            .map(|b| set(3, &(0..3).filter(|i| b >> i & 1 == 1).collect::<Vec<_>>()))
            .collect();
        for a in &subsets {
            for b in &subsets {
                assert_eq!(s.project(a, b), a.intersection(b));
                assert_eq!(s.dual_sum(a, b), a.union(b));
            }
        }
    }

    #[test]
    fn orthogonal_flats_project_to_zero() {
        let s = powerset_space(2).unwrap();
        let (a, b) = (set(4, &[0, 1]), set(4, &[0, 2]));
        assert!(s.flats_orthogonal(&a, &b));
        assert_eq!(s.project(&a, &b), s.zero());
        assert_eq!(s.dual_sum(&a, &b), s.dual_sum(&b, &a));
    }

    #[test]
    fn dual_sum_of_nested_flats() {
        let s = powerset_space(2).unwrap();
        for a in s.flats() {
            for b in s.flats().iter().filter(|b| a.is_subset(b)) {
                assert_eq!(s.dual_sum(a, b), s.closure(b));
            }
            assert_eq!(s.dual_sum(&s.zero(), a), s.closure(a));
        }
    }

    #[test]
    fn state_equivalence() {
        let c = classical_sets(3).unwrap();
        assert!(c.equivalent_states(&1, &1));
        assert!(!c.equivalent_states(&0, &1));
        let s = FiniteOSpace::from_pairs(3, &[(0, 0), (1, 1), (0, 1), (0, 2), (1, 2)], None).unwrap();
        assert_eq!(s.zero(), set(3, &[0, 1]));
        assert!(s.equivalent_states(&0, &1));
    }

    #[test]
    fn restriction_of_classical_three_is_classical_two() {
        let parent = classical_sets(3).unwrap();
        let two = classical_sets(2).unwrap();
        let c = set(3, &[0, 1]);
        let r = Restriction::new(&parent, c.clone(), parent.flats()).unwrap();
        let family = r.family(parent.flats());
        assert_eq!(family.len(), 4);
        let shrink = |s: &StateSet| set(2, &s.elements().collect::<Vec<_>>());
        let grow = |s: &StateSet| set(3, &s.elements().collect::<Vec<_>>());
        for a in two.flats() {
            assert_eq!(shrink(&r.complement(&grow(a))), two.complement(a));
            for b in two.flats() {
                assert_eq!(shrink(&r.project(&grow(a), &grow(b))), two.project(a, b));
                assert_eq!(shrink(&r.dual_sum(&grow(a), &grow(b))), two.dual_sum(a, b));
            }
        }
        assert!(check_axioms(&r, &r.states(&parent.states()), &family).all_passed());
        assert_eq!(r.zero(), parent.zero().intersection(&c));
    }

    #[test]
    fn restriction_to_the_carrier_keeps_the_space() {
        let parent = powerset_space(2).unwrap();
        let r = Restriction::new(&parent, parent.top(), parent.flats()).unwrap();
        assert_eq!(r.family(parent.flats()), parent.flats().to_vec());
        for a in parent.flats() {
            assert_eq!(r.complement(a), parent.complement(a));
        }
    }

    #[test]
    fn restriction_needs_a_member() {
        let parent = powerset_space(2).unwrap();
        let not_flat = set(4, &[1, 2]);
        assert!(matches!(
            Restriction::new(&parent, not_flat, parent.flats()),
            Err(crate::Error::NotInFamily(_))
        ));
    }

    #[test]
    fn report_lists_every_axiom() {
        let text = classical_sets(1).unwrap().check_axioms().to_string();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().all(|l| l.ends_with("pass")));
    }
}
