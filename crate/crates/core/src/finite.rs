//! Finite carriers `{0, …, n−1}` with an explicit orthogonality matrix and
//! an explicit flat family.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ospace::{self, AxiomReport, OSpace};

/// Index of a state in a finite carrier.
pub type StateId = usize;

/// A subset of a finite carrier, stored as a bitset sized to the carrier.
///
/// The bitset is canonical: two sets over the same carrier are equal iff
/// they have the same elements. [`StateSet::elements`] yields them in
/// ascending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    words: Vec<u64>,
}

/// A member of the flat family. Same representation as an arbitrary subset;
/// the name documents intent.
pub type FiniteFlat = StateSet;

impl StateSet {
    pub fn empty(size: usize) -> Self {
        StateSet {
            words: vec![0; size.div_ceil(64)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut s = StateSet::empty(size);
        for i in 0..size {
            s.insert(i);
        }
        s
    }

    /// Builds a set from elements, rejecting indices outside the carrier.
    pub fn from_elements(size: usize, elements: impl IntoIterator<Item = StateId>) -> Result<Self> {
        let mut s = StateSet::empty(size);
        for e in elements {
            if e >= size {
                return Err(Error::StateOutOfRange { state: e, size });
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn singleton(size: usize, x: StateId) -> Self {
        let mut s = StateSet::empty(size);
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: StateId) {
        self.words[x / 64] |= 1 << (x % 64);
    }

    pub fn remove(&mut self, x: StateId) {
        self.words[x / 64] &= !(1 << (x % 64));
    }

    pub fn contains(&self, x: StateId) -> bool {
        self.words.get(x / 64).is_some_and(|w| w & (1 << (x % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn elements(&self) -> impl Iterator<Item = StateId> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| i * 64 + b))
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Same elements, over a carrier of `size` states.
    fn resized(&self, size: usize) -> StateSet {
        let mut s = StateSet::empty(size);
        for e in self.elements().filter(|&e| e < size) {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Flat literal syntax: `{0, 2, 3}`.
impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// A finite structure ⟨X, ⊥, 𝓕⟩.
///
/// Construction through [`FiniteOSpace::new`] enforces symmetry of `⊥`; the
/// remaining axioms are reported by [`FiniteOSpace::check_axioms`].
/// [`FiniteOSpace::new_unchecked`] accepts any relation so that defective
/// inputs can still be loaded and diagnosed.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteOSpace {
    size: usize,
    /// `rows[x]` is the set of `y` with `x ⊥ y`.
    rows: Vec<StateSet>,
    flats: Vec<FiniteFlat>,
}

impl fmt::Debug for FiniteOSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteOSpace")
            .field("size", &self.size)
            .field("flats", &self.flats.len())
            .finish()
    }
}

/// Default cap on the number of flats produced by [`generate_flat_family`].
pub const DEFAULT_FAMILY_CAP: usize = 4096;

impl FiniteOSpace {
    /// Builds a space from orthogonal pairs. Each pair is made symmetric.
    /// When `flats` is `None` the family is generated with no seeds.
    pub fn from_pairs(size: usize, pairs: &[(StateId, StateId)], flats: Option<Vec<FiniteFlat>>) -> Result<Self> {
        let mut rows = relation(size)?;
        for &(x, y) in pairs {
            check_state(x, size)?;
            check_state(y, size)?;
            rows[x].insert(y);
            rows[y].insert(x);
        }
        Self::assemble(size, rows, flats)
    }

    /// Builds a space from a full orthogonality matrix, rejecting asymmetry.
    pub fn new(orth: &[Vec<bool>], flats: Option<Vec<FiniteFlat>>) -> Result<Self> {
        for (x, row) in orth.iter().enumerate() {
            for (y, &o) in row.iter().enumerate() {
                if o && !orth.get(y).and_then(|r| r.get(x)).copied().unwrap_or(false) {
                    return Err(Error::Asymmetric { x, y });
                }
            }
        }
        Self::new_unchecked(orth, flats)
    }

    /// Like [`FiniteOSpace::new`] but keeps an asymmetric relation as given.
    pub fn new_unchecked(orth: &[Vec<bool>], flats: Option<Vec<FiniteFlat>>) -> Result<Self> {
        let size = orth.len();
        let mut rows = relation(size)?;
        for (x, row) in orth.iter().enumerate() {
            for (y, &o) in row.iter().enumerate() {
                check_state(y, size)?;
                if o {
                    rows[x].insert(y);
                }
            }
        }
        Self::assemble(size, rows, flats)
    }

    fn assemble(size: usize, rows: Vec<StateSet>, flats: Option<Vec<FiniteFlat>>) -> Result<Self> {
        let mut space = FiniteOSpace {
            size,
            rows,
            flats: Vec::new(),
        };
        space.flats = match flats {
            Some(list) => {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for f in list {
                    if let Some(state) = f.elements().find(|&x| x >= size) {
                        return Err(Error::StateOutOfRange { state, size });
                    }
                    let f = f.resized(size);
                    if seen.insert(f.clone()) {
                        out.push(f);
                    }
                }
                out
            }
            None => generate_flat_family(&space, &[], &space.states(), DEFAULT_FAMILY_CAP)?,
        };
        Ok(space)
    }

    /// The same carrier and relation with a different family.
    pub fn with_flats(&self, flats: Vec<FiniteFlat>) -> Result<Self> {
        Self::assemble(self.size, self.rows.clone(), Some(flats))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn flats(&self) -> &[FiniteFlat] {
        &self.flats
    }

    pub fn states(&self) -> Vec<StateId> {
        (0..self.size).collect()
    }

    pub fn set(&self, elements: impl IntoIterator<Item = StateId>) -> Result<StateSet> {
        StateSet::from_elements(self.size, elements)
    }

    pub fn is_orthogonal(&self, x: StateId, y: StateId) -> bool {
        self.rows[x].contains(y)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|x| self.rows[x].elements().all(|y| self.rows[y].contains(x)))
    }

    /// Exhaustive check over every state and every member of the family.
    pub fn check_axioms(&self) -> AxiomReport {
        ospace::check_axioms(self, &self.states(), &self.flats)
    }

    /// [`generate_flat_family`] over this carrier.
    pub fn generate_family(&self, seeds: &[StateSet], cap: usize) -> Result<Vec<FiniteFlat>> {
        generate_flat_family(self, seeds, &self.states(), cap)
    }

    /// Disjoint sum: `other` is re-indexed after this carrier, cross pairs
    /// are orthogonal, and the family is `{A ∪ B | A ∈ 𝓕₀, B ∈ 𝓕₁}`.
    pub fn sum(&self, other: &FiniteOSpace) -> FiniteOSpace {
        let size = self.size + other.size;
        let shift = |s: &StateSet| {
            let mut out = StateSet::empty(size);
            for e in s.elements() {
                out.insert(e + self.size);
            }
            out
        };
        let left_all = StateSet::full(self.size).resized(size);
        let right_all = shift(&StateSet::full(other.size));
        let mut rows = Vec::with_capacity(size);
        for r in &self.rows {
            rows.push(r.resized(size).union(&right_all));
        }
        for r in &other.rows {
            rows.push(shift(r).union(&left_all));
        }
        let mut flats = Vec::with_capacity(self.flats.len() * other.flats.len());
        for a in &self.flats {
            let a = a.resized(size);
            for b in &other.flats {
                flats.push(a.union(&shift(b)));
            }
        }
        FiniteOSpace { size, rows, flats }
    }

    /// Orthogonal pairs `(x, y)` with `x ≤ y` that hold in both directions,
    /// followed by one-directional pairs.
    pub fn pairs(&self) -> (Vec<(StateId, StateId)>, Vec<(StateId, StateId)>) {
        let mut both = Vec::new();
        let mut one_way = Vec::new();
        for x in 0..self.size {
            for y in self.rows[x].elements() {
                if self.rows[y].contains(x) {
                    if x <= y {
                        both.push((x, y));
                    }
                } else {
                    one_way.push((x, y));
                }
            }
        }
        (both, one_way)
    }
}

fn relation(size: usize) -> Result<Vec<StateSet>> {
    if size == 0 {
        return Err(Error::EmptyCarrier);
    }
    Ok(vec![StateSet::empty(size); size])
}

fn check_state(x: StateId, size: usize) -> Result<()> {
    if x >= size {
        Err(Error::StateOutOfRange { state: x, size })
    } else {
        Ok(())
    }
}

impl OSpace for FiniteOSpace {
    type Flat = StateSet;
    type State = StateId;

    fn orthogonal(&self, x: &StateId, y: &StateId) -> bool {
        self.rows[*x].contains(*y)
    }

    fn singleton(&self, x: &StateId) -> StateSet {
        StateSet::singleton(self.size, *x)
    }

    fn contains(&self, a: &StateSet, x: &StateId) -> bool {
        a.contains(*x)
    }

    fn complement(&self, a: &StateSet) -> StateSet {
        let mut out = StateSet::empty(self.size);
        for (b, row) in self.rows.iter().enumerate() {
            if a.is_subset(row) {
                out.insert(b);
            }
        }
        out
    }

    fn top(&self) -> StateSet {
        StateSet::full(self.size)
    }

    fn intersect(&self, a: &StateSet, b: &StateSet) -> StateSet {
        a.intersection(b)
    }

    fn union(&self, a: &StateSet, b: &StateSet) -> StateSet {
        a.union(b)
    }

    fn is_subset(&self, a: &StateSet, b: &StateSet) -> bool {
        a.is_subset(b)
    }

    fn empty(&self) -> StateSet {
        StateSet::empty(self.size)
    }

    fn generators(&self, a: &StateSet) -> Vec<StateId> {
        a.elements().collect()
    }
}

/// Least family containing the closures of `seeds`, `Z` and every singleton
/// closure, closed under complement and projection.
///
/// Order is deterministic: seeds, then `Z`, then singleton closures by
/// state index, then complements and products in discovery order. Fails with
/// [`Error::CapExceeded`] as soon as the family would exceed `cap` members.
pub fn generate_flat_family<S: OSpace>(
    space: &S,
    seeds: &[S::Flat],
    states: &[S::State],
    cap: usize,
) -> Result<Vec<S::Flat>> {
    let mut family: Vec<S::Flat> = Vec::new();
    let mut seen: HashSet<S::Flat> = HashSet::new();
    let mut push = |f: S::Flat, family: &mut Vec<S::Flat>| -> Result<()> {
        if seen.insert(f.clone()) {
            if family.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "flat family",
                    needed: family.len() as u128 + 1,
                    cap: cap as u128,
                });
            }
            family.push(f);
        }
        Ok(())
    };

    for s in seeds {
        push(space.closure(s), &mut family)?;
    }
    push(space.zero(), &mut family)?;
    for x in states {
        push(space.closure(&space.singleton(x)), &mut family)?;
    }

    let mut next = 0;
    while next < family.len() {
        let a = family[next].clone();
        push(space.complement(&a), &mut family)?;
        for j in 0..=next {
            let b = family[j].clone();
            push(space.project(&a, &b), &mut family)?;
            push(space.project(&b, &a), &mut family)?;
        }
        next += 1;
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{classical_sets, powerset_space};

    fn set(size: usize, xs: &[StateId]) -> StateSet {
        StateSet::from_elements(size, xs.iter().copied()).unwrap()
    }

    /// `{y | y ∩ x = ∅ for all x ∈ a}` by brute force over bitmask states.
    fn disjoint_oracle(size: usize, a: &[usize]) -> StateSet {
        set(
            size,
            &(0..size).filter(|y| a.iter().all(|x| x & y == 0)).collect::<Vec<_>>(),
        )
    }

    #[test]
    fn classical_complement_is_set_difference() {
        let s = classical_sets(3).unwrap();
        assert_eq!(s.complement(&set(3, &[0])), set(3, &[1, 2]));
        assert_eq!(s.complement(&s.empty()), s.top());
        for bits in 0..8usize {
            let a: Vec<_> = (0..3).filter(|i| bits >> i & 1 == 1).collect();
            assert_eq!(s.closure(&set(3, &a)), set(3, &a));
        }
    }

    #[test]
    fn powerset_complement_and_closure_match_brute_force() {
        let s = powerset_space(2).unwrap();
        // States are bitmasks over Y = {0, 1}: {0} is 1, {1} is 2.
        assert_eq!(s.complement(&set(4, &[1])), disjoint_oracle(4, &[1]));
        assert_eq!(s.complement(&set(4, &[1])), set(4, &[0, 2]));
        assert_eq!(s.closure(&set(4, &[1, 2])), set(4, &[0, 1, 2, 3]));
        for bits in 0..16usize {
            let a: Vec<_> = (0..4).filter(|i| bits >> i & 1 == 1).collect();
            assert_eq!(s.complement(&set(4, &a)), disjoint_oracle(4, &a));
        }
    }

    #[test]
    fn zero_sets() {
        assert!(classical_sets(3).unwrap().zero().is_empty());
        assert_eq!(powerset_space(2).unwrap().zero(), set(4, &[0]));
        let u = classical_sets(3).unwrap().sum(&powerset_space(2).unwrap());
        assert_eq!(u.zero(), set(7, &[3]));
    }

    #[test]
    fn generated_families() {
        for n in 1..=4 {
            let s = classical_sets(n).unwrap();
            let family = s.generate_family(&[], DEFAULT_FAMILY_CAP).unwrap();
            let all: HashSet<_> = (0..1usize << n)
                .map(|bits| set(n, &(0..n).filter(|i| bits >> i & 1 == 1).collect::<Vec<_>>()))
                .collect();
            assert_eq!(family.into_iter().collect::<HashSet<_>>(), all);
        }
        let p = powerset_space(2).unwrap();
        let generated: HashSet<_> = p
            .generate_family(&[], DEFAULT_FAMILY_CAP)
            .unwrap()
            .into_iter()
            .collect();
        let expected: HashSet<_> = p.flats().iter().cloned().collect();
        assert_eq!(generated, expected);
        assert!(matches!(
            classical_sets(2).unwrap().generate_family(&[], 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            FiniteOSpace::from_pairs(0, &[], None),
            Err(Error::EmptyCarrier)
        ));
        assert!(matches!(
            FiniteOSpace::from_pairs(2, &[(0, 2)], None),
            Err(Error::StateOutOfRange { state: 2, size: 2 })
        ));
        let asym = vec![vec![false, true], vec![false, false]];
        assert!(matches!(
            FiniteOSpace::new(&asym, None),
            Err(Error::Asymmetric { x: 0, y: 1 })
        ));
        let kept = FiniteOSpace::new_unchecked(&asym, None).unwrap();
        assert!(!kept.is_symmetric());
    }

    #[test]
    fn missing_singleton_closure_fails_f() {
        let no_orth = vec![vec![false; 2]; 2];
        // Without orthogonality every closure is the whole carrier.
        let s = FiniteOSpace::new(&no_orth, Some(vec![StateSet::empty(2)])).unwrap();
        let report = s.check_axioms();
        assert!(!report.passed(crate::Axiom::F));
        assert!(report.passed(crate::Axiom::S));
    }

    #[test]
    fn one_point_self_orthogonal_space_is_legal() {
        let s = FiniteOSpace::from_pairs(1, &[(0, 0)], None).unwrap();
        assert_eq!(s.zero(), s.top());
        assert!(s.check_axioms().all_passed());
    }

    #[test]
    fn state_set_display_and_order() {
        let a = set(70, &[65, 3, 0]);
        assert_eq!(a.to_string(), "{0, 3, 65}");
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![0, 3, 65]);
        assert!(StateSet::from_elements(3, [3]).is_err());
    }
}
