//! Backward proof search in the ten-rule calculus, and `decide`, which
//! alternates search with countermodel enumeration.
//!
//! Search is iterative deepening on derivation height. At each node the
//! axioms are tried first (R6, R9, and the logical axiom `α, ¬α` expanded
//! into primitive steps), then R7, R8, R10, R2, R5, R3, R4 backwards, and
//! finally R1 with cut formulas from the configured pool. Failed
//! `(sequent, height)` pairs are memoized; sequents are compared exactly,
//! order included.
//!
//! Subgoals that fail in a small finite O-space are discarded without being
//! explored: by soundness they have no derivation.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::derived::logical_axiom;
use crate::error::{Error, ParseError, Result};
use crate::finite::{FiniteOSpace, StateSet};
use crate::kernel::{check_script, Bindings, Meta, ProofScript, RuleId, ScriptBuilder};
use crate::ospace::OSpace;
use crate::semantics::{default_models, find_countermodel, Model, ModelWitness, DEFAULT_ASSIGNMENT_CAP};
use crate::syntax::{negate, normalize_sequent, to_nnf, Prop, Sequent};
use crate::zoo::{classical_sets, mo_space};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutPool {
    None,
    /// Subformulas of the goal and their negations.
    Subformulas,
}

impl FromStr for CutPool {
    type Err = ParseError;

    fn from_str(text: &str) -> std::result::Result<Self, ParseError> {
        match text {
            "none" => Ok(CutPool::None),
            "subformulas" => Ok(CutPool::Subformulas),
            other => Err(ParseError::new(format!(
                "unknown cut pool `{other}` (expected `none` or `subformulas`)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Largest derivation height tried.
    pub max_depth: usize,
    pub cut_pool: CutPool,
    /// Search nodes expanded before giving up.
    pub node_budget: u64,
    /// Discard subgoals with a countermodel in a small finite space.
    pub semantic_pruning: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 8,
            cut_pool: CutPool::Subformulas,
            node_budget: 200_000,
            semantic_pruning: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// Deepest height bound fully explored.
    pub depth_completed: usize,
    pub budget_exhausted: bool,
    /// Subgoals discarded by semantic pruning.
    pub pruned: u64,
    /// Models the refuter skipped because of the assignment cap.
    pub models_skipped: Vec<String>,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} nodes, {} pruned, heights up to {} explored",
            self.nodes, self.pruned, self.depth_completed
        )?;
        if self.budget_exhausted {
            f.write_str(", node budget exhausted")?;
        }
        if !self.models_skipped.is_empty() {
            write!(f, ", models skipped: {}", self.models_skipped.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Proved(ProofScript),
    Refuted(ModelWitness),
    Exhausted(SearchStats),
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchOutcome::Refuted(_))
    }

    pub fn script(&self) -> Option<&ProofScript> {
        match self {
            SearchOutcome::Proved(s) => Some(s),
            _ => None,
        }
    }
}

/// How a node was closed. Conclusions live in [`Node::seq`].
enum How {
    NegAtomic,
    NegVee,
    LogicalAxiom,
    Unary(RuleId, Rc<Node>),
    Binary(RuleId, Rc<Node>, Rc<Node>),
}

struct Node {
    seq: Vec<Prop>,
    how: How,
    height: usize,
}

fn logical_axiom_height(alpha: &Prop) -> usize {
    match alpha {
        Prop::Atom(_) => 1,
        Prop::Neg(_) | Prop::And(..) => 2,
        Prop::Or(..) => 3,
    }
}

/// A finite space whose family is closed under the connectives, with the
/// operations precomputed over family indices.
struct Table {
    complement: Vec<usize>,
    project: Vec<Vec<usize>>,
    dual: Vec<Vec<usize>>,
    subset: Vec<Vec<bool>>,
    top: usize,
    zero: usize,
}

impl Table {
    fn new(space: &FiniteOSpace) -> Table {
        let flats = space.flats();
        let index = |f: &StateSet| {
            flats
                .iter()
                .position(|g| g == f)
                .expect("pruning models have families closed under the connectives")
        };
        let n = flats.len();
        Table {
            complement: flats.iter().map(|a| index(&space.complement(a))).collect(),
            project: (0..n)
                .map(|a| (0..n).map(|b| index(&space.project(&flats[a], &flats[b]))).collect())
                .collect(),
            dual: (0..n)
                .map(|a| (0..n).map(|b| index(&space.dual_sum(&flats[a], &flats[b]))).collect())
                .collect(),
            subset: (0..n)
                .map(|a| (0..n).map(|b| flats[a].is_subset(&flats[b])).collect())
                .collect(),
            top: index(&space.top()),
            zero: index(&space.zero()),
        }
    }

    fn eval(&self, p: &Prop, atoms: &[&str], v: &[usize]) -> usize {
        match p {
            Prop::Atom(a) => v[atoms.iter().position(|x| x == &&**a).expect("collected")],
            Prop::Neg(q) => self.complement[self.eval(q, atoms, v)],
            Prop::And(l, r) => self.project[self.eval(l, atoms, v)][self.eval(r, atoms, v)],
            Prop::Or(l, r) => self.dual[self.eval(l, atoms, v)][self.eval(r, atoms, v)],
        }
    }

    /// Whether `lhs ⊢` holds under every assignment. `None` when there are
    /// more than `max_atoms` atoms.
    fn valid(&self, lhs: &[Prop], max_atoms: usize) -> Option<bool> {
        let mut names: Vec<&str> = Vec::new();
        for p in lhs {
            collect_atoms(p, &mut names);
        }
        if names.len() > max_atoms {
            return None;
        }
        let n = self.complement.len();
        let mut v = vec![0usize; names.len()];
        loop {
            let value = lhs
                .iter()
                .fold(self.top, |acc, p| self.project[acc][self.eval(p, &names, &v)]);
            if !self.subset[value][self.zero] {
                return Some(false);
            }
            let mut i = v.len();
            loop {
                if i == 0 {
                    return Some(true);
                }
                i -= 1;
                v[i] += 1;
                if v[i] < n {
                    break;
                }
                v[i] = 0;
            }
        }
    }
}

fn collect_atoms<'a>(p: &'a Prop, out: &mut Vec<&'a str>) {
    match p {
        Prop::Atom(a) => {
            if !out.contains(&&**a) {
                out.push(a);
            }
        }
        Prop::Neg(q) => collect_atoms(q, out),
        Prop::And(l, r) | Prop::Or(l, r) => {
            collect_atoms(l, out);
            collect_atoms(r, out);
        }
    }
}

/// Tables for the two-element classical space and MO₂.
fn pruning_tables() -> Vec<(Table, usize)> {
    vec![
        (Table::new(&classical_sets(1).expect("nonempty")), 16),
        (Table::new(&mo_space(2).expect("nonempty")), 6),
    ]
}

struct OutOfBudget;

struct Searcher {
    cfg: SearchConfig,
    pool: Vec<Prop>,
    tables: Vec<(Table, usize)>,
    failed: HashMap<Vec<Prop>, usize>,
    proved: HashMap<Vec<Prop>, Rc<Node>>,
    semantic: HashMap<Vec<Prop>, bool>,
    stats: SearchStats,
}

fn concat(parts: &[&[Prop]]) -> Vec<Prop> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Subformulas of the goal, one representative per `{c, ¬c}` pair.
fn cut_pool(goal: &[Prop]) -> Vec<Prop> {
    let mut out: Vec<Prop> = Vec::new();
    for f in goal {
        for s in f.subformulas() {
            let rep = match &s {
                Prop::Neg(inner) => (**inner).clone(),
                _ => s,
            };
            if !out.contains(&rep) && !out.contains(&negate(&rep)) {
                out.push(rep);
            }
        }
    }
    out
}

impl Searcher {
    fn new(goal: &[Prop], cfg: SearchConfig) -> Self {
        let pool = match cfg.cut_pool {
            CutPool::None => Vec::new(),
            CutPool::Subformulas => cut_pool(goal),
        };
        let tables = if cfg.semantic_pruning {
            pruning_tables()
        } else {
            Vec::new()
        };
        Searcher {
            cfg,
            pool,
            tables,
            failed: HashMap::new(),
            proved: HashMap::new(),
            semantic: HashMap::new(),
            stats: SearchStats::default(),
        }
    }

    fn semantically_possible(&mut self, seq: &[Prop]) -> bool {
        if self.tables.is_empty() {
            return true;
        }
        if let Some(&ok) = self.semantic.get(seq) {
            return ok;
        }
        let ok = self.tables.iter().all(|(t, max)| t.valid(seq, *max).unwrap_or(true));
        self.semantic.insert(seq.to_vec(), ok);
        ok
    }

    fn leaf(seq: &[Prop], how: How, height: usize) -> Rc<Node> {
        Rc::new(Node {
            seq: seq.to_vec(),
            how,
            height,
        })
    }

    fn unary(&mut self, seq: &[Prop], rule: RuleId, sub: Vec<Prop>, h: usize) -> Result<Option<Rc<Node>>, OutOfBudget> {
        Ok(self.search(&sub, h - 1)?.map(|child| {
            Rc::new(Node {
                seq: seq.to_vec(),
                height: child.height + 1,
                how: How::Unary(rule, child),
            })
        }))
    }

    fn binary(
        &mut self,
        seq: &[Prop],
        rule: RuleId,
        a: Vec<Prop>,
        b: Vec<Prop>,
        h: usize,
    ) -> Result<Option<Rc<Node>>, OutOfBudget> {
        let Some(left) = self.search(&a, h - 1)? else {
            return Ok(None);
        };
        let Some(right) = self.search(&b, h - 1)? else {
            return Ok(None);
        };
        Ok(Some(Rc::new(Node {
            seq: seq.to_vec(),
            height: left.height.max(right.height) + 1,
            how: How::Binary(rule, left, right),
        })))
    }

    fn search(&mut self, seq: &[Prop], h: usize) -> Result<Option<Rc<Node>>, OutOfBudget> {
        if h == 0 {
            return Ok(None);
        }
        if let Some(p) = self.proved.get(seq) {
            if p.height <= h {
                return Ok(Some(p.clone()));
            }
        }
        if self.failed.get(seq).is_some_and(|&f| f >= h) {
            return Ok(None);
        }
        self.stats.nodes += 1;
        if self.stats.nodes > self.cfg.node_budget {
            return Err(OutOfBudget);
        }
        if !self.semantically_possible(seq) {
            self.stats.pruned += 1;
            self.failed.insert(seq.to_vec(), usize::MAX);
            return Ok(None);
        }
        let found = self.expand(seq, h)?;
        match &found {
            Some(node) => {
                self.proved.insert(seq.to_vec(), node.clone());
            }
            None => {
                let entry = self.failed.entry(seq.to_vec()).or_insert(0);
                *entry = (*entry).max(h);
            }
        }
        Ok(found)
    }

    fn expand(&mut self, seq: &[Prop], h: usize) -> Result<Option<Rc<Node>>, OutOfBudget> {
        let n = seq.len();
        // Axioms.
        if let [s @ Prop::Atom(_), Prop::Neg(t)] = seq {
            if **t == *s {
                return Ok(Some(Self::leaf(seq, How::NegAtomic, 1)));
            }
        }
        if let [x, y, z] = seq {
            if *z == Prop::or(negate(y), negate(x)) {
                return Ok(Some(Self::leaf(seq, How::NegVee, 1)));
            }
        }
        if let [a, b] = seq {
            let height = logical_axiom_height(a);
            if *b == negate(a) && height <= h {
                return Ok(Some(Self::leaf(seq, How::LogicalAxiom, height)));
            }
        }
        if h == 1 {
            return Ok(None);
        }
        // R7 backwards: α ∧ β, Δ from α, β, Δ.
        if let Some(Prop::And(a, b)) = seq.first() {
            let sub = concat(&[&[(**a).clone(), (**b).clone()], &seq[1..]]);
            if let Some(node) = self.unary(seq, RuleId::LeftAnd, sub, h)? {
                return Ok(Some(node));
            }
        }
        // R8 backwards: Γ, β ∧ α from Γ, α, β.
        if let Some(Prop::And(b, a)) = seq.last() {
            let sub = concat(&[&seq[..n - 1], &[(**a).clone(), (**b).clone()]]);
            if let Some(node) = self.unary(seq, RuleId::RightAnd, sub, h)? {
                return Ok(Some(node));
            }
        }
        // R10 backwards at each disjunction.
        for k in 0..n {
            if let Prop::Or(a, b) = &seq[k] {
                let first = concat(&[&seq[..k], &[(**a).clone()], &seq[k + 1..]]);
                let second = concat(&[&seq[..k], &[negate(a), (**b).clone()], &seq[k + 1..]]);
                if let Some(node) = self.binary(seq, RuleId::VeeIntro, first, second, h)? {
                    return Ok(Some(node));
                }
            }
        }
        if let [a, b] = seq {
            if let Some(node) = self.unary(seq, RuleId::Exchange, vec![b.clone(), a.clone()], h)? {
                return Ok(Some(node));
            }
        }
        // R5 backwards: Γ, ¬α, Δ from Γ, Δ and Γ, α.
        for k in 0..n {
            let rest = concat(&[&seq[..k], &seq[k + 1..]]);
            let head = concat(&[&seq[..k], &[negate(&seq[k])]]);
            if let Some(node) = self.binary(seq, RuleId::Stuttering, rest, head, h)? {
                return Ok(Some(node));
            }
        }
        if n >= 1 {
            if let Some(node) = self.unary(seq, RuleId::LeftWeakening, seq[1..].to_vec(), h)? {
                return Ok(Some(node));
            }
            if let Some(node) = self.unary(seq, RuleId::RightWeakening, seq[..n - 1].to_vec(), h)? {
                return Ok(Some(node));
            }
        }
        let pool = self.pool.clone();
        for k in 0..=n {
            for c in &pool {
                let with = concat(&[&seq[..k], &[c.clone()], &seq[k..]]);
                let without = concat(&[&seq[..k], &[negate(c)], &seq[k..]]);
                if let Some(node) = self.binary(seq, RuleId::Cut, with, without, h)? {
                    return Ok(Some(node));
                }
            }
        }
        Ok(None)
    }
}

fn emit(node: &Node, b: &mut ScriptBuilder) -> usize {
    let seq = node.seq.clone();
    match &node.how {
        How::NegAtomic => b.neg_atomic(&seq[0]),
        How::NegVee => b.neg_vee(&seq[0], &seq[1]),
        How::LogicalAxiom => logical_axiom(b, &seq[0]),
        How::Unary(rule, child) => {
            let c = emit(child, b);
            let bindings = match rule {
                RuleId::LeftWeakening => Bindings::new().with(Meta::Alpha, seq[0].clone()),
                RuleId::RightWeakening => Bindings::new().with(Meta::Alpha, seq[seq.len() - 1].clone()),
                _ => Bindings::new(),
            };
            b.rule(*rule, &[c], seq, bindings)
        }
        How::Binary(rule, l, r) => {
            let a = emit(l, b);
            let c = emit(r, b);
            b.rule(*rule, &[a, c], seq, Bindings::new())
        }
    }
}

/// State of one backward search, advanced one height bound at a time.
pub struct Prover {
    goal: Vec<Prop>,
    searcher: Searcher,
    next_depth: usize,
    done: bool,
}

impl Prover {
    /// `goal` must be normalized (empty right side, restricted language).
    pub fn new(goal: &Sequent, cfg: SearchConfig) -> Result<Self> {
        if !goal.is_normalized() {
            return Err(Error::NotRestricted(goal.to_string()));
        }
        Ok(Prover {
            goal: goal.lhs.clone(),
            searcher: Searcher::new(&goal.lhs, cfg),
            next_depth: 1,
            done: false,
        })
    }

    pub fn finished(&self) -> bool {
        self.done
    }

    pub fn stats(&self) -> &SearchStats {
        &self.searcher.stats
    }

    /// Tries the next height bound. `Some` when a proof was found.
    pub fn step(&mut self) -> Option<ProofScript> {
        if self.done {
            return None;
        }
        if self.next_depth > self.searcher.cfg.max_depth.max(1) {
            self.done = true;
            return None;
        }
        let depth = self.next_depth;
        self.next_depth += 1;
        let goal = self.goal.clone();
        match self.searcher.search(&goal, depth) {
            Ok(Some(node)) => {
                self.done = true;
                let mut b = ScriptBuilder::new();
                let last = emit(&node, &mut b);
                let script = b.finish(last);
                debug_assert_eq!(check_script(&script), Ok(()), "{script}");
                Some(script)
            }
            Ok(None) => {
                self.searcher.stats.depth_completed = depth;
                None
            }
            Err(OutOfBudget) => {
                self.searcher.stats.budget_exhausted = true;
                self.done = true;
                None
            }
        }
    }
}

/// Searches for a derivation of a normalized goal.
pub fn prove(goal: &Sequent, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let mut prover = Prover::new(goal, cfg.clone())?;
    while !prover.finished() {
        if let Some(script) = prover.step() {
            return Ok(SearchOutcome::Proved(script));
        }
    }
    Ok(SearchOutcome::Exhausted(prover.stats().clone()))
}

/// Alternates one height bound of proof search with one model of the
/// countermodel search, and returns whichever succeeds first. The goal may
/// have a right side; the prover works on its normalized form and witnesses
/// refer to the goal as given.
pub fn decide(goal: &Sequent, cfg: &SearchConfig, models: &[Model]) -> Result<SearchOutcome> {
    let mut prover = Prover::new(&normalize_sequent(goal), cfg.clone())?;
    let mut skipped = Vec::new();
    let mut next_model = 0;
    while !prover.finished() || next_model < models.len() {
        if let Some(script) = prover.step() {
            return Ok(SearchOutcome::Proved(script));
        }
        if let Some(model) = models.get(next_model) {
            next_model += 1;
            let found = find_countermodel(goal, std::slice::from_ref(model), DEFAULT_ASSIGNMENT_CAP)?;
            skipped.extend(found.skipped);
            if let Some(w) = found.witness {
                return Ok(SearchOutcome::Refuted(w));
            }
        }
    }
    let mut stats = prover.stats().clone();
    stats.models_skipped = skipped;
    Ok(SearchOutcome::Exhausted(stats))
}

/// `β → α`: derivability of `β, ¬α ⊢`, decided against the default models.
pub fn implies(beta: &Prop, alpha: &Prop, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let goal = Sequent::left(vec![to_nnf(beta), negate(alpha)]);
    decide(&goal, cfg, &default_models())
}

/// Both implications between `alpha` and `beta`: `(α → β, β → α)`.
pub fn logically_equivalent(alpha: &Prop, beta: &Prop, cfg: &SearchConfig) -> Result<(SearchOutcome, SearchOutcome)> {
    Ok((implies(alpha, beta, cfg)?, implies(beta, alpha, cfg)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    fn proved(s: &str, cfg: &SearchConfig) -> ProofScript {
        match prove(&seq(s), cfg).unwrap() {
            SearchOutcome::Proved(script) => {
                assert_eq!(check_script(&script), Ok(()));
                script
            }
            other => panic!("{s}: {other:?}"),
        }
    }

    #[test]
    fn axioms_at_height_one() {
        let s = proved("s, ~s |-", &SearchConfig::default());
        assert_eq!(s.height(), 1);
        let s = proved("~a, ~b, b | a |-", &SearchConfig::default());
        assert_eq!(s.height(), 1);
    }

    #[test]
    fn small_goals() {
        let cfg = SearchConfig::default();
        assert!(proved("p & q, ~q | ~p |-", &cfg).height() <= 4);
        proved("q & p, ~p |-", &cfg);
        assert!(proved("q, p, ~p |-", &cfg).height() <= 6);
        assert!(proved("a & ~a |-", &cfg).height() <= 4);
        proved("a | ~a, ~a & a |-", &cfg);
    }

    #[test]
    fn requires_normalized_goal() {
        assert!(prove(&seq("p |- p"), &SearchConfig::default()).is_err());
    }

    #[test]
    fn pruning_does_not_change_results() {
        let without = SearchConfig {
            semantic_pruning: false,
            max_depth: 4,
            ..SearchConfig::default()
        };
        for s in ["s, ~s |-", "q, p, ~p |-", "q & p, ~p |-"] {
            proved(s, &without);
        }
        assert!(!prove(&seq("p, q, ~p |-"), &without).unwrap().is_proved());
    }

    #[test]
    fn decide_examples() {
        let cfg = SearchConfig::default();
        match decide(&seq("p, q, ~p |-"), &cfg, &default_models()).unwrap() {
            SearchOutcome::Refuted(w) => assert_eq!(w.model, "zoo:q2"),
            other => panic!("{other:?}"),
        }
        assert!(decide(&seq("p, ~p |-"), &cfg, &default_models()).unwrap().is_proved());
        assert!(decide(&seq("p |- p"), &cfg, &default_models()).unwrap().is_proved());
    }

    #[test]
    fn implication_examples() {
        let cfg = SearchConfig::default();
        let p = |s: &str| Prop::parse(s).unwrap();
        assert!(implies(&p("b & a"), &p("a"), &cfg).unwrap().is_proved());
        assert!(implies(&p("p"), &p("p"), &cfg).unwrap().is_proved());
        assert!(implies(&p("p"), &p("q"), &cfg).unwrap().is_refuted());
        let (x, y) = logically_equivalent(&p("p"), &p("q"), &cfg).unwrap();
        assert!(!x.is_proved() && !y.is_proved());
    }

    #[test]
    fn budget_is_reported() {
        let cfg = SearchConfig {
            node_budget: 3,
            semantic_pruning: false,
            ..SearchConfig::default()
        };
        match prove(&seq("a, b, c & d, ~a |-"), &cfg).unwrap() {
            SearchOutcome::Exhausted(stats) => assert!(stats.budget_exhausted),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cut_pool_keeps_one_of_each_negation_pair() {
        let pool = cut_pool(&[Prop::parse("p & ~q").unwrap(), Prop::parse("q | ~p").unwrap()]);
        assert_eq!(
            pool,
            vec![Prop::atom("p"), Prop::atom("q"), Prop::parse("p & ~q").unwrap()]
        );
    }
}
