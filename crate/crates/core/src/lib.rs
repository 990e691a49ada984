//! O-spaces and the substructural quantum sequent calculus interpreted over them.
//!
//! The crate is organised bottom up:
//!
//! * [`ospace`] defines the [`OSpace`] interface, Sasaki projection and the
//!   axiom checker.
//! * [`finite`] and [`rational`] are the two backends: finite relational
//!   spaces and subspaces of ℚⁿ in exact arithmetic.
//! * [`zoo`] builds the standard example spaces and reads model files.
//! * [`syntax`] and [`semantics`] cover propositions, sequents and their
//!   interpretation.
//! * [`laws`] checks the algebraic consequences of the axioms.
//! * [`kernel`] checks proof scripts in the ten-rule system; [`search`]
//!   finds them.

pub mod derived;
pub mod error;
pub mod finite;
pub mod kernel;
pub mod laws;
pub mod ospace;
pub mod rational;
pub mod search;
pub mod semantics;
pub mod syntax;
pub mod zoo;

pub use derived::{expand_derived, DerivedRule};
pub use error::{Error, ParseError, Result};
pub use finite::{FiniteFlat, FiniteOSpace, StateId, StateSet};
pub use kernel::{check_script, check_step, ProofScript, ProofStep, RuleId, Violation};
pub use laws::{check_laws, check_restrictions, LawFailure};
pub use ospace::{check_axioms, Axiom, AxiomReport, OSpace, Restriction};
pub use rational::{RationalSpace, RationalVector, Subspace};
pub use search::{decide, implies, logically_equivalent, prove, CutPool, SearchConfig, SearchOutcome};
pub use semantics::{find_countermodel, valid_in_model, Assignment, FlatValue, Model, ModelWitness, Verdict, Witness};
pub use syntax::{negate, normalize_sequent, to_nnf, Prop, Sequent};
