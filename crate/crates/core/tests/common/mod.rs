#![allow(dead_code)]

use osl_core::semantics::Assignment;
use osl_core::zoo::{classical_sets, mo_space, powerset_space, union};
use osl_core::{negate, FlatValue, Model, Prop, RuleId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atoms(names: &[&str]) -> Vec<Prop> {
    names.iter().map(|n| Prop::atom(*n)).collect()
}

/// Every finite model the suites quantify over, plus ℚ².
pub fn zoo_models() -> Vec<Model> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(Model::finite(format!("zoo:sets:{n}"), classical_sets(n).unwrap()));
    }
    for m in 0..=3 {
        out.push(Model::finite(format!("zoo:powerset:{m}"), powerset_space(m).unwrap()));
    }
    let u = union(&classical_sets(2).unwrap(), &powerset_space(2).unwrap());
    out.push(Model::finite("zoo:sets:2+powerset:2", u));
    out.push(Model::finite("zoo:mo:2", mo_space(2).unwrap()));
    out.push(Model::q2());
    out
}

/// A random proposition of the full language.
pub fn random_prop(rng: &mut TestRng, atoms: &[Prop], depth: usize) -> Prop {
    if depth == 0 || rng.gen_bool(0.3) {
        return atoms.choose(rng).unwrap().clone();
    }
    match rng.gen_range(0..3) {
        0 => Prop::not(random_prop(rng, atoms, depth - 1)),
        1 => Prop::and(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1)),
        _ => Prop::or(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1)),
    }
}

/// A random proposition with negation only on atoms, built directly.
pub fn random_restricted(rng: &mut TestRng, atoms: &[Prop], depth: usize) -> Prop {
    if depth == 0 || rng.gen_bool(0.3) {
        let a = atoms.choose(rng).unwrap().clone();
        return if rng.gen_bool(0.5) { a } else { Prop::not(a) };
    }
    let l = random_restricted(rng, atoms, depth - 1);
    let r = random_restricted(rng, atoms, depth - 1);
    if rng.gen_bool(0.5) {
        Prop::and(l, r)
    } else {
        Prop::or(l, r)
    }
}

pub fn random_list(rng: &mut TestRng, atoms: &[Prop], depth: usize, len: usize) -> Vec<Prop> {
    (0..len).map(|_| random_restricted(rng, atoms, depth)).collect()
}

pub fn random_assignment(rng: &mut TestRng, model: &Model, atoms: &[Prop]) -> Assignment<FlatValue> {
    let family = model.family();
    atoms
        .iter()
        .map(|a| match a {
            Prop::Atom(name) => (name.clone(), family.choose(rng).unwrap().clone()),
            _ => unreachable!("atoms only"),
        })
        .collect()
}

/// Truth-table evaluation over a carrier of `bits` points: each atom is a
/// bitmask, conjunction is intersection and disjunction is union.
pub fn mask_eval(p: &Prop, value: &dyn Fn(&str) -> u32, full: u32) -> u32 {
    match p {
        Prop::Atom(a) => value(a),
        Prop::Neg(x) => full & !mask_eval(x, value, full),
        Prop::And(x, y) => mask_eval(x, value, full) & mask_eval(y, value, full),
        Prop::Or(x, y) => mask_eval(x, value, full) | mask_eval(y, value, full),
    }
}

/// Classical validity of `lhs ⊢ rhs` over a `points`-element carrier,
/// by enumerating every subset for every atom.
pub fn classical_valid(lhs: &[Prop], rhs: &[Prop], atom_names: &[String], points: u32) -> bool {
    let full = (1u32 << points) - 1;
    let k = atom_names.len() as u32;
    let per_atom = 1u32 << points;
    (0..per_atom.pow(k)).all(|code| {
        let value = |a: &str| {
            let i = atom_names.iter().position(|n| n == a).expect("known atom") as u32;
            (code / per_atom.pow(i)) % per_atom
        };
        let l = lhs.iter().fold(full, |acc, p| acc & mask_eval(p, &value, full));
        let r = rhs.iter().fold(0, |acc, p| acc | mask_eval(p, &value, full));
        l & !r & full == 0
    })
}

/// One instance of a primitive rule, written out from its schema.
#[derive(Debug, Clone)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub premises: Vec<Vec<Prop>>,
    pub conclusion: Vec<Prop>,
}

fn cat(parts: &[&[Prop]]) -> Vec<Prop> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// A random instance with every sequent at most `max_len` formulas long.
pub fn random_instance(rng: &mut TestRng, rule: RuleId, atoms: &[Prop], depth: usize, max_len: usize) -> RuleInstance {
    let f = |rng: &mut TestRng| random_restricted(rng, atoms, depth);
    let split = |rng: &mut TestRng, room: usize| {
        let total = rng.gen_range(0..=room);
        let g = rng.gen_range(0..=total);
        (g, total - g)
    };
    let (premises, conclusion) = match rule {
        RuleId::Cut => {
            let (g, d) = split(rng, max_len - 1);
            let gamma = random_list(rng, atoms, depth, g);
            let delta = random_list(rng, atoms, depth, d);
            let alpha = f(rng);
            (
                vec![
                    cat(&[&gamma, &[alpha.clone()], &delta]),
                    cat(&[&gamma, &[negate(&alpha)], &delta]),
                ],
                cat(&[&gamma, &delta]),
            )
        }
        RuleId::Exchange => {
            let (a, b) = (f(rng), f(rng));
            (vec![vec![a.clone(), b.clone()]], vec![b, a])
        }
        RuleId::LeftWeakening | RuleId::RightWeakening => {
            let len = rng.gen_range(0..max_len);
            let gamma = random_list(rng, atoms, depth, len);
            let alpha = f(rng);
            let conclusion = if rule == RuleId::LeftWeakening {
                cat(&[&[alpha], &gamma])
            } else {
                cat(&[&gamma, &[alpha]])
            };
            (vec![gamma], conclusion)
        }
        RuleId::Stuttering => {
            let (g, d) = split(rng, max_len - 1);
            let gamma = random_list(rng, atoms, depth, g);
            let delta = random_list(rng, atoms, depth, d);
            let alpha = f(rng);
            (
                vec![cat(&[&gamma, &delta]), cat(&[&gamma, &[alpha.clone()]])],
                cat(&[&gamma, &[negate(&alpha)], &delta]),
            )
        }
        RuleId::NegAtomic => {
            let sigma = atoms.choose(rng).unwrap().clone();
            (vec![], vec![sigma.clone(), Prop::not(sigma)])
        }
        RuleId::LeftAnd => {
            let len = rng.gen_range(0..max_len - 1);
            let delta = random_list(rng, atoms, depth, len);
            let (a, b) = (f(rng), f(rng));
            (
                vec![cat(&[&[a.clone(), b.clone()], &delta])],
                cat(&[&[Prop::and(a, b)], &delta]),
            )
        }
        RuleId::RightAnd => {
            let len = rng.gen_range(0..max_len - 1);
            let gamma = random_list(rng, atoms, depth, len);
            let (a, b) = (f(rng), f(rng));
            (
                vec![cat(&[&gamma, &[a.clone(), b.clone()]])],
                cat(&[&gamma, &[Prop::and(b, a)]]),
            )
        }
        RuleId::NegVee1 => {
            let (a, b) = (f(rng), f(rng));
            (vec![], vec![negate(&a), negate(&b), Prop::or(b, a)])
        }
        RuleId::VeeIntro => {
            let (g, d) = split(rng, max_len - 2);
            let gamma = random_list(rng, atoms, depth, g);
            let delta = random_list(rng, atoms, depth, d);
            let (a, b) = (f(rng), f(rng));
            (
                vec![
                    cat(&[&gamma, &[a.clone()], &delta]),
                    cat(&[&gamma, &[negate(&a), b.clone()], &delta]),
                ],
                cat(&[&gamma, &[Prop::or(a, b)], &delta]),
            )
        }
    };
    RuleInstance {
        rule,
        premises,
        conclusion,
    }
}
