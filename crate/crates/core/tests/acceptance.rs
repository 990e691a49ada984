//! Acceptance run: one line per criterion, non-zero exit if any fails.

mod common;

use std::path::{Path, PathBuf};
use std::time::Instant;

use common::*;
use osl_core::kernel::{Bindings, Justification};
use osl_core::laws::{check_laws, check_restrictions};
use osl_core::rational::standard_q2_flats;
use osl_core::search::SearchConfig;
use osl_core::semantics::{default_models, format_assignment, parse_assignment, DEFAULT_ASSIGNMENT_CAP};
use osl_core::zoo::{classical_sets, model_to_string, parse_model, powerset_space, union, Strictness};
use osl_core::{
    check_script, decide, expand_derived, find_countermodel, normalize_sequent, prove, to_nnf, DerivedRule,
    FiniteOSpace, Model, ProofScript, ProofStep, Prop, RationalSpace, RuleId, Sequent,
};
use rand::Rng;

const Q2_SAMPLE_BUDGET: usize = 200;
const INSTANCES_PER_RULE_PER_MODEL: usize = 500;
const ASSIGNMENTS_PER_INSTANCE: usize = 4;
const MAX_SEQUENCE_LEN: usize = 4;
const BINDING_SETS_PER_MACRO: usize = 100;
const MACRO_FORMULA_DEPTH: usize = 3;
const NONCOMMUTE_MAX_HEIGHT: usize = 6;
const LEM_MAX_HEIGHT: usize = 4;
const NNF_PROPS_PER_MODEL: usize = 1000;
const NNF_SEQUENTS: usize = 500;
/// Every criterion demands exact agreement.
const ALLOWED_FAILURES: usize = 0;

type Outcome = Result<String, String>;

fn finite_suite() -> Vec<(String, FiniteOSpace)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((format!("sets:{n}"), classical_sets(n).unwrap()));
    }
    for m in 0..=3 {
        out.push((format!("powerset:{m}"), powerset_space(m).unwrap()));
    }
    out.push((
        "sets:2+powerset:2".into(),
        union(&classical_sets(2).unwrap(), &powerset_space(2).unwrap()),
    ));
    out
}

fn axiom_suite() -> Outcome {
    let mut failures = Vec::new();
    let suite = finite_suite();
    for (name, space) in &suite {
        let report = space.check_axioms();
        if !report.all_passed() {
            failures.push(format!("{name}: {}", report.to_string().replace('\n', "; ")));
        }
    }
    let q2 = RationalSpace::with_budget(2, Q2_SAMPLE_BUDGET).unwrap();
    let report = q2.check_axioms_sampled(&standard_q2_flats());
    if !report.all_passed() {
        failures.push(format!("q2: {}", report.to_string().replace('\n', "; ")));
    }
    if failures.len() > ALLOWED_FAILURES {
        return Err(failures.join(" | "));
    }
    Ok(format!(
        "{} finite spaces exhaustive, q2 sampled over {} vectors (budget {Q2_SAMPLE_BUDGET})",
        suite.len(),
        q2.sample_vectors().len()
    ))
}

fn lemma_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, space) in finite_suite() {
        let states = space.states();
        let mut f = check_laws(&space, &states, space.flats());
        f.extend(check_restrictions(&space, &states, space.flats()));
        failures.extend(f.into_iter().map(|x| format!("{name}: {x}")));
        checked += 1;
    }
    let q2 = RationalSpace::new(2).unwrap();
    let flats = standard_q2_flats();
    let states = q2.sample_vectors();
    let mut f = check_laws(&q2, &states, &flats);
    f.extend(check_restrictions(&q2, &states, &flats));
    failures.extend(f.into_iter().map(|x| format!("q2: {x}")));
    if failures.len() > ALLOWED_FAILURES {
        return Err(failures.join(" | "));
    }
    Ok(format!(
        "{} laws plus the O-subspace law on {checked} finite spaces and the q2 flats",
        osl_core::laws::LAWS.len()
    ))
}

/// Checks the instance against the kernel so the schema used here and the
/// checker agree.
fn kernel_accepts(inst: &RuleInstance) -> bool {
    let mut steps: Vec<ProofStep> = inst
        .premises
        .iter()
        .enumerate()
        .map(|(i, lhs)| ProofStep {
            index: i + 1,
            conclusion: Sequent::left(lhs.clone()),
            justification: Justification::Assume,
        })
        .collect();
    let n = steps.len();
    steps.push(ProofStep {
        index: n + 1,
        conclusion: Sequent::left(inst.conclusion.clone()),
        justification: Justification::Rule {
            rule: inst.rule,
            premises: (1..=n).collect(),
            bindings: Bindings::new(),
        },
    });
    let script = ProofScript {
        goal: Sequent::left(inst.conclusion.clone()),
        steps,
    };
    check_script(&script).is_ok()
}

fn rule_soundness() -> Outcome {
    let mut rng = rng(3);
    let atoms = atoms(&["p", "q", "r"]);
    let models = zoo_models();
    let mut failures = Vec::new();
    let mut instances = 0usize;
    let mut premises_held = 0usize;
    for model in &models {
        for rule in RuleId::ALL {
            for _ in 0..INSTANCES_PER_RULE_PER_MODEL {
                let inst = random_instance(&mut rng, rule, &atoms, 2, MAX_SEQUENCE_LEN);
                instances += 1;
                if !kernel_accepts(&inst) {
                    failures.push(format!("kernel rejects {} instance {:?}", rule.code(), inst.conclusion));
                    continue;
                }
                for _ in 0..ASSIGNMENTS_PER_INSTANCE {
                    let v = random_assignment(&mut rng, model, &atoms);
                    let holds = |lhs: &Vec<Prop>| model.holds(&v, &Sequent::left(lhs.clone())).unwrap();
                    if inst.premises.iter().all(holds) {
                        premises_held += 1;
                        if !holds(&inst.conclusion) {
                            failures.push(format!("{} in {}: {:?}", rule.code(), model.label(), inst));
                        }
                    }
                }
            }
        }
    }
    if failures.len() > ALLOWED_FAILURES {
        return Err(format!("{} failures, first: {}", failures.len(), failures[0]));
    }
    Ok(format!(
        "{instances} instances over {} models, {premises_held} assignments with all premises true, conclusion true in all",
        models.len()
    ))
}

fn macro_bindings(rng: &mut TestRng, rule: DerivedRule, atoms: &[Prop]) -> Bindings {
    let mut b = Bindings::new();
    for &meta in rule.metas() {
        b = if meta.is_list() {
            let len = rng.gen_range(0..=2);
            b.with_list(meta, random_list(rng, atoms, MACRO_FORMULA_DEPTH, len))
        } else {
            b.with(meta, random_restricted(rng, atoms, MACRO_FORMULA_DEPTH))
        };
    }
    b
}

fn derived_expansion() -> Outcome {
    let mut rng = rng(4);
    let atoms = atoms(&["p", "q", "r", "s"]);
    let mut failures = Vec::new();
    let mut total = 0;
    for rule in DerivedRule::ALL {
        for _ in 0..BINDING_SETS_PER_MACRO {
            let bindings = macro_bindings(&mut rng, rule, &atoms);
            total += 1;
            match expand_derived(rule, &bindings) {
                Ok(script) => {
                    if let Err(v) = check_script(&script) {
                        failures.push(format!("{rule} [{bindings}]: {v}"));
                    }
                }
                Err(e) => failures.push(format!("{rule} [{bindings}]: {e}")),
            }
        }
    }
    if failures.len() > ALLOWED_FAILURES {
        return Err(format!("{}/{total} rejected, first: {}", failures.len(), failures[0]));
    }
    Ok(format!(
        "{total} expansions over {} macros, all kernel-checked",
        DerivedRule::ALL.len()
    ))
}

fn non_commutativity() -> Outcome {
    let refuted = Sequent::parse("p, q, ~p |-").unwrap();
    let proved = Sequent::parse("q, p, ~p |-").unwrap();
    let cfg = SearchConfig::default();
    let witness = match decide(&refuted, &cfg, &default_models()).map_err(|e| e.to_string())? {
        osl_core::SearchOutcome::Refuted(w) => w,
        other => return Err(format!("`{refuted}` not refuted: {other:?}")),
    };
    if witness.model != "zoo:q2" {
        return Err(format!("witness found in {} rather than q2", witness.model));
    }
    let q2 = Model::q2();
    if q2
        .holds(&witness.witness.assignment, &refuted)
        .map_err(|e| e.to_string())?
    {
        return Err("witness does not falsify the sequent".into());
    }
    let cfg = SearchConfig {
        max_depth: NONCOMMUTE_MAX_HEIGHT,
        ..SearchConfig::default()
    };
    let script = match prove(&proved, &cfg).map_err(|e| e.to_string())? {
        osl_core::SearchOutcome::Proved(s) => s,
        other => return Err(format!("`{proved}` not proved: {other:?}")),
    };
    check_script(&script).map_err(|v| v.to_string())?;
    if script.height() > NONCOMMUTE_MAX_HEIGHT {
        return Err(format!("height {} over {NONCOMMUTE_MAX_HEIGHT}", script.height()));
    }
    let shown: Vec<String> = witness
        .witness
        .assignment
        .iter()
        .map(|(a, f)| format!("{a}={f}"))
        .collect();
    Ok(format!(
        "`{refuted}` refuted in q2 ({}), `{proved}` proved at height {}",
        shown.join(" "),
        script.height()
    ))
}

/// Depth-one formulas over two atoms.
fn small_pool() -> Vec<Prop> {
    let atoms = atoms(&["p", "q"]);
    let mut pool = atoms.clone();
    pool.extend(atoms.iter().map(|a| Prop::not(a.clone())));
    for x in &atoms {
        for y in &atoms {
            pool.push(Prop::and(x.clone(), y.clone()));
            pool.push(Prop::or(x.clone(), y.clone()));
        }
    }
    pool
}

fn sequences(pool: &[Prop], len: usize) -> Vec<Vec<Prop>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.iter()
            .flat_map(|s| {
                pool.iter().map(move |p| {
                    let mut t = s.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect()
    })
}

fn classical_collapse() -> Outcome {
    let model = Model::finite("zoo:sets:2", classical_sets(2).unwrap());
    let pool = small_pool();
    let mut agree = 0usize;
    let mut valid = 0usize;
    let mut disagreements = Vec::new();
    for total in 0..=4 {
        for seq in sequences(&pool, total) {
            for split in 0..=total {
                let s = Sequent::new(seq[..split].to_vec(), seq[split..].to_vec());
                let names: Vec<String> = s.atoms().iter().map(|a| a.to_string()).collect();
                let oracle = classical_valid(&s.lhs, &s.rhs, &names, 2);
                let ours = model
                    .valid(&s, DEFAULT_ASSIGNMENT_CAP)
                    .map_err(|e| e.to_string())?
                    .is_none();
                if oracle == ours {
                    agree += 1;
                    valid += usize::from(ours);
                } else if disagreements.len() < 5 {
                    disagreements.push(format!("{s}: oracle {oracle}, model {ours}"));
                }
            }
        }
    }
    if !disagreements.is_empty() {
        return Err(disagreements.join(" | "));
    }
    Ok(format!(
        "{agree} sequents from a {}-formula pool agree with the truth table ({valid} valid)",
        pool.len()
    ))
}

fn excluded_middle() -> Outcome {
    let goal = normalize_sequent(&Sequent::parse("|- a | ~a").unwrap());
    let cfg = SearchConfig {
        max_depth: LEM_MAX_HEIGHT,
        ..SearchConfig::default()
    };
    let script = match prove(&goal, &cfg).map_err(|e| e.to_string())? {
        osl_core::SearchOutcome::Proved(s) => s,
        other => return Err(format!("`{goal}` not proved: {other:?}")),
    };
    check_script(&script).map_err(|v| v.to_string())?;
    let original = Sequent::parse("|- a | ~a").unwrap();
    let models = zoo_models();
    for m in &models {
        if let Some(w) = m.valid(&original, DEFAULT_ASSIGNMENT_CAP).map_err(|e| e.to_string())? {
            return Err(format!("invalid in {}: {w}", m.label()));
        }
    }
    Ok(format!(
        "normalized to `{goal}`, proved at height {}, valid in {} models",
        script.height(),
        models.len()
    ))
}

fn nnf_preservation() -> Outcome {
    let mut rng = rng(8);
    let atoms = atoms(&["p", "q", "r"]);
    let models = zoo_models();
    let mut props = 0;
    for m in &models {
        for _ in 0..NNF_PROPS_PER_MODEL {
            let p = random_prop(&mut rng, &atoms, 4);
            let v = random_assignment(&mut rng, m, &atoms);
            let a = m.eval_prop(&v, &p).map_err(|e| e.to_string())?;
            let b = m.eval_prop(&v, &to_nnf(&p)).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("{p} in {}: {a} vs nnf {b}", m.label()));
            }
            props += 1;
        }
    }
    let seq_models: Vec<Model> = ["zoo:sets:2", "zoo:powerset:2", "zoo:mo:2", "zoo:q2"]
        .iter()
        .map(|n| Model::from_name(n).unwrap())
        .collect();
    let mut valid = 0;
    for _ in 0..NNF_SEQUENTS {
        let l = rng.gen_range(0..=3);
        let r = rng.gen_range(0..=2);
        let lhs = (0..l).map(|_| random_prop(&mut rng, &atoms, 2)).collect();
        let rhs = (0..r).map(|_| random_prop(&mut rng, &atoms, 2)).collect();
        let s = Sequent::new(lhs, rhs);
        let n = normalize_sequent(&s);
        for m in &seq_models {
            let a = m
                .valid(&s, DEFAULT_ASSIGNMENT_CAP)
                .map_err(|e| e.to_string())?
                .is_none();
            let b = m
                .valid(&n, DEFAULT_ASSIGNMENT_CAP)
                .map_err(|e| e.to_string())?
                .is_none();
            if a != b {
                return Err(format!("`{s}` vs `{n}` in {}: {a} vs {b}", m.label()));
            }
            valid += usize::from(a);
        }
    }
    Ok(format!(
        "{props} propositions over {} models, {NNF_SEQUENTS} sequents over {} models ({valid} valid pairs)",
        models.len(),
        seq_models.len()
    ))
}

const DERIVABLE: [&str; 25] = [
    "|- a | ~a",
    "|- ~a | a",
    "q, p, ~p |-",
    "p, ~p |-",
    "~p, p |-",
    "p & ~p |-",
    "p, q, ~q |-",
    "p & q, ~q | ~p |-",
    "p | q, ~q & ~p |-",
    "p |- p",
    "p & q |- q",
    "p, q |- q",
    "p |- p | q",
    "p, p |- p",
    "p |- p, q",
    "|- p, ~p",
    "p & ~p, q |-",
    "q, p & ~p |-",
    "p |- p & p",
    "~~p |- p",
    "(p | q) & r, ~r |-",
    "~p & ~q, q | p |-",
    "q, p |- p, q",
    "p & ~q, q |-",
    "p | (q & ~q) |- p",
];

const REFUTABLE: [&str; 25] = [
    "p & q |- p | q",
    "p |- q",
    "p |-",
    "|- p",
    "p, q |-",
    "p & q |- q & p",
    "p, q, ~p |-",
    "p |- q | p",
    "p | q |- p",
    "p |- p & q",
    "p & q |- p",
    "p, q |- p",
    "p | q |- q | p",
    "p, ~q |- ~q & p",
    "~p |- q",
    "p & (q | r) |- (p & q) | (p & r)",
    "p, q, ~p | r |-",
    "|- p & ~p",
    "p & q, r |- r & q",
    "p |- q, r",
    "~p, q, p |-",
    "q | p |- p | q",
    "p, q |- q & p",
    "(p & q) & r |- p & (q & r)",
    "p & (q & r) |- (p & q) & r",
];

fn coherence() -> Outcome {
    let cfg = SearchConfig::default();
    let refuters = default_models();
    let all = zoo_models();
    let mut proved = 0;
    let mut refuted = 0;
    for (text, derivable) in DERIVABLE
        .iter()
        .map(|t| (t, true))
        .chain(REFUTABLE.iter().map(|t| (t, false)))
    {
        let s = Sequent::parse(text).unwrap();
        let outcome = prove(&normalize_sequent(&s), &cfg).map_err(|e| e.to_string())?;
        let counter = find_countermodel(&s, &refuters, DEFAULT_ASSIGNMENT_CAP).map_err(|e| e.to_string())?;
        if outcome.is_proved() && counter.witness.is_some() {
            return Err(format!("`{text}` both proved and refuted"));
        }
        if let Some(script) = outcome.script() {
            check_script(script).map_err(|v| format!("`{text}`: {v}"))?;
            for m in &all {
                if let Some(w) = m.valid(&s, DEFAULT_ASSIGNMENT_CAP).map_err(|e| e.to_string())? {
                    return Err(format!("proved `{text}` fails in {}: {w}", m.label()));
                }
            }
            proved += 1;
        }
        refuted += usize::from(counter.witness.is_some());
        if derivable != outcome.is_proved() || derivable == counter.witness.is_some() {
            return Err(format!(
                "`{text}` expected {}, proved = {}, refuted = {}",
                if derivable { "derivable" } else { "refutable" },
                outcome.is_proved(),
                counter.witness.is_some()
            ));
        }
    }
    Ok(format!(
        "{proved} proved and kernel-checked, {refuted} refuted, no overlap"
    ))
}

fn example_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../ex")
}

/// Models for the assignment examples, keyed by file name.
const ASSIGNMENT_MODELS: [(&str, &str); 2] = [("q2_noncommute.assign", "zoo:q2"), ("sets2.assign", "zoo:sets:2")];

fn round_trips() -> Outcome {
    let dir = example_dir();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    let (mut models, mut assigns, mut proofs) = (0, 0, 0);
    for path in entries {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let again = match path.extension().and_then(|e| e.to_str()) {
            Some("model") => {
                models += 1;
                model_to_string(
                    &parse_model(&text, Strictness::Lenient)
                        .map_err(|e| e.to_string())?
                        .space,
                )
            }
            Some("assign") => {
                assigns += 1;
                let model = ASSIGNMENT_MODELS
                    .iter()
                    .find(|(f, _)| *f == name)
                    .map(|(_, m)| Model::from_name(m).unwrap())
                    .ok_or_else(|| format!("no model registered for {name}"))?;
                format_assignment(&parse_assignment(&text, &model).map_err(|e| e.to_string())?)
            }
            Some("prf") => {
                proofs += 1;
                ProofScript::parse(&text).map_err(|e| e.to_string())?.to_string()
            }
            _ => continue,
        };
        if again != text {
            return Err(format!("{name} changed on load and save"));
        }
    }
    if models == 0 || assigns == 0 || proofs == 0 {
        return Err("example corpus is missing a file kind".into());
    }
    Ok(format!(
        "{models} models, {assigns} assignments, {proofs} proof scripts bit-stable"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axiom suite", axiom_suite),
        ("lemma suite", lemma_suite),
        ("rule soundness", rule_soundness),
        ("derived-rule expansion", derived_expansion),
        ("non-commutativity witness", non_commutativity),
        ("classical collapse", classical_collapse),
        ("excluded middle", excluded_middle),
        ("NNF preservation", nnf_preservation),
        ("prover/refuter coherence", coherence),
        ("round trips", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
