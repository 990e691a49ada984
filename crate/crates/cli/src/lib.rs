//! Command-line front end for `osl-core`.
//!
//! Every subcommand maps its outcome to a stable exit code:
//! `0` affirmative, `1` negative (a witness is printed), `2` usage or parse
//! error, `3` resource cap hit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use osl_core::kernel::Bindings;
use osl_core::search::SearchStats;
use osl_core::semantics::{
    default_models, find_countermodel, format_assignment, parse_assignment, DEFAULT_ASSIGNMENT_CAP,
};
use osl_core::zoo::{load_model, model_to_string, Strictness};
use osl_core::{
    check_script, decide, expand_derived, normalize_sequent, prove, CutPool, DerivedRule, Error, Model, ModelWitness,
    ProofScript, SearchConfig, SearchOutcome, Sequent,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "osl", version, about = "Orthogonality-space logic: models, validity, proofs")]
pub struct Cli {
    /// Print a single JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a sequent and print it in canonical form.
    Parse(SequentArg),
    /// Print the restricted (negation normal) form of a sequent.
    Nnf(SequentArg),
    /// Print a zoo model in the model file format.
    ModelGen {
        #[arg(long)]
        model: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the O-space axioms on a model.
    ModelCheck {
        #[arg(long)]
        model: String,
    },
    /// Evaluate a sequent under one assignment.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        assign: PathBuf,
        #[command(flatten)]
        sequent: SequentArg,
    },
    /// Check validity in one model by enumerating assignments.
    Valid {
        #[arg(long)]
        model: String,
        #[command(flatten)]
        sequent: SequentArg,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Look for a countermodel across several models.
    Countermodel {
        /// Models to try in order (repeatable); defaults to the built-in list.
        #[arg(long)]
        model: Vec<String>,
        #[command(flatten)]
        sequent: SequentArg,
        #[command(flatten)]
        cap: CapArg,
    },
    /// Search for a derivation.
    Prove {
        #[command(flatten)]
        sequent: SequentArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a proof script.
    CheckProof {
        #[arg(long)]
        proof: PathBuf,
        /// Accept scripts that still contain `Assume` steps.
        #[arg(long)]
        allow_assumptions: bool,
    },
    /// Run the prover and the countermodel search side by side.
    Decide {
        #[arg(long)]
        model: Vec<String>,
        #[command(flatten)]
        sequent: SequentArg,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Expand a derived rule into a primitive proof script.
    Expand {
        /// Rule name, e.g. `LogicalAxiom` or `Contraction`.
        #[arg(long)]
        rule: String,
        /// Meta-variable bindings, e.g. `alpha=p; Gamma=q, r`.
        #[arg(long, default_value = "")]
        bindings: String,
    },
}

#[derive(Debug, Args)]
pub struct SequentArg {
    #[arg(long)]
    pub sequent: String,
}

#[derive(Debug, Args)]
pub struct CapArg {
    /// Largest number of assignments enumerated per model.
    #[arg(long, default_value_t = DEFAULT_ASSIGNMENT_CAP)]
    pub cap: u128,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long, default_value_t = 200_000)]
    pub budget: u64,
    #[arg(long, default_value = "subformulas")]
    pub cut_pool: CutPool,
    /// Disable pruning of subgoals refuted in small models.
    #[arg(long)]
    pub no_pruning: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_depth: self.depth,
            cut_pool: self.cut_pool,
            node_budget: self.budget,
            semantic_pruning: !self.no_pruning,
        }
    }
}

/// What a subcommand produced: an exit code, text for humans and a JSON
/// object for machines.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Self {
        Report {
            code,
            text: text.into(),
            json,
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand,
/// writing the report to `out` and diagnostics to `err`.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let report = execute(&cli.command).unwrap_or_else(error_report);
    let written = if cli.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report.json).expect("json value")
        )
    } else if report.code == EXIT_USAGE {
        write!(err, "{}", report.text)
    } else {
        write!(out, "{}", report.text)
    };
    if written.is_err() {
        return EXIT_USAGE;
    }
    report.code
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn error_report(e: Error) -> Report {
    let code = match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    };
    let kind = if code == EXIT_CAP { "cap" } else { "error" };
    Report::new(
        code,
        format!("error: {e}\n"),
        json!({ "status": kind, "message": e.to_string() }),
    )
}

fn execute(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Parse(s) => {
            let seq = Sequent::parse(&s.sequent)?;
            Ok(Report::new(
                EXIT_OK,
                format!("{seq}\n"),
                json!({ "status": "ok", "sequent": seq.to_string(), "lhs": strings(&seq.lhs), "rhs": strings(&seq.rhs) }),
            ))
        }
        Command::Nnf(s) => {
            let seq = normalize_sequent(&Sequent::parse(&s.sequent)?);
            Ok(Report::new(
                EXIT_OK,
                format!("{seq}\n"),
                json!({ "status": "ok", "sequent": seq.to_string() }),
            ))
        }
        Command::ModelGen { model, out } => model_gen(model, out.as_ref()),
        Command::ModelCheck { model } => model_check(model),
        Command::Eval { model, assign, sequent } => eval(model, assign, &sequent.sequent),
        Command::Valid { model, sequent, cap } => valid(model, &sequent.sequent, cap.cap),
        Command::Countermodel { model, sequent, cap } => countermodel(model, &sequent.sequent, cap.cap),
        Command::Prove { sequent, search } => {
            let seq = normalize_sequent(&Sequent::parse(&sequent.sequent)?);
            Ok(outcome_report(&seq, prove(&seq, &search.config())?))
        }
        Command::CheckProof {
            proof,
            allow_assumptions,
        } => check_proof(proof, *allow_assumptions),
        Command::Decide { model, sequent, search } => {
            let seq = Sequent::parse(&sequent.sequent)?;
            let models = models_or_default(model)?;
            Ok(outcome_report(&seq, decide(&seq, &search.config(), &models)?))
        }
        Command::Expand { rule, bindings } => {
            let rule: DerivedRule = rule.parse()?;
            let bindings = Bindings::parse(bindings)?;
            let script = expand_derived(rule, &bindings)?;
            let text = script.to_string();
            Ok(Report::new(
                EXIT_OK,
                text.clone(),
                json!({ "status": "ok", "rule": rule.name(), "script": text }),
            ))
        }
    }
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn models_or_default(names: &[String]) -> Result<Vec<Model>, Error> {
    if names.is_empty() {
        return Ok(default_models());
    }
    names.iter().map(|n| Model::from_name(n)).collect()
}

fn model_gen(name: &str, out: Option<&PathBuf>) -> Result<Report, Error> {
    let text = match Model::from_name(name)? {
        Model::Finite { space, .. } => model_to_string(&space),
        Model::Rational { .. } => {
            return Err(Error::NotInFamily(format!("`{name}` is not a finite model")));
        }
    };
    let json = json!({ "status": "ok", "model": name, "text": text });
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(Report::new(EXIT_OK, format!("wrote {}\n", path.display()), json))
        }
        None => Ok(Report::new(EXIT_OK, text, json)),
    }
}

fn model_check(name: &str) -> Result<Report, Error> {
    // Files are loaded leniently so that failures can be reported.
    let model = if name.starts_with("zoo:") {
        Model::from_name(name)?
    } else {
        Model::finite(name, load_model(name, Strictness::Lenient)?.space)
    };
    let report = model.check_axioms();
    let laws = model.check_laws();
    let flats = model.family_len();
    let passed = report.all_passed() && laws.is_empty();
    let code = if passed { EXIT_OK } else { EXIT_NEGATIVE };
    let mut text = format!("model {name}: {flats} flats\n{report}");
    if laws.is_empty() {
        text.push_str("laws: pass\n");
    }
    for f in &laws {
        let _ = writeln!(text, "law {}: FAIL ({})", f.law, f.witness);
    }
    let axioms: Vec<Value> = osl_core::Axiom::ALL
        .iter()
        .map(|a| {
            json!({
                "axiom": a.name(),
                "passed": report.passed(*a),
                "witness": report.failure(*a).map(|f| f.witness.clone()),
            })
        })
        .collect();
    let law_failures: Vec<Value> = laws
        .iter()
        .map(|f| json!({ "law": f.law, "witness": f.witness }))
        .collect();
    let status = if passed { "ok" } else { "fail" };
    Ok(Report::new(
        code,
        text,
        json!({ "status": status, "model": name, "flats": flats, "axioms": axioms, "law_failures": law_failures }),
    ))
}

fn eval(name: &str, assign: &PathBuf, sequent: &str) -> Result<Report, Error> {
    let model = Model::from_name(name)?;
    let seq = Sequent::parse(sequent)?;
    let v = parse_assignment(&read_file(assign)?, &model)?;
    let (lhs, rhs) = model.eval_sequent(&v, &seq)?;
    let holds = model.holds(&v, &seq)?;
    let code = if holds { EXIT_OK } else { EXIT_NEGATIVE };
    let text = format!("lhs = {lhs}\nrhs = {rhs}\n{}\n", if holds { "holds" } else { "fails" });
    Ok(Report::new(
        code,
        text,
        json!({ "status": if holds { "holds" } else { "fails" }, "model": name, "sequent": seq.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
    ))
}

fn witness_json(w: &ModelWitness) -> Value {
    let map: serde_json::Map<String, Value> = w
        .witness
        .assignment
        .iter()
        .map(|(a, f)| (a.to_string(), Value::String(f.to_string())))
        .collect();
    json!({
        "model": w.model,
        "assignment": format_assignment(&w.witness.assignment),
        "values": map,
        "lhs": w.witness.lhs.to_string(),
        "rhs": w.witness.rhs.to_string(),
    })
}

fn valid(name: &str, sequent: &str, cap: u128) -> Result<Report, Error> {
    let model = Model::from_name(name)?;
    let seq = Sequent::parse(sequent)?;
    Ok(match model.valid(&seq, cap)? {
        None => Report::new(
            EXIT_OK,
            format!("valid in {name}: {seq}\n"),
            json!({ "status": "valid", "model": name, "sequent": seq.to_string() }),
        ),
        Some(w) => Report::new(
            EXIT_NEGATIVE,
            format!("{w}\n"),
            json!({ "status": "invalid", "model": name, "sequent": seq.to_string(), "witness": witness_json(&w) }),
        ),
    })
}

fn countermodel(names: &[String], sequent: &str, cap: u128) -> Result<Report, Error> {
    let models = models_or_default(names)?;
    let seq = Sequent::parse(sequent)?;
    let found = find_countermodel(&seq, &models, cap)?;
    let tried: Vec<&str> = models.iter().map(Model::label).collect();
    Ok(match found.witness {
        Some(w) => Report::new(
            EXIT_NEGATIVE,
            format!("{w}\n"),
            json!({ "status": "countermodel", "sequent": seq.to_string(), "witness": witness_json(&w), "skipped": found.skipped }),
        ),
        None if found.skipped.is_empty() => Report::new(
            EXIT_OK,
            format!("no countermodel in {}\n", tried.join(", ")),
            json!({ "status": "none", "sequent": seq.to_string(), "models": tried, "skipped": [] }),
        ),
        None => Report::new(
            EXIT_CAP,
            format!(
                "no countermodel found; skipped over the cap: {}\n",
                found.skipped.join(", ")
            ),
            json!({ "status": "cap", "sequent": seq.to_string(), "models": tried, "skipped": found.skipped }),
        ),
    })
}

fn stats_json(s: &SearchStats) -> Value {
    json!({
        "nodes": s.nodes,
        "depth_completed": s.depth_completed,
        "budget_exhausted": s.budget_exhausted,
        "pruned": s.pruned,
        "models_skipped": s.models_skipped,
    })
}

fn outcome_report(seq: &Sequent, outcome: SearchOutcome) -> Report {
    match outcome {
        SearchOutcome::Proved(script) => {
            let text = script.to_string();
            Report::new(
                EXIT_OK,
                text.clone(),
                json!({ "status": "proved", "sequent": seq.to_string(), "height": script.height(), "script": text }),
            )
        }
        SearchOutcome::Refuted(w) => Report::new(
            EXIT_NEGATIVE,
            format!("{w}\n"),
            json!({ "status": "refuted", "sequent": seq.to_string(), "witness": witness_json(&w) }),
        ),
        SearchOutcome::Exhausted(stats) => Report::new(
            EXIT_CAP,
            format!("no result within limits: {stats}\n"),
            json!({ "status": "exhausted", "sequent": seq.to_string(), "stats": stats_json(&stats) }),
        ),
    }
}

fn check_proof(path: &PathBuf, allow_assumptions: bool) -> Result<Report, Error> {
    let script = ProofScript::parse(&read_file(path)?)?;
    let goal = script.goal.to_string();
    if let Err(v) = check_script(&script) {
        return Ok(Report::new(
            EXIT_NEGATIVE,
            format!("rejected: {v}\n"),
            json!({ "status": "rejected", "goal": goal, "step": v.step, "rule": v.rule.map(|r| r.code()), "position": v.position, "message": v.message }),
        ));
    }
    let open: Vec<String> = script.assumptions().iter().map(|s| s.to_string()).collect();
    let mut usage = String::new();
    for (rule, n) in script.rule_usage() {
        let _ = write!(usage, " {}x{n}", rule.code());
    }
    let usage_json: serde_json::Map<String, Value> = script
        .rule_usage()
        .into_iter()
        .map(|(r, n)| (r.code(), json!(n)))
        .collect();
    if !open.is_empty() && !allow_assumptions {
        return Ok(Report::new(
            EXIT_NEGATIVE,
            format!(
                "steps check, but the script rests on assumptions:\n{}\n",
                open.join("\n")
            ),
            json!({ "status": "open", "goal": goal, "assumptions": open, "rules": usage_json }),
        ));
    }
    Ok(Report::new(
        EXIT_OK,
        format!(
            "ok: {goal} ({} step{}, height {}, rules:{usage})\n",
            script.steps.len(),
            if script.steps.len() == 1 { "" } else { "s" },
            script.height()
        ),
        json!({ "status": "ok", "goal": goal, "steps": script.steps.len(), "height": script.height(), "assumptions": open, "rules": usage_json }),
    ))
}
