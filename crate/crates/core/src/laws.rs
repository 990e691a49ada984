//! The algebraic consequences every O-space satisfies, checked over a
//! given list of states and flats.
//!
//! On finite backends the caller passes the whole carrier and family and
//! the check is exhaustive. Each law records at most one failure.

use std::fmt;

use crate::ospace::{check_axioms, OSpace, Restriction};

/// Names of the checked laws, in report order.
pub const LAWS: [&str; 17] = [
    "complement of union",
    "antitone complement",
    "closure operator",
    "closure invariance",
    "complement meets closure in Z",
    "intersection below projection",
    "projection onto superset",
    "orthomodularity",
    "commutation",
    "projection kernel",
    "projection onto implication",
    "distribution over union",
    "nested projection",
    "commuting measurements",
    "right-and exchange",
    "moving over the turnstile",
    "orthogonality through projection",
];

/// The O-subspace law, checked separately by [`check_restrictions`].
pub const RESTRICTION_LAW: &str = "O-subspace";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawFailure {
    pub law: &'static str,
    pub witness: String,
}

impl fmt::Display for LawFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, self.witness)
    }
}

#[derive(Debug, Default)]
struct Failures(Vec<LawFailure>);

impl Failures {
    fn check(&mut self, law: &'static str, ok: bool, witness: impl FnOnce() -> String) {
        if !ok && !self.0.iter().any(|f| f.law == law) {
            self.0.push(LawFailure {
                law,
                witness: witness(),
            });
        }
    }
}

/// Checks every law in [`LAWS`] for all flats (pairs and triples) of
/// `family` and all states in `states`.
pub fn check_laws<S: OSpace>(space: &S, states: &[S::State], family: &[S::Flat]) -> Vec<LawFailure> {
    let mut out = Failures::default();
    let top = space.top();
    let zero = space.zero();
    let c = |a: &S::Flat| space.complement(a);
    let cl = |a: &S::Flat| space.closure(a);
    let p = |a: &S::Flat, b: &S::Flat| space.project(a, b);
    let sub = |a: &S::Flat, b: &S::Flat| space.is_subset(a, b);

    for a in family {
        let ca = c(a);
        let cla = cl(a);
        out.check(LAWS[2], sub(a, &cla) && cl(&cla) == cla, || format!("A = {a:?}"));
        out.check(LAWS[3], c(&cla) == ca, || format!("A = {a:?}"));
        out.check(
            LAWS[4],
            space.intersect(&cla, &ca) == zero && space.join(a, &ca) == top,
            || format!("A = {a:?}"),
        );
    }

    for a in family {
        let ca = c(a);
        for b in family {
            let cb = c(b);
            let ab = p(a, b);
            let ba = p(b, a);
            let ctx = || format!("A = {a:?}, B = {b:?}");

            out.check(LAWS[0], c(&space.union(a, b)) == space.intersect(&ca, &cb), ctx);
            if sub(a, b) {
                out.check(LAWS[1], sub(&cb, &ca) && sub(&cl(a), &cl(b)), ctx);
                out.check(LAWS[6], ba == cl(a) && ab == *a, ctx);
                let rebuilt = space.join(a, &space.intersect(&ca, b));
                out.check(LAWS[7], rebuilt == *b, ctx);
            }
            out.check(LAWS[3], p(&cl(a), b) == ab && p(a, &cl(b)) == ab && cl(&ab) == ab, ctx);
            out.check(LAWS[5], sub(&space.intersect(a, b), &ab), ctx);

            let orth = space.flats_orthogonal(a, b);
            let commute = if orth {
                ab == ba && space.dual_sum(a, b) == space.dual_sum(b, a)
            } else {
                true
            };
            out.check(LAWS[8], orth == (ab == zero) && commute, ctx);

            let b_ca = space.intersect(b, &ca);
            out.check(
                LAWS[9],
                space.intersect(b, &c(&ab)) == b_ca && space.intersect(b, &c(&ba)) == b_ca,
                ctx,
            );

            let imp = space.dual_sum(&ca, b);
            let meet = space.intersect(a, b);
            out.check(LAWS[10], p(a, &imp) == meet && p(&imp, a) == meet, ctx);

            for d in family {
                let ctx3 = || format!("A = {a:?}, B = {b:?}, C = {d:?}");
                let whole = p(&space.union(a, d), b);
                let parts = space.join(&ab, &p(d, b));
                out.check(LAWS[11], whole == parts, ctx3);

                // `d` plays C in the three-flat items.
                if sub(a, b) {
                    let ca_ = p(d, a);
                    out.check(LAWS[12], p(&p(d, b), a) == ca_ && p(&ca_, b) == ca_, ctx3);
                }
                if ab == ba {
                    out.check(LAWS[13], p(&p(d, a), b) == p(&p(d, b), a), ctx3);
                }
                out.check(LAWS[14], (p(&ab, d) == zero) == (p(a, &p(d, b)) == zero), ctx3);
                out.check(LAWS[15], sub(&p(a, &cb), d) == sub(a, &space.dual_sum(b, d)), ctx3);
            }
        }
    }

    for a in family {
        for y in states.iter().filter(|y| space.contains(a, y)) {
            for x in states {
                let direct = space.orthogonal(y, x);
                let through = space.contains(&c(&p(&space.singleton(x), a)), y);
                out.check(LAWS[16], direct == through, || {
                    format!("A = {a:?}, x = {x:?}, y = {y:?}")
                });
            }
        }
    }
    out.0
}

/// For every `C` in `family`: the restriction to `C` passes the axioms,
/// its zero is `Z ∩ C`, and projections computed there agree with the
/// parent's.
pub fn check_restrictions<S: OSpace>(space: &S, states: &[S::State], family: &[S::Flat]) -> Vec<LawFailure> {
    let mut out = Failures::default();
    let zero = space.zero();
    for carrier in family {
        let r = match Restriction::new(space, carrier.clone(), family) {
            Ok(r) => r,
            Err(e) => {
                out.check(RESTRICTION_LAW, false, || format!("C = {carrier:?}: {e}"));
                continue;
            }
        };
        let sub_family = r.family(family);
        let sub_states = r.states(states);
        let report = check_axioms(&r, &sub_states, &sub_family);
        out.check(RESTRICTION_LAW, report.all_passed(), || {
            let failed: Vec<String> = report
                .failures
                .iter()
                .map(|f| format!("{} fails ({})", f.axiom, f.witness))
                .collect();
            format!("C = {carrier:?}: {}", failed.join("; "))
        });
        out.check(RESTRICTION_LAW, r.zero() == space.intersect(&zero, carrier), || {
            format!("C = {carrier:?}: Z_C differs from Z ∩ C")
        });
        for a in &sub_family {
            for b in &sub_family {
                out.check(RESTRICTION_LAW, r.project(a, b) == space.project(a, b), || {
                    format!("C = {carrier:?}, A = {a:?}, B = {b:?}: projections differ")
                });
            }
        }
    }
    out.0
}
