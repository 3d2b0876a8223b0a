//! Big-step evaluation with fuel.
//!
//! Every derivation of `M ⇓ R` is explored. Each inference-rule
//! application costs one unit of fuel along its branch; a branch that runs
//! dry contributes no terminal and marks the outcome as exhausted. A branch
//! whose next substitution would build a term larger than
//! [`MAX_TERM_SIZE`] nodes is cut the same way: call-by-name arguments are
//! copied into every use, so term size can grow exponentially in fuel.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::report::{CheckReport, Instance, ProgramRelation};
use crate::subst::{free_occurrences, substitute, substitute1};
use crate::syntax::{CompTerm, CompType, Ident, ValueTerm};
use crate::text;
use crate::typing::{check_comp_any, TypeError, TypingContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("ill-typed program: {0}")]
    IllTyped(#[from] TypeError),
    #[error("program has type {0}, expected a returner type")]
    NotReturner(String),
    #[error("fuel must be positive")]
    ZeroFuel,
    #[error("evaluation is stuck at {0}")]
    Stuck(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalOutcome {
    pub terminals: BTreeSet<CompTerm>,
    pub exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResultSet {
    pub values: BTreeSet<ValueTerm>,
    pub exhausted: bool,
}

impl ResultSet {
    pub fn render(&self) -> String {
        let vals: Vec<String> = self.values.iter().map(text::print_value).collect();
        format!(
            "{{{}}}{}",
            vals.join(", "),
            if self.exhausted { " (fuel exhausted)" } else { "" }
        )
    }
}

/// Type-checks the closed computation `m` and evaluates it.
pub fn eval(m: &CompTerm, fuel: u64) -> Result<EvalOutcome, EvalError> {
    check_comp_any(&TypingContext::empty(), m)?;
    eval_unchecked(m, fuel)
}

/// Evaluates without type checking first; ill-typed input may report
/// [`EvalError::Stuck`].
pub fn eval_unchecked(m: &CompTerm, fuel: u64) -> Result<EvalOutcome, EvalError> {
    if fuel == 0 {
        return Err(EvalError::ZeroFuel);
    }
    let mut machine = Machine { exhausted: false };
    let branches = machine.run(m, fuel)?;
    Ok(EvalOutcome {
        terminals: branches.into_iter().map(|(t, _)| t).collect(),
        exhausted: machine.exhausted,
    })
}

/// Evaluates a closed program of returner type and collects the returned
/// values.
pub fn results(m: &CompTerm, fuel: u64) -> Result<ResultSet, EvalError> {
    let ty = check_comp_any(&TypingContext::empty(), m)?;
    if !matches!(ty, CompType::Free(_)) {
        return Err(EvalError::NotReturner(text::print_comp_type(&ty)));
    }
    let out = eval_unchecked(m, fuel)?;
    let values = out
        .terminals
        .into_iter()
        .map(|t| match t {
            CompTerm::Return(v) => Ok(v),
            other => Err(EvalError::Stuck(text::print_comp(&other))),
        })
        .collect::<Result<_, _>>()?;
    Ok(ResultSet {
        values,
        exhausted: out.exhausted,
    })
}

/// Decides the program relation `rel` between two closed programs of type
/// `F bool`. A side that exhausts its fuel is read as divergent where that
/// cannot flip the verdict; otherwise the verdict is inconclusive.
pub fn relate_programs(
    left: &CompTerm,
    right: &CompTerm,
    rel: ProgramRelation,
    fuel: u64,
) -> Result<CheckReport, EvalError> {
    let name = format!("relate[{rel}]");
    let l = results(left, fuel)?;
    let r = results(right, fuel)?;
    let instance = || Instance::Relation {
        left: text::print_comp(left),
        right: text::print_comp(right),
        relation: rel,
        fuel,
    };
    let detail = format!("left {} right {}", l.render(), r.render());
    let report = match rel {
        ProgramRelation::Indiscrete => CheckReport::pass(name),
        ProgramRelation::ResultEq => {
            if l.values.intersection(&r.values).next().is_some() {
                CheckReport::pass(name)
            } else if !l.exhausted && !r.exhausted {
                CheckReport::fail(name, Some(instance()), format!("no common result: {detail}"))
            } else {
                CheckReport::inconclusive(name, format!("no common result yet: {detail}"))
            }
        }
        ProgramRelation::ResultImpl => match l.values.difference(&r.values).next() {
            Some(v) if !r.exhausted => CheckReport::fail(
                name,
                Some(instance()),
                format!(
                    "left returns {} but right does not: {detail}",
                    text::print_value(v)
                ),
            ),
            Some(_) => CheckReport::inconclusive(name, format!("right exhausted: {detail}")),
            None if l.exhausted => {
                CheckReport::pass(name).with_note(format!("left exhausted fuel: {detail}"))
            }
            None => CheckReport::pass(name),
        },
    };
    Ok(report)
}

/// Largest term a substitution may build during evaluation.
pub const MAX_TERM_SIZE: usize = 1 << 16;

type Branches = Vec<(CompTerm, u64)>;

/// Adds a branch result, keeping only the largest remaining fuel per
/// terminal.
fn merge(into: &mut Branches, term: CompTerm, fuel: u64) {
    if let Some(slot) = into.iter_mut().find(|(t, _)| *t == term) {
        slot.1 = slot.1.max(fuel);
    } else {
        into.push((term, fuel));
    }
}

struct Machine {
    exhausted: bool,
}

impl Machine {
    fn run(&mut self, m: &CompTerm, fuel: u64) -> Result<Branches, EvalError> {
        stacker::maybe_grow(128 * 1024, 8 * 1024 * 1024, || self.step(m, fuel))
    }

    /// `body[v/x]`, or `None` (and the outcome marked exhausted) if the
    /// result would exceed [`MAX_TERM_SIZE`].
    fn bounded_subst(&mut self, body: &CompTerm, sub: &[(&Ident, &ValueTerm)]) -> Option<CompTerm> {
        let mut size = body.size();
        for (x, v) in sub {
            let n = free_occurrences(body, x);
            if n > 0 {
                size = size.saturating_add(n.saturating_mul(v.size()));
            }
        }
        if size > MAX_TERM_SIZE {
            self.exhausted = true;
            return None;
        }
        Some(match sub {
            [(x, v)] => substitute1(body, x, v),
            _ => substitute(body, &sub.iter().map(|(x, v)| ((*x).clone(), (*v).clone())).collect()),
        })
    }

    /// Runs `next` on every terminal reached by `m`.
    fn then(
        &mut self,
        m: &CompTerm,
        fuel: u64,
        mut next: impl FnMut(&mut Self, CompTerm, u64) -> Result<Branches, EvalError>,
    ) -> Result<Branches, EvalError> {
        let mut out = Branches::new();
        for (t, f) in self.run(m, fuel)? {
            for (r, g) in next(self, t, f)? {
                merge(&mut out, r, g);
            }
        }
        Ok(out)
    }

    fn step(&mut self, m: &CompTerm, fuel: u64) -> Result<Branches, EvalError> {
        if fuel == 0 {
            self.exhausted = true;
            return Ok(Vec::new());
        }
        let fuel = fuel - 1;
        let stuck = |t: &CompTerm| EvalError::Stuck(text::print_comp(t));
        match m {
            CompTerm::CompPair(..) | CompTerm::Lam(..) | CompTerm::Return(_) => {
                Ok(vec![(m.clone(), fuel)])
            }
            CompTerm::Proj(i, n) => self.then(n, fuel, |this, t, f| match t {
                CompTerm::CompPair(a, b) => {
                    let chosen = if i.index() == 1 { a } else { b };
                    this.run(&chosen, f)
                }
                other => Err(stuck(&other)),
            }),
            CompTerm::Push(v, n) => self.then(n, fuel, |this, t, f| match t {
                CompTerm::Lam(x, _, body) => match this.bounded_subst(&body, &[(&x, v)]) {
                    Some(next) => this.run(&next, f),
                    None => Ok(Vec::new()),
                },
                other => Err(stuck(&other)),
            }),
            CompTerm::To(n, x, body) => self.then(n, fuel, |this, t, f| match t {
                CompTerm::Return(v) => match this.bounded_subst(body, &[(x, &v)]) {
                    Some(next) => this.run(&next, f),
                    None => Ok(Vec::new()),
                },
                other => Err(stuck(&other)),
            }),
            CompTerm::Force(v) => match v {
                ValueTerm::Thunk(n) => self.run(n, fuel),
                _ => Err(stuck(m)),
            },
            CompTerm::If(v, a, b) => match v {
                ValueTerm::True => self.run(a, fuel),
                ValueTerm::False => self.run(b, fuel),
                _ => Err(stuck(m)),
            },
            CompTerm::MatchPair(v, x1, x2, body) => match v {
                ValueTerm::Pair(a, b) => match self.bounded_subst(body, &[(x1, &**a), (x2, &**b)]) {
                    Some(next) => self.run(&next, fuel),
                    None => Ok(Vec::new()),
                },
                _ => Err(stuck(m)),
            },
            CompTerm::Rec(x, _, body) => match self.bounded_subst(body, &[(x, &ValueTerm::thunk(m.clone()))]) {
                Some(unfolded) => self.run(&unfolded, fuel),
                None => Ok(Vec::new()),
            },
            CompTerm::Fail(_) => Ok(Vec::new()),
            CompTerm::Or(a, b) => {
                let mut out = self.run(a, fuel)?;
                for (t, f) in self.run(b, fuel)? {
                    merge(&mut out, t, f);
                }
                Ok(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ValueType;
    use crate::text::parse_comp;

    fn p(s: &str) -> CompTerm {
        parse_comp(s).unwrap()
    }

    #[test]
    fn conditional() {
        let out = eval(&p("(if true (return true) (return false))"), 10).unwrap();
        assert_eq!(out.terminals, [p("(return true)")].into());
        assert!(!out.exhausted);
    }

    #[test]
    fn force_thunk() {
        let out = eval(&p("(force (thunk (return false)))"), 10).unwrap();
        assert_eq!(out.terminals, [p("(return false)")].into());
    }

    #[test]
    fn divergence_exhausts() {
        let m = p("(rec x (F bool) (force x))");
        for fuel in [1000, 2000] {
            let out = eval(&m, fuel).unwrap();
            assert!(out.terminals.is_empty());
            assert!(out.exhausted);
        }
    }

    // The argument thunk mentions the previous one twice, so it doubles
    // in size on every call.
    #[test]
    fn doubling_argument_is_cut_by_size() {
        let m = p(
            "(push (thunk (return ())) (rec f (-> (U (F unit)) (F bool)) \
             (lam x (U (F unit)) (push (thunk (to (force x) a (force x))) (force f)))))",
        );
        let out = eval(&m, 100_000).unwrap();
        assert!(out.terminals.is_empty() && out.exhausted);
    }

    #[test]
    fn both_choices_are_collected() {
        let r = results(&p("(or (return true) (return false))"), 10).unwrap();
        assert_eq!(r.values, [ValueTerm::True, ValueTerm::False].into());
        assert!(!r.exhausted);
    }

    #[test]
    fn fail_has_no_result_and_does_not_exhaust() {
        let r = results(&p("(fail (F bool))"), 10).unwrap();
        assert!(r.values.is_empty());
        assert!(!r.exhausted);
    }

    #[test]
    fn sequencing_substitutes() {
        let r = results(&p("(to (return true) x (return x))"), 10).unwrap();
        assert_eq!(r.values, [ValueTerm::True].into());
    }

    #[test]
    fn terminals_are_not_evaluated_inside() {
        let m = p("(lam x bool (force (thunk (return x))))");
        let out = eval(&m, 1).unwrap();
        assert_eq!(out.terminals, [m].into());
    }

    #[test]
    fn fuel_counts_rule_applications() {
        // force, then return: two rule applications.
        let m = p("(force (thunk (return true)))");
        assert!(eval(&m, 1).unwrap().exhausted);
        assert!(!eval(&m, 2).unwrap().exhausted);
    }

    #[test]
    fn projection_and_match() {
        let m = p("(to (proj 2 (cpair (return true) (return (pair false ())))) q (match q a b (return a)))");
        assert_eq!(results(&m, 100).unwrap().values, [ValueTerm::False].into());
    }

    #[test]
    fn results_rejects_non_returners() {
        let m = CompTerm::lam("x", ValueType::Bool, CompTerm::ret(ValueTerm::var("x")));
        assert!(matches!(results(&m, 10), Err(EvalError::NotReturner(_))));
        assert!(matches!(eval(&p("(return y)"), 10), Err(EvalError::IllTyped(_))));
        assert!(matches!(eval(&p("(return true)"), 0), Err(EvalError::ZeroFuel)));
    }

    #[test]
    fn relations() {
        let t = p("(return true)");
        let f = p("(return false)");
        assert!(relate_programs(&t, &t, ProgramRelation::ResultEq, 10).unwrap().is_pass());
        let r = relate_programs(&t, &f, ProgramRelation::ResultImpl, 10).unwrap();
        assert!(r.is_fail());
        assert!(r.witness.unwrap().detail.contains("left returns true"));
        assert!(relate_programs(&t, &f, ProgramRelation::Indiscrete, 10).unwrap().is_pass());
    }

    #[test]
    fn relation_with_exhausted_sides() {
        let omega = p("(rec x (F bool) (force x))");
        let t = p("(return true)");
        let r = relate_programs(&omega, &t, ProgramRelation::ResultImpl, 100).unwrap();
        assert!(r.is_pass());
        let r = relate_programs(&t, &omega, ProgramRelation::ResultImpl, 100).unwrap();
        assert_eq!(r.verdict, crate::report::Verdict::Inconclusive);
        let r = relate_programs(&t, &omega, ProgramRelation::ResultEq, 100).unwrap();
        assert_eq!(r.verdict, crate::report::Verdict::Inconclusive);
    }
}
