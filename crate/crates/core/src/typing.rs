//! Syntax-directed type checking for values and computations.

use std::fmt;

use thiserror::Error;

use crate::syntax::{CompTerm, CompType, EffectSignature, Ident, ValueTerm, ValueType};
use crate::text;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{name}` at {path}")]
    UnboundVariable { name: Ident, path: TermPath },
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch {
        path: TermPath,
        expected: String,
        found: String,
    },
    #[error("`{construct}` is not allowed under the {sig} signature (at {path})")]
    EffectNotAllowed {
        sig: EffectSignature,
        construct: &'static str,
        path: TermPath,
    },
    #[error("variable `{0}` appears twice in the typing context")]
    DuplicateVariable(Ident),
}

/// Location inside a term, as the list of constructor fields walked from
/// the root.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermPath(pub Vec<&'static str>);

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<root>");
        }
        f.write_str(&self.0.join("/"))
    }
}

/// An ordered typing context. Lookups search from the most recent entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TypingContext {
    entries: Vec<(Ident, ValueType)>,
}

impl TypingContext {
    pub fn empty() -> Self {
        TypingContext::default()
    }

    /// Builds a context, rejecting duplicate names.
    pub fn new(entries: Vec<(Ident, ValueType)>) -> Result<Self, TypeError> {
        for (i, (x, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(y, _)| y == x) {
                return Err(TypeError::DuplicateVariable(x.clone()));
            }
        }
        Ok(TypingContext { entries })
    }

    pub fn entries(&self) -> &[(Ident, ValueType)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, x: &Ident) -> Option<&ValueType> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    /// Extends the context; a later entry shadows an earlier one with the
    /// same name.
    pub fn extended(&self, x: Ident, ty: ValueType) -> Self {
        let mut entries = self.entries.clone();
        entries.push((x, ty));
        TypingContext { entries }
    }
}

pub fn check_value(
    ctx: &TypingContext,
    v: &ValueTerm,
    sig: EffectSignature,
) -> Result<ValueType, TypeError> {
    Checker::new(sig).value(&mut ctx.entries.clone(), v)
}

pub fn check_comp(
    ctx: &TypingContext,
    m: &CompTerm,
    sig: EffectSignature,
) -> Result<CompType, TypeError> {
    Checker::new(sig).comp(&mut ctx.entries.clone(), m)
}

/// Checks a computation with every effect construct permitted.
pub fn check_comp_any(ctx: &TypingContext, m: &CompTerm) -> Result<CompType, TypeError> {
    let mut checker = Checker::new(EffectSignature::Pure);
    checker.permissive = true;
    checker.comp(&mut ctx.entries.clone(), m)
}

struct Checker {
    sig: EffectSignature,
    permissive: bool,
    path: Vec<&'static str>,
}

type Env = Vec<(Ident, ValueType)>;

fn describe_v(t: &ValueType) -> String {
    text::print_value_type(t)
}

fn describe_c(t: &CompType) -> String {
    text::print_comp_type(t)
}

impl Checker {
    fn new(sig: EffectSignature) -> Self {
        Checker {
            sig,
            permissive: false,
            path: Vec::new(),
        }
    }

    fn here(&self) -> TermPath {
        TermPath(self.path.clone())
    }

    fn mismatch(&self, expected: String, found: String) -> TypeError {
        TypeError::TypeMismatch {
            path: self.here(),
            expected,
            found,
        }
    }

    fn at<T>(&mut self, step: &'static str, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(step);
        let out = f(self);
        self.path.pop();
        out
    }

    fn gate(&self, allowed: bool, construct: &'static str) -> Result<(), TypeError> {
        if allowed || self.permissive {
            Ok(())
        } else {
            Err(TypeError::EffectNotAllowed {
                sig: self.sig,
                construct,
                path: self.here(),
            })
        }
    }

    fn value(&mut self, env: &mut Env, v: &ValueTerm) -> Result<ValueType, TypeError> {
        match v {
            ValueTerm::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| TypeError::UnboundVariable {
                    name: x.clone(),
                    path: self.here(),
                }),
            ValueTerm::Unit => Ok(ValueType::Unit),
            ValueTerm::True | ValueTerm::False => Ok(ValueType::Bool),
            ValueTerm::Pair(a, b) => {
                let ta = self.at("pair.1", |c| c.value(env, a))?;
                let tb = self.at("pair.2", |c| c.value(env, b))?;
                Ok(ValueType::prod(ta, tb))
            }
            ValueTerm::Thunk(m) => {
                let c = self.at("thunk", |c| c.comp(env, m))?;
                Ok(ValueType::thunk(c))
            }
        }
    }

    fn bind<T>(
        &mut self,
        env: &mut Env,
        vars: Vec<(Ident, ValueType)>,
        f: impl FnOnce(&mut Self, &mut Env) -> T,
    ) -> T {
        let depth = env.len();
        env.extend(vars);
        let out = f(self, env);
        env.truncate(depth);
        out
    }

    fn comp(&mut self, env: &mut Env, m: &CompTerm) -> Result<CompType, TypeError> {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.comp_inner(env, m))
    }

    fn comp_inner(&mut self, env: &mut Env, m: &CompTerm) -> Result<CompType, TypeError> {
        match m {
            CompTerm::CompPair(a, b) => {
                let ca = self.at("cpair.1", |c| c.comp(env, a))?;
                let cb = self.at("cpair.2", |c| c.comp(env, b))?;
                Ok(CompType::comp_prod(ca, cb))
            }
            CompTerm::Proj(i, a) => {
                let ca = self.at("proj", |c| c.comp(env, a))?;
                match ca {
                    CompType::CompProd(c1, c2) => Ok(if i.index() == 1 { *c1 } else { *c2 }),
                    other => Err(self.mismatch("a computation product".into(), describe_c(&other))),
                }
            }
            CompTerm::Lam(x, ty, body) => {
                let cb = self.at("lam.body", |c| {
                    c.bind(env, vec![(x.clone(), ty.clone())], |c, env| c.comp(env, body))
                })?;
                Ok(CompType::arrow(ty.clone(), cb))
            }
            CompTerm::Push(v, a) => {
                let tv = self.at("push.arg", |c| c.value(env, v))?;
                let ca = self.at("push.fun", |c| c.comp(env, a))?;
                match ca {
                    CompType::Arrow(dom, cod) => {
                        if *dom == tv {
                            Ok(*cod)
                        } else {
                            Err(self.at("push.arg", |c| c.mismatch(describe_v(&dom), describe_v(&tv))))
                        }
                    }
                    other => Err(self.at("push.fun", |c| {
                        c.mismatch("a function computation".into(), describe_c(&other))
                    })),
                }
            }
            CompTerm::Return(v) => {
                let tv = self.at("return", |c| c.value(env, v))?;
                Ok(CompType::free(tv))
            }
            CompTerm::To(a, x, b) => {
                let ca = self.at("to.bound", |c| c.comp(env, a))?;
                let tx = match ca {
                    CompType::Free(t) => *t,
                    other => {
                        return Err(self.at("to.bound", |c| {
                            c.mismatch("a returner type".into(), describe_c(&other))
                        }))
                    }
                };
                self.at("to.body", |c| {
                    c.bind(env, vec![(x.clone(), tx)], |c, env| c.comp(env, b))
                })
            }
            CompTerm::MatchPair(v, x1, x2, body) => {
                let tv = self.at("match.scrutinee", |c| c.value(env, v))?;
                match tv {
                    ValueType::Prod(t1, t2) => self.at("match.body", |c| {
                        c.bind(env, vec![(x1.clone(), *t1), (x2.clone(), *t2)], |c, env| {
                            c.comp(env, body)
                        })
                    }),
                    other => Err(self.at("match.scrutinee", |c| {
                        c.mismatch("a value product".into(), describe_v(&other))
                    })),
                }
            }
            CompTerm::If(v, a, b) => {
                let tv = self.at("if.cond", |c| c.value(env, v))?;
                if tv != ValueType::Bool {
                    return Err(self.at("if.cond", |c| c.mismatch("bool".into(), describe_v(&tv))));
                }
                let ca = self.at("if.then", |c| c.comp(env, a))?;
                let cb = self.at("if.else", |c| c.comp(env, b))?;
                if ca != cb {
                    return Err(self.at("if.else", |c| c.mismatch(describe_c(&ca), describe_c(&cb))));
                }
                Ok(ca)
            }
            CompTerm::Force(v) => {
                let tv = self.at("force", |c| c.value(env, v))?;
                match tv {
                    ValueType::Thunk(c) => Ok(*c),
                    other => Err(self.at("force", |c| {
                        c.mismatch("a thunk type".into(), describe_v(&other))
                    })),
                }
            }
            CompTerm::Rec(x, ty, body) => {
                self.gate(self.sig.allows_rec(), "rec")?;
                let cb = self.at("rec.body", |c| {
                    c.bind(env, vec![(x.clone(), ValueType::thunk(ty.clone()))], |c, env| {
                        c.comp(env, body)
                    })
                })?;
                if cb != *ty {
                    return Err(self.at("rec.body", |c| c.mismatch(describe_c(ty), describe_c(&cb))));
                }
                Ok(cb)
            }
            CompTerm::Fail(ty) => {
                self.gate(self.sig.allows_nondet(), "fail")?;
                Ok(ty.clone())
            }
            CompTerm::Or(a, b) => {
                self.gate(self.sig.allows_nondet(), "or")?;
                let ca = self.at("or.1", |c| c.comp(env, a))?;
                let cb = self.at("or.2", |c| c.comp(env, b))?;
                if ca != cb {
                    return Err(self.at("or.2", |c| c.mismatch(describe_c(&ca), describe_c(&cb))));
                }
                Ok(ca)
            }
        }
    }
}
