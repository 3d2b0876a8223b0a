//! Concrete syntax of the source language.
//!
//! ```text
//! t ::= unit | bool | (* t t) | (-> t t)
//! e ::= x | sunit | strue | sfalse | (spair e e) | (sfst e) | (ssnd e)
//!     | (sif e e e) | (slam x t e) | (sapp e e) | (srec f t t x e)
//!     | (sfail t) | (sor e e)
//! ctx ::= ((x t) ...)
//! ```
//!
//! Source identifiers may not contain `%`, which is reserved for names
//! generated during translation.

use super::{SrcContext, SrcExpr, SrcType};
use crate::sexpr::{self, ParseError, Sexp};
use crate::syntax::Ident;
use crate::text::is_identifier;

const KEYWORDS: &[&str] = &[
    "unit", "bool", "sunit", "strue", "sfalse", "spair", "sfst", "ssnd", "sif", "slam", "sapp",
    "srec", "sfail", "sor",
];

fn err(message: impl Into<String>) -> ParseError {
    ParseError::new(0, message)
}

fn ident(s: &Sexp) -> Result<Ident, ParseError> {
    match s {
        Sexp::Atom(a) if is_identifier(a) && !a.contains('%') && !KEYWORDS.contains(&a.as_str()) => {
            Ok(Ident::new(a))
        }
        other => Err(err(format!("expected a source identifier, found `{other}`"))),
    }
}

fn expect(items: &[Sexp], n: usize, what: &str) -> Result<(), ParseError> {
    if items.len() == n + 1 {
        Ok(())
    } else {
        Err(err(format!("`{what}` takes {n} argument(s), found {}", items.len() - 1)))
    }
}

pub fn type_from_sexp(s: &Sexp) -> Result<SrcType, ParseError> {
    match s {
        Sexp::Atom(a) if a == "unit" => Ok(SrcType::Unit),
        Sexp::Atom(a) if a == "bool" => Ok(SrcType::Bool),
        Sexp::List(items) => match items.first() {
            Some(Sexp::Atom(h)) if h == "*" => {
                expect(items, 2, "*")?;
                Ok(SrcType::prod(type_from_sexp(&items[1])?, type_from_sexp(&items[2])?))
            }
            Some(Sexp::Atom(h)) if h == "->" => {
                expect(items, 2, "->")?;
                Ok(SrcType::arrow(type_from_sexp(&items[1])?, type_from_sexp(&items[2])?))
            }
            _ => Err(err(format!("not a source type: `{s}`"))),
        },
        _ => Err(err(format!("not a source type: `{s}`"))),
    }
}

pub fn expr_from_sexp(s: &Sexp) -> Result<SrcExpr, ParseError> {
    match s {
        Sexp::Atom(a) => match a.as_str() {
            "sunit" => Ok(SrcExpr::Unit),
            "strue" => Ok(SrcExpr::True),
            "sfalse" => Ok(SrcExpr::False),
            _ => Ok(SrcExpr::Var(ident(s)?)),
        },
        Sexp::List(items) => {
            let Some(Sexp::Atom(h)) = items.first() else {
                return Err(err(format!("not a source expression: `{s}`")));
            };
            let h = h.as_str();
            match h {
                "spair" => {
                    expect(items, 2, h)?;
                    Ok(SrcExpr::pair(expr_from_sexp(&items[1])?, expr_from_sexp(&items[2])?))
                }
                "sfst" => {
                    expect(items, 1, h)?;
                    Ok(SrcExpr::fst(expr_from_sexp(&items[1])?))
                }
                "ssnd" => {
                    expect(items, 1, h)?;
                    Ok(SrcExpr::snd(expr_from_sexp(&items[1])?))
                }
                "sif" => {
                    expect(items, 3, h)?;
                    Ok(SrcExpr::if_(
                        expr_from_sexp(&items[1])?,
                        expr_from_sexp(&items[2])?,
                        expr_from_sexp(&items[3])?,
                    ))
                }
                "slam" => {
                    expect(items, 3, h)?;
                    Ok(SrcExpr::lam(
                        ident(&items[1])?,
                        type_from_sexp(&items[2])?,
                        expr_from_sexp(&items[3])?,
                    ))
                }
                "sapp" => {
                    expect(items, 2, h)?;
                    Ok(SrcExpr::app(expr_from_sexp(&items[1])?, expr_from_sexp(&items[2])?))
                }
                "srec" => {
                    expect(items, 5, h)?;
                    Ok(SrcExpr::rec_fun(
                        ident(&items[1])?,
                        type_from_sexp(&items[2])?,
                        type_from_sexp(&items[3])?,
                        ident(&items[4])?,
                        expr_from_sexp(&items[5])?,
                    ))
                }
                "sfail" => {
                    expect(items, 1, h)?;
                    Ok(SrcExpr::Fail(type_from_sexp(&items[1])?))
                }
                "sor" => {
                    expect(items, 2, h)?;
                    Ok(SrcExpr::or(expr_from_sexp(&items[1])?, expr_from_sexp(&items[2])?))
                }
                _ => Err(err(format!("unknown source form `{h}`"))),
            }
        }
    }
}

pub fn context_from_sexp(s: &Sexp) -> Result<SrcContext, ParseError> {
    let Sexp::List(items) = s else {
        return Err(err("a context is a list of (name type) entries"));
    };
    let mut entries = Vec::new();
    for item in items {
        match item {
            Sexp::List(pair) if pair.len() == 2 => {
                entries.push((ident(&pair[0])?, type_from_sexp(&pair[1])?));
            }
            other => return Err(err(format!("bad context entry `{other}`"))),
        }
    }
    SrcContext::new(entries).map_err(|e| err(e.to_string()))
}

pub fn parse_type(input: &str) -> Result<SrcType, ParseError> {
    type_from_sexp(&sexpr::parse(input)?)
}

pub fn parse_expr(input: &str) -> Result<SrcExpr, ParseError> {
    expr_from_sexp(&sexpr::parse(input)?)
}

pub fn parse_context(input: &str) -> Result<SrcContext, ParseError> {
    context_from_sexp(&sexpr::parse(input)?)
}

fn atom(s: &str) -> Sexp {
    Sexp::Atom(s.to_string())
}

pub fn type_to_sexp(t: &SrcType) -> Sexp {
    match t {
        SrcType::Unit => atom("unit"),
        SrcType::Bool => atom("bool"),
        SrcType::Prod(a, b) => Sexp::List(vec![atom("*"), type_to_sexp(a), type_to_sexp(b)]),
        SrcType::Arrow(a, b) => Sexp::List(vec![atom("->"), type_to_sexp(a), type_to_sexp(b)]),
    }
}

pub fn expr_to_sexp(e: &SrcExpr) -> Sexp {
    let l = Sexp::List;
    match e {
        SrcExpr::Var(x) => atom(x.as_str()),
        SrcExpr::Unit => atom("sunit"),
        SrcExpr::True => atom("strue"),
        SrcExpr::False => atom("sfalse"),
        SrcExpr::Pair(a, b) => l(vec![atom("spair"), expr_to_sexp(a), expr_to_sexp(b)]),
        SrcExpr::Fst(a) => l(vec![atom("sfst"), expr_to_sexp(a)]),
        SrcExpr::Snd(a) => l(vec![atom("ssnd"), expr_to_sexp(a)]),
        SrcExpr::If(c, a, b) => l(vec![atom("sif"), expr_to_sexp(c), expr_to_sexp(a), expr_to_sexp(b)]),
        SrcExpr::Lam(x, t, b) => l(vec![atom("slam"), atom(x.as_str()), type_to_sexp(t), expr_to_sexp(b)]),
        SrcExpr::App(f, a) => l(vec![atom("sapp"), expr_to_sexp(f), expr_to_sexp(a)]),
        SrcExpr::RecFun { f, arg, res, x, body } => l(vec![
            atom("srec"),
            atom(f.as_str()),
            type_to_sexp(arg),
            type_to_sexp(res),
            atom(x.as_str()),
            expr_to_sexp(body),
        ]),
        SrcExpr::Fail(t) => l(vec![atom("sfail"), type_to_sexp(t)]),
        SrcExpr::Or(a, b) => l(vec![atom("sor"), expr_to_sexp(a), expr_to_sexp(b)]),
    }
}

pub fn print_type(t: &SrcType) -> String {
    type_to_sexp(t).to_string()
}

pub fn print_expr(e: &SrcExpr) -> String {
    expr_to_sexp(e).to_string()
}

pub fn print_context(ctx: &SrcContext) -> String {
    Sexp::List(
        ctx.entries()
            .iter()
            .map(|(x, t)| Sexp::List(vec![atom(x.as_str()), type_to_sexp(t)]))
            .collect(),
    )
    .to_string()
}
