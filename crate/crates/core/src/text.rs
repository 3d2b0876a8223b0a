//! Concrete s-expression syntax for CBPV types and terms.
//!
//! ```text
//! A ::= unit | bool | (* A A) | (U C)
//! C ::= (F A) | (& C C) | (-> A C)
//! V ::= x | () | true | false | (pair V V) | (thunk M)
//! M ::= (cpair M M) | (proj 1 M) | (proj 2 M) | (lam x A M) | (push V M)
//!     | (return V) | (to M x M) | (match V x x M) | (if V M M)
//!     | (force V) | (rec x C M) | (fail C) | (or M M)
//! ```

use crate::sexpr::{self, ParseError, Sexp};
use crate::syntax::{CompTerm, CompType, Component, Ident, ValueTerm, ValueType};

const RESERVED: &[&str] = &[
    "unit", "bool", "true", "false", "pair", "thunk", "cpair", "proj", "lam", "push", "return",
    "to", "match", "if", "force", "rec", "fail", "or", "U", "F",
];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '%')
}

fn err(message: impl Into<String>) -> ParseError {
    ParseError::new(0, message)
}

fn ident(s: &Sexp) -> Result<Ident, ParseError> {
    match s {
        Sexp::Atom(a) if is_identifier(a) && !RESERVED.contains(&a.as_str()) => Ok(Ident::new(a)),
        other => Err(err(format!("expected an identifier, found `{other}`"))),
    }
}

fn head(items: &[Sexp]) -> Option<&str> {
    match items.first() {
        Some(Sexp::Atom(a)) => Some(a.as_str()),
        _ => None,
    }
}

fn arity(items: &[Sexp], n: usize, what: &str) -> Result<(), ParseError> {
    if items.len() == n + 1 {
        Ok(())
    } else {
        Err(err(format!("`{what}` takes {n} argument(s), found {}", items.len() - 1)))
    }
}

pub fn value_type_from_sexp(s: &Sexp) -> Result<ValueType, ParseError> {
    match s {
        Sexp::Atom(a) if a == "unit" => Ok(ValueType::Unit),
        Sexp::Atom(a) if a == "bool" => Ok(ValueType::Bool),
        Sexp::List(items) => match head(items) {
            Some("*") => {
                arity(items, 2, "*")?;
                Ok(ValueType::prod(
                    value_type_from_sexp(&items[1])?,
                    value_type_from_sexp(&items[2])?,
                ))
            }
            Some("U") => {
                arity(items, 1, "U")?;
                Ok(ValueType::thunk(comp_type_from_sexp(&items[1])?))
            }
            _ => Err(err(format!("not a value type: `{s}`"))),
        },
        _ => Err(err(format!("not a value type: `{s}`"))),
    }
}

pub fn comp_type_from_sexp(s: &Sexp) -> Result<CompType, ParseError> {
    let Sexp::List(items) = s else {
        return Err(err(format!("not a computation type: `{s}`")));
    };
    match head(items) {
        Some("F") => {
            arity(items, 1, "F")?;
            Ok(CompType::free(value_type_from_sexp(&items[1])?))
        }
        Some("&") => {
            arity(items, 2, "&")?;
            Ok(CompType::comp_prod(
                comp_type_from_sexp(&items[1])?,
                comp_type_from_sexp(&items[2])?,
            ))
        }
        Some("->") => {
            arity(items, 2, "->")?;
            Ok(CompType::arrow(
                value_type_from_sexp(&items[1])?,
                comp_type_from_sexp(&items[2])?,
            ))
        }
        _ => Err(err(format!("not a computation type: `{s}`"))),
    }
}

pub fn value_from_sexp(s: &Sexp) -> Result<ValueTerm, ParseError> {
    match s {
        Sexp::Atom(a) if a == "true" => Ok(ValueTerm::True),
        Sexp::Atom(a) if a == "false" => Ok(ValueTerm::False),
        Sexp::Atom(_) => Ok(ValueTerm::Var(ident(s)?)),
        Sexp::List(items) if items.is_empty() => Ok(ValueTerm::Unit),
        Sexp::List(items) => match head(items) {
            Some("pair") => {
                arity(items, 2, "pair")?;
                Ok(ValueTerm::pair(value_from_sexp(&items[1])?, value_from_sexp(&items[2])?))
            }
            Some("thunk") => {
                arity(items, 1, "thunk")?;
                Ok(ValueTerm::thunk(comp_from_sexp(&items[1])?))
            }
            _ => Err(err(format!("not a value: `{s}`"))),
        },
    }
}

pub fn comp_from_sexp(s: &Sexp) -> Result<CompTerm, ParseError> {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || comp_from_sexp_inner(s))
}

fn comp_from_sexp_inner(s: &Sexp) -> Result<CompTerm, ParseError> {
    let Sexp::List(items) = s else {
        return Err(err(format!("not a computation: `{s}`")));
    };
    let h = head(items).ok_or_else(|| err(format!("not a computation: `{s}`")))?;
    match h {
        "cpair" => {
            arity(items, 2, h)?;
            Ok(CompTerm::comp_pair(comp_from_sexp(&items[1])?, comp_from_sexp(&items[2])?))
        }
        "proj" => {
            arity(items, 2, h)?;
            let c = match &items[1] {
                Sexp::Atom(a) if a == "1" => Component::First,
                Sexp::Atom(a) if a == "2" => Component::Second,
                other => return Err(err(format!("projection index must be 1 or 2, found `{other}`"))),
            };
            Ok(CompTerm::proj(c, comp_from_sexp(&items[2])?))
        }
        "lam" => {
            arity(items, 3, h)?;
            Ok(CompTerm::lam(
                ident(&items[1])?,
                value_type_from_sexp(&items[2])?,
                comp_from_sexp(&items[3])?,
            ))
        }
        "push" => {
            arity(items, 2, h)?;
            Ok(CompTerm::push(value_from_sexp(&items[1])?, comp_from_sexp(&items[2])?))
        }
        "return" => {
            arity(items, 1, h)?;
            Ok(CompTerm::ret(value_from_sexp(&items[1])?))
        }
        "to" => {
            arity(items, 3, h)?;
            Ok(CompTerm::to(
                comp_from_sexp(&items[1])?,
                ident(&items[2])?,
                comp_from_sexp(&items[3])?,
            ))
        }
        "match" => {
            arity(items, 4, h)?;
            Ok(CompTerm::match_pair(
                value_from_sexp(&items[1])?,
                ident(&items[2])?,
                ident(&items[3])?,
                comp_from_sexp(&items[4])?,
            ))
        }
        "if" => {
            arity(items, 3, h)?;
            Ok(CompTerm::if_(
                value_from_sexp(&items[1])?,
                comp_from_sexp(&items[2])?,
                comp_from_sexp(&items[3])?,
            ))
        }
        "force" => {
            arity(items, 1, h)?;
            Ok(CompTerm::force(value_from_sexp(&items[1])?))
        }
        "rec" => {
            arity(items, 3, h)?;
            Ok(CompTerm::rec(
                ident(&items[1])?,
                comp_type_from_sexp(&items[2])?,
                comp_from_sexp(&items[3])?,
            ))
        }
        "fail" => {
            arity(items, 1, h)?;
            Ok(CompTerm::Fail(comp_type_from_sexp(&items[1])?))
        }
        "or" => {
            arity(items, 2, h)?;
            Ok(CompTerm::or(comp_from_sexp(&items[1])?, comp_from_sexp(&items[2])?))
        }
        _ => Err(err(format!("unknown computation form `{h}`"))),
    }
}

pub fn parse_value_type(input: &str) -> Result<ValueType, ParseError> {
    value_type_from_sexp(&sexpr::parse(input)?)
}

pub fn parse_comp_type(input: &str) -> Result<CompType, ParseError> {
    comp_type_from_sexp(&sexpr::parse(input)?)
}

pub fn parse_value(input: &str) -> Result<ValueTerm, ParseError> {
    value_from_sexp(&sexpr::parse(input)?)
}

pub fn parse_comp(input: &str) -> Result<CompTerm, ParseError> {
    comp_from_sexp(&sexpr::parse(input)?)
}

fn atom(s: &str) -> Sexp {
    Sexp::Atom(s.to_string())
}

fn list(items: Vec<Sexp>) -> Sexp {
    Sexp::List(items)
}

pub fn value_type_to_sexp(t: &ValueType) -> Sexp {
    match t {
        ValueType::Unit => atom("unit"),
        ValueType::Bool => atom("bool"),
        ValueType::Prod(a, b) => list(vec![atom("*"), value_type_to_sexp(a), value_type_to_sexp(b)]),
        ValueType::Thunk(c) => list(vec![atom("U"), comp_type_to_sexp(c)]),
    }
}

pub fn comp_type_to_sexp(t: &CompType) -> Sexp {
    match t {
        CompType::Free(a) => list(vec![atom("F"), value_type_to_sexp(a)]),
        CompType::CompProd(c, d) => list(vec![atom("&"), comp_type_to_sexp(c), comp_type_to_sexp(d)]),
        CompType::Arrow(a, c) => list(vec![atom("->"), value_type_to_sexp(a), comp_type_to_sexp(c)]),
    }
}

pub fn value_to_sexp(v: &ValueTerm) -> Sexp {
    match v {
        ValueTerm::Var(x) => atom(x.as_str()),
        ValueTerm::Unit => list(vec![]),
        ValueTerm::True => atom("true"),
        ValueTerm::False => atom("false"),
        ValueTerm::Pair(a, b) => list(vec![atom("pair"), value_to_sexp(a), value_to_sexp(b)]),
        ValueTerm::Thunk(m) => list(vec![atom("thunk"), comp_to_sexp(m)]),
    }
}

pub fn comp_to_sexp(m: &CompTerm) -> Sexp {
    match m {
        CompTerm::CompPair(a, b) => list(vec![atom("cpair"), comp_to_sexp(a), comp_to_sexp(b)]),
        CompTerm::Proj(i, a) => list(vec![atom("proj"), atom(&i.index().to_string()), comp_to_sexp(a)]),
        CompTerm::Lam(x, t, body) => list(vec![
            atom("lam"),
            atom(x.as_str()),
            value_type_to_sexp(t),
            comp_to_sexp(body),
        ]),
        CompTerm::Push(v, a) => list(vec![atom("push"), value_to_sexp(v), comp_to_sexp(a)]),
        CompTerm::Return(v) => list(vec![atom("return"), value_to_sexp(v)]),
        CompTerm::To(a, x, b) => list(vec![atom("to"), comp_to_sexp(a), atom(x.as_str()), comp_to_sexp(b)]),
        CompTerm::MatchPair(v, x1, x2, body) => list(vec![
            atom("match"),
            value_to_sexp(v),
            atom(x1.as_str()),
            atom(x2.as_str()),
            comp_to_sexp(body),
        ]),
        CompTerm::If(v, a, b) => list(vec![atom("if"), value_to_sexp(v), comp_to_sexp(a), comp_to_sexp(b)]),
        CompTerm::Force(v) => list(vec![atom("force"), value_to_sexp(v)]),
        CompTerm::Rec(x, t, body) => list(vec![
            atom("rec"),
            atom(x.as_str()),
            comp_type_to_sexp(t),
            comp_to_sexp(body),
        ]),
        CompTerm::Fail(t) => list(vec![atom("fail"), comp_type_to_sexp(t)]),
        CompTerm::Or(a, b) => list(vec![atom("or"), comp_to_sexp(a), comp_to_sexp(b)]),
    }
}

pub fn print_value_type(t: &ValueType) -> String {
    value_type_to_sexp(t).to_string()
}

pub fn print_comp_type(t: &CompType) -> String {
    comp_type_to_sexp(t).to_string()
}

pub fn print_value(v: &ValueTerm) -> String {
    value_to_sexp(v).to_string()
}

pub fn print_comp(m: &CompTerm) -> String {
    comp_to_sexp(m).to_string()
}
