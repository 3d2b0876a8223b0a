//! Fresh variable names.
//!
//! Names are produced from a per-thread counter as `base%N`. The `%`
//! character never appears in source-language identifiers, so generated
//! names cannot collide with user variables of translated programs. The
//! counter is thread-local so that parallel checks stay reproducible:
//! resetting it before a computation pins every generated name.

use std::cell::Cell;
use std::collections::BTreeSet;

use crate::syntax::Ident;

thread_local! {
    static COUNTER: Cell<u64> = const { Cell::new(0) };
}

/// Separator between the base name and the counter suffix.
pub const SEPARATOR: char = '%';

/// Resets the counter of the current thread to zero.
pub fn reset() {
    COUNTER.with(|c| c.set(0));
}

/// Runs `f` with the counter starting from zero, restoring the previous
/// counter value afterwards.
pub fn scoped<T>(f: impl FnOnce() -> T) -> T {
    let saved = COUNTER.with(|c| c.replace(0));
    let out = f();
    COUNTER.with(|c| c.set(saved));
    out
}

fn next() -> u64 {
    COUNTER.with(|c| {
        let n = c.get();
        c.set(n + 1);
        n
    })
}

/// Strips a previous counter suffix, so renaming `x%3` yields `x%7`
/// rather than `x%3%7`.
pub fn base_of(name: &str) -> &str {
    match name.find(SEPARATOR) {
        Some(i) if i > 0 => &name[..i],
        _ => name,
    }
}

pub fn fresh(base: &str) -> Ident {
    Ident::new(format!("{}{}{}", base_of(base), SEPARATOR, next()))
}

/// A fresh name that is additionally guaranteed not to be in `avoid`.
pub fn fresh_avoiding(base: &str, avoid: &BTreeSet<Ident>) -> Ident {
    loop {
        let name = fresh(base);
        if !avoid.contains(&name) {
            return name;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_is_deterministic_after_reset() {
        reset();
        assert_eq!(fresh("x").as_str(), "x%0");
        assert_eq!(fresh("y").as_str(), "y%1");
        reset();
        assert_eq!(fresh("z").as_str(), "z%0");
    }

    #[test]
    fn renaming_replaces_suffix() {
        reset();
        let a = fresh("x");
        let b = fresh(a.as_str());
        assert_eq!(b.as_str(), "x%1");
    }

    #[test]
    fn avoids_given_names() {
        reset();
        let avoid: BTreeSet<Ident> = [Ident::new("x%0"), Ident::new("x%1")].into();
        assert_eq!(fresh_avoiding("x", &avoid).as_str(), "x%2");
    }

    #[test]
    fn scoped_restores_counter() {
        reset();
        fresh("a");
        let inner = scoped(|| fresh("b"));
        assert_eq!(inner.as_str(), "b%0");
        assert_eq!(fresh("c").as_str(), "c%1");
    }
}
