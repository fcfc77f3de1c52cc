//! The shared fixture catalog: small categories and functors used by the
//! examples, the CLI builtins and the test suites.

use std::sync::Arc;

use super::{validate_functor, FinCategory, FinFunctor, RawCategory, RawFunctor};

fn build(raw: RawCategory) -> Arc<FinCategory> {
    Arc::new(raw.validate().expect("fixture category is valid"))
}

/// The empty category.
pub fn empty() -> Arc<FinCategory> {
    build(RawCategory::new("Empty"))
}

/// The terminal category, one object `x`.
pub fn one() -> Arc<FinCategory> {
    build(RawCategory::new("One").object("x"))
}

/// `0 -f-> 1`
pub fn arrow() -> Arc<FinCategory> {
    build(RawCategory::new("Arrow").object("0").object("1").arrow("f", "0", "1"))
}

/// Two parallel arrows `a, b : 0 -> 1`.
pub fn par_pair() -> Arc<FinCategory> {
    build(
        RawCategory::new("ParPair")
            .object("0")
            .object("1")
            .arrow("a", "0", "1")
            .arrow("b", "0", "1"),
    )
}

/// `a <-p- s -q-> b`
pub fn span() -> Arc<FinCategory> {
    build(
        RawCategory::new("Span")
            .object("s")
            .object("a")
            .object("b")
            .arrow("p", "s", "a")
            .arrow("q", "s", "b"),
    )
}

/// The commutative square as a poset: `b <= l, r <= t`.
pub fn sq() -> Arc<FinCategory> {
    build(
        RawCategory::new("Sq")
            .object("b")
            .object("l")
            .object("r")
            .object("t")
            .arrow("bl", "b", "l")
            .arrow("br", "b", "r")
            .arrow("lt", "l", "t")
            .arrow("rt", "r", "t")
            .arrow("bt", "b", "t"),
    )
}

/// One object with a non-identity idempotent `e`.
pub fn idem() -> Arc<FinCategory> {
    build(
        RawCategory::new("Idem")
            .object("x")
            .arrow("e", "x", "x")
            .composite("e", "e", "e"),
    )
}

/// The chain `0 < 1 < ... < n-1` as a poset category.
pub fn chain(n: usize) -> Arc<FinCategory> {
    let mut raw = RawCategory::new(format!("Chain{n}"));
    for i in 0..n {
        raw = raw.object(&i.to_string());
    }
    for i in 0..n {
        for j in i + 1..n {
            raw = raw.arrow(&format!("c{i}{j}"), &i.to_string(), &j.to_string());
        }
    }
    build(raw)
}

/// Every named fixture category, in catalog order.
pub fn catalog() -> Vec<Arc<FinCategory>> {
    vec![one(), arrow(), par_pair(), span(), sq(), idem()]
}

pub fn by_name(name: &str) -> Option<Arc<FinCategory>> {
    match name {
        "Empty" => Some(empty()),
        "One" => Some(one()),
        "Arrow" => Some(arrow()),
        "ParPair" => Some(par_pair()),
        "Span" => Some(span()),
        "Sq" => Some(sq()),
        "Idem" => Some(idem()),
        _ => name
            .strip_prefix("Chain")
            .and_then(|n| n.parse().ok())
            .filter(|&n: &usize| n <= 8)
            .map(chain),
    }
}

fn functor(raw: RawFunctor, c: Arc<FinCategory>, d: Arc<FinCategory>) -> FinFunctor {
    validate_functor(&raw, c, d).expect("fixture functor is valid")
}

/// `One -> Arrow` picking `0`.
pub fn u_zero() -> FinFunctor {
    functor(RawFunctor::new("u").object("x", "0"), one(), arrow())
}

/// `One -> Arrow` picking `1`.
pub fn v_one() -> FinFunctor {
    functor(RawFunctor::new("v").object("x", "1"), one(), arrow())
}

/// `ParPair -> Arrow` sending both arrows to `f`.
pub fn codiagonal() -> FinFunctor {
    functor(
        RawFunctor::new("codiag").arrow("a", "f").arrow("b", "f"),
        par_pair(),
        arrow(),
    )
}

/// `Arrow -> Idem` sending `f` to `e`.
pub fn arrow_to_idem() -> FinFunctor {
    functor(
        RawFunctor::new("w")
            .object("0", "x")
            .object("1", "x")
            .arrow("f", "e"),
        arrow(),
        idem(),
    )
}

/// `One -> Idem`.
pub fn point_of_idem() -> FinFunctor {
    functor(RawFunctor::new("p").object("x", "x"), one(), idem())
}

/// Every named fixture functor, in catalog order.
pub fn functor_catalog() -> Vec<FinFunctor> {
    vec![u_zero(), v_one(), codiagonal(), arrow_to_idem(), point_of_idem()]
}

pub fn functor_by_name(name: &str) -> Option<FinFunctor> {
    functor_catalog().into_iter().find(|f| f.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        let sizes: Vec<(usize, usize)> = catalog()
            .iter()
            .map(|c| (c.n_objects(), c.n_morphisms()))
            .collect();
        assert_eq!(sizes, vec![(1, 1), (2, 3), (2, 4), (3, 5), (4, 9), (1, 2)]);
    }

    #[test]
    fn idem_composites() {
        let c = idem();
        let e = c.find_morphism("e").unwrap();
        let id = c.id(c.find_object("x").unwrap());
        assert_eq!(c.compose(e, e), e);
        assert_eq!(c.compose(id, e), e);
        assert_eq!(c.compose(e, id), e);
        assert_eq!(c.compose(id, id), id);
    }

    #[test]
    fn chains_are_posets() {
        for n in 0..5 {
            let c = chain(n);
            assert!(c.is_preorder());
            assert_eq!(c.n_morphisms(), n * (n + 1) / 2);
        }
    }
}
