//! Hand-built cofiltered diagrams with full slice systems.
//!
//! Finite categories with finite limits are preorders, so most targets are
//! meet-semilattices; the non-posetal targets are used with every `C_i`
//! terminal, where the products `C_i x c` still exist.

use std::sync::Arc;

use super::{ChosenPullback, CofilteredDiagram};
use crate::fincat::{fixtures as cats, validate_functor, FinCategory, Mor, RawCategory, RawFunctor};

fn build(raw: RawCategory) -> Arc<FinCategory> {
    Arc::new(raw.validate().expect("fixture category is valid"))
}

/// `0` with an idempotent `e` and an arrow `f : 0 -> 1` absorbing it.
/// Cofiltered without an initial object.
pub fn idem_arrow() -> Arc<FinCategory> {
    build(
        RawCategory::new("IdemArrow")
            .object("0")
            .object("1")
            .arrow("e", "0", "0")
            .arrow("f", "0", "1")
            .composite("e", "e", "e")
            .composite("f", "e", "f"),
    )
}

/// `Idem` with a terminal object `t` adjoined.
pub fn idem_terminal() -> Arc<FinCategory> {
    build(
        RawCategory::new("IdemT")
            .object("x")
            .object("t")
            .arrow("e", "x", "x")
            .arrow("!x", "x", "t")
            .composite("e", "e", "e")
            .composite("!x", "e", "!x"),
    )
}

/// `ParPair` with a terminal object `t` adjoined.
pub fn par_pair_terminal() -> Arc<FinCategory> {
    build(
        RawCategory::new("ParPairT")
            .object("0")
            .object("1")
            .object("t")
            .arrow("a", "0", "1")
            .arrow("b", "0", "1")
            .arrow("!0", "0", "t")
            .arrow("!1", "1", "t")
            .composite("!1", "a", "!0")
            .composite("!1", "b", "!0"),
    )
}

fn diagram(
    name: &str,
    index: Arc<FinCategory>,
    target: Arc<FinCategory>,
    objects: &[(&str, &str)],
    arrows: &[(&str, &str)],
) -> Arc<CofilteredDiagram> {
    let mut raw = RawFunctor::new(name);
    for (a, b) in objects {
        raw = raw.object(a, b);
    }
    for (a, b) in arrows {
        raw = raw.arrow(a, b);
    }
    let f = validate_functor(&raw, index, target).expect("fixture functor is valid");
    Arc::new(CofilteredDiagram::with_full_slices(name, f).expect("fixture diagram is valid"))
}

/// The corner-to-top diagram over the square: `l -> t` indexed by `Arrow`.
pub fn sq_corner() -> Arc<CofilteredDiagram> {
    diagram("sq_corner", cats::arrow(), cats::sq(), &[("0", "l"), ("1", "t")], &[])
}

/// Every fixture diagram, in a fixed order.
pub fn catalog() -> Vec<Arc<CofilteredDiagram>> {
    let (one, arrow, idem, sq, chain3, span) = (
        cats::one(),
        cats::arrow(),
        cats::idem(),
        cats::sq(),
        cats::chain(3),
        cats::span(),
    );
    vec![
        diagram("one_one", one.clone(), one.clone(), &[("x", "x")], &[]),
        diagram("one_arrow_top", one.clone(), arrow.clone(), &[("x", "1")], &[]),
        diagram("one_arrow_bottom", one.clone(), arrow.clone(), &[("x", "0")], &[]),
        diagram("one_sq_top", one.clone(), sq.clone(), &[("x", "t")], &[]),
        diagram("one_sq_corner", one.clone(), sq.clone(), &[("x", "l")], &[]),
        sq_corner(),
        diagram("sq_bottom", arrow.clone(), sq.clone(), &[("0", "b"), ("1", "t")], &[]),
        diagram("arrow_chain", arrow.clone(), chain3.clone(), &[("0", "0"), ("1", "2")], &[]),
        diagram("arrow_constant", arrow.clone(), sq.clone(), &[("0", "t"), ("1", "t")], &[]),
        diagram("arrow_arrow", arrow.clone(), arrow.clone(), &[("0", "0"), ("1", "1")], &[]),
        diagram("idem_sq", idem.clone(), sq.clone(), &[("x", "t")], &[]),
        diagram("idem_chain", idem.clone(), chain3.clone(), &[("x", "1")], &[]),
        diagram("chain_chain", chain3.clone(), chain3.clone(), &[("0", "0"), ("1", "1"), ("2", "2")], &[]),
        diagram("chain_sq", chain3.clone(), sq.clone(), &[("0", "b"), ("1", "l"), ("2", "t")], &[]),
        diagram("span_sq", span.clone(), sq.clone(), &[("s", "b"), ("a", "l"), ("b", "r")], &[]),
        diagram("span_top", span.clone(), sq.clone(), &[("s", "l"), ("a", "t"), ("b", "t")], &[]),
        diagram("sq_sq", sq.clone(), sq.clone(), &[("b", "b"), ("l", "l"), ("r", "r"), ("t", "t")], &[]),
        diagram(
            "sq_chain",
            sq.clone(),
            chain3.clone(),
            &[("b", "0"), ("l", "1"), ("r", "1"), ("t", "2")],
            &[],
        ),
        diagram("idem_arrow_sq", idem_arrow(), sq.clone(), &[("0", "l"), ("1", "t")], &[]),
        diagram("idem_terminal", idem.clone(), idem_terminal(), &[("x", "t")], &[]),
        diagram("parpair_terminal", one.clone(), par_pair_terminal(), &[("x", "t")], &[]),
        diagram("arrow_parpair_terminal", arrow.clone(), par_pair_terminal(), &[("0", "t"), ("1", "t")], &[]),
        diagram("idem_arrow_terminal", idem_arrow(), idem_terminal(), &[("0", "t"), ("1", "t")], &[]),
    ]
}

pub fn by_name(name: &str) -> Option<Arc<CofilteredDiagram>> {
    if name == "idem_on_idem" {
        return Some(idem_on_idem());
    }
    catalog().into_iter().find(|d| d.name() == name)
}

/// `Idem` indexing itself: `C_x = x`, `u_e = e`, slice system `{1}`.
/// Pullbacks exist but products do not, so only the localization applies.
pub fn idem_on_idem() -> Arc<CofilteredDiagram> {
    let idem = cats::idem();
    let e = idem.find_morphism("e").unwrap();
    let id = idem.id(crate::fincat::Ob(0));
    let f = validate_functor(&RawFunctor::new("idem_on_idem").arrow("e", "e"), idem.clone(), idem.clone())
        .expect("identity functor");
    let chosen = [ChosenPullback {
        arrow: e,
        along: id,
        pulled: id,
        projection: e,
    }];
    Arc::new(CofilteredDiagram::new("idem_on_idem", f, vec![vec![id]], &chosen).expect("valid diagram"))
}

/// Restricted slice systems over the square that miss some products.
pub fn sq_corner_sparse() -> Arc<CofilteredDiagram> {
    let sq = cats::sq();
    let f = validate_functor(
        &RawFunctor::new("sq_corner_sparse").object("0", "l").object("1", "t"),
        cats::arrow(),
        sq.clone(),
    )
    .expect("valid functor");
    let m = |n: &str| -> Mor { sq.find_morphism(n).unwrap() };
    let id = |n: &str| sq.id(sq.find_object(n).unwrap());
    CofilteredDiagram::new("sq_corner_sparse", f, vec![vec![id("l")], vec![id("t"), m("lt")]], &[])
        .map(Arc::new)
        .expect("valid diagram")
}
