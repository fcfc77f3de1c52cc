//! Maps into `X` versus presheaves on the category of elements of `X`.

use std::sync::Arc;

use super::{FinPresheaf, GlobalElement, PresheafMap};
use crate::constructions::Elements;

/// The fiber presheaf of `h : D -> X` on the category of elements of `X`:
/// `(c, x) |-> { d in D(c) | h_c(d) = x }`.
pub fn fiber_presheaf(h: &PresheafMap, el: &Elements) -> FinPresheaf {
    let (d, x) = (h.source(), h.target());
    assert_eq!(**el.presheaf(), **x, "elements of a different presheaf");
    let cat = el.category().clone();
    let fibers: Vec<Vec<usize>> = cat
        .objects()
        .map(|o| {
            let (c, e) = el.element(o);
            (0..d.size(c)).filter(|&y| h.apply(c, y) == e).collect()
        })
        .collect();
    let labels = cat
        .objects()
        .map(|o| {
            let (c, _) = el.element(o);
            fibers[o.0].iter().map(|&y| d.label(c, y).to_string()).collect()
        })
        .collect();
    let actions = cat
        .morphisms()
        .map(|m| {
            let (g, _) = el.lift(m);
            let (s, t) = (cat.source(m), cat.target(m));
            fibers[t.0]
                .iter()
                .map(|&y| {
                    let z = d.act(g, y);
                    fibers[s.0].iter().position(|&w| w == z).expect("fibers are natural")
                })
                .collect()
        })
        .collect();
    FinPresheaf::new_trusted(format!("fib({})", d.name()), cat, labels, actions)
}

/// The inverse translation: a presheaf `P` on the elements of `X` becomes
/// the map `sum_x P(c, x) -> X`.
pub fn total_presheaf(p: &FinPresheaf, el: &Elements) -> PresheafMap {
    assert_eq!(**p.base(), **el.category(), "presheaf on another category");
    let x = el.presheaf().clone();
    let c = x.base().clone();
    // pairs[c] = [(x, p)] ordered by x then p
    let pairs: Vec<Vec<(usize, usize)>> = c
        .objects()
        .map(|a| {
            (0..x.size(a))
                .flat_map(|e| {
                    let o = el.object(a, e);
                    (0..p.size(o)).map(move |q| (e, q))
                })
                .collect()
        })
        .collect();
    let labels = c
        .objects()
        .map(|a| {
            pairs[a.0]
                .iter()
                .map(|&(e, q)| format!("{}/{}", x.label(a, e), p.label(el.object(a, e), q)))
                .collect()
        })
        .collect();
    let actions = c
        .morphisms()
        .map(|g| {
            let (s, t) = (c.source(g), c.target(g));
            pairs[t.0]
                .iter()
                .map(|&(e, q)| {
                    let m = el.morphism(g, e);
                    let img = (x.act(g, e), p.act(m, q));
                    pairs[s.0].iter().position(|&pr| pr == img).unwrap()
                })
                .collect()
        })
        .collect();
    let total = Arc::new(FinPresheaf::new_trusted(
        format!("sum({})", p.name()),
        c.clone(),
        labels,
        actions,
    ));
    let comps = c
        .objects()
        .map(|a| pairs[a.0].iter().map(|&(e, _)| e).collect())
        .collect();
    PresheafMap::new_trusted(total, x, comps)
}

/// The fiber of `h : D -> E` over a global element `a` of `E`, as a
/// subpresheaf of `D`.
pub fn pullback_of_element(a: &GlobalElement, h: &PresheafMap) -> FinPresheaf {
    let d = h.source();
    assert!(h.target().is_global_element(&a.family), "not a global element of the target");
    let c = d.base().clone();
    let keep: Vec<Vec<usize>> = c
        .objects()
        .map(|o| (0..d.size(o)).filter(|&y| h.apply(o, y) == a.family[o.0]).collect())
        .collect();
    let labels = c
        .objects()
        .map(|o| keep[o.0].iter().map(|&y| d.label(o, y).to_string()).collect())
        .collect();
    let actions = c
        .morphisms()
        .map(|g| {
            let (s, t) = (c.source(g), c.target(g));
            keep[t.0]
                .iter()
                .map(|&y| {
                    let z = d.act(g, y);
                    keep[s.0].binary_search(&z).expect("fiber is a subpresheaf")
                })
                .collect()
        })
        .collect();
    FinPresheaf::new_trusted(format!("{}|a", d.name()), c, labels, actions)
}

/// The fiber of `h` over `a` together with its inclusion into `h.source()`.
pub fn fiber_inclusion(a: &GlobalElement, h: &PresheafMap) -> PresheafMap {
    let fiber = Arc::new(pullback_of_element(a, h));
    let d = h.source();
    let comps = d
        .base()
        .objects()
        .map(|o| (0..d.size(o)).filter(|&y| h.apply(o, y) == a.family[o.0]).collect())
        .collect();
    PresheafMap::new_trusted(fiber, d.clone(), comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::category_of_elements;
    use crate::fincat::fixtures;
    use crate::fincat::Ob;
    use crate::presheaf::find_iso;

    #[test]
    fn identity_translates_to_terminal() {
        for c in fixtures::catalog() {
            for a in c.objects() {
                let x = Arc::new(FinPresheaf::representable(c.clone(), a));
                let el = category_of_elements(&x);
                let fib = fiber_presheaf(&PresheafMap::identity(x.clone()), &el);
                assert!(fib.sizes().iter().all(|&n| n == 1));
                let back = total_presheaf(&fib, &el);
                assert!(find_iso(back.source(), &x).is_some());
            }
        }
    }

    #[test]
    fn fiber_of_representable_over_terminal() {
        let c = fixtures::arrow();
        let y1 = Arc::new(FinPresheaf::representable(c.clone(), Ob(1)));
        let h = PresheafMap::to_terminal(y1.clone());
        let one = h.target().clone();
        let a = &one.global_elements()[0];
        let fib = pullback_of_element(a, &h);
        assert_eq!(fib.sizes(), y1.sizes());
    }
}
