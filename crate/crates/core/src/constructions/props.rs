use serde::Serialize;

use super::Components;
use crate::fincat::{FinCategory, FinFunctor, Mor, Ob};

/// Why a functor is not final (resp. initial): the comma at `object` is
/// empty or has `components` connected components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinalityFailure {
    pub object: Ob,
    pub components: usize,
}

/// Why a functor is not a discrete (op)fibration: `morphism` of the codomain
/// at the image of `object` has `lifts` lifts instead of one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftFailure {
    pub object: Ob,
    pub morphism: Mor,
    pub lifts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CofilteredFailure {
    Empty,
    NoSpan(Ob, Ob),
    NoEqualizer(Mor, Mor),
}

/// `u` is final when every `d ↓ u` is non-empty and connected.
pub fn check_final(u: &FinFunctor) -> Result<(), FinalityFailure> {
    let (c, d) = (&**u.domain(), &**u.codomain());
    for t in d.objects() {
        // nodes: (a, h : t -> u a)
        let mut nodes = Vec::new();
        let mut start = vec![0; c.n_objects() + 1];
        for a in c.objects() {
            start[a.0] = nodes.len();
            nodes.extend(d.hom(t, u.ob(a)).iter().map(|&h| (a, h)));
        }
        start[c.n_objects()] = nodes.len();
        let pos = |a: Ob, h: Mor| start[a.0] + d.hom(t, u.ob(a)).iter().position(|&x| x == h).unwrap();
        let edges = c.morphisms().flat_map(|k| {
            let (a, b) = (c.source(k), c.target(k));
            d.hom(t, u.ob(a))
                .iter()
                .map(move |&h| (pos(a, h), pos(b, d.compose(u.mor(k), h))))
                .collect::<Vec<_>>()
        });
        let comps = Components::from_edges(nodes.len(), edges);
        if comps.count != 1 {
            return Err(FinalityFailure {
                object: t,
                components: comps.count,
            });
        }
    }
    Ok(())
}

/// `u` is initial when every `u ↓ d` is non-empty and connected.
pub fn check_initial(u: &FinFunctor) -> Result<(), FinalityFailure> {
    check_final(&u.opposite())
}

pub fn is_final_functor(u: &FinFunctor) -> bool {
    check_final(u).is_ok()
}

pub fn is_initial_functor(u: &FinFunctor) -> bool {
    check_initial(u).is_ok()
}

/// Unique lifting of arrows into image objects.
pub fn check_discrete_fibration(u: &FinFunctor) -> Result<(), LiftFailure> {
    let (c, d) = (&**u.domain(), &**u.codomain());
    for x in c.objects() {
        for &g in d.incoming(u.ob(x)) {
            let lifts = c.incoming(x).filter(|&&f| u.mor(f) == g).count();
            if lifts != 1 {
                return Err(LiftFailure {
                    object: x,
                    morphism: g,
                    lifts,
                });
            }
        }
    }
    Ok(())
}

/// Unique lifting of arrows out of image objects.
pub fn check_discrete_opfibration(u: &FinFunctor) -> Result<(), LiftFailure> {
    check_discrete_fibration(&u.opposite())
}

pub fn is_discrete_fibration(u: &FinFunctor) -> bool {
    check_discrete_fibration(u).is_ok()
}

pub fn is_discrete_opfibration(u: &FinFunctor) -> bool {
    check_discrete_opfibration(u).is_ok()
}

/// Non-empty, every pair of objects has a span over it, every parallel
/// pair is equalized by some arrow.
pub fn check_cofiltered(c: &FinCategory) -> Result<(), CofilteredFailure> {
    if c.n_objects() == 0 {
        return Err(CofilteredFailure::Empty);
    }
    for a in c.objects() {
        for b in c.objects() {
            let ok = c
                .objects()
                .any(|w| !c.hom(w, a).is_empty() && !c.hom(w, b).is_empty());
            if !ok {
                return Err(CofilteredFailure::NoSpan(a, b));
            }
        }
    }
    for a in c.objects() {
        for b in c.objects() {
            let hom = c.hom(a, b);
            for (i, &f) in hom.iter().enumerate() {
                for &g in &hom[i + 1..] {
                    let ok = c
                        .incoming(a)
                        .any(|&k| c.compose(f, k) == c.compose(g, k));
                    if !ok {
                        return Err(CofilteredFailure::NoEqualizer(f, g));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn is_cofiltered(c: &FinCategory) -> bool {
    check_cofiltered(c).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::coslice_of_functor;
    use crate::fincat::fixtures;
    use crate::constructions::pi0;

    #[test]
    fn finality_of_points_of_arrow() {
        let (u, v) = (fixtures::u_zero(), fixtures::v_one());
        assert!(is_initial_functor(&u) && !is_final_functor(&u));
        assert!(is_final_functor(&v) && !is_initial_functor(&v));
        assert_eq!(check_final(&u), Err(FinalityFailure { object: Ob(1), components: 0 }));
        for c in fixtures::catalog() {
            let id = FinFunctor::identity(c);
            assert!(is_final_functor(&id) && is_initial_functor(&id));
        }
    }

    #[test]
    fn finality_agrees_with_comma_components() {
        for u in fixtures::functor_catalog() {
            let by_comma = u
                .codomain()
                .objects()
                .all(|d| pi0(&coslice_of_functor(d, &u).category).count == 1);
            assert_eq!(by_comma, is_final_functor(&u), "{}", u.name());
        }
    }

    #[test]
    fn fibration_checks() {
        assert!(is_discrete_fibration(&fixtures::u_zero()));
        let err = check_discrete_opfibration(&fixtures::codiagonal()).unwrap_err();
        assert_eq!(err.lifts, 2);
    }

    #[test]
    fn cofilteredness_of_fixtures() {
        assert!(is_cofiltered(&fixtures::one()));
        assert!(is_cofiltered(&fixtures::idem()));
        assert!(matches!(
            check_cofiltered(&fixtures::par_pair()),
            Err(CofilteredFailure::NoEqualizer(_, _))
        ));
        assert!(is_cofiltered(&fixtures::sq()));
        assert!(!is_cofiltered(&fixtures::empty()));
    }
}
