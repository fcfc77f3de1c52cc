use std::collections::HashMap;

use serde::Serialize;

use super::{GrothendieckTopology, SiteError, Sieve};
use super::sheaf::is_subcanonical;
use crate::constructions::Components;
use crate::fincat::{FinCategory, FinFunctor, Mor, Ob};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SiteRole {
    Morphism,
    Comorphism,
}

/// A functor between the bases of two sites, with its intended role.
#[derive(Clone, Debug)]
pub struct SiteMorphism {
    pub functor: FinFunctor,
    pub role: SiteRole,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TcVerdict {
    TerminallyConnected,
    NotTerminallyConnected,
    /// The criterion does not decide this case.
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum JCofinalityFailure {
    /// The sieve of arrows into `c` whose domain maps into the image of `f` does not cover.
    NoCover(Ob),
    /// The sieve equalizing `left` and `right` up to components does not cover.
    Span { object: Ob, left: (Ob, Mor), right: (Ob, Mor) },
}

/// Components of `c ↓ f`, keyed by `(a, h : c -> f a)`.
fn comma_components(f: &FinFunctor, c: Ob) -> HashMap<(Ob, Mor), usize> {
    let (a_cat, d) = (f.domain(), f.codomain());
    let nodes: Vec<(Ob, Mor)> = a_cat
        .objects()
        .flat_map(|a| d.hom(c, f.ob(a)).iter().map(move |&h| (a, h)))
        .collect();
    let pos: HashMap<(Ob, Mor), usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut edges = Vec::new();
    for k in a_cat.morphisms() {
        let (a, b) = (a_cat.source(k), a_cat.target(k));
        for &h in d.hom(c, f.ob(a)) {
            edges.push((pos[&(a, h)], pos[&(b, d.compose(f.mor(k), h))]));
        }
    }
    let comps = Components::from_edges(nodes.len(), edges);
    nodes.into_iter().enumerate().map(|(i, n)| (n, comps.label[i])).collect()
}

/// `f : A -> C` is `J`-cofinal when every object of `C` is covered by arrows
/// from objects mapping into the image of `f`, and every span
/// `f(a) <- c -> f(a')` is made connected in the commas by some cover.
pub fn check_j_cofinal(f: &FinFunctor, j: &GrothendieckTopology) -> Result<(), JCofinalityFailure> {
    let c_cat: &FinCategory = f.codomain();
    assert_eq!(**j.base(), *c_cat, "topology on the wrong category");
    let comps: Vec<HashMap<(Ob, Mor), usize>> = c_cat.objects().map(|c| comma_components(f, c)).collect();
    for c in c_cat.objects() {
        let reach = Sieve {
            apex: c,
            arrows: c_cat
                .incoming(c)
                .copied()
                .filter(|&h| !comps[c_cat.source(h).0].is_empty())
                .collect(),
        };
        if !j.is_cover(&reach) {
            return Err(JCofinalityFailure::NoCover(c));
        }
        let mut legs: Vec<(Ob, Mor)> = comps[c.0].keys().copied().collect();
        legs.sort();
        for (i, &(a, u)) in legs.iter().enumerate() {
            for &(b, v) in &legs[i + 1..] {
                let sieve = Sieve {
                    apex: c,
                    arrows: c_cat
                        .incoming(c)
                        .copied()
                        .filter(|&h| {
                            let src = &comps[c_cat.source(h).0];
                            src[&(a, c_cat.compose(u, h))] == src[&(b, c_cat.compose(v, h))]
                        })
                        .collect(),
                };
                if !j.is_cover(&sieve) {
                    return Err(JCofinalityFailure::Span {
                        object: c,
                        left: (a, u),
                        right: (b, v),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn is_j_cofinal(f: &FinFunctor, j: &GrothendieckTopology) -> bool {
    check_j_cofinal(f, j).is_ok()
}

/// The terminal object has only the maximal cover.
pub fn is_local_site(j: &GrothendieckTopology) -> Result<bool, SiteError> {
    let c = j.base();
    let t = c
        .terminal_object()
        .ok_or_else(|| SiteError::NoTerminalObject(c.name().to_string()))?;
    Ok(j.covers(t).len() == 1)
}

/// Whether some `e : 1_D -> f(1_C)` makes `x |-> f(x) . e` a bijection
/// `C(1_C, c) -> D(1_D, f c)` for every `c`. By Yoneda every natural map
/// between these functors has this form.
pub fn lifts_global_elements(f: &FinFunctor) -> Result<bool, SiteError> {
    let (c, d) = (f.domain(), f.codomain());
    let tc = c
        .terminal_object()
        .ok_or_else(|| SiteError::NoTerminalObject(c.name().to_string()))?;
    let td = d
        .terminal_object()
        .ok_or_else(|| SiteError::NoTerminalObject(d.name().to_string()))?;
    Ok(d.hom(td, f.ob(tc)).iter().any(|&e| {
        c.objects().all(|o| {
            let src = c.hom(tc, o);
            let tgt = d.hom(td, f.ob(o));
            if src.len() != tgt.len() {
                return false;
            }
            let mut hit: Vec<Mor> = src.iter().map(|&x| d.compose(f.mor(x), e)).collect();
            hit.sort();
            hit.dedup();
            hit.len() == tgt.len()
        })
    }))
}

/// Terminal connectedness tested on a local codomain site: lifting global
/// elements suffices, and is necessary when both sites are subcanonical.
pub fn tc_by_local_site(
    f: &FinFunctor,
    j: &GrothendieckTopology,
    k: &GrothendieckTopology,
) -> Result<TcVerdict, SiteError> {
    if j.base() != f.domain() || k.base() != f.codomain() {
        return Err(SiteError::BaseMismatch);
    }
    if !is_local_site(k)? {
        return Err(SiteError::NotLocalSite);
    }
    if lifts_global_elements(f)? {
        Ok(TcVerdict::TerminallyConnected)
    } else if is_subcanonical(j) && is_subcanonical(k) {
        Ok(TcVerdict::NotTerminallyConnected)
    } else {
        Ok(TcVerdict::Inapplicable)
    }
}

impl SiteMorphism {
    /// Morphism: the image of every `J`-cover generates a `K`-cover.
    /// Comorphism: every `K`-cover of `f(a)` contains the image of some `J`-cover of `a`.
    pub fn check(&self, j: &GrothendieckTopology, k: &GrothendieckTopology) -> Result<(), SiteError> {
        let f = &self.functor;
        if j.base() != f.domain() || k.base() != f.codomain() {
            return Err(SiteError::BaseMismatch);
        }
        let (a_cat, c_cat) = (f.domain(), f.codomain());
        for a in a_cat.objects() {
            match self.role {
                SiteRole::Morphism => {
                    for s in j.covers(a) {
                        let image: Vec<Mor> = s.arrows.iter().map(|&h| f.mor(h)).collect();
                        if !k.is_cover(&Sieve::generated(c_cat, f.ob(a), &image)) {
                            return Err(SiteError::NotMorphismOfSites(a_cat.obj_name(a).to_string()));
                        }
                    }
                }
                SiteRole::Comorphism => {
                    for r in k.covers(f.ob(a)) {
                        let lifts = j
                            .covers(a)
                            .iter()
                            .any(|s| s.arrows.iter().all(|&h| r.contains(f.mor(h))));
                        if !lifts {
                            return Err(SiteError::NotComorphism(a_cat.obj_name(a).to_string()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A comorphism `f : (A, J) -> (C, K)` induces a terminally connected
/// morphism exactly when `f` is `K`-cofinal.
pub fn comorphism_tc(
    f: &FinFunctor,
    j: &GrothendieckTopology,
    k: &GrothendieckTopology,
) -> Result<TcVerdict, SiteError> {
    SiteMorphism {
        functor: f.clone(),
        role: SiteRole::Comorphism,
    }
    .check(j, k)?;
    Ok(if is_j_cofinal(f, k) {
        TcVerdict::TerminallyConnected
    } else {
        TcVerdict::NotTerminallyConnected
    })
}

/// Whether `f` sends the terminal object and all pullbacks that exist in
/// its domain to terminal objects and pullbacks.
pub fn preserves_existing_limits(f: &FinFunctor) -> bool {
    let (c, d) = (f.domain(), f.codomain());
    if let Some(t) = c.terminal_object() {
        if !d.objects().all(|o| d.hom(o, f.ob(t)).len() == 1) {
            return false;
        }
    }
    for x in c.objects() {
        for y in c.objects() {
            for z in c.objects() {
                for &g in c.hom(x, z) {
                    for &h in c.hom(y, z) {
                        for (l, r) in c.pullbacks(g, h) {
                            if !d.is_pullback(f.mor(g), f.mor(h), f.mor(l), f.mor(r)) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Pullback cones of `g : x -> z <- y : h`.
#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::is_final_functor;
    use crate::fincat::fixtures;
    use crate::factorization::is_terminally_connected_essential;

    #[test]
    fn cofinality_with_trivial_topology_is_finality() {
        for u in fixtures::functor_catalog() {
            let k = GrothendieckTopology::trivial(u.codomain().clone());
            assert_eq!(is_j_cofinal(&u, &k), is_final_functor(&u), "{}", u.name());
        }
    }

    #[test]
    fn local_sites() {
        let c = fixtures::arrow();
        assert_eq!(is_local_site(&GrothendieckTopology::trivial(c.clone())), Ok(true));
        let f = c.find_morphism("f").unwrap();
        let j = GrothendieckTopology::saturate(c.clone(), &[(Ob(1), vec![f])]).unwrap();
        assert_eq!(is_local_site(&j), Ok(false));
        assert!(matches!(
            is_local_site(&GrothendieckTopology::trivial(fixtures::par_pair())),
            Err(SiteError::NoTerminalObject(_))
        ));
    }

    #[test]
    fn global_element_lifting_of_points() {
        assert_eq!(lifts_global_elements(&fixtures::u_zero()), Ok(false));
        assert_eq!(lifts_global_elements(&fixtures::v_one()), Ok(true));
        let id = FinFunctor::identity(fixtures::sq());
        assert_eq!(lifts_global_elements(&id), Ok(true));
    }

    #[test]
    fn verdicts_on_points() {
        let (one, arrow) = (fixtures::one(), fixtures::arrow());
        let j = GrothendieckTopology::trivial(one);
        let k = GrothendieckTopology::trivial(arrow);
        assert_eq!(tc_by_local_site(&fixtures::v_one(), &j, &k), Ok(TcVerdict::TerminallyConnected));
        assert_eq!(tc_by_local_site(&fixtures::u_zero(), &j, &k), Ok(TcVerdict::NotTerminallyConnected));
        for u in [fixtures::u_zero(), fixtures::v_one()] {
            let expected = if is_terminally_connected_essential(&u) {
                TcVerdict::TerminallyConnected
            } else {
                TcVerdict::NotTerminallyConnected
            };
            assert_eq!(comorphism_tc(&u, &j, &k), Ok(expected));
        }
    }

    #[test]
    fn limit_preservation() {
        assert!(preserves_existing_limits(&fixtures::v_one()));
        assert!(!preserves_existing_limits(&fixtures::u_zero()));
    }
}
