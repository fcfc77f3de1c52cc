//! Factoring the essential morphism of `u : C -> D` as a terminally
//! connected part followed by an etale part, at the level of sites: `u`
//! factors through the category of elements of `Π = u_!(1)` as a final
//! functor followed by a discrete fibration.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::{
    category_of_elements, check_discrete_fibration, check_final, Elements, FinalityFailure,
};
use crate::fincat::{FinCategory, FinFunctor, Mor, NatTransf, Ob};
use crate::kan::{left_kan, EssentialMorphism};
use crate::presheaf::{coproduct, fiber_inclusion, FinPresheaf, GlobalElement, PresheafMap};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FactorizationError {
    #[error("not terminally connected: {} components over object {}", .0.components, .0.object)]
    NotTerminallyConnected(FinalityFailure),
    #[error("no lift of the global element (inconsistent at object {0})")]
    NoLift(Ob),
    #[error("not a global element of the restriction")]
    NotAnElement,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// `u = right . left` with `left` final and `right` a discrete fibration.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub left: FinFunctor,
    pub mid: Arc<FinCategory>,
    pub right: FinFunctor,
    /// `right . left => u`; the identity, since the factorization is strict.
    pub witness: NatTransf,
    pub elements: Elements,
}

impl Factorization {
    pub fn check(&self) -> Result<(), String> {
        check_final(&self.left).map_err(|e| format!("left part is not final at {}", e.object))?;
        check_discrete_fibration(&self.right)
            .map_err(|e| format!("right part is not a discrete fibration at {}", e.object))?;
        if !self.witness.is_iso() {
            return Err("witness is not invertible".into());
        }
        Ok(())
    }
}

pub fn comprehensive_factorize(u: &FinFunctor) -> Factorization {
    let (c, d) = (u.domain(), u.codomain());
    let one = Arc::new(FinPresheaf::terminal(c.clone()));
    let lk = left_kan(u, &one);
    let pi = Arc::new(crate::kan::components_presheaf(u));
    let el = category_of_elements(&pi);
    // c |-> (u c, [id_{u c}])
    let class = |a: Ob| lk.class_of(u.ob(a), a, d.id(u.ob(a)), 0);
    let on_objects = c.objects().map(|a| el.object(u.ob(a), class(a))).collect();
    let on_morphisms = c
        .morphisms()
        .map(|k| el.morphism(u.mor(k), class(c.target(k))))
        .collect();
    let left = FinFunctor::new(
        format!("{}_tc", u.name()),
        c.clone(),
        el.category().clone(),
        on_objects,
        on_morphisms,
    )
    .expect("left part is a functor");
    let right = el.projection().clone().with_name(format!("{}_et", u.name()));
    let composite = left.then(&right);
    let ids = c.objects().map(|a| d.id(u.ob(a))).collect();
    let witness = NatTransf::new(composite, u.clone(), ids).expect("factorization is strict");
    let f = Factorization {
        left,
        mid: el.category().clone(),
        right,
        witness,
        elements: el,
    };
    if let Err(e) = f.check() {
        panic!("comprehensive factorization of {}: {e}", u.name());
    }
    f
}

/// `Π ≅ 1`, i.e. every `d ↓ u` is connected and non-empty.
pub fn check_terminally_connected(u: &FinFunctor) -> Result<(), FactorizationError> {
    let pi = crate::kan::components_presheaf(u);
    for d in u.codomain().objects() {
        if pi.size(d) != 1 {
            return Err(FactorizationError::NotTerminallyConnected(FinalityFailure {
                object: d,
                components: pi.size(d),
            }));
        }
    }
    Ok(())
}

pub fn is_terminally_connected_essential(u: &FinFunctor) -> bool {
    check_terminally_connected(u).is_ok()
}

/// The unique global element of `E` restricting to `a`. At `d` it is
/// `E(h)(a(c))` for any `h : d -> u c`.
pub fn lift_global_element(
    u: &FinFunctor,
    e: &FinPresheaf,
    a: &GlobalElement,
) -> Result<GlobalElement, FactorizationError> {
    check_terminally_connected(u)?;
    let (c, d) = (u.domain(), u.codomain());
    if a.family.len() != c.n_objects() || !e.restrict(u).is_global_element(&a.family) {
        return Err(FactorizationError::NotAnElement);
    }
    let mut family = Vec::with_capacity(d.n_objects());
    for t in d.objects() {
        let mut value = None;
        for x in c.objects() {
            for &h in d.hom(t, u.ob(x)) {
                let v = e.act(h, a.family[x.0]);
                match value {
                    None => value = Some(v),
                    Some(w) if w != v => return Err(FactorizationError::NoLift(t)),
                    _ => {}
                }
            }
        }
        family.push(value.ok_or(FactorizationError::NoLift(t))?);
    }
    if !e.is_global_element(&family) {
        return Err(FactorizationError::NoLift(Ob(0)));
    }
    Ok(GlobalElement { family })
}

/// The transpose `Π = u_!(1) -> E` of `a : 1 -> u* E`.
pub fn transpose_global_element(u: &FinFunctor, e: &Arc<FinPresheaf>, a: &GlobalElement) -> PresheafMap {
    let em = EssentialMorphism::new(u.clone());
    let ue = Arc::new(em.restrict(e));
    let a_map = PresheafMap::from_global(ue, a).expect("global element of the restriction");
    let (_, _, lan_a) = em.lan_map(&a_map);
    let (_, eps) = em.lan_counit(e);
    lan_a.then(&eps)
}

/// Lifts an `I`-indexed family of global elements of `u* E`, i.e. a map
/// `sum_I 1 -> u* E`.
pub fn lift_constant_family(
    u: &FinFunctor,
    e: &FinPresheaf,
    family: &[GlobalElement],
) -> Result<Vec<GlobalElement>, FactorizationError> {
    check_terminally_connected(u)?;
    family.iter().map(|a| lift_global_element(u, e, a)).collect()
}

/// `sum_I 1` on a category, with elements labelled by `I`.
pub fn constant_coproduct(base: Arc<FinCategory>, index: &[String]) -> FinPresheaf {
    FinPresheaf::constant(base, index)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrthogonalityFailure {
    /// A global element of `u_* u* E` not hit by the unit.
    Missing(Vec<usize>),
    /// Two global elements of `E` with the same image.
    Collision(Vec<usize>, Vec<usize>),
}

/// Whether every `1 -> u_* u* E` factors uniquely through `η : E -> u_* u* E`.
pub fn eta_orthogonal_check(u: &FinFunctor, e: &Arc<FinPresheaf>) -> Result<(), OrthogonalityFailure> {
    let em = EssentialMorphism::new(u.clone());
    let (rk, eta) = em.ran_unit(e);
    let mut seen: Vec<Option<Vec<usize>>> = Vec::new();
    let targets = rk.presheaf.global_elements();
    seen.resize(targets.len(), None);
    for a in e.global_elements() {
        let image = eta.on_global(&a);
        let i = targets.iter().position(|t| *t == image).expect("unit preserves global elements");
        if let Some(prev) = &seen[i] {
            return Err(OrthogonalityFailure::Collision(prev.clone(), a.family));
        }
        seen[i] = Some(a.family);
    }
    match seen.iter().position(Option::is_none) {
        Some(i) => Err(OrthogonalityFailure::Missing(targets[i].family.clone())),
        None => Ok(()),
    }
}

/// Presheaves on `D` used to probe η-orthogonality: the terminal
/// presheaf, `1 + 1`, every representable, and `Π`.
pub fn eta_test_family(u: &FinFunctor) -> Vec<Arc<FinPresheaf>> {
    let d = u.codomain().clone();
    let one = Arc::new(FinPresheaf::terminal(d.clone()));
    let mut out = vec![one.clone(), coproduct(&one, &one).apex];
    out.extend(d.objects().map(|o| Arc::new(FinPresheaf::representable(d.clone(), o))));
    out.push(Arc::new(crate::kan::components_presheaf(u)));
    out
}

/// The 2-cell `u* => w*` induced by `alpha : w => u`, acting on global
/// elements by `a |-> (E(alpha_c)(a_c))_c`.
#[derive(Clone, Debug)]
pub struct TwoCellTransport {
    pub alpha: NatTransf,
}

pub fn transport_elements(alpha: &NatTransf) -> TwoCellTransport {
    TwoCellTransport { alpha: alpha.clone() }
}

impl TwoCellTransport {
    /// Source of the transport: restriction along `u = alpha.target()`.
    pub fn from_functor(&self) -> &FinFunctor {
        self.alpha.target()
    }

    pub fn to_functor(&self) -> &FinFunctor {
        self.alpha.source()
    }

    /// The component `u* E -> w* E`.
    pub fn component(&self, e: &FinPresheaf) -> PresheafMap {
        let (u, w) = (self.from_functor(), self.to_functor());
        let ue = Arc::new(e.restrict(u));
        let we = Arc::new(e.restrict(w));
        let comps = u
            .domain()
            .objects()
            .map(|c| {
                let g = self.alpha.component(c);
                (0..ue.size(c)).map(|x| e.act(g, x)).collect()
            })
            .collect();
        PresheafMap::new_trusted(ue, we, comps)
    }

    /// The image of a global element `a` of `u* E`.
    pub fn element_map(&self, e: &FinPresheaf, a: &GlobalElement) -> GlobalElement {
        self.component(e).on_global(a)
    }

    /// Naturality in `E`: for `h : E -> E'`, transporting then applying `h`
    /// agrees with applying `h` then transporting.
    pub fn check_functorial(&self, h: &PresheafMap, a: &GlobalElement) -> bool {
        let (u, w) = (self.from_functor(), self.to_functor());
        let uh = restrict_map(h, u);
        let wh = restrict_map(h, w);
        let left = wh.on_global(&self.element_map(h.source(), a));
        let right = self.element_map(h.target(), &uh.on_global(a));
        left == right
    }

    /// For `h : D -> E` and a global element `a` of `u* E`, the comparison
    /// from the fiber of `u* h` over `a` to the fiber of `w* h` over the
    /// transported element.
    pub fn fiber_comparison(&self, h: &PresheafMap, a: &GlobalElement) -> PresheafMap {
        let (u, w) = (self.from_functor(), self.to_functor());
        let uh = restrict_map(h, u);
        let wh = restrict_map(h, w);
        let b = self.element_map(h.target(), a);
        let iu = fiber_inclusion(a, &uh);
        let iw = fiber_inclusion(&b, &wh);
        let phi_d = self.component(h.source());
        let comps = u
            .domain()
            .objects()
            .map(|c| {
                iu.component(c)
                    .iter()
                    .map(|&x| {
                        let y = phi_d.apply(c, x);
                        iw.component(c).binary_search(&y).expect("fiber maps into fiber")
                    })
                    .collect()
            })
            .collect();
        PresheafMap::new_trusted(iu.source().clone(), iw.source().clone(), comps)
    }

    /// The comparison composed with the inclusion of its target equals the
    /// transport of `D` composed with the inclusion of its source.
    pub fn check_pasting(&self, h: &PresheafMap, a: &GlobalElement) -> bool {
        let (u, w) = (self.from_functor(), self.to_functor());
        let cmp = self.fiber_comparison(h, a);
        let b = self.element_map(h.target(), a);
        let iu = fiber_inclusion(a, &restrict_map(h, u));
        let iw = fiber_inclusion(&b, &restrict_map(h, w));
        let phi_d = self.component(h.source());
        cmp.then(&iw).components() == iu.then(&phi_d).components()
    }
}

fn restrict_map(h: &PresheafMap, u: &FinFunctor) -> PresheafMap {
    EssentialMorphism::new(u.clone()).restrict_map(h)
}

/// Result of decomposing an oplax square through an etale projection.
#[derive(Clone, Debug)]
pub struct OplaxDecomposition {
    /// The mediating functor `h : C_F -> el(X)`.
    pub h: FinFunctor,
    /// `h . t => g`, lying over `alpha`.
    pub lambda: NatTransf,
    /// `p . h => f`, invertible.
    pub rho: NatTransf,
}

/// Given the square
///
/// ```text
///   C_G --g--> el(X)
///    |           |
///    t           p
///    v           v
///   C_F --f-->   D
/// ```
/// with `t` final, `p` the projection and `alpha : f . t => p . g`, finds
/// `h` with `p . h = f` and `lambda : h . t => g` such that `p * lambda = alpha`.
pub fn oplax_square_decompose(
    t: &FinFunctor,
    el: &Elements,
    g: &FinFunctor,
    f: &FinFunctor,
    alpha: &NatTransf,
) -> Result<OplaxDecomposition, FactorizationError> {
    let pre = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(FactorizationError::PreconditionViolated(msg.to_string()))
        }
    };
    check_terminally_connected(t)?;
    let p = el.projection();
    let x = el.presheaf();
    pre(g.domain() == t.domain(), "g and t have different domains")?;
    pre(g.codomain() == el.category(), "g does not land in the elements category")?;
    pre(f.domain() == t.codomain() && f.codomain() == p.codomain(), "f does not close the square")?;
    pre(*alpha.source() == t.then(f), "alpha does not start at f . t")?;
    pre(*alpha.target() == g.then(p), "alpha does not end at p . g")?;
    let (cg, cf, d) = (t.domain(), t.codomain(), p.codomain());

    // x_b = X(alpha_c . f(k))(y_c) for any k : b -> t c
    let mut elems = Vec::with_capacity(cf.n_objects());
    for b in cf.objects() {
        let mut value = None;
        for c in cg.objects() {
            let (_, y) = el.element(g.ob(c));
            for &k in cf.hom(b, t.ob(c)) {
                let v = x.act(d.compose(alpha.component(c), f.mor(k)), y);
                match value {
                    None => value = Some(v),
                    Some(w) if w != v => return Err(FactorizationError::NoLift(b)),
                    _ => {}
                }
            }
        }
        elems.push(value.ok_or(FactorizationError::NoLift(b))?);
    }
    let on_objects = cf.objects().map(|b| el.object(f.ob(b), elems[b.0])).collect();
    let on_morphisms: Vec<Mor> = cf
        .morphisms()
        .map(|m| el.morphism(f.mor(m), elems[cf.target(m).0]))
        .collect();
    let h = FinFunctor::new("h", cf.clone(), el.category().clone(), on_objects, on_morphisms)
        .map_err(|e| FactorizationError::PreconditionViolated(e.to_string()))?;
    let lambda_comps = cg
        .objects()
        .map(|c| el.morphism(alpha.component(c), el.element(g.ob(c)).1))
        .collect();
    let lambda = NatTransf::new(t.then(&h), g.clone(), lambda_comps)
        .map_err(|e| FactorizationError::PreconditionViolated(e.to_string()))?;
    let rho = NatTransf::new(
        h.then(p),
        f.clone(),
        cf.objects().map(|b| d.id(f.ob(b))).collect(),
    )
    .expect("p . h = f on the nose");
    debug_assert_eq!(lambda.whisker_right(p).components(), alpha.components());
    Ok(OplaxDecomposition { h, lambda, rho })
}

/// Functors `l : C -> el(P)` with `π_P . l = u`, i.e. global elements of
/// `u* P`; each is returned with whether it is final.
pub fn factorizations_through(u: &FinFunctor, p: &Arc<FinPresheaf>) -> Vec<(FinFunctor, bool)> {
    assert_eq!(p.base(), u.codomain(), "presheaf on the wrong category");
    let el = category_of_elements(p);
    let c = u.domain();
    p.restrict(u)
        .global_elements()
        .into_iter()
        .map(|a| {
            let objs = c.objects().map(|o| el.object(u.ob(o), a.family[o.0])).collect();
            let mors = c
                .morphisms()
                .map(|k| el.morphism(u.mor(k), a.family[c.target(k).0]))
                .collect();
            let l = FinFunctor::new("l", c.clone(), el.category().clone(), objs, mors)
                .expect("a global element gives a lift");
            let fin = check_final(&l).is_ok();
            (l, fin)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{find_isomorphism, is_final_functor};
    use crate::fincat::fixtures;

    #[test]
    fn factorization_of_points_of_arrow() {
        let fu = comprehensive_factorize(&fixtures::u_zero());
        assert_eq!(fu.mid.n_objects(), 1);
        assert_eq!(fu.mid.n_morphisms(), 1);
        let fv = comprehensive_factorize(&fixtures::v_one());
        assert!(find_isomorphism(&fv.mid, &fixtures::arrow()).is_some());
        assert!(fv.right.is_equivalence());
    }

    #[test]
    fn terminal_connectedness_matches_finality() {
        for u in fixtures::functor_catalog() {
            assert_eq!(is_terminally_connected_essential(&u), is_final_functor(&u), "{}", u.name());
        }
    }

    #[test]
    fn lift_along_v() {
        let v = fixtures::v_one();
        let arrow = fixtures::arrow();
        let y1 = FinPresheaf::representable(arrow.clone(), Ob(1));
        let a = GlobalElement { family: vec![0] };
        let lift = lift_global_element(&v, &y1, &a).unwrap();
        let f = arrow.find_morphism("f").unwrap();
        assert_eq!(lift.family, vec![FinPresheaf::representable_index(&arrow, Ob(1), f), 0]);
        assert!(matches!(
            lift_global_element(&fixtures::u_zero(), &y1, &a),
            Err(FactorizationError::NotTerminallyConnected(_))
        ));
    }

    #[test]
    fn eta_orthogonality_detects_non_final() {
        let v = fixtures::v_one();
        for e in eta_test_family(&v) {
            assert_eq!(eta_orthogonal_check(&v, &e), Ok(()));
        }
        let u = fixtures::u_zero();
        assert!(eta_test_family(&u).iter().any(|e| eta_orthogonal_check(&u, e).is_err()));
    }

    #[test]
    fn identity_transport() {
        let u = fixtures::u_zero();
        let t = transport_elements(&NatTransf::identity(&u));
        let arrow = fixtures::arrow();
        let y0 = FinPresheaf::representable(arrow, Ob(0));
        let a = GlobalElement { family: vec![0] };
        assert_eq!(t.element_map(&y0, &a), a);
    }

    #[test]
    fn decomposition_with_identity_t() {
        let arrow = fixtures::arrow();
        let fac = comprehensive_factorize(&FinFunctor::identity(arrow.clone()));
        let t = FinFunctor::identity(arrow.clone());
        let (g, p) = (&fac.left, &fac.right);
        let f = FinFunctor::identity(arrow.clone());
        let ids = arrow.objects().map(|o| arrow.id(o)).collect();
        let alpha = NatTransf::new(t.then(&f), g.then(p), ids).unwrap();
        let dec = oplax_square_decompose(&t, &fac.elements, g, &f, &alpha).unwrap();
        assert_eq!(dec.h, *g);
        assert!(dec.lambda.is_identity() && dec.rho.is_identity());
    }
}
