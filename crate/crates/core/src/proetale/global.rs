use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{FractionCategory, ProetaleError};
use crate::constructions::is_initial_functor;
use crate::fincat::{FinCategory, FinFunctor, MorphismData, Mor, Ob};

/// A product `C_i x c` found inside the slice system at `i`: the projection
/// `first : P -> C_i` (an element of `S_i`) and `second : P -> c`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceProduct {
    pub object: Ob,
    pub first: Mor,
    pub second: Mor,
}

/// Looks for `C_i x c` in `S_i`, returning the oplax-colimit object.
pub fn slice_product(fc: &FractionCategory, i: Ob, c: Ob) -> Option<SliceProduct> {
    let mol = fc.mol();
    let diagram = mol.diagram();
    let cat = diagram.target();
    diagram.slice(i).iter().find_map(|&h| {
        cat.hom(cat.source(h), c)
            .iter()
            .find(|&&r| cat.is_product(h, r))
            .map(|&r| SliceProduct {
                object: mol.find_object(i, h).expect("slice object"),
                first: h,
                second: r,
            })
    })
}

fn products_for(fc: &FractionCategory, c: Ob) -> Result<Vec<SliceProduct>, ProetaleError> {
    fc.mol()
        .diagram()
        .index()
        .objects()
        .map(|i| slice_product(fc, i, c).ok_or(ProetaleError::MissingProduct { index: i, object: c }))
        .collect()
}

/// The unique `g : dom(p) -> dom(q)` with `q.first g = pre` and
/// `q.second g = post`.
fn pair_into(cat: &FinCategory, p_dom: Ob, q: &SliceProduct, pre: Mor, post: Mor) -> Mor {
    cat.hom(p_dom, cat.source(q.first))
        .iter()
        .copied()
        .find(|&g| cat.compose(q.first, g) == pre && cat.compose(q.second, g) == post)
        .expect("product mediates")
}

/// Canonical isomorphisms used to compare classes living over different
/// indices: everything is moved to the least index object.
struct Transport<'a> {
    fc: &'a FractionCategory,
    base: Ob,
}

impl<'a> Transport<'a> {
    fn new(fc: &'a FractionCategory) -> Self {
        Transport { fc, base: Ob(0) }
    }

    /// Least `(m, d : m -> k, d' : m -> base)`.
    fn span(&self, k: Ob) -> (Ob, Mor, Mor) {
        let i_cat = self.fc.mol().diagram().index();
        i_cat
            .objects()
            .find_map(|m| {
                let d = i_cat.hom(m, k).first()?;
                let d2 = i_cat.hom(m, self.base).first()?;
                Some((m, *d, *d2))
            })
            .expect("cofiltered index")
    }

    fn loc(&self, m: Mor) -> Mor {
        self.fc.localization().mor(m)
    }

    fn inverse(&self, m: Mor) -> Mor {
        self.fc.category().inverse(m).expect("cartesian maps become invertible")
    }

    /// `T_i = (i, 1_{C_i})`
    fn terminal(&self, i: Ob) -> Ob {
        let d = self.fc.mol().diagram();
        self.fc.mol().find_object(i, d.target().id(d.object(i))).expect("identity in slice")
    }

    /// The cartesian map `T_m -> T_k` over `d`.
    fn terminal_map(&self, d: Mor) -> Mor {
        let mol = self.fc.mol();
        let i_cat = mol.diagram().index();
        let (m, k) = (i_cat.source(d), i_cat.target(d));
        mol.find_morphism(self.terminal(m), self.terminal(k), d, mol.diagram().transition(d))
            .expect("transition between terminal objects")
    }

    /// The cartesian map `P_m(c) -> P_k(c)` over `d`.
    fn product_map(&self, d: Mor, prods: &[SliceProduct]) -> Mor {
        let mol = self.fc.mol();
        let diagram = mol.diagram();
        let cat = diagram.target();
        let i_cat = diagram.index();
        let (m, k) = (i_cat.source(d), i_cat.target(d));
        let (pm, pk) = (&prods[m.0], &prods[k.0]);
        let g = pair_into(
            cat,
            cat.source(pm.first),
            pk,
            cat.compose(diagram.transition(d), pm.first),
            pm.second,
        );
        mol.find_morphism(pm.object, pk.object, d, g).expect("product transition")
    }

    /// `T_base -> T_k` in the fraction category.
    fn to_terminal(&self, k: Ob) -> Mor {
        let (_, d, d2) = self.span(k);
        let cat = self.fc.category();
        cat.compose(self.loc(self.terminal_map(d)), self.inverse(self.loc(self.terminal_map(d2))))
    }

    /// `P_k(c) -> P_base(c)` in the fraction category.
    fn from_product(&self, k: Ob, prods: &[SliceProduct]) -> Mor {
        let (_, d, d2) = self.span(k);
        let cat = self.fc.category();
        cat.compose(
            self.loc(self.product_map(d2, prods)),
            self.inverse(self.loc(self.product_map(d, prods))),
        )
    }

    /// The class of the vertical section `(1, a) : C_k -> C_k x c`, moved to
    /// the base index.
    fn element(&self, k: Ob, a: Mor, prods: &[SliceProduct]) -> Mor {
        let mol = self.fc.mol();
        let diagram = mol.diagram();
        let cat = diagram.target();
        let ck = diagram.object(k);
        let p = &prods[k.0];
        let sigma = pair_into(cat, ck, p, cat.id(ck), a);
        let v = mol
            .find_morphism(self.terminal(k), p.object, diagram.index().id(k), sigma)
            .expect("vertical section");
        let fcat = self.fc.category();
        fcat.compose(self.from_product(k, prods), fcat.compose(self.loc(v), self.to_terminal(k)))
    }
}

/// A global element of `p(c)` in the pseudocolimit, with every vertical
/// representative `(k, a : C_k -> c)` that normalizes to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudocolimElement {
    /// The class `T -> p(c)` at the least index object.
    pub class: Mor,
    pub representatives: Vec<(Ob, Mor)>,
}

impl PseudocolimElement {
    /// The least vertical representative.
    pub fn normal_form(&self) -> (Ob, Mor) {
        self.representatives[0]
    }
}

pub fn pseudocolim_global_elements(fc: &FractionCategory, c: Ob) -> Result<Vec<PseudocolimElement>, ProetaleError> {
    let prods = products_for(fc, c)?;
    let t = Transport::new(fc);
    let diagram = fc.mol().diagram();
    let cat = diagram.target();
    let mut by_class: BTreeMap<Mor, Vec<(Ob, Mor)>> = fc
        .category()
        .hom(t.terminal(t.base), prods[t.base.0].object)
        .iter()
        .map(|&m| (m, Vec::new()))
        .collect();
    for k in diagram.index().objects() {
        for &a in cat.hom(diagram.object(k), c) {
            let class = t.element(k, a, &prods);
            by_class
                .get_mut(&class)
                .ok_or_else(|| ProetaleError::Internal("element outside the hom-set".into()))?
                .push((k, a));
        }
    }
    by_class
        .into_iter()
        .map(|(class, representatives)| {
            if representatives.is_empty() {
                Err(ProetaleError::NoVerticalRepresentative(class))
            } else {
                Ok(PseudocolimElement { class, representatives })
            }
        })
        .collect()
}

/// The category of global elements of `p`: objects `(c, e)` with `e` a
/// global element of `p(c)`, morphisms `k : c -> c'` carrying `e` to `e'`.
#[derive(Clone, Debug)]
pub struct GlobalElementCategory {
    pub category: Arc<FinCategory>,
    pub objects: Vec<(Ob, Mor)>,
    pub under: Vec<Mor>,
}

pub fn global_element_category(fc: &FractionCategory) -> Result<GlobalElementCategory, ProetaleError> {
    let diagram = fc.mol().diagram();
    let cat = diagram.target().clone();
    let t = Transport::new(fc);
    let fcat = fc.category();
    let prods: Vec<Vec<SliceProduct>> = cat.objects().map(|c| products_for(fc, c)).collect::<Result<_, _>>()?;
    let base = |c: Ob| prods[c.0][t.base.0];
    // p(k) at the base index, as a map of fraction classes
    let pbar = |k: Mor| -> Mor {
        let (p, q) = (base(cat.source(k)), base(cat.target(k)));
        let g = pair_into(&cat, cat.source(p.first), &q, p.first, cat.compose(k, p.second));
        let v = fc
            .mol()
            .find_morphism(p.object, q.object, diagram.index().id(t.base), g)
            .expect("vertical product map");
        t.loc(v)
    };
    let tb = t.terminal(t.base);
    let mut objects = Vec::new();
    for c in cat.objects() {
        for &e in fcat.hom(tb, base(c).object) {
            objects.push((c, e));
        }
    }
    let index: BTreeMap<(Ob, Mor), usize> = objects.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let mut data = Vec::new();
    let mut under = Vec::new();
    let mut identities = vec![Mor(0); objects.len()];
    let mut lookup = BTreeMap::new();
    for (n, &(c, e)) in objects.iter().enumerate() {
        for &k in cat.outgoing(c) {
            let e2 = fcat.compose(pbar(k), e);
            let target = index[&(cat.target(k), e2)];
            let m = Mor(data.len());
            if cat.is_identity(k) {
                identities[n] = m;
            }
            lookup.insert((n, k), m);
            data.push(MorphismData {
                name: format!("{}@{}", cat.mor_name(k), fcat.mor_name(e)),
                source: Ob(n),
                target: Ob(target),
            });
            under.push(k);
        }
    }
    let names: Vec<String> = objects
        .iter()
        .map(|&(c, e)| format!("({},{})", cat.obj_name(c), fcat.mor_name(e)))
        .collect();
    let names = crate::constructions::uniquify(names);
    let data_names = crate::constructions::uniquify(data.iter().map(|d| d.name.clone()).collect());
    for (d, n) in data.iter_mut().zip(data_names) {
        d.name = n;
    }
    let comp = |g: Mor, f: Mor| {
        let src = data[f.0].source.0;
        lookup.get(&(src, cat.compose(under[g.0], under[f.0]))).copied()
    };
    let category = FinCategory::from_parts("el(p)", names, data.clone(), identities, comp)
        .map_err(|e| ProetaleError::Internal(format!("global element category: {e}")))?;
    Ok(GlobalElementCategory {
        category: Arc::new(category),
        objects,
        under,
    })
}

/// The functor `i |-> (C_i, diagonal)` into the category of global elements
/// of `p`, and whether it is initial.
#[derive(Clone, Debug)]
pub struct CanonicalReindexing {
    pub elements: GlobalElementCategory,
    pub functor: FinFunctor,
    pub initial: bool,
}

pub fn canonical_reindexing(fc: &FractionCategory) -> Result<CanonicalReindexing, ProetaleError> {
    let elements = global_element_category(fc)?;
    let diagram = fc.mol().diagram();
    let (i_cat, cat) = (diagram.index(), diagram.target());
    let t = Transport::new(fc);
    let mut on_objects = Vec::new();
    for i in i_cat.objects() {
        let ci = diagram.object(i);
        let prods = products_for(fc, ci)?;
        let delta = t.element(i, cat.id(ci), &prods);
        let o = elements
            .objects
            .iter()
            .position(|&x| x == (ci, delta))
            .ok_or_else(|| ProetaleError::Internal("diagonal outside the element category".into()))?;
        on_objects.push(Ob(o));
    }
    let g = &elements.category;
    let mut on_morphisms = Vec::new();
    for d in i_cat.morphisms() {
        let (s, tg) = (on_objects[i_cat.source(d).0], on_objects[i_cat.target(d).0]);
        let ud = diagram.transition(d);
        let m = g
            .hom(s, tg)
            .iter()
            .copied()
            .find(|&m| elements.under[m.0] == ud)
            .ok_or_else(|| ProetaleError::Internal("transition does not preserve diagonals".into()))?;
        on_morphisms.push(m);
    }
    let functor = FinFunctor::new("p~", i_cat.clone(), g.clone(), on_objects, on_morphisms)
        .map_err(|e| ProetaleError::Internal(format!("reindexing functor: {e}")))?;
    let initial = is_initial_functor(&functor);
    Ok(CanonicalReindexing {
        elements,
        functor,
        initial,
    })
}

pub fn canonical_reindexing_initial(fc: &FractionCategory) -> Result<bool, ProetaleError> {
    canonical_reindexing(fc).map(|r| r.initial)
}

/// Every object `(i, h : D -> C_i)` is the pullback, in the fraction
/// category, of `p(h) : p(D) -> p(C_i)` along the diagonal element of
/// `p(C_i)`. Returns the number of objects checked.
pub fn fibers_generate(fc: &FractionCategory) -> Result<usize, ProetaleError> {
    let mol = fc.mol();
    let diagram = mol.diagram();
    let cat = diagram.target();
    let fcat = fc.category();
    let t = Transport::new(fc);
    let mut checked = 0;
    for x in mol.category().objects() {
        let (i, h) = mol.object(x);
        let (dd, ci) = (cat.source(h), diagram.object(i));
        let id_i = diagram.index().id(i);
        let pd = slice_product(fc, i, dd).ok_or(ProetaleError::MissingProduct { index: i, object: dd })?;
        let pc = slice_product(fc, i, ci).ok_or(ProetaleError::MissingProduct { index: i, object: ci })?;
        let vertical = |s: Ob, tg: Ob, g: Mor| t.loc(mol.find_morphism(s, tg, id_i, g).expect("vertical map"));
        let graph = vertical(x, pd.object, pair_into(cat, dd, &pd, h, cat.id(dd)));
        let to_t = vertical(x, t.terminal(i), h);
        let delta = vertical(t.terminal(i), pc.object, pair_into(cat, ci, &pc, cat.id(ci), cat.id(ci)));
        let ph = vertical(
            pd.object,
            pc.object,
            pair_into(cat, cat.source(pd.first), &pc, pd.first, cat.compose(h, pd.second)),
        );
        if !fcat.is_pullback(ph, delta, graph, to_t) {
            return Err(ProetaleError::NotAFiber(x));
        }
        checked += 1;
    }
    Ok(checked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaithfulReport {
    pub pairs: usize,
    pub test_objects: usize,
}

/// Distinct parallel classes `a, b : X -> Y` are told apart by some
/// `y : Y -> p(c)`, i.e. they induce different maps on the categories of
/// elements `Y / p -> X / p`. Test objects are all `C_i x c` present in the
/// slice systems.
pub fn pro_adjoint_faithful_check(fc: &FractionCategory) -> Result<FaithfulReport, ProetaleError> {
    let diagram = fc.mol().diagram();
    let fcat = fc.category();
    let mut tests: Vec<Ob> = Vec::new();
    for i in diagram.index().objects() {
        for c in diagram.target().objects() {
            if let Some(p) = slice_product(fc, i, c) {
                if !tests.contains(&p.object) {
                    tests.push(p.object);
                }
            }
        }
    }
    let mut pairs = 0;
    for x in fcat.objects() {
        for y in fcat.objects() {
            let hom = fcat.hom(x, y);
            for (k, &a) in hom.iter().enumerate() {
                for &b in &hom[k + 1..] {
                    pairs += 1;
                    let separated = tests.iter().any(|&p| {
                        fcat.hom(y, p)
                            .iter()
                            .any(|&e| fcat.compose(e, a) != fcat.compose(e, b))
                    });
                    if !separated {
                        return Err(ProetaleError::NotFaithful { first: a, second: b });
                    }
                }
            }
        }
    }
    Ok(FaithfulReport {
        pairs,
        test_objects: tests.len(),
    })
}
