use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::CofilteredDiagram;
use crate::constructions::uniquify;
use crate::fincat::{FinCategory, FinFunctor, MorphismData, Mor, Ob};

/// The oplax colimit of the slice systems with its cartesian and vertical
/// morphisms marked.
///
/// Objects are pairs `(i, h)` with `h : D -> C_i` in `S_i`; a morphism
/// `(i0, h0) -> (i1, h1)` is a pair `(d : i0 -> i1, g : D0 -> D1)` with
/// `h1 g = u_d h0`, composed componentwise. It is cartesian when that
/// square is a pullback and vertical when `d` is an identity.
#[derive(Clone, Debug)]
pub struct MarkedOplaxColimit {
    diagram: Arc<CofilteredDiagram>,
    category: Arc<FinCategory>,
    objects: Vec<(Ob, Mor)>,
    morphisms: Vec<(Mor, Mor)>,
    cartesian: Vec<bool>,
    projection: FinFunctor,
}

pub fn build_oplax_colimit(diagram: &Arc<CofilteredDiagram>) -> MarkedOplaxColimit {
    let (i_cat, c) = (diagram.index().clone(), diagram.target().clone());
    let mut objects = Vec::new();
    for i in i_cat.objects() {
        for &h in diagram.slice(i) {
            objects.push((i, h));
        }
    }
    let obj_names: Vec<String> = objects
        .iter()
        .map(|&(i, h)| format!("{}:{}", i_cat.obj_name(i), c.mor_name(h)))
        .collect();
    let mut morphisms = Vec::new();
    let mut data = Vec::new();
    let mut identities = vec![Mor(0); objects.len()];
    let mut index: HashMap<(usize, usize, Mor, Mor), Mor> = HashMap::new();
    for (a, &(i0, h0)) in objects.iter().enumerate() {
        for (b, &(i1, h1)) in objects.iter().enumerate() {
            for &d in i_cat.hom(i0, i1) {
                let ud = diagram.transition(d);
                let target = c.compose(ud, h0);
                for &g in c.hom(c.source(h0), c.source(h1)) {
                    if c.compose(h1, g) != target {
                        continue;
                    }
                    let m = Mor(morphisms.len());
                    if a == b && i_cat.is_identity(d) && c.is_identity(g) {
                        identities[a] = m;
                    }
                    index.insert((a, b, d, g), m);
                    morphisms.push((d, g));
                    data.push((Ob(a), Ob(b), format!("({},{})", i_cat.mor_name(d), c.mor_name(g))));
                }
            }
        }
    }
    let names = uniquify(data.iter().map(|t| t.2.clone()).collect());
    let mdata: Vec<MorphismData> = data
        .iter()
        .zip(names)
        .map(|(&(s, t, _), name)| MorphismData { name, source: s, target: t })
        .collect();
    let comp = |m2: Mor, m1: Mor| {
        let (d1, g1) = morphisms[m1.0];
        let (d2, g2) = morphisms[m2.0];
        let (a, b) = (data[m1.0].0 .0, data[m2.0].1 .0);
        index
            .get(&(a, b, i_cat.compose(d2, d1), c.compose(g2, g1)))
            .copied()
    };
    let name = format!("oplax({})", diagram.name());
    let category = Arc::new(
        FinCategory::from_parts(name, obj_names, mdata, identities, comp)
            .expect("oplax colimit is a category"),
    );
    let cartesian = morphisms
        .iter()
        .zip(&data)
        .map(|(&(d, g), &(s, t, _))| {
            let (h0, h1) = (objects[s.0].1, objects[t.0].1);
            c.is_pullback(diagram.transition(d), h1, h0, g)
        })
        .collect();
    let projection = FinFunctor::new(
        "proj",
        category.clone(),
        i_cat.clone(),
        objects.iter().map(|o| o.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    )
    .expect("projection is a functor");
    MarkedOplaxColimit {
        diagram: diagram.clone(),
        category,
        objects,
        morphisms,
        cartesian,
        projection,
    }
}

impl MarkedOplaxColimit {
    pub fn diagram(&self) -> &Arc<CofilteredDiagram> {
        &self.diagram
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    /// `(i, h)`
    pub fn object(&self, o: Ob) -> (Ob, Mor) {
        self.objects[o.0]
    }

    pub fn find_object(&self, i: Ob, h: Mor) -> Option<Ob> {
        self.objects.iter().position(|&o| o == (i, h)).map(Ob)
    }

    /// `(d, g)`
    pub fn morphism(&self, m: Mor) -> (Mor, Mor) {
        self.morphisms[m.0]
    }

    pub fn find_morphism(&self, source: Ob, target: Ob, d: Mor, g: Mor) -> Option<Mor> {
        self.category
            .hom(source, target)
            .iter()
            .copied()
            .find(|&m| self.morphisms[m.0] == (d, g))
    }

    pub fn is_cartesian(&self, m: Mor) -> bool {
        self.cartesian[m.0]
    }

    pub fn is_vertical(&self, m: Mor) -> bool {
        self.diagram.index().is_identity(self.morphisms[m.0].0)
    }

    pub fn cartesian(&self) -> &[bool] {
        &self.cartesian
    }

    /// The fibration `(i, h) |-> i`.
    pub fn projection(&self) -> &FinFunctor {
        &self.projection
    }

    /// The same category with a different cartesian class, for testing the
    /// Ore check against bad markings.
    pub fn with_marking(&self, cartesian: Vec<bool>) -> Self {
        assert_eq!(cartesian.len(), self.morphisms.len(), "marking of the wrong size");
        MarkedOplaxColimit {
            cartesian,
            ..self.clone()
        }
    }

    /// Factors `m` as a vertical morphism followed by the cartesian lift of
    /// its index component along the chosen pullback.
    pub fn vertical_cartesian(&self, m: Mor) -> (Mor, Mor) {
        let c = self.diagram.target();
        let (d, g) = self.morphisms[m.0];
        let (s, t) = (self.category.source(m), self.category.target(m));
        let (i0, h0) = self.objects[s.0];
        let h1 = self.objects[t.0].1;
        let (k, p) = self.diagram.pullback(d, h1);
        let mid = self.find_object(i0, k).expect("pullback lies in the slice system");
        let v = c
            .hom(c.source(h0), c.source(k))
            .iter()
            .copied()
            .find(|&w| c.compose(k, w) == h0 && c.compose(p, w) == g)
            .expect("pullback mediates");
        let id = self.diagram.index().id(i0);
        let vert = self.find_morphism(s, mid, id, v).expect("vertical part exists");
        let cart = self.find_morphism(mid, t, d, p).expect("cartesian part exists");
        (vert, cart)
    }
}

/// What an exhaustive Ore check went through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OreCertificate {
    pub cartesian: usize,
    pub composites: usize,
    pub cospans: usize,
    pub forks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OreFailure {
    IdentityNotMarked(Mor),
    NotClosed { first: Mor, second: Mor },
    /// No square closes `f` against the marked `w`.
    NoSquare { f: Mor, w: Mor },
    /// `w f1 = w f2` with `w` marked, but no marked `t` has `f1 t = f2 t`.
    NoEqualizer { w: Mor, f1: Mor, f2: Mor },
}

/// Right calculus of fractions for the marked class `W`: identities and
/// composites are marked; every cospan `f`, `w` with `w` marked closes to a
/// square `w f' = f w'` with `w'` marked; `w f1 = w f2` with `w` marked
/// implies `f1 t = f2 t` for some marked `t`.
pub fn check_ore(mol: &MarkedOplaxColimit) -> Result<OreCertificate, OreFailure> {
    let cat = &*mol.category;
    let w = &mol.cartesian;
    let mut cert = OreCertificate {
        cartesian: w.iter().filter(|&&b| b).count(),
        composites: 0,
        cospans: 0,
        forks: 0,
    };
    for o in cat.objects() {
        if !w[cat.id(o).0] {
            return Err(OreFailure::IdentityNotMarked(cat.id(o)));
        }
    }
    for f in cat.morphisms().filter(|f| w[f.0]) {
        for &g in cat.outgoing(cat.target(f)) {
            if w[g.0] {
                cert.composites += 1;
                if !w[cat.compose(g, f).0] {
                    return Err(OreFailure::NotClosed { first: f, second: g });
                }
            }
        }
    }
    for wm in cat.morphisms().filter(|m| w[m.0]) {
        let z = cat.target(wm);
        let y = cat.source(wm);
        for &f in cat.incoming(z) {
            cert.cospans += 1;
            let x = cat.source(f);
            let closes = cat.incoming(x).any(|&w2| {
                w[w2.0] && {
                    let fw = cat.compose(f, w2);
                    cat.hom(cat.source(w2), y).iter().any(|&f2| cat.compose(wm, f2) == fw)
                }
            });
            if !closes {
                return Err(OreFailure::NoSquare { f, w: wm });
            }
        }
    }
    for wm in cat.morphisms().filter(|m| w[m.0]) {
        let y = cat.source(wm);
        for x in cat.objects() {
            let hom = cat.hom(x, y);
            for (k, &f1) in hom.iter().enumerate() {
                for &f2 in &hom[k + 1..] {
                    if cat.compose(wm, f1) != cat.compose(wm, f2) {
                        continue;
                    }
                    cert.forks += 1;
                    let ok = cat
                        .incoming(x)
                        .any(|&t| w[t.0] && cat.compose(f1, t) == cat.compose(f2, t));
                    if !ok {
                        return Err(OreFailure::NoEqualizer { w: wm, f1, f2 });
                    }
                }
            }
        }
    }
    Ok(cert)
}
