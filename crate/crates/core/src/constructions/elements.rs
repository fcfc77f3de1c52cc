use std::sync::Arc;

use crate::fincat::{identity_name, FinCategory, FinFunctor, MorphismData, Mor, Ob};
use crate::presheaf::FinPresheaf;

/// The category of elements of a presheaf together with its projection.
///
/// Objects are pairs `(c, x)` with `x` in `X(c)`, ordered by `c` then `x`.
/// Each `g : c' -> c` and `x` in `X(c)` give one morphism
/// `(c', X(g)(x)) -> (c, x)`.
#[derive(Clone, Debug)]
pub struct Elements {
    presheaf: Arc<FinPresheaf>,
    category: Arc<FinCategory>,
    projection: FinFunctor,
    objects: Vec<(Ob, usize)>,
    object_index: Vec<Vec<Ob>>,
    morphisms: Vec<(Mor, usize)>,
    morphism_index: Vec<Vec<Mor>>,
}

impl Elements {
    pub fn presheaf(&self) -> &Arc<FinPresheaf> {
        &self.presheaf
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn projection(&self) -> &FinFunctor {
        &self.projection
    }

    /// The object `(c, x)`.
    pub fn object(&self, c: Ob, x: usize) -> Ob {
        self.object_index[c.0][x]
    }

    /// The pair `(c, x)` of an object.
    pub fn element(&self, o: Ob) -> (Ob, usize) {
        self.objects[o.0]
    }

    /// The morphism `(c', X(g)(x)) -> (c, x)`.
    pub fn morphism(&self, g: Mor, x: usize) -> Mor {
        self.morphism_index[g.0][x]
    }

    /// The pair `(g, x)` of a morphism.
    pub fn lift(&self, m: Mor) -> (Mor, usize) {
        self.morphisms[m.0]
    }
}

pub fn category_of_elements(x: &Arc<FinPresheaf>) -> Elements {
    let c = x.base().clone();
    let mut objects = Vec::new();
    let mut object_index = Vec::with_capacity(c.n_objects());
    let mut obj_names = Vec::new();
    for a in c.objects() {
        let mut row = Vec::with_capacity(x.size(a));
        for e in 0..x.size(a) {
            row.push(Ob(objects.len()));
            objects.push((a, e));
            obj_names.push(format!("({},{})", c.obj_name(a), x.label(a, e)));
        }
        object_index.push(row);
    }
    let mut morphisms = Vec::new();
    let mut morphism_index = Vec::with_capacity(c.n_morphisms());
    let mut data = Vec::new();
    let mut identities = vec![Mor(0); objects.len()];
    for g in c.morphisms() {
        let (s, t) = (c.source(g), c.target(g));
        let mut row = Vec::with_capacity(x.size(t));
        for e in 0..x.size(t) {
            let m = Mor(morphisms.len());
            let src = object_index[s.0][x.act(g, e)];
            let tgt = object_index[t.0][e];
            let name = if c.is_identity(g) {
                identities[tgt.0] = m;
                identity_name(&obj_names[tgt.0])
            } else {
                format!("{}|{}", c.mor_name(g), x.label(t, e))
            };
            row.push(m);
            morphisms.push((g, e));
            data.push(MorphismData {
                name,
                source: src,
                target: tgt,
            });
        }
        morphism_index.push(row);
    }
    let cat = FinCategory::from_parts(
        format!("el({})", x.name()),
        obj_names,
        data,
        identities,
        |m2, m1| {
            let (g2, e2) = morphisms[m2.0];
            let (g1, _) = morphisms[m1.0];
            Some(morphism_index[c.compose(g2, g1).0][e2])
        },
    )
    .expect("category of elements satisfies the category laws");
    let cat = Arc::new(cat);
    let projection = FinFunctor::new(
        "proj",
        cat.clone(),
        c.clone(),
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    )
    .expect("projection is a functor");
    Elements {
        presheaf: x.clone(),
        category: cat,
        projection,
        objects,
        object_index,
        morphisms,
        morphism_index,
    }
}
