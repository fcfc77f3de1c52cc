use std::collections::HashMap;
use std::sync::Arc;

use super::uniquify;
use crate::fincat::{fixtures, identity_name, FinCategory, FinFunctor, MorphismData, Mor, Ob};

/// The comma category `F ↓ G` with its two projections.
///
/// Objects are triples `(a, b, h : F a -> G b)`; a morphism
/// `(a, b, h) -> (a', b', h')` is a pair `(k : a -> a', l : b -> b')` with
/// `G(l) . h = h' . F(k)`.
#[derive(Clone, Debug)]
pub struct CommaCategory {
    pub category: Arc<FinCategory>,
    pub proj_left: FinFunctor,
    pub proj_right: FinFunctor,
    pub objects: Vec<(Ob, Ob, Mor)>,
    pub morphisms: Vec<(Mor, Mor)>,
}

impl CommaCategory {
    pub fn find(&self, a: Ob, b: Ob, h: Mor) -> Option<Ob> {
        self.objects.iter().position(|&t| t == (a, b, h)).map(Ob)
    }
}

pub fn comma(f: &FinFunctor, g: &FinFunctor) -> CommaCategory {
    assert_eq!(f.codomain(), g.codomain(), "comma of functors with different codomains");
    let (ca, cb, cc) = (f.domain().clone(), g.domain().clone(), f.codomain().clone());
    let mut objects = Vec::new();
    for a in ca.objects() {
        for b in cb.objects() {
            for &h in cc.hom(f.ob(a), g.ob(b)) {
                objects.push((a, b, h));
            }
        }
    }
    let obj_names: Vec<String> = objects
        .iter()
        .map(|&(a, b, h)| format!("({},{},{})", ca.obj_name(a), cb.obj_name(b), cc.mor_name(h)))
        .collect();
    let mut morphisms = Vec::new();
    let mut data = Vec::new();
    let mut identities = vec![Mor(0); objects.len()];
    let mut index: HashMap<(usize, usize, Mor, Mor), Mor> = HashMap::new();
    for (i, &(a, b, h)) in objects.iter().enumerate() {
        for (j, &(a2, b2, h2)) in objects.iter().enumerate() {
            for &k in ca.hom(a, a2) {
                for &l in cb.hom(b, b2) {
                    if cc.compose(g.mor(l), h) != cc.compose(h2, f.mor(k)) {
                        continue;
                    }
                    let m = Mor(morphisms.len());
                    if i == j && ca.is_identity(k) && cb.is_identity(l) {
                        identities[i] = m;
                    }
                    index.insert((i, j, k, l), m);
                    morphisms.push((k, l));
                    data.push((Ob(i), Ob(j)));
                }
            }
        }
    }
    let names: Vec<String> = morphisms
        .iter()
        .zip(&data)
        .enumerate()
        .map(|(m, (&(k, l), &(s, _)))| {
            if identities[s.0] == Mor(m) {
                identity_name(&obj_names[s.0])
            } else {
                format!("<{},{}>", ca.mor_name(k), cb.mor_name(l))
            }
        })
        .collect();
    let names = uniquify(names);
    let mdata = names
        .into_iter()
        .zip(&data)
        .map(|(name, &(s, t))| MorphismData {
            name,
            source: s,
            target: t,
        })
        .collect();
    let cat = FinCategory::from_parts(
        format!("{}|{}", f.name(), g.name()),
        obj_names,
        mdata,
        identities,
        |m2, m1| {
            let (i, _) = data[m1.0];
            let (_, j) = data[m2.0];
            let (k1, l1) = morphisms[m1.0];
            let (k2, l2) = morphisms[m2.0];
            index
                .get(&(i.0, j.0, ca.compose(k2, k1), cb.compose(l2, l1)))
                .copied()
        },
    )
    .expect("comma category satisfies the category laws");
    let cat = Arc::new(cat);
    let proj_left = FinFunctor::new(
        "pl",
        cat.clone(),
        ca.clone(),
        objects.iter().map(|t| t.0).collect(),
        morphisms.iter().map(|m| m.0).collect(),
    )
    .expect("left projection is a functor");
    let proj_right = FinFunctor::new(
        "pr",
        cat.clone(),
        cb.clone(),
        objects.iter().map(|t| t.1).collect(),
        morphisms.iter().map(|m| m.1).collect(),
    )
    .expect("right projection is a functor");
    CommaCategory {
        category: cat,
        proj_left,
        proj_right,
        objects,
        morphisms,
    }
}

/// The functor `One -> D` picking `d`.
pub fn point(d: &Arc<FinCategory>, o: Ob) -> FinFunctor {
    FinFunctor::constant(fixtures::one(), d.clone(), o).with_name(d.obj_name(o).to_string())
}

/// `d ↓ u`: objects `(c, h : d -> u c)`.
pub fn coslice_of_functor(d: Ob, u: &FinFunctor) -> CommaCategory {
    comma(&point(u.codomain(), d), u)
}

/// `u ↓ d`: objects `(c, h : u c -> d)`.
pub fn slice_of_functor(u: &FinFunctor, d: Ob) -> CommaCategory {
    comma(u, &point(u.codomain(), d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coslices_on_arrow() {
        let v = fixtures::v_one();
        let u = fixtures::u_zero();
        let id = FinFunctor::identity(fixtures::arrow());
        // comma(v, id): objects (x, b, 1 -> b); only b = 1.
        assert_eq!(comma(&v, &id).category.n_objects(), 1);
        // comma(u, id) is the coslice 0 ↓ Arrow ≅ Arrow.
        let c = comma(&u, &id);
        assert_eq!((c.category.n_objects(), c.category.n_morphisms()), (2, 3));
        let one = FinFunctor::identity(fixtures::one());
        assert_eq!(comma(&one, &one).category.n_morphisms(), 1);
    }
}
