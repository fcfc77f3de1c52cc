use std::collections::HashSet;
use std::sync::Arc;

use super::{Generator, Presentation, PresentationError};
use crate::fincat::{FinCategory, FinFunctor, Mor, Ob};

/// The cocomma collage of a span `B <-f- A -g-> C`.
///
/// Objects are those of `B` and `C`, with one formal arrow
/// `psi_a : f(a) -> g(a)` per object of `A`, subject to
/// `psi_a' . f(k) = g(k) . psi_a`. When `A` has a terminal object sent to
/// terminal objects by both `f` and `g`, those two objects are identified
/// and `psi` at the terminal object becomes the identity.
#[derive(Clone, Debug)]
pub struct Collage {
    pub category: Arc<FinCategory>,
    /// Inclusion of `C`, the side opposite to `f`.
    pub q1: FinFunctor,
    /// Inclusion of `B`, the side opposite to `g`.
    pub q2: FinFunctor,
    /// `psi_a` for each object `a` of `A`.
    pub formal_arrows: Vec<Mor>,
    pub identified_terminal: bool,
}

const LIMIT: usize = 20_000;

pub fn cocomma_collage(f: &FinFunctor, g: &FinFunctor) -> Result<Collage, PresentationError> {
    assert_eq!(f.domain(), g.domain(), "collage of functors with different domains");
    let (a, b, c) = (&**f.domain(), &**f.codomain(), &**g.codomain());
    let shared_terminal = a.terminal_object().filter(|&t| {
        b.terminal_object().is_some_and(|tb| !b.isos(f.ob(t), tb).is_empty())
            && c.terminal_object().is_some_and(|tc| !c.isos(g.ob(t), tc).is_empty())
    });
    let merged_c = shared_terminal.map(|t| g.ob(t));

    // object numbering: B's objects, then C's except the merged one
    let mut c_obj = vec![Ob(usize::MAX); c.n_objects()];
    let mut n = b.n_objects();
    for o in c.objects() {
        if Some(o) == merged_c {
            c_obj[o.0] = f.ob(shared_terminal.unwrap());
        } else {
            c_obj[o.0] = Ob(n);
            n += 1;
        }
    }
    let b_names: HashSet<&str> = b.object_names().iter().map(String::as_str).collect();
    let clash = c
        .objects()
        .filter(|&o| Some(o) != merged_c)
        .any(|o| b_names.contains(c.obj_name(o)));
    let mut objects: Vec<String> = b
        .objects()
        .map(|o| if clash { format!("L.{}", b.obj_name(o)) } else { b.obj_name(o).to_string() })
        .collect();
    objects.extend(
        c.objects()
            .filter(|&o| Some(o) != merged_c)
            .map(|o| if clash { format!("R.{}", c.obj_name(o)) } else { c.obj_name(o).to_string() }),
    );

    let b_mor_names: HashSet<&str> = b.morphism_data().iter().map(|d| d.name.as_str()).collect();
    let mor_clash = c.morphism_data().iter().any(|d| b_mor_names.contains(d.name.as_str()));
    let mut generators = Vec::new();
    let mut b_gen = vec![None; b.n_morphisms()];
    for m in b.morphisms().filter(|&m| !b.is_identity(m)) {
        b_gen[m.0] = Some(generators.len());
        let name = if mor_clash { format!("L.{}", b.mor_name(m)) } else { b.mor_name(m).to_string() };
        generators.push(Generator {
            name,
            source: b.source(m),
            target: b.target(m),
        });
    }
    let mut c_gen = vec![None; c.n_morphisms()];
    for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
        c_gen[m.0] = Some(generators.len());
        let name = if mor_clash { format!("R.{}", c.mor_name(m)) } else { c.mor_name(m).to_string() };
        generators.push(Generator {
            name,
            source: c_obj[c.source(m).0],
            target: c_obj[c.target(m).0],
        });
    }
    let psi_gen: Vec<usize> = a
        .objects()
        .map(|x| {
            generators.push(Generator {
                name: format!("psi_{}", a.obj_name(x)),
                source: f.ob(x),
                target: c_obj[g.ob(x).0],
            });
            generators.len() - 1
        })
        .collect();

    let word = |gens: &[Option<usize>], m: Mor| -> Vec<usize> { gens[m.0].into_iter().collect() };
    let mut relations = Vec::new();
    for (cat, gens) in [(b, &b_gen), (c, &c_gen)] {
        for m1 in cat.morphisms().filter(|&m| !cat.is_identity(m)) {
            for &m2 in cat.outgoing(cat.target(m1)) {
                if cat.is_identity(m2) {
                    continue;
                }
                let lhs = vec![gens[m1.0].unwrap(), gens[m2.0].unwrap()];
                relations.push((lhs, word(gens, cat.compose(m2, m1))));
            }
        }
    }
    for k in a.morphisms().filter(|&k| !a.is_identity(k)) {
        let (x, y) = (a.source(k), a.target(k));
        let mut lhs = word(&b_gen, f.mor(k));
        lhs.push(psi_gen[y.0]);
        let mut rhs = vec![psi_gen[x.0]];
        rhs.extend(word(&c_gen, g.mor(k)));
        relations.push((lhs, rhs));
    }
    if let Some(t) = shared_terminal {
        relations.push((vec![psi_gen[t.0]], Vec::new()));
    }

    let pres = Presentation {
        objects,
        generators,
        relations,
    };
    let out = pres.present(&format!("coll({},{})", f.name(), g.name()), LIMIT)?;
    let cat = Arc::new(out.category);
    let image = |gens: &[Option<usize>], src: Ob, m: Mor, is_id: bool| -> Mor {
        if is_id {
            cat.id(src)
        } else {
            out.generator_image[gens[m.0].unwrap()]
        }
    };
    let q1 = FinFunctor::new(
        "q1",
        g.codomain().clone(),
        cat.clone(),
        c_obj.clone(),
        c.morphisms()
            .map(|m| image(&c_gen, c_obj[c.source(m).0], m, c.is_identity(m)))
            .collect(),
    )
    .expect("inclusion of C is a functor");
    let q2 = FinFunctor::new(
        "q2",
        f.codomain().clone(),
        cat.clone(),
        b.objects().collect(),
        b.morphisms()
            .map(|m| image(&b_gen, b.source(m), m, b.is_identity(m)))
            .collect(),
    )
    .expect("inclusion of B is a functor");
    let formal_arrows = psi_gen.iter().map(|&p| out.generator_image[p]).collect();
    Ok(Collage {
        category: cat,
        q1,
        q2,
        formal_arrows,
        identified_terminal: shared_terminal.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;

    #[test]
    fn collage_of_identities_on_one() {
        let id = FinFunctor::identity(fixtures::one());
        let col = cocomma_collage(&id, &id).unwrap();
        assert_eq!(col.category.n_morphisms(), 1);
        assert!(col.category.is_identity(col.formal_arrows[0]));
    }

    #[test]
    fn collage_of_point_zero() {
        let u = fixtures::u_zero();
        let id = FinFunctor::identity(fixtures::one());
        let col = cocomma_collage(&u, &id).unwrap();
        let cat = &col.category;
        assert_eq!(cat.n_objects(), 3);
        // identities, f, psi, and nothing else: 1 -> x has no arrow
        assert_eq!(cat.n_morphisms(), 5);
        assert!(!col.identified_terminal);
    }

    #[test]
    fn collage_of_identities_on_arrow() {
        let id = FinFunctor::identity(fixtures::arrow());
        let col = cocomma_collage(&id, &id).unwrap();
        let cat = &col.category;
        assert!(col.identified_terminal);
        // the chain L.0 -> R.0 -> 1
        assert_eq!(cat.n_objects(), 3);
        assert!(cat.is_preorder());
        assert_eq!(cat.n_morphisms(), 6);
        assert!(cat.terminal_object().is_some());
    }
}
