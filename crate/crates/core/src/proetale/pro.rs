use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::ProetaleError;
use crate::constructions::{check_cofiltered, uniquify};
use crate::fincat::{fixtures, FinCategory, FinFunctor, MorphismData, Mor, Ob};
use crate::presheaf::{all_maps, FinPresheaf};

/// A formal cofiltered limit: a diagram `X : I -> A` with `I` cofiltered.
#[derive(Clone, Debug)]
pub struct ProObject {
    name: String,
    diagram: FinFunctor,
}

impl ProObject {
    pub fn new(name: impl Into<String>, diagram: FinFunctor) -> Result<Self, ProetaleError> {
        check_cofiltered(diagram.domain()).map_err(ProetaleError::NotCofiltered)?;
        Ok(ProObject {
            name: name.into(),
            diagram,
        })
    }

    /// The constant pro-object at `a`, indexed by the terminal category.
    pub fn singleton(a_cat: Arc<FinCategory>, a: Ob) -> Self {
        let name = a_cat.obj_name(a).to_string();
        ProObject {
            name,
            diagram: FinFunctor::constant(fixtures::one(), a_cat, a),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn diagram(&self) -> &FinFunctor {
        &self.diagram
    }

    pub fn index(&self) -> &Arc<FinCategory> {
        self.diagram.domain()
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.diagram.codomain()
    }
}

/// A morphism of pro-objects `X -> Y`: for every index `j` of `Y`, a class
/// of arrows `X(i) -> Y(j)`, given by its least representative `(i, phi)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProMorphism {
    pub components: Vec<(Ob, Mor)>,
}

/// `colim_i Hom(X(i), a)` for the cofiltered `X`: the arrows `(i, phi)` in
/// order, and the least representative of each one's class.
fn colimit_hom(x: &FinFunctor, a: Ob) -> (Vec<(Ob, Mor)>, Vec<usize>) {
    let (i_cat, cat) = (x.domain(), x.codomain());
    let mut elems = Vec::new();
    for i in i_cat.objects() {
        for &phi in cat.hom(x.ob(i), a) {
            elems.push((i, phi));
        }
    }
    let pos: HashMap<(Ob, Mor), usize> = elems.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut parent: Vec<usize> = (0..elems.len()).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    for (k, &(i, phi)) in elems.iter().enumerate() {
        for &u in i_cat.incoming(i) {
            let other = pos[&(i_cat.source(u), cat.compose(phi, x.mor(u)))];
            let (ra, rb) = (find(&mut parent, k), find(&mut parent, other));
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    }
    let roots = (0..elems.len()).map(|k| find(&mut parent, k)).collect();
    (elems, roots)
}

/// `Hom(X, Y) = lim_j colim_i Hom(X(i), Y(j))`, as compatible choices of
/// classes, in lexicographic order of representatives.
pub fn pro_hom(x: &ProObject, y: &ProObject) -> Result<Vec<ProMorphism>, ProetaleError> {
    if x.base() != y.base() {
        return Err(ProetaleError::BaseMismatch);
    }
    let cat = x.base().clone();
    let (xd, yd) = (x.diagram(), y.diagram());
    let j_cat = y.index();
    let per_j: Vec<(Vec<(Ob, Mor)>, Vec<usize>)> = j_cat.objects().map(|j| colimit_hom(xd, yd.ob(j))).collect();
    let classes: Vec<Vec<usize>> = per_j
        .iter()
        .map(|(_, roots)| {
            let mut r = roots.clone();
            r.sort();
            r.dedup();
            r
        })
        .collect();
    let index: Vec<HashMap<(Ob, Mor), usize>> = per_j
        .iter()
        .map(|(elems, _)| elems.iter().enumerate().map(|(k, &e)| (e, k)).collect())
        .collect();
    // Y(d) acting on a class representative, landing in a class at the target
    let act = |d: Mor, root: usize| -> usize {
        let (j, j2) = (j_cat.source(d), j_cat.target(d));
        let (i, phi) = per_j[j.0].0[root];
        let k = index[j2.0][&(i, cat.compose(yd.mor(d), phi))];
        per_j[j2.0].1[k]
    };
    let n = j_cat.n_objects();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn go(
        j: usize,
        n: usize,
        j_cat: &FinCategory,
        classes: &[Vec<usize>],
        act: &dyn Fn(Mor, usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if j == n {
            out.push(cur.clone());
            return;
        }
        for &c in &classes[j] {
            cur[j] = c;
            let ok = j_cat.morphisms().all(|d| {
                let (s, t) = (j_cat.source(d).0, j_cat.target(d).0);
                s > j || t > j || act(d, cur[s]) == cur[t]
            });
            if ok {
                go(j + 1, n, j_cat, classes, act, cur, out);
            }
        }
    }
    let mut raw = Vec::new();
    go(0, n, j_cat, &classes, &act, &mut cur, &mut raw);
    for fam in raw {
        out.push(ProMorphism {
            components: fam.iter().enumerate().map(|(j, &r)| per_j[j].0[r]).collect(),
        });
    }
    Ok(out)
}

/// The pro-object of pairs `(d, F -> u*y(d))`, projected to `D`. Its index
/// is cofiltered when `d |-> Hom(F, u*y(d))` preserves finite limits, e.g.
/// when `D` has them; otherwise the failure is reported.
pub fn left_pro_adjoint_on_representables(u: &FinFunctor, f: &Arc<FinPresheaf>) -> Result<ProObject, ProetaleError> {
    if f.base() != u.domain() {
        return Err(ProetaleError::BaseMismatch);
    }
    let (c, d) = (u.domain().clone(), u.codomain().clone());
    let mut objects: Vec<(Ob, Vec<Vec<Mor>>)> = Vec::new();
    let mut names = Vec::new();
    for t in d.objects() {
        let r = Arc::new(FinPresheaf::representable(d.clone(), t).restrict(u));
        for (k, phi) in all_maps(f, &r).into_iter().enumerate() {
            let comps: Vec<Vec<Mor>> = c
                .objects()
                .map(|a| phi.component(a).iter().map(|&e| d.hom(u.ob(a), t)[e]).collect())
                .collect();
            objects.push((t, comps));
            names.push(format!("{}#{}", d.obj_name(t), k));
        }
    }
    let pos: HashMap<(Ob, Vec<Vec<Mor>>), usize> = objects.iter().cloned().enumerate().map(|(k, o)| (o, k)).collect();
    let mut data = Vec::new();
    let mut under = Vec::new();
    let mut identities = vec![Mor(0); objects.len()];
    let mut lookup = HashMap::new();
    for (n, (t, comps)) in objects.iter().enumerate() {
        for &k in d.outgoing(*t) {
            let moved: Vec<Vec<Mor>> = comps
                .iter()
                .map(|v| v.iter().map(|&h| d.compose(k, h)).collect())
                .collect();
            let target = pos[&(d.target(k), moved)];
            let m = Mor(data.len());
            if d.is_identity(k) {
                identities[n] = m;
            }
            lookup.insert((n, k), m);
            data.push(MorphismData {
                name: format!("{}@{}", d.mor_name(k), names[n]),
                source: Ob(n),
                target: Ob(target),
            });
            under.push(k);
        }
    }
    let mnames = uniquify(data.iter().map(|m| m.name.clone()).collect());
    for (m, nm) in data.iter_mut().zip(mnames) {
        m.name = nm;
    }
    let comp = |g: Mor, h: Mor| lookup.get(&(data[h.0].source.0, d.compose(under[g.0], under[h.0]))).copied();
    let index = Arc::new(
        FinCategory::from_parts(format!("{}/{}", f.name(), u.name()), names, data.clone(), identities, comp)
            .map_err(|e| ProetaleError::Internal(format!("pro-adjoint index: {e}")))?,
    );
    check_cofiltered(&index).map_err(ProetaleError::IndexNotCofiltered)?;
    let diagram = FinFunctor::new(
        "proj",
        index.clone(),
        d.clone(),
        objects.iter().map(|o| o.0).collect(),
        under.clone(),
    )
    .map_err(|e| ProetaleError::Internal(format!("pro-adjoint diagram: {e}")))?;
    Ok(ProObject {
        name: format!("{}_!{}", u.name(), f.name()),
        diagram,
    })
}

fn normalize(x: &FinFunctor, a: Ob, rep: (Ob, Mor)) -> (Ob, Mor) {
    let (elems, roots) = colimit_hom(x, a);
    let k = elems.iter().position(|&e| e == rep).expect("arrow out of the diagram");
    elems[roots[k]]
}

pub fn pro_identity(x: &ProObject) -> ProMorphism {
    let d = x.diagram();
    ProMorphism {
        components: x
            .index()
            .objects()
            .map(|i| normalize(d, d.ob(i), (i, x.base().id(d.ob(i)))))
            .collect(),
    }
}

/// `g . f` for `f : X -> Y`, `g : Y -> Z`.
pub fn pro_compose(x: &ProObject, f: &ProMorphism, g: &ProMorphism, z: &ProObject) -> ProMorphism {
    let cat = x.base();
    ProMorphism {
        components: z
            .index()
            .objects()
            .map(|k| {
                let (j, psi) = g.components[k.0];
                let (i, phi) = f.components[j.0];
                normalize(x.diagram(), z.diagram().ob(k), (i, cat.compose(psi, phi)))
            })
            .collect(),
    }
}

/// An isomorphism `X -> Y` with its inverse, if there is one.
pub fn pro_isomorphism(x: &ProObject, y: &ProObject) -> Result<Option<(ProMorphism, ProMorphism)>, ProetaleError> {
    let (there, back) = (pro_hom(x, y)?, pro_hom(y, x)?);
    let (idx, idy) = (pro_identity(x), pro_identity(y));
    for f in &there {
        for g in &back {
            if pro_compose(x, f, g, x) == idx && pro_compose(y, g, f, y) == idy {
                return Ok(Some((f.clone(), g.clone())));
            }
        }
    }
    Ok(None)
}
