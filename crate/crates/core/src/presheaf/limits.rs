use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::{FinPresheaf, PresheafMap};
use crate::fincat::{FinCategory, Ob};

/// A finite diagram of presheaves on a common base: nodes and maps between
/// them (`(from, to, map)`).
#[derive(Clone, Debug)]
pub struct PresheafDiagram {
    pub nodes: Vec<Arc<FinPresheaf>>,
    pub edges: Vec<(usize, usize, PresheafMap)>,
}

impl PresheafDiagram {
    pub fn discrete(nodes: Vec<Arc<FinPresheaf>>) -> Self {
        PresheafDiagram {
            nodes,
            edges: Vec::new(),
        }
    }

    fn base(&self) -> Option<&Arc<FinCategory>> {
        self.nodes.first().map(|x| x.base())
    }

    fn check(&self) {
        for (s, t, m) in &self.edges {
            assert!(
                **m.source() == *self.nodes[*s] && **m.target() == *self.nodes[*t],
                "diagram edge does not match its nodes"
            );
        }
    }
}

/// A limit cone: the apex and one projection per diagram node.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: Arc<FinPresheaf>,
    pub legs: Vec<PresheafMap>,
}

/// A colimit cocone: the apex and one injection per diagram node.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub apex: Arc<FinPresheaf>,
    pub legs: Vec<PresheafMap>,
}

/// Pointwise limit: at each object, the tuples compatible with every edge.
pub fn presheaf_limit(diagram: &PresheafDiagram, base: Arc<FinCategory>) -> Cone {
    diagram.check();
    if let Some(b) = diagram.base() {
        assert_eq!(**b, *base, "diagram lives over another base");
    }
    let c = &*base;
    let k = diagram.nodes.len();
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(c.n_objects());
    for a in c.objects() {
        let mut out = Vec::new();
        let mut cur = vec![0usize; k];
        enumerate_tuples(diagram, a, 0, &mut cur, &mut out);
        tuples.push(out);
    }
    let index: Vec<HashMap<&[usize], usize>> = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect())
        .collect();
    let actions = c
        .morphisms()
        .map(|g| {
            let (s, t) = (c.source(g), c.target(g));
            tuples[t.0]
                .iter()
                .map(|tup| {
                    let img: Vec<usize> = tup
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| diagram.nodes[i].act(g, x))
                        .collect();
                    index[s.0][img.as_slice()]
                })
                .collect()
        })
        .collect();
    let labels = c
        .objects()
        .map(|a| {
            tuples[a.0]
                .iter()
                .map(|tup| {
                    let parts: Vec<&str> = tup
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| diagram.nodes[i].label(a, x))
                        .collect();
                    format!("({})", parts.join(","))
                })
                .collect()
        })
        .collect();
    let apex = Arc::new(FinPresheaf::new_trusted("lim", base.clone(), labels, actions));
    let legs = (0..k)
        .map(|i| {
            let comps = c
                .objects()
                .map(|a| tuples[a.0].iter().map(|t| t[i]).collect())
                .collect();
            PresheafMap::new_trusted(apex.clone(), diagram.nodes[i].clone(), comps)
        })
        .collect();
    Cone { apex, legs }
}

fn enumerate_tuples(
    diagram: &PresheafDiagram,
    a: Ob,
    i: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if i == diagram.nodes.len() {
        out.push(cur.clone());
        return;
    }
    'cand: for x in 0..diagram.nodes[i].size(a) {
        cur[i] = x;
        for (s, t, m) in &diagram.edges {
            if *s <= i && *t <= i && m.apply(a, cur[*s]) != cur[*t] {
                continue 'cand;
            }
        }
        enumerate_tuples(diagram, a, i + 1, cur, out);
    }
}

/// Pointwise colimit: disjoint union modulo `x ~ m(x)` for every edge.
/// Classes are ordered by their least member.
pub fn presheaf_colimit(diagram: &PresheafDiagram, base: Arc<FinCategory>) -> Cocone {
    diagram.check();
    let c = &*base;
    let k = diagram.nodes.len();
    // offsets[a][i] = start of node i's elements in the disjoint union at a
    let mut offsets = Vec::with_capacity(c.n_objects());
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(c.n_objects());
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::with_capacity(c.n_objects());
    for a in c.objects() {
        let mut off = Vec::with_capacity(k + 1);
        let mut total = 0;
        for x in &diagram.nodes {
            off.push(total);
            total += x.size(a);
        }
        off.push(total);
        let mut uf = UnionFind::<usize>::new(total);
        for (s, t, m) in &diagram.edges {
            for x in 0..diagram.nodes[*s].size(a) {
                uf.union(off[*s] + x, off[*t] + m.apply(a, x));
            }
        }
        let mut class = vec![usize::MAX; total];
        let mut root_class = HashMap::new();
        let mut rep = Vec::new();
        for i in 0..k {
            for x in 0..diagram.nodes[i].size(a) {
                let r = uf.find(off[i] + x);
                let cls = *root_class.entry(r).or_insert_with(|| {
                    rep.push((i, x));
                    rep.len() - 1
                });
                class[off[i] + x] = cls;
            }
        }
        offsets.push(off);
        class_of.push(class);
        reps.push(rep);
    }
    let actions = c
        .morphisms()
        .map(|g| {
            let (s, t) = (c.source(g), c.target(g));
            reps[t.0]
                .iter()
                .map(|&(i, x)| class_of[s.0][offsets[s.0][i] + diagram.nodes[i].act(g, x)])
                .collect()
        })
        .collect();
    let labels = c
        .objects()
        .map(|a| {
            reps[a.0]
                .iter()
                .map(|&(i, x)| format!("{}:{}", i, diagram.nodes[i].label(a, x)))
                .collect()
        })
        .collect();
    let apex = Arc::new(FinPresheaf::new_trusted("colim", base.clone(), labels, actions));
    let legs = (0..k)
        .map(|i| {
            let comps = c
                .objects()
                .map(|a| {
                    (0..diagram.nodes[i].size(a))
                        .map(|x| class_of[a.0][offsets[a.0][i] + x])
                        .collect()
                })
                .collect();
            PresheafMap::new_trusted(diagram.nodes[i].clone(), apex.clone(), comps)
        })
        .collect();
    Cocone { apex, legs }
}

pub fn product(x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> Cone {
    let diag = PresheafDiagram::discrete(vec![x.clone(), y.clone()]);
    presheaf_limit(&diag, x.base().clone())
}

pub fn coproduct(x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> Cocone {
    let diag = PresheafDiagram::discrete(vec![x.clone(), y.clone()]);
    presheaf_colimit(&diag, x.base().clone())
}

/// Pullback of `f : X -> Z` and `g : Y -> Z`; legs are `[to X, to Y, to Z]`.
pub fn pullback(f: &PresheafMap, g: &PresheafMap) -> Cone {
    assert_eq!(f.target(), g.target(), "pullback of maps with different targets");
    let diag = PresheafDiagram {
        nodes: vec![f.source().clone(), g.source().clone(), f.target().clone()],
        edges: vec![(0, 2, f.clone()), (1, 2, g.clone())],
    };
    presheaf_limit(&diag, f.source().base().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;
    use crate::presheaf::find_iso;

    #[test]
    fn coproduct_of_representables_on_arrow() {
        let c = fixtures::arrow();
        let y0 = Arc::new(FinPresheaf::representable(c.clone(), Ob(0)));
        let y1 = Arc::new(FinPresheaf::representable(c.clone(), Ob(1)));
        assert_eq!(coproduct(&y0, &y1).apex.sizes(), vec![2, 1]);
    }

    #[test]
    fn product_with_terminal_is_identity() {
        for c in fixtures::catalog() {
            for a in c.objects() {
                let y = Arc::new(FinPresheaf::representable(c.clone(), a));
                let t = Arc::new(FinPresheaf::terminal(c.clone()));
                let p = product(&y, &t);
                assert!(p.legs[0].is_iso());
                assert!(find_iso(&p.apex, &y).is_some());
            }
        }
    }

    #[test]
    fn global_element_pulled_back_along_itself_is_terminal() {
        let c = fixtures::sq();
        let x = Arc::new(FinPresheaf::representable(c.clone(), c.find_object("t").unwrap()));
        for a in x.global_elements() {
            let m = PresheafMap::from_global(x.clone(), &a).unwrap();
            let p = pullback(&m, &m);
            assert_eq!(p.apex.sizes(), vec![1; c.n_objects()]);
        }
    }
}
