//! Brute-force reference implementations. They share nothing with the
//! library beyond the data types, and favour directness over speed.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use toposfactor_core::fincat::{FinCategory, FinFunctor, Mor, Ob};
use toposfactor_core::presheaf::FinPresheaf;

/// Zigzag components as a sorted list of sorted object blocks.
pub fn components(c: &FinCategory) -> Vec<Vec<usize>> {
    let n = c.n_objects();
    let mut adj = vec![Vec::new(); n];
    for f in c.morphisms() {
        let (a, b) = (c.source(f).0, c.target(f).0);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut block = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(a) = stack.pop() {
            block.push(a);
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        block.sort();
        out.push(block);
    }
    out.sort();
    out
}

/// Normalizes a component labelling into the same shape as [`components`].
pub fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (o, &l) in labels.iter().enumerate() {
        by.entry(l).or_default().push(o);
    }
    let mut out: Vec<Vec<usize>> = by.into_values().collect();
    out.sort();
    out
}

pub type CommaObject = (Ob, Ob, Mor);

/// Objects `(a, b, h : F a -> G b)` and morphisms `(source, target, k, l)`.
pub fn comma(f: &FinFunctor, g: &FinFunctor) -> (BTreeSet<CommaObject>, BTreeSet<(CommaObject, CommaObject, Mor, Mor)>) {
    let (ca, cb, cc) = (f.domain(), g.domain(), f.codomain());
    let mut objects = BTreeSet::new();
    for a in ca.objects() {
        for b in cb.objects() {
            for h in cc.morphisms() {
                if cc.source(h) == f.ob(a) && cc.target(h) == g.ob(b) {
                    objects.insert((a, b, h));
                }
            }
        }
    }
    let mut morphisms = BTreeSet::new();
    for &x in &objects {
        for &y in &objects {
            for k in ca.morphisms() {
                if ca.source(k) != x.0 || ca.target(k) != y.0 {
                    continue;
                }
                for l in cb.morphisms() {
                    if cb.source(l) != x.1 || cb.target(l) != y.1 {
                        continue;
                    }
                    if cc.compose(g.mor(l), x.2) == cc.compose(y.2, f.mor(k)) {
                        morphisms.insert((x, y, k, l));
                    }
                }
            }
        }
    }
    (objects, morphisms)
}

/// Every family `x_c in X(c)` compatible along every morphism, in
/// lexicographic order.
pub fn global_elements(x: &FinPresheaf) -> Vec<Vec<usize>> {
    let c = x.base();
    let n = c.n_objects();
    let sizes = x.sizes();
    if sizes.iter().any(|&s| s == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut fam = vec![0usize; n];
    loop {
        let ok = c.morphisms().all(|g| x.act(g, fam[c.target(g).0]) == fam[c.source(g).0]);
        if ok {
            out.push(fam.clone());
        }
        // odometer, last digit fastest
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            fam[k] += 1;
            if fam[k] < sizes[k] {
                break;
            }
            fam[k] = 0;
        }
    }
}

/// `d ↓ u` is non-empty and connected for every `d`.
pub fn is_final(u: &FinFunctor) -> bool {
    let (c, d) = (u.domain(), u.codomain());
    d.objects().all(|t| {
        let nodes: Vec<(Ob, Mor)> = c
            .objects()
            .flat_map(|a| d.morphisms().filter(move |&h| d.source(h) == t && d.target(h) == u.ob(a)).map(move |h| (a, h)))
            .collect();
        if nodes.is_empty() {
            return false;
        }
        let mut seen = vec![false; nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            let (a, h) = nodes[i];
            for (j, &(b, h2)) in nodes.iter().enumerate() {
                if seen[j] {
                    continue;
                }
                let linked = c.morphisms().any(|k| {
                    (c.source(k) == a && c.target(k) == b && d.compose(u.mor(k), h) == h2)
                        || (c.source(k) == b && c.target(k) == a && d.compose(u.mor(k), h2) == h)
                });
                if linked {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

/// Every `g : d -> p(e)` has exactly one lift ending at `e`.
pub fn is_discrete_fibration(p: &FinFunctor) -> bool {
    let (e_cat, d) = (p.domain(), p.codomain());
    e_cat.objects().all(|e| {
        d.morphisms().filter(|&g| d.target(g) == p.ob(e)).all(|g| {
            e_cat
                .morphisms()
                .filter(|&k| e_cat.target(k) == e && p.mor(k) == g)
                .count()
                == 1
        })
    })
}

/// Every presheaf on `base` whose values have at most `max` elements,
/// with elements labelled by their index.
pub fn presheaves(base: &Arc<FinCategory>, max: usize) -> Vec<FinPresheaf> {
    let c = &**base;
    let n = c.n_objects();
    let proper: Vec<Mor> = c.morphisms().filter(|&g| !c.is_identity(g)).collect();
    let mut out = Vec::new();
    let mut sizes = vec![0usize; n];
    loop {
        let mut actions: Vec<Option<Vec<usize>>> = vec![None; c.n_morphisms()];
        for o in c.objects() {
            actions[c.id(o).0] = Some((0..sizes[o.0]).collect());
        }
        assign(c, &proper, 0, &sizes, &mut actions, &mut |acts| {
            let labels = sizes.iter().map(|&s| (0..s).map(|i| i.to_string()).collect()).collect();
            let acts = acts.iter().map(|a| a.clone().unwrap()).collect();
            out.push(FinPresheaf::new(format!("P{}", out.len()), base.clone(), labels, acts).expect("checked functor"));
        });
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= max {
                break;
            }
            sizes[k] = 0;
        }
    }
}

fn assign(
    c: &FinCategory,
    proper: &[Mor],
    i: usize,
    sizes: &[usize],
    actions: &mut Vec<Option<Vec<usize>>>,
    emit: &mut dyn FnMut(&[Option<Vec<usize>>]),
) {
    if i == proper.len() {
        emit(actions);
        return;
    }
    let g = proper[i];
    let (from, to) = (sizes[c.target(g).0], sizes[c.source(g).0]);
    if from > 0 && to == 0 {
        return;
    }
    let mut act = vec![0usize; from];
    loop {
        actions[g.0] = Some(act.clone());
        if consistent(c, actions) {
            assign(c, proper, i + 1, sizes, actions, emit);
        }
        let mut k = from;
        loop {
            if k == 0 {
                actions[g.0] = None;
                return;
            }
            k -= 1;
            act[k] += 1;
            if act[k] < to {
                break;
            }
            act[k] = 0;
        }
    }
}

/// `X(g . f) = X(f) . X(g)` wherever all three actions are known.
fn consistent(c: &FinCategory, actions: &[Option<Vec<usize>>]) -> bool {
    for f in c.morphisms() {
        for g in c.morphisms() {
            if c.source(g) != c.target(f) {
                continue;
            }
            let gf = c.compose(g, f);
            if let (Some(af), Some(ag), Some(agf)) = (&actions[f.0], &actions[g.0], &actions[gf.0]) {
                if agf.iter().enumerate().any(|(x, &y)| af[ag[x]] != y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Equivalence classes of a relation given as generating pairs on `n` items.
pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in pairs {
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
    }
    label
}

/// Spans `x <-s- z -f-> y` with `s` marked, partitioned by the roof
/// relation: `(s, f) ~ (s', f')` when some `t, t'` give `s t = s' t'`
/// marked and `f t = f' t'`. Blocks are sorted sets of spans.
pub fn fraction_classes(cat: &FinCategory, marked: &[bool]) -> BTreeSet<Vec<(Mor, Mor)>> {
    let mut spans = Vec::new();
    for s in cat.morphisms().filter(|s| marked[s.0]) {
        for f in cat.morphisms().filter(|&f| cat.source(f) == cat.source(s)) {
            spans.push((s, f));
        }
    }
    let mut pairs = Vec::new();
    for (i, &(s, f)) in spans.iter().enumerate() {
        for (j, &(s2, f2)) in spans.iter().enumerate().skip(i + 1) {
            if cat.target(s) != cat.target(s2) || cat.target(f) != cat.target(f2) {
                continue;
            }
            let roof = cat.morphisms().any(|t| {
                cat.target(t) == cat.source(s)
                    && cat.morphisms().any(|t2| {
                        cat.target(t2) == cat.source(s2)
                            && cat.source(t2) == cat.source(t)
                            && cat.compose(s, t) == cat.compose(s2, t2)
                            && marked[cat.compose(s, t).0]
                            && cat.compose(f, t) == cat.compose(f2, t2)
                    })
            });
            if roof {
                pairs.push((i, j));
            }
        }
    }
    let label = closure(spans.len(), &pairs);
    let mut blocks: BTreeMap<usize, Vec<(Mor, Mor)>> = BTreeMap::new();
    for (k, &l) in label.iter().enumerate() {
        blocks.entry(l).or_default().push(spans[k]);
    }
    blocks.into_values().collect()
}

/// `Hom(X, Y) = lim_j colim_i Hom(X i, Y j)` for diagrams into one
/// category: classes of `(i, phi)` per `j`, and the compatible families as
/// vectors of class numbers.
pub struct ProHom {
    pub classes: Vec<Vec<BTreeSet<(Ob, Mor)>>>,
    pub families: BTreeSet<Vec<usize>>,
}

impl ProHom {
    pub fn class_of(&self, j: usize, rep: (Ob, Mor)) -> usize {
        self.classes[j].iter().position(|c| c.contains(&rep)).expect("arrow in some class")
    }
}

pub fn pro_hom(x: &FinFunctor, y: &FinFunctor) -> ProHom {
    let (i_cat, j_cat, cat) = (x.domain(), y.domain(), x.codomain());
    let mut classes = Vec::new();
    for j in j_cat.objects() {
        let target = y.ob(j);
        let arrows: Vec<(Ob, Mor)> = i_cat
            .objects()
            .flat_map(|i| cat.morphisms().filter(move |&p| cat.source(p) == x.ob(i) && cat.target(p) == target).map(move |p| (i, p)))
            .collect();
        // (i, phi) ~ (i', phi') when they agree after some pair of index arrows
        let mut pairs = Vec::new();
        for (a, &(i, p)) in arrows.iter().enumerate() {
            for (b, &(i2, p2)) in arrows.iter().enumerate() {
                let meet = i_cat.morphisms().any(|d| {
                    i_cat.target(d) == i
                        && i_cat.morphisms().any(|d2| {
                            i_cat.target(d2) == i2
                                && i_cat.source(d2) == i_cat.source(d)
                                && cat.compose(p, x.mor(d)) == cat.compose(p2, x.mor(d2))
                        })
                });
                if meet {
                    pairs.push((a, b));
                }
            }
        }
        let label = closure(arrows.len(), &pairs);
        let mut blocks: BTreeMap<usize, BTreeSet<(Ob, Mor)>> = BTreeMap::new();
        for (k, &l) in label.iter().enumerate() {
            blocks.entry(l).or_default().insert(arrows[k]);
        }
        classes.push(blocks.into_values().collect::<Vec<_>>());
    }
    let n = j_cat.n_objects();
    let mut families = BTreeSet::new();
    let mut fam = vec![0usize; n];
    if classes.iter().all(|c| !c.is_empty()) {
        loop {
            let ok = j_cat.morphisms().all(|e| {
                let (s, t) = (j_cat.source(e).0, j_cat.target(e).0);
                classes[s][fam[s]]
                    .iter()
                    .all(|&(i, p)| classes[t][fam[t]].contains(&(i, cat.compose(y.mor(e), p))))
            });
            if ok {
                families.insert(fam.clone());
            }
            let mut k = n;
            let done = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                fam[k] += 1;
                if fam[k] < classes[k].len() {
                    break false;
                }
                fam[k] = 0;
            };
            if done {
                break;
            }
        }
    }
    ProHom { classes, families }
}

/// Whether some `e : 1 -> f(1)` makes `x |-> f(x) . e` a bijection
/// `C(1, c) -> D(1, f c)` for all `c`, phrased through sizes of images.
pub fn lifts_global_elements(f: &FinFunctor) -> Option<bool> {
    let (c, d) = (f.domain(), f.codomain());
    let terminal = |k: &FinCategory| k.objects().find(|&t| k.objects().all(|o| k.morphisms().filter(|&m| k.source(m) == o && k.target(m) == t).count() == 1));
    let (tc, td) = (terminal(c)?, terminal(d)?);
    let homs = |k: &FinCategory, a: Ob, b: Ob| -> Vec<Mor> { k.morphisms().filter(|&m| k.source(m) == a && k.target(m) == b).collect() };
    Some(homs(d, td, f.ob(tc)).into_iter().any(|e| {
        c.objects().all(|o| {
            let image: BTreeSet<Mor> = homs(c, tc, o).into_iter().map(|x| d.compose(f.mor(x), e)).collect();
            image.len() == homs(c, tc, o).len() && image.len() == homs(d, td, f.ob(o)).len()
        })
    }))
}
