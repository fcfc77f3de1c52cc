//! The essential geometric morphism induced by a functor `u : C -> D`
//! between presheaf categories: restriction `u*`, left Kan extension
//! `u_!` and right Kan extension `u_*`, with units and counits.
//!
//! Presheaves are contravariant, so the left Kan extension at `d` is a
//! colimit over `d ↓ u` and the right Kan extension a limit over `u ↓ d`.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::constructions::uniquify;
use crate::fincat::{FinFunctor, Mor, Ob};
use crate::presheaf::{pullback, FinPresheaf, PresheafMap};

/// `u : C -> D` viewed as the essential morphism `(u_!, u*, u_*)`.
#[derive(Clone, Debug)]
pub struct EssentialMorphism {
    shape: FinFunctor,
    pi: Arc<FinPresheaf>,
}

/// `Lan_u X` with the bookkeeping needed to name its elements.
#[derive(Clone, Debug)]
pub struct LeftKan {
    pub presheaf: Arc<FinPresheaf>,
    /// Least representative `(c, h : d -> u c, x)` of each element, per `d`.
    pub reps: Vec<Vec<(Ob, Mor, usize)>>,
    class: Vec<HashMap<(Ob, Mor, usize), usize>>,
}

impl LeftKan {
    /// The element `[(h, x)]` of `Lan X (d)` for `h : d -> u c`, `x in X(c)`.
    pub fn class_of(&self, d: Ob, c: Ob, h: Mor, x: usize) -> usize {
        self.class[d.0][&(c, h, x)]
    }
}

/// `Ran_u X`: elements at `d` are compatible families over `u ↓ d`.
#[derive(Clone, Debug)]
pub struct RightKan {
    pub presheaf: Arc<FinPresheaf>,
    /// Objects `(c, h : u c -> d)` of `u ↓ d`, per `d`.
    pub index: Vec<Vec<(Ob, Mor)>>,
    /// The family of each element, per `d`, aligned with `index`.
    pub families: Vec<Vec<Vec<usize>>>,
    lookup: Vec<HashMap<Vec<usize>, usize>>,
}

impl RightKan {
    pub fn element_of(&self, d: Ob, family: &[usize]) -> Option<usize> {
        self.lookup[d.0].get(family).copied()
    }

    fn slot(&self, d: Ob, c: Ob, h: Mor) -> usize {
        self.index[d.0]
            .iter()
            .position(|&p| p == (c, h))
            .expect("object of the slice")
    }
}

/// Units and counits of `u_! ⊣ u* ⊣ u_*` at given presheaves.
#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    /// `X => u* u_! X`
    pub lan_unit: PresheafMap,
    /// `u_! u* Y => Y`
    pub lan_counit: PresheafMap,
    /// `Y => u_* u* Y`
    pub ran_unit: PresheafMap,
    /// `u* u_* X => X`
    pub ran_counit: PresheafMap,
}

/// Object of `D` at which the counit of `u_! ⊣ u*` fails to be invertible
/// on the representable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectednessFailure {
    pub object: Ob,
    pub lan_sizes: Vec<usize>,
    pub representable_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport {
    pub holds: bool,
    pub lhs_sizes: Vec<usize>,
    pub rhs_sizes: Vec<usize>,
}

impl EssentialMorphism {
    pub fn new(u: FinFunctor) -> Self {
        let pi = Arc::new(components_presheaf(&u));
        EssentialMorphism { shape: u, pi }
    }

    pub fn shape(&self) -> &FinFunctor {
        &self.shape
    }

    /// `Π = u_!(1)`, computed as `d |-> π0(d ↓ u)`.
    pub fn components_presheaf(&self) -> &Arc<FinPresheaf> {
        &self.pi
    }

    pub fn restrict(&self, y: &FinPresheaf) -> FinPresheaf {
        y.restrict(&self.shape)
    }

    pub fn restrict_map(&self, m: &PresheafMap) -> PresheafMap {
        let u = &self.shape;
        let s = Arc::new(self.restrict(m.source()));
        let t = Arc::new(self.restrict(m.target()));
        let comps = u
            .domain()
            .objects()
            .map(|c| m.component(u.ob(c)).to_vec())
            .collect();
        PresheafMap::new_trusted(s, t, comps)
    }

    pub fn lan(&self, x: &Arc<FinPresheaf>) -> LeftKan {
        left_kan(&self.shape, x)
    }

    pub fn ran(&self, x: &Arc<FinPresheaf>) -> RightKan {
        right_kan(&self.shape, x)
    }

    /// `u_!(phi)`
    pub fn lan_map(&self, phi: &PresheafMap) -> (LeftKan, LeftKan, PresheafMap) {
        let ls = self.lan(phi.source());
        let lt = self.lan(phi.target());
        let d = self.shape.codomain();
        let comps = d
            .objects()
            .map(|t| {
                ls.reps[t.0]
                    .iter()
                    .map(|&(c, h, x)| lt.class_of(t, c, h, phi.apply(c, x)))
                    .collect()
            })
            .collect();
        let m = PresheafMap::new_trusted(ls.presheaf.clone(), lt.presheaf.clone(), comps);
        (ls, lt, m)
    }

    /// `u_*(phi)`
    pub fn ran_map(&self, phi: &PresheafMap) -> (RightKan, RightKan, PresheafMap) {
        let rs = self.ran(phi.source());
        let rt = self.ran(phi.target());
        let d = self.shape.codomain();
        let comps = d
            .objects()
            .map(|t| {
                rs.families[t.0]
                    .iter()
                    .map(|fam| {
                        let img: Vec<usize> = fam
                            .iter()
                            .zip(&rs.index[t.0])
                            .map(|(&z, &(c, _))| phi.apply(c, z))
                            .collect();
                        rt.element_of(t, &img).expect("image family is compatible")
                    })
                    .collect()
            })
            .collect();
        let m = PresheafMap::new_trusted(rs.presheaf.clone(), rt.presheaf.clone(), comps);
        (rs, rt, m)
    }

    /// `X => u* u_! X`, `x |-> [(id, x)]`.
    pub fn lan_unit(&self, x: &Arc<FinPresheaf>) -> (LeftKan, PresheafMap) {
        let u = &self.shape;
        let (c, d) = (u.domain(), u.codomain());
        let lk = self.lan(x);
        let target = Arc::new(self.restrict(&lk.presheaf));
        let comps = c
            .objects()
            .map(|a| {
                let t = u.ob(a);
                (0..x.size(a)).map(|e| lk.class_of(t, a, d.id(t), e)).collect()
            })
            .collect();
        let m = PresheafMap::new_trusted(x.clone(), target, comps);
        (lk, m)
    }

    /// `u_! u* Y => Y`, `[(h, y)] |-> Y(h)(y)`.
    pub fn lan_counit(&self, y: &Arc<FinPresheaf>) -> (LeftKan, PresheafMap) {
        let d = self.shape.codomain();
        let ry = Arc::new(self.restrict(y));
        let lk = self.lan(&ry);
        let comps = d
            .objects()
            .map(|t| lk.reps[t.0].iter().map(|&(_, h, e)| y.act(h, e)).collect())
            .collect();
        let m = PresheafMap::new_trusted(lk.presheaf.clone(), y.clone(), comps);
        (lk, m)
    }

    /// `Y => u_* u* Y`, `y |-> (Y(h)(y))_{(c, h)}`.
    pub fn ran_unit(&self, y: &Arc<FinPresheaf>) -> (RightKan, PresheafMap) {
        let d = self.shape.codomain();
        let ry = Arc::new(self.restrict(y));
        let rk = self.ran(&ry);
        let comps = d
            .objects()
            .map(|t| {
                (0..y.size(t))
                    .map(|e| {
                        let fam: Vec<usize> = rk.index[t.0].iter().map(|&(_, h)| y.act(h, e)).collect();
                        rk.element_of(t, &fam).expect("unit family is compatible")
                    })
                    .collect()
            })
            .collect();
        let m = PresheafMap::new_trusted(y.clone(), rk.presheaf.clone(), comps);
        (rk, m)
    }

    /// `u* u_* X => X`, a family over `u ↓ u c` goes to its value at `(c, id)`.
    pub fn ran_counit(&self, x: &Arc<FinPresheaf>) -> (RightKan, PresheafMap) {
        let u = &self.shape;
        let (c, d) = (u.domain(), u.codomain());
        let rk = self.ran(x);
        let source = Arc::new(self.restrict(&rk.presheaf));
        let comps = c
            .objects()
            .map(|a| {
                let t = u.ob(a);
                let slot = rk.slot(t, a, d.id(t));
                rk.families[t.0].iter().map(|fam| fam[slot]).collect()
            })
            .collect();
        let m = PresheafMap::new_trusted(source, x.clone(), comps);
        (rk, m)
    }

    /// Units and counits at `x` (on `C`) and `y` (on `D`).
    pub fn unit_counit(&self, x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> AdjunctionWitness {
        AdjunctionWitness {
            lan_unit: self.lan_unit(x).1,
            lan_counit: self.lan_counit(y).1,
            ran_unit: self.ran_unit(y).1,
            ran_counit: self.ran_counit(x).1,
        }
    }

    /// Checks the four triangle identities at `x` (on `C`) and `y` (on `D`);
    /// returns the name of the first failing one.
    pub fn check_triangles(&self, x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> Result<(), &'static str> {
        let is_identity = |m: &PresheafMap| {
            m.components()
                .iter()
                .all(|comp| comp.iter().enumerate().all(|(i, &j)| i == j))
        };
        // eps_{u_! X} . u_!(eta_X) = id
        let (_, eta_x) = self.lan_unit(x);
        let (_, _, lan_eta) = self.lan_map(&eta_x);
        let (_, eps_lx) = self.lan_counit(lan_eta.source());
        if !is_identity(&lan_eta.then(&eps_lx)) {
            return Err("left adjoint: counit . lan(unit)");
        }
        // u*(eps_Y) . eta_{u* Y} = id
        let ry = Arc::new(self.restrict(y));
        let (_, eta_ry) = self.lan_unit(&ry);
        let (_, eps_y) = self.lan_counit(y);
        if !is_identity(&eta_ry.then(&self.restrict_map(&eps_y))) {
            return Err("left adjoint: restrict(counit) . unit");
        }
        // eps*_{u* Y} . u*(eta*_Y) = id
        let (_, eta_star_y) = self.ran_unit(y);
        let (_, eps_star_ry) = self.ran_counit(&ry);
        if !is_identity(&self.restrict_map(&eta_star_y).then(&eps_star_ry)) {
            return Err("right adjoint: counit . restrict(unit)");
        }
        // u_*(eps*_X) . eta*_{u_* X} = id
        let (rk, eps_star_x) = self.ran_counit(x);
        let (_, eta_star_rx) = self.ran_unit(&rk.presheaf);
        let (_, _, ran_eps) = self.ran_map(&eps_star_x);
        if !is_identity(&eta_star_rx.then(&ran_eps)) {
            return Err("right adjoint: ran(counit) . unit");
        }
        Ok(())
    }

    /// `u*` is fully faithful iff the counit of `u_! ⊣ u*` is invertible;
    /// by density it suffices to test representables.
    pub fn check_connected(&self) -> Result<(), ConnectednessFailure> {
        let d = self.shape.codomain();
        for t in d.objects() {
            let y = Arc::new(FinPresheaf::representable(d.clone(), t));
            let (lk, eps) = self.lan_counit(&y);
            if !eps.is_iso() {
                return Err(ConnectednessFailure {
                    object: t,
                    lan_sizes: lk.presheaf.sizes(),
                    representable_sizes: y.sizes(),
                });
            }
        }
        Ok(())
    }

    pub fn is_connected_essential(&self) -> bool {
        self.check_connected().is_ok()
    }

    /// Compares `u_!(F ×_{u*E} u*E')` with `u_!F ×_E E'` through the
    /// canonical map, for `phi : F -> u*E` and `b : E' -> E`.
    pub fn frobenius_check(&self, phi: &PresheafMap, b: &PresheafMap) -> FrobeniusReport {
        let d = self.shape.codomain();
        let ub = self.restrict_map(b);
        assert_eq!(phi.target(), ub.target(), "phi must land in the restriction of b's target");
        let p = pullback(phi, &ub);
        let lhs = self.lan(&p.apex);
        // transpose of phi: eps_E . u_!(phi)
        let (_, _, lan_phi) = self.lan_map(phi);
        let (_, eps_e) = self.lan_counit(b.target());
        let sharp = lan_phi.then(&eps_e);
        let q = pullback(&sharp, b);
        let lf = self.lan(phi.source());
        // canonical map [(h, (x, e'))] |-> ([(h, x)], E'(h)(e'))
        let mut bijective = true;
        for t in d.objects() {
            let mut hit = vec![false; q.apex.size(t)];
            for &(c, h, z) in &lhs.reps[t.0] {
                let x = p.legs[0].apply(c, z);
                let e1 = p.legs[1].apply(c, z);
                let left = lf.class_of(t, c, h, x);
                let right = b.source().act(h, e1);
                let pos = (0..q.apex.size(t))
                    .find(|&w| q.legs[0].apply(t, w) == left && q.legs[1].apply(t, w) == right)
                    .expect("comparison lands in the pullback");
                if hit[pos] {
                    bijective = false;
                }
                hit[pos] = true;
            }
            if hit.iter().any(|&h| !h) {
                bijective = false;
            }
        }
        FrobeniusReport {
            holds: bijective,
            lhs_sizes: lhs.presheaf.sizes(),
            rhs_sizes: q.apex.sizes(),
        }
    }
}

/// `Π(d) = π0(d ↓ u)`, with `Π(g)` induced by precomposition. Elements are
/// labelled by the least `h : d -> u c` of their class.
pub fn components_presheaf(u: &FinFunctor) -> FinPresheaf {
    let one = Arc::new(FinPresheaf::terminal(u.domain().clone()));
    let lk = left_kan(u, &one);
    let d = u.codomain();
    let labels = d
        .objects()
        .map(|t| {
            uniquify(
                lk.reps[t.0]
                    .iter()
                    .map(|&(_, h, _)| format!("[{}]", d.mor_name(h)))
                    .collect(),
            )
        })
        .collect();
    let actions = d
        .morphisms()
        .map(|g| lk.presheaf.action(g).to_vec())
        .collect();
    FinPresheaf::new_trusted(format!("Pi({})", u.name()), d.clone(), labels, actions)
}

/// `Lan_u X (d)`: pairs `(h : d -> u c, x in X(c))` modulo
/// `(u(k) . h, x') ~ (h, X(k)(x'))`.
pub fn left_kan(u: &FinFunctor, x: &Arc<FinPresheaf>) -> LeftKan {
    let (c, d) = (u.domain().clone(), u.codomain().clone());
    assert_eq!(**x.base(), *c, "presheaf must live on the domain of u");
    let mut reps = Vec::with_capacity(d.n_objects());
    let mut class = Vec::with_capacity(d.n_objects());
    for t in d.objects() {
        let mut nodes: Vec<(Ob, Mor, usize)> = Vec::new();
        let mut pos: HashMap<(Ob, Mor, usize), usize> = HashMap::new();
        for a in c.objects() {
            for &h in d.hom(t, u.ob(a)) {
                for e in 0..x.size(a) {
                    pos.insert((a, h, e), nodes.len());
                    nodes.push((a, h, e));
                }
            }
        }
        let mut uf = UnionFind::<usize>::new(nodes.len());
        for k in c.morphisms() {
            let (a, a2) = (c.source(k), c.target(k));
            for &h in d.hom(t, u.ob(a)) {
                let h2 = d.compose(u.mor(k), h);
                for e2 in 0..x.size(a2) {
                    uf.union(pos[&(a2, h2, e2)], pos[&(a, h, x.act(k, e2))]);
                }
            }
        }
        let mut root_class = HashMap::new();
        let mut rep = Vec::new();
        let mut cls = HashMap::new();
        for (i, &node) in nodes.iter().enumerate() {
            let r = uf.find(i);
            let k = *root_class.entry(r).or_insert_with(|| {
                rep.push(node);
                rep.len() - 1
            });
            cls.insert(node, k);
        }
        reps.push(rep);
        class.push(cls);
    }
    let actions = d
        .morphisms()
        .map(|g| {
            let (s, t) = (d.source(g), d.target(g));
            reps[t.0]
                .iter()
                .map(|&(a, h, e)| class[s.0][&(a, d.compose(h, g), e)])
                .collect()
        })
        .collect();
    let labels = d
        .objects()
        .map(|t| {
            uniquify(
                reps[t.0]
                    .iter()
                    .map(|&(a, h, e)| format!("[{}|{}]", d.mor_name(h), x.label(a, e)))
                    .collect(),
            )
        })
        .collect();
    let presheaf = Arc::new(FinPresheaf::new_trusted(
        format!("{}_!{}", u.name(), x.name()),
        d,
        labels,
        actions,
    ));
    LeftKan {
        presheaf,
        reps,
        class,
    }
}

/// `Ran_u X (d)`: families `z_(c, h)` over `u ↓ d` with
/// `X(k)(z_(c, h)) = z_(c', h . u(k))` for `k : c' -> c`.
pub fn right_kan(u: &FinFunctor, x: &Arc<FinPresheaf>) -> RightKan {
    let (c, d) = (u.domain().clone(), u.codomain().clone());
    assert_eq!(**x.base(), *c, "presheaf must live on the domain of u");
    let mut index: Vec<Vec<(Ob, Mor)>> = Vec::with_capacity(d.n_objects());
    let mut families: Vec<Vec<Vec<usize>>> = Vec::with_capacity(d.n_objects());
    let mut lookup: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(d.n_objects());
    for t in d.objects() {
        let slots: Vec<(Ob, Mor)> = c
            .objects()
            .flat_map(|a| d.hom(u.ob(a), t).iter().map(move |&h| (a, h)))
            .collect();
        let slot_of: HashMap<(Ob, Mor), usize> =
            slots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        // constraints (i, k, j): X(k)(z_i) = z_j
        let mut constraints: Vec<Vec<(usize, Mor, usize)>> = vec![Vec::new(); slots.len()];
        for (i, &(a, h)) in slots.iter().enumerate() {
            for &k in c.incoming(a) {
                let j = slot_of[&(c.source(k), d.compose(h, u.mor(k)))];
                constraints[i.max(j)].push((i, k, j));
            }
        }
        let mut out = Vec::new();
        let mut cur = vec![0usize; slots.len()];
        fn go(
            x: &FinPresheaf,
            slots: &[(Ob, Mor)],
            constraints: &[Vec<(usize, Mor, usize)>],
            i: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if i == slots.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..x.size(slots[i].0) {
                cur[i] = v;
                if constraints[i].iter().all(|&(p, k, q)| x.act(k, cur[p]) == cur[q]) {
                    go(x, slots, constraints, i + 1, cur, out);
                }
            }
        }
        go(x, &slots, &constraints, 0, &mut cur, &mut out);
        lookup.push(out.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect());
        index.push(slots);
        families.push(out);
    }
    let actions = d
        .morphisms()
        .map(|g| {
            let (s, t) = (d.source(g), d.target(g));
            families[t.0]
                .iter()
                .map(|fam| {
                    let pulled: Vec<usize> = index[s.0]
                        .iter()
                        .map(|&(a, h)| {
                            let j = index[t.0].iter().position(|&p| p == (a, d.compose(g, h))).unwrap();
                            fam[j]
                        })
                        .collect();
                    lookup[s.0][&pulled]
                })
                .collect()
        })
        .collect();
    let labels = d
        .objects()
        .map(|t| {
            families[t.0]
                .iter()
                .map(|fam| {
                    let parts: Vec<&str> = fam
                        .iter()
                        .zip(&index[t.0])
                        .map(|(&z, &(a, _))| x.label(a, z))
                        .collect();
                    format!("<{}>", parts.join(","))
                })
                .collect()
        })
        .map(uniquify)
        .collect();
    let presheaf = Arc::new(FinPresheaf::new_trusted(
        format!("{}_*{}", u.name(), x.name()),
        d,
        labels,
        actions,
    ));
    RightKan {
        presheaf,
        index,
        families,
        lookup,
    }
}
