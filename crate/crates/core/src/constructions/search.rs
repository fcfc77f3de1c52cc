//! Exhaustive search over functors and natural transformations.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::fincat::{FinCategory, FinFunctor, Mor, NatTransf, Ob};

/// Calls `visit(objects, morphisms)` for every functor `c -> d`, in
/// lexicographic order of the object map, then of the morphism map.
pub fn for_each_functor<F>(c: &FinCategory, d: &FinCategory, mut visit: F)
where
    F: FnMut(&[Ob], &[Mor]) -> ControlFlow<()>,
{
    let n = c.n_objects();
    if n > 0 && d.n_objects() == 0 {
        return;
    }
    let nonid: Vec<Mor> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let mut pos = vec![usize::MAX; c.n_morphisms()];
    for (i, &f) in nonid.iter().enumerate() {
        pos[f.0] = i;
    }
    // composite triples (g, f, g.f) grouped by the latest non-identity member
    let mut checks: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); nonid.len()];
    for &f in &nonid {
        for &g in c.outgoing(c.target(f)) {
            if c.is_identity(g) {
                continue;
            }
            let h = c.compose(g, f);
            let mut last = pos[f.0].max(pos[g.0]);
            if !c.is_identity(h) {
                last = last.max(pos[h.0]);
            }
            checks[last].push((g, f, h));
        }
    }
    let mut objs = vec![Ob(0); n];
    let mut mors = vec![Mor(0); c.n_morphisms()];
    let _ = objects_rec(c, d, 0, &mut objs, &mut mors, &nonid, &checks, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn objects_rec<F>(
    c: &FinCategory,
    d: &FinCategory,
    i: usize,
    objs: &mut Vec<Ob>,
    mors: &mut Vec<Mor>,
    nonid: &[Mor],
    checks: &[Vec<(Mor, Mor, Mor)>],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Ob], &[Mor]) -> ControlFlow<()>,
{
    if i == c.n_objects() {
        for a in c.objects() {
            mors[c.id(a).0] = d.id(objs[a.0]);
        }
        return morphisms_rec(c, d, 0, objs, mors, nonid, checks, visit);
    }
    for b in d.objects() {
        objs[i] = b;
        objects_rec(c, d, i + 1, objs, mors, nonid, checks, visit)?;
    }
    ControlFlow::Continue(())
}

#[allow(clippy::too_many_arguments)]
fn morphisms_rec<F>(
    c: &FinCategory,
    d: &FinCategory,
    i: usize,
    objs: &[Ob],
    mors: &mut Vec<Mor>,
    nonid: &[Mor],
    checks: &[Vec<(Mor, Mor, Mor)>],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Ob], &[Mor]) -> ControlFlow<()>,
{
    let Some(&f) = nonid.get(i) else {
        return visit(objs, mors);
    };
    for &img in d.hom(objs[c.source(f).0], objs[c.target(f).0]) {
        mors[f.0] = img;
        let ok = checks[i]
            .iter()
            .all(|&(g, f1, h)| d.compose(mors[g.0], mors[f1.0]) == mors[h.0]);
        if ok {
            morphisms_rec(c, d, i + 1, objs, mors, nonid, checks, visit)?;
        }
    }
    ControlFlow::Continue(())
}

pub fn all_functors(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Vec<FinFunctor> {
    let mut out = Vec::new();
    for_each_functor(c, d, |o, m| {
        let name = format!("F{}", out.len());
        out.push(FinFunctor::new_unchecked(name, c.clone(), d.clone(), o.to_vec(), m.to_vec()));
        ControlFlow::Continue(())
    });
    out
}

fn nat_search(
    f: &FinFunctor,
    g: &FinFunctor,
    isos_only: bool,
    visit: &mut dyn FnMut(&[Mor]) -> ControlFlow<()>,
) {
    assert_eq!(f.domain(), g.domain());
    assert_eq!(f.codomain(), g.codomain());
    let (c, d) = (&**f.domain(), &**f.codomain());
    let cands: Vec<Vec<Mor>> = c
        .objects()
        .map(|a| {
            let hom = d.hom(f.ob(a), g.ob(a));
            hom.iter().copied().filter(|&m| !isos_only || d.is_iso(m)).collect()
        })
        .collect();
    let mut comp = vec![Mor(usize::MAX); c.n_objects()];
    fn go(
        c: &FinCategory,
        d: &FinCategory,
        f: &FinFunctor,
        g: &FinFunctor,
        cands: &[Vec<Mor>],
        i: usize,
        comp: &mut Vec<Mor>,
        visit: &mut dyn FnMut(&[Mor]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if i == c.n_objects() {
            return visit(comp);
        }
        let a = Ob(i);
        for &m in &cands[i] {
            comp[i] = m;
            let natural = c.objects().take(i + 1).all(|b| {
                c.hom(a, b).iter().all(|&k| {
                    d.compose(g.mor(k), m) == d.compose(comp[b.0], f.mor(k))
                }) && c.hom(b, a).iter().all(|&k| {
                    d.compose(g.mor(k), comp[b.0]) == d.compose(m, f.mor(k))
                })
            });
            if natural {
                go(c, d, f, g, cands, i + 1, comp, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
    let _ = go(c, d, f, g, &cands, 0, &mut comp, visit);
}

pub fn all_nat_transfs(f: &FinFunctor, g: &FinFunctor) -> Vec<NatTransf> {
    let mut out = Vec::new();
    nat_search(f, g, false, &mut |comp| {
        out.push(NatTransf::new(f.clone(), g.clone(), comp.to_vec()).expect("searched cell is natural"));
        ControlFlow::Continue(())
    });
    out
}

pub fn find_natural_iso(f: &FinFunctor, g: &FinFunctor) -> Option<NatTransf> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return None;
    }
    let mut found = None;
    nat_search(f, g, true, &mut |comp| {
        found = Some(NatTransf::new(f.clone(), g.clone(), comp.to_vec()).expect("searched cell is natural"));
        ControlFlow::Break(())
    });
    found
}

/// Some equivalence `c -> d`, found by exhaustive search.
pub fn find_equivalence(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Option<FinFunctor> {
    let mut found = None;
    for_each_functor(c, d, |o, m| {
        let f = FinFunctor::new_unchecked("eq", c.clone(), d.clone(), o.to_vec(), m.to_vec());
        if f.is_equivalence() {
            found = Some(f);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

/// Some isomorphism `c -> d` (bijective on objects and morphisms).
pub fn find_isomorphism(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Option<FinFunctor> {
    if c.n_objects() != d.n_objects() || c.n_morphisms() != d.n_morphisms() {
        return None;
    }
    let mut found = None;
    for_each_functor(c, d, |o, m| {
        let mut os = o.to_vec();
        os.sort();
        os.dedup();
        let mut ms = m.to_vec();
        ms.sort();
        ms.dedup();
        if os.len() == o.len() && ms.len() == m.len() {
            found = Some(FinFunctor::new_unchecked("iso", c.clone(), d.clone(), o.to_vec(), m.to_vec()));
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;

    #[test]
    fn functor_counts() {
        let (one, arrow, idem) = (fixtures::one(), fixtures::arrow(), fixtures::idem());
        assert_eq!(all_functors(&one, &arrow).len(), 2);
        assert_eq!(all_functors(&arrow, &arrow).len(), 3);
        assert_eq!(all_functors(&arrow, &idem).len(), 2);
        assert_eq!(all_functors(&idem, &idem).len(), 2);
        assert_eq!(all_functors(&fixtures::par_pair(), &arrow).len(), 3);
    }

    #[test]
    fn equivalences() {
        let sq = fixtures::sq();
        assert!(find_isomorphism(&sq, &Arc::new(sq.opposite())).is_some());
        assert!(find_equivalence(&fixtures::arrow(), &fixtures::one()).is_none());
        let v = fixtures::v_one();
        assert!(find_natural_iso(&v, &v).is_some());
        assert!(find_natural_iso(&v, &fixtures::u_zero()).is_none());
    }
}
