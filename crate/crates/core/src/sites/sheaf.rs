use std::sync::Arc;

use serde::Serialize;

use super::{GrothendieckTopology, Sieve};
use crate::fincat::{FinCategory, Mor, Ob};
use crate::presheaf::{FinPresheaf, PresheafMap};

/// A cover with a matching family that has no amalgamation, or several.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheafFailure {
    pub sieve: Sieve,
    /// The family, aligned with the arrows of the sieve.
    pub family: Vec<usize>,
    pub amalgamations: usize,
}

/// Families `(x_h)_{h in S}` with `X(k)(x_h) = x_{h . k}`, aligned with
/// the arrows of `S` in order.
pub fn matching_families(x: &FinPresheaf, s: &Sieve) -> Vec<Vec<usize>> {
    let c = &**x.base();
    let arrows: Vec<Mor> = s.arrows.iter().copied().collect();
    let pos = |h: Mor| arrows.binary_search(&h).ok();
    // constraints checked once both ends are assigned: (i, k, j) means X(k)(x_i) = x_j
    let mut constraints: Vec<Vec<(usize, Mor, usize)>> = vec![Vec::new(); arrows.len()];
    for (i, &h) in arrows.iter().enumerate() {
        for &k in c.incoming(c.source(h)) {
            let j = pos(c.compose(h, k)).expect("sieve is closed");
            constraints[i.max(j)].push((i, k, j));
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0; arrows.len()];
    fn go(
        x: &FinPresheaf,
        c: &FinCategory,
        arrows: &[Mor],
        constraints: &[Vec<(usize, Mor, usize)>],
        i: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == arrows.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..x.size(c.source(arrows[i])) {
            cur[i] = v;
            if constraints[i].iter().all(|&(p, k, q)| x.act(k, cur[p]) == cur[q]) {
                go(x, c, arrows, constraints, i + 1, cur, out);
            }
        }
    }
    go(x, c, &arrows, &constraints, 0, &mut cur, &mut out);
    out
}

fn restriction_to(x: &FinPresheaf, s: &Sieve, e: usize) -> Vec<usize> {
    s.arrows.iter().map(|&h| x.act(h, e)).collect()
}

pub fn check_sheaf(x: &FinPresheaf, j: &GrothendieckTopology) -> Result<(), SheafFailure> {
    assert_eq!(x.base(), j.base(), "presheaf and topology on different categories");
    let c = &**x.base();
    for o in c.objects() {
        for s in j.covers(o) {
            if s.is_maximal(c) {
                continue;
            }
            let images: Vec<Vec<usize>> = (0..x.size(o)).map(|e| restriction_to(x, s, e)).collect();
            for fam in matching_families(x, s) {
                let n = images.iter().filter(|&im| *im == fam).count();
                if n != 1 {
                    return Err(SheafFailure {
                        sieve: s.clone(),
                        family: fam,
                        amalgamations: n,
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn is_sheaf(x: &FinPresheaf, j: &GrothendieckTopology) -> bool {
    check_sheaf(x, j).is_ok()
}

/// Every representable is a sheaf.
pub fn is_subcanonical(j: &GrothendieckTopology) -> bool {
    let c = j.base();
    c.objects()
        .all(|o| is_sheaf(&FinPresheaf::representable(c.clone(), o), j))
}

#[derive(Clone, Debug)]
pub struct Sheafification {
    pub sheaf: Arc<FinPresheaf>,
    /// `X -> aX`
    pub unit: PresheafMap,
}

/// One plus construction. Covers on `c` are closed under intersection and
/// finite, so the colimit of matching families over covers is attained at
/// the least cover.
fn plus(x: &Arc<FinPresheaf>, j: &GrothendieckTopology) -> PresheafMap {
    let c = j.base().clone();
    let mins: Vec<Sieve> = c.objects().map(|o| j.minimal_cover(o)).collect();
    let fams: Vec<Vec<Vec<usize>>> = c.objects().map(|o| matching_families(x, &mins[o.0])).collect();
    let index = |o: Ob, f: &[usize]| fams[o.0].iter().position(|g| g == f).expect("matching family");
    let labels = c
        .objects()
        .map(|o| {
            fams[o.0]
                .iter()
                .map(|f| {
                    let parts: Vec<&str> = f
                        .iter()
                        .zip(&mins[o.0].arrows)
                        .map(|(&e, &h)| x.label(c.source(h), e))
                        .collect();
                    format!("{{{}}}", parts.join(","))
                })
                .collect()
        })
        .map(crate::constructions::uniquify)
        .collect();
    let actions = c
        .morphisms()
        .map(|g| {
            let (s, t) = (c.source(g), c.target(g));
            fams[t.0]
                .iter()
                .map(|f| {
                    let arrows_t: Vec<Mor> = mins[t.0].arrows.iter().copied().collect();
                    let restricted: Vec<usize> = mins[s.0]
                        .arrows
                        .iter()
                        .map(|&k| {
                            let i = arrows_t.binary_search(&c.compose(g, k)).expect("least cover refines the pullback");
                            f[i]
                        })
                        .collect();
                    index(s, &restricted)
                })
                .collect()
        })
        .collect();
    let xp = Arc::new(FinPresheaf::new_trusted(format!("{}+", x.name()), c.clone(), labels, actions));
    let comps = c
        .objects()
        .map(|o| (0..x.size(o)).map(|e| index(o, &restriction_to(x, &mins[o.0], e))).collect())
        .collect();
    PresheafMap::new_trusted(x.clone(), xp, comps)
}

/// `aX = X++` with its unit.
pub fn sheafify(x: &Arc<FinPresheaf>, j: &GrothendieckTopology) -> Sheafification {
    assert_eq!(x.base(), j.base(), "presheaf and topology on different categories");
    let first = plus(x, j);
    let second = plus(first.target(), j);
    let unit = first.then(&second);
    let sheaf = unit.target().clone();
    debug_assert!(is_sheaf(&sheaf, j));
    Sheafification { sheaf, unit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;

    #[test]
    fn trivial_topology_everything_is_a_sheaf() {
        let c = fixtures::sq();
        let j = GrothendieckTopology::trivial(c.clone());
        for o in c.objects() {
            let y = Arc::new(FinPresheaf::representable(c.clone(), o));
            assert!(is_sheaf(&y, &j));
            assert!(sheafify(&y, &j).unit.is_iso());
        }
        assert!(is_subcanonical(&j));
    }

    #[test]
    fn f_cover_on_arrow() {
        let c = fixtures::arrow();
        let f = c.find_morphism("f").unwrap();
        let j = GrothendieckTopology::saturate(c.clone(), &[(Ob(1), vec![f])]).unwrap();
        // matching families on {f}: one per element of X(0)
        let y1 = FinPresheaf::representable(c.clone(), Ob(1));
        assert!(is_sheaf(&y1, &j));
        let y0 = Arc::new(FinPresheaf::representable(c.clone(), Ob(0)));
        assert!(!is_sheaf(&y0, &j));
        let a = sheafify(&y0, &j);
        assert!(is_sheaf(&a.sheaf, &j));
        assert_eq!(a.sheaf.sizes(), vec![1, 1]);
    }
}
