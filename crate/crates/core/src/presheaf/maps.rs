use std::sync::Arc;

use super::{FinPresheaf, GlobalElement, PresheafError};
use crate::fincat::Ob;

/// A natural transformation between presheaves on the same base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMap {
    source: Arc<FinPresheaf>,
    target: Arc<FinPresheaf>,
    components: Vec<Vec<usize>>,
}

impl PresheafMap {
    pub fn new(
        source: Arc<FinPresheaf>,
        target: Arc<FinPresheaf>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        if source.base() != target.base() {
            return Err(PresheafError::BaseMismatch);
        }
        let c = source.base().clone();
        for a in c.objects() {
            let comp = &components[a.0];
            if comp.len() != source.size(a) || comp.iter().any(|&y| y >= target.size(a)) {
                return Err(PresheafError::NotNatural(c.obj_name(a).to_string()));
            }
        }
        for g in c.morphisms() {
            let (s, t) = (c.source(g), c.target(g));
            let natural = (0..source.size(t)).all(|x| {
                components[s.0][source.act(g, x)] == target.act(g, components[t.0][x])
            });
            if !natural {
                return Err(PresheafError::NotNatural(c.mor_name(g).to_string()));
            }
        }
        Ok(PresheafMap {
            source,
            target,
            components,
        })
    }

    pub(crate) fn new_trusted(
        source: Arc<FinPresheaf>,
        target: Arc<FinPresheaf>,
        components: Vec<Vec<usize>>,
    ) -> Self {
        if cfg!(debug_assertions) {
            PresheafMap::new(source, target, components).expect("constructed map is natural")
        } else {
            PresheafMap {
                source,
                target,
                components,
            }
        }
    }

    pub fn identity(x: Arc<FinPresheaf>) -> Self {
        let components = x.sizes().into_iter().map(|n| (0..n).collect()).collect();
        PresheafMap {
            source: x.clone(),
            target: x,
            components,
        }
    }

    /// The unique map to the terminal presheaf.
    pub fn to_terminal(x: Arc<FinPresheaf>) -> Self {
        let one = Arc::new(FinPresheaf::terminal(x.base().clone()));
        let components = x.sizes().into_iter().map(|n| vec![0; n]).collect();
        PresheafMap {
            source: x,
            target: one,
            components,
        }
    }

    /// The map `1 => X` named by a global element.
    pub fn from_global(x: Arc<FinPresheaf>, a: &GlobalElement) -> Result<Self, PresheafError> {
        if !x.is_global_element(&a.family) {
            return Err(PresheafError::NotCompatible(x.name().to_string()));
        }
        let one = Arc::new(FinPresheaf::terminal(x.base().clone()));
        let components = a.family.iter().map(|&v| vec![v]).collect();
        Ok(PresheafMap {
            source: one,
            target: x,
            components,
        })
    }

    pub fn source(&self) -> &Arc<FinPresheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinPresheaf> {
        &self.target
    }

    pub fn component(&self, c: Ob) -> &[usize] {
        &self.components[c.0]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn apply(&self, c: Ob, x: usize) -> usize {
        self.components[c.0][x]
    }

    /// `next . self`
    pub fn then(&self, next: &PresheafMap) -> PresheafMap {
        assert!(
            *self.target == *next.source,
            "composing maps that do not meet: {} vs {}",
            self.target.name(),
            next.source.name()
        );
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(f, g)| f.iter().map(|&x| g[x]).collect())
            .collect();
        PresheafMap {
            source: self.source.clone(),
            target: next.target.clone(),
            components,
        }
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|comp| {
            let mut v = comp.clone();
            v.sort_unstable();
            v.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().enumerate().all(|(i, comp)| {
            let mut hit = vec![false; self.target.size(Ob(i))];
            comp.iter().for_each(|&y| hit[y] = true);
            hit.into_iter().all(|b| b)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    pub fn inverse(&self) -> Option<PresheafMap> {
        if !self.is_iso() {
            return None;
        }
        let components = self
            .components
            .iter()
            .map(|comp| {
                let mut inv = vec![0; comp.len()];
                comp.iter().enumerate().for_each(|(x, &y)| inv[y] = x);
                inv
            })
            .collect();
        Some(PresheafMap {
            source: self.target.clone(),
            target: self.source.clone(),
            components,
        })
    }

    /// Image of a global element of the source.
    pub fn on_global(&self, a: &GlobalElement) -> GlobalElement {
        GlobalElement {
            family: a
                .family
                .iter()
                .enumerate()
                .map(|(i, &x)| self.components[i][x])
                .collect(),
        }
    }
}

/// Every natural map `x => y`, in lexicographic order of components.
pub fn all_maps(x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> Vec<PresheafMap> {
    let mut out = Vec::new();
    for_each_map(x, y, &mut |comps| {
        out.push(PresheafMap {
            source: x.clone(),
            target: y.clone(),
            components: comps.to_vec(),
        });
        true
    });
    out
}

/// Some isomorphism `x => y`, if one exists.
pub fn find_iso(x: &Arc<FinPresheaf>, y: &Arc<FinPresheaf>) -> Option<PresheafMap> {
    if x.base() != y.base() || x.sizes() != y.sizes() {
        return None;
    }
    let mut found = None;
    for_each_map(x, y, &mut |comps| {
        let m = PresheafMap {
            source: x.clone(),
            target: y.clone(),
            components: comps.to_vec(),
        };
        if m.is_iso() {
            found = Some(m);
            false
        } else {
            true
        }
    });
    found
}

/// Backtracking over element assignments `(object, element)` in order,
/// checking naturality against every already-assigned element. The callback
/// returns `false` to stop.
fn for_each_map(
    x: &FinPresheaf,
    y: &FinPresheaf,
    f: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) {
    assert_eq!(x.base(), y.base(), "maps between presheaves on different bases");
    let c = x.base().clone();
    let slots: Vec<(Ob, usize)> = c
        .objects()
        .flat_map(|a| (0..x.size(a)).map(move |e| (a, e)))
        .collect();
    if c.objects().any(|a| x.size(a) > 0 && y.size(a) == 0) {
        return;
    }
    let mut comps: Vec<Vec<usize>> = x.sizes().into_iter().map(|n| vec![usize::MAX; n]).collect();

    fn consistent(x: &FinPresheaf, y: &FinPresheaf, comps: &[Vec<usize>], a: Ob, e: usize) -> bool {
        let c = x.base();
        let v = comps[a.0][e];
        // arrows g : a' -> a pull e back to X(g)(e)
        for &g in c.incoming(a) {
            let s = c.source(g);
            let w = comps[s.0][x.act(g, e)];
            if w != usize::MAX && w != y.act(g, v) {
                return false;
            }
        }
        // arrows g : a -> b whose action lands on e
        for &g in c.outgoing(a) {
            let b = c.target(g);
            for (e2, &v2) in comps[b.0].iter().enumerate() {
                if v2 != usize::MAX && x.act(g, e2) == e && y.act(g, v2) != v {
                    return false;
                }
            }
        }
        true
    }

    fn go(
        x: &FinPresheaf,
        y: &FinPresheaf,
        slots: &[(Ob, usize)],
        i: usize,
        comps: &mut Vec<Vec<usize>>,
        f: &mut dyn FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        let Some(&(a, e)) = slots.get(i) else {
            return f(comps);
        };
        for v in 0..y.size(a) {
            comps[a.0][e] = v;
            if consistent(x, y, comps, a, e) && !go(x, y, slots, i + 1, comps, f) {
                comps[a.0][e] = usize::MAX;
                return false;
            }
        }
        comps[a.0][e] = usize::MAX;
        true
    }
    go(x, y, &slots, 0, &mut comps, f);
}
