use std::collections::BTreeMap;
use std::sync::Arc;

use super::ProetaleError;
use crate::constructions::check_cofiltered;
use crate::fincat::{FinCategory, FinFunctor, MorphismData, Mor, Ob};

/// A pullback of `along : D -> C_j` along the transition `u_d : C_i -> C_j`,
/// given as an arrow `pulled` of the slice system at `i` together with its
/// projection to `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChosenPullback {
    pub arrow: Mor,
    pub along: Mor,
    pub pulled: Mor,
    pub projection: Mor,
}

/// A cofiltered diagram `i |-> C_i` in a finite category together with a
/// finite slice system `S_i` over each `C_i`, closed under the chosen
/// pullbacks along every transition.
#[derive(Clone, Debug)]
pub struct CofilteredDiagram {
    name: String,
    functor: FinFunctor,
    slices: Vec<Vec<Mor>>,
    pullbacks: BTreeMap<(Mor, Mor), (Mor, Mor)>,
}

impl CofilteredDiagram {
    /// Validates the data. Pullbacks not listed in `chosen` are searched for
    /// inside the slice system; the least one found is used.
    pub fn new(
        name: impl Into<String>,
        functor: FinFunctor,
        slices: Vec<Vec<Mor>>,
        chosen: &[ChosenPullback],
    ) -> Result<Self, ProetaleError> {
        let (i_cat, c) = (functor.domain().clone(), functor.codomain().clone());
        check_cofiltered(&i_cat).map_err(ProetaleError::NotCofiltered)?;
        if slices.len() != i_cat.n_objects() {
            return Err(ProetaleError::SliceCount {
                expected: i_cat.n_objects(),
                found: slices.len(),
            });
        }
        let mut clean = Vec::with_capacity(slices.len());
        for (i, s) in slices.into_iter().enumerate() {
            let ci = functor.ob(Ob(i));
            let mut seen = Vec::new();
            for h in s {
                if h.0 >= c.n_morphisms() || c.target(h) != ci {
                    return Err(ProetaleError::SliceArrow { index: Ob(i), arrow: h });
                }
                if !seen.contains(&h) {
                    seen.push(h);
                }
            }
            if !seen.contains(&c.id(ci)) {
                return Err(ProetaleError::MissingIdentity(Ob(i)));
            }
            clean.push(seen);
        }
        let mut pullbacks = BTreeMap::new();
        for d in i_cat.morphisms() {
            let (i, j) = (i_cat.source(d), i_cat.target(d));
            let ud = functor.mor(d);
            for &h in &clean[j.0] {
                let explicit = chosen.iter().find(|p| p.arrow == d && p.along == h);
                let found = match explicit {
                    Some(p) => {
                        if !clean[i.0].contains(&p.pulled) || !c.is_pullback(ud, h, p.pulled, p.projection) {
                            return Err(ProetaleError::NotAPullback { arrow: d, along: h });
                        }
                        (p.pulled, p.projection)
                    }
                    None => clean[i.0]
                        .iter()
                        .find_map(|&k| {
                            c.hom(c.source(k), c.source(h))
                                .iter()
                                .find(|&&p| c.is_pullback(ud, h, k, p))
                                .map(|&p| (k, p))
                        })
                        .ok_or(ProetaleError::MissingPullback { arrow: d, along: h })?,
                };
                pullbacks.insert((d, h), found);
            }
        }
        Ok(CofilteredDiagram {
            name: name.into(),
            functor,
            slices: clean,
            pullbacks,
        })
    }

    /// The full slice systems: every arrow into each `C_i`.
    pub fn with_full_slices(name: impl Into<String>, functor: FinFunctor) -> Result<Self, ProetaleError> {
        let c = functor.codomain().clone();
        let slices = functor
            .domain()
            .objects()
            .map(|i| {
                let ci = functor.ob(i);
                let mut s = vec![c.id(ci)];
                s.extend(c.morphisms().filter(|&h| c.target(h) == ci && h != c.id(ci)));
                s
            })
            .collect();
        Self::new(name, functor, slices, &[])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.functor
    }

    pub fn index(&self) -> &Arc<FinCategory> {
        self.functor.domain()
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        self.functor.codomain()
    }

    /// `C_i`
    pub fn object(&self, i: Ob) -> Ob {
        self.functor.ob(i)
    }

    /// `u_d`
    pub fn transition(&self, d: Mor) -> Mor {
        self.functor.mor(d)
    }

    pub fn slice(&self, i: Ob) -> &[Mor] {
        &self.slices[i.0]
    }

    pub fn slices(&self) -> &[Vec<Mor>] {
        &self.slices
    }

    /// The chosen pullback of `h` along `u_d`: `(pulled, projection)`.
    pub fn pullback(&self, d: Mor, h: Mor) -> (Mor, Mor) {
        self.pullbacks[&(d, h)]
    }

    pub fn chosen_pullbacks(&self) -> Vec<ChosenPullback> {
        self.pullbacks
            .iter()
            .map(|(&(arrow, along), &(pulled, projection))| ChosenPullback {
                arrow,
                along,
                pulled,
                projection,
            })
            .collect()
    }

    /// The full subcategory of `C / C_i` on the slice system `S_i`.
    /// Objects are in slice order; a morphism `h -> h'` is `g` with `h' g = h`.
    pub fn slice_category(&self, i: Ob) -> (Arc<FinCategory>, Vec<Mor>) {
        let c = self.target();
        let s = &self.slices[i.0];
        let objects: Vec<String> = s.iter().map(|&h| c.mor_name(h).to_string()).collect();
        let mut morphisms = Vec::new();
        let mut under = Vec::new();
        let mut identities = vec![Mor(0); s.len()];
        let mut index = BTreeMap::new();
        for (a, &h) in s.iter().enumerate() {
            for (b, &h2) in s.iter().enumerate() {
                for &g in c.hom(c.source(h), c.source(h2)) {
                    if c.compose(h2, g) != h {
                        continue;
                    }
                    let m = Mor(morphisms.len());
                    if a == b && c.is_identity(g) {
                        identities[a] = m;
                    }
                    index.insert((a, b, g), m);
                    morphisms.push(MorphismData {
                        name: format!("{}:{}->{}", c.mor_name(g), objects[a], objects[b]),
                        source: Ob(a),
                        target: Ob(b),
                    });
                    under.push(g);
                }
            }
        }
        let comp = |g2: Mor, g1: Mor| {
            let (a, b) = (morphisms[g1.0].source.0, morphisms[g2.0].target.0);
            index.get(&(a, b, c.compose(under[g2.0], under[g1.0]))).copied()
        };
        let name = format!("{}/{}", c.name(), c.obj_name(self.object(i)));
        let cat = FinCategory::from_parts(name, objects, morphisms.clone(), identities, comp)
            .expect("slice subcategory is a category");
        (Arc::new(cat), under)
    }
}
