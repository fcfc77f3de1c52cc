//! Finite-set-valued presheaves on finite categories.

mod limits;
mod maps;
mod slice;

pub use limits::{coproduct, presheaf_colimit, presheaf_limit, product, pullback, Cocone, Cone, PresheafDiagram};
pub use maps::{all_maps, find_iso, PresheafMap};
pub use slice::{fiber_inclusion, fiber_presheaf, pullback_of_element, total_presheaf};

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{FinCategory, FinFunctor, Mor, Ob};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown element `{element}` of the value at `{object}`")]
    UnknownElement { object: String, element: String },
    #[error("duplicate element `{element}` in the value at `{object}`")]
    DuplicateElement { object: String, element: String },
    #[error("action of `{0}` is not given and cannot be inferred")]
    MissingAction(String),
    #[error("action of `{morphism}` is not a function on `{element}`")]
    NotAFunction { morphism: String, element: String },
    #[error("identity at `{0}` does not act trivially")]
    BrokenIdentity(String),
    #[error("functoriality fails for `{g}` . `{f}`")]
    BrokenFunctoriality { g: String, f: String },
    #[error("presheaves live over different categories")]
    BaseMismatch,
    #[error("map is not natural at `{0}`")]
    NotNatural(String),
    #[error("family is not compatible along `{0}`")]
    NotCompatible(String),
}

/// A contravariant functor from a finite category to finite sets.
///
/// Elements of each value are the indices `0..len`; labels are kept for
/// display and round-tripping. `action(g)` for `g : c' -> c` maps `X(c)` to
/// `X(c')`.
#[derive(Clone, Debug)]
pub struct FinPresheaf {
    name: String,
    base: Arc<FinCategory>,
    labels: Vec<Vec<String>>,
    actions: Vec<Vec<usize>>,
}

// The name is display metadata and does not take part in equality.
impl PartialEq for FinPresheaf {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.actions == other.actions && self.base == other.base
    }
}

impl Eq for FinPresheaf {}

/// A compatible family of elements, one per object: a map `1 => X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GlobalElement {
    pub family: Vec<usize>,
}

impl FinPresheaf {
    pub fn new(
        name: impl Into<String>,
        base: Arc<FinCategory>,
        labels: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self, PresheafError> {
        assert_eq!(labels.len(), base.n_objects(), "one value per object");
        assert_eq!(actions.len(), base.n_morphisms(), "one action per morphism");
        let x = FinPresheaf {
            name: name.into(),
            base,
            labels,
            actions,
        };
        x.check()?;
        Ok(x)
    }

    /// For data produced by a construction whose functoriality is already
    /// established; checked in debug builds.
    pub(crate) fn new_trusted(
        name: impl Into<String>,
        base: Arc<FinCategory>,
        labels: Vec<Vec<String>>,
        actions: Vec<Vec<usize>>,
    ) -> Self {
        let x = FinPresheaf {
            name: name.into(),
            base,
            labels,
            actions,
        };
        debug_assert_eq!(x.check(), Ok(()));
        x
    }

    fn check(&self) -> Result<(), PresheafError> {
        let c = &*self.base;
        for g in c.morphisms() {
            let (src, tgt) = (c.source(g), c.target(g));
            let act = &self.actions[g.0];
            if act.len() != self.size(tgt) {
                return Err(PresheafError::MissingAction(c.mor_name(g).to_string()));
            }
            if let Some(i) = act.iter().position(|&y| y >= self.size(src)) {
                return Err(PresheafError::NotAFunction {
                    morphism: c.mor_name(g).to_string(),
                    element: self.labels[tgt.0][i].clone(),
                });
            }
        }
        for a in c.objects() {
            let id = c.id(a);
            if self.actions[id.0].iter().enumerate().any(|(i, &y)| i != y) {
                return Err(PresheafError::BrokenIdentity(c.obj_name(a).to_string()));
            }
        }
        for f in c.morphisms() {
            for &g in c.outgoing(c.target(f)) {
                let gf = c.compose(g, f);
                let ok = (0..self.size(c.target(g)))
                    .all(|x| self.act(gf, x) == self.act(f, self.act(g, x)));
                if !ok {
                    return Err(PresheafError::BrokenFunctoriality {
                        g: c.mor_name(g).to_string(),
                        f: c.mor_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn size(&self, c: Ob) -> usize {
        self.labels[c.0].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn label(&self, c: Ob, x: usize) -> &str {
        &self.labels[c.0][x]
    }

    pub fn labels(&self, c: Ob) -> &[String] {
        &self.labels[c.0]
    }

    pub fn find_element(&self, c: Ob, label: &str) -> Option<usize> {
        self.labels[c.0].iter().position(|l| l == label)
    }

    /// `X(g)(x)` for `g : c' -> c` and `x` in `X(c)`.
    pub fn act(&self, g: Mor, x: usize) -> usize {
        self.actions[g.0][x]
    }

    pub fn action(&self, g: Mor) -> &[usize] {
        &self.actions[g.0]
    }

    /// The terminal presheaf: a singleton at every object.
    pub fn terminal(base: Arc<FinCategory>) -> Self {
        let labels = vec![vec!["*".to_string()]; base.n_objects()];
        let actions = vec![vec![0]; base.n_morphisms()];
        FinPresheaf::new_trusted("1", base, labels, actions)
    }

    /// The presheaf with a single value everywhere empty.
    pub fn initial(base: Arc<FinCategory>) -> Self {
        let labels = vec![Vec::new(); base.n_objects()];
        let actions = vec![Vec::new(); base.n_morphisms()];
        FinPresheaf::new_trusted("0", base, labels, actions)
    }

    /// `Hom(-, c)`, acting by precomposition. Elements are labelled by the
    /// morphism names.
    pub fn representable(base: Arc<FinCategory>, c: Ob) -> Self {
        let cat = &*base;
        let labels = cat
            .objects()
            .map(|d| cat.hom(d, c).iter().map(|&h| cat.mor_name(h).to_string()).collect())
            .collect();
        let actions = cat
            .morphisms()
            .map(|g| {
                let (d1, d) = (cat.source(g), cat.target(g));
                let hom1 = cat.hom(d1, c);
                cat.hom(d, c)
                    .iter()
                    .map(|&h| {
                        let hg = cat.compose(h, g);
                        hom1.iter().position(|&k| k == hg).unwrap()
                    })
                    .collect()
            })
            .collect();
        let name = format!("y({})", cat.obj_name(c));
        FinPresheaf::new_trusted(name, base, labels, actions)
    }

    /// The constant presheaf on a finite set with the given labels.
    pub fn constant(base: Arc<FinCategory>, elements: &[String]) -> Self {
        let labels = vec![elements.to_vec(); base.n_objects()];
        let actions = vec![(0..elements.len()).collect(); base.n_morphisms()];
        FinPresheaf::new_trusted("const", base, labels, actions)
    }

    /// Position of a morphism of `Hom(d, c)` inside `representable(c)(d)`.
    pub fn representable_index(base: &FinCategory, c: Ob, h: Mor) -> usize {
        let d = base.source(h);
        base.hom(d, c).iter().position(|&k| k == h).expect("h targets c")
    }

    /// Restriction along a functor `u : C -> D` (this presheaf lives on `D`).
    pub fn restrict(&self, u: &FinFunctor) -> FinPresheaf {
        assert_eq!(**u.codomain(), *self.base, "restriction along a functor into another base");
        let c = u.domain();
        let labels = c.objects().map(|a| self.labels[u.ob(a).0].clone()).collect();
        let actions = c.morphisms().map(|f| self.actions[u.mor(f).0].clone()).collect();
        FinPresheaf::new_trusted(format!("{}*{}", u.name(), self.name), c.clone(), labels, actions)
    }

    pub fn is_global_element(&self, family: &[usize]) -> bool {
        let c = &*self.base;
        family.len() == c.n_objects()
            && c.objects().all(|a| family[a.0] < self.size(a))
            && c
                .morphisms()
                .all(|g| self.act(g, family[c.target(g).0]) == family[c.source(g).0])
    }

    /// All compatible families, in lexicographic order.
    pub fn global_elements(&self) -> Vec<GlobalElement> {
        let c = &*self.base;
        let n = c.n_objects();
        let mut out = Vec::new();
        let mut fam = vec![0usize; n];
        fn go(x: &FinPresheaf, i: usize, fam: &mut Vec<usize>, out: &mut Vec<GlobalElement>) {
            let c = &*x.base;
            if i == c.n_objects() {
                out.push(GlobalElement { family: fam.clone() });
                return;
            }
            'cand: for v in 0..x.size(Ob(i)) {
                fam[i] = v;
                for j in 0..=i {
                    for &g in c.hom(Ob(j), Ob(i)) {
                        if x.act(g, v) != fam[j] {
                            continue 'cand;
                        }
                    }
                    for &g in c.hom(Ob(i), Ob(j)) {
                        if x.act(g, fam[j]) != v {
                            continue 'cand;
                        }
                    }
                }
                go(x, i + 1, fam, out);
            }
        }
        go(self, 0, &mut fam, &mut out);
        out
    }

    pub fn is_empty_everywhere(&self) -> bool {
        self.labels.iter().all(Vec::is_empty)
    }
}

/// Unvalidated presheaf description, as produced by the DSL parser.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPresheaf {
    pub name: String,
    pub values: Vec<(String, Vec<String>)>,
    /// `(morphism, [(element of target value, element of source value)])`
    pub actions: Vec<(String, Vec<(String, String)>)>,
}

impl RawPresheaf {
    pub fn new(name: impl Into<String>) -> Self {
        RawPresheaf {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn value(mut self, object: &str, elements: &[&str]) -> Self {
        self.values
            .push((object.to_string(), elements.iter().map(|e| e.to_string()).collect()));
        self
    }

    pub fn action(mut self, morphism: &str, pairs: &[(&str, &str)]) -> Self {
        self.actions.push((
            morphism.to_string(),
            pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        ));
        self
    }

    pub fn validate(&self, base: Arc<FinCategory>) -> Result<FinPresheaf, PresheafError> {
        validate_presheaf(self, base)
    }
}

/// Checks a raw presheaf against its base. Objects without a listed value
/// get the empty set. Identities act trivially; an unlisted action is
/// inferred only when it is forced (empty domain or singleton codomain).
pub fn validate_presheaf(raw: &RawPresheaf, base: Arc<FinCategory>) -> Result<FinPresheaf, PresheafError> {
    let c = &*base;
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); c.n_objects()];
    let mut given = vec![false; c.n_objects()];
    for (o, elems) in &raw.values {
        let a = c
            .find_object(o)
            .ok_or_else(|| PresheafError::UnknownObject(o.clone()))?;
        let mut seen = HashMap::new();
        for e in elems {
            if seen.insert(e.as_str(), ()).is_some() || given[a.0] {
                return Err(PresheafError::DuplicateElement {
                    object: o.clone(),
                    element: e.clone(),
                });
            }
        }
        given[a.0] = true;
        labels[a.0] = elems.clone();
    }
    let mut actions: Vec<Option<Vec<usize>>> = vec![None; c.n_morphisms()];
    for (m, pairs) in &raw.actions {
        let g = c
            .find_morphism(m)
            .ok_or_else(|| PresheafError::UnknownMorphism(m.clone()))?;
        let (src, tgt) = (c.source(g), c.target(g));
        let elem = |o: Ob, e: &str| {
            labels[o.0]
                .iter()
                .position(|l| l == e)
                .ok_or_else(|| PresheafError::UnknownElement {
                    object: c.obj_name(o).to_string(),
                    element: e.to_string(),
                })
        };
        let mut map = vec![None; labels[tgt.0].len()];
        for (x, y) in pairs {
            let (xi, yi) = (elem(tgt, x)?, elem(src, y)?);
            if map[xi].replace(yi).is_some_and(|prev| prev != yi) {
                return Err(PresheafError::NotAFunction {
                    morphism: m.clone(),
                    element: x.clone(),
                });
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, y)| {
                y.ok_or_else(|| PresheafError::NotAFunction {
                    morphism: m.clone(),
                    element: labels[tgt.0][i].clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        actions[g.0] = Some(map);
    }
    let actions = c
        .morphisms()
        .map(|g| {
            if let Some(a) = actions[g.0].take() {
                return Ok(a);
            }
            let (src, tgt) = (c.source(g), c.target(g));
            let (ns, nt) = (labels[src.0].len(), labels[tgt.0].len());
            if c.is_identity(g) {
                Ok((0..nt).collect())
            } else if nt == 0 {
                Ok(Vec::new())
            } else if ns == 1 {
                Ok(vec![0; nt])
            } else {
                Err(PresheafError::MissingAction(c.mor_name(g).to_string()))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    FinPresheaf::new(raw.name.clone(), base, labels, actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;

    #[test]
    fn representables_on_arrow() {
        let c = fixtures::arrow();
        let (o0, o1) = (c.find_object("0").unwrap(), c.find_object("1").unwrap());
        let y0 = FinPresheaf::representable(c.clone(), o0);
        let y1 = FinPresheaf::representable(c.clone(), o1);
        assert_eq!(y0.sizes(), vec![1, 0]);
        assert_eq!(y1.sizes(), vec![1, 1]);
        assert_eq!(y1.labels(o0), ["f"]);
        assert_eq!(y1.global_elements().len(), 1);
        assert!(y0.global_elements().is_empty());
    }

    #[test]
    fn raw_presheaf_inference() {
        let c = fixtures::arrow();
        let x = RawPresheaf::new("X")
            .value("0", &["a"])
            .value("1", &["p", "q"])
            .validate(c.clone())
            .unwrap();
        assert_eq!(x.global_elements().len(), 2);
        let err = RawPresheaf::new("Y")
            .value("0", &["a", "b"])
            .value("1", &["p"])
            .validate(c)
            .unwrap_err();
        assert_eq!(err, PresheafError::MissingAction("f".into()));
    }

    #[test]
    fn broken_functoriality_is_reported() {
        // On Idem, e must act idempotently.
        let c = fixtures::idem();
        let err = RawPresheaf::new("X")
            .value("x", &["a", "b"])
            .action("e", &[("a", "b"), ("b", "a")])
            .validate(c)
            .unwrap_err();
        assert!(matches!(err, PresheafError::BrokenFunctoriality { .. }));
    }
}
