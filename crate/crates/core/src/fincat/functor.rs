use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FinCategory, FunctorError, Mor, Ob};

/// A functor between finite categories, stored as explicit object and
/// morphism maps. Both maps are total and the functor laws hold.
#[derive(Clone, Debug)]
pub struct FinFunctor {
    name: String,
    domain: Arc<FinCategory>,
    codomain: Arc<FinCategory>,
    on_objects: Vec<Ob>,
    on_morphisms: Vec<Mor>,
}

// Functors compare by their data; the name is only for display.
impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.on_objects == other.on_objects
            && self.on_morphisms == other.on_morphisms
            && self.domain == other.domain
            && self.codomain == other.codomain
    }
}

impl Eq for FinFunctor {}

impl FinFunctor {
    pub fn new(
        name: impl Into<String>,
        domain: Arc<FinCategory>,
        codomain: Arc<FinCategory>,
        on_objects: Vec<Ob>,
        on_morphisms: Vec<Mor>,
    ) -> Result<Self, FunctorError> {
        if on_objects.len() != domain.n_objects() {
            let missing = domain.object_names().get(on_objects.len()).cloned();
            return Err(FunctorError::UnmappedObject(missing.unwrap_or_default()));
        }
        if on_morphisms.len() != domain.n_morphisms() {
            let missing = domain.morphism_data().get(on_morphisms.len()).map(|d| d.name.clone());
            return Err(FunctorError::UnmappedMorphism(missing.unwrap_or_default()));
        }
        let f = FinFunctor {
            name: name.into(),
            domain,
            codomain,
            on_objects,
            on_morphisms,
        };
        f.check_laws()?;
        Ok(f)
    }

    fn check_laws(&self) -> Result<(), FunctorError> {
        let (c, d) = (&*self.domain, &*self.codomain);
        if self.on_objects.iter().any(|o| o.0 >= d.n_objects())
            || self.on_morphisms.iter().any(|m| m.0 >= d.n_morphisms())
        {
            return Err(FunctorError::Mismatch("image outside the codomain".into()));
        }
        for f in c.morphisms() {
            let img = self.mor(f);
            if d.source(img) != self.ob(c.source(f)) || d.target(img) != self.ob(c.target(f)) {
                return Err(FunctorError::WrongEndpoints {
                    f: c.mor_name(f).to_string(),
                    image: d.mor_name(img).to_string(),
                });
            }
        }
        for a in c.objects() {
            if self.mor(c.id(a)) != d.id(self.ob(a)) {
                return Err(FunctorError::BrokenIdentity(c.obj_name(a).to_string()));
            }
        }
        for f in c.morphisms() {
            for &g in c.outgoing(c.target(f)) {
                if self.mor(c.compose(g, f)) != d.compose(self.mor(g), self.mor(f)) {
                    return Err(FunctorError::BrokenComposition {
                        g: c.mor_name(g).to_string(),
                        f: c.mor_name(f).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        FinFunctor {
            name: format!("id_{}", c.name()),
            on_objects: c.objects().collect(),
            on_morphisms: c.morphisms().collect(),
            domain: c.clone(),
            codomain: c,
        }
    }

    /// The functor constant at object `b`.
    pub fn constant(domain: Arc<FinCategory>, codomain: Arc<FinCategory>, b: Ob) -> Self {
        FinFunctor {
            name: format!("const_{}", codomain.obj_name(b)),
            on_objects: vec![b; domain.n_objects()],
            on_morphisms: vec![codomain.id(b); domain.n_morphisms()],
            domain,
            codomain,
        }
    }

    /// Builds a functor from maps already known to satisfy the laws.
    /// Debug builds still check them.
    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        domain: Arc<FinCategory>,
        codomain: Arc<FinCategory>,
        on_objects: Vec<Ob>,
        on_morphisms: Vec<Mor>,
    ) -> Self {
        let f = FinFunctor {
            name: name.into(),
            domain,
            codomain,
            on_objects,
            on_morphisms,
        };
        debug_assert_eq!(f.check_laws(), Ok(()));
        f
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> &Arc<FinCategory> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FinCategory> {
        &self.codomain
    }

    pub fn ob(&self, a: Ob) -> Ob {
        self.on_objects[a.0]
    }

    pub fn mor(&self, f: Mor) -> Mor {
        self.on_morphisms[f.0]
    }

    pub fn object_map(&self) -> &[Ob] {
        &self.on_objects
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.on_morphisms
    }

    /// `then . self`
    pub fn then(&self, then: &FinFunctor) -> FinFunctor {
        assert!(
            *self.codomain == *then.domain,
            "cannot compose {} with {}",
            self.name,
            then.name
        );
        FinFunctor {
            name: format!("{}.{}", then.name, self.name),
            domain: self.domain.clone(),
            codomain: then.codomain.clone(),
            on_objects: self.on_objects.iter().map(|&o| then.ob(o)).collect(),
            on_morphisms: self.on_morphisms.iter().map(|&m| then.mor(m)).collect(),
        }
    }

    /// The same functor viewed between opposite categories.
    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            name: format!("{}^op", self.name),
            domain: Arc::new(self.domain.opposite()),
            codomain: Arc::new(self.codomain.opposite()),
            on_objects: self.on_objects.clone(),
            on_morphisms: self.on_morphisms.clone(),
        }
    }

    pub fn is_identity_on_the_nose(&self) -> bool {
        *self.domain == *self.codomain
            && self.on_objects.iter().enumerate().all(|(i, o)| o.0 == i)
            && self.on_morphisms.iter().enumerate().all(|(i, m)| m.0 == i)
    }

    pub fn is_faithful(&self) -> bool {
        let c = &*self.domain;
        c.objects().all(|a| {
            c.objects().all(|b| {
                let hom = c.hom(a, b);
                let mut imgs: Vec<Mor> = hom.iter().map(|&f| self.mor(f)).collect();
                imgs.sort();
                imgs.dedup();
                imgs.len() == hom.len()
            })
        })
    }

    pub fn is_full(&self) -> bool {
        let (c, d) = (&*self.domain, &*self.codomain);
        c.objects().all(|a| {
            c.objects().all(|b| {
                d.hom(self.ob(a), self.ob(b))
                    .iter()
                    .all(|g| c.hom(a, b).iter().any(|&f| self.mor(f) == *g))
            })
        })
    }

    pub fn is_essentially_surjective(&self) -> bool {
        let d = &*self.codomain;
        d.objects()
            .all(|y| self.on_objects.iter().any(|&x| !d.isos(x, y).is_empty()))
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_full() && self.is_faithful() && self.is_essentially_surjective()
    }
}

/// An unvalidated functor description, as produced by the DSL parser.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub name: String,
    pub objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String)>,
}

impl RawFunctor {
    pub fn new(name: impl Into<String>) -> Self {
        RawFunctor {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn object(mut self, from: &str, to: &str) -> Self {
        self.objects.push((from.to_string(), to.to_string()));
        self
    }

    pub fn arrow(mut self, from: &str, to: &str) -> Self {
        self.morphisms.push((from.to_string(), to.to_string()));
        self
    }
}

/// Checks a raw functor description against its domain and codomain.
///
/// Identities need not be listed. Any other unlisted morphism is filled in
/// only when its image hom-set has exactly one element.
pub fn validate_functor(
    raw: &RawFunctor,
    c: Arc<FinCategory>,
    d: Arc<FinCategory>,
) -> Result<FinFunctor, FunctorError> {
    let mut on_objects = vec![None; c.n_objects()];
    for (x, y) in &raw.objects {
        let a = c
            .find_object(x)
            .ok_or_else(|| FunctorError::UnknownObject(x.clone()))?;
        let b = d
            .find_object(y)
            .ok_or_else(|| FunctorError::UnknownObject(y.clone()))?;
        if on_objects[a.0].replace(b).is_some() {
            return Err(FunctorError::DuplicateMapping(x.clone()));
        }
    }
    let mut on_morphisms = vec![None; c.n_morphisms()];
    for (x, y) in &raw.morphisms {
        let f = c
            .find_morphism(x)
            .ok_or_else(|| FunctorError::UnknownMorphism(x.clone()))?;
        let g = d
            .find_morphism(y)
            .ok_or_else(|| FunctorError::UnknownMorphism(y.clone()))?;
        if on_morphisms[f.0].replace(g).is_some() {
            return Err(FunctorError::DuplicateMapping(x.clone()));
        }
    }
    // Objects reachable through a mapped morphism may be left implicit.
    for f in c.morphisms() {
        if let Some(g) = on_morphisms[f.0] {
            for (end, img) in [(c.source(f), d.source(g)), (c.target(f), d.target(g))] {
                match on_objects[end.0] {
                    None => on_objects[end.0] = Some(img),
                    Some(o) if o != img => {
                        return Err(FunctorError::WrongEndpoints {
                            f: c.mor_name(f).to_string(),
                            image: d.mor_name(g).to_string(),
                        })
                    }
                    _ => {}
                }
            }
        }
    }
    let on_objects = on_objects
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| FunctorError::UnmappedObject(c.obj_name(Ob(i)).to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::with_capacity(c.n_morphisms());
    for f in c.morphisms() {
        let img = match on_morphisms[f.0] {
            Some(g) => g,
            None if c.is_identity(f) => d.id(on_objects[c.source(f).0]),
            None => {
                let hom = d.hom(on_objects[c.source(f).0], on_objects[c.target(f).0]);
                if hom.len() == 1 {
                    hom[0]
                } else {
                    return Err(FunctorError::UnmappedMorphism(c.mor_name(f).to_string()));
                }
            }
        };
        out.push(img);
    }
    FinFunctor::new(raw.name.clone(), c, d, on_objects, out)
}
