use super::{FinFunctor, Mor, NatError, Ob};

/// A natural transformation `source => target`, given by one component per
/// object of the shared domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransf {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<Mor>,
}

impl NatTransf {
    pub fn new(
        source: FinFunctor,
        target: FinFunctor,
        components: Vec<Mor>,
    ) -> Result<Self, NatError> {
        if *source.domain() != *target.domain() || *source.codomain() != *target.codomain() {
            return Err(NatError::Mismatch);
        }
        let (c, d) = (source.domain().clone(), source.codomain().clone());
        if components.len() != c.n_objects() {
            let name = c.object_names().get(components.len()).cloned();
            return Err(NatError::BadComponent(name.unwrap_or_default()));
        }
        for a in c.objects() {
            let m = components[a.0];
            if m.0 >= d.n_morphisms()
                || d.source(m) != source.ob(a)
                || d.target(m) != target.ob(a)
            {
                return Err(NatError::BadComponent(c.obj_name(a).to_string()));
            }
        }
        for f in c.morphisms() {
            let (a, b) = (c.source(f), c.target(f));
            let lhs = d.compose(target.mor(f), components[a.0]);
            let rhs = d.compose(components[b.0], source.mor(f));
            if lhs != rhs {
                return Err(NatError::NotNatural(c.mor_name(f).to_string()));
            }
        }
        Ok(NatTransf {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: &FinFunctor) -> Self {
        let d = f.codomain();
        NatTransf {
            source: f.clone(),
            target: f.clone(),
            components: f.object_map().iter().map(|&o| d.id(o)).collect(),
        }
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }

    pub fn component(&self, a: Ob) -> Mor {
        self.components[a.0]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    pub fn is_iso(&self) -> bool {
        let d = self.source.codomain();
        self.components.iter().all(|&m| d.is_iso(m))
    }

    pub fn is_identity(&self) -> bool {
        let d = self.source.codomain();
        self.components.iter().all(|&m| d.is_identity(m))
    }

    /// Inverse of a natural isomorphism.
    pub fn inverse(&self) -> Option<NatTransf> {
        let d = self.source.codomain();
        let components = self
            .components
            .iter()
            .map(|&m| d.inverse(m))
            .collect::<Option<Vec<_>>>()?;
        Some(NatTransf {
            source: self.target.clone(),
            target: self.source.clone(),
            components,
        })
    }

    /// Vertical composite `next . self`.
    pub fn vcompose(&self, next: &NatTransf) -> NatTransf {
        assert_eq!(self.target, next.source, "vertical composite of non-adjacent cells");
        let d = self.source.codomain();
        NatTransf {
            source: self.source.clone(),
            target: next.target.clone(),
            components: self
                .components
                .iter()
                .zip(&next.components)
                .map(|(&a, &b)| d.compose(b, a))
                .collect(),
        }
    }

    /// `self * k`: precomposition with a functor into the shared domain.
    pub fn whisker_left(&self, k: &FinFunctor) -> NatTransf {
        NatTransf {
            source: k.then(&self.source),
            target: k.then(&self.target),
            components: k.object_map().iter().map(|&o| self.components[o.0]).collect(),
        }
    }

    /// `k * self`: postcomposition with a functor out of the shared codomain.
    pub fn whisker_right(&self, k: &FinFunctor) -> NatTransf {
        NatTransf {
            source: self.source.then(k),
            target: self.target.then(k),
            components: self.components.iter().map(|&m| k.mor(m)).collect(),
        }
    }
}
