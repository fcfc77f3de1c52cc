//! Grothendieck topologies on finite categories.

mod criteria;
mod sheaf;

pub use criteria::{
    check_j_cofinal, comorphism_tc, is_j_cofinal, is_local_site, lifts_global_elements,
    preserves_existing_limits, tc_by_local_site, JCofinalityFailure, SiteMorphism, SiteRole,
    TcVerdict,
};
pub use sheaf::{check_sheaf, is_sheaf, is_subcanonical, matching_families, sheafify, SheafFailure, Sheafification};

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{FinCategory, Mor, Ob};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SiteError {
    #[error("basis family at `{apex}` contains `{arrow}`, which does not end there")]
    BadBasis { apex: String, arrow: String },
    #[error("no terminal object in `{0}`")]
    NoTerminalObject(String),
    #[error("the site is not local: the terminal object has a non-maximal cover")]
    NotLocalSite,
    #[error("not a comorphism of sites: a cover of the image of `{0}` does not lift")]
    NotComorphism(String),
    #[error("not a morphism of sites: a cover of `{0}` is not sent to a cover")]
    NotMorphismOfSites(String),
    #[error("topologies live on the wrong categories")]
    BaseMismatch,
    #[error("too many sieves to enumerate topologies ({0})")]
    TooManySieves(usize),
}

/// A set of arrows into `apex`, closed under precomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Sieve {
    pub apex: Ob,
    pub arrows: BTreeSet<Mor>,
}

impl Sieve {
    pub fn maximal(c: &FinCategory, apex: Ob) -> Self {
        Sieve {
            apex,
            arrows: c.incoming(apex).copied().collect(),
        }
    }

    pub fn empty(apex: Ob) -> Self {
        Sieve {
            apex,
            arrows: BTreeSet::new(),
        }
    }

    /// The sieve generated by `family`; every arrow must end at `apex`.
    pub fn generated(c: &FinCategory, apex: Ob, family: &[Mor]) -> Self {
        let mut arrows = BTreeSet::new();
        for &h in family {
            debug_assert_eq!(c.target(h), apex);
            for &k in c.incoming(c.source(h)) {
                arrows.insert(c.compose(h, k));
            }
        }
        Sieve { apex, arrows }
    }

    pub fn contains(&self, h: Mor) -> bool {
        self.arrows.contains(&h)
    }

    pub fn is_maximal(&self, c: &FinCategory) -> bool {
        self.arrows.contains(&c.id(self.apex))
    }

    /// `h* S = { k | h . k in S }` for `h : c' -> apex`.
    pub fn pullback(&self, c: &FinCategory, h: Mor) -> Sieve {
        let src = c.source(h);
        Sieve {
            apex: src,
            arrows: c
                .incoming(src)
                .copied()
                .filter(|&k| self.arrows.contains(&c.compose(h, k)))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Sieve) -> Sieve {
        Sieve {
            apex: self.apex,
            arrows: self.arrows.intersection(&other.arrows).copied().collect(),
        }
    }

    pub fn union(&self, other: &Sieve) -> Sieve {
        Sieve {
            apex: self.apex,
            arrows: self.arrows.union(&other.arrows).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.arrows.is_subset(&other.arrows)
    }

    pub fn is_closed(&self, c: &FinCategory) -> bool {
        self.arrows.iter().all(|&h| {
            c.target(h) == self.apex
                && c.incoming(c.source(h)).all(|&k| self.arrows.contains(&c.compose(h, k)))
        })
    }

    pub fn display(&self, c: &FinCategory) -> String {
        let names: Vec<&str> = self.arrows.iter().map(|&h| c.mor_name(h)).collect();
        format!("{}:[{}]", c.obj_name(self.apex), names.join(","))
    }
}

/// Every sieve on `apex`: unions of principal sieves, smallest first.
pub fn all_sieves(c: &FinCategory, apex: Ob) -> Vec<Sieve> {
    let principal: Vec<Sieve> = c
        .incoming(apex)
        .map(|&h| Sieve::generated(c, apex, &[h]))
        .collect();
    let mut seen = BTreeSet::from([Sieve::empty(apex)]);
    let mut frontier = vec![Sieve::empty(apex)];
    while let Some(s) = frontier.pop() {
        for p in &principal {
            let t = s.union(p);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<Sieve> = seen.into_iter().collect();
    out.sort_by_key(|s| s.arrows.len());
    out
}

/// A topology, stored saturated: `covers[c]` is the set of covering sieves on `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrothendieckTopology {
    base: Arc<FinCategory>,
    covers: Vec<BTreeSet<Sieve>>,
}

/// Which axiom a candidate topology violates, and where.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomFailure {
    MissingMaximal(Ob),
    NotStable { sieve: Sieve, along: Mor },
    NotLocal { sieve: Sieve, witness: Sieve },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::MissingMaximal(c) => write!(f, "maximal sieve on {c} is not a cover"),
            AxiomFailure::NotStable { along, .. } => write!(f, "a cover does not pull back along {along}"),
            AxiomFailure::NotLocal { .. } => write!(f, "a locally covering sieve is not a cover"),
        }
    }
}

impl GrothendieckTopology {
    /// Only maximal sieves cover.
    pub fn trivial(base: Arc<FinCategory>) -> Self {
        let covers = base
            .objects()
            .map(|c| BTreeSet::from([Sieve::maximal(&base, c)]))
            .collect();
        GrothendieckTopology { base, covers }
    }

    /// The least topology in which the sieve generated by each basis family covers its apex.
    pub fn saturate(base: Arc<FinCategory>, basis: &[(Ob, Vec<Mor>)]) -> Result<Self, SiteError> {
        let mut seeds = Vec::new();
        for (apex, family) in basis {
            if let Some(&h) = family.iter().find(|&&h| base.target(h) != *apex) {
                return Err(SiteError::BadBasis {
                    apex: base.obj_name(*apex).to_string(),
                    arrow: base.mor_name(h).to_string(),
                });
            }
            seeds.push(Sieve::generated(&base, *apex, family));
        }
        Ok(Self::saturate_sieves(base, seeds))
    }

    /// The least topology containing the given sieves.
    pub fn saturate_sieves(base: Arc<FinCategory>, seeds: impl IntoIterator<Item = Sieve>) -> Self {
        let c = &*base;
        let mut covers: Vec<BTreeSet<Sieve>> = c
            .objects()
            .map(|o| BTreeSet::from([Sieve::maximal(c, o)]))
            .collect();
        for s in seeds {
            covers[s.apex.0].insert(s);
        }
        let all: Vec<Vec<Sieve>> = c.objects().map(|o| all_sieves(c, o)).collect();
        loop {
            let mut changed = false;
            // stability
            for o in c.objects() {
                let current: Vec<Sieve> = covers[o.0].iter().cloned().collect();
                for s in &current {
                    for &h in c.incoming(o) {
                        let p = s.pullback(c, h);
                        changed |= covers[p.apex.0].insert(p);
                    }
                }
            }
            // local character
            for o in c.objects() {
                for r in &all[o.0] {
                    if covers[o.0].contains(r) {
                        continue;
                    }
                    let local = covers[o.0].iter().any(|s| {
                        s.arrows
                            .iter()
                            .all(|&h| covers[c.source(h).0].contains(&r.pullback(c, h)))
                    });
                    if local {
                        covers[o.0].insert(r.clone());
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        GrothendieckTopology { base, covers }
    }

    /// Builds a topology from explicit cover sets, checking the axioms.
    pub fn from_covers(base: Arc<FinCategory>, covers: Vec<BTreeSet<Sieve>>) -> Result<Self, AxiomFailure> {
        let t = GrothendieckTopology { base, covers };
        t.check_axioms()?;
        Ok(t)
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    pub fn covers(&self, c: Ob) -> &BTreeSet<Sieve> {
        &self.covers[c.0]
    }

    pub fn is_cover(&self, s: &Sieve) -> bool {
        self.covers[s.apex.0].contains(s)
    }

    pub fn is_trivial(&self) -> bool {
        self.covers.iter().all(|s| s.len() == 1)
    }

    /// Intersection of all covers of `c`, itself a cover.
    pub fn minimal_cover(&self, c: Ob) -> Sieve {
        self.covers[c.0]
            .iter()
            .fold(Sieve::maximal(&self.base, c), |acc, s| acc.intersection(s))
    }

    /// The least topology containing both.
    pub fn join(&self, other: &GrothendieckTopology) -> Result<Self, SiteError> {
        if self.base != other.base {
            return Err(SiteError::BaseMismatch);
        }
        let seeds = self.covers.iter().chain(&other.covers).flatten().cloned();
        Ok(Self::saturate_sieves(self.base.clone(), seeds))
    }

    pub fn is_finer_than(&self, other: &GrothendieckTopology) -> bool {
        self.covers.iter().zip(&other.covers).all(|(a, b)| b.is_subset(a))
    }

    pub fn check_axioms(&self) -> Result<(), AxiomFailure> {
        let c = &*self.base;
        for o in c.objects() {
            if !self.covers[o.0].contains(&Sieve::maximal(c, o)) {
                return Err(AxiomFailure::MissingMaximal(o));
            }
        }
        for o in c.objects() {
            for s in &self.covers[o.0] {
                for &h in c.incoming(o) {
                    if !self.is_cover(&s.pullback(c, h)) {
                        return Err(AxiomFailure::NotStable {
                            sieve: s.clone(),
                            along: h,
                        });
                    }
                }
            }
        }
        for o in c.objects() {
            for r in all_sieves(c, o) {
                if self.is_cover(&r) {
                    continue;
                }
                for s in &self.covers[o.0] {
                    if s.arrows.iter().all(|&h| self.is_cover(&r.pullback(c, h))) {
                        return Err(AxiomFailure::NotLocal {
                            sieve: r,
                            witness: s.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Every topology on `base`, deduplicated, trivial first. Fails when
    /// there are more than `max_sieves` non-maximal sieves in total.
    pub fn enumerate_all(base: Arc<FinCategory>, max_sieves: usize) -> Result<Vec<Self>, SiteError> {
        let c = &*base;
        let candidates: Vec<Sieve> = c
            .objects()
            .flat_map(|o| all_sieves(c, o))
            .filter(|s| !s.is_maximal(c))
            .collect();
        if candidates.len() > max_sieves {
            return Err(SiteError::TooManySieves(candidates.len()));
        }
        let mut out: Vec<Self> = Vec::new();
        for mask in 0u64..(1u64 << candidates.len()) {
            let seeds = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, s)| s.clone());
            let t = Self::saturate_sieves(base.clone(), seeds);
            if !out.contains(&t) {
                out.push(t);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::fixtures;

    #[test]
    fn sieves_on_arrow() {
        let c = fixtures::arrow();
        assert_eq!(all_sieves(&c, Ob(0)).len(), 2);
        assert_eq!(all_sieves(&c, Ob(1)).len(), 3);
        let pp = fixtures::par_pair();
        assert_eq!(all_sieves(&pp, Ob(1)).len(), 5);
        for s in all_sieves(&pp, Ob(1)) {
            assert!(s.is_closed(&pp));
        }
    }

    #[test]
    fn saturation_examples() {
        let c = fixtures::arrow();
        let t = GrothendieckTopology::saturate(c.clone(), &[]).unwrap();
        assert!(t.is_trivial());
        let f = c.find_morphism("f").unwrap();
        let t = GrothendieckTopology::saturate(c.clone(), &[(Ob(1), vec![f])]).unwrap();
        assert!(t.is_cover(&Sieve::generated(&c, Ob(1), &[f])));
        assert_eq!(t.check_axioms(), Ok(()));
        let ids: Vec<(Ob, Vec<Mor>)> = c.objects().map(|o| (o, vec![c.id(o)])).collect();
        assert!(GrothendieckTopology::saturate(c.clone(), &ids).unwrap().is_trivial());
        assert!(matches!(
            GrothendieckTopology::saturate(c, &[(Ob(0), vec![f])]),
            Err(SiteError::BadBasis { .. })
        ));
    }

    #[test]
    fn enumeration_yields_valid_topologies() {
        for c in [fixtures::arrow(), fixtures::par_pair(), fixtures::one()] {
            let all = GrothendieckTopology::enumerate_all(c, 12).unwrap();
            assert!(all[0].is_trivial());
            for t in &all {
                assert_eq!(t.check_axioms(), Ok(()));
            }
        }
    }
}
