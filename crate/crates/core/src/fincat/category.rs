use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CategoryError;

/// Index of an object inside its category.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ob(pub usize);

/// Index of a morphism inside its category.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mor(pub usize);

impl fmt::Display for Ob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    pub name: String,
    pub source: Ob,
    pub target: Ob,
}

/// A finite category given by an explicit composition table.
///
/// Objects and morphisms are addressed by dense indices; their names are
/// opaque identifiers scoped to the category. Composition is total on
/// composable pairs, which is checked at construction time together with
/// the identity and associativity laws.
#[derive(Clone, Debug)]
pub struct FinCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identities: Vec<Mor>,
    // table[g * m + f] = g . f when target(f) = source(g)
    table: Vec<Option<Mor>>,
    // homs[a * n + b] = morphisms a -> b, in index order
    homs: Vec<Vec<Mor>>,
}

// The category name is display metadata and does not take part in equality.
impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.table == other.table
    }
}

impl Eq for FinCategory {}

impl FinCategory {
    /// Builds and validates a category from its parts. `compose(g, f)` is
    /// queried for every composable pair (target(f) = source(g)).
    pub fn from_parts<F>(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<MorphismData>,
        identities: Vec<Mor>,
        mut compose: F,
    ) -> Result<Self, CategoryError>
    where
        F: FnMut(Mor, Mor) -> Option<Mor>,
    {
        let n = objects.len();
        let m = morphisms.len();
        let mut seen = HashMap::new();
        for o in &objects {
            if seen.insert(o.as_str(), ()).is_some() {
                return Err(CategoryError::DuplicateObject(o.clone()));
            }
        }
        let mut seen = HashMap::new();
        for d in &morphisms {
            if seen.insert(d.name.as_str(), ()).is_some() {
                return Err(CategoryError::DuplicateMorphism(d.name.clone()));
            }
            if d.source.0 >= n || d.target.0 >= n {
                return Err(CategoryError::UnknownObject(format!(
                    "endpoint of `{}`",
                    d.name
                )));
            }
        }
        if identities.len() != n {
            return Err(CategoryError::MissingIdentity(
                objects.get(identities.len()).cloned().unwrap_or_default(),
            ));
        }
        for (a, id) in identities.iter().enumerate() {
            let d = morphisms
                .get(id.0)
                .ok_or_else(|| CategoryError::MissingIdentity(objects[a].clone()))?;
            if d.source.0 != a || d.target.0 != a {
                return Err(CategoryError::BrokenIdentity(d.name.clone()));
            }
        }
        let mut homs = vec![Vec::new(); n * n];
        for (i, d) in morphisms.iter().enumerate() {
            homs[d.source.0 * n + d.target.0].push(Mor(i));
        }
        let mut table = vec![None; m * m];
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].target != morphisms[g].source {
                    continue;
                }
                let h = compose(Mor(g), Mor(f)).ok_or_else(|| CategoryError::MissingComposite {
                    g: morphisms[g].name.clone(),
                    f: morphisms[f].name.clone(),
                    candidates: homs[morphisms[f].source.0 * n + morphisms[g].target.0].len(),
                })?;
                let ok = h.0 < m
                    && morphisms[h.0].source == morphisms[f].source
                    && morphisms[h.0].target == morphisms[g].target;
                if !ok {
                    return Err(CategoryError::IllTypedComposite {
                        g: morphisms[g].name.clone(),
                        f: morphisms[f].name.clone(),
                        h: morphisms.get(h.0).map(|d| d.name.clone()).unwrap_or_default(),
                    });
                }
                table[g * m + f] = Some(h);
            }
        }
        let cat = FinCategory {
            name: name.into(),
            objects,
            morphisms,
            identities,
            table,
            homs,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        for f in self.morphisms() {
            let (a, b) = (self.source(f), self.target(f));
            if self.compose(self.id(b), f) != f || self.compose(f, self.id(a)) != f {
                return Err(CategoryError::BrokenIdentity(self.mor_name(f).to_string()));
            }
        }
        for f in self.morphisms() {
            for &g in self.outgoing(self.target(f)) {
                let gf = self.compose(g, f);
                for &h in self.outgoing(self.target(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(CategoryError::NonAssociative {
                            h: self.mor_name(h).to_string(),
                            g: self.mor_name(g).to_string(),
                            f: self.mor_name(f).to_string(),
                        });
                    }
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

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Ob> + Clone {
        (0..self.objects.len()).map(Ob)
    }

    pub fn morphisms(&self) -> impl ExactSizeIterator<Item = Mor> + Clone {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn obj_name(&self, a: Ob) -> &str {
        &self.objects[a.0]
    }

    pub fn mor_name(&self, f: Mor) -> &str {
        &self.morphisms[f.0].name
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_data(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn find_object(&self, name: &str) -> Option<Ob> {
        self.objects.iter().position(|o| o == name).map(Ob)
    }

    pub fn find_morphism(&self, name: &str) -> Option<Mor> {
        self.morphisms.iter().position(|d| d.name == name).map(Mor)
    }

    pub fn source(&self, f: Mor) -> Ob {
        self.morphisms[f.0].source
    }

    pub fn target(&self, f: Mor) -> Ob {
        self.morphisms[f.0].target
    }

    pub fn id(&self, a: Ob) -> Mor {
        self.identities[a.0]
    }

    pub fn is_identity(&self, f: Mor) -> bool {
        self.identities[self.source(f).0] == f
    }

    /// `g . f`; panics when the pair is not composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "`{}` . `{}` is not composable in {}",
                self.mor_name(g),
                self.mor_name(f),
                self.name
            )
        })
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        self.table[g.0 * self.morphisms.len() + f.0]
    }

    /// Composes a path given in diagrammatic order (first arrow first).
    pub fn compose_path(&self, path: &[Mor]) -> Option<Mor> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &g| self.try_compose(g, acc))
    }

    pub fn hom(&self, a: Ob, b: Ob) -> &[Mor] {
        &self.homs[a.0 * self.objects.len() + b.0]
    }

    /// Morphisms with the given source, grouped by target.
    pub fn outgoing(&self, a: Ob) -> impl Iterator<Item = &Mor> + '_ {
        self.objects().flat_map(move |b| self.hom(a, b).iter())
    }

    /// Morphisms with the given target, grouped by source.
    pub fn incoming(&self, b: Ob) -> impl Iterator<Item = &Mor> + '_ {
        self.objects().flat_map(move |a| self.hom(a, b).iter())
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        let (a, b) = (self.source(f), self.target(f));
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == self.id(a) && self.compose(f, g) == self.id(b))
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isos(&self, a: Ob, b: Ob) -> Vec<Mor> {
        self.hom(a, b).iter().copied().filter(|&f| self.is_iso(f)).collect()
    }

    pub fn is_preorder(&self) -> bool {
        self.homs.iter().all(|h| h.len() <= 1)
    }

    pub fn terminal_object(&self) -> Option<Ob> {
        self.objects()
            .find(|&t| self.objects().all(|a| self.hom(a, t).len() == 1))
    }

    pub fn initial_object(&self) -> Option<Ob> {
        self.objects()
            .find(|&i| self.objects().all(|a| self.hom(i, a).len() == 1))
    }

    /// Whether `l: p -> x`, `r: p -> y` is a pullback of the cospan
    /// `g: x -> z`, `h: y -> z`.
    pub fn is_pullback(&self, g: Mor, h: Mor, l: Mor, r: Mor) -> bool {
        if self.try_compose(g, l).is_none()
            || self.try_compose(h, r).is_none()
            || self.source(l) != self.source(r)
            || self.compose(g, l) != self.compose(h, r)
        {
            return false;
        }
        let (x, y, p) = (self.source(g), self.source(h), self.source(l));
        self.objects().all(|w| {
            self.hom(w, x).iter().all(|&a| {
                self.hom(w, y).iter().all(|&b| {
                    self.compose(g, a) != self.compose(h, b)
                        || self
                            .hom(w, p)
                            .iter()
                            .filter(|&&m| self.compose(l, m) == a && self.compose(r, m) == b)
                            .count()
                            == 1
                })
            })
        })
    }

    /// All pullback cones `(l, r)` of the cospan `g`, `h`.
    pub fn pullbacks(&self, g: Mor, h: Mor) -> Vec<(Mor, Mor)> {
        let (x, y) = (self.source(g), self.source(h));
        let mut out = Vec::new();
        for p in self.objects() {
            for &l in self.hom(p, x) {
                for &r in self.hom(p, y) {
                    if self.is_pullback(g, h, l, r) {
                        out.push((l, r));
                    }
                }
            }
        }
        out
    }

    /// Whether `l: p -> a`, `r: p -> b` is a product cone.
    pub fn is_product(&self, l: Mor, r: Mor) -> bool {
        let p = self.source(l);
        if self.source(r) != p {
            return false;
        }
        let (a, b) = (self.target(l), self.target(r));
        self.objects().all(|w| {
            self.hom(w, a).iter().all(|&x| {
                self.hom(w, b).iter().all(|&y| {
                    self.hom(w, p)
                        .iter()
                        .filter(|&&m| self.compose(l, m) == x && self.compose(r, m) == y)
                        .count()
                        == 1
                })
            })
        })
    }

    /// The opposite category; names are kept, composition is reversed.
    pub fn opposite(&self) -> FinCategory {
        let n = self.n_objects();
        let m = self.n_morphisms();
        let morphisms = self
            .morphisms
            .iter()
            .map(|d| MorphismData {
                name: d.name.clone(),
                source: d.target,
                target: d.source,
            })
            .collect::<Vec<_>>();
        let mut homs = vec![Vec::new(); n * n];
        for (i, d) in morphisms.iter().enumerate() {
            homs[d.source.0 * n + d.target.0].push(Mor(i));
        }
        let mut table = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                table[g * m + f] = self.table[f * m + g];
            }
        }
        FinCategory {
            name: opposite_name(&self.name),
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            table,
            homs,
        }
    }

    /// The full subcategory on the given objects (kept in the given order).
    pub fn full_subcategory(&self, name: &str, keep: &[Ob]) -> FinCategory {
        let mut obj_index = vec![None; self.n_objects()];
        for (i, &a) in keep.iter().enumerate() {
            obj_index[a.0] = Some(Ob(i));
        }
        let mut mor_index = vec![None; self.n_morphisms()];
        let mut morphisms = Vec::new();
        for &a in keep {
            for &b in keep {
                for &f in self.hom(a, b) {
                    mor_index[f.0] = Some(Mor(morphisms.len()));
                    morphisms.push(MorphismData {
                        name: self.mor_name(f).to_string(),
                        source: obj_index[a.0].unwrap(),
                        target: obj_index[b.0].unwrap(),
                    });
                }
            }
        }
        let back: Vec<Mor> = {
            let mut v = vec![Mor(0); morphisms.len()];
            for (old, new) in mor_index.iter().enumerate() {
                if let Some(new) = new {
                    v[new.0] = Mor(old);
                }
            }
            v
        };
        let identities = keep.iter().map(|&a| mor_index[self.id(a).0].unwrap()).collect();
        FinCategory::from_parts(
            name,
            keep.iter().map(|&a| self.obj_name(a).to_string()).collect(),
            morphisms,
            identities,
            |g, f| mor_index[self.compose(back[g.0], back[f.0]).0],
        )
        .expect("full subcategory of a valid category is valid")
    }
}

fn opposite_name(name: &str) -> String {
    match name.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{name}^op"),
    }
}

/// Morphism entry of a user-supplied category description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// `g . f = h`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComposite {
    pub g: String,
    pub f: String,
    pub h: String,
}

/// An unvalidated category description, as produced by the DSL parser.
///
/// Identities are implicit and named `id_<object>` unless listed in
/// `identities`. Composites involving an identity never need to be listed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: Vec<(String, String)>,
    pub compositions: Vec<RawComposite>,
    /// Fill an omitted composite when exactly one morphism has the right type.
    pub infer_composites: bool,
}

impl RawCategory {
    pub fn new(name: impl Into<String>) -> Self {
        RawCategory {
            name: name.into(),
            infer_composites: true,
            ..Default::default()
        }
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn arrow(mut self, name: &str, source: &str, target: &str) -> Self {
        self.morphisms.push(RawMorphism {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
        });
        self
    }

    pub fn composite(mut self, g: &str, f: &str, h: &str) -> Self {
        self.compositions.push(RawComposite {
            g: g.to_string(),
            f: f.to_string(),
            h: h.to_string(),
        });
        self
    }

    pub fn strict(mut self) -> Self {
        self.infer_composites = false;
        self
    }

    /// Validates the description: see [`validate_category`].
    pub fn validate(&self) -> Result<FinCategory, CategoryError> {
        validate_category(self)
    }
}

pub fn identity_name(object: &str) -> String {
    format!("id_{object}")
}

/// Turns a raw description into a checked [`FinCategory`], or reports the
/// first violated law with the witnessing morphisms.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory, CategoryError> {
    let objects = raw.objects.clone();
    let obj = |name: &str| {
        objects
            .iter()
            .position(|o| o == name)
            .map(Ob)
            .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
    };
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    for (a, o) in objects.iter().enumerate() {
        let id_name = raw
            .identities
            .iter()
            .find(|(x, _)| x == o)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| identity_name(o));
        identities.push(Mor(morphisms.len()));
        morphisms.push(MorphismData {
            name: id_name,
            source: Ob(a),
            target: Ob(a),
        });
    }
    for rm in &raw.morphisms {
        morphisms.push(MorphismData {
            name: rm.name.clone(),
            source: obj(&rm.source)?,
            target: obj(&rm.target)?,
        });
    }
    let find = |name: &str| {
        morphisms
            .iter()
            .position(|d| d.name == name)
            .map(Mor)
            .ok_or_else(|| CategoryError::UnknownMorphism(name.to_string()))
    };
    let mut given: HashMap<(Mor, Mor), Mor> = HashMap::new();
    for c in &raw.compositions {
        let (g, f, h) = (find(&c.g)?, find(&c.f)?, find(&c.h)?);
        if morphisms[f.0].target != morphisms[g.0].source {
            return Err(CategoryError::NotComposable {
                g: c.g.clone(),
                f: c.f.clone(),
            });
        }
        if let Some(prev) = given.insert((g, f), h) {
            if prev != h {
                return Err(CategoryError::ConflictingComposite {
                    g: c.g.clone(),
                    f: c.f.clone(),
                    first: morphisms[prev.0].name.clone(),
                    second: c.h.clone(),
                });
            }
        }
    }
    let id_set = identities.clone();
    let is_id = move |f: Mor| id_set.contains(&f);
    let infer = raw.infer_composites;
    let ms = morphisms.clone();
    FinCategory::from_parts(raw.name.clone(), objects, morphisms, identities, move |g, f| {
        if let Some(&h) = given.get(&(g, f)) {
            return Some(h);
        }
        if is_id(f) {
            return Some(g);
        }
        if is_id(g) {
            return Some(f);
        }
        if !infer {
            return None;
        }
        let (a, c) = (ms[f.0].source, ms[g.0].target);
        let mut cands = ms
            .iter()
            .enumerate()
            .filter(|(_, d)| d.source == a && d.target == c)
            .map(|(i, _)| Mor(i));
        let first = cands.next()?;
        if cands.next().is_some() {
            return None;
        }
        Some(first)
    })
}
