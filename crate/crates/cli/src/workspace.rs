//! Resolution of parsed declarations into checked values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;
use toposfactor_core::fincat::{
    fixtures, validate_functor, FinCategory, FinFunctor, Mor, NatTransf, Ob, RawCategory, RawFunctor,
};
use toposfactor_core::presheaf::{validate_presheaf, FinPresheaf, RawPresheaf};
use toposfactor_core::proetale::CofilteredDiagram;
use toposfactor_core::sites::GrothendieckTopology;

use crate::syntax::{self, Decl, Ident, Mapping, Pos, SyntaxError};

/// Where a definition came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub file: String,
    pub line: usize,
    pub col: usize,
}

impl Provenance {
    fn at(file: &str, pos: Pos) -> Self {
        Provenance {
            file: file.to_string(),
            line: pos.line,
            col: pos.col,
        }
    }

    fn builtin() -> Self {
        Provenance {
            file: "<builtin>".into(),
            line: 0,
            col: 0,
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{at}: syntax error: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        at: Provenance,
        found: String,
        expected: Vec<String>,
    },
    #[error("{at}: unresolved {kind} `{name}`")]
    UnresolvedName { at: Provenance, kind: String, name: String },
    #[error("{at}: duplicate {kind} `{name}` (first defined at {previous})")]
    DuplicateName {
        at: Provenance,
        kind: String,
        name: String,
        previous: Provenance,
    },
    #[error("{at}: invalid {kind} `{name}`: {reason}")]
    Invalid {
        at: Provenance,
        kind: String,
        name: String,
        reason: String,
    },
    #[error("{file}: {reason}")]
    Io { file: String, reason: String },
}

impl DslError {
    fn syntax(file: &str, e: SyntaxError) -> Self {
        DslError::Syntax {
            at: Provenance::at(file, e.pos),
            found: e.found,
            expected: e.expected,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry<T> {
    pub value: T,
    pub provenance: Provenance,
}

/// A natural transformation together with the names of its functors.
#[derive(Clone, Debug)]
pub struct NatDef {
    pub source: String,
    pub target: String,
    pub transf: NatTransf,
}

#[derive(Clone, Debug)]
pub struct TopologyDef {
    pub name: String,
    pub topology: GrothendieckTopology,
}

/// Named values of every kind, each with its provenance. Names are unique
/// per kind; every reference has been resolved.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub categories: BTreeMap<String, Entry<Arc<FinCategory>>>,
    pub functors: BTreeMap<String, Entry<FinFunctor>>,
    pub nats: BTreeMap<String, Entry<NatDef>>,
    pub presheaves: BTreeMap<String, Entry<Arc<FinPresheaf>>>,
    pub topologies: BTreeMap<String, Entry<TopologyDef>>,
    pub diagrams: BTreeMap<String, Entry<Arc<CofilteredDiagram>>>,
}

/// One source text and the name it is reported under.
pub struct Source<'a> {
    pub file: &'a str,
    pub text: &'a str,
}

impl Workspace {
    pub fn load(paths: &[impl AsRef<Path>]) -> Result<Workspace, DslError> {
        let texts = paths
            .iter()
            .map(|p| {
                let p = p.as_ref();
                let file = p.display().to_string();
                std::fs::read_to_string(p)
                    .map(|t| (file.clone(), t))
                    .map_err(|e| DslError::Io { file, reason: e.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sources: Vec<Source> = texts.iter().map(|(f, t)| Source { file: f, text: t }).collect();
        Workspace::parse(&sources)
    }

    pub fn parse_str(file: &str, text: &str) -> Result<Workspace, DslError> {
        Workspace::parse(&[Source { file, text }])
    }

    pub fn parse(sources: &[Source]) -> Result<Workspace, DslError> {
        let mut decls = Vec::new();
        for s in sources {
            for d in syntax::parse(s.text).map_err(|e| DslError::syntax(s.file, e))? {
                decls.push((s.file.to_string(), d));
            }
        }
        let mut seen: HashMap<(&str, &str), Provenance> = HashMap::new();
        for (file, d) in &decls {
            let at = Provenance::at(file, d.name().pos);
            if let Some(previous) = seen.insert((d.kind(), d.name().name.as_str()), at.clone()) {
                return Err(DslError::DuplicateName {
                    at,
                    kind: d.kind().into(),
                    name: d.name().name.clone(),
                    previous,
                });
            }
        }
        let mut ws = Workspace::default();
        // categories first, then everything that refers to them
        for (file, d) in &decls {
            if let Decl::Category { .. } = d {
                let c = resolve_category(file, d)?;
                ws.categories.insert(
                    c.name().to_string(),
                    Entry {
                        value: Arc::new(c),
                        provenance: Provenance::at(file, d.name().pos),
                    },
                );
            }
        }
        for (file, d) in &decls {
            if let Decl::Functor { name, domain, codomain, maps } = d {
                let f = ws.resolve_map(file, name, domain, codomain, maps, "functor")?;
                ws.functors.insert(name.name.clone(), entry(f, file, name));
            }
        }
        for (file, d) in &decls {
            if let Decl::Diagram { name, index, target, maps, slices } = d {
                let f = ws.resolve_map(file, name, index, target, maps, "diagram")?;
                let dg = resolve_diagram(file, name, f, slices)?;
                ws.diagrams.insert(name.name.clone(), entry(Arc::new(dg), file, name));
            }
        }
        for (file, d) in &decls {
            match d {
                Decl::Nat { name, source, target, components } => {
                    let n = ws.resolve_nat(file, name, source, target, components)?;
                    ws.nats.insert(name.name.clone(), entry(n, file, name));
                }
                Decl::Presheaf { name, base, values, actions } => {
                    let c = ws.category(file, base)?;
                    let p = resolve_presheaf(file, name, c, values, actions)?;
                    ws.presheaves.insert(name.name.clone(), entry(Arc::new(p), file, name));
                }
                Decl::Topology { name, base, covers } => {
                    let c = ws.category(file, base)?;
                    let t = resolve_topology(file, name, c, covers)?;
                    ws.topologies.insert(name.name.clone(), entry(t, file, name));
                }
                _ => {}
            }
        }
        Ok(ws)
    }

    /// A declared category, or a builtin one (`One`, `Arrow`, `ParPair`,
    /// `Span`, `Sq`, `Idem`, `Empty`, `ChainN`) added on first use.
    fn category(&mut self, file: &str, id: &Ident) -> Result<Arc<FinCategory>, DslError> {
        if let Some(e) = self.categories.get(&id.name) {
            return Ok(e.value.clone());
        }
        let c = fixtures::by_name(&id.name).ok_or_else(|| unresolved(file, id, "category"))?;
        self.categories.insert(
            id.name.clone(),
            Entry {
                value: c.clone(),
                provenance: Provenance::builtin(),
            },
        );
        Ok(c)
    }

    fn resolve_map(
        &mut self,
        file: &str,
        name: &Ident,
        domain: &Ident,
        codomain: &Ident,
        maps: &[Mapping],
        kind: &str,
    ) -> Result<FinFunctor, DslError> {
        let (c, d) = (self.category(file, domain)?, self.category(file, codomain)?);
        let mut raw = RawFunctor::new(&name.name);
        for m in maps {
            if c.find_object(&m.from.name).is_some() {
                object(file, &d, &m.to)?;
                raw = raw.object(&m.from.name, &m.to.name);
            } else if c.find_morphism(&m.from.name).is_some() {
                morphism(file, &d, &m.to)?;
                raw = raw.arrow(&m.from.name, &m.to.name);
            } else {
                return Err(unresolved(file, &m.from, &format!("object or morphism of `{}`", c.name())));
            }
        }
        validate_functor(&raw, c, d).map_err(|e| invalid(file, name, kind, e))
    }

    fn resolve_nat(
        &self,
        file: &str,
        name: &Ident,
        source: &Ident,
        target: &Ident,
        components: &[Mapping],
    ) -> Result<NatDef, DslError> {
        let functor = |id: &Ident| {
            self.functors
                .get(&id.name)
                .map(|e| e.value.clone())
                .ok_or_else(|| unresolved(file, id, "functor"))
        };
        let (f, g) = (functor(source)?, functor(target)?);
        if f.domain() != g.domain() || f.codomain() != g.codomain() {
            return Err(invalid(file, name, "nat", "functors have different domains or codomains"));
        }
        let (c, d) = (f.domain().clone(), f.codomain().clone());
        let mut comps: Vec<Option<Mor>> = vec![None; c.n_objects()];
        for m in components {
            let a = object(file, &c, &m.from)?;
            let h = morphism(file, &d, &m.to)?;
            if comps[a.0].replace(h).is_some() {
                return Err(invalid(file, name, "nat", format!("component at `{}` given twice", m.from.name)));
            }
        }
        // identities may be left out where the functors agree
        let comps = c
            .objects()
            .map(|a| match comps[a.0] {
                Some(h) => Ok(h),
                None if f.ob(a) == g.ob(a) => Ok(d.id(f.ob(a))),
                None => Err(invalid(file, name, "nat", format!("missing component at `{}`", c.obj_name(a)))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let transf = NatTransf::new(f, g, comps).map_err(|e| invalid(file, name, "nat", e))?;
        Ok(NatDef {
            source: source.name.clone(),
            target: target.name.clone(),
            transf,
        })
    }
}

fn entry<T>(value: T, file: &str, name: &Ident) -> Entry<T> {
    Entry {
        value,
        provenance: Provenance::at(file, name.pos),
    }
}

fn unresolved(file: &str, id: &Ident, kind: &str) -> DslError {
    DslError::UnresolvedName {
        at: Provenance::at(file, id.pos),
        kind: kind.into(),
        name: id.name.clone(),
    }
}

fn invalid(file: &str, name: &Ident, kind: &str, reason: impl fmt::Display) -> DslError {
    DslError::Invalid {
        at: Provenance::at(file, name.pos),
        kind: kind.into(),
        name: name.name.clone(),
        reason: reason.to_string(),
    }
}

fn object(file: &str, c: &FinCategory, id: &Ident) -> Result<Ob, DslError> {
    c.find_object(&id.name)
        .ok_or_else(|| unresolved(file, id, &format!("object of `{}`", c.name())))
}

fn morphism(file: &str, c: &FinCategory, id: &Ident) -> Result<Mor, DslError> {
    c.find_morphism(&id.name)
        .ok_or_else(|| unresolved(file, id, &format!("morphism of `{}`", c.name())))
}

fn resolve_category(file: &str, d: &Decl) -> Result<FinCategory, DslError> {
    let Decl::Category {
        name,
        objects,
        arrows,
        composites,
        identities,
    } = d
    else {
        unreachable!("not a category declaration")
    };
    let mut objs: HashMap<&str, Pos> = HashMap::new();
    for o in objects {
        if let Some(&prev) = objs.get(o.name.as_str()) {
            return Err(duplicate(file, o, "object", prev));
        }
        objs.insert(&o.name, o.pos);
    }
    let check_obj = |id: &Ident| {
        if objs.contains_key(id.name.as_str()) {
            Ok(())
        } else {
            Err(unresolved(file, id, &format!("object of `{}`", name.name)))
        }
    };
    // morphism names, with implicit identities
    let mut mors: HashMap<String, Pos> = HashMap::new();
    let mut id_names: HashMap<&str, &Ident> = HashMap::new();
    for (o, n) in identities {
        check_obj(o)?;
        if id_names.insert(&o.name, n).is_some() {
            return Err(duplicate(file, o, "identity", o.pos));
        }
    }
    for o in objects {
        let (n, pos) = match id_names.get(o.name.as_str()) {
            Some(n) => (n.name.clone(), n.pos),
            None => (toposfactor_core::fincat::identity_name(&o.name), o.pos),
        };
        if let Some(&prev) = mors.get(&n) {
            return Err(duplicate(file, &Ident { name: n, pos }, "morphism", prev));
        }
        mors.insert(n, pos);
    }
    for (f, a, b) in arrows {
        check_obj(a)?;
        check_obj(b)?;
        if let Some(&prev) = mors.get(&f.name) {
            return Err(duplicate(file, f, "morphism", prev));
        }
        mors.insert(f.name.clone(), f.pos);
    }
    for n in mors.keys() {
        if let Some(&pos) = objs.get(n.as_str()) {
            return Err(duplicate(file, &Ident { name: n.clone(), pos: mors[n] }, "name", pos));
        }
    }
    for (g, f, h) in composites {
        for m in [g, f, h] {
            if !mors.contains_key(&m.name) {
                return Err(unresolved(file, m, &format!("morphism of `{}`", name.name)));
            }
        }
    }
    let mut raw = RawCategory::new(&name.name);
    for o in objects {
        raw = raw.object(&o.name);
    }
    for (o, n) in identities {
        raw.identities.push((o.name.clone(), n.name.clone()));
    }
    for (f, a, b) in arrows {
        raw = raw.arrow(&f.name, &a.name, &b.name);
    }
    for (g, f, h) in composites {
        raw = raw.composite(&g.name, &f.name, &h.name);
    }
    raw.validate().map_err(|e| invalid(file, name, "category", e))
}

fn duplicate(file: &str, id: &Ident, kind: &str, previous: Pos) -> DslError {
    DslError::DuplicateName {
        at: Provenance::at(file, id.pos),
        kind: kind.into(),
        name: id.name.clone(),
        previous: Provenance::at(file, previous),
    }
}

fn resolve_presheaf(
    file: &str,
    name: &Ident,
    c: Arc<FinCategory>,
    values: &[(Ident, Vec<Ident>)],
    actions: &[(Ident, Vec<Mapping>)],
) -> Result<FinPresheaf, DslError> {
    let mut raw = RawPresheaf::new(&name.name);
    let mut labels: Vec<Option<&[Ident]>> = vec![None; c.n_objects()];
    for (o, elems) in values {
        let a = object(file, &c, o)?;
        if labels[a.0].is_some() {
            return Err(invalid(file, name, "presheaf", format!("value at `{}` given twice", o.name)));
        }
        let mut seen: HashMap<&str, Pos> = HashMap::new();
        for e in elems {
            if let Some(&prev) = seen.get(e.name.as_str()) {
                return Err(duplicate(file, e, "element", prev));
            }
            seen.insert(&e.name, e.pos);
        }
        labels[a.0] = Some(elems);
        raw.values
            .push((o.name.clone(), elems.iter().map(|e| e.name.clone()).collect()));
    }
    let element = |at: Ob, id: &Ident| {
        let known = labels[at.0].is_some_and(|l| l.iter().any(|e| e.name == id.name));
        if known {
            Ok(())
        } else {
            Err(unresolved(file, id, &format!("element of the value at `{}`", c.obj_name(at))))
        }
    };
    for (f, pairs) in actions {
        let g = morphism(file, &c, f)?;
        for m in pairs {
            element(c.target(g), &m.from)?;
            element(c.source(g), &m.to)?;
        }
        raw.actions.push((
            f.name.clone(),
            pairs.iter().map(|m| (m.from.name.clone(), m.to.name.clone())).collect(),
        ));
    }
    validate_presheaf(&raw, c).map_err(|e| invalid(file, name, "presheaf", e))
}

fn resolve_topology(
    file: &str,
    name: &Ident,
    c: Arc<FinCategory>,
    covers: &[(Ident, Vec<Ident>)],
) -> Result<TopologyDef, DslError> {
    let mut basis = Vec::new();
    for (apex, family) in covers {
        let a = object(file, &c, apex)?;
        let arrows = family
            .iter()
            .map(|f| morphism(file, &c, f))
            .collect::<Result<Vec<_>, _>>()?;
        basis.push((a, arrows));
    }
    let topology = GrothendieckTopology::saturate(c, &basis).map_err(|e| invalid(file, name, "topology", e))?;
    Ok(TopologyDef {
        name: name.name.clone(),
        topology,
    })
}

fn resolve_diagram(
    file: &str,
    name: &Ident,
    f: FinFunctor,
    slices: &[(Ident, Vec<Ident>)],
) -> Result<CofilteredDiagram, DslError> {
    let fail = |e| invalid(file, name, "diagram", e);
    if slices.is_empty() {
        return CofilteredDiagram::with_full_slices(&name.name, f).map_err(fail);
    }
    let (i_cat, c) = (f.domain().clone(), f.codomain().clone());
    let mut given: Vec<Option<Vec<Mor>>> = vec![None; i_cat.n_objects()];
    for (i, arrows) in slices {
        let o = object(file, &i_cat, i)?;
        let arrows = arrows
            .iter()
            .map(|h| morphism(file, &c, h))
            .collect::<Result<Vec<_>, _>>()?;
        if given[o.0].replace(arrows).is_some() {
            return Err(invalid(file, name, "diagram", format!("slice at `{}` given twice", i.name)));
        }
    }
    let slices = i_cat
        .objects()
        .map(|i| {
            given[i.0]
                .take()
                .ok_or_else(|| invalid(file, name, "diagram", format!("no slice at `{}`", i_cat.obj_name(i))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    CofilteredDiagram::new(&name.name, f, slices, &[]).map_err(fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(src: &str) -> DslError {
        Workspace::parse_str("t.cat", src).unwrap_err()
    }

    #[test]
    fn builtins_resolve_on_use() {
        let ws = Workspace::parse_str("t.cat", "category One { objects: x }\nfunctor v : One -> Arrow { x |-> 1 }").unwrap();
        assert_eq!(ws.categories["One"].provenance.line, 1);
        assert_eq!(ws.categories["Arrow"].provenance.file, "<builtin>");
        let v = &ws.functors["v"].value;
        assert_eq!(v.codomain().obj_name(v.ob(Ob(0))), "1");
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = err("category C {\n  objects: a\n  compose: g . = h\n}");
        assert!(e.to_string().starts_with("t.cat:3:16: syntax error"), "{e}");
        let e = err("functor v : One -> Arrow { x |-> 2 }");
        assert!(matches!(&e, DslError::UnresolvedName { at, name, .. } if name == "2" && at.col == 34), "{e}");
        let e = err("functor v : One -> Nope { }");
        assert!(matches!(&e, DslError::UnresolvedName { kind, .. } if kind == "category"));
        let e = err("category A { objects: x }\ncategory A { objects: y }");
        assert!(matches!(&e, DslError::DuplicateName { at, previous, .. } if at.line == 2 && previous.line == 1));
        let e = err("category A { objects: x, x }");
        assert!(matches!(e, DslError::DuplicateName { .. }));
        let e = err("category A { objects: x arrows: id_x : x -> x }");
        assert!(matches!(e, DslError::DuplicateName { .. }));
    }

    #[test]
    fn invalid_values_are_reported_at_their_declaration() {
        let e = err("category A { objects: x arrows: e : x -> x compose: e . e = id_x }\nfunctor f : A -> One { x |-> x }\nfunctor g : One -> A { x |-> x e |-> e }");
        assert!(matches!(&e, DslError::UnresolvedName { name, .. } if name == "e"), "{e}");
        let e = err("presheaf P on Arrow { 0 = {a, b} 1 = {c} }");
        assert!(matches!(&e, DslError::Invalid { kind, .. } if kind == "presheaf"), "{e}");
    }

    #[test]
    fn every_kind_resolves() {
        let src = r#"
            functor u : One -> Arrow { x |-> 0 }
            functor v : One -> Arrow { x |-> 1 }
            nat a : u => v { x |-> f }
            presheaf P on Arrow { 0 = {p, q} 1 = {r} f : { r |-> p } }
            topology J on Sq { cover t = [lt, rt] }
            diagram D : Arrow -> Sq { 0 |-> l 1 |-> t }
            diagram E : Arrow -> Sq { 0 |-> l 1 |-> t slice 0 = [id_l] slice 1 = [id_t, lt] }
        "#;
        let ws = Workspace::parse_str("t.cat", src).unwrap();
        assert_eq!(ws.nats["a"].value.transf.components().len(), 1);
        assert_eq!(ws.presheaves["P"].value.sizes(), vec![2, 1]);
        assert!(!ws.topologies["J"].value.topology.is_trivial());
        assert_eq!(ws.diagrams["D"].value.slice(Ob(1)).len(), 4);
        assert_eq!(ws.diagrams["E"].value.slice(Ob(1)).len(), 2);
    }
}
