//! Deterministic JSON and DOT renderings. JSON objects use sorted keys;
//! lists follow the identifier order of the underlying values.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde_json::{json, Value};
use toposfactor_core::fincat::{FinCategory, FinFunctor, Mor, NatTransf, Ob};
use toposfactor_core::presheaf::{FinPresheaf, GlobalElement, PresheafMap};
use toposfactor_core::sites::{GrothendieckTopology, Sieve};

/// A minimal generating set of non-identity morphisms, found by dropping
/// morphisms (latest first) that the remaining ones still generate.
pub fn generators(c: &FinCategory) -> Vec<Mor> {
    let mut gens: BTreeSet<Mor> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    let candidates: Vec<Mor> = gens.iter().rev().copied().collect();
    for m in candidates {
        gens.remove(&m);
        if !generated(c, &gens).contains(&m) {
            gens.insert(m);
        }
    }
    gens.into_iter().collect()
}

fn generated(c: &FinCategory, gens: &BTreeSet<Mor>) -> BTreeSet<Mor> {
    let mut reach: BTreeSet<Mor> = c.objects().map(|o| c.id(o)).collect();
    let mut frontier: Vec<Mor> = reach.iter().copied().collect();
    while let Some(f) = frontier.pop() {
        for &g in c.outgoing(c.target(f)) {
            if gens.contains(&g) {
                let h = c.compose(g, f);
                if reach.insert(h) {
                    frontier.push(h);
                }
            }
        }
    }
    reach
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT with objects as nodes and generating morphisms as edges. `style`
/// may add attributes to an edge, e.g. for a marked class.
pub fn category_dot(c: &FinCategory, style: &dyn Fn(Mor) -> Option<String>) -> String {
    let mut s = format!("digraph {} {{\n", dot_id(c.name()));
    let mut objects: Vec<Ob> = c.objects().collect();
    objects.sort_by(|&a, &b| c.obj_name(a).cmp(c.obj_name(b)));
    for o in objects {
        writeln!(s, "  {};", dot_id(c.obj_name(o))).unwrap();
    }
    let mut edges = generators(c);
    edges.sort_by(|&f, &g| c.mor_name(f).cmp(c.mor_name(g)));
    for f in edges {
        let extra = style(f).map(|a| format!(", {a}")).unwrap_or_default();
        writeln!(
            s,
            "  {} -> {} [label={}{}];",
            dot_id(c.obj_name(c.source(f))),
            dot_id(c.obj_name(c.target(f))),
            dot_id(c.mor_name(f)),
            extra
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn plain_dot(c: &FinCategory) -> String {
    category_dot(c, &|_| None)
}

/// The domain of `f`, each node labelled with its image.
pub fn functor_dot(f: &FinFunctor) -> String {
    let (c, d) = (f.domain(), f.codomain());
    let mut s = format!("digraph {} {{\n", dot_id(&format!("{}: {} -> {}", f.name(), c.name(), d.name())));
    let mut objects: Vec<Ob> = c.objects().collect();
    objects.sort_by(|&a, &b| c.obj_name(a).cmp(c.obj_name(b)));
    for o in objects {
        writeln!(
            s,
            "  {} [label={}];",
            dot_id(c.obj_name(o)),
            dot_id(&format!("{} |-> {}", c.obj_name(o), d.obj_name(f.ob(o))))
        )
        .unwrap();
    }
    let mut edges = generators(c);
    edges.sort_by(|&a, &b| c.mor_name(a).cmp(c.mor_name(b)));
    for m in edges {
        writeln!(
            s,
            "  {} -> {} [label={}];",
            dot_id(c.obj_name(c.source(m))),
            dot_id(c.obj_name(c.target(m))),
            dot_id(&format!("{} |-> {}", c.mor_name(m), d.mor_name(f.mor(m))))
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn category_json(c: &FinCategory) -> Value {
    let morphisms: Vec<Value> = c
        .morphisms()
        .map(|f| {
            json!({
                "name": c.mor_name(f),
                "source": c.obj_name(c.source(f)),
                "target": c.obj_name(c.target(f)),
                "identity": c.is_identity(f),
            })
        })
        .collect();
    let mut composites = Vec::new();
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        for &g in c.outgoing(c.target(f)) {
            if !c.is_identity(g) {
                composites.push(json!([c.mor_name(g), c.mor_name(f), c.mor_name(c.compose(g, f))]));
            }
        }
    }
    json!({
        "name": c.name(),
        "objects": c.object_names(),
        "morphisms": morphisms,
        "composites": composites,
    })
}

pub fn functor_json(f: &FinFunctor) -> Value {
    let (c, d) = (f.domain(), f.codomain());
    let objects: serde_json::Map<String, Value> = c
        .objects()
        .map(|a| (c.obj_name(a).to_string(), json!(d.obj_name(f.ob(a)))))
        .collect();
    let morphisms: serde_json::Map<String, Value> = c
        .morphisms()
        .filter(|&m| !c.is_identity(m))
        .map(|m| (c.mor_name(m).to_string(), json!(d.mor_name(f.mor(m)))))
        .collect();
    json!({
        "name": f.name(),
        "domain": c.name(),
        "codomain": d.name(),
        "objects": objects,
        "morphisms": morphisms,
    })
}

pub fn nat_json(n: &NatTransf) -> Value {
    let (c, d) = (n.source().domain(), n.source().codomain());
    let comps: serde_json::Map<String, Value> = c
        .objects()
        .map(|a| (c.obj_name(a).to_string(), json!(d.mor_name(n.component(a)))))
        .collect();
    json!({ "source": n.source().name(), "target": n.target().name(), "components": comps })
}

pub fn presheaf_json(p: &FinPresheaf) -> Value {
    let c = p.base();
    let values: serde_json::Map<String, Value> = c
        .objects()
        .map(|o| (c.obj_name(o).to_string(), json!(p.labels(o))))
        .collect();
    let actions: serde_json::Map<String, Value> = c
        .morphisms()
        .filter(|&g| !c.is_identity(g))
        .map(|g| {
            let (src, tgt) = (c.source(g), c.target(g));
            let pairs: serde_json::Map<String, Value> = (0..p.size(tgt))
                .map(|x| (p.label(tgt, x).to_string(), json!(p.label(src, p.act(g, x)))))
                .collect();
            (c.mor_name(g).to_string(), Value::Object(pairs))
        })
        .collect();
    json!({ "name": p.name(), "base": c.name(), "values": values, "actions": actions })
}

pub fn element_json(p: &FinPresheaf, a: &GlobalElement) -> Value {
    let c = p.base();
    Value::Object(
        c.objects()
            .map(|o| (c.obj_name(o).to_string(), json!(p.label(o, a.family[o.0]))))
            .collect(),
    )
}

/// A family of element indices aligned with the objects of the base.
pub fn family_json(p: &FinPresheaf, family: &[usize]) -> Value {
    element_json(p, &GlobalElement { family: family.to_vec() })
}

pub fn presheaf_map_json(m: &PresheafMap) -> Value {
    let (x, y) = (m.source(), m.target());
    let c = x.base();
    let comps: serde_json::Map<String, Value> = c
        .objects()
        .map(|o| {
            let pairs: serde_json::Map<String, Value> = (0..x.size(o))
                .map(|e| (x.label(o, e).to_string(), json!(y.label(o, m.apply(o, e)))))
                .collect();
            (c.obj_name(o).to_string(), Value::Object(pairs))
        })
        .collect();
    json!({ "source": x.name(), "target": y.name(), "components": comps })
}

pub fn sieve_json(c: &FinCategory, s: &Sieve) -> Value {
    json!({
        "apex": c.obj_name(s.apex),
        "arrows": s.arrows.iter().map(|&h| c.mor_name(h)).collect::<Vec<_>>(),
    })
}

pub fn topology_json(j: &GrothendieckTopology) -> Value {
    let c = j.base();
    let covers: serde_json::Map<String, Value> = c
        .objects()
        .map(|o| {
            let sieves: Vec<Value> = j.covers(o).iter().map(|s| sieve_json(c, s)["arrows"].clone()).collect();
            (c.obj_name(o).to_string(), Value::Array(sieves))
        })
        .collect();
    json!({ "base": c.name(), "covers": covers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use toposfactor_core::fincat::fixtures;

    #[test]
    fn arrow_has_two_nodes_and_one_edge() {
        let dot = plain_dot(&fixtures::arrow());
        assert_eq!(dot, "digraph \"Arrow\" {\n  \"0\";\n  \"1\";\n  \"0\" -> \"1\" [label=\"f\"];\n}\n");
    }

    #[test]
    fn generators_skip_composites_but_keep_idempotents() {
        let sq = fixtures::sq();
        let names: Vec<&str> = generators(&sq).iter().map(|&f| sq.mor_name(f)).collect();
        assert_eq!(names, ["bl", "br", "lt", "rt"]);
        let idem = fixtures::idem();
        assert_eq!(generators(&idem).len(), 1);
        assert_eq!(generators(&fixtures::chain(4)).len(), 3);
    }

    #[test]
    fn json_is_stable() {
        let a = category_json(&fixtures::sq()).to_string();
        let b = category_json(&fixtures::sq()).to_string();
        assert_eq!(a, b);
        assert!(a.starts_with("{\"composites\":"));
    }
}
