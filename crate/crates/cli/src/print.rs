//! Printing a workspace back to the DSL. Everything is written out
//! explicitly (full composition tables, every action, every slice), so
//! re-parsing the output gives back equal values.

use std::fmt::Write;

use toposfactor_core::fincat::{identity_name, FinCategory, FinFunctor};
use toposfactor_core::presheaf::FinPresheaf;
use toposfactor_core::proetale::CofilteredDiagram;
use toposfactor_core::sites::GrothendieckTopology;

use crate::syntax::is_bare_name;
use crate::workspace::{NatDef, Workspace};

pub fn quote(name: &str) -> String {
    if is_bare_name(name) {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

fn join<'a>(names: impl IntoIterator<Item = &'a str>) -> String {
    names.into_iter().map(quote).collect::<Vec<_>>().join(", ")
}

pub fn print_category(c: &FinCategory) -> String {
    let mut s = format!("category {} {{\n", quote(c.name()));
    if c.n_objects() > 0 {
        writeln!(s, "  objects: {}", join(c.object_names().iter().map(String::as_str))).unwrap();
    }
    for o in c.objects() {
        let id = c.mor_name(c.id(o));
        if id != identity_name(c.obj_name(o)) {
            writeln!(s, "  identity {} = {}", quote(c.obj_name(o)), quote(id)).unwrap();
        }
    }
    let proper: Vec<_> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
    if !proper.is_empty() {
        let arrows: Vec<String> = proper
            .iter()
            .map(|&f| {
                format!(
                    "{} : {} -> {}",
                    quote(c.mor_name(f)),
                    quote(c.obj_name(c.source(f))),
                    quote(c.obj_name(c.target(f)))
                )
            })
            .collect();
        writeln!(s, "  arrows: {}", arrows.join(", ")).unwrap();
    }
    let mut comps = Vec::new();
    for &f in &proper {
        for &g in c.outgoing(c.target(f)) {
            if !c.is_identity(g) {
                let h = c.compose(g, f);
                comps.push(format!("{} . {} = {}", quote(c.mor_name(g)), quote(c.mor_name(f)), quote(c.mor_name(h))));
            }
        }
    }
    for chunk in comps.chunks(4) {
        writeln!(s, "  compose: {}", chunk.join(", ")).unwrap();
    }
    s.push_str("}\n");
    s
}

fn maps(f: &FinFunctor) -> Vec<String> {
    let (c, d) = (f.domain(), f.codomain());
    let mut out: Vec<String> = c
        .objects()
        .map(|a| format!("{} |-> {}", quote(c.obj_name(a)), quote(d.obj_name(f.ob(a)))))
        .collect();
    out.extend(
        c.morphisms()
            .filter(|&m| !c.is_identity(m))
            .map(|m| format!("{} |-> {}", quote(c.mor_name(m)), quote(d.mor_name(f.mor(m))))),
    );
    out
}

fn block(head: String, lines: &[String]) -> String {
    let mut s = head;
    s.push_str(" {\n");
    for l in lines {
        writeln!(s, "  {l}").unwrap();
    }
    s.push_str("}\n");
    s
}

pub fn print_functor(name: &str, f: &FinFunctor) -> String {
    block(
        format!(
            "functor {} : {} -> {}",
            quote(name),
            quote(f.domain().name()),
            quote(f.codomain().name())
        ),
        &maps(f),
    )
}

pub fn print_nat(name: &str, n: &NatDef) -> String {
    let (c, d) = (n.transf.source().domain(), n.transf.source().codomain());
    let lines: Vec<String> = c
        .objects()
        .map(|a| format!("{} |-> {}", quote(c.obj_name(a)), quote(d.mor_name(n.transf.component(a)))))
        .collect();
    block(format!("nat {} : {} => {}", quote(name), quote(&n.source), quote(&n.target)), &lines)
}

pub fn print_presheaf(name: &str, p: &FinPresheaf) -> String {
    let c = p.base();
    let mut lines: Vec<String> = c
        .objects()
        .map(|o| {
            format!(
                "{} = {{{}}}",
                quote(c.obj_name(o)),
                join(p.labels(o).iter().map(String::as_str))
            )
        })
        .collect();
    for g in c.morphisms().filter(|&g| !c.is_identity(g)) {
        let (src, tgt) = (c.source(g), c.target(g));
        let pairs: Vec<String> = (0..p.size(tgt))
            .map(|x| format!("{} |-> {}", quote(p.label(tgt, x)), quote(p.label(src, p.act(g, x)))))
            .collect();
        lines.push(format!("{} : {{{}}}", quote(c.mor_name(g)), pairs.join(", ")));
    }
    block(format!("presheaf {} on {}", quote(name), quote(c.name())), &lines)
}

pub fn print_topology(name: &str, j: &GrothendieckTopology) -> String {
    let c = j.base();
    let mut lines = Vec::new();
    for o in c.objects() {
        for s in j.covers(o).iter().filter(|s| !s.is_maximal(c)) {
            lines.push(format!(
                "cover {} = [{}]",
                quote(c.obj_name(o)),
                join(s.arrows.iter().map(|&h| c.mor_name(h)))
            ));
        }
    }
    block(format!("topology {} on {}", quote(name), quote(c.name())), &lines)
}

pub fn print_diagram(name: &str, d: &CofilteredDiagram) -> String {
    let (i_cat, c) = (d.index(), d.target());
    let mut lines = maps(d.functor());
    for i in i_cat.objects() {
        lines.push(format!(
            "slice {} = [{}]",
            quote(i_cat.obj_name(i)),
            join(d.slice(i).iter().map(|&h| c.mor_name(h)))
        ));
    }
    block(
        format!("diagram {} : {} -> {}", quote(name), quote(i_cat.name()), quote(c.name())),
        &lines,
    )
}

/// The whole workspace, kinds in a fixed order and names sorted.
pub fn print_workspace(ws: &Workspace) -> String {
    let mut parts = Vec::new();
    parts.extend(ws.categories.values().map(|e| print_category(&e.value)));
    parts.extend(ws.functors.iter().map(|(n, e)| print_functor(n, &e.value)));
    parts.extend(ws.nats.iter().map(|(n, e)| print_nat(n, &e.value)));
    parts.extend(ws.presheaves.iter().map(|(n, e)| print_presheaf(n, &e.value)));
    parts.extend(ws.topologies.iter().map(|(n, e)| print_topology(n, &e.value.topology)));
    parts.extend(ws.diagrams.iter().map(|(n, e)| print_diagram(n, &e.value)));
    parts.join("\n")
}
