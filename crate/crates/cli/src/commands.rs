//! Command dispatch. Every command returns a [`Report`]; an error means the
//! command could not run at all.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use toposfactor_core::constructions::{
    category_of_elements, check_cofiltered, check_discrete_fibration, check_discrete_opfibration, check_final,
    check_initial, comma, pi0, CofilteredFailure, FinalityFailure, LiftFailure,
};
use toposfactor_core::factorization::{
    check_terminally_connected, comprehensive_factorize, eta_orthogonal_check, eta_test_family,
    lift_global_element, transport_elements, FactorizationError, OrthogonalityFailure,
};
use toposfactor_core::fincat::{fixtures, FinCategory, FinFunctor, Mor};
use toposfactor_core::kan::{components_presheaf, EssentialMorphism};
use toposfactor_core::presheaf::FinPresheaf;
use toposfactor_core::proetale::{
    build_oplax_colimit, canonical_reindexing_initial, check_ore, fibers_generate, localize,
    pro_adjoint_faithful_check, pseudocolim_global_elements, CofilteredDiagram, OreFailure,
};
use toposfactor_core::sites::{
    check_j_cofinal, check_sheaf, comorphism_tc, is_local_site, is_sheaf, is_subcanonical, sheafify,
    tc_by_local_site, GrothendieckTopology, JCofinalityFailure, SiteMorphism, SiteRole, TcVerdict,
};
use toposfactor_core::universe::{random_category, universe, Bounds};

use crate::export::{
    category_json, category_dot, element_json, family_json, functor_dot, functor_json, nat_json, plain_dot,
    presheaf_json, presheaf_map_json, sieve_json, topology_json,
};
use crate::print::{print_category, print_workspace};
use crate::workspace::{DslError, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Emit {
    #[default]
    Json,
    Dot,
    Dsl,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub emit: Emit,
    pub seed: u64,
    pub checks: Vec<String>,
    pub timing: bool,
}

/// Command echo, verdict or constructed value, and the certificate behind a
/// negative verdict. Renderings other than JSON travel alongside.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub verdict: Option<bool>,
    pub value: Value,
    pub certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
    #[serde(skip)]
    pub dot: Option<String>,
    #[serde(skip)]
    pub dsl: Option<String>,
}

impl Report {
    fn new(command: &[String], value: Value) -> Self {
        Report {
            command: command.to_vec(),
            verdict: None,
            value,
            certificate: None,
            timing_ms: None,
            dot: None,
            dsl: None,
        }
    }

    fn verdict<E>(mut self, r: Result<(), E>, cert: impl FnOnce(E) -> Value) -> Self {
        match r {
            Ok(()) => self.verdict = Some(true),
            Err(e) => {
                self.verdict = Some(false);
                self.certificate = Some(cert(e));
            }
        }
        self
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The requested rendering, if this report has one.
    pub fn render(&self, emit: Emit) -> Result<String, CliError> {
        match emit {
            Emit::Json => Ok(self.to_json()),
            Emit::Dot => self.dot.clone().ok_or_else(|| CliError::NoRendering("dot", self.command.join(" "))),
            Emit::Dsl => self.dsl.clone().ok_or_else(|| CliError::NoRendering("dsl", self.command.join(" "))),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("no {kind} named `{name}`")]
    NotFound { kind: &'static str, name: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no {0} rendering for `{1}`")]
    NoRendering(&'static str, String),
    #[error("{0}")]
    Dsl(#[from] DslError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2 for input that does not parse or resolve, 1 for everything else
    /// that prevents a verdict.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Dsl(_) => 2,
            _ => 1,
        }
    }
}

type CResult<T> = Result<T, CliError>;

fn usage(s: &str) -> CliError {
    CliError::Usage(s.to_string())
}

fn pre(s: impl ToString) -> CliError {
    CliError::Precondition(s.to_string())
}

struct Ctx<'a> {
    ws: &'a Workspace,
    opts: &'a Options,
}

impl Ctx<'_> {
    fn category(&self, name: &str) -> CResult<Arc<FinCategory>> {
        self.ws
            .categories
            .get(name)
            .map(|e| e.value.clone())
            .or_else(|| fixtures::by_name(name))
            .ok_or_else(|| CliError::NotFound { kind: "category", name: name.into() })
    }

    fn functor(&self, name: &str) -> CResult<FinFunctor> {
        self.ws
            .functors
            .get(name)
            .map(|e| e.value.clone())
            .ok_or_else(|| CliError::NotFound { kind: "functor", name: name.into() })
    }

    fn presheaf(&self, name: &str) -> CResult<Arc<FinPresheaf>> {
        self.ws
            .presheaves
            .get(name)
            .map(|e| e.value.clone())
            .ok_or_else(|| CliError::NotFound { kind: "presheaf", name: name.into() })
    }

    fn topology(&self, name: &str) -> CResult<GrothendieckTopology> {
        self.ws
            .topologies
            .get(name)
            .map(|e| e.value.topology.clone())
            .ok_or_else(|| CliError::NotFound { kind: "topology", name: name.into() })
    }

    fn diagram(&self, name: &str) -> CResult<Arc<CofilteredDiagram>> {
        self.ws
            .diagrams
            .get(name)
            .map(|e| e.value.clone())
            .ok_or_else(|| CliError::NotFound { kind: "diagram", name: name.into() })
    }
}

fn finality_cert(d: &FinCategory, e: FinalityFailure) -> Value {
    json!({ "object": d.obj_name(e.object), "components": e.components })
}

fn lift_cert(u: &FinFunctor, e: LiftFailure) -> Value {
    json!({
        "object": u.domain().obj_name(e.object),
        "morphism": u.codomain().mor_name(e.morphism),
        "lifts": e.lifts,
    })
}

fn cofiltered_cert(c: &FinCategory, e: CofilteredFailure) -> Value {
    match e {
        CofilteredFailure::Empty => json!({ "empty": true }),
        CofilteredFailure::NoSpan(a, b) => json!({ "no_span": [c.obj_name(a), c.obj_name(b)] }),
        CofilteredFailure::NoEqualizer(f, g) => json!({ "no_equalizer": [c.mor_name(f), c.mor_name(g)] }),
    }
}

fn tc_verdict(v: TcVerdict) -> Option<bool> {
    match v {
        TcVerdict::TerminallyConnected => Some(true),
        TcVerdict::NotTerminallyConnected => Some(false),
        TcVerdict::Inapplicable => None,
    }
}

fn same_base(j: &GrothendieckTopology, c: &Arc<FinCategory>, what: &str) -> CResult<()> {
    if j.base() == c {
        Ok(())
    } else {
        Err(pre(format!("topology lives on `{}`, not on the {what} `{}`", j.base().name(), c.name())))
    }
}

/// Runs one command against a parsed workspace.
pub fn run(ws: &Workspace, args: &[String], opts: &Options) -> CResult<Report> {
    let start = std::time::Instant::now();
    let ctx = Ctx { ws, opts };
    let words: Vec<&str> = args.iter().map(String::as_str).collect();
    let mut report = match words.as_slice() {
        [] => return Err(usage("toposfactor <command> [names] [--emit json|dot|dsl] [--out path] [--seed N]")),
        ["list"] => list(&ctx, args),
        ["print"] => {
            let text = print_workspace(ws);
            let mut r = Report::new(args, json!({ "dsl": text }));
            r.dsl = Some(text);
            Ok(r)
        }
        ["show", name] => show(&ctx, args, name),
        ["check", what, rest @ ..] => check(&ctx, args, what, rest),
        ["factor", "comprehensive", u] => factor(&ctx, args, u),
        ["factor", ..] => Err(usage("factor comprehensive <functor>")),
        ["components", u] => {
            let u = ctx.functor(u)?;
            let pi = components_presheaf(&u);
            Ok(Report::new(args, presheaf_json(&pi)))
        }
        ["pi0", c] => {
            let c = ctx.category(c)?;
            let comps = pi0(&c);
            let labels: BTreeMap<&str, usize> = c.objects().map(|o| (c.obj_name(o), comps.of(o))).collect();
            Ok(Report::new(args, json!({ "count": comps.count, "component": labels })))
        }
        ["comma", f, g] => {
            let (f, g) = (ctx.functor(f)?, ctx.functor(g)?);
            if f.codomain() != g.codomain() {
                return Err(pre("functors have different codomains"));
            }
            let cc = comma(&f, &g);
            Ok(Report::new(args, category_json(&cc.category)).with_dot(plain_dot(&cc.category)))
        }
        ["elements", p] => {
            let p = ctx.presheaf(p)?;
            let el = category_of_elements(&p);
            Ok(Report::new(args, category_json(el.category())).with_dot(plain_dot(el.category())))
        }
        [kan @ ("lan" | "ran"), u, p] => kan_ext(&ctx, args, kan, u, p),
        ["lift", u, e] => lift(&ctx, args, u, e),
        ["transport", a, e] => transport(&ctx, args, a, e),
        ["sheafify", p, j] => {
            let (p, j) = (ctx.presheaf(p)?, ctx.topology(j)?);
            same_base(&j, p.base(), "base of the presheaf")?;
            let sh = sheafify(&p, &j);
            let mut r = Report::new(
                args,
                json!({ "sheaf": presheaf_json(&sh.sheaf), "unit": presheaf_map_json(&sh.unit) }),
            );
            r.verdict = Some(is_sheaf(&p, &j));
            Ok(r)
        }
        ["proetale", "build", names @ ..] => proetale(&ctx, args, names),
        ["proetale", ..] => Err(usage("proetale build <diagram>... [--check ore,reindexing,faithful,fibers,globals]")),
        ["random", "category", n] => {
            let n: usize = n.parse().map_err(|_| usage("random category <objects>"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let c = random_category(&mut rng, n, 2, &format!("R{}_{}", n, opts.seed));
            let text = print_category(&c);
            let mut r = Report::new(args, category_json(&c)).with_dot(plain_dot(&c));
            r.dsl = Some(text);
            Ok(r)
        }
        ["sweep"] => Ok(sweep(args)),
        [cmd, ..] => Err(CliError::UnknownCommand(cmd.to_string())),
    }?;
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn list(ctx: &Ctx, args: &[String]) -> CResult<Report> {
    fn names<T>(m: &BTreeMap<String, crate::workspace::Entry<T>>) -> Value {
        Value::Object(
            m.iter()
                .map(|(n, e)| (n.clone(), json!(e.provenance.to_string())))
                .collect(),
        )
    }
    let ws = ctx.ws;
    Ok(Report::new(
        args,
        json!({
            "categories": names(&ws.categories),
            "functors": names(&ws.functors),
            "nats": names(&ws.nats),
            "presheaves": names(&ws.presheaves),
            "topologies": names(&ws.topologies),
            "diagrams": names(&ws.diagrams),
        }),
    ))
}

fn show(ctx: &Ctx, args: &[String], name: &str) -> CResult<Report> {
    let ws = ctx.ws;
    let mut found = Vec::new();
    if let Ok(c) = ctx.category(name) {
        found.push(Report::new(args, category_json(&c)).with_dot(plain_dot(&c)));
    }
    if let Some(e) = ws.functors.get(name) {
        found.push(Report::new(args, functor_json(&e.value)).with_dot(functor_dot(&e.value)));
    }
    if let Some(e) = ws.nats.get(name) {
        found.push(Report::new(args, nat_json(&e.value.transf)));
    }
    if let Some(e) = ws.presheaves.get(name) {
        found.push(Report::new(args, presheaf_json(&e.value)));
    }
    if let Some(e) = ws.topologies.get(name) {
        found.push(Report::new(args, topology_json(&e.value.topology)));
    }
    if let Some(e) = ws.diagrams.get(name) {
        let d = &e.value;
        let slices: BTreeMap<&str, Vec<&str>> = d
            .index()
            .objects()
            .map(|i| (d.index().obj_name(i), d.slice(i).iter().map(|&h| d.target().mor_name(h)).collect()))
            .collect();
        found.push(
            Report::new(args, json!({ "functor": functor_json(d.functor()), "slices": slices }))
                .with_dot(functor_dot(d.functor())),
        );
    }
    match found.len() {
        0 => Err(CliError::NotFound { kind: "value", name: name.into() }),
        1 => Ok(found.pop().unwrap()),
        _ => Err(pre(format!("`{name}` names values of several kinds"))),
    }
}

fn check(ctx: &Ctx, args: &[String], what: &str, rest: &[&str]) -> CResult<Report> {
    match (what, rest) {
        ("final" | "initial", [u]) => {
            let u = ctx.functor(u)?;
            let (r, d) = if what == "final" { (check_final(&u), u.codomain().clone()) } else { (check_initial(&u), u.codomain().clone()) };
            Ok(Report::new(args, json!({ "functor": u.name() }))
                .verdict(r, |e| finality_cert(&d, e))
                .with_dot(functor_dot(&u)))
        }
        ("dfib" | "dopfib", [u]) => {
            let u = ctx.functor(u)?;
            let r = if what == "dfib" { check_discrete_fibration(&u) } else { check_discrete_opfibration(&u) };
            Ok(Report::new(args, json!({ "functor": u.name() })).verdict(r, |e| lift_cert(&u, e)))
        }
        ("tc", [u]) => {
            let u = ctx.functor(u)?;
            let pi = components_presheaf(&u);
            let d = u.codomain().clone();
            let r = check_terminally_connected(&u);
            Ok(Report::new(args, json!({ "functor": u.name(), "components": presheaf_json(&pi) })).verdict(r, |e| match e {
                FactorizationError::NotTerminallyConnected(f) => finality_cert(&d, f),
                other => json!({ "error": other.to_string() }),
            }))
        }
        ("tc", [u, j, k]) => {
            let (u, j, k) = (ctx.functor(u)?, ctx.topology(j)?, ctx.topology(k)?);
            let v = tc_by_local_site(&u, &j, &k).map_err(pre)?;
            let mut r = Report::new(args, json!({ "functor": u.name(), "criterion": "local site", "outcome": format!("{v:?}") }));
            r.verdict = tc_verdict(v);
            Ok(r)
        }
        ("comorphism", [u, j, k]) => {
            let (u, j, k) = (ctx.functor(u)?, ctx.topology(j)?, ctx.topology(k)?);
            let v = comorphism_tc(&u, &j, &k).map_err(pre)?;
            let mut r = Report::new(args, json!({ "functor": u.name(), "criterion": "comorphism", "outcome": format!("{v:?}") }));
            r.verdict = tc_verdict(v);
            Ok(r)
        }
        ("morphism", [u, j, k]) => {
            let (u, j, k) = (ctx.functor(u)?, ctx.topology(j)?, ctx.topology(k)?);
            same_base(&j, u.domain(), "domain")?;
            same_base(&k, u.codomain(), "codomain")?;
            let sm = SiteMorphism { functor: u.clone(), role: SiteRole::Morphism };
            Ok(Report::new(args, json!({ "functor": u.name() })).verdict(sm.check(&j, &k), |e| json!({ "error": e.to_string() })))
        }
        ("cofinal", [u, j]) => {
            let (u, j) = (ctx.functor(u)?, ctx.topology(j)?);
            same_base(&j, u.codomain(), "codomain")?;
            let c = u.codomain().clone();
            Ok(Report::new(args, json!({ "functor": u.name() })).verdict(check_j_cofinal(&u, &j), |e| match e {
                JCofinalityFailure::NoCover(o) => json!({ "no_cover": c.obj_name(o) }),
                JCofinalityFailure::Span { object, left, right } => json!({
                    "span_at": c.obj_name(object),
                    "left": [u.domain().obj_name(left.0), c.mor_name(left.1)],
                    "right": [u.domain().obj_name(right.0), c.mor_name(right.1)],
                }),
            }))
        }
        ("eta", [u]) => {
            let u = ctx.functor(u)?;
            let em = EssentialMorphism::new(u.clone());
            let mut r = Report::new(args, json!({ "functor": u.name(), "tests": eta_test_family(&u).len() }));
            r.verdict = Some(true);
            for e in eta_test_family(&u) {
                if let Err(f) = eta_orthogonal_check(&u, &e) {
                    let cert = match f {
                        OrthogonalityFailure::Missing(fam) => {
                            let (rk, _) = em.ran_unit(&e);
                            json!({ "test": e.name(), "missing": family_json(&rk.presheaf, &fam) })
                        }
                        OrthogonalityFailure::Collision(a, b) => {
                            json!({ "test": e.name(), "collision": [family_json(&e, &a), family_json(&e, &b)] })
                        }
                    };
                    r.verdict = Some(false);
                    r.certificate = Some(cert);
                    break;
                }
            }
            Ok(r)
        }
        ("cofiltered", [c]) => {
            let c = ctx.category(c)?;
            Ok(Report::new(args, json!({ "category": c.name() })).verdict(check_cofiltered(&c), |e| cofiltered_cert(&c, e)))
        }
        ("sheaf", [p, j]) => {
            let (p, j) = (ctx.presheaf(p)?, ctx.topology(j)?);
            same_base(&j, p.base(), "base of the presheaf")?;
            let c = p.base().clone();
            Ok(Report::new(args, json!({ "presheaf": p.name() })).verdict(check_sheaf(&p, &j), |f| {
                let family: BTreeMap<&str, &str> = f
                    .sieve
                    .arrows
                    .iter()
                    .zip(&f.family)
                    .map(|(&h, &x)| (c.mor_name(h), p.label(c.source(h), x)))
                    .collect();
                json!({ "sieve": sieve_json(&c, &f.sieve), "family": family, "amalgamations": f.amalgamations })
            }))
        }
        ("subcanonical", [j]) => {
            let j = ctx.topology(j)?;
            let c = j.base().clone();
            let r = match c.objects().find(|&o| !is_sheaf(&FinPresheaf::representable(c.clone(), o), &j)) {
                None => Ok(()),
                Some(o) => Err(o),
            };
            debug_assert_eq!(r.is_ok(), is_subcanonical(&j));
            Ok(Report::new(args, topology_json(&j)).verdict(r, |o| json!({ "representable": c.obj_name(o) })))
        }
        ("local", [j]) => {
            let j = ctx.topology(j)?;
            let mut r = Report::new(args, topology_json(&j));
            r.verdict = Some(is_local_site(&j).map_err(pre)?);
            Ok(r)
        }
        _ => Err(usage(
            "check final|initial|dfib|dopfib|tc|eta <functor> | check tc|comorphism|morphism <functor> <J> <K> | \
             check cofinal <functor> <J> | check cofiltered <category> | check sheaf <presheaf> <J> | \
             check subcanonical|local <J>",
        )),
    }
}

fn factor(ctx: &Ctx, args: &[String], u: &str) -> CResult<Report> {
    let u = ctx.functor(u)?;
    let fac = comprehensive_factorize(&u);
    let mut r = Report::new(
        args,
        json!({
            "mid": category_json(&fac.mid),
            "left": functor_json(&fac.left),
            "right": functor_json(&fac.right),
            "components": presheaf_json(fac.elements.presheaf()),
        }),
    )
    .verdict(fac.check(), |e| json!({ "error": e }));
    r.dot = Some(plain_dot(&fac.mid));
    Ok(r)
}

fn kan_ext(ctx: &Ctx, args: &[String], kan: &str, u: &str, p: &str) -> CResult<Report> {
    let (u, p) = (ctx.functor(u)?, ctx.presheaf(p)?);
    if p.base() != u.domain() {
        return Err(pre(format!("`{}` is not a presheaf on the domain of `{}`", p.name(), u.name())));
    }
    let em = EssentialMorphism::new(u);
    let out = if kan == "lan" { em.lan(&p).presheaf } else { em.ran(&p).presheaf };
    Ok(Report::new(args, presheaf_json(&out)))
}

fn lift(ctx: &Ctx, args: &[String], u: &str, e: &str) -> CResult<Report> {
    let (u, e) = (ctx.functor(u)?, ctx.presheaf(e)?);
    if e.base() != u.codomain() {
        return Err(pre(format!("`{}` is not a presheaf on the codomain of `{}`", e.name(), u.name())));
    }
    let ue = e.restrict(&u);
    let d = u.codomain().clone();
    let mut r = Report::new(args, Value::Null);
    if let Err(FactorizationError::NotTerminallyConnected(f)) = check_terminally_connected(&u) {
        r.value = json!({ "functor": u.name(), "lifts": [] });
        r.verdict = Some(false);
        r.certificate = Some(finality_cert(&d, f));
        return Ok(r);
    }
    let mut lifts = Vec::new();
    let mut ok = true;
    for a in ue.global_elements() {
        match lift_global_element(&u, &e, &a) {
            Ok(b) => {
                let back: Vec<usize> = u.domain().objects().map(|c| b.family[u.ob(c).0]).collect();
                ok &= back == a.family;
                lifts.push(json!({ "element": element_json(&ue, &a), "lift": element_json(&e, &b) }));
            }
            Err(err) => {
                ok = false;
                lifts.push(json!({ "element": element_json(&ue, &a), "error": err.to_string() }));
            }
        }
    }
    ok &= e.global_elements().len() == ue.global_elements().len();
    r.value = json!({ "functor": u.name(), "lifts": lifts });
    r.verdict = Some(ok);
    Ok(r)
}

fn transport(ctx: &Ctx, args: &[String], a: &str, e: &str) -> CResult<Report> {
    let alpha = ctx
        .ws
        .nats
        .get(a)
        .map(|n| n.value.transf.clone())
        .ok_or_else(|| CliError::NotFound { kind: "nat", name: a.into() })?;
    let e = ctx.presheaf(e)?;
    if e.base() != alpha.source().codomain() {
        return Err(pre(format!("`{}` is not a presheaf on the codomain of `{a}`", e.name())));
    }
    let t = transport_elements(&alpha);
    let comp = t.component(&e);
    let ue = comp.source().clone();
    let elements: Vec<Value> = ue
        .global_elements()
        .iter()
        .map(|x| json!({ "element": element_json(&ue, x), "image": element_json(comp.target(), &t.element_map(&e, x)) }))
        .collect();
    Ok(Report::new(args, json!({ "component": presheaf_map_json(&comp), "elements": elements })))
}

const PROETALE_CHECKS: [&str; 5] = ["ore", "reindexing", "faithful", "fibers", "globals"];

fn proetale(ctx: &Ctx, args: &[String], names: &[&str]) -> CResult<Report> {
    let checks: Vec<&str> = if ctx.opts.checks.is_empty() {
        vec!["ore"]
    } else {
        ctx.opts.checks.iter().map(String::as_str).collect()
    };
    if let Some(bad) = checks.iter().find(|c| !PROETALE_CHECKS.contains(c)) {
        return Err(usage(&format!("unknown check `{bad}`; known: {}", PROETALE_CHECKS.join(","))));
    }
    let targets: Vec<String> = if names.is_empty() {
        ctx.ws.diagrams.keys().cloned().collect()
    } else {
        names.iter().map(|s| s.to_string()).collect()
    };
    if targets.is_empty() {
        return Err(pre("no diagram to build"));
    }
    let mut value = serde_json::Map::new();
    let mut certs = serde_json::Map::new();
    let mut verdict = true;
    let mut dots = String::new();
    for name in &targets {
        let d = ctx.diagram(name)?;
        let mol = Arc::new(build_oplax_colimit(&d));
        let cat = mol.category().clone();
        dots.push_str(&category_dot(&cat, &|m| {
            let mut attrs = Vec::new();
            if mol.is_cartesian(m) {
                attrs.push("style=bold");
            }
            if mol.is_vertical(m) {
                attrs.push("color=gray");
            }
            (!attrs.is_empty()).then(|| attrs.join(", "))
        }));
        let mut results = serde_json::Map::new();
        let mut entry = json!({
            "oplax": {
                "objects": cat.n_objects(),
                "morphisms": cat.n_morphisms(),
                "cartesian": mol.cartesian().iter().filter(|&&b| b).count(),
            },
        });
        let ore = check_ore(&mol);
        if checks.contains(&"ore") {
            results.insert("ore".into(), json!(ore.is_ok()));
            match &ore {
                Ok(cert) => entry["ore"] = json!(cert),
                Err(f) => {
                    certs.insert(format!("{name}.ore"), ore_cert(&cat, f));
                }
            }
        }
        let fc = match localize(&mol) {
            Ok(fc) => fc,
            Err(e) => {
                for c in &checks {
                    results.entry(c.to_string()).or_insert(json!(false));
                }
                certs.insert(format!("{name}.localize"), json!(e.to_string()));
                verdict = false;
                entry["checks"] = Value::Object(results);
                value.insert(name.clone(), entry);
                continue;
            }
        };
        let fcat = fc.category();
        entry["fraction"] = json!({ "objects": fcat.n_objects(), "morphisms": fcat.n_morphisms() });
        for &c in &checks {
            let outcome: Result<Value, String> = match c {
                "ore" => continue,
                "reindexing" => match canonical_reindexing_initial(&fc) {
                    Ok(true) => Ok(json!(true)),
                    Ok(false) => Err("canonical reindexing is not initial".into()),
                    Err(e) => Err(e.to_string()),
                },
                "faithful" => pro_adjoint_faithful_check(&fc)
                    .map(|r| json!({ "pairs": r.pairs, "test_objects": r.test_objects }))
                    .map_err(|e| e.to_string()),
                "fibers" => fibers_generate(&fc).map(|n| json!(n)).map_err(|e| e.to_string()),
                _ => {
                    let t = d.target().clone();
                    t.objects()
                        .map(|o| {
                            pseudocolim_global_elements(&fc, o).map(|els| (t.obj_name(o).to_string(), json!(els.len())))
                        })
                        .collect::<Result<serde_json::Map<_, _>, _>>()
                        .map(Value::Object)
                        .map_err(|e| e.to_string())
                }
            };
            match outcome {
                Ok(v) => {
                    results.insert(c.into(), json!(true));
                    entry[c] = v;
                }
                Err(e) => {
                    results.insert(c.into(), json!(false));
                    certs.insert(format!("{name}.{c}"), json!(e));
                }
            }
        }
        verdict &= results.values().all(|v| v == &json!(true));
        entry["checks"] = Value::Object(results);
        value.insert(name.clone(), entry);
    }
    let mut r = Report::new(args, Value::Object(value));
    r.verdict = Some(verdict);
    if !certs.is_empty() {
        r.certificate = Some(Value::Object(certs));
    }
    r.dot = Some(dots);
    Ok(r)
}

fn ore_cert(c: &FinCategory, f: &OreFailure) -> Value {
    let n = |m: &Mor| c.mor_name(*m);
    match f {
        OreFailure::IdentityNotMarked(m) => json!({ "identity_not_marked": n(m) }),
        OreFailure::NotClosed { first, second } => json!({ "not_closed": [n(first), n(second)] }),
        OreFailure::NoSquare { f, w } => json!({ "no_square": { "f": n(f), "w": n(w) } }),
        OreFailure::NoEqualizer { w, f1, f2 } => json!({ "no_equalizer": { "w": n(w), "f1": n(f1), "f2": n(f2) } }),
    }
}

/// Factorization soundness and agreement of the terminal-connectedness
/// tests over every functor in the universe fixed by `TOPOSFACTOR_MAXOBJ`.
fn sweep(args: &[String]) -> Report {
    let bounds = Bounds::from_env();
    let cats = universe(bounds);
    let (mut functors, mut failures) = (0usize, Vec::new());
    for c in &cats {
        for d in &cats {
            toposfactor_core::constructions::for_each_functor(c, d, |om, mm| {
                functors += 1;
                let u = FinFunctor::new("u", c.clone(), d.clone(), om.to_vec(), mm.to_vec()).expect("enumerated functor");
                let fac = comprehensive_factorize(&u);
                let tc = check_terminally_connected(&u).is_ok();
                let fin = check_final(&u).is_ok();
                if fac.check().is_err() || tc != fin {
                    if failures.len() < 10 {
                        failures.push(json!({ "domain": c.name(), "codomain": d.name(), "functor": functor_json(&u) }));
                    }
                }
                ControlFlow::Continue(())
            });
        }
    }
    let mut r = Report::new(
        args,
        json!({
            "max_objects": bounds.max_objects,
            "max_hom": bounds.max_hom,
            "categories": cats.len(),
            "functors": functors,
        }),
    );
    r.verdict = Some(failures.is_empty());
    if !failures.is_empty() {
        r.certificate = Some(Value::Array(failures));
    }
    r
}
