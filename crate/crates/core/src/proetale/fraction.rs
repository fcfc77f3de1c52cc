use std::collections::HashMap;
use std::sync::Arc;

use super::{check_ore, MarkedOplaxColimit, ProetaleError};
use crate::constructions::uniquify;
use crate::fincat::{FinCategory, FinFunctor, MorphismData, Mor, Ob};

/// The localization of a marked oplax colimit at its cartesian morphisms.
///
/// A morphism `X -> Y` is a class of spans `X <-s- Z -f-> Y` with `s`
/// cartesian. Two spans are identified when they agree after precomposing
/// with arrows `t`, `t'` such that `s t = s' t'` is cartesian; classes are the
/// closure of that relation and each is named by its least span.
#[derive(Clone, Debug)]
pub struct FractionCategory {
    mol: Arc<MarkedOplaxColimit>,
    category: Arc<FinCategory>,
    spans: Vec<(Mor, Mor)>,
    span_class: Vec<Mor>,
    span_index: HashMap<(Mor, Mor), usize>,
    representatives: Vec<usize>,
    localization: FinFunctor,
    inclusions: Vec<FinFunctor>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // the smaller index stays the root, so roots are least members
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

pub fn localize(mol: &Arc<MarkedOplaxColimit>) -> Result<FractionCategory, ProetaleError> {
    check_ore(mol).map_err(ProetaleError::OreFailed)?;
    let cat = mol.category().clone();
    let w = mol.cartesian();
    let mut spans = Vec::new();
    for s in cat.morphisms().filter(|s| w[s.0]) {
        for &f in cat.outgoing(cat.source(s)) {
            spans.push((s, f));
        }
    }
    spans.sort();
    let span_index: HashMap<(Mor, Mor), usize> = spans.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut uf = UnionFind((0..spans.len()).collect());
    for (k, &(s, f)) in spans.iter().enumerate() {
        for &t in cat.incoming(cat.source(s)) {
            let st = cat.compose(s, t);
            if w[st.0] {
                uf.union(k, span_index[&(st, cat.compose(f, t))]);
            }
        }
    }
    let roots: Vec<usize> = (0..spans.len()).map(|k| uf.find(k)).collect();
    let endpoints = |k: usize| {
        let (s, f) = spans[k];
        (cat.target(s), cat.target(f))
    };
    let mut reps: Vec<usize> = roots.clone();
    reps.sort_by_key(|&r| (endpoints(r), r));
    reps.dedup();
    let class_of_root: HashMap<usize, Mor> = reps.iter().enumerate().map(|(m, &r)| (r, Mor(m))).collect();
    let span_class: Vec<Mor> = roots.iter().map(|r| class_of_root[r]).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for (k, c) in span_class.iter().enumerate() {
        members[c.0].push(k);
    }

    let n = cat.n_objects();
    let identities: Vec<Mor> = cat
        .objects()
        .map(|o| span_class[span_index[&(cat.id(o), cat.id(o))]])
        .collect();
    let names = uniquify(
        members
            .iter()
            .map(|ks| {
                let plain = ks.iter().find(|&&k| cat.is_identity(spans[k].0));
                match plain {
                    Some(&k) => cat.mor_name(spans[k].1).to_string(),
                    None => {
                        let (s, f) = spans[ks[0]];
                        format!("{}/{}", cat.mor_name(f), cat.mor_name(s))
                    }
                }
            })
            .collect(),
    );
    let mdata: Vec<MorphismData> = reps
        .iter()
        .zip(names)
        .map(|(&r, name)| {
            let (x, y) = endpoints(r);
            MorphismData { name, source: x, target: y }
        })
        .collect();

    // composition through Ore squares, checked against every choice
    let m = reps.len();
    let mut table: HashMap<(usize, usize), Mor> = HashMap::new();
    for a in 0..m {
        let y = mdata[a].target;
        for b in (0..m).filter(|&b| mdata[b].source == y) {
            let mut result: Option<Mor> = None;
            for &ka in &members[a] {
                let (s1, f1) = spans[ka];
                for &kb in &members[b] {
                    let (s2, f2) = spans[kb];
                    let mut closed = false;
                    for &w2 in cat.incoming(cat.source(f1)) {
                        if !w[w2.0] {
                            continue;
                        }
                        let f1w = cat.compose(f1, w2);
                        for &f3 in cat.hom(cat.source(w2), cat.source(s2)) {
                            if cat.compose(s2, f3) != f1w {
                                continue;
                            }
                            closed = true;
                            let span = (cat.compose(s1, w2), cat.compose(f2, f3));
                            let c = span_class[span_index[&span]];
                            match result {
                                None => result = Some(c),
                                Some(r) if r != c => {
                                    return Err(ProetaleError::CompositionNotWellDefined {
                                        first: Mor(a),
                                        second: Mor(b),
                                    })
                                }
                                _ => {}
                            }
                        }
                    }
                    if !closed {
                        return Err(ProetaleError::CompositionNotWellDefined {
                            first: Mor(a),
                            second: Mor(b),
                        });
                    }
                }
            }
            table.insert((b, a), result.expect("classes are non-empty"));
        }
    }
    let objects: Vec<String> = cat.object_names().to_vec();
    let name = format!("frac({})", mol.diagram().name());
    let category = Arc::new(
        FinCategory::from_parts(name, objects, mdata, identities, |g, f| table.get(&(g.0, f.0)).copied())
            .map_err(|e| ProetaleError::Internal(format!("fraction category: {e}")))?,
    );
    debug_assert_eq!(category.n_objects(), n);

    let localization = FinFunctor::new(
        "loc",
        cat.clone(),
        category.clone(),
        cat.objects().collect(),
        cat.morphisms()
            .map(|f| span_class[span_index[&(cat.id(cat.source(f)), f)]])
            .collect(),
    )
    .map_err(|e| ProetaleError::Internal(format!("localization: {e}")))?;

    let diagram = mol.diagram();
    let mut inclusions = Vec::new();
    for i in diagram.index().objects() {
        let (slice, under) = diagram.slice_category(i);
        let on_objects: Vec<Ob> = diagram
            .slice(i)
            .iter()
            .map(|&h| mol.find_object(i, h).expect("slice object"))
            .collect();
        let id_i = diagram.index().id(i);
        let on_morphisms: Vec<Mor> = slice
            .morphisms()
            .map(|g| {
                let (a, b) = (on_objects[slice.source(g).0], on_objects[slice.target(g).0]);
                let v = mol.find_morphism(a, b, id_i, under[g.0]).expect("vertical morphism");
                localization.mor(v)
            })
            .collect();
        let q = FinFunctor::new(format!("q{}", i.0), slice, category.clone(), on_objects, on_morphisms)
            .map_err(|e| ProetaleError::Internal(format!("inclusion: {e}")))?;
        inclusions.push(q);
    }

    Ok(FractionCategory {
        mol: mol.clone(),
        category,
        spans,
        span_class,
        span_index,
        representatives: reps,
        localization,
        inclusions,
    })
}

impl FractionCategory {
    pub fn mol(&self) -> &Arc<MarkedOplaxColimit> {
        &self.mol
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    /// The class of the span `X <-s- Z -f-> Y`.
    pub fn class_of(&self, s: Mor, f: Mor) -> Option<Mor> {
        self.span_index.get(&(s, f)).map(|&k| self.span_class[k])
    }

    /// The least span of a class.
    pub fn representative(&self, m: Mor) -> (Mor, Mor) {
        self.spans[self.representatives[m.0]]
    }

    /// Every span in the class.
    pub fn members(&self, m: Mor) -> Vec<(Mor, Mor)> {
        self.spans
            .iter()
            .zip(&self.span_class)
            .filter(|(_, &c)| c == m)
            .map(|(&p, _)| p)
            .collect()
    }

    /// All spans with their classes.
    pub fn spans(&self) -> impl Iterator<Item = ((Mor, Mor), Mor)> + '_ {
        self.spans.iter().copied().zip(self.span_class.iter().copied())
    }

    /// The localization functor from the oplax colimit.
    pub fn localization(&self) -> &FinFunctor {
        &self.localization
    }

    /// `q_i : S_i -> frac`
    pub fn inclusion(&self, i: Ob) -> &FinFunctor {
        &self.inclusions[i.0]
    }

    pub fn inclusions(&self) -> &[FinFunctor] {
        &self.inclusions
    }
}
