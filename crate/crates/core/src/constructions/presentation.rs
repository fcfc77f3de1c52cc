//! Finite categories presented by generators and relations.
//!
//! For each source object the representable `Hom(x, -)` is enumerated as a
//! right action of the generators, coset-enumeration style: nodes are
//! morphisms out of `x`, every relation is imposed at every node, and
//! coincidences are merged by congruence closure.

use std::collections::VecDeque;

use thiserror::Error;

use crate::fincat::{identity_name, FinCategory, MorphismData, Mor, Ob};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub source: Ob,
    pub target: Ob,
}

/// Generators with relations between paths. Words are in diagrammatic
/// order: `[f, g]` is `g . f`.
#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug)]
pub struct Presented {
    pub category: FinCategory,
    pub generator_image: Vec<Mor>,
    /// Shortlex-least word of each morphism.
    pub words: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("enumeration from `{object}` exceeded {limit} morphisms")]
    TooLarge { object: String, limit: usize },
    #[error("relation {0} is ill-typed")]
    IllTypedRelation(usize),
}

struct Enumeration<'a> {
    p: &'a Presentation,
    obj: Vec<Ob>,
    trans: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
}

impl<'a> Enumeration<'a> {
    fn new(p: &'a Presentation, root: Ob) -> Self {
        let mut e = Enumeration {
            p,
            obj: Vec::new(),
            trans: Vec::new(),
            parent: Vec::new(),
        };
        e.add(root);
        e
    }

    fn add(&mut self, o: Ob) -> usize {
        self.obj.push(o);
        self.trans.push(vec![None; self.p.generators.len()]);
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut n: usize) -> usize {
        while self.parent[n] != n {
            self.parent[n] = self.parent[self.parent[n]];
            n = self.parent[n];
        }
        n
    }

    fn step(&mut self, n: usize, g: usize, define: bool) -> Option<usize> {
        let n = self.find(n);
        if let Some(t) = self.trans[n][g] {
            return Some(self.find(t));
        }
        if !define {
            return None;
        }
        let t = self.add(self.p.generators[g].target);
        self.trans[n][g] = Some(t);
        Some(t)
    }

    fn trace(&mut self, n: usize, word: &[usize], define: bool) -> Option<usize> {
        word.iter().try_fold(n, |m, &g| self.step(m, g, define))
    }

    fn merge(&mut self, a: usize, b: usize) -> bool {
        let mut queue = VecDeque::from([(a, b)]);
        let mut changed = false;
        while let Some((a, b)) = queue.pop_front() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            changed = true;
            let (keep, drop) = if a < b { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            for g in 0..self.p.generators.len() {
                if let Some(t) = self.trans[drop][g] {
                    match self.trans[keep][g] {
                        None => self.trans[keep][g] = Some(t),
                        Some(t2) => queue.push_back((t, t2)),
                    }
                }
            }
        }
        changed
    }

    fn live(&mut self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&n| self.find(n) == n).collect()
    }

    fn run(&mut self, relations: &[(Ob, &[usize], &[usize])], limit: usize) -> Result<(), ()> {
        loop {
            let mut i = 0;
            while i < self.parent.len() {
                if self.find(i) == i {
                    for &(s, l, r) in relations {
                        if self.obj[i] != s {
                            continue;
                        }
                        let a = self.trace(i, l, true).unwrap();
                        let b = self.trace(i, r, true).unwrap();
                        self.merge(a, b);
                        if self.find(i) != i {
                            break;
                        }
                    }
                }
                if self.find(i) == i {
                    for g in 0..self.p.generators.len() {
                        if self.p.generators[g].source == self.obj[i] {
                            self.step(i, g, true);
                        }
                    }
                }
                if self.parent.len() > limit {
                    return Err(());
                }
                i += 1;
            }
            // Verification pass: the table is complete; re-impose every
            // relation and stop once nothing merges.
            let mut changed = false;
            for n in self.live() {
                if self.find(n) != n {
                    continue;
                }
                for &(s, l, r) in relations {
                    if self.obj[n] != s {
                        continue;
                    }
                    let a = self.trace(n, l, true).unwrap();
                    let b = self.trace(n, r, true).unwrap();
                    changed |= self.merge(a, b);
                }
            }
            let complete = self.live().into_iter().all(|n| {
                (0..self.p.generators.len()).all(|g| {
                    self.p.generators[g].source != self.obj[n] || self.trans[n][g].is_some()
                })
            });
            if !changed && complete {
                return Ok(());
            }
        }
    }

    /// Live nodes with their shortlex-least words, in BFS order.
    fn shortlex(&mut self) -> Vec<(usize, Vec<usize>)> {
        let root = self.find(0);
        let mut seen = vec![false; self.parent.len()];
        let mut out = vec![(root, Vec::new())];
        seen[root] = true;
        let mut head = 0;
        while head < out.len() {
            let (n, w) = out[head].clone();
            head += 1;
            for g in 0..self.p.generators.len() {
                if self.p.generators[g].source != self.obj[n] {
                    continue;
                }
                let t = self.step(n, g, false).expect("table is complete");
                if !seen[t] {
                    seen[t] = true;
                    let mut w2 = w.clone();
                    w2.push(g);
                    out.push((t, w2));
                }
            }
        }
        out
    }
}

impl Presentation {
    fn relation_source(&self, l: &[usize], r: &[usize]) -> Option<Ob> {
        l.first().or(r.first()).map(|&g| self.generators[g].source)
    }

    fn check_relations(&self) -> Result<Vec<(Ob, &[usize], &[usize])>, PresentationError> {
        let mut out = Vec::new();
        for (i, (l, r)) in self.relations.iter().enumerate() {
            let Some(s) = self.relation_source(l, r) else {
                continue;
            };
            let end = |w: &[usize]| -> Option<Ob> {
                let mut at = s;
                for &g in w {
                    let gen = self.generators.get(g)?;
                    if gen.source != at {
                        return None;
                    }
                    at = gen.target;
                }
                Some(at)
            };
            match (end(l), end(r)) {
                (Some(a), Some(b)) if a == b => out.push((s, l.as_slice(), r.as_slice())),
                _ => return Err(PresentationError::IllTypedRelation(i)),
            }
        }
        Ok(out)
    }

    /// Enumerates the presented category. `limit` bounds the number of
    /// nodes created per source object.
    pub fn present(&self, name: &str, limit: usize) -> Result<Presented, PresentationError> {
        let relations = self.check_relations()?;
        let n = self.objects.len();
        let mut tables = Vec::with_capacity(n);
        let mut homs: Vec<Vec<(usize, Vec<usize>)>> = Vec::with_capacity(n);
        for x in 0..n {
            let mut e = Enumeration::new(self, Ob(x));
            e.run(&relations, limit).map_err(|_| PresentationError::TooLarge {
                object: self.objects[x].clone(),
                limit,
            })?;
            let mut nodes = e.shortlex();
            nodes.sort_by(|a, b| {
                (e.obj[a.0], a.1.len(), &a.1).cmp(&(e.obj[b.0], b.1.len(), &b.1))
            });
            homs.push(nodes);
            tables.push(e);
        }
        // Global morphism numbering: by source, then target, then shortlex.
        let mut morphisms = Vec::new();
        let mut words = Vec::new();
        let mut node_to_mor: Vec<Vec<Option<Mor>>> = Vec::with_capacity(n);
        let mut identities = Vec::with_capacity(n);
        for x in 0..n {
            let mut map = vec![None; tables[x].parent.len()];
            for (node, word) in &homs[x] {
                let m = Mor(morphisms.len());
                map[*node] = Some(m);
                let target = tables[x].obj[*node];
                let name = if word.is_empty() {
                    identities.push(m);
                    identity_name(&self.objects[x])
                } else {
                    word.iter()
                        .rev()
                        .map(|&g| self.generators[g].name.as_str())
                        .collect::<Vec<_>>()
                        .join(".")
                };
                morphisms.push(MorphismData {
                    name,
                    source: Ob(x),
                    target,
                });
                words.push(word.clone());
            }
            node_to_mor.push(map);
        }
        let source_of: Vec<usize> = morphisms.iter().map(|d| d.source.0).collect();
        let node_of: Vec<usize> = {
            let mut v = vec![0; morphisms.len()];
            for map in &node_to_mor {
                for (node, m) in map.iter().enumerate() {
                    if let Some(m) = m {
                        v[m.0] = node;
                    }
                }
            }
            v
        };
        let mut table = vec![None; morphisms.len() * morphisms.len()];
        for f in 0..morphisms.len() {
            let x = source_of[f];
            for g in 0..morphisms.len() {
                if morphisms[g].source != morphisms[f].target {
                    continue;
                }
                let end = tables[x].trace(node_of[f], &words[g], false).expect("table is complete");
                let end = tables[x].find(end);
                table[g * morphisms.len() + f] = node_to_mor[x][end];
            }
        }
        let m = morphisms.len();
        let generator_image = self
            .generators
            .iter()
            .enumerate()
            .map(|(g, gen)| {
                let x = gen.source.0;
                let root = tables[x].find(0);
                let t = tables[x].step(root, g, false).expect("table is complete");
                node_to_mor[x][t].expect("live node")
            })
            .collect();
        let category = FinCategory::from_parts(name, self.objects.clone(), morphisms, identities, |g, f| {
            table[g.0 * m + f.0]
        })
        .expect("presented category satisfies the category laws");
        Ok(Presented {
            category,
            generator_image,
            words,
        })
    }
}
