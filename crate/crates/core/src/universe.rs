//! Small finite categories: exhaustive enumeration up to isomorphism and
//! seeded random generation.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fincat::{FinCategory, MorphismData, Mor, Ob};

/// Bounds for the exhaustive universe.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_hom: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_objects: 3,
            max_hom: 2,
        }
    }
}

impl Bounds {
    /// Reads `TOPOSFACTOR_MAXOBJ`, falling back to the defaults.
    pub fn from_env() -> Self {
        let mut b = Bounds::default();
        if let Some(n) = std::env::var("TOPOSFACTOR_MAXOBJ").ok().and_then(|v| v.parse().ok()) {
            b.max_objects = n;
        }
        b
    }
}

/// Hom-size matrix plus a partial composition table over a fixed morphism layout.
struct Layout {
    n: usize,
    sizes: Vec<usize>,
    /// morphisms of hom(a, b) occupy `start[a*n+b] .. start[a*n+b] + sizes[a*n+b]`
    start: Vec<usize>,
    src: Vec<usize>,
    tgt: Vec<usize>,
}

impl Layout {
    fn new(n: usize, sizes: Vec<usize>) -> Self {
        let mut start = vec![0; n * n];
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for a in 0..n {
            for b in 0..n {
                start[a * n + b] = src.len();
                for _ in 0..sizes[a * n + b] {
                    src.push(a);
                    tgt.push(b);
                }
            }
        }
        Layout { n, sizes, start, src, tgt }
    }

    fn m(&self) -> usize {
        self.src.len()
    }

    fn id(&self, a: usize) -> usize {
        self.start[a * self.n + a]
    }

    fn is_id(&self, f: usize) -> bool {
        self.src[f] == self.tgt[f] && self.id(self.src[f]) == f
    }

    fn hom(&self, a: usize, b: usize) -> std::ops::Range<usize> {
        let s = self.start[a * self.n + b];
        s..s + self.sizes[a * self.n + b]
    }
}

struct Search<'a> {
    l: &'a Layout,
    table: Vec<Option<usize>>,
    pairs: Vec<(usize, usize)>,
    triples: Vec<(usize, usize, usize)>,
    /// triples to check after assigning pair i
    watch: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(l: &'a Layout) -> Self {
        let m = l.m();
        let mut pairs = Vec::new();
        for f in 0..m {
            for g in 0..m {
                if l.tgt[f] == l.src[g] && !l.is_id(f) && !l.is_id(g) {
                    pairs.push((g, f));
                }
            }
        }
        let mut triples = Vec::new();
        for &(g, f) in &pairs {
            for h in 0..m {
                if l.src[h] == l.tgt[g] && !l.is_id(h) {
                    triples.push((h, g, f));
                }
            }
        }
        let mut table = vec![None; m * m];
        for f in 0..m {
            table[l.id(l.tgt[f]) * m + f] = Some(f);
            table[f * m + l.id(l.src[f])] = Some(f);
        }
        Search {
            l,
            table,
            pairs,
            triples,
            watch: Vec::new(),
        }
    }

    fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g * self.l.m() + f]
    }

    fn triple_ok(&self, (h, g, f): (usize, usize, usize)) -> bool {
        let (Some(gf), Some(hg)) = (self.comp(g, f), self.comp(h, g)) else {
            return true;
        };
        match (self.comp(h, gf), self.comp(hg, f)) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    fn prepare(&mut self) {
        // every pair a triple reads has first component h or second component f,
        // so the last of them to be assigned triggers the check
        let mut touching: Vec<Vec<usize>> = vec![Vec::new(); self.pairs.len()];
        for (t, &(h, _, f)) in self.triples.iter().enumerate() {
            for (i, &(pg, pf)) in self.pairs.iter().enumerate() {
                if pg == h || pf == f {
                    touching[i].push(t);
                }
            }
        }
        self.watch = touching;
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Option<usize>])) {
        self.prepare();
        self.go(0, visit);
    }

    fn go(&mut self, i: usize, visit: &mut dyn FnMut(&[Option<usize>])) {
        if i == self.pairs.len() {
            visit(&self.table);
            return;
        }
        let (g, f) = self.pairs[i];
        let m = self.l.m();
        for v in self.l.hom(self.l.src[f], self.l.tgt[g]) {
            self.table[g * m + f] = Some(v);
            if self.watch[i].iter().all(|&t| self.triple_ok(self.triples[t])) {
                self.go(i + 1, visit);
            }
        }
        self.table[g * m + f] = None;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Canonical encoding of a category given as layout plus full table, minimized
/// over object permutations preserving the hom-size matrix and reorderings of
/// non-identity morphisms within each hom-set.
fn canonical(l: &Layout, table: &[Option<usize>], perms: &[Vec<usize>]) -> Vec<u8> {
    let n = l.n;
    let m = l.m();
    let mut best: Option<Vec<u8>> = None;
    for p in perms {
        // p maps old object -> new object; requires sizes preserved
        if (0..n).any(|a| (0..n).any(|b| l.sizes[a * n + b] != l.sizes[p[a] * n + p[b]])) {
            continue;
        }
        // choices of order inside each hom: only homs with 2 non-identity morphisms matter
        let swappable: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && l.sizes[a * n + b] == 2)
            .collect();
        for mask in 0u32..(1 << swappable.len()) {
            // new index of each old morphism
            let mut new_of = vec![0usize; m];
            for a in 0..n {
                for b in 0..n {
                    let old = l.hom(a, b);
                    let new = l.hom(p[a], p[b]);
                    let swap = swappable
                        .iter()
                        .position(|&x| x == (a, b))
                        .is_some_and(|k| mask >> k & 1 == 1);
                    for (k, o) in old.enumerate() {
                        let k2 = if swap { 1 - k } else { k };
                        new_of[o] = new.start + k2;
                    }
                }
            }
            let mut enc = vec![0u8; m * m];
            for g in 0..m {
                for f in 0..m {
                    if let Some(v) = table[g * m + f] {
                        enc[new_of[g] * m + new_of[f]] = new_of[v] as u8 + 1;
                    }
                }
            }
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.expect("identity permutation preserves sizes")
}

fn build(l: &Layout, table: &[Option<usize>], name: String) -> FinCategory {
    let m = l.m();
    let objects: Vec<String> = (0..l.n).map(|a| a.to_string()).collect();
    let mut morphisms = Vec::with_capacity(m);
    for a in 0..l.n {
        for b in 0..l.n {
            for (k, f) in l.hom(a, b).enumerate() {
                let name = if l.is_id(f) {
                    format!("id_{a}")
                } else if l.sizes[a * l.n + b] - usize::from(a == b) > 1 {
                    format!("m{a}{b}_{k}")
                } else {
                    format!("m{a}{b}")
                };
                morphisms.push(MorphismData {
                    name,
                    source: Ob(a),
                    target: Ob(b),
                });
            }
        }
    }
    let identities = (0..l.n).map(|a| Mor(l.id(a))).collect();
    FinCategory::from_parts(name, objects, morphisms, identities, |g, f| table[g.0 * m + f.0].map(Mor))
        .expect("enumerated table is a category")
}

/// Size matrices with identities on the diagonal, minimal in their orbit
/// under object permutations.
fn size_matrices(n: usize, max_hom: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let cells = n * n;
    let mut cur = vec![0usize; cells];
    fn go(i: usize, n: usize, max_hom: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n * n {
            out.push(cur.clone());
            return;
        }
        let (a, b) = (i / n, i % n);
        let lo = usize::from(a == b);
        for v in lo..=max_hom {
            cur[i] = v;
            go(i + 1, n, max_hom, cur, out);
        }
    }
    let mut all = Vec::new();
    go(0, n, max_hom, &mut cur, &mut all);
    for s in all {
        let minimal = perms.iter().all(|p| {
            let t: Vec<usize> = (0..cells).map(|i| s[p[i / n] * n + p[i % n]]).collect();
            s <= t
        });
        // composability: hom(a,b), hom(b,c) non-empty force hom(a,c) non-empty
        let closed = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| s[a * n + b] == 0 || s[b * n + c] == 0 || s[a * n + c] > 0))
        });
        if minimal && closed {
            out.push(s);
        }
    }
    out
}

/// Every category with exactly `n` objects and hom-sets of size at most
/// `max_hom`, one per isomorphism class, in a deterministic order.
pub fn categories_with(n: usize, max_hom: usize) -> Vec<FinCategory> {
    let perms = permutations(n);
    let mut out = Vec::new();
    for sizes in size_matrices(n, max_hom, &perms) {
        let l = Layout::new(n, sizes);
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut found: Vec<(Vec<u8>, Vec<Option<usize>>)> = Vec::new();
        let mut s = Search::new(&l);
        s.run(&mut |table| {
            let key = canonical(&l, table, &perms);
            if seen.insert(key.clone()) {
                found.push((key, table.to_vec()));
            }
        });
        found.sort();
        for (_, table) in found {
            let name = format!("U{}_{}", n, out.len());
            out.push(build(&l, &table, name));
        }
    }
    out
}

/// The exhaustive universe: all categories with `1..=max_objects` objects.
pub fn universe(b: Bounds) -> Vec<Arc<FinCategory>> {
    let mut out = Vec::new();
    for n in 1..=b.max_objects {
        out.extend(categories_with(n, b.max_hom).into_iter().map(Arc::new));
    }
    out
}

/// A random category on `n` objects with hom-sets of size at most
/// `max_hom`: random size matrix, then a randomized table search.
pub fn random_category<R: Rng>(rng: &mut R, n: usize, max_hom: usize, name: &str) -> FinCategory {
    loop {
        let mut sizes = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                sizes[a * n + b] = if a == b {
                    rng.gen_range(1..=max_hom)
                } else {
                    // sparse off-diagonal homs keep composability constraints satisfiable
                    if rng.gen_bool(0.5) {
                        0
                    } else {
                        rng.gen_range(1..=max_hom)
                    }
                };
            }
        }
        // close under composability
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if sizes[a * n + b] > 0 && sizes[b * n + c] > 0 && sizes[a * n + c] == 0 {
                            sizes[a * n + c] = 1;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let l = Layout::new(n, sizes);
        if let Some(table) = random_table(&l, rng) {
            return build(&l, &table, name.to_string());
        }
    }
}

fn random_table<R: Rng>(l: &Layout, rng: &mut R) -> Option<Vec<Option<usize>>> {
    let mut s = Search::new(l);
    s.prepare();
    let mut order: Vec<Vec<usize>> = s
        .pairs
        .iter()
        .map(|&(g, f)| l.hom(l.src[f], l.tgt[g]).collect())
        .collect();
    for o in &mut order {
        o.shuffle(rng);
    }
    let mut budget = 20_000usize;
    fn go(s: &mut Search, order: &[Vec<usize>], i: usize, budget: &mut usize) -> bool {
        if i == s.pairs.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let (g, f) = s.pairs[i];
        let m = s.l.m();
        for &v in &order[i] {
            s.table[g * m + f] = Some(v);
            if s.watch[i].iter().all(|&t| s.triple_ok(s.triples[t])) && go(s, order, i + 1, budget) {
                return true;
            }
        }
        s.table[g * m + f] = None;
        false
    }
    if go(&mut s, &order, 0, &mut budget) {
        Some(s.table)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn one_object_categories_are_monoids_of_order_at_most_two() {
        // trivial monoid, Z/2, and the idempotent monoid
        assert_eq!(categories_with(1, 2).len(), 3);
    }

    #[test]
    fn two_object_preorders() {
        // discrete, arrow, chaotic (isomorphic pair)
        assert_eq!(categories_with(2, 1).len(), 3);
    }

    #[test]
    fn random_categories_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for i in 0..20 {
            let c = random_category(&mut rng, 4, 2, &format!("R{i}"));
            assert_eq!(c.n_objects(), 4);
        }
    }
}
