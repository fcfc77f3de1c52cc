use petgraph::unionfind::UnionFind;

use crate::fincat::{FinCategory, Ob};

/// Connected components: `label[o]` is the component of object `o`.
/// Components are numbered by their least object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub label: Vec<usize>,
    pub count: usize,
}

impl Components {
    /// Components of a graph on `n` nodes given by its edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::<usize>::new(n);
        for (a, b) in edges {
            uf.union(a, b);
        }
        let mut root_label = vec![usize::MAX; n];
        let mut label = Vec::with_capacity(n);
        let mut count = 0;
        for i in 0..n {
            let r = uf.find(i);
            if root_label[r] == usize::MAX {
                root_label[r] = count;
                count += 1;
            }
            label.push(root_label[r]);
        }
        Components { label, count }
    }

    pub fn of(&self, o: Ob) -> usize {
        self.label[o.0]
    }

    /// Least member of each component.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.count];
        for (i, &l) in self.label.iter().enumerate() {
            if reps[l] == usize::MAX {
                reps[l] = i;
            }
        }
        reps
    }

    pub fn is_connected(&self) -> bool {
        self.count == 1
    }
}

/// Connected components of a finite category (zigzag classes of objects).
pub fn pi0(c: &FinCategory) -> Components {
    Components::from_edges(
        c.n_objects(),
        c.morphisms().map(|f| (c.source(f).0, c.target(f).0)),
    )
}
