//! Stallings folding of finitely generated subgroups of a free group.

use std::collections::{BTreeMap, VecDeque};

use super::{inverse_letter, Letter, Word};

/// Folded labelled graph whose based loops read exactly the subgroup.
/// Vertices are numbered in breadth-first order from the base vertex
/// (vertex 0), following letters in increasing order, so two graphs are
/// isomorphic exactly when they are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    edges: Vec<BTreeMap<Letter, usize>>,
}

struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<Letter, usize>>,
    pending: VecDeque<(usize, Letter, usize)>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            parent: vec![0],
            adj: vec![BTreeMap::new()],
            pending: VecDeque::new(),
        }
    }

    fn vertex(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return;
        }
        let (keep, gone) = if x < y { (x, y) } else { (y, x) };
        self.parent[gone] = keep;
        let moved = std::mem::take(&mut self.adj[gone]);
        for (l, t) in moved {
            self.pending.push_back((keep, l, t));
        }
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.pending.push_back((u, l, v));
        while let Some((u, l, v)) = self.pending.pop_front() {
            let (u, v) = (self.find(u), self.find(v));
            let li = inverse_letter(l);
            let fwd = self.adj[u].get(&l).copied().map(|w| self.find(w));
            let back = self.adj[v].get(&li).copied().map(|y| self.find(y));
            match (fwd, back) {
                (Some(w), _) if w != v => {
                    self.union(w, v);
                    self.pending.push_back((u, l, v));
                }
                (_, Some(y)) if y != u => {
                    self.union(y, u);
                    self.pending.push_back((u, l, v));
                }
                _ => {
                    self.adj[u].insert(l, v);
                    self.adj[v].insert(li, u);
                }
            }
        }
    }

    fn finish(mut self) -> SubgroupGraph {
        // Trim hanging trees so the graph depends only on the subgroup.
        let base = self.find(0);
        for x in 0..self.adj.len() {
            let row: Vec<(Letter, usize)> = self.adj[x].iter().map(|(&l, &t)| (l, t)).collect();
            for (l, t) in row {
                let t = self.find(t);
                self.adj[x].insert(l, t);
            }
        }
        let mut leaves: Vec<usize> = (0..self.adj.len())
            .filter(|&x| x != base && self.parent[x] == x && self.adj[x].len() == 1)
            .collect();
        while let Some(x) = leaves.pop() {
            if self.adj[x].len() != 1 {
                continue;
            }
            let (l, t) = self.adj[x].pop_first().expect("one edge");
            self.adj[t].remove(&inverse_letter(l));
            if t != base && self.adj[t].len() == 1 {
                leaves.push(t);
            }
        }

        let mut order = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([self.find(0)]);
        let mut visited = Vec::new();
        order[queue[0]] = 0;
        while let Some(x) = queue.pop_front() {
            visited.push(x);
            let targets: Vec<usize> = self.adj[x].values().copied().collect();
            for t in targets {
                let t = self.find(t);
                if order[t] == usize::MAX {
                    order[t] = visited.len() + queue.len();
                    queue.push_back(t);
                }
            }
        }
        let mut edges = vec![BTreeMap::new(); visited.len()];
        for &x in &visited {
            let row: Vec<(Letter, usize)> = self.adj[x].iter().map(|(&l, &t)| (l, t)).collect();
            for (l, t) in row {
                let t = self.find(t);
                edges[order[x]].insert(l, order[t]);
            }
        }
        SubgroupGraph { edges }
    }
}

impl SubgroupGraph {
    /// Folds the wedge of loops spelling `generators` (in the given order).
    pub fn from_generators(generators: &[Word]) -> SubgroupGraph {
        let mut f = Folder::new();
        for g in generators {
            let letters = g.letters();
            if letters.is_empty() {
                continue;
            }
            let mut cur = 0;
            for (k, &l) in letters.iter().enumerate() {
                let next = if k + 1 == letters.len() { 0 } else { f.vertex() };
                f.add_edge(cur, l, next);
                cur = next;
            }
        }
        f.finish()
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.len()).sum::<usize>() / 2
    }

    /// True iff `w` reads as a closed loop at the base vertex.
    pub fn contains(&self, w: &Word) -> bool {
        let mut v = 0;
        for l in w.letters() {
            match self.edges[v].get(l) {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    pub fn is_folded(&self) -> bool {
        // A BTreeMap per vertex holds one target per label by construction;
        // check the inverse edges agree as well.
        self.edges.iter().enumerate().all(|(v, row)| {
            row.iter()
                .all(|(&l, &t)| self.edges[t].get(&inverse_letter(l)) == Some(&v))
        })
    }
}

/// Membership of `w` in the subgroup represented by `g`.
pub fn membership(g: &SubgroupGraph, w: &Word) -> bool {
    g.contains(w)
}
