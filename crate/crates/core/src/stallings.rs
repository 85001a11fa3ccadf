//! Folded subgroup graphs (Stallings core graphs) of finitely generated
//! subgroups of a free group.

use std::collections::{BTreeMap, VecDeque};

use crate::words::{Letter, Word};

/// Folded core graph with basepoint `0`. Each vertex maps a signed letter
/// to the unique neighbour reached along it; an edge `u --x--> v` is stored
/// as `x: u -> v` and `x^-1: v -> u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupGraph {
    rank: usize,
    adj: Vec<BTreeMap<Letter, usize>>,
}

impl SubgroupGraph {
    /// Wedge of loops at the basepoint, folded and cored, over `F(rank)`.
    pub fn build(generators: &[Word], rank: usize) -> Self {
        let mut f = Folder::new();
        for w in generators {
            debug_assert!(w.min_rank() <= rank);
            if w.is_identity() {
                continue;
            }
            let mut cur = 0;
            let n = w.len();
            for (i, &l) in w.letters().iter().enumerate() {
                let next = if i + 1 == n { 0 } else { f.fresh() };
                f.add_edge(cur, l, next);
                cur = next;
            }
        }
        f.finish(rank)
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Positive edges.
    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|m| m.keys().filter(|l| !l.is_inverse()).count())
            .sum()
    }

    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn edges(&self) -> Vec<(usize, Letter, usize)> {
        let mut out = Vec::new();
        for (u, m) in self.adj.iter().enumerate() {
            for (&l, &v) in m {
                if !l.is_inverse() {
                    out.push((u, l, v));
                }
            }
        }
        out
    }

    pub fn is_folded(&self) -> bool {
        // The adjacency maps are functions of the label, so at most one
        // outgoing edge per signed letter; check the reverse entries agree.
        self.adj.iter().enumerate().all(|(u, m)| {
            m.iter()
                .all(|(&l, &v)| self.adj[v].get(&l.inverse()) == Some(&u))
        })
    }

    pub fn is_core(&self) -> bool {
        self.adj.iter().skip(1).all(|m| m.len() >= 2)
    }

    fn trace(&self, w: &Word) -> Option<usize> {
        let mut v = 0;
        for l in w.letters() {
            v = *self.adj[v].get(l)?;
        }
        Some(v)
    }

    /// `w` lies in the subgroup iff it reads a closed path at the basepoint.
    pub fn member(&self, w: &Word) -> bool {
        self.trace(w) == Some(0)
    }

    /// Breadth-first spanning tree: the path word from the basepoint to each vertex.
    fn tree_paths(&self) -> (Vec<Word>, Vec<Option<(usize, Letter)>>) {
        let n = self.adj.len();
        let mut paths = vec![Word::identity(); n];
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut q = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = q.pop_front() {
            for (&l, &v) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, l));
                    paths[v] = &paths[u] * &Word::letter(l);
                    q.push_back(v);
                }
            }
        }
        (paths, parent)
    }

    /// Free basis read off the spanning-tree complement, one word per
    /// non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        let (paths, parent) = self.tree_paths();
        let mut out = Vec::new();
        for (u, l, v) in self.edges() {
            let in_tree = parent[v] == Some((u, l)) || parent[u] == Some((v, l.inverse()));
            if !in_tree {
                let w = &(&paths[u] * &Word::letter(l)) * &paths[v].inverse();
                out.push(w);
            }
        }
        out
    }

    /// Vertices renumbered by breadth-first search from the basepoint using
    /// letter order; equal subgroups give identical canonical graphs.
    pub fn canonical(&self) -> SubgroupGraph {
        relabel_from(&self.adj, 0, self.rank)
    }

    pub fn equal(&self, other: &SubgroupGraph) -> bool {
        self.rank == other.rank && self.canonical() == other.canonical()
    }

    /// The core with hanging trees removed: the graph of the conjugacy
    /// class of the subgroup. Its basepoint is arbitrary.
    pub fn cyclic_core(&self) -> SubgroupGraph {
        let mut adj = self.adj.clone();
        let n = adj.len();
        let mut alive = vec![true; n];
        let mut stack: Vec<usize> = (0..n).filter(|&v| adj[v].len() <= 1).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || adj[v].len() > 1 {
                continue;
            }
            if adj[v].is_empty() && alive.iter().filter(|&&a| a).count() == 1 {
                break;
            }
            alive[v] = false;
            let nbrs: Vec<(Letter, usize)> = adj[v].iter().map(|(&l, &u)| (l, u)).collect();
            for (l, u) in nbrs {
                adj[u].remove(&l.inverse());
                if adj[u].len() <= 1 {
                    stack.push(u);
                }
            }
            adj[v].clear();
        }
        let start = (0..n).find(|&v| alive[v]).unwrap_or(0);
        let kept = compact(&adj, &alive);
        let start = kept.1[start].unwrap_or(0);
        relabel_from(&kept.0, start, self.rank)
    }

    /// Size measured for Whitehead minimization of subgroups.
    pub fn cyclic_size(&self) -> usize {
        self.cyclic_core().edge_count()
    }

    /// Canonical form of the cyclic core independent of the chosen basepoint.
    pub fn conjugacy_invariant(&self) -> SubgroupGraph {
        let core = self.cyclic_core();
        (0..core.adj.len())
            .map(|v| relabel_from(&core.adj, v, core.rank))
            .min_by(|a, b| a.adj.cmp(&b.adj))
            .unwrap_or(core)
    }

    /// Are the two subgroups conjugate in the ambient free group?
    pub fn is_conjugate(&self, other: &SubgroupGraph) -> bool {
        self.rank == other.rank && self.conjugacy_invariant() == other.conjugacy_invariant()
    }

    /// A rose whose petals are distinct single letters: the subgroup is
    /// generated by part of the basis.
    pub fn is_rose(&self) -> bool {
        self.adj.len() == 1
    }
}

fn compact(
    adj: &[BTreeMap<Letter, usize>],
    alive: &[bool],
) -> (Vec<BTreeMap<Letter, usize>>, Vec<Option<usize>>) {
    let mut map = vec![None; adj.len()];
    let mut k = 0;
    for (v, &a) in alive.iter().enumerate() {
        if a {
            map[v] = Some(k);
            k += 1;
        }
    }
    let out = adj
        .iter()
        .enumerate()
        .filter(|&(v, _)| alive[v])
        .map(|(_, m)| {
            m.iter()
                .map(|(&l, &u)| (l, map[u].expect("alive")))
                .collect()
        })
        .collect();
    (out, map)
}

fn relabel_from(adj: &[BTreeMap<Letter, usize>], start: usize, rank: usize) -> SubgroupGraph {
    if adj.is_empty() {
        return SubgroupGraph {
            rank,
            adj: vec![BTreeMap::new()],
        };
    }
    let n = adj.len();
    let mut order = vec![usize::MAX; n];
    let mut seq = Vec::with_capacity(n);
    order[start] = 0;
    seq.push(start);
    let mut head = 0;
    while head < seq.len() {
        let u = seq[head];
        head += 1;
        for &v in adj[u].values() {
            if order[v] == usize::MAX {
                order[v] = seq.len();
                seq.push(v);
            }
        }
    }
    let new_adj = seq
        .iter()
        .map(|&u| adj[u].iter().map(|(&l, &v)| (l, order[v])).collect())
        .collect();
    SubgroupGraph { rank, adj: new_adj }
}

/// Union-find folding of labelled edges.
struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<Letter, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new() -> Self {
        Folder {
            parent: vec![0],
            adj: vec![BTreeMap::new()],
            pending: Vec::new(),
        }
    }

    fn fresh(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.adj.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        self.insert_half(u, l, v);
        self.insert_half(v, l.inverse(), u);
        self.drain();
    }

    fn insert_half(&mut self, u: usize, l: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        match self.adj[u].get(&l).copied() {
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    self.pending.push((w, v));
                }
            }
            None => {
                self.adj[u].insert(l, v);
            }
        }
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            // Keep the smaller index as representative so the basepoint survives.
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let moved = std::mem::take(&mut self.adj[gone]);
            for (l, t) in moved {
                self.insert_half(keep, l, t);
            }
        }
    }

    fn finish(mut self, rank: usize) -> SubgroupGraph {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|v| self.find(v)).collect();
        let mut adj: Vec<BTreeMap<Letter, usize>> = vec![BTreeMap::new(); n];
        for v in 0..n {
            if roots[v] != v {
                continue;
            }
            let m = std::mem::take(&mut self.adj[v]);
            adj[v] = m.into_iter().map(|(l, t)| (l, roots[t])).collect();
        }
        let mut alive: Vec<bool> = (0..n).map(|v| roots[v] == v).collect();
        // Prune hanging trees, keeping the basepoint.
        let mut stack: Vec<usize> = (1..n).filter(|&v| alive[v] && adj[v].len() <= 1).collect();
        while let Some(v) = stack.pop() {
            if v == 0 || !alive[v] || adj[v].len() > 1 {
                continue;
            }
            alive[v] = false;
            let nbrs: Vec<(Letter, usize)> = adj[v].iter().map(|(&l, &u)| (l, u)).collect();
            for (l, u) in nbrs {
                adj[u].remove(&l.inverse());
                if u != 0 && adj[u].len() <= 1 {
                    stack.push(u);
                }
            }
            adj[v].clear();
        }
        let (compacted, _) = compact(&adj, &alive);
        relabel_from(&compacted, 0, rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_generating_set;
    use crate::words::Alphabet;

    fn graph(al: &Alphabet, gens: &str) -> SubgroupGraph {
        SubgroupGraph::build(&parse_generating_set(gens, al).unwrap(), al.rank())
    }

    #[test]
    fn build_examples() {
        let al = Alphabet::parse_list("a b x").unwrap();
        let g = graph(&al, "a, b");
        assert_eq!(g.rank(), 2);
        assert!(g.is_rose());
        let g = graph(&al, "a, b, x^2");
        assert_eq!(g.rank(), 3);
        assert_eq!(g.vertex_count(), 2);
        let w = "a b x^-1 a";
        let g = graph(&al, &format!("{w}, ({w})^2"));
        assert_eq!(g.rank(), 1);
        assert!(g.is_folded() && g.is_core());
    }

    #[test]
    fn trivial_subgroup() {
        let g = SubgroupGraph::build(&[], 2);
        assert_eq!(g.rank(), 0);
        assert!(g.basis().is_empty());
        assert!(g.member(&Word::identity()));
        assert!(!g.member(&Word::gen(0)));
        let g = SubgroupGraph::build(&[Word::identity()], 2);
        assert_eq!(g.vertex_count(), 1);
    }

    #[test]
    fn membership_examples() {
        let al = Alphabet::parse_list("a b x").unwrap();
        let g = graph(&al, "a, b, x^2");
        assert!(g.member(&al.gen("b")));
        assert!(!g.member(&al.gen("x")));
        assert!(g.member(&al.gen("x").pow(4)));
        assert!(g.member(&al.gen("x").pow(-2)));
    }

    #[test]
    fn basis_examples() {
        let al = Alphabet::parse_list("a b x").unwrap();
        let g = graph(&al, "a, b, x^2");
        let basis = g.basis();
        assert_eq!(basis.len(), 3);
        assert!(SubgroupGraph::build(&basis, 3).equal(&graph(&al, "a, b x^2, x^2 b x^2")));

        let g = graph(&al, "a b");
        let basis = g.basis();
        assert_eq!(basis.len(), 1);
        assert!(basis[0].is_conjugate(&parse_generating_set("a b", &al).unwrap()[0]));
    }

    #[test]
    fn basis_reflects_based_conjugation() {
        let al = Alphabet::parse_list("a b").unwrap();
        let g = graph(&al, "b a b^-1");
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(al.render(&g.basis()[0]), "b a b^-1");
        assert_eq!(g.cyclic_core().vertex_count(), 1);
    }

    #[test]
    fn equality_examples() {
        let al = Alphabet::parse_list("a b x").unwrap();
        assert!(graph(&al, "a, b, x^2").equal(&graph(&al, "a, b x^2, x^2 b x^2")));
        assert!(!graph(&al, "a").equal(&graph(&al, "a^2")));
        assert!(graph(&al, "a b, x a").equal(&graph(&al, "x a, a b")));
    }

    #[test]
    fn conjugate_subgroups() {
        let al = Alphabet::parse_list("a b").unwrap();
        let h = graph(&al, "a, b a b^-1");
        let k = graph(&al, "b^-1 a b, a");
        assert!(!h.equal(&k));
        assert!(h.is_conjugate(&k));
        assert!(!h.is_conjugate(&graph(&al, "a, b")));
    }
}
