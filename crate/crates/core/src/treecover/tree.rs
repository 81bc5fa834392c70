//! Stable marked trees: dual graphs of stable marked genus-zero curves.
//!
//! Legs are opaque mark ids attached to vertices; a tree is stable when every
//! vertex has valence (edges plus legs) at least three.

use std::collections::BTreeMap;

pub type Mark = u16;

/// Conventional mark ids used throughout: the two totally ramified points get
/// a reserved id, cycle marks use their index.
pub const MARK_STAR: Mark = 100;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedTree {
    pub nvert: usize,
    pub edges: Vec<(usize, usize)>,
    /// marking map, kept sorted by mark
    pub mk: Vec<(Mark, usize)>,
}

impl MarkedTree {
    pub fn new(nvert: usize, edges: Vec<(usize, usize)>, mut mk: Vec<(Mark, usize)>) -> Self {
        mk.sort();
        let t = MarkedTree { nvert, edges, mk };
        debug_assert!(t.well_formed(), "malformed tree");
        t
    }

    pub fn single_vertex(marks: &[Mark]) -> Self {
        MarkedTree::new(1, vec![], marks.iter().map(|&m| (m, 0)).collect())
    }

    pub fn well_formed(&self) -> bool {
        if self.edges.len() + 1 != self.nvert {
            return false;
        }
        if !self
            .edges
            .iter()
            .all(|&(a, b)| a < self.nvert && b < self.nvert && a != b)
        {
            return false;
        }
        if !self.mk.iter().all(|&(_, v)| v < self.nvert) {
            return false;
        }
        // connectivity (acyclicity follows from the edge count)
        if self.nvert == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nvert];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.nvert
    }

    /// adjacency[v] = list of (neighbor, edge index)
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.nvert];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    pub fn legs_at(&self, v: usize) -> Vec<Mark> {
        self.mk.iter().filter(|&&(_, u)| u == v).map(|&(m, _)| m).collect()
    }

    pub fn marks(&self) -> Vec<Mark> {
        self.mk.iter().map(|&(m, _)| m).collect()
    }

    pub fn mark_vertex(&self, m: Mark) -> Option<usize> {
        self.mk.iter().find(|&&(mm, _)| mm == m).map(|&(_, v)| v)
    }

    pub fn valence(&self, v: usize) -> usize {
        let e = self.edges.iter().filter(|&&(a, b)| a == v || b == v).count();
        e + self.legs_at(v).len()
    }

    pub fn is_stable(&self) -> bool {
        (0..self.nvert).all(|v| self.valence(v) >= 3)
    }

    /// Unique path between two vertices, as a vertex list.
    pub fn path_vertices(&self, from: usize, to: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev = vec![usize::MAX; self.nvert];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(from);
        prev[from] = from;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(u, _) in &adj[v] {
                if prev[u] == usize::MAX {
                    prev[u] = v;
                    queue.push_back(u);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Side of `edge` containing `start`, as a vertex set (edge removed).
    pub fn edge_side(&self, edge: usize, start: usize) -> Vec<bool> {
        let (a, b) = self.edges[edge];
        let adj = self.adjacency();
        let mut seen = vec![false; self.nvert];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(u, ei) in &adj[v] {
                if ei == edge && ((v == a && u == b) || (v == b && u == a)) {
                    continue;
                }
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Contract one edge, merging the higher-indexed endpoint into the lower.
    pub fn contract_edge(&self, edge: usize) -> MarkedTree {
        let (a, b) = self.edges[edge];
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        let remap = |v: usize| {
            if v == gone {
                keep
            } else if v > gone {
                v - 1
            } else {
                v
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != edge)
            .map(|(_, &(x, y))| (remap(x), remap(y)))
            .collect();
        let mk = self.mk.iter().map(|&(m, v)| (m, remap(v))).collect();
        MarkedTree::new(self.nvert - 1, edges, mk)
    }

    /// Drop legs outside `keep`, then contract edges at low-valence vertices
    /// until stable. The result does not depend on the contraction order.
    pub fn stabilize(&self, keep: &[Mark]) -> MarkedTree {
        assert!(keep.len() >= 3, "need at least three retained legs");
        let keep_set: std::collections::BTreeSet<Mark> = keep.iter().cloned().collect();
        let mk = self
            .mk
            .iter()
            .filter(|&&(m, _)| keep_set.contains(&m))
            .cloned()
            .collect();
        let mut t = MarkedTree::new(self.nvert, self.edges.clone(), mk);
        loop {
            if t.nvert == 1 {
                return t;
            }
            let unstable = (0..t.nvert).find(|&v| t.valence(v) < 3);
            match unstable {
                None => return t,
                Some(v) => {
                    let e = t
                        .edges
                        .iter()
                        .position(|&(a, b)| a == v || b == v)
                        .expect("connected tree has an incident edge");
                    t = t.contract_edge(e);
                }
            }
        }
    }

    /// Canonical string encoding: lexicographically minimal rooted encoding
    /// over all roots. Isomorphism of marked trees is equality of encodings.
    pub fn canonical(&self) -> String {
        (0..self.nvert)
            .map(|r| self.encode_rooted(r))
            .min()
            .unwrap()
    }

    fn encode_rooted(&self, root: usize) -> String {
        let adj = self.adjacency();
        fn enc(
            t: &MarkedTree,
            adj: &[Vec<(usize, usize)>],
            v: usize,
            parent: usize,
        ) -> String {
            let mut legs = t.legs_at(v);
            legs.sort();
            let mut kids: Vec<String> = adj[v]
                .iter()
                .filter(|&&(u, _)| u != parent)
                .map(|&(u, _)| enc(t, adj, u, v))
                .collect();
            kids.sort();
            let legs_s: Vec<String> = legs.iter().map(|m| m.to_string()).collect();
            format!("({};{})", legs_s.join(","), kids.join(""))
        }
        enc(self, &adj, root, usize::MAX)
    }

    pub fn is_isomorphic_to(&self, other: &MarkedTree) -> bool {
        let mut m1 = self.marks();
        let mut m2 = other.marks();
        m1.sort();
        m2.sort();
        m1 == m2 && self.canonical() == other.canonical()
    }

    /// Relabel marks through a map; panics on missing entries.
    pub fn relabel(&self, map: &BTreeMap<Mark, Mark>) -> MarkedTree {
        let mk = self.mk.iter().map(|&(m, v)| (map[&m], v)).collect();
        MarkedTree::new(self.nvert, self.edges.clone(), mk)
    }
}

/// All stable S-marked trees up to isomorphism, ordered by edge count and
/// canonical encoding.
///
/// Grown one mark at a time: a stable tree on k+1 marks arises from one on k
/// marks either by hanging the new leg on an existing vertex or by splitting
/// a vertex and giving the new vertex the new leg plus some flags.
pub fn enumerate_stable_trees(marks: &[Mark]) -> Vec<MarkedTree> {
    assert!(marks.len() >= 3);
    let mut trees = vec![MarkedTree::single_vertex(&marks[..3])];
    for &m in &marks[3..] {
        let mut next: BTreeMap<String, MarkedTree> = BTreeMap::new();
        for t in &trees {
            for cand in extend_with_mark(t, m) {
                next.entry(cand.canonical()).or_insert(cand);
            }
        }
        trees = next.into_values().collect();
    }
    trees.sort_by_key(|t| (t.edges.len(), t.canonical()));
    trees
}

fn extend_with_mark(t: &MarkedTree, m: Mark) -> Vec<MarkedTree> {
    let mut out = Vec::new();
    // (a) new leg on an existing vertex
    for v in 0..t.nvert {
        let mut mk = t.mk.clone();
        mk.push((m, v));
        out.push(MarkedTree::new(t.nvert, t.edges.clone(), mk));
    }
    // (b) split a vertex: new vertex takes flag subset F (1 <= |F| <= val-2)
    for v in 0..t.nvert {
        // flags at v: incident edge indices and legs
        let edge_flags: Vec<usize> = (0..t.edges.len())
            .filter(|&i| t.edges[i].0 == v || t.edges[i].1 == v)
            .collect();
        let leg_flags: Vec<usize> = (0..t.mk.len()).filter(|&i| t.mk[i].1 == v).collect();
        let nf = edge_flags.len() + leg_flags.len();
        if nf < 3 {
            continue;
        }
        for mask in 1u32..(1 << nf) {
            let take = mask.count_ones() as usize;
            if take > nf - 2 {
                continue;
            }
            let new_v = t.nvert;
            let mut edges = t.edges.clone();
            let mut mk = t.mk.clone();
            for (bit, &ei) in edge_flags.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    let (a, b) = edges[ei];
                    edges[ei] = if a == v { (new_v, b) } else { (a, new_v) };
                }
            }
            for (bit, &li) in leg_flags.iter().enumerate() {
                if mask & (1 << (edge_flags.len() + bit)) != 0 {
                    mk[li].1 = new_v;
                }
            }
            edges.push((v, new_v));
            mk.push((m, new_v));
            out.push(MarkedTree::new(t.nvert + 1, edges, mk));
        }
    }
    out
}
