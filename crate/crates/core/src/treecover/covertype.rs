//! Combinatorial types of boundary strata: a pair of dual trees, the induced
//! tree map, and local degrees. The source tree of a type is forced by the
//! target tree together with the covering structure: the two totally ramified
//! legs span a chain of degree-d vertices covering the chain between the
//! images, and everything hanging off that chain appears in d interchangeable
//! copies. Enumeration therefore walks stable target trees and distributes
//! the marked preimages over copies.

use super::tree::{enumerate_stable_trees, Mark, MarkedTree, MARK_STAR};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// Image of the source marks: the star goes to the star, the ramified cycle
/// mark advances by one (cyclically) among the target marks.
pub fn phi_mark(n: usize, a: Mark) -> Mark {
    if a == MARK_STAR {
        MARK_STAR
    } else if a == 1 {
        2
    } else {
        let i = a as usize;
        (if i + 1 > n { 1 } else { i + 1 }) as Mark
    }
}

#[derive(Clone, Debug)]
pub struct BranchSpec {
    /// index into the path (which degree-d vertex the copies hang from)
    pub attach: usize,
    /// tau vertices of the branch in BFS order; [0] is the branch root
    pub tau_verts: Vec<usize>,
    /// for k >= 1, parent position (into tau_verts) of tau_verts[k]
    pub parent: Vec<usize>,
    /// sigma vertex ids: copies[c][k] lies over tau_verts[k]
    pub copies: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CombinatorialType {
    pub d: usize,
    pub n: usize,
    pub sigma: MarkedTree,
    pub tau: MarkedTree,
    /// sigma vertex -> tau vertex
    pub phi_v: Vec<usize>,
    /// sigma edge -> tau edge
    pub phi_e: Vec<usize>,
    pub deg_v: Vec<usize>,
    pub deg_e: Vec<usize>,
    /// sigma vertex ids of the degree-d chain, star end first
    pub path_sigma: Vec<usize>,
    /// tau vertex ids under the chain
    pub path_tau: Vec<usize>,
    pub branches: Vec<BranchSpec>,
    /// off-path mark -> copy index within its branch
    pub assignment: BTreeMap<Mark, usize>,
}

impl CombinatorialType {
    /// Stable identity string (decorated source tree plus target tree).
    pub fn signature(&self) -> String {
        let mut s = self.tau.canonical();
        s.push_str("||");
        s.push_str(&decorated_canonical(&self.sigma, &self.deg_v));
        s
    }

    /// Human-oriented one-line description of the target tree.
    pub fn tau_shape(&self) -> String {
        let mut parts: Vec<String> = (0..self.tau.nvert)
            .map(|v| {
                let mut legs: Vec<String> = self
                    .tau
                    .legs_at(v)
                    .iter()
                    .map(|&m| if m == MARK_STAR { "*".into() } else { m.to_string() })
                    .collect();
                legs.sort();
                legs.join("")
            })
            .collect();
        parts.sort();
        parts.join("|")
    }
}

fn decorated_canonical(t: &MarkedTree, deg_v: &[usize]) -> String {
    let adj = t.adjacency();
    fn enc(
        t: &MarkedTree,
        deg_v: &[usize],
        adj: &[Vec<(usize, usize)>],
        v: usize,
        parent: usize,
    ) -> String {
        let mut legs = t.legs_at(v);
        legs.sort();
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&(u, _)| u != parent)
            .map(|&(u, _)| enc(t, deg_v, adj, u, v))
            .collect();
        kids.sort();
        let legs_s: Vec<String> = legs.iter().map(|m| m.to_string()).collect();
        format!("(d{};{};{})", deg_v[v], legs_s.join(","), kids.join(""))
    }
    (0..t.nvert)
        .map(|r| enc(t, deg_v, &adj, r, usize::MAX))
        .min()
        .unwrap()
}

/// Builds the type over a stable target tree from a copy assignment of the
/// off-path marks. Returns None when the assignment is structurally
/// impossible (copy index out of range).
pub fn build_type(
    tau: &MarkedTree,
    d: usize,
    n: usize,
    assignment: &BTreeMap<Mark, usize>,
) -> Option<CombinatorialType> {
    let w_star = tau.mark_vertex(MARK_STAR)?;
    let w_b2 = tau.mark_vertex(2)?;
    let path_tau = tau.path_vertices(w_star, w_b2);
    let on_path = |w: usize| path_tau.contains(&w);

    // branches: connected components of tau minus the path
    let adj = tau.adjacency();
    let mut seen: Vec<bool> = (0..tau.nvert).map(on_path).collect();
    let mut branch_data: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new(); // (attach, verts, parent)
    for (pi, &w) in path_tau.iter().enumerate() {
        for &(u, _) in &adj[w] {
            if seen[u] {
                continue;
            }
            // BFS the branch rooted at u
            let mut verts = vec![u];
            let mut parent = vec![usize::MAX]; // root parent = path vertex
            seen[u] = true;
            let mut qi = 0;
            while qi < verts.len() {
                let v = verts[qi];
                for &(x, _) in &adj[v] {
                    if !seen[x] && !on_path(x) {
                        seen[x] = true;
                        parent.push(qi);
                        verts.push(x);
                    }
                }
                qi += 1;
            }
            branch_data.push((pi, verts, parent));
        }
    }

    // sigma: path vertices first, then branch copies
    let ell = path_tau.len() - 1;
    let mut nvert = ell + 1;
    let mut edges: Vec<(usize, usize)> = (0..ell).map(|i| (i, i + 1)).collect();
    let mut phi_e: Vec<usize> = (0..ell)
        .map(|i| tau_edge_index(tau, path_tau[i], path_tau[i + 1]))
        .collect();
    let mut deg_e: Vec<usize> = vec![d; ell];
    let mut phi_v: Vec<usize> = path_tau.clone();
    let mut deg_v: Vec<usize> = vec![d; ell + 1];
    let mut branches = Vec::new();

    for (attach, verts, parent) in &branch_data {
        let mut copies = Vec::new();
        for _copy in 0..d {
            let base = nvert;
            let ids: Vec<usize> = (0..verts.len()).map(|k| base + k).collect();
            nvert += verts.len();
            for (k, &w) in verts.iter().enumerate() {
                phi_v.push(w);
                deg_v.push(1);
                let (pv, ptau) = if k == 0 {
                    (*attach, path_tau[*attach])
                } else {
                    (ids[parent[k]], verts[parent[k]])
                };
                edges.push((pv, ids[k]));
                phi_e.push(tau_edge_index(tau, ptau, w));
                deg_e.push(1);
            }
            copies.push(ids);
        }
        branches.push(BranchSpec {
            attach: *attach,
            tau_verts: verts.clone(),
            parent: parent.clone(),
            copies,
        });
    }

    // marks
    let mut mk: Vec<(Mark, usize)> = vec![(MARK_STAR, 0), (1, ell)];
    for i in 2..=n {
        let a = i as Mark;
        let b = phi_mark(n, a);
        let w = tau.mark_vertex(b)?;
        if let Some(pi) = path_tau.iter().position(|&x| x == w) {
            mk.push((a, pi));
        } else {
            let copy = *assignment.get(&a)?;
            if copy >= d {
                return None;
            }
            let br = branches
                .iter()
                .find(|b| b.tau_verts.contains(&w))
                .expect("mark vertex in some branch");
            let k = br.tau_verts.iter().position(|&x| x == w).unwrap();
            mk.push((a, br.copies[copy][k]));
        }
    }

    let sigma = MarkedTree::new(nvert, edges, mk);
    Some(CombinatorialType {
        d,
        n,
        sigma,
        tau: tau.clone(),
        phi_v,
        phi_e,
        deg_v,
        deg_e,
        path_sigma: (0..=ell).collect(),
        path_tau,
        branches,
        assignment: assignment.clone(),
    })
}

fn tau_edge_index(tau: &MarkedTree, a: usize, b: usize) -> usize {
    tau.edges
        .iter()
        .position(|&(x, y)| (x == a && y == b) || (x == b && y == a))
        .expect("tau edge exists")
}

/// Checks the structural properties of a combinatorial type, returning the
/// list of violated clauses (empty = valid):
/// 1. the tree map is surjective on vertices and edges,
/// 2. marking compatibility, with the ramified legs on degree-d vertices,
/// 3. every target vertex/edge fiber has total degree d, including the
///    per-vertex local fiber condition,
/// 4. the degree-d vertices form exactly the chain between the two ramified
///    legs,
/// 5. each degree-d vertex carries exactly two degree-d flags,
/// 6. both trees are stable (the source counting its unmarked preimage
///    points).
pub fn validate_type(g: &CombinatorialType) -> Vec<usize> {
    let mut bad = BTreeSet::new();
    let d = g.d;
    let n = g.n;

    // graph homomorphism sanity folded into clause 1
    for (ei, &(a, b)) in g.sigma.edges.iter().enumerate() {
        let te = g.phi_e[ei];
        let (ta, tb) = g.tau.edges[te];
        let (ia, ib) = (g.phi_v[a], g.phi_v[b]);
        if !((ia == ta && ib == tb) || (ia == tb && ib == ta)) {
            bad.insert(1);
        }
    }
    let mut hit_v = vec![false; g.tau.nvert];
    for &w in &g.phi_v {
        hit_v[w] = true;
    }
    let mut hit_e = vec![false; g.tau.edges.len()];
    for &e in &g.phi_e {
        hit_e[e] = true;
    }
    if !hit_v.iter().all(|&x| x) || !hit_e.iter().all(|&x| x) {
        bad.insert(1);
    }

    // clause 2: marking compatibility and ramified legs
    for &(a, v) in &g.sigma.mk {
        let b = phi_mark(n, a);
        match g.tau.mark_vertex(b) {
            Some(w) if g.phi_v[v] == w => {}
            _ => {
                bad.insert(2);
            }
        }
    }
    for m in [MARK_STAR, 1 as Mark] {
        match g.sigma.mark_vertex(m) {
            Some(v) if g.deg_v[v] == d => {}
            _ => {
                bad.insert(2);
            }
        }
    }

    // clause 3: global fiber degrees and the local per-vertex condition
    for w in 0..g.tau.nvert {
        let total: usize = (0..g.sigma.nvert)
            .filter(|&v| g.phi_v[v] == w)
            .map(|v| g.deg_v[v])
            .sum();
        if total != d {
            bad.insert(3);
        }
    }
    for te in 0..g.tau.edges.len() {
        let total: usize = (0..g.sigma.edges.len())
            .filter(|&e| g.phi_e[e] == te)
            .map(|e| g.deg_e[e])
            .sum();
        if total != d {
            bad.insert(3);
        }
    }
    let tau_adj = g.tau.adjacency();
    for v in 0..g.sigma.nvert {
        let w = g.phi_v[v];
        for &(_, te) in &tau_adj[w] {
            let local: usize = g
                .sigma
                .edges
                .iter()
                .enumerate()
                .filter(|&(e, &(x, y))| (x == v || y == v) && g.phi_e[e] == te)
                .map(|(e, _)| g.deg_e[e])
                .sum();
            if local != g.deg_v[v] {
                bad.insert(3);
            }
        }
    }

    // clause 4: degree-d vertices are the chain between the ramified legs
    if let (Some(vs), Some(v1)) = (g.sigma.mark_vertex(MARK_STAR), g.sigma.mark_vertex(1)) {
        let path: BTreeSet<usize> = g.sigma.path_vertices(vs, v1).into_iter().collect();
        for v in 0..g.sigma.nvert {
            let should = path.contains(&v);
            if (g.deg_v[v] == d && d > 1) != should && d > 1 {
                bad.insert(4);
            }
            if d > 1 && should && g.deg_v[v] != d {
                bad.insert(4);
            }
        }
    } else {
        bad.insert(4);
    }

    // clause 5: exactly two degree-d flags at each degree-d vertex
    if d > 1 {
        for v in 0..g.sigma.nvert {
            if g.deg_v[v] != d {
                continue;
            }
            let mut count = 0;
            for (e, &(x, y)) in g.sigma.edges.iter().enumerate() {
                if (x == v || y == v) && g.deg_e[e] == d {
                    count += 1;
                }
            }
            for m in [MARK_STAR, 1 as Mark] {
                if g.sigma.mark_vertex(m) == Some(v) {
                    count += 1;
                }
            }
            if count != 2 {
                bad.insert(5);
            }
        }
    }

    // clause 6: stability
    if !g.tau.is_stable() {
        bad.insert(6);
    }
    for v in 0..g.sigma.nvert {
        if full_valence(g, v) < 3 {
            bad.insert(6);
        }
    }

    bad.into_iter().collect()
}

/// Valence of a source vertex counting every preimage of the target's special
/// points, marked or not. A degree-1 vertex sees each flag of its image once;
/// a degree-d vertex sees d preimages of each unramified leg.
fn full_valence(g: &CombinatorialType, v: usize) -> usize {
    let w = g.phi_v[v];
    let mut val = g
        .sigma
        .edges
        .iter()
        .filter(|&&(x, y)| x == v || y == v)
        .count();
    for b in g.tau.legs_at(w) {
        if b == MARK_STAR {
            if g.sigma.mark_vertex(MARK_STAR) == Some(v) {
                val += 1;
            }
        } else if b == 2 {
            if g.sigma.mark_vertex(1) == Some(v) {
                val += 1;
            }
        } else {
            val += g.deg_v[v];
        }
    }
    val
}

/// Necessary condition for a stratum to meet the closure of the curve: the
/// stabilized source and target trees agree as n-marked trees.
pub fn diagonal_filter(g: &CombinatorialType) -> bool {
    let keep: Vec<Mark> = (1..=g.n as Mark).collect();
    let s = g.sigma.stabilize(&keep);
    let t = g.tau.stabilize(&keep);
    s.is_isomorphic_to(&t)
}

/// Stabilized source tree on the cycle marks (shared with the target when the
/// diagonal filter passes).
pub fn stabilized_sigma(g: &CombinatorialType) -> MarkedTree {
    let keep: Vec<Mark> = (1..=g.n as Mark).collect();
    g.sigma.stabilize(&keep)
}

/// Number of boundary strata this shape represents once the root-of-unity
/// labels of the lifted marks are chosen: per branch, marks pinned to m
/// distinct copies admit (d-1)!/(d-m)! consistent phase assignments.
pub fn component_count(g: &CombinatorialType) -> u64 {
    let mut count = 1u64;
    for br in &g.branches {
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for (&mark, &copy) in &g.assignment {
            let b = phi_mark(g.n, mark);
            let w = g.tau.mark_vertex(b).unwrap();
            if br.tau_verts.contains(&w) {
                used.insert(copy);
            }
        }
        let m = used.len().max(1);
        let mut f = 1u64;
        for k in 0..(m - 1) {
            f *= (g.d - 1 - k) as u64;
        }
        count *= f;
    }
    count
}

#[derive(Clone, Debug)]
pub struct StratumRecord {
    pub ty: CombinatorialType,
    pub dimension: usize,
    pub component_count: u64,
    pub passes_diagonal: bool,
}

/// All valid combinatorial types for the given degree and period, up to
/// isomorphism, with filter results and stratum dimensions.
pub fn enumerate_types(d: usize, n: usize) -> Result<Vec<StratumRecord>, String> {
    if d < 2 || !(n == 4 || n == 5) {
        return Err(format!("unsupported (d, n) = ({}, {})", d, n));
    }
    let mut b_marks: Vec<Mark> = (1..=n as Mark).collect();
    b_marks.push(MARK_STAR);
    let taus = enumerate_stable_trees(&b_marks);

    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for tau in &taus {
        if tau.edges.is_empty() {
            continue; // interior stratum, not a boundary type
        }
        // group the off-path marks by branch; probe with everything on copy 0
        let w_star = tau.mark_vertex(MARK_STAR).unwrap();
        let w_b2 = tau.mark_vertex(2).unwrap();
        let path: Vec<usize> = tau.path_vertices(w_star, w_b2);
        let default_assignment: BTreeMap<Mark, usize> = (2..=n)
            .map(|i| i as Mark)
            .filter(|&a| {
                let w = tau.mark_vertex(phi_mark(n, a)).unwrap();
                !path.contains(&w)
            })
            .map(|a| (a, 0usize))
            .collect();
        let probe = build_type(tau, d, n, &default_assignment);
        let branches = match probe {
            Some(ref t) => t.branches.clone(),
            None => continue,
        };
        let mut branch_marks: Vec<Vec<Mark>> = vec![Vec::new(); branches.len()];
        for (&a, _) in &default_assignment {
            let w = tau.mark_vertex(phi_mark(n, a)).unwrap();
            let bi = branches
                .iter()
                .position(|b| b.tau_verts.contains(&w))
                .unwrap();
            branch_marks[bi].push(a);
        }
        // per-branch set partitions into at most d blocks, combined
        let partitions: Vec<Vec<BTreeMap<Mark, usize>>> = branch_marks
            .iter()
            .map(|marks| set_partitions_bounded(marks, d))
            .collect();
        let mut stack: Vec<BTreeMap<Mark, usize>> = vec![BTreeMap::new()];
        for branch_parts in &partitions {
            let mut next = Vec::new();
            for base in &stack {
                for p in branch_parts {
                    let mut merged = base.clone();
                    merged.extend(p.iter().map(|(&k, &v)| (k, v)));
                    next.push(merged);
                }
            }
            stack = next;
        }
        for assignment in stack {
            if let Some(ty) = build_type(tau, d, n, &assignment) {
                debug_assert!(validate_type(&ty).is_empty(), "constructed type invalid");
                let sig = ty.signature();
                if !seen.insert(sig) {
                    continue;
                }
                let dimension: usize = (0..tau.nvert).map(|w| tau.valence(w) - 3).sum();
                debug_assert_eq!(dimension, n - 2 - tau.edges.len());
                let passes = diagonal_filter(&ty);
                let cc = component_count(&ty);
                out.push(StratumRecord {
                    ty,
                    dimension,
                    component_count: cc,
                    passes_diagonal: passes,
                });
            }
        }
    }
    out.sort_by_key(|r| (r.ty.tau.edges.len(), r.ty.signature()));
    Ok(out)
}

/// All set partitions of `marks` into at most `max_blocks` blocks, encoded as
/// mark -> block index in restricted growth form.
fn set_partitions_bounded(marks: &[Mark], max_blocks: usize) -> Vec<BTreeMap<Mark, usize>> {
    if marks.is_empty() {
        return vec![BTreeMap::new()];
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; marks.len()];
    fn rec(
        marks: &[Mark],
        assign: &mut Vec<usize>,
        idx: usize,
        max_used: usize,
        max_blocks: usize,
        out: &mut Vec<BTreeMap<Mark, usize>>,
    ) {
        if idx == marks.len() {
            out.push(marks.iter().cloned().zip(assign.iter().cloned()).collect());
            return;
        }
        for b in 0..=(max_used + 1).min(max_blocks - 1) {
            assign[idx] = b;
            rec(marks, assign, idx + 1, max_used.max(b), max_blocks, out);
        }
    }
    rec(marks, &mut assign, 0, 0, max_blocks, &mut out);
    out
}

/// DOT rendering of a type: source row above target row, dashed arrows for
/// the tree map.
pub fn to_dot(g: &CombinatorialType) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph stratum {{");
    let _ = writeln!(s, "  rankdir=TB; node [shape=circle];");
    let label = |t: &MarkedTree, v: usize| -> String {
        let legs: Vec<String> = t
            .legs_at(v)
            .iter()
            .map(|&m| if m == MARK_STAR { "*".into() } else { m.to_string() })
            .collect();
        legs.join(",")
    };
    let _ = writeln!(s, "  subgraph cluster_sigma {{ label=\"source\";");
    for v in 0..g.sigma.nvert {
        let _ = writeln!(
            s,
            "    s{} [label=\"{}\"{}];",
            v,
            label(&g.sigma, v),
            if g.deg_v[v] == g.d && g.d > 1 { ", penwidth=2" } else { "" }
        );
    }
    for (e, &(a, b)) in g.sigma.edges.iter().enumerate() {
        let _ = writeln!(
            s,
            "    s{} -> s{} [dir=none{}];",
            a,
            b,
            if g.deg_e[e] == g.d && g.d > 1 { ", penwidth=2" } else { "" }
        );
    }
    let _ = writeln!(s, "  }}");
    let _ = writeln!(s, "  subgraph cluster_tau {{ label=\"target\";");
    for v in 0..g.tau.nvert {
        let _ = writeln!(s, "    t{} [label=\"{}\"];", v, label(&g.tau, v));
    }
    for &(a, b) in &g.tau.edges {
        let _ = writeln!(s, "    t{} -> t{} [dir=none];", a, b);
    }
    let _ = writeln!(s, "  }}");
    for v in 0..g.sigma.nvert {
        let _ = writeln!(s, "  s{} -> t{} [style=dashed, constraint=false];", v, g.phi_v[v]);
    }
    let _ = writeln!(s, "}}");
    s
}

pub fn to_csv(records: &[StratumRecord]) -> String {
    let mut s = String::from("index,tau_shape,tau_edges,dimension,component_count,passes_diagonal\n");
    for (i, r) in records.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            i,
            r.ty.tau_shape(),
            r.ty.tau.edges.len(),
            r.dimension,
            r.component_count,
            r.passes_diagonal
        );
    }
    s
}
