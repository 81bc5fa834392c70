//! Plumbing families: explicit one-parameter smoothings of a nodal marked
//! curve. Each vertex gets a chart with its node-to-parent at infinity; a
//! point at chart coordinate u, reached from the root along edges with node
//! positions c1..ck and smoothing parameters t1..tk, sits at
//! c1 + t1*(c2 + t2*(... + tk*u)) in the root chart.

use super::config::ModuliError;
use crate::exactnum::{Field, MPoly, Rational, VarTable};
use crate::treecover::{Mark, MarkedTree, MARK_STAR};
use std::collections::BTreeMap;

/// The per-edge smoothing parameters and chart coordinates of one plumbed
/// family, with every mark's position as a polynomial in those variables.
#[derive(Clone, Debug)]
pub struct PlumbingFamily<F: Field> {
    pub tree: MarkedTree,
    pub root: usize,
    pub vars: VarTable,
    /// variable index of the smoothing parameter of each tree edge
    pub t_var_of_edge: Vec<usize>,
    /// finite mark positions in the root chart
    pub positions: BTreeMap<Mark, MPoly<F>>,
    /// the mark placed at infinity in the root chart, if any
    pub at_infinity: Option<Mark>,
}

/// Builds the plumbing family of a marked tree with independent smoothing
/// parameters, one per edge.
///
/// The root is the vertex carrying the star mark when present (the star goes
/// to infinity); otherwise the first vertex carrying a leg, whose first leg
/// goes to infinity. Charts normalize their first two remaining flags to 0
/// and 1 (the root prefers marks 1 and 2 when it carries them); further flags
/// get fresh coordinates.
pub fn plumb(tree: &MarkedTree) -> Result<PlumbingFamily<Rational>, ModuliError> {
    plumb_in::<Rational>(tree)
}

pub fn plumb_in<F: Field>(tree: &MarkedTree) -> Result<PlumbingFamily<F>, ModuliError> {
    let root = tree
        .mark_vertex(MARK_STAR)
        .or_else(|| (0..tree.nvert).find(|&v| !tree.legs_at(v).is_empty()))
        .expect("tree carries at least one leg");

    let mut vars = VarTable::default();
    let mut t_var_of_edge = vec![usize::MAX; tree.edges.len()];
    for (i, _) in tree.edges.iter().enumerate() {
        t_var_of_edge[i] = vars.push(&format!("t{}", i + 1));
    }

    // First pass: assign chart coordinates per vertex flag.
    // flag = Leg(mark) or Edge(child edge index)
    #[derive(Clone, Copy, PartialEq)]
    enum Flag {
        Leg(Mark),
        Edge(usize),
    }
    // chart coordinate as a symbol: 0, 1, or a fresh variable
    #[derive(Clone, Copy)]
    enum Coord {
        Zero,
        One,
        Var(usize),
    }

    let adj = tree.adjacency();
    let mut chart: Vec<Vec<(Flag, Coord)>> = vec![Vec::new(); tree.nvert];
    let mut infinity_mark = None;

    // BFS from root, recording parent edges
    let mut order = vec![root];
    let mut parent_edge = vec![usize::MAX; tree.nvert];
    let mut seen = vec![false; tree.nvert];
    seen[root] = true;
    let mut qi = 0;
    while qi < order.len() {
        let v = order[qi];
        qi += 1;
        for &(u, e) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent_edge[u] = e;
                order.push(u);
            }
        }
    }

    for &v in &order {
        let mut flags: Vec<Flag> = Vec::new();
        let mut legs = tree.legs_at(v);
        legs.sort();
        // the root sends its star (or first leg) to infinity
        if v == root {
            let inf = if tree.mark_vertex(MARK_STAR) == Some(root) {
                MARK_STAR
            } else {
                legs[0]
            };
            infinity_mark = Some(inf);
            legs.retain(|&m| m != inf);
            // prefer marks 1 then 2 for the normalized slots
            legs.sort_by_key(|&m| (m != 1, m != 2, m));
        }
        for m in legs {
            flags.push(Flag::Leg(m));
        }
        for &(u, e) in &adj[v] {
            if parent_edge[u] == e {
                flags.push(Flag::Edge(e)); // u hangs below v through e
            }
        }
        for (k, f) in flags.into_iter().enumerate() {
            let coord = match k {
                0 => Coord::Zero,
                1 => Coord::One,
                _ => {
                    let name = match f {
                        Flag::Leg(m) => format!("c{}_{}", v, m),
                        Flag::Edge(e) => format!("c{}_e{}", v, e),
                    };
                    Coord::Var(vars.push(&name))
                }
            };
            chart[v].push((f, coord));
        }
    }

    let nvars = vars.len();
    let coord_poly = |c: Coord| -> MPoly<F> {
        match c {
            Coord::Zero => MPoly::zero(nvars),
            Coord::One => MPoly::one(nvars),
            Coord::Var(i) => MPoly::var(nvars, i),
        }
    };

    // Second pass: positions by nesting along root paths.
    // prefix(v) maps a chart polynomial at v to the root chart.
    fn position_of<F: Field>(
        tree: &MarkedTree,
        root: usize,
        v: usize,
        inner: MPoly<F>,
        parent_edge: &[usize],
        chart: &[Vec<(usize, MPoly<F>, usize)>],
        t_var_of_edge: &[usize],
        nvars: usize,
    ) -> MPoly<F> {
        if v == root {
            return inner;
        }
        let e = parent_edge[v];
        let (a, b) = tree.edges[e];
        let parent = if a == v { b } else { a };
        // node coordinate of e in the parent chart
        let c_e = chart[parent]
            .iter()
            .find(|&&(kind, _, id)| kind == 1 && id == e)
            .map(|(_, p, _)| p.clone())
            .expect("edge coordinate exists");
        let t = MPoly::var(nvars, t_var_of_edge[e]);
        let expr = c_e.add(&t.mul(&inner));
        position_of(tree, root, parent, expr, parent_edge, chart, t_var_of_edge, nvars)
    }

    // flatten the chart to (kind, poly, id): kind 0 = leg, 1 = edge
    let chart_flat: Vec<Vec<(usize, MPoly<F>, usize)>> = chart
        .iter()
        .map(|flags| {
            flags
                .iter()
                .map(|&(f, c)| match f {
                    Flag::Leg(m) => (0usize, coord_poly(c), m as usize),
                    Flag::Edge(e) => (1usize, coord_poly(c), e),
                })
                .collect()
        })
        .collect();

    let mut positions = BTreeMap::new();
    for &(m, v) in &tree.mk {
        if Some(m) == infinity_mark {
            continue;
        }
        let local = chart_flat[v]
            .iter()
            .find(|&&(kind, _, id)| kind == 0 && id == m as usize)
            .map(|(_, p, _)| p.clone())
            .expect("leg coordinate exists");
        let pos = position_of(
            tree,
            root,
            v,
            local,
            &parent_edge,
            &chart_flat,
            &t_var_of_edge,
            nvars,
        );
        positions.insert(m, pos);
    }

    Ok(PlumbingFamily {
        tree: tree.clone(),
        root,
        vars,
        t_var_of_edge,
        positions,
        at_infinity: infinity_mark,
    })
}

impl<F: Field> PlumbingFamily<F> {
    /// Cross-ratio of four marks as a pair (numerator, denominator) of
    /// polynomials in the family variables.
    pub fn cross_ratio_pair(&self, tuple: [Mark; 4]) -> (MPoly<F>, MPoly<F>) {
        let nvars = self.vars.len();
        let hom = |m: Mark| -> (MPoly<F>, MPoly<F>) {
            if Some(m) == self.at_infinity {
                (MPoly::one(nvars), MPoly::zero(nvars))
            } else {
                (self.positions[&m].clone(), MPoly::one(nvars))
            }
        };
        let det = |a: &(MPoly<F>, MPoly<F>), b: &(MPoly<F>, MPoly<F>)| -> MPoly<F> {
            a.0.mul(&b.1).sub(&b.0.mul(&a.1))
        };
        let p: Vec<_> = tuple.iter().map(|&m| hom(m)).collect();
        let num = det(&p[3], &p[1]).mul(&det(&p[2], &p[0]));
        let den = det(&p[3], &p[0]).mul(&det(&p[2], &p[1]));
        (num, den)
    }

    /// Order of vanishing of a cross-ratio in each edge parameter: the
    /// difference of minimal exponents between numerator and denominator.
    pub fn cross_ratio_orders(&self, tuple: [Mark; 4]) -> Vec<i64> {
        let (num, den) = self.cross_ratio_pair(tuple);
        let cn = num.monomial_content();
        let cd = den.monomial_content();
        self.t_var_of_edge
            .iter()
            .map(|&tv| cn[tv] as i64 - cd[tv] as i64)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::config::{boundary_cross_ratio, BoundaryCr};

    fn chain(leg_groups: &[&[Mark]]) -> MarkedTree {
        let n = leg_groups.len();
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        let mk = leg_groups
            .iter()
            .enumerate()
            .flat_map(|(v, g)| g.iter().map(move |&m| (m, v)))
            .collect();
        MarkedTree::new(n, edges, mk)
    }

    #[test]
    fn zero_edges_positions_are_chart_coordinates() {
        let t = MarkedTree::single_vertex(&[MARK_STAR, 1, 2, 3]);
        let f = plumb(&t).unwrap();
        assert_eq!(f.at_infinity, Some(MARK_STAR));
        assert!(f.positions[&1].is_zero());
        assert_eq!(f.positions[&2], MPoly::one(f.vars.len()));
        assert_eq!(f.positions[&3], MPoly::var(f.vars.len(), 0));
    }

    #[test]
    fn one_edge_positions_nest() {
        // star,1,2 on root; 4,5 on a child at node c
        let t = MarkedTree::new(
            2,
            vec![(0, 1)],
            vec![(MARK_STAR, 0), (1, 0), (2, 0), (4, 1), (5, 1)],
        );
        let f = plumb(&t).unwrap();
        let nv = f.vars.len();
        let t0 = MPoly::<Rational>::var(nv, f.t_var_of_edge[0]);
        // node coordinate of the child in the root chart is the third root
        // flag = a fresh variable; child legs sit at chart coords 0, 1
        let node = f.positions[&4].clone();
        assert_eq!(node.terms.len(), 1); // x4 = c + t*0 = c, a single variable
        assert_eq!(f.positions[&5], node.add(&t0)); // x5 = c + t*1
    }

    #[test]
    fn t_zero_reproduces_boundary_cross_ratios() {
        // exhaustive over 4-mark tuples on a couple of trees
        let trees = [
            chain(&[&[2], &[], &[], &[1, MARK_STAR], &[5], &[4], &[3]]),
            chain(&[&[5, 4], &[], &[1, MARK_STAR], &[2, 3], &[]]),
            chain(&[&[1, MARK_STAR, 2], &[3], &[4, 5]]),
        ];
        for tree in &trees {
            let f = plumb(tree).unwrap();
            let marks: Vec<Mark> = vec![1, 2, 3, 4, 5];
            for i in 0..5 {
                for j in 0..5 {
                    for k in 0..5 {
                        for l in 0..5 {
                            let tu = [marks[i], marks[j], marks[k], marks[l]];
                            let mut sorted = tu.to_vec();
                            sorted.sort();
                            sorted.dedup();
                            if sorted.len() != 4 {
                                continue;
                            }
                            let (num, den) = f.cross_ratio_pair(tu);
                            // divide by the joint monomial content first:
                            // the cross-ratio may vanish and pole along
                            // different boundary divisors simultaneously
                            let cn = num.monomial_content();
                            let cd = den.monomial_content();
                            let joint: Vec<u16> =
                                cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
                            let num = num.divide_monomial(&joint);
                            let den = den.divide_monomial(&joint);
                            let tvars: Vec<usize> = f.t_var_of_edge.clone();
                            let n0 = num.set_zero(&tvars);
                            let d0 = den.set_zero(&tvars);
                            let expect = boundary_cross_ratio(tree, tu);
                            match expect {
                                BoundaryCr::Interior => {
                                    assert!(!n0.is_zero() && !d0.is_zero());
                                }
                                BoundaryCr::Zero => {
                                    assert!(n0.is_zero() && !d0.is_zero(), "{:?}", tu);
                                }
                                BoundaryCr::Infinity => {
                                    assert!(!n0.is_zero() && d0.is_zero(), "{:?}", tu);
                                }
                                BoundaryCr::One => {
                                    assert!(
                                        !d0.is_zero() && n0.sub(&d0).is_zero(),
                                        "{:?}",
                                        tu
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_orders_count_separating_edges() {
        // order of CR(i1..i4) in each edge parameter equals 1 exactly when
        // the edge separates {i1,i3} from {i2,i4}
        let trees = [
            chain(&[&[2], &[], &[], &[1, MARK_STAR], &[5], &[4], &[3]]),
            chain(&[&[5, 4], &[], &[1, MARK_STAR], &[2, 3], &[]]),
        ];
        for tree in &trees {
            let f = plumb(tree).unwrap();
            let tuples = [
                [1 as Mark, 2, 3, 4],
                [1, 3, 5, 4],
                [2, 1, 3, 5],
                [1, 5, 3, 4],
                [4, 2, 5, 1],
                [3, 2, 4, 5],
            ];
            for tu in tuples {
                let orders = f.cross_ratio_orders(tu);
                for (e, &(a, b)) in tree.edges.iter().enumerate() {
                    let side = tree.edge_side(e, a);
                    let side_of = |m: Mark| side[tree.mark_vertex(m).unwrap()];
                    let split = |x: Mark, y: Mark, z: Mark, w: Mark| {
                        side_of(x) == side_of(y)
                            && side_of(z) == side_of(w)
                            && side_of(x) != side_of(z)
                    };
                    // zero along edges separating {i1,i3}|{i2,i4}, pole along
                    // those separating {i1,i4}|{i2,i3}, unit otherwise
                    let expect = if split(tu[0], tu[2], tu[1], tu[3]) {
                        1
                    } else if split(tu[0], tu[3], tu[1], tu[2]) {
                        -1
                    } else {
                        0
                    };
                    assert_eq!(
                        orders[e], expect,
                        "tuple {:?} edge {} ({},{})",
                        tu, e, a, b
                    );
                }
            }
        }
    }
}
