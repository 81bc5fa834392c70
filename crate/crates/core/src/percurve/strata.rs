//! Local families over boundary strata.
//!
//! The source curve of a stratum is plumbed with one smoothing parameter per
//! target-tree edge: the d nodes over a common target edge smooth together,
//! with the deck rotation relating the copies. Every mark position is an
//! honest polynomial in the smoothing parameters and the stratum moduli, the
//! lifted mark a_{i,k} sitting at zeta^k times the position of a_{i,0}. The
//! target configuration is read off by d-th powers, so no root extraction
//! ever enters the expansions.

use crate::exactnum::{solve_quadratic, Field, MPoly, NFElem, Rational, UPoly, VarTable};
use crate::treecover::{phi_mark, stabilized_sigma, CombinatorialType, Mark, MarkedTree, MARK_STAR};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A mark of the extended set: cycle marks, the star, or a lifted preimage.
#[derive(Clone, Copy, Debug)]
pub enum XMark {
    Cycle(Mark),
    Star,
    /// lifted preimage: zeta^k times the position of the cycle mark
    Lifted(Mark, usize),
}

#[derive(Clone)]
pub struct StratumFamily {
    pub ty: CombinatorialType,
    pub vars: VarTable,
    /// variable id of the smoothing parameter of each tau edge
    pub t_vars: Vec<usize>,
    /// stratum moduli variable ids
    pub s_vars: Vec<usize>,
    pub zeta: NFElem,
    /// positions of cycle marks 1..n (finite); the star is at infinity
    pub pos: Vec<MPoly<NFElem>>,
}

/// Phase choices per off-path mark (copy indices realizing the shape). The
/// default uses the construction's copy indices; other choices select the
/// other boundary strata the shape represents.
pub fn phase_assignments(ty: &CombinatorialType) -> Vec<BTreeMap<Mark, usize>> {
    let d = ty.d;
    let mut per_branch: Vec<Vec<BTreeMap<Mark, usize>>> = Vec::new();
    for br in &ty.branches {
        // copy-groups of this branch, ordered by smallest mark
        let mut groups: BTreeMap<usize, Vec<Mark>> = BTreeMap::new();
        for (&m, &c) in &ty.assignment {
            let w = ty.tau.mark_vertex(phi_mark(ty.n, m)).unwrap();
            if br.tau_verts.contains(&w) {
                groups.entry(c).or_default().push(m);
            }
        }
        let groups: Vec<Vec<Mark>> = groups.into_values().collect();
        if groups.is_empty() {
            per_branch.push(vec![BTreeMap::new()]);
            continue;
        }
        // first group pinned to phase 0, the rest injective into nonzero
        let m = groups.len();
        let mut choices: Vec<Vec<usize>> = vec![vec![0]];
        for _ in 1..m {
            let mut next = Vec::new();
            for c in &choices {
                for p in 1..d {
                    if !c.contains(&p) {
                        let mut cc = c.clone();
                        cc.push(p);
                        next.push(cc);
                    }
                }
            }
            choices = next;
        }
        let assigns = choices
            .into_iter()
            .map(|phases| {
                let mut map = BTreeMap::new();
                for (g, &p) in groups.iter().zip(&phases) {
                    for &mark in g {
                        map.insert(mark, p);
                    }
                }
                map
            })
            .collect();
        per_branch.push(assigns);
    }
    // product over branches
    let mut out: Vec<BTreeMap<Mark, usize>> = vec![BTreeMap::new()];
    for assigns in per_branch {
        let mut next = Vec::new();
        for base in &out {
            for a in &assigns {
                let mut merged = base.clone();
                merged.extend(a.iter().map(|(&k, &v)| (k, v)));
                next.push(merged);
            }
        }
        out = next;
    }
    out
}

/// Builds the family of the stratum with the given phases.
pub fn build_family(
    ty: &CombinatorialType,
    phases: &BTreeMap<Mark, usize>,
) -> Result<StratumFamily, String> {
    let d = ty.d;
    let n = ty.n;
    let zeta = NFElem::zeta(d).map_err(|e| e.to_string())?;
    let tau = &ty.tau;
    let path = &ty.path_tau;
    let _ell = path.len() - 1;

    let mut vars = VarTable::default();
    let mut t_vars = vec![usize::MAX; tau.edges.len()];
    for e in 0..tau.edges.len() {
        t_vars[e] = vars.push(&format!("t{}", e));
    }
    let mut s_vars = Vec::new();

    // coordinate symbols get resolved to polynomials once all vars exist
    #[derive(Clone, Copy)]
    enum Sym {
        Zero,
        One,
        Var(usize),
    }

    // per path vertex: ordered attachments (legs then branches), the first
    // getting the gauge value 1
    // leg coordinate per cycle mark on the path, branch base per branch id
    let mut leg_coord: BTreeMap<Mark, Sym> = BTreeMap::new();
    let mut branch_base: BTreeMap<usize, Sym> = BTreeMap::new();
    for (pi, &w) in path.iter().enumerate() {
        let mut attachments: Vec<(bool, usize, Mark)> = Vec::new(); // (is_branch, branch id, mark)
        let mut legs = tau.legs_at(w);
        legs.sort();
        for b in legs {
            if b == MARK_STAR || b == 2 {
                continue; // the ramified frame, fixed at infinity and zero
            }
            // cycle mark whose image is b
            let m = (2..=n as Mark)
                .chain(std::iter::once(1))
                .find(|&a| phi_mark(n, a) == b)
                .unwrap();
            attachments.push((false, 0, m));
        }
        for (bi, br) in ty.branches.iter().enumerate() {
            if br.attach == pi {
                attachments.push((true, bi, 0));
            }
        }
        for (k, &(is_branch, bi, m)) in attachments.iter().enumerate() {
            let sym = if k == 0 {
                Sym::One
            } else {
                let name = if is_branch {
                    format!("u{}", bi)
                } else {
                    format!("x{}", m)
                };
                let v = vars.push(&name);
                s_vars.push(v);
                Sym::Var(v)
            };
            if is_branch {
                branch_base.insert(bi, sym);
            } else {
                leg_coord.insert(m, sym);
            }
        }
    }

    // branch-internal slots: per branch vertex, per flag (legs then child
    // edges), first two normalized to 0 and 1
    // slot of a leg b at branch vertex, and of a child edge
    let mut leg_slot: BTreeMap<(usize, Mark), Sym> = BTreeMap::new(); // (branch, b-mark)
    let mut edge_slot: BTreeMap<(usize, usize), Sym> = BTreeMap::new(); // (branch, tau edge)
    for (bi, br) in ty.branches.iter().enumerate() {
        for (k, &w) in br.tau_verts.iter().enumerate() {
            let mut flags: Vec<(bool, usize, Mark)> = Vec::new();
            let mut legs = tau.legs_at(w);
            legs.sort();
            for b in legs {
                flags.push((false, 0, b));
            }
            // child edges within the branch
            for (ck, &cw) in br.tau_verts.iter().enumerate() {
                if br.parent[ck] == k {
                    let e = tau
                        .edges
                        .iter()
                        .position(|&(x, y)| (x == w && y == cw) || (x == cw && y == w))
                        .unwrap();
                    flags.push((true, e, 0));
                }
            }
            for (fk, &(is_edge, e, b)) in flags.iter().enumerate() {
                let sym = match fk {
                    0 => Sym::Zero,
                    1 => Sym::One,
                    _ => {
                        let name = if is_edge {
                            format!("w{}_{}", bi, e)
                        } else {
                            format!("s{}_{}", bi, b)
                        };
                        let v = vars.push(&name);
                        s_vars.push(v);
                        Sym::Var(v)
                    }
                };
                if is_edge {
                    edge_slot.insert((bi, e), sym);
                } else {
                    leg_slot.insert((bi, b), sym);
                }
            }
        }
    }

    let nv = vars.len();
    let poly_of = |s: Sym| -> MPoly<NFElem> {
        match s {
            Sym::Zero => MPoly::zero(nv),
            Sym::One => MPoly::one(nv),
            Sym::Var(v) => MPoly::var(nv, v),
        }
    };
    let tvar = |e: usize| MPoly::<NFElem>::var(nv, t_vars[e]);
    // path prefix: product of the path-edge parameters above level i
    let prefix = |pi: usize| -> MPoly<NFElem> {
        let mut p = MPoly::one(nv);
        for i in 0..pi {
            let e = tau
                .edges
                .iter()
                .position(|&(x, y)| {
                    (x == path[i] && y == path[i + 1]) || (x == path[i + 1] && y == path[i])
                })
                .unwrap();
            p = p.mul(&tvar(e));
        }
        p
    };

    // nested branch position: from the branch base down to a leg slot
    let branch_pos = |bi: usize, b: Mark| -> MPoly<NFElem> {
        let br = &ty.branches[bi];
        let w = tau.mark_vertex(b).unwrap();
        let k = br.tau_verts.iter().position(|&x| x == w).unwrap();
        // chain of branch vertices from root to k
        let mut chain = vec![k];
        let mut cur = k;
        while br.parent[cur] != usize::MAX {
            cur = br.parent[cur];
            chain.push(cur);
        }
        chain.reverse(); // root .. k
        // innermost: the leg slot
        let mut expr = poly_of(leg_slot[&(bi, b)]);
        // walk back up through edges (child of chain[j] is chain[j+1])
        for j in (0..chain.len() - 1).rev() {
            let wj = br.tau_verts[chain[j]];
            let wc = br.tau_verts[chain[j + 1]];
            let e = tau
                .edges
                .iter()
                .position(|&(x, y)| (x == wj && y == wc) || (x == wc && y == wj))
                .unwrap();
            let node = poly_of(edge_slot[&(bi, e)]);
            expr = node.add(&tvar(e).mul(&expr));
        }
        // root edge of the branch
        let root_w = br.tau_verts[0];
        let attach_w = path[br.attach];
        let e = tau
            .edges
            .iter()
            .position(|&(x, y)| (x == root_w && y == attach_w) || (x == attach_w && y == root_w))
            .unwrap();
        poly_of(branch_base[&bi]).add(&tvar(e).mul(&expr))
    };

    // positions of the cycle marks
    let mut pos = Vec::with_capacity(n);
    for m in 1..=(n as Mark) {
        if m == 1 {
            pos.push(MPoly::zero(nv));
            continue;
        }
        let b = phi_mark(n, m);
        let w = tau.mark_vertex(b).unwrap();
        if let Some(pi) = path.iter().position(|&x| x == w) {
            let base = poly_of(leg_coord[&m]);
            pos.push(prefix(pi).mul(&base));
        } else {
            let bi = ty
                .branches
                .iter()
                .position(|br| br.tau_verts.contains(&w))
                .unwrap();
            let r = *phases.get(&m).unwrap_or(&0);
            let zr = zeta.pow(r as u32);
            let p = branch_pos(bi, b);
            let scaled = p.scale(&zr);
            pos.push(prefix(ty.branches[bi].attach).mul(&scaled));
        }
    }

    Ok(StratumFamily {
        ty: ty.clone(),
        vars,
        t_vars,
        s_vars,
        zeta,
        pos,
    })
}

impl StratumFamily {
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn hom(&self, m: XMark) -> (MPoly<NFElem>, MPoly<NFElem>) {
        let nv = self.nvars();
        match m {
            XMark::Star => (MPoly::one(nv), MPoly::zero(nv)),
            XMark::Cycle(i) => (self.pos[i as usize - 1].clone(), MPoly::one(nv)),
            XMark::Lifted(i, k) => (
                self.pos[i as usize - 1].scale(&self.zeta.pow(k as u32)),
                MPoly::one(nv),
            ),
        }
    }

    fn hom_target(&self, j: Mark) -> (MPoly<NFElem>, MPoly<NFElem>) {
        // target mark b_j at the d-th power of its marked preimage; b_star at
        // infinity (never needed by the diagonal equations)
        let n = self.ty.n;
        let i = if j == 1 { n } else { j as usize - 1 };
        (self.pos[i - 1].pow(self.ty.d), MPoly::one(self.nvars()))
    }

    /// Cross-ratio of four extended source marks as a (num, den) pair.
    pub fn source_cr_pair(&self, tuple: [XMark; 4]) -> (MPoly<NFElem>, MPoly<NFElem>) {
        let p: Vec<_> = tuple.iter().map(|&m| self.hom(m)).collect();
        cr_of_pairs(&p)
    }

    /// Cross-ratio of four target marks as a (num, den) pair.
    pub fn target_cr_pair(&self, tuple: [Mark; 4]) -> (MPoly<NFElem>, MPoly<NFElem>) {
        let p: Vec<_> = tuple.iter().map(|&m| self.hom_target(m)).collect();
        cr_of_pairs(&p)
    }

    /// Target cross-ratio allowing the target star (at infinity) in a slot.
    pub fn target_cr_pair_with_star(
        &self,
        tuple: [Option<Mark>; 4],
    ) -> (MPoly<NFElem>, MPoly<NFElem>) {
        let nv = self.nvars();
        let p: Vec<_> = tuple
            .iter()
            .map(|m| match m {
                Some(mm) => self.hom_target(*mm),
                None => (MPoly::one(nv), MPoly::zero(nv)),
            })
            .collect();
        cr_of_pairs(&p)
    }

    /// Vanishing order of a cross-ratio pair in each smoothing parameter.
    pub fn pair_orders(&self, pair: &(MPoly<NFElem>, MPoly<NFElem>)) -> Vec<i64> {
        let cn = pair.0.monomial_content();
        let cd = pair.1.monomial_content();
        self.t_vars
            .iter()
            .map(|&tv| cn[tv] as i64 - cd[tv] as i64)
            .collect()
    }

    /// Diagonal equation for one coordinate tuple, cleared to a polynomial
    /// and divided by its monomial content.
    pub fn diagonal_equation(&self, tuple: [Mark; 4]) -> MPoly<NFElem> {
        let src = self.source_cr_pair([
            XMark::Cycle(tuple[0]),
            XMark::Cycle(tuple[1]),
            XMark::Cycle(tuple[2]),
            XMark::Cycle(tuple[3]),
        ]);
        let tgt = self.target_cr_pair(tuple);
        let e = src.0.mul(&tgt.1).sub(&tgt.0.mul(&src.1));
        let content = e.monomial_content();
        e.divide_monomial(&content)
    }

    /// The adapted coordinate tuples for the stabilized tree: one smoothing
    /// tuple per edge, and valence-3 fewer cross-ratio tuples per vertex.
    pub fn adapted_tuples(&self) -> Vec<[Mark; 4]> {
        adapted_tuples_for(&stabilized_sigma(&self.ty))
    }

    /// All diagonal equations for the adapted tuples.
    pub fn equations(&self) -> Vec<MPoly<NFElem>> {
        self.adapted_tuples()
            .into_iter()
            .map(|t| self.diagonal_equation(t))
            .collect()
    }
}

fn cr_of_pairs(p: &[(MPoly<NFElem>, MPoly<NFElem>)]) -> (MPoly<NFElem>, MPoly<NFElem>) {
    let det = |a: &(MPoly<NFElem>, MPoly<NFElem>), b: &(MPoly<NFElem>, MPoly<NFElem>)| {
        a.0.mul(&b.1).sub(&b.0.mul(&a.1))
    };
    let num = det(&p[3], &p[1]).mul(&det(&p[2], &p[0]));
    let den = det(&p[3], &p[0]).mul(&det(&p[2], &p[1]));
    (num, den)
}

/// Canonical node-smoothing and vertex cross-ratio tuples adapted to a
/// stabilized marked tree.
pub fn adapted_tuples_for(stab: &MarkedTree) -> Vec<[Mark; 4]> {
    let mut out = Vec::new();
    // directions at a vertex: each leg by itself, each incident edge by the
    // legs beyond it; representative = smallest leg
    let directions = |v: usize, skip_edge: Option<usize>| -> Vec<Vec<Mark>> {
        let mut dirs: Vec<Vec<Mark>> = stab.legs_at(v).into_iter().map(|m| vec![m]).collect();
        for (e, &(a, b)) in stab.edges.iter().enumerate() {
            if Some(e) == skip_edge || (a != v && b != v) {
                continue;
            }
            let other = if a == v { b } else { a };
            let side = stab.edge_side(e, other);
            let legs: Vec<Mark> = stab
                .mk
                .iter()
                .filter(|&&(_, u)| side[u])
                .map(|&(m, _)| m)
                .collect();
            dirs.push(legs);
        }
        let mut dirs: Vec<Vec<Mark>> = dirs
            .into_iter()
            .map(|mut l| {
                l.sort();
                l
            })
            .collect();
        dirs.sort();
        dirs
    };
    for (e, &(v1, v2)) in stab.edges.iter().enumerate() {
        let d1 = directions(v1, Some(e));
        let d2 = directions(v2, Some(e));
        out.push([d1[0][0], d2[0][0], d1[1][0], d2[1][0]]);
    }
    for v in 0..stab.nvert {
        let dirs = directions(v, None);
        let m = dirs.len();
        for i in 0..m.saturating_sub(3) {
            out.push([dirs[0][0], dirs[1][0], dirs[2][0], dirs[3 + i][0]]);
        }
    }
    out
}

/// Exact point on a stratum: values of the stratum moduli over a field.
#[derive(Clone, Debug)]
pub struct StratumPoint {
    pub field: Option<Arc<crate::exactnum::NumberField>>,
    /// values aligned with the family's s_vars
    pub values: Vec<NFElem>,
}

/// Outcome of the local analysis at one stratum.
#[derive(Debug)]
pub enum StratumOutcome {
    /// transverse points of the curve closure on the stratum
    Points(Vec<StratumPoint>),
    /// the stratum does not meet the curve closure
    Empty { reason: String },
    /// solutions exist beyond the supported quadratic extensions
    Unresolved { polynomial: String },
}

/// Substitute the solution values for the s-variables and zero for the
/// t-variables into a polynomial, returning a field element.
pub fn eval_at_point(
    fam: &StratumFamily,
    p: &MPoly<NFElem>,
    pt: &StratumPoint,
) -> NFElem {
    let mut vals = vec![NFElem::zero(); fam.nvars()];
    for (k, &sv) in fam.s_vars.iter().enumerate() {
        vals[sv] = pt.values[k].clone();
    }
    p.eval_map(&vals, &|c| c.clone())
}

/// Gradient of an equation at a stratum point (t = 0), over all variables.
fn gradient_at(fam: &StratumFamily, e: &MPoly<NFElem>, pt: &StratumPoint) -> Vec<NFElem> {
    (0..fam.nvars())
        .map(|v| eval_at_point(fam, &e.partial(v), pt))
        .collect()
}

/// Branch test: the equations cut a smooth curve germ at the point, and that
/// germ is not contained in any boundary divisor.
///
/// The Jacobian must have corank one. When the kernel direction has all
/// smoothing components nonzero the branch is transverse to every boundary
/// divisor and we are done. A vanishing component may still mean simple
/// tangency rather than containment, so the germ is lifted as a power series
/// along the kernel direction and each smoothing parameter is required to be
/// nonzero as a series.
pub fn kernel_test(fam: &StratumFamily, eqs: &[MPoly<NFElem>], pt: &StratumPoint) -> bool {
    let rows: Vec<Vec<NFElem>> = eqs.iter().map(|e| gradient_at(fam, e, pt)).collect();
    let Some(kernel) = kernel_vector(&rows) else {
        return false; // corank != 1: not a reduced transverse point
    };
    if fam.t_vars.iter().all(|&tv| !kernel[tv].is_zero()) {
        return true;
    }
    branch_lift_test(fam, eqs, pt, &rows, &kernel, 6)
}

/// Nullspace generator of the gradient rows, when the corank is one.
fn kernel_vector(rows: &[Vec<NFElem>]) -> Option<Vec<NFElem>> {
    let m = rows.len();
    let n = rows[0].len();
    let mut a: Vec<Vec<NFElem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let mut pr = None;
        for i in r..m {
            if !a[i][c].is_zero() {
                pr = Some(i);
                break;
            }
        }
        let Some(pr) = pr else { continue };
        a.swap(r, pr);
        let inv = a[r][c].inv().unwrap();
        for x in 0..n {
            a[r][x] = a[r][x].mul(&inv);
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for x in 0..n {
                    let t = f.mul(&a[r][x]);
                    a[i][x] = a[i][x].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if n - r != 1 {
        return None;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let fc = free[0];
    let mut kernel = vec![NFElem::zero(); n];
    kernel[fc] = NFElem::one();
    for (ri, &pc) in pivots.iter().enumerate() {
        kernel[pc] = a[ri][fc].neg();
    }
    Some(kernel)
}

const LIFT_ORDER: usize = 6;

/// Lift the curve germ as a power series in the kernel direction and check
/// every smoothing parameter is nonzero along it (simple tangency passes,
/// containment in a boundary divisor fails).
fn branch_lift_test(
    fam: &StratumFamily,
    eqs: &[MPoly<NFElem>],
    pt: &StratumPoint,
    rows: &[Vec<NFElem>],
    kernel: &[NFElem],
    order: usize,
) -> bool {
    let order = order.max(LIFT_ORDER);
    let nv = fam.nvars();
    // pivot variable: parametrize by one coordinate where the kernel is
    // nonzero; solve for the rest
    let pivot = (0..nv).find(|&v| !kernel[v].is_zero()).unwrap();
    let others: Vec<usize> = (0..nv).filter(|&v| v != pivot).collect();
    // Jacobian block on the other columns must be invertible
    let jb: Vec<Vec<NFElem>> = rows
        .iter()
        .map(|r| others.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let Some(jb_inv) = invert_matrix(&jb) else { return false };

    // base point values per variable
    let base = |v: usize| -> NFElem {
        fam.s_vars
            .iter()
            .position(|&sv| sv == v)
            .map(|k| pt.values[k].clone())
            .unwrap_or_else(NFElem::zero)
    };
    // series per variable: z_v(eps) = base + kernel_v * eps + higher
    let mut series: Vec<Vec<NFElem>> = (0..nv)
        .map(|v| {
            let mut s = vec![NFElem::zero(); order + 1];
            s[0] = base(v);
            s[1] = kernel[v].clone();
            s
        })
        .collect();
    // Newton with the constant Jacobian gains one order per sweep
    for _ in 0..order {
        let residuals: Vec<Vec<NFElem>> = eqs
            .iter()
            .map(|e| eval_poly_series(e, &series, order))
            .collect();
        if residuals.iter().all(|r| r.iter().all(|c| c.is_zero())) {
            break;
        }
        for (i, &v) in others.iter().enumerate() {
            for k in 0..=order {
                let mut corr = NFElem::zero();
                for (j, r) in residuals.iter().enumerate() {
                    corr = corr.add(&jb_inv[i][j].mul(&r[k]));
                }
                series[v][k] = series[v][k].sub(&corr);
            }
        }
    }
    // require convergence to the asked order
    let final_res: Vec<Vec<NFElem>> = eqs
        .iter()
        .map(|e| eval_poly_series(e, &series, order))
        .collect();
    if final_res
        .iter()
        .any(|r| r.iter().take(order).any(|c| !c.is_zero()))
    {
        return false;
    }
    fam.t_vars
        .iter()
        .all(|&tv| series[tv].iter().any(|c| !c.is_zero()))
}

fn invert_matrix(m: &[Vec<NFElem>]) -> Option<Vec<Vec<NFElem>>> {
    let n = m.len();
    let mut a: Vec<Vec<NFElem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { NFElem::one() } else { NFElem::zero() });
            }
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, pr);
        let inv = a[c][c].inv()?;
        for x in 0..2 * n {
            a[c][x] = a[c][x].mul(&inv);
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for x in 0..2 * n {
                    let t = f.mul(&a[c][x]);
                    a[i][x] = a[i][x].sub(&t);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Evaluate a polynomial on truncated power series, coefficient field shared.
fn eval_poly_series(
    p: &MPoly<NFElem>,
    series: &[Vec<NFElem>],
    order: usize,
) -> Vec<NFElem> {
    let mul = |a: &[NFElem], b: &[NFElem]| -> Vec<NFElem> {
        let mut out = vec![NFElem::zero(); order + 1];
        for i in 0..=order {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                let t = a[i].mul(&b[j]);
                out[i + j] = out[i + j].add(&t);
            }
        }
        out
    };
    let mut acc = vec![NFElem::zero(); order + 1];
    for (e, c) in &p.terms {
        let mut term = vec![NFElem::zero(); order + 1];
        term[0] = c.clone();
        for (v, &k) in e.iter().enumerate() {
            for _ in 0..k {
                term = mul(&term, &series[v]);
            }
        }
        for i in 0..=order {
            acc[i] = acc[i].add(&term[i]);
        }
    }
    acc
}

/// Checks the limit configuration at a stratum point stays non-degenerate:
/// on every component all special points remain distinct.
pub fn config_valid_at(fam: &StratumFamily, pt: &StratumPoint) -> bool {
    let d = fam.ty.d as u32;
    let n = fam.ty.n;
    let tau = &fam.ty.tau;
    let path = &fam.ty.path_tau;
    // Reconstruct per-path-vertex attachment coordinates by evaluating the
    // positions with all deeper smoothing parameters zero. Simpler: evaluate
    // pairwise distinctness of the d-th powers of path-level structures.
    // Structures at path level pi: marks m with image leg on path[pi], and
    // branch bases attached there.
    for (pi, &w) in path.iter().enumerate() {
        let mut powers: Vec<NFElem> = Vec::new();
        // marks whose image sits on this path vertex
        for m in 2..=(n as Mark) {
            let b = phi_mark(n, m);
            if tau.mark_vertex(b) == Some(w) {
                let mut vals = vec![NFElem::zero(); fam.nvars()];
                for (k, &sv) in fam.s_vars.iter().enumerate() {
                    vals[sv] = pt.values[k].clone();
                }
                // strip the path prefix by setting path-edge params to 1
                for i in 0..pi {
                    let e = tau
                        .edges
                        .iter()
                        .position(|&(x, y)| {
                            (x == path[i] && y == path[i + 1]) || (x == path[i + 1] && y == path[i])
                        })
                        .unwrap();
                    vals[fam.t_vars[e]] = NFElem::one();
                }
                let v = fam.pos[m as usize - 1].eval_map(&vals, &|c| c.clone());
                if v.is_zero() {
                    return false; // collides with the ramified point at 0
                }
                powers.push(v.pow(d));
            }
        }
        // branch bases at this level
        for (bi, br) in fam.ty.branches.iter().enumerate() {
            if br.attach != pi {
                continue;
            }
            // base coordinate: named u{bi}, or the gauge value 1
            let name = format!("u{}", bi);
            let v = match fam.vars.names.iter().position(|s| s == &name) {
                Some(vid) => {
                    let k = fam.s_vars.iter().position(|&sv| sv == vid).unwrap();
                    pt.values[k].clone()
                }
                None => NFElem::one(),
            };
            if v.is_zero() {
                return false;
            }
            powers.push(v.pow(d));
        }
        for i in 0..powers.len() {
            for j in i + 1..powers.len() {
                if powers[i] == powers[j] {
                    return false; // two orbits collide
                }
            }
        }
    }
    // branch charts: the fresh slot coordinates must stay distinct from the
    // normalized 0 and 1 slots and from each other
    for (bi, br) in fam.ty.branches.iter().enumerate() {
        for (k, &w) in br.tau_verts.iter().enumerate() {
            let mut coords: Vec<NFElem> = vec![NFElem::zero(), NFElem::one()];
            for b in tau.legs_at(w) {
                let name = format!("s{}_{}", bi, b);
                if let Some(vid) = fam.vars.names.iter().position(|s| s == &name) {
                    let si = fam.s_vars.iter().position(|&sv| sv == vid).unwrap();
                    coords.push(pt.values[si].clone());
                }
            }
            for (ck, _) in br.tau_verts.iter().enumerate() {
                if br.parent[ck] == k {
                    let wc = br.tau_verts[ck];
                    let e = tau
                        .edges
                        .iter()
                        .position(|&(x, y)| (x == w && y == wc) || (x == wc && y == w))
                        .unwrap();
                    let name = format!("w{}_{}", bi, e);
                    if let Some(vid) = fam.vars.names.iter().position(|s| s == &name) {
                        let si = fam.s_vars.iter().position(|&sv| sv == vid).unwrap();
                        coords.push(pt.values[si].clone());
                    }
                }
            }
            for i in 0..coords.len() {
                for j in i + 1..coords.len() {
                    if coords[i] == coords[j] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Solves the on-stratum system: leading coefficients of the diagonal
/// equations restricted to the stratum, solved exactly over the rationals or
/// a quadratic extension, each solution then passing the transversality and
/// non-degeneracy tests.
pub fn analyze_stratum(fam: &StratumFamily) -> StratumOutcome {
    let eqs = fam.equations();
    let t_list: Vec<usize> = fam.t_vars.clone();
    let leading: Vec<MPoly<NFElem>> = eqs.iter().map(|e| e.set_zero(&t_list)).collect();

    match fam.s_vars.len() {
        0 => {
            if leading.iter().any(|g| !g.is_zero()) {
                return StratumOutcome::Empty {
                    reason: "leading system inconsistent at the point stratum".into(),
                };
            }
            let pt = StratumPoint { field: None, values: vec![] };
            if kernel_test(fam, &eqs, &pt) && config_valid_at(fam, &pt) {
                StratumOutcome::Points(vec![pt])
            } else {
                StratumOutcome::Empty {
                    reason: "curve branch stays inside the boundary".into(),
                }
            }
        }
        1 => {
            let sv = fam.s_vars[0];
            let nonzero: Vec<&MPoly<NFElem>> = leading.iter().filter(|g| !g.is_zero()).collect();
            if nonzero.is_empty() {
                return StratumOutcome::Empty {
                    reason: "no on-stratum equation survives; excess dimension".into(),
                };
            }
            let mut polys: Vec<UPoly<NFElem>> = nonzero
                .iter()
                .map(|g| to_univariate(g, sv))
                .collect();
            let mut g = polys.pop().unwrap();
            for p in polys {
                g = g.gcd(&p);
            }
            if g.degree().unwrap_or(0) == 0 {
                return StratumOutcome::Empty {
                    reason: "on-stratum equations have no common zero".into(),
                };
            }
            solve_univariate_and_test(fam, &eqs, &g, sv)
        }
        2 => {
            let nonzero: Vec<&MPoly<NFElem>> = leading.iter().filter(|g| !g.is_zero()).collect();
            if nonzero.len() < 2 {
                return StratumOutcome::Empty {
                    reason: "underdetermined on-stratum system".into(),
                };
            }
            solve_bivariate_and_test(fam, &eqs, nonzero[0], nonzero[1], &leading)
        }
        k => StratumOutcome::Unresolved {
            polynomial: format!("{}-dimensional stratum solving not supported", k),
        },
    }
}

fn to_univariate(g: &MPoly<NFElem>, var: usize) -> UPoly<NFElem> {
    let coeffs = g.coeffs_in(var);
    UPoly::new(
        coeffs
            .into_iter()
            .map(|c| c.constant_value().expect("univariate in the stratum variable"))
            .collect(),
    )
}

/// Exact roots of a polynomial over Q inside Q or a quadratic extension:
/// (roots, fields, leftover degree).
pub fn exact_roots(
    p: &UPoly<NFElem>,
) -> (Vec<(NFElem, Option<Arc<crate::exactnum::NumberField>>)>, Option<String>) {
    // require rational coefficients
    let rat: Option<Vec<Rational>> = p.coeffs.iter().map(|c| c.is_rational()).collect();
    let Some(coeffs) = rat else {
        // cyclotomic base: extract linear factors by checking candidate roots
        // from the low-degree structure
        return nf_linear_roots(p);
    };
    let mut q = UPoly::new(coeffs);
    let mut roots = Vec::new();
    // rational roots by the rational root theorem on the primitive part
    loop {
        let Some(r) = find_rational_root(&q) else { break };
        roots.push((NFElem::Rat(r.clone()), None));
        let lin = UPoly::new(vec![r.neg(), Rational::one()]);
        q = q.div_rem(&lin).0;
        if q.degree().unwrap_or(0) == 0 {
            break;
        }
    }
    match q.degree().unwrap_or(0) {
        0 => (roots, None),
        2 => {
            let (r1, r2, field) =
                solve_quadratic(&q.coeffs[2], &q.coeffs[1], &q.coeffs[0]).expect("quadratic field");
            roots.push((r1, field.clone()));
            roots.push((r2, field));
            (roots, None)
        }
        _ => (roots, Some(q.to_string_var("s"))),
    }
}

fn find_rational_root(p: &UPoly<Rational>) -> Option<Rational> {
    use num_bigint::BigInt;
    let deg = p.degree()?;
    if deg == 0 {
        return None;
    }
    // clear denominators to a primitive integer polynomial
    let mut lcm = BigInt::from(1);
    for c in &p.coeffs {
        let den = c.denom().clone();
        let g = num_integer::Integer::gcd(&lcm, &den);
        lcm = lcm / g * den;
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let lead = ints[deg].clone();
    let mut low = 0;
    while ints[low] == BigInt::from(0) {
        low += 1;
        if low == deg {
            return Some(Rational::zero());
        }
    }
    if low > 0 {
        return Some(Rational::zero());
    }
    let c0 = ints[0].clone();
    let divisors = |x: &BigInt| -> Vec<BigInt> {
        let mut out = Vec::new();
        let ax = if x < &BigInt::from(0) { -x.clone() } else { x.clone() };
        let mut k = BigInt::from(1);
        while &k * &k <= ax {
            if (&ax % &k) == BigInt::from(0) {
                out.push(k.clone());
                out.push(&ax / &k);
            }
            k += 1;
        }
        out
    };
    for pnum in divisors(&c0) {
        for pden in divisors(&lead) {
            for sign in [1i64, -1] {
                let cand = Rational(num_rational::BigRational::new(
                    &pnum * BigInt::from(sign),
                    pden.clone(),
                ));
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn nf_linear_roots(
    p: &UPoly<NFElem>,
) -> (Vec<(NFElem, Option<Arc<crate::exactnum::NumberField>>)>, Option<String>) {
    // over a cyclotomic base only linear factors are extracted exactly:
    // deflate by the root of each linear factor found via division attempts
    let q = p.clone();
    let mut roots = Vec::new();
    loop {
        let Some(d) = q.degree() else { break };
        if d == 0 {
            break;
        }
        if d == 1 {
            let r = q.coeffs[0].neg().mul(&q.coeffs[1].inv().unwrap());
            roots.push((r.clone(), r.field().cloned()));
            return (roots, None);
        }
        // no general factorization over the cyclotomic base
        break;
    }
    let leftover = q.degree().map(|_| q.to_string_var("s"));
    (roots, leftover)
}

fn solve_univariate_and_test(
    fam: &StratumFamily,
    eqs: &[MPoly<NFElem>],
    g: &UPoly<NFElem>,
    _sv: usize,
) -> StratumOutcome {
    let gsf = g.squarefree_part();
    let (roots, leftover) = exact_roots(&gsf);
    let mut points = Vec::new();
    for (r, field) in roots {
        let pt = StratumPoint { field, values: vec![r] };
        if !config_valid_at(fam, &pt) {
            continue;
        }
        // all leading equations vanish?
        let t_list: Vec<usize> = fam.t_vars.clone();
        if eqs
            .iter()
            .any(|e| !eval_at_point(fam, &e.set_zero(&t_list), &pt).is_zero())
        {
            continue;
        }
        if kernel_test(fam, eqs, &pt) {
            points.push(pt);
        }
    }
    if let Some(poly) = leftover {
        return StratumOutcome::Unresolved { polynomial: poly };
    }
    if points.is_empty() {
        StratumOutcome::Empty { reason: "no transverse on-stratum solutions".into() }
    } else {
        StratumOutcome::Points(points)
    }
}

fn solve_bivariate_and_test(
    fam: &StratumFamily,
    eqs: &[MPoly<NFElem>],
    g1: &MPoly<NFElem>,
    g2: &MPoly<NFElem>,
    all_leading: &[MPoly<NFElem>],
) -> StratumOutcome {
    let sa = fam.s_vars[0];
    let sb = fam.s_vars[1];
    // eliminate sb
    let r = crate::exactnum::mpoly::resultant_in(g1, g2, sb);
    if r.is_zero() {
        return StratumOutcome::Unresolved {
            polynomial: "resultant vanishes identically (shared component)".into(),
        };
    }
    let ru = to_univariate(&r, sa).squarefree_part();
    let (roots, leftover) = exact_roots(&ru);
    let mut points = Vec::new();
    for (ra, field) in roots {
        // back-substitute: common root of g1, g2 specialized at sa = ra
        let sub1 = substitute_nf(g1, sa, &ra);
        let sub2 = substitute_nf(g2, sa, &ra);
        let p1 = to_univariate(&sub1, sb);
        let p2 = to_univariate(&sub2, sb);
        let g = p1.gcd(&p2);
        match g.degree() {
            Some(1) => {
                let rb = g.coeffs[0].neg().mul(&g.coeffs[1].inv().unwrap());
                let pt = StratumPoint { field: field.clone(), values: vec![ra.clone(), rb] };
                let t_list: Vec<usize> = fam.t_vars.clone();
                if !config_valid_at(fam, &pt) {
                    continue;
                }
                if all_leading
                    .iter()
                    .any(|e| !eval_at_point(fam, &e.set_zero(&t_list), &pt).is_zero())
                {
                    continue;
                }
                if kernel_test(fam, eqs, &pt) {
                    points.push(pt);
                }
            }
            Some(0) | None => continue, // spurious resultant root
            Some(k) => {
                return StratumOutcome::Unresolved {
                    polynomial: format!("degree-{} fiber over a stratum root", k),
                }
            }
        }
    }
    if let Some(poly) = leftover {
        return StratumOutcome::Unresolved { polynomial: poly };
    }
    if points.is_empty() {
        StratumOutcome::Empty { reason: "no transverse on-stratum solutions".into() }
    } else {
        StratumOutcome::Points(points)
    }
}

fn substitute_nf(g: &MPoly<NFElem>, var: usize, val: &NFElem) -> MPoly<NFElem> {
    g.substitute(var, val)
}
