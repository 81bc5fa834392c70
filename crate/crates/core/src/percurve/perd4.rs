//! Period-4 family analysis across degrees: puncture counts per shape, the
//! one-dimensional stratum polynomial with its exact discriminant, and the
//! genus/gonality consequences of the smooth plane model.

use super::strata::{
    analyze_stratum, build_family, phase_assignments, StratumFamily, StratumOutcome,
};
use crate::exactnum::{poly_discriminant, roots_complex, Cx, Field, MPoly, NFElem, Rational, UPoly};
use crate::treecover::{enumerate_types, stabilized_sigma, StratumRecord};
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct ShapeCount {
    pub tau_shape: String,
    pub dimension: usize,
    pub strata: u64,
    pub punctures: usize,
    pub interior_points: usize,
}

#[derive(Clone, Debug)]
pub struct Perd4Report {
    pub d: usize,
    pub shapes: Vec<ShapeCount>,
    pub total_punctures: usize,
    pub critical_cycle_points: usize,
    pub genus: usize,
    pub gonality: usize,
    /// the one-dimensional stratum polynomial (d+1)s^d - d s^(d-1) - 1
    pub g_poly: UPoly<Rational>,
    pub disc_g: Rational,
    /// closed form with the exponent as printed in the source material
    pub disc_verbatim_form: Rational,
    /// closed form with both exponents d-1, matching the exact value
    pub disc_corrected_form: Rational,
    pub g_distinct_roots: bool,
    pub g_has_root_one: bool,
    pub g_other_unity_roots: bool,
}

/// A stratum parametrizes interior points of the curve (honest maps whose
/// free critical point has joined the cycle) exactly when both stabilized
/// trees are single vertices, the map carries the surviving source component
/// onto the surviving target component, and it does so with full degree.
/// Everything else degenerates the dynamics and contributes punctures.
fn is_interior_shape(rec: &StratumRecord) -> bool {
    let ty = &rec.ty;
    if stabilized_sigma(ty).nvert != 1 {
        return false;
    }
    let keep: Vec<crate::treecover::Mark> = (1..=ty.n as u16).collect();
    let Some(sv) = survivor(&ty.sigma, &keep) else { return false };
    let Some(tv) = survivor(&ty.tau, &keep) else { return false };
    ty.phi_v[sv] == tv && ty.deg_v[sv] == ty.d
}

/// The vertex a one-vertex stabilization collapses onto: the unique vertex
/// with at least three directions containing kept marks.
fn survivor(t: &crate::treecover::MarkedTree, keep: &[crate::treecover::Mark]) -> Option<usize> {
    let kept = |m: crate::treecover::Mark| keep.contains(&m);
    for v in 0..t.nvert {
        let mut dirs = t.legs_at(v).into_iter().filter(|&m| kept(m)).count();
        for (e, &(a, b)) in t.edges.iter().enumerate() {
            if a != v && b != v {
                continue;
            }
            let other = if a == v { b } else { a };
            let side = t.edge_side(e, other);
            if t.mk.iter().any(|&(m, u)| kept(m) && side[u]) {
                dirs += 1;
            }
        }
        if dirs >= 3 {
            return Some(v);
        }
    }
    None
}

/// Count the curve-closure points on one stratum of the family, numerically
/// where the base field is cyclotomic, exactly where the analysis already
/// lands in quadratic fields.
fn count_points(fam: &StratumFamily) -> Result<usize, String> {
    if fam.s_vars.is_empty() {
        return match analyze_stratum(fam) {
            StratumOutcome::Points(p) => Ok(p.len()),
            StratumOutcome::Empty { .. } => Ok(0),
            StratumOutcome::Unresolved { polynomial } => Err(polynomial),
        };
    }
    if fam.s_vars.len() == 1 {
        return count_points_univariate(fam);
    }
    match analyze_stratum(fam) {
        StratumOutcome::Points(p) => Ok(p.len()),
        StratumOutcome::Empty { .. } => Ok(0),
        StratumOutcome::Unresolved { polynomial } => Err(polynomial),
    }
}

fn count_points_univariate(fam: &StratumFamily) -> Result<usize, String> {
    let eqs = fam.equations();
    let t_list: Vec<usize> = fam.t_vars.clone();
    let lead: Vec<MPoly<NFElem>> = eqs.iter().map(|e| e.set_zero(&t_list)).collect();
    let sv = fam.s_vars[0];
    let nonzero: Vec<&MPoly<NFElem>> = lead.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(0);
    }
    let to_cx_upoly = |g: &MPoly<NFElem>| -> UPoly<Cx> {
        let coeffs = g.coeffs_in(sv);
        UPoly::new(
            coeffs
                .into_iter()
                .map(|c| c.constant_value().map(|v| v.to_cx()).unwrap_or_else(|| Cx::new(0.0, 0.0)))
                .collect(),
        )
    };
    let g0 = to_cx_upoly(nonzero[0]);
    let roots = roots_complex(&g0, 1e-9).map_err(|e| e.to_string())?;
    let eval_all = |s: Cx| -> f64 {
        let mut vals = vec![Cx::new(0.0, 0.0); fam.nvars()];
        vals[sv] = s;
        nonzero
            .iter()
            .map(|g| g.eval_map(&vals, &|c: &NFElem| c.to_cx()).abs())
            .fold(0.0, f64::max)
    };
    // numeric transversality at a simple root: the on-stratum derivative of
    // some surviving equation does not vanish
    let dg0 = g0.derivative();
    let scale: f64 = g0.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
    let mut count = 0;
    for (r, mult) in roots {
        if mult != 1 {
            continue; // multiple roots are not reduced points
        }
        if eval_all(r) > 1e-7 * scale {
            continue; // not a common root of the full leading system
        }
        if dg0.eval(&r).abs() < 1e-8 * scale {
            continue;
        }
        if !config_valid_numeric(fam, r) {
            continue;
        }
        count += 1;
    }
    Ok(count)
}

/// Numeric version of the non-degeneracy walls: leg and branch-base orbits
/// stay distinct on each component, slots stay distinct in branch charts.
fn config_valid_numeric(fam: &StratumFamily, s: Cx) -> bool {
    let eps = 1e-8;
    let d = fam.ty.d as u32;
    let n = fam.ty.n;
    let tau = &fam.ty.tau;
    let path = &fam.ty.path_tau;
    let mut vals = vec![Cx::new(0.0, 0.0); fam.nvars()];
    vals[fam.s_vars[0]] = s;
    for (pi, &w) in path.iter().enumerate() {
        let mut powers: Vec<Cx> = Vec::new();
        for m in 2..=(n as u16) {
            let b = crate::treecover::phi_mark(n, m);
            if tau.mark_vertex(b) == Some(w) {
                let mut v2 = vals.clone();
                for i in 0..pi {
                    let e = tau
                        .edges
                        .iter()
                        .position(|&(x, y)| {
                            (x == path[i] && y == path[i + 1]) || (x == path[i + 1] && y == path[i])
                        })
                        .unwrap();
                    v2[fam.t_vars[e]] = Cx::new(1.0, 0.0);
                }
                let p = fam.pos[m as usize - 1].eval_map(&v2, &|c: &NFElem| c.to_cx());
                if p.abs() < eps {
                    return false;
                }
                powers.push(p.powi(d));
            }
        }
        for (bi, br) in fam.ty.branches.iter().enumerate() {
            if br.attach != pi {
                continue;
            }
            let name = format!("u{}", bi);
            let v = match fam.vars.names.iter().position(|x| x == &name) {
                Some(vid) => {
                    if vid == fam.s_vars[0] {
                        s
                    } else {
                        Cx::new(0.0, 0.0)
                    }
                }
                None => Cx::new(1.0, 0.0),
            };
            if v.abs() < eps {
                return false;
            }
            powers.push(v.powi(d));
        }
        for i in 0..powers.len() {
            for j in i + 1..powers.len() {
                if (powers[i] - powers[j]).abs() < eps {
                    return false;
                }
            }
        }
    }
    // branch slot walls: the single fresh slot, when present, must avoid 0, 1
    for (bi, br) in fam.ty.branches.iter().enumerate() {
        for &w in &br.tau_verts {
            for b in tau.legs_at(w) {
                let name = format!("s{}_{}", bi, b);
                if let Some(vid) = fam.vars.names.iter().position(|x| x == &name) {
                    if vid == fam.s_vars[0] {
                        if s.abs() < eps || (s - Cx::new(1.0, 0.0)).abs() < eps {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// The one-dimensional stratum polynomial and its exact discriminant data.
pub fn g_polynomial(d: usize) -> UPoly<Rational> {
    let mut coeffs = vec![Rational::zero(); d + 1];
    coeffs[0] = Rational::from_int(-1);
    coeffs[d - 1] = Rational::from_int(-(d as i64));
    coeffs[d] = Rational::from_int(d as i64 + 1);
    UPoly::new(coeffs)
}

fn int_pow(b: i64, e: usize) -> Rational {
    let mut acc = Rational::one();
    let bb = Rational::from_int(b);
    for _ in 0..e {
        acc = acc.mul(&bb);
    }
    acc
}

pub fn disc_verbatim_form(d: usize) -> Rational {
    // d^d ((d+1)^(d-1) + (d-1)^(d+1))
    int_pow(d as i64, d).mul(&int_pow(d as i64 + 1, d - 1).add(&int_pow(d as i64 - 1, d + 1)))
}

pub fn disc_corrected_form(d: usize) -> Rational {
    // (-1)^(d(d-1)/2 + d - 1) d^d ((d+1)^(d-1) + (d-1)^(d-1))
    let sign = if (d * (d - 1) / 2 + d - 1) % 2 == 1 { -1 } else { 1 };
    Rational::from_int(sign)
        .mul(&int_pow(d as i64, d))
        .mul(&int_pow(d as i64 + 1, d - 1).add(&int_pow(d as i64 - 1, d - 1)))
}

pub fn perd4_report(d: usize) -> Result<Perd4Report, String> {
    if !(2..=8).contains(&d) {
        return Err(format!("degree {} out of the supported range", d));
    }
    let records = enumerate_types(d, 4)?;
    let mut shapes = Vec::new();
    let mut total_punctures = 0;
    let mut critical_cycle_points = 0;
    for rec in records.iter().filter(|r| r.passes_diagonal) {
        let interior = is_interior_shape(rec);
        let mut punctures = 0;
        let mut interior_points = 0;
        let phases = phase_assignments(&rec.ty);
        debug_assert_eq!(phases.len() as u64, rec.component_count);
        for ph in &phases {
            let fam = build_family(&rec.ty, ph)?;
            let c = count_points(&fam)?;
            if interior {
                interior_points += c;
            } else {
                punctures += c;
            }
        }
        total_punctures += punctures;
        critical_cycle_points += interior_points;
        shapes.push(ShapeCount {
            tau_shape: rec.ty.tau_shape(),
            dimension: rec.dimension,
            strata: rec.component_count,
            punctures,
            interior_points,
        });
    }
    let g = g_polynomial(d);
    let disc = poly_discriminant(&g);
    let gsf = g.squarefree_part();
    let one = Rational::one();
    // exact: the only d-th root of unity dividing g is s = 1
    let unity: UPoly<Rational> = {
        let mut c = vec![Rational::zero(); d + 1];
        c[0] = Rational::from_int(-1);
        c[d] = Rational::one();
        UPoly::new(c)
    };
    let shared = g.gcd(&unity);
    Ok(Perd4Report {
        d,
        shapes,
        total_punctures,
        critical_cycle_points,
        genus: (d - 1) * (d - 2) / 2,
        gonality: d - 1,
        disc_g: disc.clone(),
        disc_verbatim_form: disc_verbatim_form(d),
        disc_corrected_form: disc_corrected_form(d),
        g_distinct_roots: gsf.degree() == g.degree() && !disc.is_zero(),
        g_has_root_one: g.eval(&one).is_zero(),
        g_other_unity_roots: shared.degree() != Some(1),
        g_poly: g,
    })
}

pub fn perd4_json(r: &Perd4Report) -> Value {
    json!({
        "d": r.d,
        "genus": r.genus,
        "gonality": r.gonality,
        "total_punctures": r.total_punctures,
        "critical_cycle_points": r.critical_cycle_points,
        "g_poly": r.g_poly.to_string_var("s"),
        "disc_g": format!("{}", r.disc_g),
        "disc_closed_form": format!("{}", r.disc_corrected_form),
        "g_distinct_roots": r.g_distinct_roots,
        "shapes": r.shapes.iter().map(|s| json!({
            "tau": s.tau_shape,
            "dim": s.dimension,
            "strata": s.strata,
            "punctures": s.punctures,
            "interior_points": s.interior_points,
        })).collect::<Vec<_>>(),
    })
}
