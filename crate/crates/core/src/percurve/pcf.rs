//! The fully critical cycle points: on the four strata where the free
//! critical point joins the marked cycle, the on-stratum system is solved
//! numerically (exact elimination, simultaneous roots, Newton polish), five
//! reduced points per stratum.

use super::catalog;
use super::dynmap::DynMap;
use super::strata::{build_family, phase_assignments, StratumFamily};
use crate::exactnum::mpoly::resultant_in;
use crate::exactnum::{roots_complex, Cx, MPoly, NFElem, Rational, UPoly};
use crate::moduli::PointP1;
use serde_json::{json, Value};

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const DISTINCT_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct PcfPoint {
    pub stratum: String,
    /// coordinates (s2, s3) of the stratum chart
    pub s2: Cx,
    pub s3: Cx,
    /// the five cycle positions, the free critical point at infinity
    pub config: Vec<PointP1<Cx>>,
    pub residual: f64,
    pub jacobian_det: f64,
    /// chordal distance of the free critical orbit to the cycle after n steps
    pub orbit_residual: f64,
}

fn to_cx_poly_pair(fam: &StratumFamily) -> (Vec<MPoly<Rational>>, [usize; 2]) {
    // leading equations restricted to the stratum, as rational polynomials
    let eqs = fam.equations();
    let t_list: Vec<usize> = fam.t_vars.clone();
    let lead: Vec<MPoly<NFElem>> = eqs.iter().map(|e| e.set_zero(&t_list)).collect();
    let rat: Vec<MPoly<Rational>> = lead
        .iter()
        .map(|p| p.map_coeffs(&|c: &NFElem| c.is_rational().expect("rational stratum data")))
        .collect();
    (rat, [fam.s_vars[0], fam.s_vars[1]])
}

/// The stratum's own chart: which cycle point the free critical point lands
/// on (the mark sharing a component with the star).
fn free_slot(label: &str) -> usize {
    match label {
        "gI" => 5,
        "gII" => 2,
        "gIII" => 3,
        "gIV" => 4,
        _ => unreachable!(),
    }
}

/// The limit configuration at a solved point: positions on the surviving
/// component (path prefix stripped), the collided mark at infinity.
pub fn cycle_config(fam: &StratumFamily, label: &str, s2: Cx, s3: Cx) -> Vec<PointP1<Cx>> {
    let nvars = fam.nvars();
    let mut vals = vec![Cx::new(0.0, 0.0); nvars];
    vals[fam.s_vars[0]] = s2;
    vals[fam.s_vars[1]] = s3;
    let slot = free_slot(label);
    let mut cycle: Vec<PointP1<Cx>> = Vec::new();
    for i in 1..=5usize {
        if i == slot {
            cycle.push(PointP1::Infinity);
            continue;
        }
        let mut v2 = vals.clone();
        for &tv in &fam.t_vars {
            v2[tv] = Cx::new(1.0, 0.0);
        }
        let p = fam.pos[i - 1].eval_map(&v2, &|c: &NFElem| c.to_cx());
        cycle.push(PointP1::Finite(p));
    }
    cycle
}

/// Builds the dynamical map of a solved point and measures how exactly the
/// free critical orbit joins the cycle.
fn orbit_residual(fam: &StratumFamily, label: &str, s2: Cx, s3: Cx) -> f64 {
    let cycle = cycle_config(fam, label, s2, s3);
    let Ok(f) = DynMap::from_cycle(2, cycle) else {
        return f64::INFINITY;
    };
    let cyc = f.cycle_residual();
    // the free critical point must fall into the cycle within n steps
    let dists = f.free_orbit_distances(5);
    cyc.max(dists.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Solves one critical-cycle stratum; exactly five reduced points expected.
pub fn pcf_solve_labeled(label: &str) -> Result<Vec<PcfPoint>, String> {
    let ty = catalog::per25_meeting_types()
        .into_iter()
        .find(|(l, _)| l == label)
        .ok_or_else(|| format!("unknown stratum {}", label))?
        .1;
    let phases = phase_assignments(&ty);
    let fam = build_family(&ty, &phases[0])?;
    let (lead, [sa, sb]) = to_cx_poly_pair(&fam);
    assert_eq!(lead.len(), 2);
    let r = resultant_in(&lead[0], &lead[1], sb);
    let ru = {
        let coeffs = r.coeffs_in(sa);
        UPoly::new(
            coeffs
                .into_iter()
                .map(|c| Cx::new(c.constant_value().expect("univariate").to_f64(), 0.0))
                .collect(),
        )
    };
    let roots = roots_complex(&ru, 1e-8).map_err(|e| e.to_string())?;
    let ev = |p: &MPoly<Rational>, a: Cx, b: Cx| {
        let mut vals = vec![Cx::new(0.0, 0.0); fam.nvars()];
        vals[sa] = a;
        vals[sb] = b;
        p.eval_map(&vals, &|q: &Rational| Cx::new(q.to_f64(), 0.0))
    };
    let d_a: Vec<MPoly<Rational>> = lead.iter().map(|p| p.partial(sa)).collect();
    let d_b: Vec<MPoly<Rational>> = lead.iter().map(|p| p.partial(sb)).collect();
    let mut points: Vec<PcfPoint> = Vec::new();
    for (ra, _) in roots {
        // candidate second coordinates: roots of the first equation
        let specialized = {
            let sub = lead[0].substitute_cx_var(sa, ra, sb);
            sub
        };
        let Ok(cands) = roots_complex(&specialized, 1e-8) else { continue };
        for (rb, _) in cands {
            // 2x2 Newton polish
            let mut a = ra;
            let mut b = rb;
            let mut ok = false;
            for _ in 0..80 {
                let f0 = ev(&lead[0], a, b);
                let f1 = ev(&lead[1], a, b);
                if f0.abs().max(f1.abs()) < 1e-13 {
                    ok = true;
                    break;
                }
                let j00 = ev(&d_a[0], a, b);
                let j01 = ev(&d_b[0], a, b);
                let j10 = ev(&d_a[1], a, b);
                let j11 = ev(&d_b[1], a, b);
                let det = j00 * j11 - j01 * j10;
                if det.abs() < 1e-18 {
                    break;
                }
                a = a - (f0 * j11 - f1 * j01) / det;
                b = b - (j00 * f1 - j10 * f0) / det;
                if !a.is_finite() || !b.is_finite() {
                    break;
                }
            }
            if !ok {
                continue;
            }
            let res = ev(&lead[0], a, b).abs().max(ev(&lead[1], a, b).abs());
            if res > RESIDUAL_TOL {
                continue;
            }
            let jdet = (ev(&d_a[0], a, b) * ev(&d_b[1], a, b)
                - ev(&d_b[0], a, b) * ev(&d_a[1], a, b))
            .abs();
            if jdet < 1e-8 {
                continue;
            }
            let orb = orbit_residual(&fam, label, a, b);
            if orb > 1e-8 {
                continue; // spurious elimination root, not a dynamical point
            }
            let dup = points
                .iter()
                .any(|p| (p.s2 - a).abs() < DISTINCT_TOL && (p.s3 - b).abs() < DISTINCT_TOL);
            if !dup {
                points.push(PcfPoint {
                    stratum: label.to_string(),
                    s2: a,
                    s3: b,
                    config: cycle_config(&fam, label, a, b),
                    residual: res,
                    jacobian_det: jdet,
                    orbit_residual: orb,
                });
            }
        }
    }
    points.sort_by(|p, q| {
        p.s2.re
            .partial_cmp(&q.s2.re)
            .unwrap()
            .then(p.s2.im.partial_cmp(&q.s2.im).unwrap())
    });
    if points.len() != 5 {
        return Err(format!(
            "stratum {} produced {} points, expected 5",
            label,
            points.len()
        ));
    }
    Ok(points)
}

/// All twenty critical-cycle points.
pub fn pcf_solve_all() -> Result<Vec<PcfPoint>, String> {
    let mut out = Vec::new();
    for label in ["gI", "gII", "gIII", "gIV"] {
        out.extend(pcf_solve_labeled(label)?);
    }
    Ok(out)
}

pub fn pcf_json(ps: &[PcfPoint]) -> Value {
    Value::Array(
        ps.iter()
            .map(|p| {
                json!({
                    "stratum": p.stratum,
                    "s2": [p.s2.re, p.s2.im],
                    "s3": [p.s3.re, p.s3.im],
                    "residual": p.residual,
                    "jacobian": p.jacobian_det,
                    "orbit_residual": p.orbit_residual,
                })
            })
            .collect(),
    )
}

impl MPoly<Rational> {
    /// Specialize `var` to a complex value, reading the result as univariate
    /// in `keep`.
    fn substitute_cx_var(&self, var: usize, value: Cx, keep: usize) -> UPoly<Cx> {
        let mut coeffs = vec![Cx::new(0.0, 0.0); self.degree_in(keep) as usize + 1];
        for (e, c) in &self.terms {
            let k = e[keep] as usize;
            let mut cc = Cx::new(c.to_f64(), 0.0) * value.powi(e[var] as u32);
            for (v, &kk) in e.iter().enumerate() {
                if v != var && v != keep && kk > 0 {
                    cc = Cx::new(0.0, 0.0); // other variables sit at zero
                }
            }
            coeffs[k] = coeffs[k] + cc;
        }
        UPoly::new(coeffs)
    }
}
