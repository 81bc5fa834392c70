//! Exact puncture solving for the degree-2 period-5 curve: local families
//! over the filtered strata, leading-term extraction, exact solving over Q
//! and its quadratic extensions, and reporting in the conventional stratum
//! coordinates with plane-model images.

use super::catalog;
use super::strata::{
    analyze_stratum, build_family, phase_assignments, StratumFamily, StratumOutcome, StratumPoint,
    XMark,
};
use crate::exactnum::{Field, NFElem};
use crate::moduli::PointP1;
use serde_json::{json, Value};

#[derive(Clone, Debug)]
pub struct Puncture {
    pub stratum: String,
    pub field_label: String,
    pub field_minpoly: String,
    pub stratum_coords: Vec<(String, NFElem)>,
    pub certificates: Vec<(String, NFElem)>,
    /// image in the plane model, projectively normalized
    pub plane_image: [NFElem; 3],
}

/// Cross-ratio value of extended marks at a stratum point, taking the limit
/// along the family (joint monomial content divided out first).
pub fn cr_value_at(
    fam: &StratumFamily,
    tuple: [XMark; 4],
    pt: &StratumPoint,
) -> PointP1<NFElem> {
    let (num, den) = fam.source_cr_pair(tuple);
    let cn = num.monomial_content();
    let cd = den.monomial_content();
    let joint: Vec<u16> = cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
    let num = num.divide_monomial(&joint);
    let den = den.divide_monomial(&joint);
    let nv = super::strata::eval_at_point(fam, &num, pt);
    let dv = super::strata::eval_at_point(fam, &den, pt);
    if dv.is_zero() {
        assert!(!nv.is_zero(), "indeterminate cross-ratio limit");
        PointP1::Infinity
    } else {
        PointP1::Finite(nv.mul(&dv.inv().unwrap()))
    }
}

/// Image of a stratum point in the plane model chart
/// (X, Y) = (CR(3,4,5,1), CR(5,2,3,4)), as a projective triple.
pub fn plane_image_at(fam: &StratumFamily, pt: &StratumPoint) -> [NFElem; 3] {
    let (nx, dx) = fam.source_cr_pair([
        XMark::Cycle(3),
        XMark::Cycle(4),
        XMark::Cycle(5),
        XMark::Cycle(1),
    ]);
    let (ny, dy) = fam.source_cr_pair([
        XMark::Cycle(5),
        XMark::Cycle(2),
        XMark::Cycle(3),
        XMark::Cycle(4),
    ]);
    let entries = [nx.mul(&dy), ny.mul(&dx), dx.mul(&dy)];
    // joint monomial content across the triple
    let mut joint = entries[0].monomial_content();
    for e in &entries[1..] {
        if e.is_zero() {
            continue;
        }
        let c = e.monomial_content();
        for (j, x) in joint.iter_mut().zip(&c) {
            *j = (*j).min(*x);
        }
    }
    let vals: Vec<NFElem> = entries
        .iter()
        .map(|e| super::strata::eval_at_point(fam, &e.divide_monomial(&joint), pt))
        .collect();
    assert!(
        vals.iter().any(|v| !v.is_zero()),
        "degenerate plane image; deeper expansion required"
    );
    // normalize: last nonzero coordinate scaled to one
    let pivot = vals.iter().rposition(|v| !v.is_zero()).unwrap();
    let inv = vals[pivot].inv().unwrap();
    [
        vals[0].mul(&inv),
        vals[1].mul(&inv),
        vals[2].mul(&inv),
    ]
}

fn field_of_point(pt: &StratumPoint) -> (String, String) {
    match &pt.field {
        None => ("Q".into(), "x".into()),
        Some(f) => (f.label.clone(), f.minpoly_string()),
    }
}

/// Conventional coordinates and certificates reported per stratum.
fn report_tuples(label: &str) -> (Vec<(String, [XMark; 4])>, Vec<(String, [XMark; 4])>) {
    use XMark::*;
    match label {
        "g4" => (
            vec![("CR(C,a1,a2,a3,a4)".into(), [Cycle(1), Cycle(2), Cycle(3), Cycle(4)])],
            vec![],
        ),
        "g5" => (
            vec![
                ("s2 = CR(C,a1,a*,a3,a4)".into(), [Cycle(1), Star, Cycle(3), Cycle(4)]),
                ("s3 = CR(C,a*,a4,a5',a2)".into(), [Star, Cycle(4), Lifted(5, 1), Cycle(2)]),
            ],
            vec![
                ("CR(C,a1,a2,a3,a5)".into(), [Cycle(1), Cycle(2), Cycle(3), Cycle(5)]),
                ("CR(C,a1,a3,a4,a5)".into(), [Cycle(1), Cycle(3), Cycle(4), Cycle(5)]),
            ],
        ),
        "g6" => (
            vec![
                ("s2 = CR(C,a1,a*,a4,a3)".into(), [Cycle(1), Star, Cycle(4), Cycle(3)]),
                ("s3 = CR(C,a*,a2,a3',a5)".into(), [Star, Cycle(2), Lifted(3, 1), Cycle(5)]),
            ],
            vec![("CR(C,a1,a3,a4,a5)".into(), [Cycle(1), Cycle(3), Cycle(4), Cycle(5)])],
        ),
        "g7" => (
            vec![
                ("s2 = CR(C,a1,a2,a3,a4)".into(), [Cycle(1), Cycle(2), Cycle(3), Cycle(4)]),
                ("s3 = CR(C,a1,a2,a3,a5)".into(), [Cycle(1), Cycle(2), Cycle(3), Cycle(5)]),
            ],
            vec![],
        ),
        _ => (vec![], vec![]),
    }
}

/// Solves the punctures over one named stratum of the degree-2 period-5
/// curve. Empty when the stratum misses the curve closure.
pub fn puncture_solve_labeled(
    label: &str,
    ty: &crate::treecover::CombinatorialType,
) -> Result<Vec<Puncture>, String> {
    assert!(
        crate::treecover::diagonal_filter(ty),
        "puncture solving requires a filter-passing stratum"
    );
    let phases = phase_assignments(ty);
    assert_eq!(phases.len(), 1, "degree-2 shapes carry a single stratum");
    let fam = build_family(ty, &phases[0])?;
    let outcome = analyze_stratum(&fam);
    let points = match outcome {
        StratumOutcome::Points(p) => p,
        StratumOutcome::Empty { .. } => return Ok(vec![]),
        StratumOutcome::Unresolved { polynomial } => {
            return Err(format!("unresolved factor beyond quadratic: {}", polynomial))
        }
    };
    let (coord_tuples, cert_tuples) = report_tuples(label);
    let mut out = Vec::new();
    for pt in points {
        let (field_label, field_minpoly) = field_of_point(&pt);
        let coords = coord_tuples
            .iter()
            .map(|(name, t)| {
                let v = cr_value_at(&fam, *t, &pt);
                (
                    name.clone(),
                    v.finite().cloned().expect("stratum coordinate finite"),
                )
            })
            .collect();
        let certs = cert_tuples
            .iter()
            .map(|(name, t)| {
                let v = cr_value_at(&fam, *t, &pt);
                (name.clone(), v.finite().cloned().expect("certificate finite"))
            })
            .collect();
        let plane = plane_image_at(&fam, &pt);
        out.push(Puncture {
            stratum: label.to_string(),
            field_label,
            field_minpoly,
            stratum_coords: coords,
            certificates: certs,
            plane_image: plane,
        });
    }
    Ok(out)
}

/// All punctures of the degree-2 period-5 curve: the seven puncture strata
/// solved exactly, ten points in total.
pub fn punctures_25() -> Result<Vec<Puncture>, String> {
    let mut out = Vec::new();
    for (label, ty) in catalog::per25_meeting_types() {
        if ["gI", "gII", "gIII", "gIV"].contains(&label.as_str()) {
            continue; // critical-cycle points, not punctures
        }
        out.extend(puncture_solve_labeled(&label, &ty)?);
    }
    Ok(out)
}

pub fn nfelem_json(v: &NFElem) -> Value {
    let (field, coeffs) = match v {
        NFElem::Rat(r) => (
            "x".to_string(),
            vec![[r.numer().to_string(), r.denom().to_string()]],
        ),
        NFElem::Ext { field, coeffs } => (
            field.minpoly_string(),
            coeffs
                .iter()
                .map(|c| [c.numer().to_string(), c.denom().to_string()])
                .collect(),
        ),
    };
    json!({ "field": field, "coeffs": coeffs })
}

pub fn punctures_json(ps: &[Puncture]) -> Value {
    Value::Array(
        ps.iter()
            .map(|p| {
                json!({
                    "stratum": p.stratum,
                    "field": p.field_label,
                    "field_minpoly": p.field_minpoly,
                    "coords": p.stratum_coords.iter().map(|(k, v)| json!({"name": k, "value": nfelem_json(v)})).collect::<Vec<_>>(),
                    "certificates": p.certificates.iter().map(|(k, v)| json!({"name": k, "value": nfelem_json(v)})).collect::<Vec<_>>(),
                    "plane_image": p.plane_image.iter().map(nfelem_json).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}
