//! Stratum-level regression tests: displayed leading terms, vanishing-order
//! bookkeeping between source and target, the twofold ramified chart, and
//! the one-dimensional stratum polynomial of the period-4 family.

use perdn_core::exactnum::mpoly::RFunc;
use perdn_core::exactnum::series::{expand_rfunc, series_leading};
use perdn_core::exactnum::{Field, MPoly, NFElem, Rational};
use perdn_core::percurve::catalog;
use perdn_core::percurve::strata::{build_family, phase_assignments, XMark};
use perdn_core::treecover::Mark;

fn family_for(label: &str) -> perdn_core::percurve::StratumFamily {
    let ty = catalog::per25_meeting_types()
        .into_iter()
        .find(|(l, _)| l == label)
        .unwrap()
        .1;
    let phases = phase_assignments(&ty);
    build_family(&ty, &phases[0]).unwrap()
}

fn to_rat(p: &MPoly<NFElem>) -> MPoly<Rational> {
    p.map_coeffs(&|c: &NFElem| c.is_rational().expect("rational coefficients"))
}

/// The second defining equation near the g5 stratum has constant term
/// (-1 - s2 + s3 - s2 s3)/((1 + s2) s3) in the stratum chart, with s2, s3 the
/// conventional cross-ratio coordinates.
#[test]
fn g5_leading_term_matches_display() {
    use XMark::*;
    let fam = family_for("g5");
    assert_eq!(fam.t_vars.len(), 1);
    let t = fam.t_vars[0];
    // the equation pair for the tuple (1,3,5,4): source minus target
    let src = fam.source_cr_pair([Cycle(1), Cycle(3), Cycle(5), Cycle(4)]);
    let tgt = fam.target_cr_pair([1, 3, 5, 4]);
    let num = src.0.mul(&tgt.1).sub(&tgt.0.mul(&src.1));
    let den = src.1.mul(&tgt.1);
    let h2 = RFunc::new(to_rat(&num), to_rat(&den));
    // conventional stratum coordinates as functions on the stratum
    let s2_pair = fam.source_cr_pair([Cycle(1), Star, Cycle(3), Cycle(4)]);
    let s3_pair = fam.source_cr_pair([Star, Cycle(4), Lifted(5, 1), Cycle(2)]);
    let at0 = |p: &(MPoly<NFElem>, MPoly<NFElem>)| -> RFunc<Rational> {
        let cn = p.0.monomial_content();
        let cd = p.1.monomial_content();
        let joint: Vec<u16> = cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
        RFunc::new(
            to_rat(&p.0.divide_monomial(&joint).set_zero(&[t])),
            to_rat(&p.1.divide_monomial(&joint).set_zero(&[t])),
        )
    };
    let s2 = at0(&s2_pair);
    let s3 = at0(&s3_pair);
    let one = RFunc::constant(fam.nvars(), Rational::one());
    let display = one
        .neg()
        .sub(&s2)
        .add(&s3)
        .sub(&s2.mul(&s3))
        .div(&one.add(&s2).mul(&s3))
        .unwrap();
    // series expansion in the smoothing parameter: order zero, the display
    let series = expand_rfunc(&h2, t, 3).unwrap();
    let (ord, lead) = series_leading(&series).unwrap();
    assert_eq!(ord, 0);
    assert_eq!(lead, display, "constant term of the second equation");
}

/// The solved g5 and g6 punctures kill the displayed leading numerators:
/// (-2 s2 + s3 + 3 s2 s3, -1 - s2 + s3 - s2 s3) for g5 and
/// (3 s2 s3 - 2 s2 - s3, 1 + s2 - s3 + s2 s3) for g6.
#[test]
fn solutions_kill_displayed_numerators() {
    let ps = perdn_core::percurve::punctures_25().unwrap();
    let three = NFElem::from_int(3);
    let two = NFElem::from_int(2);
    let one = NFElem::from_int(1);
    for p in ps.iter().filter(|p| p.stratum == "g5") {
        let s2 = &p.stratum_coords[0].1;
        let s3 = &p.stratum_coords[1].1;
        let n1 = two.mul(s2).neg().add(s3).add(&three.mul(s2).mul(s3));
        let n2 = one.neg().sub(s2).add(s3).sub(&s2.mul(s3));
        assert!(n1.is_zero(), "g5 first numerator at {:?}", s2);
        assert!(n2.is_zero(), "g5 second numerator at {:?}", s2);
    }
    for p in ps.iter().filter(|p| p.stratum == "g6") {
        let s2 = &p.stratum_coords[0].1;
        let s3 = &p.stratum_coords[1].1;
        let n1 = three.mul(s2).mul(s3).sub(&two.mul(s2)).sub(s3);
        let n2 = one.add(s2).sub(s3).add(&s2.mul(s3));
        assert!(n1.is_zero(), "g6 first numerator at {:?}", s2);
        assert!(n2.is_zero(), "g6 second numerator at {:?}", s2);
    }
}

/// Vanishing orders across the covering: a source smoothing parameter of a
/// degree-one edge appears to order one in the matching target smoothing
/// cross-ratio; the totally ramified edge of the critical-cycle stratum
/// appears to order two.
#[test]
fn smoothing_orders_match_edge_degrees() {
    use XMark::*;
    // g4: branch edges have degree one. The outer target edge separates
    // {b1, b5} from {b3, b4}; its smoothing cross-ratio vanishes to first
    // order in the shared outer parameter.
    let fam = family_for("g4");
    let pair = fam.target_cr_pair([1, 3, 5, 4]);
    let orders = fam.pair_orders(&pair);
    assert_eq!(orders, vec![0, 1], "target smoothing of the outer edge");
    // the source smoothing parameter of the degree-one edge above it: the
    // second-level component of the marked copy carries the cycle mark 4 and
    // the lifted preimage of mark 5, giving the separating tuple
    let spair = fam.source_cr_pair([Cycle(4), Cycle(1), Lifted(5, 1), Cycle(3)]);
    assert_eq!(
        fam.pair_orders(&spair),
        orders,
        "degree-one edge: source and target smoothing orders agree"
    );
    // plumbed source cross-ratio of the inner edge vanishes to first order
    // in the inner parameter alone
    let inner = fam.source_cr_pair([Cycle(2), Cycle(1), Cycle(3), Cycle(5)]);
    let io = fam.pair_orders(&inner);
    assert_eq!(io, vec![1, 0], "{:?}", io);

    // gI: the unique edge is totally ramified; the target-side smoothing
    // cross-ratio CR(D; b2, b1, b3, b*) separates the edge and vanishes to
    // order two in the source parameter
    let fam = family_for("gI");
    assert_eq!(fam.t_vars.len(), 1);
    let pair = fam.target_cr_pair_with_star([Some(2), Some(1), Some(3), None]);
    let orders = fam.pair_orders(&pair);
    assert_eq!(orders, vec![2], "ramified edge smooths to second order");
    // while the source-side smoothing parameter itself has order one: the
    // separating tuple takes the two ramified-component marks on one side
    let spair = fam.source_cr_pair([Cycle(1), Cycle(5), Cycle(2), Star]);
    assert_eq!(fam.pair_orders(&spair), vec![1]);
}

/// The chart of the g6 neighborhood is two-to-one: with the first coordinate
/// a node-smoothing cross-ratio and the others the conventional parameters,
/// the fiber over (c1, c2, c3) is cut by a quadratic whose discriminant is
/// exactly 4 c1 c2 (c3 - 1) c3 + (c2 c3 - c1 (c2 + c3))^2.
#[test]
fn ramified_chart_discriminant_identity() {
    // chart functions on the open locus in the coordinates (x3, x4, x5):
    //   c1 = CR(a1, a5, a4, a2) = x4 (1 - x5) / (x4 - x5)
    //   c2 = CR(a1, a*, a4, a3) = x4 / x3
    //   c3 = CR(a*, a2, a3', a5) = (x5 - 1) / (-x3 - 1)
    // solving the last two for x4, x5 and substituting into the first gives
    // a quadratic in x3; its discriminant is the displayed ramification
    // polynomial
    let nv = 4; // x3, c1, c2, c3
    let x3 = MPoly::<Rational>::var(nv, 0);
    let c1 = MPoly::<Rational>::var(nv, 1);
    let c2 = MPoly::<Rational>::var(nv, 2);
    let c3 = MPoly::<Rational>::var(nv, 3);
    let one = MPoly::<Rational>::one(nv);
    let x4 = c2.mul(&x3);
    let x5 = one.sub(&c3.mul(&x3.add(&one)));
    // cleared first chart equation: x4 (1 - x5) - c1 (x4 - x5) = 0
    let f = x4.mul(&one.sub(&x5)).sub(&c1.mul(&x4.sub(&x5)));
    let quad = f.coeffs_in(0);
    assert_eq!(quad.len(), 3, "quadratic in the remaining coordinate");
    let (a, b, c) = (&quad[2], &quad[1], &quad[0]);
    let disc = b.mul(b).sub(&a.mul(c).scale(&Rational::from_int(4)));
    // the displayed polynomial
    let q = c1
        .mul(&c2)
        .mul(&c3.sub(&one))
        .mul(&c3)
        .scale(&Rational::from_int(4))
        .add(&c2.mul(&c3).sub(&c1.mul(&c2.add(&c3))).pow(2));
    assert_eq!(disc, q, "fiber discriminant equals the ramification polynomial");
}

/// Corrupting a local degree breaks the fiber-degree clause of validation.
#[test]
fn flipped_edge_degree_fails_fiber_clause() {
    use perdn_core::treecover::validate_type;
    // a degree-one branch edge bumped to the covering degree
    let mut ty = catalog::per25_meeting_types()
        .into_iter()
        .find(|(l, _)| l == "g1")
        .unwrap()
        .1;
    let e = ty.deg_e.iter().position(|&k| k == 1).unwrap();
    ty.deg_e[e] = 2;
    assert!(validate_type(&ty).contains(&3), "fiber degree clause");
    // the ramified edge of the critical-cycle stratum dropped to degree one
    let mut ty = catalog::per25_meeting_types()
        .into_iter()
        .find(|(l, _)| l == "gI")
        .unwrap()
        .1;
    let e = ty.deg_e.iter().position(|&k| k == 2).unwrap();
    ty.deg_e[e] = 1;
    let bad = validate_type(&ty);
    assert!(bad.contains(&3), "fiber degree clause, got {:?}", bad);
}

/// Forced boundary values on the deepest puncture stratum: the tree of g1
/// sends the tuple (1, 3, 5, 4) to zero, matching the smoothing-parameter
/// role of its inner edge.
#[test]
fn g1_boundary_value_is_zero() {
    use perdn_core::moduli::{boundary_cross_ratio, BoundaryCr};
    let ty = catalog::per25_meeting_types()
        .into_iter()
        .find(|(l, _)| l == "g1")
        .unwrap()
        .1;
    assert_eq!(
        boundary_cross_ratio(&ty.sigma, [1, 3, 5, 4]),
        BoundaryCr::Zero
    );
}

/// Independent plumbing families over every tabulated source tree reproduce
/// the forced boundary cross-ratios in the limit, exhaustively over 4-mark
/// tuples.
#[test]
fn plumbing_limits_match_boundary_values_on_all_tabulated_trees() {
    use perdn_core::moduli::{boundary_cross_ratio, plumb, BoundaryCr};
    for (label, ty) in catalog::per25_meeting_types() {
        let f = plumb(&ty.sigma).unwrap();
        let marks: [Mark; 5] = [1, 2, 3, 4, 5];
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    for l in 0..5 {
                        let mut set = [i, j, k, l];
                        set.sort_unstable();
                        if set.windows(2).any(|w| w[0] == w[1]) {
                            continue;
                        }
                        let tu = [marks[i], marks[j], marks[k], marks[l]];
                        // vanishing orders follow the separation rule edge
                        // by edge
                        let orders = f.cross_ratio_orders(tu);
                        for (e, &(a, b)) in ty.sigma.edges.iter().enumerate() {
                            let side = ty.sigma.edge_side(e, a);
                            let side_of =
                                |m: Mark| side[ty.sigma.mark_vertex(m).unwrap()];
                            let split = |x: Mark, y: Mark, z: Mark, w: Mark| {
                                side_of(x) == side_of(y)
                                    && side_of(z) == side_of(w)
                                    && side_of(x) != side_of(z)
                            };
                            let expect = if split(tu[0], tu[2], tu[1], tu[3]) {
                                1
                            } else if split(tu[0], tu[3], tu[1], tu[2]) {
                                -1
                            } else {
                                0
                            };
                            assert_eq!(
                                orders[e], expect,
                                "{} tuple {:?} edge ({},{})",
                                label, tu, a, b
                            );
                        }
                        let (num, den) = f.cross_ratio_pair(tu);
                        let cn = num.monomial_content();
                        let cd = den.monomial_content();
                        let joint: Vec<u16> =
                            cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
                        let num = num.divide_monomial(&joint);
                        let den = den.divide_monomial(&joint);
                        let tvars: Vec<usize> = f.t_var_of_edge.clone();
                        let n0 = num.set_zero(&tvars);
                        let d0 = den.set_zero(&tvars);
                        match boundary_cross_ratio(&ty.sigma, tu) {
                            BoundaryCr::Interior => {
                                assert!(!n0.is_zero() && !d0.is_zero(), "{} {:?}", label, tu)
                            }
                            BoundaryCr::Zero => {
                                assert!(n0.is_zero() && !d0.is_zero(), "{} {:?}", label, tu)
                            }
                            BoundaryCr::Infinity => {
                                assert!(!n0.is_zero() && d0.is_zero(), "{} {:?}", label, tu)
                            }
                            BoundaryCr::One => assert!(
                                !d0.is_zero() && n0.sub(&d0).is_zero(),
                                "{} {:?}",
                                label,
                                tu
                            ),
                        }
                    }
                }
            }
        }
    }
}

/// Plumbed one-dimensional stratum of the period-4 family: the on-stratum
/// equation vanishes exactly on the roots of (d+1)s^d - d s^(d-1) - 1 away
/// from the unity wall.
#[test]
fn period4_one_dimensional_stratum_polynomial() {
    use perdn_core::exactnum::{roots_complex, Cx, UPoly};
    use perdn_core::treecover::enumerate_types;
    for d in [3usize, 4] {
        let recs = enumerate_types(d, 4).unwrap();
        let rec = recs
            .iter()
            .find(|r| r.passes_diagonal && r.ty.tau_shape() == "*24|13")
            .unwrap();
        let fam = build_family(&rec.ty, &phase_assignments(&rec.ty)[0]).unwrap();
        assert_eq!(fam.s_vars.len(), 1);
        let sv = fam.s_vars[0];
        let eqs = fam.equations();
        assert_eq!(eqs.len(), 1);
        let lead = eqs[0].set_zero(&fam.t_vars.clone());
        let coeffs = lead.coeffs_in(sv);
        let gc = UPoly::new(
            coeffs
                .into_iter()
                .map(|c| c.constant_value().map(|v| v.to_cx()).unwrap_or(Cx::new(0.0, 0.0)))
                .collect(),
        );
        let roots = roots_complex(&gc, 1e-9).unwrap();
        // the stratum coordinate is the reciprocal of the conventional one
        // up to a root of unity, so compare through the cross-ratio value:
        // s = CR(a*, a1, a2, a3) evaluated at the root
        let s2_pair = fam.source_cr_pair([XMark::Star, XMark::Cycle(1), XMark::Cycle(2), XMark::Cycle(3)]);
        let cn = s2_pair.0.monomial_content();
        let cd = s2_pair.1.monomial_content();
        let joint: Vec<u16> = cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
        let n0 = s2_pair.0.divide_monomial(&joint).set_zero(&fam.t_vars.clone());
        let d0 = s2_pair.1.divide_monomial(&joint).set_zero(&fam.t_vars.clone());
        let g = |s: Cx| {
            // (d+1) s^d - d s^(d-1) - 1
            s.powi(d as u32) * (d as f64 + 1.0) - s.powi(d as u32 - 1) * (d as f64) - Cx::new(1.0, 0.0)
        };
        let mut matched = 0;
        for (r, _) in &roots {
            let mut vals = vec![Cx::new(0.0, 0.0); fam.nvars()];
            vals[sv] = *r;
            let nv = n0.eval_map(&vals, &|c: &NFElem| c.to_cx());
            let dv = d0.eval_map(&vals, &|c: &NFElem| c.to_cx());
            if dv.abs() < 1e-10 {
                continue;
            }
            let s2 = nv / dv;
            if g(s2).abs() < 1e-7 {
                matched += 1;
            }
        }
        assert!(
            matched >= d - 1,
            "degree {}: {} of {} on-stratum roots land on the stratum polynomial",
            d,
            matched,
            roots.len()
        );
    }
}
