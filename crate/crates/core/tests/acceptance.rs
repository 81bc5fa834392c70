//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the checked values. Run with `cargo test --test acceptance -- --nocapture`
//! to see the report.

use perdn_core::elliptic::{
    fit_plane_curve, monomials, periods, transformed_cubic, weierstrass_from_cubic, ECPoint,
    PointOrder, TORSION_BOUND,
};
use perdn_core::exactnum::{nf_make, Field, NFElem, Rational, UPoly};
use perdn_core::moduli::{power_relation_residual, HPoint};
use perdn_core::percurve::{
    catalog, diagonal_system, pcf_solve_all, perd4_report, punctures_25, punctures_json,
    rho_degree, rho_degree_dropping, sample_curve,
};
use perdn_core::render::{classify, render, Classification, RenderConfig};
use perdn_core::treecover::{diagonal_filter, enumerate_types, validate_type};
use std::collections::BTreeSet;

fn sqrt5() -> NFElem {
    let m = UPoly::new(vec![
        Rational::from_int(-5),
        Rational::zero(),
        Rational::one(),
    ]);
    NFElem::generator(&nf_make(&m).unwrap())
}

fn gaussian_i() -> NFElem {
    let m = UPoly::new(vec![
        Rational::from_int(1),
        Rational::zero(),
        Rational::one(),
    ]);
    NFElem::generator(&nf_make(&m).unwrap())
}

fn half(n: i64) -> NFElem {
    NFElem::Rat(Rational::new(n, 2))
}

#[test]
fn criterion_1_strata_enumeration() {
    // degree 2, period 5: the filtered list equals the eleven curve-meeting
    // types plus the eight filter-passing types the curve misses; the
    // ramified-chart partner and the mismatched-stabilization example are
    // enumerated as valid but rejected by the filter
    let recs = enumerate_types(2, 5).unwrap();
    let filtered: BTreeSet<String> = recs
        .iter()
        .filter(|r| r.passes_diagonal)
        .map(|r| r.ty.signature())
        .collect();
    let mut expected = BTreeSet::new();
    for (_, ty) in catalog::per25_meeting_types() {
        assert!(validate_type(&ty).is_empty());
        assert!(diagonal_filter(&ty));
        expected.insert(ty.signature());
    }
    for (_, ty) in catalog::per25_nonmeeting_types() {
        assert!(validate_type(&ty).is_empty());
        assert!(diagonal_filter(&ty));
        expected.insert(ty.signature());
    }
    assert_eq!(expected.len(), 19);
    assert_eq!(filtered, expected, "filtered stratum set mismatch");
    assert_eq!(recs.len(), 666, "regression: total valid type count");

    let boxed = catalog::ramified_chart_partner();
    assert!(validate_type(&boxed).is_empty());
    assert!(
        !diagonal_filter(&boxed),
        "the ramified-chart partner fails the stabilization condition"
    );
    assert!(
        recs.iter().any(|r| r.ty.signature() == boxed.signature() && !r.passes_diagonal),
        "partner type enumerated among the valid, filter-rejected strata"
    );
    let fig = catalog::mismatched_stabilization_type();
    assert!(validate_type(&fig).is_empty());
    assert!(!diagonal_filter(&fig));

    // period 4, degrees 2..6: the eight tabulated shapes carry the stated
    // stratum multiplicities
    for d in 2..=6usize {
        let recs = enumerate_types(d, 4).unwrap();
        let find = |shape: &str, want_dim: usize| -> Vec<u64> {
            recs.iter()
                .filter(|r| {
                    r.passes_diagonal && r.ty.tau_shape() == shape && r.dimension == want_dim
                })
                .map(|r| r.component_count)
                .collect()
        };
        // one-dimensional shapes
        let c_g12: Vec<u64> = find("*2|134", 1);
        let dd = (d as u64 - 1) * (d as u64 - 2);
        if d == 2 {
            assert_eq!(c_g12, vec![1], "d=2 keeps only the single-copy shape");
        } else {
            assert!(c_g12.contains(&1) && c_g12.contains(&dd), "{:?} at d={}", c_g12, d);
        }
        assert_eq!(find("*24|13", 1), vec![1]);
        assert_eq!(find("*1|234", 1), vec![1]);
        assert_eq!(find("*3|124", 1), vec![1]);
        assert_eq!(find("*4|123", 1), vec![1]);
        // zero-dimensional shapes with d-1 strata each
        assert!(find("*2|1|34", 0).contains(&(d as u64 - 1)));
        assert!(find("*2|14|3", 0).contains(&(d as u64 - 1)));
    }
    println!(
        "criterion 1: PASS - (2,5) filtered types = 19 (11 meeting + 8 non-meeting; the \
         boxed ramified-chart partner is valid but filter-rejected, so the verbatim count \
         of 20 overcounts by one), counterexample rejected, (d,4) shapes and multiplicities match"
    );
}

#[test]
fn criterion_2_punctures_exact() {
    let ps = punctures_25().unwrap();
    assert_eq!(ps.len(), 10);
    let count = |label: &str| ps.iter().filter(|p| p.stratum == label).count();
    assert_eq!(
        [count("g1"), count("g2"), count("g3"), count("g4"), count("g5"), count("g6"), count("g7")],
        [1, 1, 1, 1, 2, 2, 2]
    );
    // g4: the stratum cross-ratio equals two
    let g4 = ps.iter().find(|p| p.stratum == "g4").unwrap();
    assert_eq!(g4.stratum_coords[0].1, NFElem::from_int(2));
    // g5: (s2, s3) = ((-1 +- 2i)/5, (1 +- i)/2), matched as a set
    let i = gaussian_i();
    let fifth = NFElem::Rat(Rational::new(1, 5));
    let g5_expect: BTreeSet<String> = [1i64, -1]
        .iter()
        .map(|&sgn| {
            let s2 = NFElem::from_int(-1)
                .add(&i.mul(&NFElem::from_int(2 * sgn)))
                .mul(&fifth);
            let s3 = NFElem::from_int(1).add(&i.mul(&NFElem::from_int(sgn))).mul(&half(1));
            format!("{:?}|{:?}", s2, s3)
        })
        .collect();
    let g5_got: BTreeSet<String> = ps
        .iter()
        .filter(|p| p.stratum == "g5")
        .map(|p| format!("{:?}|{:?}", p.stratum_coords[0].1, p.stratum_coords[1].1))
        .collect();
    assert_eq!(g5_got, g5_expect, "g5 exact coordinates");
    // g6: s2 = +-1/sqrt5 = +-sqrt5/5, s3 = (3 +- sqrt5)/2, certificates
    // (-1 -+ sqrt5)/2 as a set
    let s5 = sqrt5();
    let g6_expect: BTreeSet<String> = [1i64, -1]
        .iter()
        .map(|&sgn| {
            let s2 = s5.mul(&NFElem::Rat(Rational::new(sgn, 5)));
            let s3 = NFElem::from_int(3)
                .add(&s5.mul(&NFElem::from_int(sgn)))
                .mul(&half(1));
            format!("{:?}|{:?}", s2, s3)
        })
        .collect();
    let g6_got: BTreeSet<String> = ps
        .iter()
        .filter(|p| p.stratum == "g6")
        .map(|p| format!("{:?}|{:?}", p.stratum_coords[0].1, p.stratum_coords[1].1))
        .collect();
    assert_eq!(g6_got, g6_expect, "g6 exact coordinates");
    let g6_cert: BTreeSet<String> = ps
        .iter()
        .filter(|p| p.stratum == "g6")
        .map(|p| format!("{:?}", p.certificates[0].1))
        .collect();
    let g6_cert_expect: BTreeSet<String> = [1i64, -1]
        .iter()
        .map(|&sgn| {
            format!(
                "{:?}",
                NFElem::from_int(-1).add(&s5.mul(&NFElem::from_int(sgn))).mul(&half(1))
            )
        })
        .collect();
    assert_eq!(g6_cert, g6_cert_expect, "g6 certificate cross-ratio");
    // g7: ((1 +- sqrt5)/2, (3 +- sqrt5)/2)
    let g7_expect: BTreeSet<String> = [1i64, -1]
        .iter()
        .map(|&sgn| {
            let s2 = NFElem::from_int(1).add(&s5.mul(&NFElem::from_int(sgn))).mul(&half(1));
            let s3 = NFElem::from_int(3).add(&s5.mul(&NFElem::from_int(sgn))).mul(&half(1));
            format!("{:?}|{:?}", s2, s3)
        })
        .collect();
    let g7_got: BTreeSet<String> = ps
        .iter()
        .filter(|p| p.stratum == "g7")
        .map(|p| format!("{:?}|{:?}", p.stratum_coords[0].1, p.stratum_coords[1].1))
        .collect();
    assert_eq!(g7_got, g7_expect, "g7 exact coordinates");
    // fields as stated
    for p in &ps {
        let expect = match p.stratum.as_str() {
            "g5" => "Q(i)",
            "g6" | "g7" => "Q(sqrt(5))",
            _ => "Q",
        };
        assert_eq!(p.field_label, expect, "{}", p.stratum);
    }
    println!(
        "criterion 2: PASS - 10 punctures with multiplicities 1,1,1,1,2,2,2; exact \
         coordinates over Q, Q(i), Q(sqrt5) match the stated values"
    );
}

#[test]
fn criterion_3_pcf_points() {
    let ps = pcf_solve_all().unwrap();
    assert_eq!(ps.len(), 20);
    for label in ["gI", "gII", "gIII", "gIV"] {
        let group: Vec<_> = ps.iter().filter(|p| p.stratum == label).collect();
        assert_eq!(group.len(), 5, "{}", label);
        for p in &group {
            assert!(p.residual < 1e-10);
            assert!(p.jacobian_det > 1e-8);
            assert!(p.orbit_residual < 1e-8);
        }
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let d = (group[a].s2 - group[b].s2).abs() + (group[a].s3 - group[b].s3).abs();
                assert!(d > 1e-6, "points too close in {}", label);
            }
        }
    }
    println!(
        "criterion 3: PASS - four strata with five reduced critical-cycle points each, \
         residuals < 1e-10, pairwise distances > 1e-6, twenty points total"
    );
}

#[test]
fn criterion_4_cubic_identification() {
    let samples = sample_curve(25, 11).unwrap();
    assert!(samples.len() >= 20);
    let charts: Vec<_> = samples.iter().map(perdn_core::percurve::plane_chart).collect();
    let curve = fit_plane_curve(&charts, 3).unwrap();
    // expected: x^3 + y^2 z - 3 x y z + x z^2
    let expect: Vec<Rational> = monomials(3)
        .into_iter()
        .map(|m| match m {
            (3, 0, 0) => Rational::from_int(1),
            (0, 2, 1) => Rational::from_int(1),
            (1, 1, 1) => Rational::from_int(-3),
            (1, 0, 2) => Rational::from_int(1),
            _ => Rational::zero(),
        })
        .collect();
    assert_eq!(curve.coeffs, expect, "fitted cubic");
    // seed independence
    let samples2 = sample_curve(25, 77).unwrap();
    let charts2: Vec<_> = samples2.iter().map(perdn_core::percurve::plane_chart).collect();
    let curve2 = fit_plane_curve(&charts2, 3).unwrap();
    assert_eq!(curve, curve2);
    // all ten exact puncture images satisfy the cubic exactly
    let ps = punctures_25().unwrap();
    for p in &ps {
        assert!(
            curve.eval_nf(&p.plane_image).is_zero(),
            "puncture {} off the cubic",
            p.stratum
        );
    }
    println!(
        "criterion 4: PASS - fit over {} samples returns x^3 + y^2 z - 3xyz + xz^2 exactly, \
         seed-independent, and all 10 exact puncture images satisfy it with zero residual",
        samples.len()
    );
}

#[test]
fn criterion_5_elliptic_invariants() {
    let samples = sample_curve(25, 11).unwrap();
    let charts: Vec<_> = samples.iter().map(perdn_core::percurve::plane_chart).collect();
    let curve = fit_plane_curve(&charts, 3).unwrap();
    let (w, _) = weierstrass_from_cubic(&curve).unwrap();
    let inv = w.invariants().unwrap();
    assert_eq!(inv.j, Rational::new(35937, 17), "j-invariant");
    let t = transformed_cubic(&curve);
    let (wt, _) = weierstrass_from_cubic(&t).unwrap();
    let dt = wt.invariants().unwrap().disc;
    assert_eq!(dt.abs(), Rational::from_int(17), "moved model discriminant");
    let lat = periods(&w).unwrap();
    assert!((lat.omega1.re - 3.09416).abs() < 1e-3);
    assert!((lat.omega2.im - 2.74574).abs() < 1e-3);
    // rational punctures realize the cyclic group of order four
    let ps = punctures_25().unwrap();
    let to_model = |img: &[NFElem; 3]| -> ECPoint {
        if img[2].is_zero() {
            ECPoint::Infinity
        } else {
            ECPoint::Affine(img[0].neg(), img[1].clone())
        }
    };
    let rational: Vec<ECPoint> = ps
        .iter()
        .filter(|p| p.field_label == "Q")
        .map(|p| to_model(&p.plane_image))
        .collect();
    assert_eq!(rational.len(), 4);
    for p in &rational {
        assert!(p.on_curve(&w));
    }
    let orders: BTreeSet<usize> = rational
        .iter()
        .map(|p| match p.point_order(&w, TORSION_BOUND) {
            PointOrder::Order(k) => k,
            PointOrder::ExceedsBound => 0,
        })
        .collect();
    assert_eq!(orders, BTreeSet::from([1, 2, 4]), "cyclic of order four");
    // closure under addition within the four rational points
    for a in &rational {
        for b in &rational {
            let s = a.add(b, &w);
            assert!(rational.contains(&s), "rational points closed under addition");
        }
    }
    // quadratic punctures have infinite order
    let g5pts: Vec<ECPoint> = ps
        .iter()
        .filter(|p| p.stratum == "g5")
        .map(|p| to_model(&p.plane_image))
        .collect();
    let g6pts: Vec<ECPoint> = ps
        .iter()
        .filter(|p| p.stratum == "g6")
        .map(|p| to_model(&p.plane_image))
        .collect();
    let g7pts: Vec<ECPoint> = ps
        .iter()
        .filter(|p| p.stratum == "g7")
        .map(|p| to_model(&p.plane_image))
        .collect();
    for p in g5pts.iter().chain(&g6pts).chain(&g7pts) {
        assert!(p.on_curve(&w));
        assert_eq!(p.point_order(&w, TORSION_BOUND), PointOrder::ExceedsBound);
    }
    // quotient relations: conjugate sums are rational, as are the matching
    // cross-stratum sums
    assert!(g5pts[0].sum_is_rational(&g5pts[1], &w), "g5 conjugate sum");
    assert!(g6pts[0].sum_is_rational(&g6pts[1], &w), "g6 conjugate sum");
    let cross = g6pts
        .iter()
        .all(|a| g7pts.iter().any(|b| a.sum_is_rational(b, &w)));
    assert!(cross, "each g6 point pairs rationally with a g7 point");
    // multiples of a quadratic puncture stay irrational (nonzero in the
    // quotient by the rational points)
    let mut acc = ECPoint::Infinity;
    for _ in 1..=TORSION_BOUND {
        acc = acc.add(&g6pts[0], &w);
        match &acc {
            ECPoint::Infinity => panic!("unexpected torsion"),
            ECPoint::Affine(x, y) => {
                assert!(
                    x.is_rational().is_none() || y.is_rational().is_none(),
                    "multiple of a quadratic puncture became rational"
                );
            }
        }
    }
    println!(
        "criterion 5: PASS - j = 35937/17 exactly, moved model has |disc| = 17, periods \
         (3.09416, 2.74574i) within 1e-3 (second period purely imaginary, magnitude \
         convention), rational punctures form Z/4Z, quadratic punctures exceed the \
         torsion bound {}, and the stated sums are rational",
        TORSION_BOUND
    );
}

#[test]
fn criterion_6_period4_family() {
    for d in 2..=6usize {
        let r = perd4_report(d).unwrap();
        assert_eq!(r.total_punctures, d * d, "puncture total at degree {}", d);
        assert_eq!(r.genus, (d - 1) * (d - 2) / 2);
        assert_eq!(r.gonality, d - 1);
        assert_eq!(r.critical_cycle_points, 3 * d);
        // the exact discriminant agrees with the corrected closed form at
        // every degree; the verbatim exponent form only holds at d = 2
        assert_eq!(r.disc_g, r.disc_corrected_form, "closed form at degree {}", d);
        if d == 2 {
            assert_eq!(r.disc_g, r.disc_verbatim_form);
        } else {
            assert!(
                r.disc_g != r.disc_verbatim_form,
                "the verbatim exponent form is a typo for d >= 3"
            );
        }
        assert!(r.g_distinct_roots, "g has d distinct roots");
        assert!(r.g_has_root_one);
        assert!(!r.g_other_unity_roots, "no other root of unity divides g");
        // d distinct complex roots, numerically
        let gcx = UPoly::new(
            r.g_poly
                .coeffs
                .iter()
                .map(|c| perdn_core::exactnum::Cx::new(c.to_f64(), 0.0))
                .collect(),
        );
        let roots = perdn_core::exactnum::roots_complex(&gcx, 1e-10).unwrap();
        assert_eq!(roots.len(), d);
        assert!(roots.iter().all(|&(_, m)| m == 1));
        assert!(roots
            .iter()
            .any(|&(z, _)| (z - perdn_core::exactnum::Cx::new(1.0, 0.0)).abs() < 1e-8));
    }
    println!(
        "criterion 6: PASS - degrees 2..6 give d^2 punctures and 3d critical-cycle \
         points; disc(g) matches the corrected closed form (+-d^d((d+1)^(d-1)+(d-1)^(d-1))) \
         exactly at every degree (the verbatim (d-1)^(d+1) exponent only matches at d = 2); \
         g has d distinct roots including 1 and no other root of unity"
    );
}

#[test]
fn criterion_7_rho_degree() {
    assert_eq!(rho_degree().unwrap(), 2);
    assert_eq!(rho_degree_dropping(4).unwrap(), 2);
    println!(
        "criterion 7: PASS - the forgetful cross-ratio map has stable generic fiber \
         cardinality 2, for both dropped marks"
    );
}

#[test]
fn criterion_8_property_suites() {
    // the power relation on random chart points
    let mut state = 0xabcdef99u64;
    let mut rnd = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) as f64 / (1u64 << 31) as f64) * 3.0 - 1.5
    };
    for seed in 0..10u64 {
        let x = vec![
            perdn_core::exactnum::Cx::new(1.0 + rnd(), rnd()),
            perdn_core::exactnum::Cx::new(rnd() - 1.2, rnd()),
            perdn_core::exactnum::Cx::new(rnd() + 0.3, rnd() + 1.1),
        ];
        let Ok(h) = HPoint::new(2, 5, x) else { continue };
        assert!(power_relation_residual(&h, seed) < 1e-9);
    }
    // invariant relation on the model curve
    let samples = sample_curve(20, 11).unwrap();
    let charts: Vec<_> = samples.iter().map(perdn_core::percurve::plane_chart).collect();
    let curve = fit_plane_curve(&charts, 3).unwrap();
    let (w, _) = weierstrass_from_cubic(&curve).unwrap();
    let inv = w.invariants().unwrap();
    assert_eq!(
        inv.c4.pow(3).sub(&inv.c6.pow(2)),
        Rational::from_int(1728).mul(&inv.disc)
    );
    // the remaining suites (cross-ratio functional equations and orbit
    // closure, plumbing versus boundary values, vanishing orders, field
    // axioms, series arithmetic, wp parity/periodicity/differential
    // equation) run as unit tests next to their modules, and the
    // stratum-level order and leading-term checks in the analysis tests
    let sys = diagonal_system(2, 5).unwrap();
    for h in &samples {
        assert!(sys.residual(&h.x) < 1e-10);
    }
    println!(
        "criterion 8: PASS - power relation < 1e-9 on random chart points, \
         c4^3 - c6^2 = 1728 disc exactly, samples satisfy both formulations; module-level \
         property suites run in the unit and analysis tests"
    );
}

#[test]
fn criterion_9_render_smoke() {
    let cfg = RenderConfig {
        width: 64,
        height: 64,
        maxiter: 120,
        eps_attract: 1e-3,
        overlay_punctures: false,
        overlay_pcf: false,
        ..Default::default()
    };
    let a = render(&cfg);
    let b = render(&cfg);
    assert_eq!(a.to_ppm(), b.to_ppm(), "bit-identical across runs");
    let mut attracted = 0;
    let mut not_attracted = 0;
    for px in a.data.chunks(3) {
        if px == [0, 0, 0] {
            not_attracted += 1;
        } else if px != [24, 24, 24] {
            attracted += 1;
        }
    }
    assert!(attracted > 0 && not_attracted > 0, "mixed classifications");
    // every critical-cycle point classifies as attracted
    let pcf = pcf_solve_all().unwrap();
    assert_eq!(pcf.len(), 20);
    for p in &pcf {
        let f = perdn_core::percurve::DynMap::from_cycle(2, p.config.clone()).unwrap();
        assert!(
            matches!(classify(&f, 200, 1e-3), Classification::Attracted { .. }),
            "critical-cycle point in {} not attracted",
            p.stratum
        );
    }
    // JSON report round-trips
    let ps = punctures_25().unwrap();
    let v = punctures_json(&ps);
    let s = serde_json::to_string(&v).unwrap();
    let v2: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v, v2);
    // stability under a doubled iteration budget, logged rather than
    // asserted: classification flips concentrate on basin boundaries
    let cfg2 = RenderConfig { maxiter: 240, ..cfg.clone() };
    let c = render(&cfg2);
    let mut confirmed = 0;
    let mut retracted = 0;
    for (p, q) in a.data.chunks(3).zip(c.data.chunks(3)) {
        let pb = p == [0, 0, 0];
        let qb = q == [0, 0, 0];
        if pb && !qb {
            confirmed += 1;
        }
        if !pb && qb {
            retracted += 1;
        }
    }
    assert_eq!(retracted, 0, "classification must refine monotonically");
    println!(
        "criterion 9: note - doubling maxiter confirms {} more of {} pixels ({:.2}%), \
         never retracting one (slow capture near basin boundaries)",
        confirmed,
        cfg.width * cfg.height,
        100.0 * confirmed as f64 / (cfg.width * cfg.height) as f64
    );
    println!(
        "criterion 9: PASS - 64x64 render mixes attracted ({}) and unattracted ({}) \
         pixels, output is bit-identical across runs, all 20 critical-cycle points \
         classify attracted, JSON reports round-trip",
        attracted, not_attracted
    );
}
