//! Degree of the forgetful cross-ratio map on the curve, computed as a
//! generic fiber cardinality.
//!
//! The fiber system is reduced by hand to one univariate polynomial: the
//! dropped-mark equation solves for the square of one coordinate, a cycle
//! equation is linear in another, and the remaining cycle equation splits
//! into even and odd parts in the square root. No multivariate elimination.

use super::diagonal::diagonal_system;
use super::sampler::exact_period_ok;
use crate::exactnum::{roots_complex, Cx, Field, MPoly, RFunc, Rational, UPoly};
use crate::moduli::HPoint;

/// Value in the quadratic extension Q(x)(y) with y^2 = S(x): even + y*odd.
#[derive(Clone)]
struct Split {
    even: RFunc<Rational>,
    odd: RFunc<Rational>,
}

fn split_eval(
    p: &MPoly<Rational>,
    base: &[Option<RFunc<Rational>>; 3],
    sqrt_var: usize,
    s: &RFunc<Rational>,
) -> Split {
    // evaluate with var `sqrt_var` treated as the square root of S
    let one = RFunc::constant(1, Rational::one());
    let zero = RFunc::constant(1, Rational::zero());
    let mut acc = Split { even: zero.clone(), odd: zero.clone() };
    for (e, c) in &p.terms {
        let mut even = RFunc::constant(1, c.clone());
        let mut odd = zero.clone();
        for (v, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if v == sqrt_var {
                // multiply by y^k = S^(k/2) * (1 or y)
                let half = (k / 2) as u32;
                let mut f = one.clone();
                for _ in 0..half {
                    f = f.mul(s);
                }
                even = even.mul(&f);
                odd = odd.mul(&f);
                if k % 2 == 1 {
                    // multiply by y: (a + yb) y = S b + y a
                    let na = s.mul(&odd);
                    let nb = even;
                    even = na;
                    odd = nb;
                }
            } else {
                let b = base[v].as_ref().expect("assigned base variable");
                let mut f = one.clone();
                for _ in 0..k {
                    f = f.mul(b);
                }
                even = even.mul(&f);
                odd = odd.mul(&f);
            }
        }
        acc.even = acc.even.add(&even);
        acc.odd = acc.odd.add(&odd);
    }
    acc
}

/// Fiber cardinality of the forgetful map dropping mark 5 or 4, over c.
pub fn fiber_count(drop_mark: usize, c: Rational) -> Result<usize, String> {
    let sys = diagonal_system(2, 5)?;
    let f1 = &sys.equations[0];
    let f2 = &sys.equations[1];
    let x = RFunc::<Rational>::var(1, 0); // the free chart parameter
    let one = RFunc::constant(1, Rational::one());
    let cc = RFunc::constant(1, c.clone());
    // the dropped-mark equation reads x5^2 = S with S = x^2 (c - 1)/(c - x^2),
    // where x is the first (drop 5) or second (drop 4) coordinate
    let s = x
        .mul(&x)
        .mul(&cc.sub(&one))
        .div(&cc.sub(&x.mul(&x)))
        .ok_or("degenerate target value")?;
    // base assignments: (drop 5) parametrize by x3, solve f1 for x4 (linear);
    // (drop 4) parametrize by x4, solve f2 for x3 (linear)
    let (lin_eq, lin_var, residual_eq, base0): (&MPoly<Rational>, usize, &MPoly<Rational>, [Option<RFunc<Rational>>; 3]) =
        match drop_mark {
            5 => (f1, 1, f2, [Some(x.clone()), None, None]),
            4 => (f2, 0, f1, [None, Some(x.clone()), None]),
            _ => return Err("only the last two marks are dropped".into()),
        };
    // linear solve: lin_eq = c0 + c1 * x_linvar with split coefficients
    let coeffs = lin_eq.coeffs_in(lin_var);
    assert_eq!(coeffs.len(), 2, "cycle equation linear in the solved variable");
    let c0 = split_eval(&coeffs[0], &base0, 2, &s);
    let c1 = split_eval(&coeffs[1], &base0, 2, &s);
    // x_lin = -(c0even + y c0odd)/(c1even + y c1odd): rationalize by the
    // conjugate: denominator D = c1even^2 - S c1odd^2
    let den = c1.even.mul(&c1.even).sub(&s.mul(&c1.odd).mul(&c1.odd));
    if den.is_zero() {
        return Err("linear solve degenerates".into());
    }
    let num_even = c0
        .even
        .mul(&c1.even)
        .sub(&s.mul(&c0.odd).mul(&c1.odd))
        .neg();
    let num_odd = c0.odd.mul(&c1.even).sub(&c0.even.mul(&c1.odd)).neg();
    // substitute everything into the residual equation, splitting in y
    let rc = residual_eq.coeffs_in(lin_var);
    let mut total = Split {
        even: RFunc::constant(1, Rational::zero()),
        odd: RFunc::constant(1, Rational::zero()),
    };
    // x_lin = (num_even + y num_odd)/den: accumulate powers
    let pow = Split { even: den.clone(), odd: RFunc::constant(1, Rational::zero()) };
    // normalize: represent x_lin^k with denominator den^k; multiply each
    // coefficient by den^(deg - k) to clear
    let deg = rc.len() - 1;
    let mut den_pow = vec![RFunc::constant(1, Rational::one())];
    for _ in 0..deg {
        let last = den_pow.last().unwrap().clone();
        den_pow.push(last.mul(&den));
    }
    for (k, coeff) in rc.iter().enumerate() {
        let cs = split_eval(coeff, &base0, 2, &s);
        // cs * x_lin^k * den^(deg-k)
        let mut term = Split {
            even: cs.even.mul(&den_pow[deg - k]),
            odd: cs.odd.mul(&den_pow[deg - k]),
        };
        if k > 0 {
            // multiply by (num_even + y num_odd)^k
            let mut p = Split { even: num_even.clone(), odd: num_odd.clone() };
            for _ in 1..k {
                p = Split {
                    even: p.even.mul(&num_even).add(&s.mul(&p.odd).mul(&num_odd)),
                    odd: p.even.mul(&num_odd).add(&p.odd.mul(&num_even)),
                };
            }
            term = Split {
                even: term.even.mul(&p.even).add(&s.mul(&term.odd).mul(&p.odd)),
                odd: term.even.mul(&p.odd).add(&term.odd.mul(&p.even)),
            };
        }
        total.even = total.even.add(&term.even);
        total.odd = total.odd.add(&term.odd);
    }
    let _ = pow;
    // both branches vanish iff even^2 - S odd^2 = 0
    let pbranch = total
        .even
        .mul(&total.even)
        .sub(&s.mul(&total.odd).mul(&total.odd));
    let pnum = pbranch.num.clone();
    let coeffs = pnum.coeffs_in(0);
    let exact = UPoly::new(
        coeffs
            .into_iter()
            .map(|q| q.constant_value().expect("univariate"))
            .collect(),
    );
    if exact.degree().is_none() {
        return Err("residual polynomial vanished identically".into());
    }
    // exact squarefree reduction keeps the root finder honest on the heavily
    // squared branch polynomial
    let sf = exact.squarefree_part();
    let scale = sf
        .coeffs
        .iter()
        .map(|q| q.to_f64().abs())
        .fold(0.0f64, f64::max);
    let ru = UPoly::new(
        sf.coeffs
            .iter()
            .map(|q| Cx::new(q.to_f64() / scale, 0.0))
            .collect(),
    );
    let roots = roots_complex(&ru, 1e-6).map_err(|e| e.to_string())?;
    // reconstruct candidates numerically and validate on the honest system
    let cf = Cx::new(c.to_f64(), 0.0);
    let evalc =
        |p: &MPoly<Rational>, v: &[Cx; 3]| p.eval_map(&v[..], &|q: &Rational| Cx::new(q.to_f64(), 0.0));
    let mut solutions: Vec<[Cx; 3]> = Vec::new();
    for (xv, _) in roots {
        let s_val = xv * xv * (cf - Cx::new(1.0, 0.0)) / (cf - xv * xv);
        for sign in [1.0, -1.0] {
            let x5 = s_val.sqrt() * sign;
            // linear back-solve numerically
            let mut v = [Cx::new(0.0, 0.0); 3];
            match drop_mark {
                5 => {
                    v[0] = xv;
                    v[2] = x5;
                }
                _ => {
                    v[1] = xv;
                    v[2] = x5;
                }
            }
            let c0v = evalc(&lin_eq.coeffs_in(lin_var)[0], &v);
            let c1v = evalc(&lin_eq.coeffs_in(lin_var)[1], &v);
            if c1v.abs() < 1e-12 {
                continue;
            }
            v[lin_var] = -c0v / c1v;
            // Newton polish on the two cycle equations in (x4, x5)
            let d1a = f1.partial(1);
            let d1b = f1.partial(2);
            let d2a = f2.partial(1);
            let d2b = f2.partial(2);
            for _ in 0..50 {
                let g1 = evalc(f1, &v);
                let g2 = evalc(f2, &v);
                if g1.abs().max(g2.abs()) < 1e-13 {
                    break;
                }
                let j00 = evalc(&d1a, &v);
                let j01 = evalc(&d1b, &v);
                let j10 = evalc(&d2a, &v);
                let j11 = evalc(&d2b, &v);
                let det = j00 * j11 - j01 * j10;
                if det.abs() < 1e-18 {
                    break;
                }
                let dx = (g1 * j11 - g2 * j01) / det;
                let dy = (j00 * g2 - j10 * g1) / det;
                v[1] = v[1] - dx;
                v[2] = v[2] - dy;
            }
            // the dropped-mark equation, from the original cross-ratio
            let xx = match drop_mark {
                5 => v[0],
                _ => v[1],
            };
            let f3res = xx * xx * (Cx::new(1.0, 0.0) - v[2] * v[2])
                - cf * (xx * xx - v[2] * v[2]);
            let res = evalc(f1, &v).abs().max(evalc(f2, &v).abs()).max(f3res.abs());
            if res > 1e-8 {
                continue;
            }
            let Ok(h) = HPoint::new(2, 5, v.to_vec()) else { continue };
            if !h.invariants_hold(1e-8) || !exact_period_ok(&h) {
                continue;
            }
            if !solutions
                .iter()
                .any(|q| (q[0] - v[0]).abs() + (q[1] - v[1]).abs() + (q[2] - v[2]).abs() < 1e-6)
            {
                solutions.push(v);
            }
        }
    }
    // ramification detection: at a branch value the fiber point is doubled
    // and the full Jacobian of the fiber system degenerates there
    let f3_grad = |v: &[Cx; 3]| -> [Cx; 3] {
        let (xi, other) = match drop_mark {
            5 => (0usize, v[0]),
            _ => (1usize, v[1]),
        };
        let x5 = v[2];
        // F3 = x^2 (1 - x5^2) - c (x^2 - x5^2)
        let dfx = other * (Cx::new(2.0, 0.0) - x5 * x5 * Cx::new(2.0, 0.0)) - cf * other * Cx::new(2.0, 0.0);
        let dfx5 = -other * other * x5 * Cx::new(2.0, 0.0) + cf * x5 * Cx::new(2.0, 0.0);
        let mut g = [Cx::new(0.0, 0.0); 3];
        g[xi] = dfx;
        g[2] = dfx5;
        g
    };
    for v in &solutions {
        let row = |p: &MPoly<Rational>| -> [Cx; 3] {
            [
                evalc(&p.partial(0), v),
                evalc(&p.partial(1), v),
                evalc(&p.partial(2), v),
            ]
        };
        let r1 = row(f1);
        let r2 = row(f2);
        let r3 = f3_grad(v);
        let det = r1[0] * (r2[1] * r3[2] - r2[2] * r3[1])
            - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
            + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0]);
        let scale = [r1, r2, r3]
            .iter()
            .flat_map(|r| r.iter().map(|c| c.abs()))
            .fold(0.0f64, f64::max)
            .powi(3)
            .max(1e-30);
        if det.abs() / scale < 1e-8 {
            return Err("ramified target".into());
        }
    }
    Ok(solutions.len())
}

/// Degree of the forgetful map: stable generic fiber cardinality across
/// random targets; must come out 2.
pub fn rho_degree() -> Result<usize, String> {
    rho_degree_dropping(5)
}

pub fn rho_degree_dropping(drop_mark: usize) -> Result<usize, String> {
    // Walk a deterministic target list until three fibers agree at the
    // running maximum. A finite map's fiber cardinality only ever drops at
    // special targets (ramification, or a fiber point landing outside the
    // open curve), so the stable maximum is the degree.
    let targets = [
        (7i64, 13i64),
        (-5, 9),
        (22, 7),
        (3, 11),
        (-9, 4),
        (15, 8),
        (1, 3),
        (5, 7),
    ];
    let mut max = 0usize;
    let mut hits = 0usize;
    for (n, d) in targets {
        let k = match fiber_count(drop_mark, Rational::new(n, d)) {
            Ok(k) => k,
            Err(e) if e == "ramified target" => continue,
            Err(e) => return Err(e),
        };
        if k > max {
            max = k;
            hits = 1;
        } else if k == max {
            hits += 1;
        }
        if hits == 3 {
            return Ok(max);
        }
    }
    Err(format!(
        "fiber count did not stabilize (max {} seen {} times)",
        max, hits
    ))
}
