//! Numeric sampling of the open curve: rational slices in the first
//! coordinate, exact resultant elimination to one variable, simultaneous
//! root finding, and Newton polish of the pair, with wall and exact-period
//! filtering. Deterministic under the seed.

use super::diagonal::{diagonal_system, DiagonalSystem};
use super::dynmap::DynMap;
use crate::exactnum::{roots_complex, Cx, MPoly, Rational, UPoly};
use crate::exactnum::mpoly::resultant_in;
use crate::moduli::{HPoint, PointP1};

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const POLISH_TOL: f64 = 1e-13;
pub const DISTINCT_TOL: f64 = 1e-6;

pub struct Sampler {
    pub sys: DiagonalSystem,
    dx4: [MPoly<Rational>; 2],
    dx5: [MPoly<Rational>; 2],
}

impl Sampler {
    pub fn new() -> Self {
        let sys = diagonal_system(2, 5).expect("period five system");
        let dx4 = [sys.equations[0].partial(1), sys.equations[1].partial(1)];
        let dx5 = [sys.equations[0].partial(2), sys.equations[1].partial(2)];
        Sampler { sys, dx4, dx5 }
    }

    /// Solutions over a fixed rational slice x3 = a/b.
    fn slice(&self, x3: Rational) -> Vec<(Cx, Cx)> {
        let f1 = self.sys.equations[0].substitute(0, &x3);
        let f2 = self.sys.equations[1].substitute(0, &x3);
        // eliminate x5 exactly
        let r = resultant_in(&f1, &f2, 2);
        let coeffs = r.coeffs_in(1);
        let upoly = UPoly::new(
            coeffs
                .into_iter()
                .map(|c| {
                    let v = c.constant_value().expect("univariate in x4");
                    Cx::new(v.to_f64(), 0.0)
                })
                .collect(),
        );
        let Ok(x4roots) = roots_complex(&upoly, 1e-8) else {
            return vec![];
        };
        let x3c = Cx::new(x3.to_f64(), 0.0);
        let mut out = Vec::new();
        for (x4, _) in x4roots {
            // candidate x5 values: roots of f1 specialized
            let f1s = f1.substitute_cx(1, x4);
            let Ok(x5roots) = roots_complex(&f1s, 1e-8) else { continue };
            for (x5, _) in x5roots {
                if let Some((p4, p5)) = self.polish(x3c, x4, x5) {
                    out.push((p4, p5));
                }
            }
        }
        out
    }

    /// Newton polish of (x4, x5) at fixed x3; None if it fails to converge.
    fn polish(&self, x3: Cx, mut x4: Cx, mut x5: Cx) -> Option<(Cx, Cx)> {
        let ev = |p: &MPoly<Rational>, v: &[Cx; 3]| {
            p.eval_map(&v[..], &|q: &Rational| Cx::new(q.to_f64(), 0.0))
        };
        for _ in 0..60 {
            let v = [x3, x4, x5];
            let f0 = ev(&self.sys.equations[0], &v);
            let f1 = ev(&self.sys.equations[1], &v);
            if f0.abs().max(f1.abs()) < POLISH_TOL {
                return Some((x4, x5));
            }
            let j00 = ev(&self.dx4[0], &v);
            let j01 = ev(&self.dx5[0], &v);
            let j10 = ev(&self.dx4[1], &v);
            let j11 = ev(&self.dx5[1], &v);
            let det = j00 * j11 - j01 * j10;
            if det.abs() < 1e-18 {
                return None;
            }
            let dx = (f0 * j11 - f1 * j01) / det;
            let dy = (j00 * f1 - j10 * f0) / det;
            x4 = x4 - dx;
            x5 = x5 - dy;
            if !x4.is_finite() || !x5.is_finite() {
                return None;
            }
        }
        None
    }
}

/// Checks the exact period: the map built from the point carries its cycle
/// with small residual and no earlier return of the marked point.
pub fn exact_period_ok(h: &HPoint) -> bool {
    let cycle: Vec<PointP1<Cx>> = (1..=h.n).map(|i| PointP1::Finite(h.position(i))).collect();
    let Ok(f) = DynMap::from_cycle(h.d, cycle) else {
        return false;
    };
    if f.cycle_residual() > 1e-8 {
        return false;
    }
    // the marked critical point must not return early
    let mut z = super::dynmap::point_h(PointP1::Finite(Cx::new(0.0, 0.0)));
    let zero = super::dynmap::point_h(PointP1::Finite(Cx::new(0.0, 0.0)));
    for _ in 0..h.n - 1 {
        z = f.step_h(z);
        if super::dynmap::chordal(z, zero) < 1e-6 {
            return false;
        }
    }
    z = f.step_h(z);
    super::dynmap::chordal(z, zero) < 1e-8
}

/// Deterministic sample of points of the open curve for d = 2, n = 5.
pub fn sample_curve(count: usize, seed: u64) -> Result<Vec<HPoint>, String> {
    let sampler = Sampler::new();
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(12345);
    let mut out: Vec<HPoint> = Vec::new();
    let mut budget = 0;
    while out.len() < count && budget < 4000 {
        budget += 1;
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let num = ((state >> 33) % 4001) as i64 - 2000;
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let den = ((state >> 33) % 400) as i64 + 17;
        if num == 0 || num == den {
            continue;
        }
        let x3 = Rational::new(num, den);
        for (x4, x5) in sampler.slice(x3.clone()) {
            if out.len() >= count {
                break;
            }
            let x3c = Cx::new(x3.to_f64(), 0.0);
            let Ok(h) = HPoint::new(2, 5, vec![x3c, x4, x5]) else {
                continue;
            };
            if !h.invariants_hold(1e-8) {
                continue;
            }
            if sampler.sys.residual(&[x3c, x4, x5]) > RESIDUAL_TOL {
                continue;
            }
            if !exact_period_ok(&h) {
                continue;
            }
            // distinctness against earlier samples
            let close = out.iter().any(|p| {
                (p.x[0] - x3c).abs() < DISTINCT_TOL
                    && (p.x[1] - x4).abs() < DISTINCT_TOL
                    && (p.x[2] - x5).abs() < DISTINCT_TOL
            });
            if !close {
                out.push(h);
            }
        }
    }
    if out.len() < count {
        return Err(format!(
            "sampler produced {} of {} requested points",
            out.len(),
            count
        ));
    }
    Ok(out)
}

/// Plane-model chart of a sample: (X, Y) = (CR(3,4,5,1), CR(5,2,3,4)).
pub fn plane_chart(h: &HPoint) -> (Cx, Cx) {
    let cr = |p1: Cx, p2: Cx, p3: Cx, p4: Cx| ((p4 - p2) * (p3 - p1)) / ((p4 - p1) * (p3 - p2));
    let p = |i: usize| h.position(i);
    let x = cr(p(3), p(4), p(5), p(1));
    let y = cr(p(5), p(2), p(3), p(4));
    (x, y)
}

impl MPoly<Rational> {
    /// Specialize one variable to a complex value, producing a univariate
    /// complex polynomial in the remaining variable (two-variable input).
    fn substitute_cx(&self, var: usize, value: Cx) -> UPoly<Cx> {
        assert_eq!(self.nvars, 3);
        let other = (0..3).find(|&v| v != var && self.degree_in(v) > 0).unwrap_or(2);
        let mut coeffs = vec![Cx::new(0.0, 0.0); self.degree_in(other) as usize + 1];
        for (e, c) in &self.terms {
            let k = e[other] as usize;
            let cc = Cx::new(c.to_f64(), 0.0) * value.powi(e[var] as u32);
            coeffs[k] = coeffs[k] + cc;
        }
        UPoly::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::pi_maps;

    #[test]
    fn samples_satisfy_both_formulations_and_period() {
        let samples = sample_curve(6, 42).unwrap();
        assert_eq!(samples.len(), 6);
        let sys = diagonal_system(2, 5).unwrap();
        for h in &samples {
            assert!(sys.residual(&h.x) < RESIDUAL_TOL);
            // cross-ratio formulation: the two projections agree
            let (p1, p2) = pi_maps(h);
            for (a, b) in p1.iter().zip(&p2) {
                assert!((*a - *b).abs() < 1e-8, "projection mismatch");
            }
            assert!(exact_period_ok(h));
        }
    }

    #[test]
    fn seed_determinism() {
        let a = sample_curve(4, 7).unwrap();
        let b = sample_curve(4, 7).unwrap();
        for (p, q) in a.iter().zip(&b) {
            for (x, y) in p.x.iter().zip(&q.x) {
                assert_eq!(x.re, y.re);
                assert_eq!(x.im, y.im);
            }
        }
    }
}
