//! From a lattice point to a curve configuration: evaluate the Weierstrass
//! function, pass through the recorded coordinate changes to the plane chart,
//! and recover the configuration by solving the chart constraints against
//! one cycle equation, keeping the candidate with the smallest residual on
//! the full system.

use super::wp::{wp, WpValue};
use crate::elliptic::Lattice;
use crate::exactnum::{roots_complex, Cx, MPoly, Rational, UPoly};
use crate::percurve::diagonal::DiagonalSystem;

pub const PARAM_RESIDUAL: f64 = 1e-7;

#[derive(Clone, Copy, Debug)]
pub enum ParamPoint {
    Degenerate,
    Config { x3: Cx, x4: Cx, x5: Cx },
}

/// Plane chart (X, Y) of a lattice point: short-form coordinates shifted to
/// the long Weierstrass model, then x negated into the plane model.
pub fn plane_point(u: Cx, lat: &Lattice) -> Option<(Cx, Cx)> {
    match wp(u, lat) {
        WpValue::Pole => None,
        WpValue::Value { p, dp } => {
            // long model y^2 + 3xy = x^3 + x: x = wp - 3/4, y = wp'/2 - 3x/2
            let xw = p - Cx::new(0.75, 0.0);
            let yw = dp * 0.5 - xw * 1.5;
            // plane chart has x negated
            Some((-xw, yw))
        }
    }
}

pub struct ParamSolver {
    pub sys: DiagonalSystem,
    f1_dx4: MPoly<Rational>,
    f1_dx5: MPoly<Rational>,
    f2_dx4: MPoly<Rational>,
    f2_dx5: MPoly<Rational>,
}

impl ParamSolver {
    pub fn new(sys: DiagonalSystem) -> Self {
        let f1 = sys.equations[0].clone();
        let f2 = sys.equations[1].clone();
        ParamSolver {
            f1_dx4: f1.partial(1),
            f1_dx5: f1.partial(2),
            f2_dx4: f2.partial(1),
            f2_dx5: f2.partial(2),
            sys,
        }
    }

    fn evalc(&self, p: &MPoly<Rational>, v: &[Cx; 3]) -> Cx {
        p.eval_map(&v[..], &|q: &Rational| Cx::new(q.to_f64(), 0.0))
    }

    /// Recover the configuration with plane chart (X, Y).
    ///
    /// The chart equations give x4 rationally in (x3, x5; X) and one more
    /// polynomial relation; substituting into the first cycle equation and
    /// clearing gives a univariate polynomial in x3 whose coefficients are
    /// read off by evaluation at interpolation nodes. Candidates are then
    /// polished and ranked by residual on the full system.
    pub fn param_point(&self, x: Cx, y: Cx) -> ParamPoint {
        // Chart: X = x4 (x5 - x3) / (x3 (x5 - x4))  =>
        //        x4 = X x3 x5 / (x5 - x3 + X x3)
        //        Y = (x4 - 1)(x3 - x5) / ((x4 - x5)(x3 - 1))
        // After substituting x4, both Y-equation and the first cycle
        // equation become rational in (x3, x5); eliminating x5 numerically
        // via interpolated resultants gives candidates for x3.
        let one = Cx::new(1.0, 0.0);
        let x4_of = |x3: Cx, x5: Cx| -> Cx {
            let den = x5 - x3 + x * x3;
            if den.abs() < 1e-14 {
                return Cx::new(f64::INFINITY, 0.0);
            }
            x * x3 * x5 / den
        };
        // polynomial in x5 (coefficients in x3) for the Y-equation, cleared:
        //   Y (x4 - x5)(x3 - 1) - (x4 - 1)(x3 - x5) = 0 with x4 substituted,
        //   multiplied by the x4-denominator
        let ypoly = |x3: Cx, x5: Cx| -> Cx {
            let den = x5 - x3 + x * x3;
            let x4n = x * x3 * x5; // x4 * den
            y * (x4n - x5 * den) * (x3 - one) - (x4n - den) * (x3 - x5)
        };
        // first cycle equation with x4 substituted and denominator cleared
        let f1poly = |x3: Cx, x5: Cx| -> Cx {
            let den = x5 - x3 + x * x3;
            let x4 = x4_of(x3, x5);
            if !x4.is_finite() {
                return Cx::new(f64::NAN, 0.0);
            }
            self.evalc(&self.sys.equations[0], &[x3, x4, x5]) * den
        };
        // resultant in x5 by interpolation in x3
        let deg_bound = 12usize;
        let nodes: Vec<Cx> = (0..=2 * deg_bound)
            .map(|k| {
                let t = 0.37 + 0.61 * k as f64;
                Cx::new(1.7 * t.cos(), 1.3 * t.sin())
            })
            .collect();
        let mut values = Vec::with_capacity(nodes.len());
        for &x3 in &nodes {
            // univariate polys in x5 by sampling powers: build via Newton on
            // Vandermonde is overkill; both polys have low degree in x5, so
            // sample and interpolate them too
            let p1 = interp_poly(|x5| ypoly(x3, x5), 4);
            let p2 = interp_poly(|x5| f1poly(x3, x5), 6);
            let r = resultant_cx(&p1, &p2);
            values.push(r);
        }
        let rpoly = interp_from(&nodes, &values);
        let Ok(roots) = roots_complex(&rpoly, 1e-5) else {
            return ParamPoint::Degenerate;
        };
        let mut best: Option<([Cx; 3], f64)> = None;
        for (x3, _) in roots {
            // for each x3: solve the Y-equation for x5 (low degree), then x4
            let p1 = interp_poly(|x5| ypoly(x3, x5), 4);
            let Ok(x5roots) = roots_complex(&p1, 1e-5) else { continue };
            for (x5, _) in x5roots {
                let x4 = x4_of(x3, x5);
                if !x4.is_finite() {
                    continue;
                }
                let mut v = [x3, x4, x5];
                // polish on the two cycle equations at fixed x3
                for _ in 0..40 {
                    let g1 = self.evalc(&self.sys.equations[0], &v);
                    let g2 = self.evalc(&self.sys.equations[1], &v);
                    if g1.abs().max(g2.abs()) < 1e-13 {
                        break;
                    }
                    let j00 = self.evalc(&self.f1_dx4, &v);
                    let j01 = self.evalc(&self.f1_dx5, &v);
                    let j10 = self.evalc(&self.f2_dx4, &v);
                    let j11 = self.evalc(&self.f2_dx5, &v);
                    let det = j00 * j11 - j01 * j10;
                    if det.abs() < 1e-18 {
                        break;
                    }
                    v[1] = v[1] - (g1 * j11 - g2 * j01) / det;
                    v[2] = v[2] - (j00 * g2 - j10 * g1) / det;
                }
                // residual on the full system including chart equations
                let g1 = self.evalc(&self.sys.equations[0], &v).abs();
                let g2 = self.evalc(&self.sys.equations[1], &v).abs();
                let chart = {
                    let xe = v[1] * (v[2] - v[0]) / (v[0] * (v[2] - v[1])) - x;
                    let ye = (v[1] - one) * (v[0] - v[2]) / ((v[1] - v[2]) * (v[0] - one)) - y;
                    xe.abs().max(ye.abs())
                };
                let res = g1.max(g2).max(chart);
                if res.is_finite() && res < PARAM_RESIDUAL {
                    if best.map_or(true, |(_, b)| res < b) {
                        best = Some((v, res));
                    }
                }
            }
        }
        match best {
            Some(([x3, x4, x5], _)) => ParamPoint::Config { x3, x4, x5 },
            None => ParamPoint::Degenerate,
        }
    }
}

/// Interpolate a complex function known to be a polynomial of the given
/// degree bound, sampling on a circle.
fn interp_poly(f: impl Fn(Cx) -> Cx, deg: usize) -> UPoly<Cx> {
    let nodes: Vec<Cx> = (0..=deg)
        .map(|k| {
            let t = 0.21 + 0.83 * k as f64;
            Cx::new(1.45 * t.cos(), 1.45 * t.sin())
        })
        .collect();
    let values: Vec<Cx> = nodes.iter().map(|&z| f(z)).collect();
    interp_from_nodes(&nodes, &values)
}

fn interp_from(nodes: &[Cx], values: &[Cx]) -> UPoly<Cx> {
    interp_from_nodes(nodes, values)
}

/// Newton divided differences on arbitrary nodes.
fn interp_from_nodes(nodes: &[Cx], values: &[Cx]) -> UPoly<Cx> {
    let n = nodes.len();
    let mut coef = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    // expand Newton form to monomial coefficients
    let mut poly = UPoly::new(vec![]);
    let mut basis = UPoly::new(vec![Cx::new(1.0, 0.0)]);
    for i in 0..n {
        poly = poly.add(&basis.scale(&coef[i]));
        let lin = UPoly::new(vec![-nodes[i], Cx::new(1.0, 0.0)]);
        basis = basis.mul(&lin);
    }
    // trim numerically tiny leading coefficients
    let scale = poly.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1e-300);
    let mut cs = poly.coeffs;
    while cs.last().map_or(false, |c| c.abs() < 1e-9 * scale) {
        cs.pop();
    }
    UPoly::new(cs)
}

/// Resultant of two complex univariate polynomials via the Euclidean
/// remainder sequence.
fn resultant_cx(f: &UPoly<Cx>, g: &UPoly<Cx>) -> Cx {
    crate::exactnum::upoly::poly_resultant(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{periods, WeierstrassCurve};
    use crate::percurve::diagonal::diagonal_system;
    use crate::percurve::sampler::{plane_chart, sample_curve};

    #[test]
    fn roundtrip_from_samples() {
        let solver = ParamSolver::new(diagonal_system(2, 5).unwrap());
        let samples = sample_curve(4, 5).unwrap();
        for h in &samples {
            let (x, y) = plane_chart(h);
            match solver.param_point(x, y) {
                ParamPoint::Config { x3, x4, x5 } => {
                    // the recovered point reproduces the chart
                    let one = Cx::new(1.0, 0.0);
                    let xe = x4 * (x5 - x3) / (x3 * (x5 - x4));
                    let ye = (x4 - one) * (x3 - x5) / ((x4 - x5) * (x3 - one));
                    assert!((xe - x).abs() < 1e-7);
                    assert!((ye - y).abs() < 1e-7);
                }
                ParamPoint::Degenerate => panic!("sample chart should recover"),
            }
        }
    }

    #[test]
    fn pole_is_degenerate() {
        let lat = periods(&WeierstrassCurve::new(3, 0, 0, 1, 0)).unwrap();
        assert!(plane_point(Cx::new(0.0, 0.0), &lat).is_none());
    }

    #[test]
    fn wp_point_lies_on_plane_cubic() {
        let lat = periods(&WeierstrassCurve::new(3, 0, 0, 1, 0)).unwrap();
        for u in [Cx::new(0.31, 0.5), Cx::new(1.1, 1.2)] {
            let (x, y) = plane_point(u, &lat).unwrap();
            // x^3 + y^2 - 3xy + x = 0 in the affine chart
            let v = x * x * x + y * y - x * y * 3.0 + x;
            assert!(v.abs() < 1e-6, "{:?}", v);
        }
    }
}
