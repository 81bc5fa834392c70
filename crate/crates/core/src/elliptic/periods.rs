//! Period lattice of a Weierstrass cubic through the arithmetic-geometric
//! mean, with the lattice invariants recoverable from Eisenstein sums.

use super::weier::WeierstrassCurve;
use crate::exactnum::{roots_complex, Cx, UPoly};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PeriodError {
    #[error("singular curve")]
    Singular,
    #[error("agm did not converge")]
    NoConvergence,
}

#[derive(Clone, Copy, Debug)]
pub struct Lattice {
    pub omega1: Cx,
    pub omega2: Cx,
    pub g2: Cx,
    pub g3: Cx,
}

/// Complex AGM with the standard branch choice |a - g| <= |a + g|.
pub fn agm(mut a: Cx, mut g: Cx) -> Result<Cx, PeriodError> {
    for _ in 0..200 {
        if (a - g).abs() <= 1e-15 * a.abs().max(1e-300) {
            return Ok(a);
        }
        let mut root = (a * g).sqrt();
        if (a - root).abs() > (a + root).abs() {
            root = -root;
        }
        let na = (a + g) * 0.5;
        a = na;
        g = root;
    }
    Err(PeriodError::NoConvergence)
}

/// Periods of the short form associated to the curve: omega1 along the real
/// direction, omega2 the conjugate period (purely imaginary for a curve with
/// positive discriminant; the reported magnitude convention follows the
/// implementation note in the README).
pub fn periods(w: &WeierstrassCurve) -> Result<Lattice, PeriodError> {
    let inv = w.invariants().map_err(|_| PeriodError::Singular)?;
    let g2 = Cx::new(inv.c4.to_f64() / 12.0, 0.0);
    let g3 = Cx::new(inv.c6.to_f64() / 216.0, 0.0);
    // roots of 4x^3 - g2 x - g3
    let p = UPoly::new(vec![-g3, -g2, Cx::new(0.0, 0.0), Cx::new(4.0, 0.0)]);
    let roots = roots_complex(&p, 1e-10).map_err(|_| PeriodError::NoConvergence)?;
    let mut es: Vec<Cx> = roots.into_iter().map(|(r, _)| r).collect();
    if es.len() != 3 {
        return Err(PeriodError::Singular);
    }
    // order by real part descending: e1 > e2 > e3 in the all-real case
    es.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
    let (e1, e2, e3) = (es[0], es[1], es[2]);
    let m1 = agm((e1 - e3).sqrt(), (e1 - e2).sqrt())?;
    let m2 = agm((e1 - e3).sqrt(), (e2 - e3).sqrt())?;
    let pi = std::f64::consts::PI;
    let omega1 = Cx::new(pi, 0.0) / m1;
    let omega2 = Cx::new(0.0, pi) / m2;
    Ok(Lattice { omega1, omega2, g2, g3 })
}

/// Eisenstein sums of the lattice, for consistency testing against g2, g3.
pub fn eisenstein_invariants(omega1: Cx, omega2: Cx, radius: i64) -> (Cx, Cx) {
    let mut s4 = Cx::new(0.0, 0.0);
    let mut s6 = Cx::new(0.0, 0.0);
    for m in -radius..=radius {
        for n in -radius..=radius {
            if m == 0 && n == 0 {
                continue;
            }
            let w = omega1 * (m as f64) + omega2 * (n as f64);
            let w2 = w * w;
            let w4 = w2 * w2;
            s4 = s4 + w4.recip();
            s6 = s6 + (w4 * w2).recip();
        }
    }
    (s4 * 60.0, s6 * 140.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periods_of_the_family_curve() {
        let w = WeierstrassCurve::new(3, 0, 0, 1, 0);
        let lat = periods(&w).unwrap();
        assert!((lat.omega1.re - 3.09416).abs() < 1e-3, "{:?}", lat.omega1);
        assert!(lat.omega1.im.abs() < 1e-12);
        // the second period is purely imaginary; its magnitude matches the
        // reported decimal
        assert!((lat.omega2.im - 2.74574).abs() < 1e-3, "{:?}", lat.omega2);
    }

    #[test]
    fn eisenstein_consistency() {
        let w = WeierstrassCurve::new(3, 0, 0, 1, 0);
        let lat = periods(&w).unwrap();
        let (g2, g3) = eisenstein_invariants(lat.omega1, lat.omega2, 60);
        assert!((g2 - lat.g2).abs() < 2e-3 * (1.0 + lat.g2.abs()));
        assert!((g3 - lat.g3).abs() < 2e-3 * (1.0 + lat.g3.abs()));
    }
}
