//! The Weierstrass function of a lattice, by Laurent series close to the
//! origin and duplication elsewhere, after reduction to the fundamental
//! domain.

use crate::elliptic::Lattice;
use crate::exactnum::Cx;

#[derive(Clone, Copy, Debug)]
pub enum WpValue {
    Pole,
    Value { p: Cx, dp: Cx },
}

const SERIES_TERMS: usize = 26;

/// Laurent coefficients c_k of wp(u) = u^-2 + sum c_k u^(2k), k >= 2.
fn laurent_coeffs(g2: Cx, g3: Cx) -> Vec<Cx> {
    let mut c = vec![Cx::new(0.0, 0.0); SERIES_TERMS + 1];
    if SERIES_TERMS >= 2 {
        c[2] = g2 * (1.0 / 20.0);
    }
    if SERIES_TERMS >= 3 {
        c[3] = g3 * (1.0 / 28.0);
    }
    for k in 4..=SERIES_TERMS {
        let mut s = Cx::new(0.0, 0.0);
        for m in 2..=(k - 2) {
            s = s + c[m] * c[k - m];
        }
        let factor = 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64);
        c[k] = s * factor;
    }
    c
}

/// Reduce u modulo the lattice to the centered fundamental cell.
pub fn reduce_mod_lattice(u: Cx, lat: &Lattice) -> Cx {
    // solve u = a w1 + b w2 in real coordinates
    let (w1, w2) = (lat.omega1, lat.omega2);
    let det = w1.re * w2.im - w2.re * w1.im;
    let a = (u.re * w2.im - w2.re * u.im) / det;
    let b = (w1.re * u.im - u.re * w1.im) / det;
    let fa = a - a.round();
    let fb = b - b.round();
    w1 * fa + w2 * fb
}

/// wp and wp' at u; points within 1e-12 of a lattice point report a pole.
pub fn wp(u: Cx, lat: &Lattice) -> WpValue {
    let v = reduce_mod_lattice(u, lat);
    if v.abs() < 1e-12 {
        return WpValue::Pole;
    }
    let coeffs = laurent_coeffs(lat.g2, lat.g3);
    // halve until the series converges comfortably, then duplicate back
    let scale = lat.omega1.abs().min(lat.omega2.abs());
    let mut halvings = 0;
    let mut z = v;
    while z.abs() > 0.22 * scale {
        z = z * 0.5;
        halvings += 1;
        if halvings > 8 {
            break;
        }
    }
    // wp(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)
    let z2 = z * z;
    let mut p = z2.recip();
    let mut zpow = z2; // z^(2k-2) running power, z^2 at k = 2
    for (k, &ck) in coeffs.iter().enumerate().skip(2) {
        if k > 2 {
            zpow = zpow * z2;
        }
        p = p + ck * zpow;
    }
    // wp'(z) = -2 z^-3 + sum_{k>=2} (2k-2) c_k z^(2k-3)
    let mut dps = -(z2 * z).recip() * 2.0;
    let mut zp = z; // z^(2k-3) running power, z at k = 2
    for (k, &ck) in coeffs.iter().enumerate().skip(2) {
        if k > 2 {
            zp = zp * z2;
        }
        dps = dps + ck * zp * ((2 * k - 2) as f64);
    }
    let mut pv = p;
    let mut dv = dps;
    for _ in 0..halvings {
        // duplication on y^2 = 4x^3 - g2 x - g3
        let slope = (pv * pv * 12.0 - lat.g2) / (dv * 2.0);
        let x2 = slope * slope * 0.25 - pv * 2.0;
        let y2 = -(dv + slope * (x2 - pv));
        pv = x2;
        dv = y2;
    }
    WpValue::Value { p: pv, dp: dv }
}
