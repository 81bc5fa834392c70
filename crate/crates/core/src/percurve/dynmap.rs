//! The dynamical map itself: a degree-d map with both critical points
//! totally ramified, realized as a Moebius map composed with the power map,
//! iterated in homogeneous coordinates with the chordal metric.

use crate::exactnum::Cx;
use crate::moduli::PointP1;

/// 2x2 complex matrix acting on homogeneous coordinates.
#[derive(Clone, Copy, Debug)]
pub struct Moebius(pub [Cx; 4]);

impl Moebius {
    pub fn apply_h(&self, p: (Cx, Cx)) -> (Cx, Cx) {
        let [a, b, c, d] = self.0;
        (a * p.0 + b * p.1, c * p.0 + d * p.1)
    }

    pub fn apply(&self, p: PointP1<Cx>) -> PointP1<Cx> {
        let h = match p {
            PointP1::Finite(z) => (z, Cx::new(1.0, 0.0)),
            PointP1::Infinity => (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)),
        };
        let (u, v) = self.apply_h(h);
        if v.abs() <= 1e-300 * u.abs() {
            PointP1::Infinity
        } else {
            PointP1::Finite(u / v)
        }
    }

    pub fn det(&self) -> Cx {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }
}

/// Unique Moebius map sending three distinct points to three distinct points.
pub fn moebius_from_triple(
    from: [PointP1<Cx>; 3],
    to: [PointP1<Cx>; 3],
) -> Result<Moebius, String> {
    let to_std = |p: [PointP1<Cx>; 3]| -> Result<Moebius, String> {
        // matrix sending (p0, p1, p2) to (0, 1, infinity)
        let h = |q: PointP1<Cx>| match q {
            PointP1::Finite(z) => (z, Cx::new(1.0, 0.0)),
            PointP1::Infinity => (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)),
        };
        let (x0, y0) = h(p[0]);
        let (x1, y1) = h(p[1]);
        let (x2, y2) = h(p[2]);
        let det = |ax: Cx, ay: Cx, bx: Cx, by: Cx| ax * by - bx * ay;
        let d01 = det(x0, y0, x1, y1);
        let d12 = det(x1, y1, x2, y2);
        let d02 = det(x0, y0, x2, y2);
        if d01.abs() < 1e-14 || d12.abs() < 1e-14 || d02.abs() < 1e-14 {
            return Err("coincident points in a Moebius triple".into());
        }
        // z -> (z - p0)(p1 - p2) / ((z - p2)(p1 - p0)) homogeneously
        Ok(Moebius([
            y0 * d12,
            -x0 * d12,
            y2 * d01,
            -x2 * d01,
        ]))
    };
    let a = to_std(from)?;
    let b = to_std(to)?;
    // b^{-1} a
    let [p, q, r, s] = b.0;
    let binv = Moebius([s, -q, -r, p]);
    let [a0, a1, a2, a3] = a.0;
    let [b0, b1, b2, b3] = binv.0;
    Ok(Moebius([
        b0 * a0 + b1 * a2,
        b0 * a1 + b1 * a3,
        b2 * a0 + b3 * a2,
        b2 * a1 + b3 * a3,
    ]))
}

/// Degree-d map with critical points 0 and infinity: a Moebius map composed
/// with z -> z^d, carrying the marked critical cycle through 0.
#[derive(Clone, Debug)]
pub struct DynMap {
    pub d: usize,
    pub moebius: Moebius,
    /// the marked cycle (position of the k-th cycle point), first entry 0
    pub cycle: Vec<PointP1<Cx>>,
}

fn normalize_h(p: (Cx, Cx)) -> (Cx, Cx) {
    let s = (p.0.abs_sq() + p.1.abs_sq()).sqrt();
    if s == 0.0 || !s.is_finite() {
        return (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0));
    }
    (p.0 * (1.0 / s), p.1 * (1.0 / s))
}

/// Chordal distance between projective points.
pub fn chordal(p: (Cx, Cx), q: (Cx, Cx)) -> f64 {
    let p = normalize_h(p);
    let q = normalize_h(q);
    (p.0 * q.1 - q.0 * p.1).abs()
}

pub fn point_h(p: PointP1<Cx>) -> (Cx, Cx) {
    match p {
        PointP1::Finite(z) => normalize_h((z, Cx::new(1.0, 0.0))),
        PointP1::Infinity => (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)),
    }
}

impl DynMap {
    /// Builds the map from the configuration: the Moebius part is fixed by
    /// three consecutive orbit conditions M(p_k^d) = p_{k+1} whose arguments
    /// are pairwise distinct, and the remaining conditions are the cycle
    /// equations the caller measures through `cycle_residual`.
    pub fn from_cycle(d: usize, cycle: Vec<PointP1<Cx>>) -> Result<DynMap, String> {
        let n = cycle.len();
        assert!(n >= 3);
        let pow = |p: PointP1<Cx>| match p {
            PointP1::Finite(z) => PointP1::Finite(z.powi(d as u32)),
            PointP1::Infinity => PointP1::Infinity,
        };
        let dist = |a: PointP1<Cx>, b: PointP1<Cx>| chordal(point_h(a), point_h(b)) > 1e-9;
        // choose three cycle steps with pairwise distinct powered sources
        let mut m = None;
        'outer: for s in 0..n {
            let idx = [s % n, (s + 1) % n, (s + 2) % n];
            let args = [pow(cycle[idx[0]]), pow(cycle[idx[1]]), pow(cycle[idx[2]])];
            let imgs = [
                cycle[(idx[0] + 1) % n],
                cycle[(idx[1] + 1) % n],
                cycle[(idx[2] + 1) % n],
            ];
            for i in 0..3 {
                for j in i + 1..3 {
                    if !dist(args[i], args[j]) || !dist(imgs[i], imgs[j]) {
                        continue 'outer;
                    }
                }
            }
            m = moebius_from_triple(args, imgs).ok();
            if m.is_some() {
                break;
            }
        }
        let m = m.ok_or_else(|| "no nondegenerate triple of cycle conditions".to_string())?;
        Ok(DynMap { d, moebius: m, cycle })
    }

    /// One step in homogeneous coordinates.
    pub fn step_h(&self, p: (Cx, Cx)) -> (Cx, Cx) {
        let powered = (p.0.powi(self.d as u32), p.1.powi(self.d as u32));
        normalize_h(self.moebius.apply_h(powered))
    }

    pub fn apply(&self, p: PointP1<Cx>) -> PointP1<Cx> {
        let (u, v) = self.step_h(point_h(p));
        if v.abs() <= 1e-14 * u.abs() {
            PointP1::Infinity
        } else {
            PointP1::Finite(u / v)
        }
    }

    /// Largest deviation of the cycle conditions f(p_k) = p_{k+1}.
    pub fn cycle_residual(&self) -> f64 {
        let n = self.cycle.len();
        let mut worst = 0.0f64;
        for k in 0..n {
            let img = self.step_h(point_h(self.cycle[k]));
            let next = point_h(self.cycle[(k + 1) % n]);
            worst = worst.max(chordal(img, next));
        }
        worst
    }

    /// Orbit of the free critical point (infinity), as chordal distances to
    /// the cycle set per step.
    pub fn free_orbit_distances(&self, steps: usize) -> Vec<f64> {
        let cycle_h: Vec<(Cx, Cx)> = self.cycle.iter().map(|&p| point_h(p)).collect();
        let mut z = point_h(PointP1::Infinity);
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            z = self.step_h(z);
            let dmin = cycle_h
                .iter()
                .map(|&c| chordal(z, c))
                .fold(f64::INFINITY, f64::min);
            out.push(dmin);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(x: f64, y: f64) -> PointP1<Cx> {
        PointP1::Finite(Cx::new(x, y))
    }

    #[test]
    fn identity_and_swap_triples() {
        let id = moebius_from_triple(
            [fin(0.0, 0.0), fin(1.0, 0.0), PointP1::Infinity],
            [fin(0.0, 0.0), fin(1.0, 0.0), PointP1::Infinity],
        )
        .unwrap();
        for z in [fin(2.5, 1.0), fin(-0.3, 0.2)] {
            let w = id.apply(z);
            let (a, b) = (z.finite().unwrap(), w.finite().unwrap());
            assert!((*a - *b).abs() < 1e-12);
        }
        // (0,1,inf) -> (1,0,inf) is z -> 1 - z
        let m = moebius_from_triple(
            [fin(0.0, 0.0), fin(1.0, 0.0), PointP1::Infinity],
            [fin(1.0, 0.0), fin(0.0, 0.0), PointP1::Infinity],
        )
        .unwrap();
        let w = m.apply(fin(0.25, 0.0));
        assert!((*w.finite().unwrap() - Cx::new(0.75, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn random_triples_map_correctly() {
        let mut state = 11u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) * 4.0 - 2.0
        };
        for _ in 0..20 {
            let from = [fin(rnd(), rnd()), fin(rnd(), rnd()), fin(rnd(), rnd())];
            let to = [fin(rnd(), rnd()), fin(rnd(), rnd()), fin(rnd(), rnd())];
            let m = match moebius_from_triple(from, to) {
                Ok(m) => m,
                Err(_) => continue,
            };
            for k in 0..3 {
                let img = m.apply(from[k]);
                let d = chordal(point_h(img), point_h(to[k]));
                assert!(d < 1e-12, "triple point {} off by {}", k, d);
            }
        }
    }

    #[test]
    fn rejects_coincident() {
        assert!(moebius_from_triple(
            [fin(0.0, 0.0), fin(0.0, 0.0), PointP1::Infinity],
            [fin(1.0, 0.0), fin(0.0, 0.0), PointP1::Infinity],
        )
        .is_err());
    }
}
