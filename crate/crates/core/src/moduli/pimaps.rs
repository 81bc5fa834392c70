//! Global coordinates on the space of marked covers and the two projections
//! to configuration space: the target configuration is read off by d-th
//! powers, the source configuration directly.

use super::config::ModuliError;
use crate::exactnum::Cx;

/// Global coordinate point: positions x_3..x_n of the cycle marks in the
/// chart (star, first mark, second mark) = (infinity, 0, 1).
#[derive(Clone, Debug)]
pub struct HPoint {
    pub d: usize,
    pub n: usize,
    /// x[0] = x_3, ..., x[n-3] = x_n
    pub x: Vec<Cx>,
}

impl HPoint {
    pub fn new(d: usize, n: usize, x: Vec<Cx>) -> Result<Self, ModuliError> {
        assert_eq!(x.len(), n - 2);
        let h = HPoint { d, n, x };
        if !h.invariants_hold(1e-12) {
            return Err(ModuliError::CoincidentPoints);
        }
        Ok(h)
    }

    /// x_i != 0, x_i^d != 1, x_i^d != x_j^d, within a numeric margin.
    pub fn invariants_hold(&self, eps: f64) -> bool {
        let d = self.d as u32;
        for (i, xi) in self.x.iter().enumerate() {
            if xi.abs() < eps {
                return false;
            }
            let p = xi.powi(d);
            if (p - Cx::new(1.0, 0.0)).abs() < eps {
                return false;
            }
            for xj in &self.x[i + 1..] {
                if (p - xj.powi(d)).abs() < eps {
                    return false;
                }
            }
        }
        true
    }

    /// Position of cycle mark i (1-based): mark 1 at 0, mark 2 at 1,
    /// mark i >= 3 at x_i.
    pub fn position(&self, i: usize) -> Cx {
        match i {
            1 => Cx::new(0.0, 0.0),
            2 => Cx::new(1.0, 0.0),
            _ => self.x[i - 3],
        }
    }
}

fn cr(p1: Cx, p2: Cx, p3: Cx, p4: Cx) -> Cx {
    ((p4 - p2) * (p3 - p1)) / ((p4 - p1) * (p3 - p2))
}

/// The two projections in the standard charts: first the target configuration
/// (d-th powers arranged by the mark advance), then the source configuration.
/// Both are returned as the coordinate tuples (CR(1,2,3,i))_{i=4..n} of the
/// respective configurations, the common chart the diagonal equations live in.
pub fn pi_maps(h: &HPoint) -> (Vec<Cx>, Vec<Cx>) {
    let n = h.n;
    let d = h.d as u32;
    // target marks: b_j at position x_{j-1}^d (indices mod n), b_2 = 0, b_3 = 1
    let b = |j: usize| -> Cx {
        let i = if j == 1 { n } else { j - 1 };
        h.position(i).powi(d)
    };
    let pi1: Vec<Cx> = (4..=n).map(|j| cr(b(1), b(2), b(3), b(j))).collect();
    let pi2: Vec<Cx> = (4..=n)
        .map(|j| cr(h.position(1), h.position(2), h.position(3), h.position(j)))
        .collect();
    (pi1, pi2)
}

/// The power relation between source and target cross-ratios: the d-th power
/// of the source cross-ratio against the ramified frame equals the target
/// cross-ratio of the image marks. Both sides are evaluated as genuine
/// cross-ratios after moving each curve by its own Moebius map, so the check
/// exercises the invariance rather than the defining chart.
pub fn power_relation_residual(h: &HPoint, seed: u64) -> f64 {
    let n = h.n;
    let d = h.d as u32;
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut rnd = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
    };
    // two independent Moebius moves acting on homogeneous pairs
    let mut mob = || {
        [
            Cx::new(1.0 + rnd() * 0.3, rnd() * 0.3),
            Cx::new(rnd(), rnd()),
            Cx::new(rnd() * 0.2, rnd() * 0.2),
            Cx::new(1.0 + rnd() * 0.3, rnd() * 0.3),
        ]
    };
    let m1 = mob();
    let m2 = mob();
    let apply = |m: &[Cx; 4], p: (Cx, Cx)| (m[0] * p.0 + m[1] * p.1, m[2] * p.0 + m[3] * p.1);
    let fin = |z: Cx| (z, Cx::new(1.0, 0.0));
    let inf = (Cx::new(1.0, 0.0), Cx::new(0.0, 0.0));
    let det = |a: (Cx, Cx), b: (Cx, Cx)| a.0 * b.1 - b.0 * a.1;
    let cr4 = |q: [(Cx, Cx); 4]| det(q[3], q[1]) * det(q[2], q[0]) / (det(q[3], q[0]) * det(q[2], q[1]));

    let mut worst = 0.0f64;
    for i in 3..=n {
        let lhs = cr4([
            apply(&m1, inf),
            apply(&m1, fin(h.position(1))),
            apply(&m1, fin(h.position(2))),
            apply(&m1, fin(h.position(i))),
        ])
        .powi(d);
        let j = if i == n { 1 } else { i + 1 };
        let bpos = |jj: usize| -> Cx {
            let ii = if jj == 1 { n } else { jj - 1 };
            h.position(ii).powi(d)
        };
        let rhs = cr4([
            apply(&m2, inf),
            apply(&m2, fin(Cx::new(0.0, 0.0))),
            apply(&m2, fin(Cx::new(1.0, 0.0))),
            apply(&m2, fin(bpos(j))),
        ]);
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi1_arranges_powers() {
        // d = 2, n = 5: pi1 = cross-ratios of (x5^2, 0, 1, x3^2, x4^2)
        let x = vec![Cx::new(1.7, 0.3), Cx::new(-0.6, 1.1), Cx::new(0.4, -2.0)];
        let h = HPoint::new(2, 5, x.clone()).unwrap();
        let (pi1, _) = pi_maps(&h);
        let b1 = x[2].powi(2);
        let expect4 = cr(b1, Cx::new(0.0, 0.0), Cx::new(1.0, 0.0), x[0].powi(2));
        let expect5 = cr(b1, Cx::new(0.0, 0.0), Cx::new(1.0, 0.0), x[1].powi(2));
        assert!((pi1[0] - expect4).abs() < 1e-12);
        assert!((pi1[1] - expect5).abs() < 1e-12);
    }

    #[test]
    fn power_relation_holds_identically() {
        let x = vec![Cx::new(0.9, 0.2), Cx::new(-1.4, 0.7), Cx::new(2.2, -0.5)];
        let h = HPoint::new(2, 5, x).unwrap();
        assert!(power_relation_residual(&h, 7) < 1e-9);
    }

    #[test]
    fn wall_points_are_rejected() {
        assert!(HPoint::new(2, 4, vec![Cx::new(1.0, 0.0), Cx::new(0.5, 0.0)]).is_err());
        assert!(HPoint::new(2, 4, vec![Cx::new(0.5, 0.0), Cx::new(-0.5, 0.0)]).is_err());
    }
}
