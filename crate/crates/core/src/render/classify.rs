//! Basin classification of the free critical orbit: iterate from the second
//! critical point in the chordal metric and test capture by the marked cycle.

use crate::exactnum::Cx;
use crate::moduli::PointP1;
use crate::percurve::dynmap::{chordal, point_h, DynMap};

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Classification {
    Attracted { first_hit: u32 },
    NotAttracted,
}

/// Iterate the free critical point up to `maxiter`; attracted when the orbit
/// comes within `eps` of the cycle set and stays within a tenfold window
/// until twice the hitting time.
pub fn classify(f: &DynMap, maxiter: u32, eps: f64) -> Classification {
    let cycle_h: Vec<(Cx, Cx)> = f.cycle.iter().map(|&p| point_h(p)).collect();
    let mut z = point_h(PointP1::Infinity);
    let mut first_hit: Option<u32> = None;
    for step in 1..=maxiter {
        z = f.step_h(z);
        let d = cycle_h
            .iter()
            .map(|&c| chordal(z, c))
            .fold(f64::INFINITY, f64::min);
        match first_hit {
            None => {
                if d < eps {
                    first_hit = Some(step);
                }
            }
            Some(k) => {
                if d > 10.0 * eps {
                    first_hit = None; // transient pass, keep looking
                } else if step >= 2 * k {
                    return Classification::Attracted { first_hit: k };
                }
            }
        }
    }
    // a hit without room to confirm its doubling window stays unclassified
    Classification::NotAttracted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percurve::pcf_solve_labeled;

    #[test]
    fn critical_cycle_points_attract_their_orbit() {
        // at the fully critical points the free orbit lands in the cycle
        let pts = pcf_solve_labeled("gI").unwrap();
        for p in &pts {
            let f = DynMap::from_cycle(2, p.config.clone()).unwrap();
            assert!(matches!(
                classify(&f, 200, 1e-3),
                Classification::Attracted { .. }
            ));
        }
    }

    #[test]
    fn basin_is_open_near_critical_cycle_points() {
        // a small perturbation of a fully critical point keeps the free
        // orbit in the superattracting basin
        let pts = pcf_solve_labeled("gI").unwrap();
        for p in pts.iter().take(2) {
            let mut cycle = p.config.clone();
            if let PointP1::Finite(z) = &mut cycle[2] {
                *z = *z + Cx::new(1e-4, 0.0);
            }
            let f = DynMap::from_cycle(2, cycle).unwrap();
            assert!(matches!(
                classify(&f, 400, 1e-3),
                Classification::Attracted { .. }
            ));
        }
    }

    #[test]
    fn one_step_budget_misses() {
        // a generic curve point is not fully critical: its free orbit cannot
        // be confirmed attracted within a single step
        let h = &crate::percurve::sample_curve(1, 3).unwrap()[0];
        let cycle: Vec<PointP1<Cx>> =
            (1..=5).map(|i| PointP1::Finite(h.position(i))).collect();
        let f = DynMap::from_cycle(2, cycle).unwrap();
        assert_eq!(classify(&f, 1, 1e-6), Classification::NotAttracted);
    }
}
