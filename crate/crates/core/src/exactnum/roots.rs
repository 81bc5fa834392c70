//! Simultaneous complex root finding by the Aberth-Ehrlich iteration.
//!
//! Dependency-free and robust at the degrees this artifact produces (roughly
//! up to 30). Initialization places guesses on a circle scaled by a coarse
//! root-magnitude bound, slightly rotated so no guess starts on a symmetry
//! axis.

use super::cx::Cx;
use super::upoly::UPoly;
use super::NumError;

const MAX_ITER: usize = 500;

/// All complex roots of `p` with multiplicity, to residual
/// |p(z)| < tol * scale, ordered by (re, im).
///
/// Multiple roots come out as clustered simple roots; the returned
/// multiplicity is the cluster size after merging roots within a cluster
/// radius derived from `tol`.
pub fn roots_complex(p: &UPoly<Cx>, tol: f64) -> Result<Vec<(Cx, usize)>, NumError> {
    let _deg = match p.degree() {
        None | Some(0) => return Ok(vec![]),
        Some(d) => d,
    };
    if !p.coeffs.iter().all(|c| c.is_finite()) {
        return Err(NumError::NonFinite);
    }
    // strip zero roots exactly
    let mut zero_mult = 0usize;
    let mut coeffs = p.coeffs.clone();
    while coeffs[0].abs() == 0.0 && coeffs.len() > 1 {
        coeffs.remove(0);
        zero_mult += 1;
    }
    let q = UPoly::new(coeffs);
    let qdeg = q.degree().unwrap_or(0);

    let mut roots: Vec<Cx> = Vec::new();
    if qdeg > 0 {
        roots = aberth(&q)?;
    }

    // residual check against the coefficient scale
    let scale: f64 = q.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
    for r in &roots {
        let v = q.eval(r).abs();
        let local_scale = scale * (1.0 + r.abs().powi(qdeg as i32));
        if !(v <= tol * local_scale) {
            return Err(NumError::NoConvergence);
        }
    }

    // cluster equal roots
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let cluster_r = (tol.max(1e-14)).sqrt().max(1e-8);
    let mut out: Vec<(Cx, usize)> = Vec::new();
    for r in roots {
        if let Some((prev, mult)) = out.last_mut() {
            if (*prev - r).abs() < cluster_r * (1.0 + prev.abs()) {
                // merge into the running mean
                let k = *mult as f64;
                *prev = Cx::new(
                    (prev.re * k + r.re) / (k + 1.0),
                    (prev.im * k + r.im) / (k + 1.0),
                );
                *mult += 1;
                continue;
            }
        }
        out.push((r, 1));
    }
    if zero_mult > 0 {
        out.push((Cx::new(0.0, 0.0), zero_mult));
        out.sort_by(|a, b| {
            a.0.re
                .partial_cmp(&b.0.re)
                .unwrap()
                .then(a.0.im.partial_cmp(&b.0.im).unwrap())
        });
    }
    Ok(out)
}

fn aberth(p: &UPoly<Cx>) -> Result<Vec<Cx>, NumError> {
    let deg = p.degree().unwrap();
    let dp = p.derivative();
    let lead = *p.leading().unwrap();
    // Cauchy-style bound on root magnitudes
    let bound = 1.0
        + p.coeffs[..deg]
            .iter()
            .map(|c| (*c / lead).abs())
            .fold(0.0, f64::max);
    let radius = bound.min(1e6).max(0.5);

    let mut z: Vec<Cx> = (0..deg)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            Cx::new(radius * theta.cos(), radius * theta.sin())
        })
        .collect();

    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        let snapshot = z.clone();
        for i in 0..deg {
            let zi = snapshot[i];
            let pv = p.eval(&zi);
            let dv = dp.eval(&zi);
            if pv.abs() == 0.0 {
                continue;
            }
            let newton = if dv.abs() == 0.0 {
                Cx::new(1e-8, 1e-8)
            } else {
                pv / dv
            };
            let mut rep = Cx::new(0.0, 0.0);
            for (j, zj) in snapshot.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = zi - *zj;
                if d.abs() < 1e-300 {
                    continue;
                }
                rep = rep + d.recip();
            }
            let denom = Cx::new(1.0, 0.0) - newton * rep;
            let step = if denom.abs() < 1e-300 { newton } else { newton / denom };
            z[i] = zi - step;
            max_step = max_step.max(step.abs() / (1.0 + z[i].abs()));
        }
        if max_step < 1e-14 {
            return Ok(z);
        }
    }
    // accept if residuals are already tiny despite slow step convergence
    let scale: f64 = p.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
    if z.iter().all(|r| p.eval(r).abs() < 1e-10 * scale * (1.0 + r.abs().powi(deg as i32))) {
        Ok(z)
    } else {
        Err(NumError::NoConvergence)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upoly(cs: &[f64]) -> UPoly<Cx> {
        UPoly::new(cs.iter().map(|&c| Cx::new(c, 0.0)).collect())
    }

    #[test]
    fn quadratic_i() {
        let p = upoly(&[1.0, 0.0, 1.0]);
        let r = roots_complex(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - Cx::new(0.0, -1.0)).abs() < 1e-9);
        assert!((r[1].0 - Cx::new(0.0, 1.0)).abs() < 1e-9);
    }

    #[test]
    fn quadratic_rational_roots() {
        // 3s^2 - 2s - 1 = 0 -> s = 1, -1/3
        let p = upoly(&[-1.0, -2.0, 3.0]);
        let r = roots_complex(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - Cx::new(-1.0 / 3.0, 0.0)).abs() < 1e-9);
        assert!((r[1].0 - Cx::new(1.0, 0.0)).abs() < 1e-9);
    }

    #[test]
    fn fifth_roots_of_unity() {
        let mut cs = vec![0.0; 6];
        cs[0] = -1.0;
        cs[5] = 1.0;
        let p = upoly(&cs);
        let r = roots_complex(&p, 1e-12).unwrap();
        assert_eq!(r.len(), 5);
        for (root, m) in &r {
            assert_eq!(*m, 1);
            assert!((root.abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn vieta_sum_and_product() {
        let mut state = 99u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64 % 11) as f64 - 5.0
        };
        for _ in 0..15 {
            let deg = 2 + (rnd().abs() as usize % 5);
            let mut cs: Vec<f64> = (0..=deg).map(|_| rnd()).collect();
            if cs[deg] == 0.0 {
                cs[deg] = 2.0;
            }
            if cs[0] == 0.0 {
                cs[0] = 1.0;
            }
            let p = upoly(&cs);
            let roots = roots_complex(&p, 1e-10).unwrap();
            let mut sum = Cx::new(0.0, 0.0);
            let mut prod = Cx::new(1.0, 0.0);
            let mut count = 0;
            for (r, m) in &roots {
                for _ in 0..*m {
                    sum = sum + *r;
                    prod = prod * *r;
                    count += 1;
                }
            }
            assert_eq!(count, deg);
            let expect_sum = -cs[deg - 1] / cs[deg];
            let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
            let expect_prod = sign * cs[0] / cs[deg];
            let scale = 1.0 + cs.iter().map(|c| c.abs()).fold(0.0, f64::max);
            assert!((sum.re - expect_sum).abs() < 1e-7 * scale, "sum mismatch");
            assert!(sum.im.abs() < 1e-7 * scale);
            assert!((prod.re - expect_prod).abs() < 1e-6 * scale * scale);
        }
    }

    #[test]
    fn nonconvergence_is_reported_not_garbage() {
        let p = UPoly::new(vec![Cx::new(f64::NAN, 0.0), Cx::new(1.0, 0.0)]);
        assert!(roots_complex(&p, 1e-12).is_err());
    }
}
