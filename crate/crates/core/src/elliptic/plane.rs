//! Plane-curve fitting: the least-squares null vector of the monomial
//! evaluation matrix on numeric samples, rounded to the exact integer curve
//! and verified exactly on held-out exact points.

use crate::exactnum::{Cx, Field, NFElem, Rational};
use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("not enough samples: {0} given, {1} required")]
    NotEnoughSamples(usize, usize),
    #[error("null space is not one-dimensional (second singular value {0:e})")]
    NullSpaceDimension(f64),
    #[error("rounding residual {0:e} too large")]
    RoundingResidual(f64),
}

/// Homogeneous plane curve with integer coefficients, content one, first
/// nonzero coefficient positive. Monomials ordered lexicographically by
/// exponent of (x, y, z).
#[derive(Clone, PartialEq, Debug)]
pub struct PlaneCurve {
    pub degree: usize,
    pub coeffs: Vec<Rational>,
}

pub fn monomials(degree: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in (0..=degree).rev() {
        for j in (0..=degree - i).rev() {
            out.push((i, j, degree - i - j));
        }
    }
    out
}

impl PlaneCurve {
    pub fn normalize(mut self) -> Self {
        // integer content out, sign fixed by the first nonzero coefficient
        let mut denom_lcm = BigInt::from(1);
        for c in &self.coeffs {
            let d = c.denom().clone();
            let g = num_integer::Integer::gcd(&denom_lcm, &d);
            denom_lcm = denom_lcm / g * d;
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut g = BigInt::from(0);
        for v in &ints {
            g = num_integer::Integer::gcd(&g, v);
        }
        if g == BigInt::from(0) {
            return self;
        }
        let first = ints.iter().find(|v| **v != BigInt::from(0)).unwrap();
        let sign = if first < &BigInt::from(0) { -1 } else { 1 };
        let g = g * BigInt::from(sign);
        self.coeffs = ints
            .into_iter()
            .map(|v| Rational::from_bigint(v / &g))
            .collect();
        self
    }

    pub fn eval<K: Field>(&self, x: &K, y: &K, z: &K, embed: &dyn Fn(&Rational) -> K) -> K {
        let mut acc = K::zero();
        for ((i, j, k), c) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = embed(c)
                .mul(&x.pow(i as u32))
                .mul(&y.pow(j as u32))
                .mul(&z.pow(k as u32));
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_nf(&self, p: &[NFElem; 3]) -> NFElem {
        self.eval(&p[0], &p[1], &p[2], &|c| NFElem::Rat(c.clone()))
    }

    pub fn to_string_xyz(&self) -> String {
        let names = ["x", "y", "z"];
        let mut parts = Vec::new();
        for ((i, j, k), c) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut term = String::new();
            if c != &Rational::one() {
                term.push_str(&format!("{}", c));
            }
            for (e, n) in [(i, names[0]), (j, names[1]), (k, names[2])] {
                match e {
                    0 => {}
                    1 => term.push_str(n),
                    _ => term.push_str(&format!("{}^{}", n, e)),
                }
            }
            if term.is_empty() {
                term.push('1');
            }
            parts.push(term);
        }
        parts.join(" + ")
    }
}

/// Fit a degree-d plane curve through numeric affine samples (X, Y).
///
/// Complex samples contribute two real constraints each. The null vector of
/// the evaluation matrix is found through the normal matrix, scaled so its
/// largest entry is one, rationalized with small denominators, and returned
/// exactly (the caller verifies on exact points).
pub fn fit_plane_curve(samples: &[(Cx, Cx)], degree: usize) -> Result<PlaneCurve, FitError> {
    let mons = monomials(degree);
    let m = mons.len();
    let needed = m + 5;
    if samples.len() < needed {
        return Err(FitError::NotEnoughSamples(samples.len(), needed));
    }
    // normal matrix A^H A accumulated in real arithmetic
    let mut ata = vec![vec![0.0f64; m]; m];
    for &(x, y) in samples {
        let row: Vec<Cx> = mons
            .iter()
            .map(|&(i, j, _)| x.powi(i as u32) * y.powi(j as u32))
            .collect();
        for a in 0..m {
            for b in 0..m {
                // real part of conj(row_a) * row_b
                ata[a][b] += row[a].re * row[b].re + row[a].im * row[b].im;
            }
        }
    }
    let (evals, evecs) = jacobi_eigen(&ata);
    // two smallest eigenvalues decide the null space dimension
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| evals[a].partial_cmp(&evals[b]).unwrap());
    let scale: f64 = evals[idx[m - 1]].abs().max(1.0);
    if evals[idx[1]].abs() / scale < 1e-9 {
        return Err(FitError::NullSpaceDimension(evals[idx[1]] / scale));
    }
    let v: Vec<f64> = (0..m).map(|r| evecs[r][idx[0]]).collect();
    // scale so the largest-magnitude entry is 1
    let vmax = v.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
    let scaled: Vec<f64> = v.iter().map(|x| x / vmax).collect();
    // rationalize with denominators up to 50, then clear
    let mut lcm = 1i64;
    let mut rats = Vec::with_capacity(m);
    for &x in &scaled {
        let (num, den, err) = round_rational(x, 50);
        if err > 1e-6 {
            return Err(FitError::RoundingResidual(err));
        }
        rats.push(Rational::new(num, den));
        lcm = num_integer::lcm(lcm, den);
    }
    let curve = PlaneCurve { degree, coeffs: rats }.normalize();
    // numeric verification on the samples
    let mut worst = 0.0f64;
    for &(x, y) in samples {
        let val = curve.eval(&x, &y, &Cx::new(1.0, 0.0), &|c| Cx::new(c.to_f64(), 0.0));
        worst = worst.max(val.abs());
    }
    if worst > 1e-6 {
        return Err(FitError::RoundingResidual(worst));
    }
    Ok(curve)
}

fn round_rational(x: f64, max_den: i64) -> (i64, i64, f64) {
    let mut best = (x.round() as i64, 1i64, (x - x.round()).abs());
    for den in 2..=max_den {
        let num = (x * den as f64).round();
        let err = (x - num / den as f64).abs();
        if err < best.2 {
            best = (num as i64, den, err);
        }
    }
    best
}

/// Cyclic Jacobi eigenvalue iteration for small symmetric matrices.
fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = 0.5 * (m[q][q] - m[p][p]) / m[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| m[i][i]).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_conic_exactly() {
        // x^2 + y^2 - z^2 from 12 clean samples
        let mut samples = Vec::new();
        for k in 0..12 {
            let t = 0.3 + 0.45 * k as f64;
            samples.push((Cx::new(t.cos(), 0.0), Cx::new(t.sin(), 0.0)));
        }
        let c = fit_plane_curve(&samples, 2).unwrap();
        let expect: Vec<i64> = monomials(2)
            .iter()
            .map(|&(i, j, k)| match (i, j, k) {
                (2, 0, 0) => 1,
                (0, 2, 0) => 1,
                (0, 0, 2) => -1,
                _ => 0,
            })
            .collect();
        let got: Vec<Rational> = c.coeffs.clone();
        for (g, e) in got.iter().zip(expect) {
            assert_eq!(g, &Rational::from_int(e));
        }
    }

    #[test]
    fn underdetermined_is_rejected() {
        let samples = vec![(Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)); 5];
        assert!(fit_plane_curve(&samples, 3).is_err());
    }
}
