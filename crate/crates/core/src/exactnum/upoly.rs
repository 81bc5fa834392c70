//! Dense univariate polynomials over a field, with the resultant and
//! discriminant machinery the boundary analyses lean on.

use super::rational::Field;
use std::fmt::Write as _;

#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<F: Field> {
    /// Coefficients low to high; trailing zeros trimmed, empty = zero.
    pub coeffs: Vec<F>,
}

impl<F: Field> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        UPoly::new(vec![c])
    }

    pub fn monomial(c: F, deg: usize) -> Self {
        let mut coeffs = vec![F::zero(); deg + 1];
        coeffs[deg] = c;
        UPoly::new(coeffs)
    }

    pub fn x() -> Self {
        UPoly::new(vec![F::zero(), F::one()])
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(F::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(F::zero);
            out.push(a.add(&b));
        }
        UPoly::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        UPoly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&F::from_i64(i as i64)))
            .collect();
        UPoly::new(out)
    }

    /// Euclidean division; panics if rhs is zero.
    pub fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        let dd = rhs.degree().expect("division by zero polynomial");
        let lead_inv = rhs.leading().unwrap().inv().expect("leading coeff invertible");
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        while rem.len() >= dd + 1 {
            let top = rem.last().unwrap().clone();
            if top.is_zero() {
                rem.pop();
                continue;
            }
            let k = rem.len() - 1 - dd;
            let q = top.mul(&lead_inv);
            quot[k] = q.clone();
            for i in 0..=dd {
                let t = q.mul(&rhs.coeffs[i]);
                rem[k + i] = rem[k + i].sub(&t);
            }
            rem.pop();
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn rem(&self, rhs: &Self) -> Self {
        self.div_rem(rhs).1
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(l) = a.leading() {
            let li = l.inv().unwrap();
            a = a.scale(&li);
        }
        a
    }

    /// Returns (g, s) with s*self = g mod rhs. Used for inverses mod a minimal
    /// polynomial.
    pub fn half_extended_gcd(&self, rhs: &Self) -> (Self, Self) {
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut s0 = UPoly::constant(F::one());
        let mut s1 = UPoly::zero();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        (r0, s0)
    }

    /// Squarefree part self / gcd(self, self').
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = UPoly::constant(F::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                s.push_str(" + ");
            }
            first = false;
            match i {
                0 => {
                    let _ = write!(s, "{:?}", c);
                }
                1 => {
                    let _ = write!(s, "{:?}*{}", c, var);
                }
                _ => {
                    let _ = write!(s, "{:?}*{}^{}", c, var, i);
                }
            }
        }
        s
    }
}

/// Resultant via the Euclidean remainder sequence with multiplier tracking.
///
/// res(f, g) = lc(g)^(deg f - deg r) * (-1)^(deg f * deg g) * res(g, r)
/// with r = f mod g, res(f, c) = c^(deg f) for constants c.
pub fn poly_resultant<F: Field>(f: &UPoly<F>, g: &UPoly<F>) -> F {
    assert!(!(f.is_zero() && g.is_zero()), "resultant of two zero polynomials");
    fn go<F: Field>(f: &UPoly<F>, g: &UPoly<F>) -> F {
        let df = match f.degree() {
            None => return F::zero(),
            Some(d) => d,
        };
        let dg = match g.degree() {
            None => return F::zero(),
            Some(d) => d,
        };
        if dg == 0 {
            return g.coeffs[0].pow(df as u32);
        }
        if df == 0 {
            return f.coeffs[0].pow(dg as u32);
        }
        if df < dg {
            let sign = if (df * dg) % 2 == 1 { -1i64 } else { 1 };
            return F::from_i64(sign).mul(&go(g, f));
        }
        let r = f.rem(g);
        let dr = r.degree();
        let lc = g.leading().unwrap().clone();
        let sign = if (df * dg) % 2 == 1 { -1i64 } else { 1 };
        match dr {
            None => F::zero(),
            Some(dr) => {
                let factor = lc.pow((df - dr) as u32);
                F::from_i64(sign).mul(&factor).mul(&go(g, &r))
            }
        }
    }
    go(f, g)
}

/// disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f).
pub fn poly_discriminant<F: Field>(f: &UPoly<F>) -> F {
    let n = f.degree().expect("discriminant of zero polynomial");
    assert!(n >= 1);
    let res = poly_resultant(f, &f.derivative());
    let lc_inv = f.leading().unwrap().inv().unwrap();
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -1 } else { 1 };
    F::from_i64(sign).mul(&res).mul(&lc_inv)
}

/// Sylvester-matrix determinant; kept as an independent cross-check of the
/// remainder-sequence resultant.
pub fn sylvester_resultant<F: Field>(f: &UPoly<F>, g: &UPoly<F>) -> F {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    if f.is_zero() || g.is_zero() {
        return F::zero();
    }
    if m == 0 {
        return f.coeffs[0].pow(n as u32);
    }
    if n == 0 {
        return g.coeffs[0].pow(m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![F::zero(); size]; size];
    for row in 0..n {
        for (k, c) in f.coeffs.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            mat[n + row][row + k] = c.clone();
        }
    }
    det_in_place(mat)
}

fn det_in_place<F: Field>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    let mut det = F::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return F::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = det.neg();
        }
        let pv = m[col][col].clone();
        det = det.mul(&pv);
        let pv_inv = pv.inv().unwrap();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&pv_inv);
            for c in col..n {
                let t = factor.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::Rational;

    fn upoly(cs: &[i64]) -> UPoly<Rational> {
        UPoly::new(cs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn resultant_linear_factor() {
        // res(x^2 + 1, x - 2) = f(2) = 5
        let f = upoly(&[1, 0, 1]);
        let g = upoly(&[-2, 1]);
        assert_eq!(poly_resultant(&f, &g), Rational::from_int(5));
    }

    #[test]
    fn discriminant_quadratic() {
        // disc(3x^2 - 2x - 1) = b^2 - 4ac = 4 + 12 = 16
        let f = upoly(&[-1, -2, 3]);
        assert_eq!(poly_discriminant(&f), Rational::from_int(16));
    }

    #[test]
    fn discriminant_of_cubic_matches_explicit_formula() {
        // g = 4 s^3 - 3 s^2 - 1 = (s - 1)(4 s^2 + s + 1)
        // disc(fg) = disc(f) disc(g) res(f, g)^2 = 1 * (-15) * 36 = -540,
        // agreeing with 18abcd - 4b^3d + b^2c^2 - 4ac^3 - 27a^2d^2
        let g = upoly(&[-1, 0, -3, 4]);
        assert_eq!(poly_discriminant(&g), Rational::from_int(-540));
    }

    #[test]
    fn resultant_swap_sign_law() {
        let mut state = 12345u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64 % 9) - 4
        };
        for _ in 0..30 {
            let df = 1 + (rnd().unsigned_abs() as usize % 4);
            let dg = 1 + (rnd().unsigned_abs() as usize % 4);
            let mut fc: Vec<i64> = (0..=df).map(|_| rnd()).collect();
            let mut gc: Vec<i64> = (0..=dg).map(|_| rnd()).collect();
            if fc[df] == 0 {
                fc[df] = 1;
            }
            if gc[dg] == 0 {
                gc[dg] = 1;
            }
            let f = upoly(&fc);
            let g = upoly(&gc);
            let rfg = poly_resultant(&f, &g);
            let rgf = poly_resultant(&g, &f);
            let sign = if (df * dg) % 2 == 1 { -1 } else { 1 };
            assert_eq!(rfg, Rational::from_int(sign).mul(&rgf));
            // and against the Sylvester determinant oracle
            assert_eq!(rfg, sylvester_resultant(&f, &g));
        }
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let f = upoly(&[1, -1]).pow(2).mul(&upoly(&[2, 1]));
        let sf = f.squarefree_part();
        let expect = upoly(&[1, -1]).mul(&upoly(&[2, 1]));
        let lead = expect.leading().unwrap().inv().unwrap();
        assert_eq!(sf.scale(&sf.leading().unwrap().inv().unwrap()), expect.scale(&lead));
    }
}
