//! Exact chord-tangent arithmetic on a long Weierstrass cubic, over the
//! rationals or a quadratic extension, with identity [0:1:0].

use super::weier::WeierstrassCurve;
use crate::exactnum::{Field, NFElem, Rational};

#[derive(Clone, PartialEq, Debug)]
pub enum ECPoint {
    Infinity,
    Affine(NFElem, NFElem),
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum PointOrder {
    Order(usize),
    ExceedsBound,
}

fn r2n(r: &Rational) -> NFElem {
    NFElem::Rat(r.clone())
}

impl ECPoint {
    pub fn on_curve(&self, w: &WeierstrassCurve) -> bool {
        match self {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => {
                // y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6 = 0
                let lhs = y
                    .mul(y)
                    .add(&r2n(&w.a1).mul(x).mul(y))
                    .add(&r2n(&w.a3).mul(y));
                let rhs = x
                    .pow(3)
                    .add(&r2n(&w.a2).mul(&x.pow(2)))
                    .add(&r2n(&w.a4).mul(x))
                    .add(&r2n(&w.a6));
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, w: &WeierstrassCurve) -> ECPoint {
        match self {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => {
                let ny = y.neg().sub(&r2n(&w.a1).mul(x)).sub(&r2n(&w.a3));
                ECPoint::Affine(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, other: &ECPoint, w: &WeierstrassCurve) -> ECPoint {
        match (self, other) {
            (ECPoint::Infinity, q) => q.clone(),
            (p, ECPoint::Infinity) => p.clone(),
            (ECPoint::Affine(x1, y1), ECPoint::Affine(x2, y2)) => {
                let a1 = r2n(&w.a1);
                let a2 = r2n(&w.a2);
                let a3 = r2n(&w.a3);
                let a4 = r2n(&w.a4);
                let (lambda, nu) = if x1 != x2 {
                    let dy = y2.sub(y1);
                    let dx = x2.sub(x1);
                    let l = dy.mul(&dx.inv().unwrap());
                    let n = y1.sub(&l.mul(x1));
                    (l, n)
                } else {
                    // same x: either inverse points or a doubling
                    if *other == self.neg(w) {
                        return ECPoint::Infinity;
                    }
                    let three = NFElem::from_int(3);
                    let two = NFElem::from_int(2);
                    let num = three
                        .mul(&x1.pow(2))
                        .add(&two.mul(&a2).mul(x1))
                        .add(&a4)
                        .sub(&a1.mul(y1));
                    let den = two.mul(y1).add(&a1.mul(x1)).add(&a3);
                    let l = num.mul(&den.inv().expect("nonsingular doubling"));
                    let n = y1.sub(&l.mul(x1));
                    (l, n)
                };
                let x3 = lambda
                    .pow(2)
                    .add(&a1.mul(&lambda))
                    .sub(&a2)
                    .sub(x1)
                    .sub(x2);
                let y3 = lambda
                    .add(&a1)
                    .mul(&x3)
                    .add(&nu)
                    .add(&a3)
                    .neg();
                ECPoint::Affine(x3, y3)
            }
        }
    }

    pub fn mul_scalar(&self, k: usize, w: &WeierstrassCurve) -> ECPoint {
        let mut acc = ECPoint::Infinity;
        for _ in 0..k {
            acc = acc.add(self, w);
        }
        acc
    }

    /// Smallest k <= bound with k*P = O; the default bound 18 is a uniform
    /// torsion bound over quadratic fields, so exceeding it certifies
    /// infinite order.
    pub fn point_order(&self, w: &WeierstrassCurve, bound: usize) -> PointOrder {
        let mut acc = ECPoint::Infinity;
        for k in 1..=bound {
            acc = acc.add(self, w);
            if acc == ECPoint::Infinity {
                return PointOrder::Order(k);
            }
        }
        PointOrder::ExceedsBound
    }

    /// Is the sum of two points rational in both coordinates?
    pub fn sum_is_rational(&self, other: &ECPoint, w: &WeierstrassCurve) -> bool {
        match self.add(other, w) {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => x.is_rational().is_some() && y.is_rational().is_some(),
        }
    }

    /// Projective image with z-coordinate normalized.
    pub fn projective(&self) -> [NFElem; 3] {
        match self {
            ECPoint::Infinity => [NFElem::from_int(0), NFElem::from_int(1), NFElem::from_int(0)],
            ECPoint::Affine(x, y) => [x.clone(), y.clone(), NFElem::from_int(1)],
        }
    }
}

pub const TORSION_BOUND: usize = 18;

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> WeierstrassCurve {
        // the family's plane model, x negated into Weierstrass shape
        WeierstrassCurve::new(3, 0, 0, 1, 0)
    }

    fn pt(x: i64, y: i64) -> ECPoint {
        ECPoint::Affine(NFElem::from_int(x), NFElem::from_int(y))
    }

    #[test]
    fn identity_laws() {
        let w = curve();
        let p = pt(-1, 1);
        assert!(p.on_curve(&w));
        assert_eq!(p.add(&ECPoint::Infinity, &w), p);
        assert_eq!(p.add(&p.neg(&w), &w), ECPoint::Infinity);
    }

    #[test]
    fn commutative_and_associative_randomized() {
        // y^2 = x^3 - x has handy small points; random multiples of a base
        let w = WeierstrassCurve::new(0, 0, 0, -1, 0);
        let g = pt(0, 0);
        let h = pt(1, 0);
        let k = pt(-1, 0);
        let pts = [
            ECPoint::Infinity,
            g.clone(),
            h.clone(),
            k.clone(),
            g.add(&h, &w),
            h.add(&k, &w),
        ];
        for a in &pts {
            for b in &pts {
                assert_eq!(a.add(b, &w), b.add(a, &w));
                for c in &pts {
                    assert_eq!(a.add(b, &w).add(c, &w), a.add(&b.add(c, &w), &w));
                }
            }
        }
    }

    #[test]
    fn doubling_spot_check() {
        let w = curve();
        let p = pt(-1, 2);
        assert!(p.on_curve(&w));
        let two_p = p.mul_scalar(2, &w);
        let four_a = two_p.mul_scalar(2, &w);
        let four_b = p.mul_scalar(4, &w);
        assert_eq!(four_a, four_b);
    }
}
