//! Long Weierstrass cubics, their standard invariants, and the passage from
//! a plane cubic model.

use super::plane::{monomials, PlaneCurve};
use crate::exactnum::{Field, Rational};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("singular curve: discriminant vanishes")]
    Singular,
    #[error("cubic is not in Weierstrass shape")]
    NotWeierstrass,
}

/// y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
#[derive(Clone, PartialEq, Debug)]
pub struct WeierstrassCurve {
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a6: Rational,
}

#[derive(Clone, Debug)]
pub struct Invariants {
    pub b2: Rational,
    pub b4: Rational,
    pub b6: Rational,
    pub b8: Rational,
    pub c4: Rational,
    pub c6: Rational,
    pub disc: Rational,
    pub j: Rational,
}

impl WeierstrassCurve {
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        WeierstrassCurve {
            a1: Rational::from_int(a1),
            a2: Rational::from_int(a2),
            a3: Rational::from_int(a3),
            a4: Rational::from_int(a4),
            a6: Rational::from_int(a6),
        }
    }

    pub fn invariants(&self) -> Result<Invariants, CurveError> {
        let r = |v: i64| Rational::from_int(v);
        let b2 = self.a1.mul(&self.a1).add(&r(4).mul(&self.a2));
        let b4 = r(2).mul(&self.a4).add(&self.a1.mul(&self.a3));
        let b6 = self.a3.mul(&self.a3).add(&r(4).mul(&self.a6));
        let b8 = self
            .a1
            .mul(&self.a1)
            .mul(&self.a6)
            .add(&r(4).mul(&self.a2).mul(&self.a6))
            .sub(&self.a1.mul(&self.a3).mul(&self.a4))
            .add(&self.a2.mul(&self.a3).mul(&self.a3))
            .sub(&self.a4.mul(&self.a4));
        let c4 = b2.mul(&b2).sub(&r(24).mul(&b4));
        let c6 = b2
            .mul(&b2)
            .mul(&b2)
            .neg()
            .add(&r(36).mul(&b2).mul(&b4))
            .sub(&r(216).mul(&b6));
        let disc = b2
            .mul(&b2)
            .mul(&b8)
            .neg()
            .sub(&r(8).mul(&b4).mul(&b4).mul(&b4))
            .sub(&r(27).mul(&b6).mul(&b6))
            .add(&r(9).mul(&b2).mul(&b4).mul(&b6));
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        let j = c4.mul(&c4).mul(&c4).mul(&disc.inv().unwrap());
        Ok(Invariants { b2, b4, b6, b8, c4, c6, disc, j })
    }
}

fn coeff(pc: &PlaneCurve, mon: (usize, usize, usize)) -> Rational {
    monomials(pc.degree)
        .into_iter()
        .zip(&pc.coeffs)
        .find(|&(m, _)| m == mon)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Rational::zero)
}

/// Reads a plane cubic as a long Weierstrass curve, negating x when the
/// leading signs require it. Returns the curve and whether x was negated.
pub fn weierstrass_from_cubic(pc: &PlaneCurve) -> Result<(WeierstrassCurve, bool), CurveError> {
    assert_eq!(pc.degree, 3);
    for (m, c) in monomials(3).into_iter().zip(&pc.coeffs) {
        match m {
            (0, 3, 0) | (1, 2, 0) | (2, 1, 0) => {
                if !c.is_zero() {
                    return Err(CurveError::NotWeierstrass);
                }
            }
            _ => {}
        }
    }
    for flip in [false, true] {
        // after optional x -> -x: want  -x^3 + y^2 z + a1 xyz + a3 y z^2
        //                              - a2 x^2 z - a4 x z^2 - a6 z^3 = 0
        // scaled so that coeff(y^2 z) = 1
        let sgn = |i: usize| if flip && i % 2 == 1 { -1i64 } else { 1 };
        let get = |mon: (usize, usize, usize)| {
            coeff(pc, mon).mul(&Rational::from_int(sgn(mon.0)))
        };
        let y2z = get((0, 2, 1));
        if y2z.is_zero() {
            continue;
        }
        let s = y2z.inv().unwrap();
        let x3 = get((3, 0, 0)).mul(&s);
        if x3 != Rational::from_int(-1) {
            continue;
        }
        let w = WeierstrassCurve {
            a1: get((1, 1, 1)).mul(&s),
            a3: get((0, 1, 2)).mul(&s),
            a2: get((2, 0, 1)).mul(&s).neg(),
            a4: get((1, 0, 2)).mul(&s).neg(),
            a6: get((0, 0, 3)).mul(&s).neg(),
        };
        return Ok((w, flip));
    }
    Err(CurveError::NotWeierstrass)
}

/// Apply the plane substitution x = z - X, y = Y - X - Z, z = Z (the inverse
/// of the map sending [x:y:z] to [-x+z : -x+y+2z : z]) to a cubic.
pub fn transformed_cubic(pc: &PlaneCurve) -> PlaneCurve {
    use crate::exactnum::MPoly;
    assert_eq!(pc.degree, 3);
    let nv = 3;
    let xx = MPoly::<Rational>::var(nv, 0);
    let yy = MPoly::<Rational>::var(nv, 1);
    let zz = MPoly::<Rational>::var(nv, 2);
    let x_new = zz.sub(&xx);
    let y_new = yy.sub(&xx).sub(&zz);
    let z_new = zz.clone();
    let mut acc = MPoly::<Rational>::zero(nv);
    for ((i, j, k), c) in monomials(3).into_iter().zip(&pc.coeffs) {
        if c.is_zero() {
            continue;
        }
        let t = x_new.pow(i).mul(&y_new.pow(j)).mul(&z_new.pow(k)).scale(c);
        acc = acc.add(&t);
    }
    let coeffs = monomials(3)
        .into_iter()
        .map(|(i, j, k)| {
            acc.terms
                .get(&vec![i as u16, j as u16, k as u16])
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
        .collect();
    PlaneCurve { degree: 3, coeffs }.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_relation_holds() {
        let w = WeierstrassCurve::new(3, 0, 0, 1, 0);
        let inv = w.invariants().unwrap();
        // c4^3 - c6^2 = 1728 disc
        let lhs = inv.c4.pow(3).sub(&inv.c6.pow(2));
        assert_eq!(lhs, Rational::from_int(1728).mul(&inv.disc));
    }

    #[test]
    fn j_zero_example() {
        // y^2 = x^3 + 1 has c4 = 0
        let w = WeierstrassCurve::new(0, 0, 0, 0, 1);
        let inv = w.invariants().unwrap();
        assert!(inv.c4.is_zero());
        assert!(inv.j.is_zero());
    }

    #[test]
    fn j_1728_square_lattice() {
        // y^2 = x^3 + x
        let w = WeierstrassCurve::new(0, 0, 0, 1, 0);
        let inv = w.invariants().unwrap();
        assert_eq!(inv.j, Rational::from_int(1728));
    }
}
