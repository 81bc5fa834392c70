//! Truncated power series in one distinguished variable, with coefficients in
//! an arbitrary field (rational functions of the remaining variables in
//! practice). Only first-order terms are ever needed downstream, but the
//! truncation order is adjustable because degenerate coordinate choices can
//! shift orders upward.

use super::mpoly::{MPoly, RFunc};
use super::rational::Field;
use super::NumError;

pub const DEFAULT_TRUNCATION: usize = 3;
pub const MAX_TRUNCATION: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<F: Field> {
    /// coeffs[k] multiplies t^k; length is order + 1
    pub coeffs: Vec<F>,
    pub order: usize,
}

impl<F: Field> TruncSeries<F> {
    pub fn new(coeffs: Vec<F>, order: usize) -> Self {
        let mut coeffs = coeffs;
        coeffs.resize(order + 1, F::zero());
        TruncSeries { coeffs, order }
    }

    pub fn constant(c: F, order: usize) -> Self {
        let mut coeffs = vec![F::zero(); order + 1];
        coeffs[0] = c;
        TruncSeries { coeffs, order }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].add(&rhs.coeffs[k]))
            .collect();
        TruncSeries { coeffs, order }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].sub(&rhs.coeffs[k]))
            .collect();
        TruncSeries { coeffs, order }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order.min(rhs.order);
        let mut coeffs = vec![F::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                let t = self.coeffs[i].mul(&rhs.coeffs[j]);
                coeffs[i + j] = coeffs[i + j].add(&t);
            }
        }
        TruncSeries { coeffs, order }
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.coeffs[0].inv()?;
        let mut out = vec![F::zero(); self.order + 1];
        out[0] = c0.clone();
        for k in 1..=self.order {
            let mut acc = F::zero();
            for j in 1..=k {
                let t = self.coeffs[j].mul(&out[k - j]);
                acc = acc.add(&t);
            }
            out[k] = acc.mul(&c0).neg();
        }
        Some(TruncSeries { coeffs: out, order: self.order })
    }
}

/// Smallest index with a nonzero coefficient, together with that coefficient.
pub fn series_leading<F: Field>(s: &TruncSeries<F>) -> Result<(usize, F), NumError> {
    for (k, c) in s.coeffs.iter().enumerate() {
        if !c.is_zero() {
            return Ok((k, c.clone()));
        }
    }
    Err(NumError::OrderExceedsTruncation(s.order))
}

/// Expand a rational function as a series in variable `var` up to `order`.
///
/// The coefficients are rational functions of the remaining variables. Fails
/// if the function has a pole along `var = 0` (denominator order exceeding
/// numerator order).
pub fn expand_rfunc<F: Field>(
    rf: &RFunc<F>,
    var: usize,
    order: usize,
) -> Result<TruncSeries<RFunc<F>>, NumError> {
    let num_c = rf.num.coeffs_in(var);
    let den_c = rf.den.coeffs_in(var);
    let num_ord = num_c.iter().position(|c| !c.is_zero());
    let den_ord = den_c
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero denominator");
    let num_ord = match num_ord {
        None => return Ok(TruncSeries::constant(RFunc::constant(rf.nvars(), F::zero()), order)),
        Some(k) => k,
    };
    if num_ord < den_ord {
        return Err(NumError::DivideByZero);
    }
    let shift = num_ord - den_ord;
    let coef = |v: &Vec<MPoly<F>>, k: usize| -> RFunc<F> {
        v.get(k).map(|p| RFunc::from_poly(p.clone())).unwrap_or_else(|| RFunc::constant(rf.nvars(), F::zero()))
    };
    // regular parts, shifted so denominator starts with a unit
    let num_series = TruncSeries::new(
        (0..=order).map(|k| coef(&num_c, k + num_ord)).collect(),
        order,
    );
    let den_series = TruncSeries::new(
        (0..=order).map(|k| coef(&den_c, k + den_ord)).collect(),
        order,
    );
    let inv = den_series.inv().ok_or(NumError::DivideByZero)?;
    let prod = num_series.mul(&inv);
    // reapply the shift t^(num_ord - den_ord)
    let mut coeffs = vec![RFunc::constant(rf.nvars(), F::zero()); order + 1];
    for k in 0..=order {
        if k + shift <= order {
            coeffs[k + shift] = prod.coeffs[k].clone();
        }
    }
    Ok(TruncSeries { coeffs, order })
}
