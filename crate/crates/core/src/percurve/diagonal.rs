//! Global defining equations of the curve in the coordinate chart: the
//! Moebius part is pinned by three orbit conditions and the remaining cycle
//! conditions are cleared to polynomials.

use crate::exactnum::{Cx, MPoly, Rational};

/// The cleared polynomial system in the variables x_3..x_n (indexed 0..n-3).
#[derive(Clone, Debug)]
pub struct DiagonalSystem {
    pub d: usize,
    pub n: usize,
    pub equations: Vec<MPoly<Rational>>,
}

/// Builds the system for period 4 or 5.
///
/// The Moebius part M is fixed by M(x_n^d) = 0, M(0) = 1, M(1) = x_3; the
/// equations are M(x_i^d) = x_{i+1} cleared to polynomials. Equivalence with
/// the cross-ratio formulation is a tested postcondition.
pub fn diagonal_system(d: usize, n: usize) -> Result<DiagonalSystem, String> {
    if !(n == 4 || n == 5) {
        return Err(format!("unsupported period {}", n));
    }
    let nv = n - 3 + 1; // variables x3..xn
    let x = |i: usize| MPoly::<Rational>::var(nv, i - 3);
    let one = MPoly::<Rational>::one(nv);
    // with w the argument: M(w) = x3 (w - xn^d) / ((1 - xn^d + x3 xn^d) w - x3 xn^d)
    let xnd = x(n).pow(d);
    let denom_lead = one.sub(&xnd).add(&x(3).mul(&xnd)); // 1 - xn^d + x3 xn^d
    let m_num = |w: &MPoly<Rational>| x(3).mul(&w.sub(&xnd));
    let m_den = |w: &MPoly<Rational>| denom_lead.mul(w).sub(&x(3).mul(&xnd));
    // equations M(x_i^d) = x_{i+1} for i = 3..n-1
    let mut equations = Vec::new();
    for i in 3..n {
        let w = x(i).pow(d);
        let e = m_num(&w).sub(&x(i + 1).mul(&m_den(&w)));
        let c = e.monomial_content();
        equations.push(e.divide_monomial(&c));
    }
    Ok(DiagonalSystem { d, n, equations })
}

impl DiagonalSystem {
    pub fn eval(&self, vals: &[Cx]) -> Vec<Cx> {
        self.equations
            .iter()
            .map(|e| e.eval_map(vals, &|q: &Rational| Cx::new(q.to_f64(), 0.0)))
            .collect()
    }

    pub fn residual(&self, vals: &[Cx]) -> f64 {
        self.eval(vals).iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::{pi_maps, HPoint};

    #[test]
    fn period4_matches_written_form() {
        // x3^d - x4^d - x4 x3^{d-1}(1 - x4^d) - x4^{d+1}(x3^d - 1), times x3
        for d in 2..=4usize {
            let sys = diagonal_system(d, 4).unwrap();
            assert_eq!(sys.equations.len(), 1);
            let nv = 2;
            let x3 = MPoly::<Rational>::var(nv, 0);
            let x4 = MPoly::<Rational>::var(nv, 1);
            let one = MPoly::<Rational>::one(nv);
            let expect = x3
                .pow(d)
                .sub(&x4.pow(d))
                .sub(&x4.mul(&x3.pow(d - 1)).mul(&one.sub(&x4.pow(d))))
                .sub(&x4.pow(d + 1).mul(&x3.pow(d).sub(&one)));
            // equations agree up to the cleared content x3
            let e = &sys.equations[0];
            assert!(
                e.sub(&expect).is_zero() || e.mul(&x3).sub(&expect.mul(&x3)).is_zero(),
                "d = {}",
                d
            );
        }
    }

    #[test]
    fn wall_point_is_excluded() {
        // x3 = 1 violates the chart invariants, and indeed lies outside
        // every admissible point the solver will accept
        let h = HPoint::new(2, 5, vec![Cx::new(1.0, 0.0), Cx::new(0.5, 0.0), Cx::new(2.0, 0.0)]);
        assert!(h.is_err());
        let _ = pi_maps; // curve-point equivalence is exercised by the sampler tests
    }
}
