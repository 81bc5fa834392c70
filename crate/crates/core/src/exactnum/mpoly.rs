//! Sparse multivariate polynomials and rational functions.
//!
//! Multivariate gcd is deliberately avoided: rational functions are kept as
//! num/den pairs, normalized only by monomial content and a unit scale, with
//! equality by cross-multiplication. Degrees stay small enough here that this
//! is the right trade.

use super::rational::Field;
use super::upoly::UPoly;
use std::collections::BTreeMap;
use std::fmt;

/// Variable names for printing; polynomials themselves index variables.
#[derive(Clone, Debug, Default)]
pub struct VarTable {
    pub names: Vec<String>,
}

impl VarTable {
    pub fn new(names: &[&str]) -> Self {
        VarTable { names: names.iter().map(|s| s.to_string()).collect() }
    }
    pub fn push(&mut self, name: &str) -> usize {
        self.names.push(name.to_string());
        self.names.len() - 1
    }
    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Clone, PartialEq)]
pub struct MPoly<F: Field> {
    pub nvars: usize,
    /// exponent vector -> coefficient, zero coefficients never stored
    pub terms: BTreeMap<Vec<u16>, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exp = vec![0u16; nvars];
        exp[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, F::one());
        MPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_zero() {
            return Some(F::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    fn insert_term(&mut self, exp: Vec<u16>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exp, ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Substitute zero for each listed variable.
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        let mut out = MPoly::zero(self.nvars);
        'term: for (e, c) in &self.terms {
            for &v in vars {
                if e[v] > 0 {
                    continue 'term;
                }
            }
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    /// Substitute a field value for one variable.
    pub fn substitute(&self, var: usize, value: &F) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            let mut exp = e.clone();
            exp[var] = 0;
            out.insert_term(exp, c.mul(&value.pow(k as u32)));
        }
        out
    }

    /// Full evaluation through an embedding of the coefficient field.
    pub fn eval_map<K: Field>(&self, vals: &[K], embed: &dyn Fn(&F) -> K) -> K {
        assert_eq!(vals.len(), self.nvars);
        let mut acc = K::zero();
        for (e, c) in &self.terms {
            let mut t = embed(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&vals[i].pow(k as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[var] -= 1;
            out.insert_term(exp, c.mul(&F::from_i64(e[var] as i64)));
        }
        out
    }

    /// Per-variable minimum exponent over all terms.
    pub fn monomial_content(&self) -> Vec<u16> {
        if self.is_zero() {
            return vec![0; self.nvars];
        }
        let mut min = vec![u16::MAX; self.nvars];
        for e in self.terms.keys() {
            for (m, &x) in min.iter_mut().zip(e) {
                *m = (*m).min(x);
            }
        }
        min
    }

    pub fn divide_monomial(&self, m: &[u16]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exp: Vec<u16> = e.iter().zip(m).map(|(a, b)| a.checked_sub(*b).expect("monomial divides")).collect();
                (exp, c.clone())
            })
            .collect();
        MPoly { nvars: self.nvars, terms }
    }

    /// View as a univariate polynomial in `var` with multivariate coefficients.
    pub fn coeffs_in(&self, var: usize) -> Vec<MPoly<F>> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut exp = e.clone();
            exp[var] = 0;
            out[k].insert_term(exp, c.clone());
        }
        out
    }

    pub fn map_coeffs<K: Field>(&self, f: &dyn Fn(&F) -> K) -> MPoly<K> {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect(),
        }
    }

    pub fn to_string_with(&self, vars: &VarTable) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut s = format!("{:?}", c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let name = vars
                    .names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("v{}", i));
                if k == 1 {
                    s.push_str(&format!("*{}", name));
                } else {
                    s.push_str(&format!("*{}^{}", name, k));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

impl<F: Field> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vt = VarTable { names: (0..self.nvars).map(|i| format!("v{}", i)).collect() };
        write!(f, "{}", self.to_string_with(&vt))
    }
}

/// Rational function num/den over a polynomial ring.
#[derive(Clone)]
pub struct RFunc<F: Field> {
    pub num: MPoly<F>,
    pub den: MPoly<F>,
}

impl<F: Field> RFunc<F> {
    pub fn from_poly(p: MPoly<F>) -> Self {
        let nv = p.nvars;
        RFunc { num: p, den: MPoly::one(nv) }.normalized()
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        RFunc::from_poly(MPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RFunc::from_poly(MPoly::var(nvars, i))
    }

    pub fn new(num: MPoly<F>, den: MPoly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        RFunc { num, den }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = MPoly::one(self.den.nvars);
            return self;
        }
        // joint monomial content
        let cn = self.num.monomial_content();
        let cd = self.den.monomial_content();
        let joint: Vec<u16> = cn.iter().zip(&cd).map(|(a, b)| *a.min(b)).collect();
        if joint.iter().any(|&x| x > 0) {
            self.num = self.num.divide_monomial(&joint);
            self.den = self.den.divide_monomial(&joint);
        }
        // unit normalization: make den's first stored coefficient 1
        let lead = self.den.terms.values().next().unwrap().clone();
        if lead != F::one() {
            let li = lead.inv().expect("nonzero coefficient");
            self.num = self.num.scale(&li);
            self.den = self.den.scale(&li);
        }
        self
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn eval_map<K: Field>(&self, vals: &[K], embed: &dyn Fn(&F) -> K) -> Option<K> {
        let d = self.den.eval_map(vals, embed);
        let n = self.num.eval_map(vals, embed);
        n.div(&d)
    }
}

impl<F: Field> PartialEq for RFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl<F: Field> fmt::Debug for RFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl<F: Field> Field for RFunc<F> {
    fn zero() -> Self {
        // nvars is contextual; zero() produces the 0-variable constant and
        // arithmetic lifts it, mirroring NFElem::Rat.
        RFunc { num: MPoly::zero(0), den: MPoly::one(0) }
    }
    fn one() -> Self {
        RFunc { num: MPoly::one(0), den: MPoly::one(0) }
    }
    fn add(&self, rhs: &Self) -> Self {
        let (a, b) = lift_pair(self, rhs);
        RFunc::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = lift_pair(self, rhs);
        if a.num.is_zero() || b.num.is_zero() {
            return RFunc { num: MPoly::zero(a.nvars()), den: MPoly::one(a.nvars()) };
        }
        RFunc::new(a.num.mul(&b.num), a.den.mul(&b.den))
    }
    fn neg(&self) -> Self {
        RFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RFunc::new(self.den.clone(), self.num.clone()))
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        RFunc { num: MPoly::constant(0, F::from_i64(v)), den: MPoly::one(0) }
    }
}

fn lift_pair<F: Field>(a: &RFunc<F>, b: &RFunc<F>) -> (RFunc<F>, RFunc<F>) {
    let nv = a.nvars().max(b.nvars());
    (pad(a, nv), pad(b, nv))
}

fn pad<F: Field>(r: &RFunc<F>, nv: usize) -> RFunc<F> {
    if r.nvars() == nv {
        return r.clone();
    }
    let fix = |p: &MPoly<F>| MPoly {
        nvars: nv,
        terms: p
            .terms
            .iter()
            .map(|(e, c)| {
                let mut exp = e.clone();
                exp.resize(nv, 0);
                (exp, c.clone())
            })
            .collect(),
    };
    RFunc { num: fix(&r.num), den: fix(&r.den) }
}

/// Resultant of two polynomials with respect to one variable, computed over
/// the rational-function field in the remaining variables. Returns the
/// numerator polynomial (denominators are units for our callers, which verify
/// solutions downstream anyway).
pub fn resultant_in<F: Field>(f: &MPoly<F>, g: &MPoly<F>, var: usize) -> MPoly<F> {
    let fc: Vec<RFunc<F>> = f.coeffs_in(var).into_iter().map(RFunc::from_poly).collect();
    let gc: Vec<RFunc<F>> = g.coeffs_in(var).into_iter().map(RFunc::from_poly).collect();
    let fp = UPoly::new(fc);
    let gp = UPoly::new(gc);
    let r = super::upoly::poly_resultant(&fp, &gp);
    r.num.clone()
}
