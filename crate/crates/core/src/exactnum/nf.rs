//! Number fields Q[x]/(m(x)) for the handful of fields the computations
//! touch: Q itself, quadratic extensions, and cyclotomic fields of small
//! conductor. Elements carry their field by reference; rationals embed into
//! any field on demand.

use super::rational::{Field, Rational};
use super::upoly::UPoly;
use super::{Cx, NumError};
use num_bigint::BigInt;

use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct NumberField {
    /// Monic minimal polynomial, coefficients low to high, last = 1.
    pub minpoly: Vec<Rational>,
    pub degree: usize,
    pub label: String,
    /// Chosen complex embedding of the generator.
    pub embedding: (f64, f64),
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl NumberField {
    pub fn minpoly_string(&self) -> String {
        let p = UPoly::new(self.minpoly.clone());
        p.to_string_var("x")
    }
}

fn cyclotomic_coeffs(d: usize) -> Option<Vec<i64>> {
    // Phi_d for d <= 12, low to high.
    Some(match d {
        1 => vec![-1, 1],
        2 => vec![1, 1],
        3 => vec![1, 1, 1],
        4 => vec![1, 0, 1],
        5 => vec![1, 1, 1, 1, 1],
        6 => vec![1, -1, 1],
        7 => vec![1, 1, 1, 1, 1, 1, 1],
        8 => vec![1, 0, 0, 0, 1],
        9 => vec![1, 0, 0, 1, 0, 0, 1],
        10 => vec![1, -1, 1, -1, 1],
        11 => vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
        12 => vec![1, 0, -1, 0, 1],
        _ => return None,
    })
}

/// Builds a field descriptor from a monic minimal polynomial.
///
/// Supported: degree one (gives Q back as a degree-1 field), irreducible
/// quadratics, and the cyclotomic polynomials Phi_d for d <= 12. Reducible
/// quadratics and anything else are rejected.
pub fn nf_make(minpoly: &UPoly<Rational>) -> Result<Arc<NumberField>, NumError> {
    let deg = minpoly.degree().ok_or_else(|| {
        NumError::UnsupportedField("zero polynomial".into())
    })?;
    if deg == 0 {
        return Err(NumError::UnsupportedField("constant polynomial".into()));
    }
    if minpoly.coeffs[deg] != Rational::one() {
        return Err(NumError::UnsupportedField("not monic".into()));
    }
    let coeffs = minpoly.coeffs.clone();
    // cyclotomic polynomials first: Phi_3, Phi_4, Phi_6 are quadratic and
    // should be labeled by their conductor (except x^2+1, kept as Q(i))
    for d in 3..=12usize {
        if let Some(cs) = cyclotomic_coeffs(d) {
            if cs.len() == coeffs.len()
                && cs
                    .iter()
                    .zip(&coeffs)
                    .all(|(a, b)| &Rational::from_int(*a) == b)
            {
                let theta = 2.0 * std::f64::consts::PI / d as f64;
                let label = if d == 4 { "Q(i)".to_string() } else { format!("Q(zeta{})", d) };
                return Ok(Arc::new(NumberField {
                    minpoly: coeffs,
                    degree: deg,
                    label,
                    embedding: (theta.cos(), theta.sin()),
                }));
            }
        }
    }
    let label;
    let embedding;
    match deg {
        1 => {
            label = "Q".to_string();
            embedding = (coeffs[0].neg().to_f64(), 0.0);
        }
        2 => {
            let b = coeffs[1].clone();
            let c = coeffs[0].clone();
            let disc = b.mul(&b).sub(&Rational::from_int(4).mul(&c));
            if disc.sqrt_exact().is_some() {
                return Err(NumError::Reducible(format!(
                    "x^2 + ({})x + ({}) splits over Q",
                    b, c
                )));
            }
            let d = disc.to_f64();
            let sq = if d >= 0.0 {
                (d.sqrt(), 0.0)
            } else {
                (0.0, (-d).sqrt())
            };
            embedding = ((-b.to_f64() + sq.0) / 2.0, sq.1 / 2.0);
            label = quadratic_label(&b, &c);
        }
        _ => {
            return Err(NumError::UnsupportedField(format!(
                "degree {} not cyclotomic of conductor <= 12",
                deg
            )));
        }
    }
    Ok(Arc::new(NumberField {
        minpoly: coeffs,
        degree: deg,
        label,
        embedding,
    }))
}

fn quadratic_label(b: &Rational, c: &Rational) -> String {
    if b.is_zero() {
        // x^2 + c = 0, generator sqrt(-c)
        let m = c.neg();
        if m == Rational::from_int(-1) {
            return "Q(i)".to_string();
        }
        let (_, free) = m.squarefree_decomposition();
        if free == BigInt::from(-1) {
            return "Q(i)".to_string();
        }
        return format!("Q(sqrt({}))", free);
    }
    format!("Q[x]/(x^2+({})x+({}))", b, c)
}

/// Q(zeta_d) with its generator, as a field handle. For d <= 2 the field is Q.
pub fn cyclotomic_field(d: usize) -> Result<Arc<NumberField>, NumError> {
    let cs = cyclotomic_coeffs(d)
        .ok_or_else(|| NumError::UnsupportedField(format!("conductor {}", d)))?;
    let poly = UPoly::new(cs.into_iter().map(Rational::from_int).collect());
    nf_make(&poly)
}

/// Element of a number field. Plain rationals embed into any field, so they
/// get their own variant and lift lazily on mixed arithmetic.
#[derive(Clone)]
pub enum NFElem {
    Rat(Rational),
    Ext { field: Arc<NumberField>, coeffs: Vec<Rational> },
}

impl NFElem {
    pub fn from_rational(r: Rational) -> Self {
        NFElem::Rat(r)
    }

    pub fn from_int(v: i64) -> Self {
        NFElem::Rat(Rational::from_int(v))
    }

    /// The class of x, i.e. the field generator.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree == 1 {
            return NFElem::Rat(field.minpoly[0].neg());
        }
        let mut coeffs = vec![Rational::zero(); field.degree];
        coeffs[1] = Rational::one();
        NFElem::Ext { field: field.clone(), coeffs }
    }

    /// A primitive d-th root of unity (rational for d <= 2).
    pub fn zeta(d: usize) -> Result<Self, NumError> {
        match d {
            1 => Ok(NFElem::from_int(1)),
            2 => Ok(NFElem::from_int(-1)),
            _ => Ok(NFElem::generator(&cyclotomic_field(d)?)),
        }
    }

    pub fn is_rational(&self) -> Option<Rational> {
        match self {
            NFElem::Rat(r) => Some(r.clone()),
            NFElem::Ext { coeffs, .. } => {
                if coeffs.iter().skip(1).all(|c| c.is_zero()) {
                    Some(coeffs[0].clone())
                } else {
                    None
                }
            }
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            NFElem::Rat(_) => None,
            NFElem::Ext { field, .. } => Some(field),
        }
    }

    pub fn coeff_vector(&self, degree: usize) -> Vec<Rational> {
        match self {
            NFElem::Rat(r) => {
                let mut v = vec![Rational::zero(); degree];
                v[0] = r.clone();
                v
            }
            NFElem::Ext { coeffs, .. } => coeffs.clone(),
        }
    }

    fn lift(&self, field: &Arc<NumberField>) -> Vec<Rational> {
        self.coeff_vector(field.degree)
    }

    /// Numeric evaluation under the field's chosen complex embedding.
    pub fn to_cx(&self) -> Cx {
        match self {
            NFElem::Rat(r) => Cx::new(r.to_f64(), 0.0),
            NFElem::Ext { field, coeffs } => {
                let g = Cx::new(field.embedding.0, field.embedding.1);
                let mut acc = Cx::new(0.0, 0.0);
                for c in coeffs.iter().rev() {
                    acc = acc * g + Cx::new(c.to_f64(), 0.0);
                }
                acc
            }
        }
    }

    fn reduce(field: &Arc<NumberField>, mut coeffs: Vec<Rational>) -> Self {
        // reduce mod minpoly (monic)
        let deg = field.degree;
        while coeffs.len() > deg {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = coeffs.len() - deg;
            for i in 0..deg {
                let t = top.mul(&field.minpoly[i]);
                coeffs[k + i] = coeffs[k + i].sub(&t);
            }
        }
        coeffs.resize(deg, Rational::zero());
        if coeffs.iter().skip(1).all(|c| c.is_zero()) {
            NFElem::Rat(coeffs[0].clone())
        } else {
            NFElem::Ext { field: field.clone(), coeffs }
        }
    }

    fn binop(&self, rhs: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        match (self, rhs) {
            (NFElem::Rat(a), NFElem::Rat(b)) => NFElem::Rat(f(a, b)),
            _ => {
                let field = self
                    .field()
                    .or_else(|| rhs.field())
                    .expect("at least one extension element")
                    .clone();
                if let (Some(fa), Some(fb)) = (self.field(), rhs.field()) {
                    assert_eq!(fa.minpoly, fb.minpoly, "mixed number fields");
                }
                let a = self.lift(&field);
                let b = rhs.lift(&field);
                let coeffs = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
                NFElem::reduce(&field, coeffs)
            }
        }
    }
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (NFElem::Rat(a), NFElem::Rat(b)) => a == b,
            _ => {
                let field = match self.field().or_else(|| other.field()) {
                    Some(f) => f.clone(),
                    None => unreachable!(),
                };
                self.lift(&field) == other.lift(&field)
            }
        }
    }
}

impl Field for NFElem {
    fn zero() -> Self {
        NFElem::Rat(Rational::zero())
    }
    fn one() -> Self {
        NFElem::Rat(Rational::one())
    }
    fn add(&self, rhs: &Self) -> Self {
        self.binop(rhs, |a, b| a.add(b))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.binop(rhs, |a, b| a.sub(b))
    }
    fn mul(&self, rhs: &Self) -> Self {
        match (self, rhs) {
            (NFElem::Rat(a), NFElem::Rat(b)) => NFElem::Rat(a.mul(b)),
            _ => {
                let field = self.field().or_else(|| rhs.field()).unwrap().clone();
                if let (Some(fa), Some(fb)) = (self.field(), rhs.field()) {
                    assert_eq!(fa.minpoly, fb.minpoly, "mixed number fields");
                }
                let a = self.lift(&field);
                let b = rhs.lift(&field);
                let mut prod = vec![Rational::zero(); 2 * field.degree];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        prod[i + j] = prod[i + j].add(&x.mul(y));
                    }
                }
                NFElem::reduce(&field, prod)
            }
        }
    }
    fn neg(&self) -> Self {
        match self {
            NFElem::Rat(a) => NFElem::Rat(a.neg()),
            NFElem::Ext { field, coeffs } => NFElem::Ext {
                field: field.clone(),
                coeffs: coeffs.iter().map(|c| c.neg()).collect(),
            },
        }
    }
    fn inv(&self) -> Option<Self> {
        match self {
            NFElem::Rat(a) => a.inv().map(NFElem::Rat),
            NFElem::Ext { field, coeffs } => {
                // extended euclid of coeffs against minpoly over Q[x]
                let a = UPoly::new(coeffs.clone());
                let m = UPoly::new(field.minpoly.clone());
                let (g, s) = a.half_extended_gcd(&m);
                let gd = g.degree()?;
                if gd != 0 {
                    return None; // not invertible (minpoly reducible would be the cause)
                }
                let scale = g.coeffs[0].inv()?;
                let inv_coeffs = s.coeffs.iter().map(|c| c.mul(&scale)).collect();
                Some(NFElem::reduce(field, inv_coeffs))
            }
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            NFElem::Rat(a) => a.is_zero(),
            NFElem::Ext { coeffs, .. } => coeffs.iter().all(|c| c.is_zero()),
        }
    }
    fn from_i64(v: i64) -> Self {
        NFElem::from_int(v)
    }
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NFElem::Rat(r) => write!(f, "{}", r),
            NFElem::Ext { field, coeffs } => {
                let names = if field.label.starts_with("Q(zeta") {
                    "z"
                } else {
                    "w"
                };
                let mut parts = Vec::new();
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let term = match i {
                        0 => format!("{}", c),
                        1 => format!("{}*{}", c, names),
                        _ => format!("{}*{}^{}", c, names, i),
                    };
                    parts.push(term);
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
        }
    }
}

/// Roots of a*x^2 + b*x + c over Q or the canonical quadratic extension.
///
/// The extension is Q(sqrt(m)) for m the squarefree part of the discriminant,
/// so conjugate solutions share one field handle.
pub fn solve_quadratic(
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<(NFElem, NFElem, Option<Arc<NumberField>>), NumError> {
    assert!(!a.is_zero());
    let four = Rational::from_int(4);
    let disc = b.mul(b).sub(&four.mul(&a.mul(c)));
    let two_a = Rational::from_int(2).mul(a);
    let inv2a = two_a.inv().expect("nonzero leading coefficient");
    if let Some(sq) = disc.sqrt_exact() {
        let r1 = b.neg().add(&sq).mul(&inv2a);
        let r2 = b.neg().sub(&sq).mul(&inv2a);
        return Ok((NFElem::Rat(r1), NFElem::Rat(r2), None));
    }
    let (q, m) = disc.squarefree_decomposition();
    // field Q(g), g^2 = m ; sqrt(disc) = q*g
    let minpoly = UPoly::new(vec![Rational::from_bigint(m.clone()).neg(), Rational::zero(), Rational::one()]);
    let field = nf_make(&minpoly)?;
    let g = NFElem::generator(&field);
    let sqrt_disc = g.mul(&NFElem::Rat(q));
    let nb = NFElem::Rat(b.neg());
    let inv2a = NFElem::Rat(inv2a);
    let r1 = nb.add(&sqrt_disc).mul(&inv2a);
    let r2 = nb.sub(&sqrt_disc).mul(&inv2a);
    Ok((r1, r2, Some(field)))
}
