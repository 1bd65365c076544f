//! Exact multivariate Laurent polynomials over the integers.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial `t_1^{d_1} ⋯ t_m^{d_m}`.
pub type Degree = Vec<i32>;

/// Laurent polynomial in `t_1..t_m` with arbitrary-precision coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration is in increasing
/// lexicographic order of the multidegree and zero coefficients never appear.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Degree, BigInt>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, 1)
    }

    pub fn constant(vars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, vec![0; vars], c)
    }

    pub fn monomial(vars: usize, degree: Degree, c: impl Into<BigInt>) -> Self {
        assert_eq!(degree.len(), vars, "monomial degree has wrong arity");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(degree, c);
        }
        LaurentPoly { vars, terms }
    }

    /// The variable `t_j` (0-based `j`).
    pub fn var(vars: usize, j: usize) -> Self {
        let mut d = vec![0; vars];
        d[j] = 1;
        Self::monomial(vars, d, 1)
    }

    /// Builds a polynomial from `(degree, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Degree, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(vars);
        for (d, c) in terms {
            assert_eq!(d.len(), vars, "monomial degree has wrong arity");
            p.add_term(d, c.into());
        }
        p
    }

    fn add_term(&mut self, d: Degree, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order of degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Degree, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &[i32]) -> BigInt {
        self.terms.get(d).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Lexicographically largest term.
    pub fn leading(&self) -> Option<(&Degree, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_degree(&self) -> Option<Degree> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |mut acc, d| {
            for (a, b) in acc.iter_mut().zip(d) {
                *a = (*a).min(*b);
            }
            acc
        }))
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shifted(&self, shift: &[i32]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| (d.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly {
            vars: self.vars,
            terms,
        }
    }

    pub fn scaled(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars);
        }
        let terms = self.terms.iter().map(|(d, c)| (d.clone(), c * s)).collect();
        LaurentPoly {
            vars: self.vars,
            terms,
        }
    }

    /// `p(t_1^{-1}, …, t_m^{-1})`.
    pub fn inverted(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| (d.iter().map(|e| -e).collect(), c.clone()))
            .collect();
        LaurentPoly {
            vars: self.vars,
            terms,
        }
    }

    /// Canonical representative up to units `±t^a`: the componentwise minimum
    /// degree becomes zero and the leading coefficient becomes positive.
    pub fn normalize(&self) -> Self {
        let Some(min) = self.min_degree() else {
            return self.clone();
        };
        let neg: Vec<i32> = min.iter().map(|e| -e).collect();
        let p = self.shifted(&neg);
        if p.leading().is_some_and(|(_, c)| c.is_negative()) {
            -p
        } else {
            p
        }
    }

    /// Numeric value at a point of `(C^*)^m`.
    pub fn eval(&self, z: &[Complex<f64>]) -> Result<Complex<f64>> {
        if z.len() != self.vars {
            return Err(Error::DimensionMismatch(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                z.len(),
                self.vars
            )));
        }
        if let Some(j) = z.iter().position(|w| w.norm() == 0.0) {
            return Err(Error::ZeroCoordinate(j));
        }
        let mut acc = Complex::new(0.0, 0.0);
        for (d, c) in &self.terms {
            let mut term = Complex::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (w, &e) in z.iter().zip(d) {
                term *= w.powi(e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact quotient `self / d` when `d` divides `self`, else `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.vars));
        }
        // Work with honest polynomials: shift both so all exponents are ≥ 0.
        let smin = self.min_degree()?;
        let dmin = d.min_degree()?;
        let num = self.shifted(&smin.iter().map(|e| -e).collect::<Vec<_>>());
        let den = d.shifted(&dmin.iter().map(|e| -e).collect::<Vec<_>>());
        let (lead_deg, lead_coef) = den.leading().map(|(a, b)| (a.clone(), b.clone()))?;

        let mut rem = num;
        let mut quot = Self::zero(self.vars);
        while let Some((rd, rc)) = rem.leading() {
            let qd: Degree = rd.iter().zip(&lead_deg).map(|(a, b)| a - b).collect();
            if qd.iter().any(|e| *e < 0) {
                return None;
            }
            let (qc, r) = rc.div_rem(&lead_coef);
            if !r.is_zero() {
                return None;
            }
            let step = Self::monomial(self.vars, qd, qc);
            rem = &rem - &(&step * &den);
            quot = &quot + &step;
        }
        let back: Vec<i32> = smin.iter().zip(&dmin).map(|(a, b)| a - b).collect();
        Some(quot.shifted(&back))
    }

    /// Human-readable form in decreasing lexicographic order, e.g. `t^2 - t + 1`.
    pub fn display(&self) -> String {
        self.to_string()
    }
}

fn var_name(vars: usize, j: usize) -> String {
    if vars == 1 {
        "t".to_string()
    } else {
        format!("t{}", j + 1)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (d, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = d
                .iter()
                .enumerate()
                .filter(|(_, e)| **e != 0)
                .map(|(j, e)| {
                    if *e == 1 {
                        var_name(self.vars, j)
                    } else {
                        format!("{}^{}", var_name(self.vars, j), e)
                    }
                })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", mag, mono.join("*")),
            };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(d.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.vars, rhs.vars);
        let mut acc: BTreeMap<Degree, BigInt> = BTreeMap::new();
        for (da, ca) in &self.terms {
            for (db, cb) in &rhs.terms {
                let d: Degree = da.iter().zip(db).map(|(a, b)| a + b).collect();
                *acc.entry(d).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly {
            vars: self.vars,
            terms: acc,
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Wire form: `{"vars": m, "terms": [{"deg": [..], "coef": c}, ...]}` in
/// increasing lexicographic order of `deg`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDocument {
    pub vars: usize,
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub deg: Vec<i32>,
    #[serde(with = "bigint_json")]
    pub coef: BigInt,
}

/// Coefficients travel as JSON integers when they fit in `i64`, as decimal
/// strings otherwise.
mod bigint_json {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Int(x) => Ok(BigInt::from(x)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl From<&LaurentPoly> for PolyDocument {
    fn from(p: &LaurentPoly) -> Self {
        PolyDocument {
            vars: p.vars,
            terms: p
                .terms
                .iter()
                .map(|(d, c)| TermDocument {
                    deg: d.clone(),
                    coef: c.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyDocument> for LaurentPoly {
    type Error = Error;

    fn try_from(doc: PolyDocument) -> Result<Self> {
        let mut p = LaurentPoly::zero(doc.vars);
        for t in doc.terms {
            if t.deg.len() != doc.vars {
                return Err(Error::Malformed(format!(
                    "term degree {:?} does not have {} entries",
                    t.deg, doc.vars
                )));
            }
            p.add_term(t.deg, t.coef);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyDocument::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PolyDocument::deserialize(d)?;
        LaurentPoly::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Rectangular grid of Laurent polynomials sharing one variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    vars: usize,
    data: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        vars: usize,
        mut f: impl FnMut(usize, usize) -> LaurentPoly,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let p = f(r, c);
                assert_eq!(p.vars, vars, "entry ({r}, {c}) has the wrong variable count");
                data.push(p);
            }
        }
        LaurentMatrix {
            rows,
            cols,
            vars,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.data[r * self.cols + c]
    }

    /// Evaluates every entry numerically.
    pub fn eval(&self, z: &[Complex<f64>]) -> Result<nalgebra::DMatrix<Complex<f64>>> {
        let mut out = nalgebra::DMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self.get(r, c).eval(z)?;
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Each row is first multiplied by a monomial so every entry is an
    /// ordinary polynomial; the monomial factor is restored at the end.
    pub fn det_bareiss(&self) -> Result<LaurentPoly> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let vars = self.vars;
        let mut total_shift = vec![0i32; vars];
        let mut a: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
        for r in 0..n {
            let row: Vec<LaurentPoly> = (0..n).map(|c| self.get(r, c).clone()).collect();
            let mut shift = vec![0i32; vars];
            let mut any = false;
            for p in &row {
                if let Some(md) = p.min_degree() {
                    if !any {
                        shift = md;
                        any = true;
                    } else {
                        for (s, e) in shift.iter_mut().zip(md) {
                            *s = (*s).min(e);
                        }
                    }
                }
            }
            if !any {
                return Ok(LaurentPoly::zero(vars));
            }
            for (t, s) in total_shift.iter_mut().zip(&shift) {
                *t += s;
            }
            let neg: Vec<i32> = shift.iter().map(|e| -e).collect();
            a.push(row.iter().map(|p| p.shifted(&neg)).collect());
        }

        let mut negate = false;
        let mut prev = LaurentPoly::one(vars);
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(LaurentPoly::zero(vars)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .expect("Bareiss step must divide exactly over an integral domain");
                }
            }
            prev = a[k][k].clone();
        }
        let det = if n == 0 {
            LaurentPoly::one(vars)
        } else {
            a[n - 1][n - 1].shifted(&total_shift)
        };
        Ok(if negate { -det } else { det })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> LaurentPoly {
        LaurentPoly::var(1, 0)
    }

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(1, v)
    }

    fn tinv() -> LaurentPoly {
        LaurentPoly::monomial(1, vec![-1], 1)
    }

    #[test]
    fn det_examples() {
        let m = LaurentMatrix::from_fn(2, 2, 1, |r, cc| if r == cc { t() } else { c(0) });
        assert_eq!(m.det_bareiss().unwrap(), LaurentPoly::monomial(1, vec![2], 1));

        let entries = [[t(), c(1)], [c(1), tinv()]];
        let m = LaurentMatrix::from_fn(2, 2, 1, |r, cc| entries[r][cc].clone());
        assert!(m.det_bareiss().unwrap().is_zero());

        // tA − A^T for the trefoil: [[1−t, t], [−1, 1−t]]
        let one_minus_t = &c(1) - &t();
        let entries = [[one_minus_t.clone(), t()], [c(-1), one_minus_t]];
        let m = LaurentMatrix::from_fn(2, 2, 1, |r, cc| entries[r][cc].clone());
        let d = m.det_bareiss().unwrap();
        assert_eq!(d.to_string(), "t^2 - t + 1");
    }

    #[test]
    fn det_of_empty_is_one() {
        let m = LaurentMatrix::from_fn(0, 0, 2, |_, _| unreachable!());
        assert_eq!(m.det_bareiss().unwrap(), LaurentPoly::one(2));
    }

    #[test]
    fn normalize_examples() {
        let p = LaurentPoly::monomial(2, vec![-1, 3], -1);
        assert_eq!(p.normalize(), LaurentPoly::one(2));

        let p = &LaurentPoly::monomial(1, vec![3], 1) - &LaurentPoly::monomial(1, vec![2], 1);
        assert_eq!(p.normalize().to_string(), "t - 1");

        let a = LaurentPoly::from_terms(1, [(vec![2], 1), (vec![1], 1), (vec![0], 1)]);
        let b = LaurentPoly::from_terms(1, [(vec![-2], 1), (vec![-1], 1), (vec![0], 1)]);
        assert_eq!(a.normalize(), b.normalize());
        assert_eq!(a.normalize().to_string(), "t^2 + t + 1");
        assert!(LaurentPoly::zero(3).normalize().is_zero());
    }

    #[test]
    fn eval_examples() {
        let p = LaurentPoly::from_terms(1, [(vec![2], 1), (vec![1], -1), (vec![0], 1)]);
        let v = p.eval(&[Complex::new(-1.0, 0.0)]).unwrap();
        assert!((v - Complex::new(3.0, 0.0)).norm() < 1e-15);

        let one = LaurentPoly::one(2);
        let v = one.eval(&[Complex::new(0.3, 0.2), Complex::new(-5.0, 1.0)]).unwrap();
        assert_eq!(v, Complex::new(1.0, 0.0));

        let q = LaurentPoly::monomial(2, vec![1, -1], 1);
        let v = q.eval(&[Complex::new(2.0, 0.0), Complex::new(4.0, 0.0)]).unwrap();
        assert!((v - Complex::new(0.5, 0.0)).norm() < 1e-15);

        assert!(matches!(
            q.eval(&[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]),
            Err(Error::ZeroCoordinate(1))
        ));
    }

    #[test]
    fn exact_division() {
        let a = LaurentPoly::from_terms(2, [(vec![1, 0], 1), (vec![0, -1], -2)]);
        let b = LaurentPoly::from_terms(2, [(vec![2, 1], 3), (vec![0, 0], 1), (vec![-1, 0], 1)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        let off = &prod + &LaurentPoly::one(2);
        assert!(off.div_exact(&a).is_none());
    }

    #[test]
    fn display_multivariate() {
        let p = LaurentPoly::from_terms(2, [(vec![2, 1], -3), (vec![0, -1], 1), (vec![0, 0], 2)]);
        assert_eq!(p.to_string(), "-3*t1^2*t2 + 2 + t2^-1");
    }

    #[test]
    fn serde_roundtrip() {
        let p = LaurentPoly::from_terms(2, [(vec![2, 1], -3), (vec![0, -1], 1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"vars":2,"terms":[{"deg":[0,-1],"coef":1},{"deg":[2,1],"coef":-3}]}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
