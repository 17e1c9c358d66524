//! Sparse Laurent polynomials `F_p[x_1^{±1}, ..., x_n^{±1}]`.
//!
//! Variables are indexed from 0 in the API and printed from 1 (`x1`, `x2`, ...).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalars::{binom_int_raw, Fp, Prime};

/// Exponent vector of a Laurent monomial. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    /// `e * e_i`.
    pub fn unit(n: usize, i: usize, e: i64) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn plus(&self, other: &[i64]) -> ExponentVector {
        ExponentVector(self.0.iter().zip(other).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &[i64]) -> ExponentVector {
        ExponentVector(self.0.iter().zip(other).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, factor: i64) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| a * factor).collect())
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    p: Prime,
    n: usize,
    terms: BTreeMap<ExponentVector, u32>,
}

pub(crate) fn accumulate(
    terms: &mut BTreeMap<ExponentVector, u32>,
    p: Prime,
    key: ExponentVector,
    c: u32,
) {
    if c == 0 {
        return;
    }
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = p.add(*o.get(), c);
            if s == 0 {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl LaurentPoly {
    pub fn zero(p: Prime, n: usize) -> Self {
        LaurentPoly {
            p,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: Prime, n: usize) -> Self {
        Self::constant(Fp::one(p), n)
    }

    pub fn constant(c: Fp, n: usize) -> Self {
        Self::monomial(c, ExponentVector::zeros(n))
    }

    pub fn monomial(c: Fp, exponents: ExponentVector) -> Self {
        let n = exponents.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c.value());
        }
        LaurentPoly {
            p: c.prime(),
            n,
            terms,
        }
    }

    /// `x_i^e`.
    pub fn variable_power(p: Prime, n: usize, i: usize, e: i64) -> Self {
        Self::monomial(Fp::one(p), ExponentVector::unit(n, i, e))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, reducing
    /// coefficients mod p and merging repeats.
    pub fn from_terms<I>(p: Prime, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, i64)>,
    {
        let mut out = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != n {
                return Err(Error::mismatch(format!(
                    "exponent vector of length {} in a ring with {n} variables",
                    exps.len()
                )));
            }
            accumulate(&mut out, p, ExponentVector(exps), p.reduce_i64(c));
        }
        Ok(LaurentPoly { p, n, terms: out })
    }

    pub(crate) fn from_map(p: Prime, n: usize, terms: BTreeMap<ExponentVector, u32>) -> Self {
        debug_assert!(terms.values().all(|&c| c != 0 && c < p.get()));
        LaurentPoly { p, n, terms }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&ExponentVector::zeros(self.n)) == Some(&1)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (lexicographic) exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, Fp)> + '_ {
        self.terms
            .iter()
            .map(move |(e, &c)| (e, Fp::from_raw(c, self.p)))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<ExponentVector, u32> {
        &self.terms
    }

    pub fn coeff(&self, exponents: &ExponentVector) -> Fp {
        Fp::from_raw(self.terms.get(exponents).copied().unwrap_or(0), self.p)
    }

    /// True when every exponent is nonnegative, i.e. `self` lies in `F_p[x]`.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(ExponentVector::is_nonnegative)
    }

    fn check_compatible(&self, other: &LaurentPoly) -> Result<()> {
        if self.p != other.p {
            return Err(Error::mismatch(format!(
                "primes {} and {}",
                self.p, other.p
            )));
        }
        if self.n != other.n {
            return Err(Error::mismatch(format!(
                "{} and {} variables",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            accumulate(&mut terms, self.p, e.clone(), c);
        }
        Ok(LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        })
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(other)?;
        let mut terms = BTreeMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                accumulate(&mut terms, self.p, a.plus(&b.0), self.p.mul(ca, cb));
            }
        }
        Ok(LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        })
    }

    pub fn scale(&self, c: Fp) -> LaurentPoly {
        assert_eq!(c.prime(), self.p, "scalar over a different prime");
        self.scale_raw(c.value())
    }

    pub(crate) fn scale_raw(&self, c: u32) -> LaurentPoly {
        if c == 0 {
            return LaurentPoly::zero(self.p, self.n);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, &v)| (e.clone(), self.p.mul(v, c)))
            .collect();
        LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        }
    }

    /// `c * x^shift * self`.
    pub(crate) fn mul_monomial_raw(&self, c: u32, shift: &[i64]) -> LaurentPoly {
        if c == 0 {
            return LaurentPoly::zero(self.p, self.n);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, &v)| (e.plus(shift), self.p.mul(v, c)))
            .collect();
        LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        }
    }

    pub fn pow(&self, e: u64) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.p, self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The p-th power map. Over F_p this only rescales exponents by p.
    pub fn frobenius(&self) -> LaurentPoly {
        let p = self.p.get() as i64;
        let terms = self.terms.iter().map(|(e, &c)| (e.scaled(p), c)).collect();
        LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        }
    }

    /// Action of the divided power `d_i^[k]`: `x^b -> C(b_i, k) x^(b - k e_i)`.
    pub fn divided_partial(&self, i: usize, k: u64) -> LaurentPoly {
        assert!(i < self.n, "variable index {i} out of range");
        if k == 0 {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            let b = binom_int_raw(e[i], k, self.p);
            if b == 0 {
                continue;
            }
            let mut out = e.clone();
            out.0[i] -= k as i64;
            accumulate(&mut terms, self.p, out, self.p.mul(b, c));
        }
        LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        }
    }

    /// Splits a unit `c * x^g` into `(c, g)`.
    pub fn unit_decompose(&self) -> Result<(Fp, ExponentVector)> {
        if self.terms.len() != 1 {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (e, &c) = self.terms.iter().next().unwrap();
        Ok((Fp::from_raw(c, self.p), e.clone()))
    }

    /// Applies `x^g -> scale(g) * x^(remap(g))` termwise.
    pub(crate) fn map_monomials(
        &self,
        mut f: impl FnMut(&ExponentVector) -> (u32, ExponentVector),
    ) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        for (e, &c) in &self.terms {
            let (s, g) = f(e);
            accumulate(&mut terms, self.p, g, self.p.mul(s, c));
        }
        LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs)
            .expect("Laurent polynomials over different rings")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, &c)| (e.clone(), self.p.neg(c)))
            .collect();
        LaurentPoly {
            p: self.p,
            n: self.n,
            terms,
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs)
            .expect("Laurent polynomials over different rings")
    }
}

/// Writes `x1^a*x2^b` (1-based names); returns false for the empty monomial.
pub(crate) fn write_monomial(
    f: &mut fmt::Formatter<'_>,
    e: &[i64],
) -> std::result::Result<bool, fmt::Error> {
    let mut wrote = false;
    for (i, &a) in e.iter().enumerate() {
        if a == 0 {
            continue;
        }
        if wrote {
            f.write_str("*")?;
        }
        wrote = true;
        if a == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, a)?;
        }
    }
    Ok(wrote)
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending exponent order, e.g. `x1^2 + 2*x1^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, &c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            let constant = e.0.iter().all(|&a| a == 0);
            if c != 1 || constant {
                write!(f, "{c}")?;
                if !constant {
                    f.write_str("*")?;
                }
            }
            write_monomial(f, &e.0)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn poly(q: u64, n: usize, terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(p(q), n, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn ring_examples() {
        let a = poly(3, 1, &[(&[1], 1), (&[-1], 1)]);
        let b = poly(3, 1, &[(&[1], 1), (&[-1], -1)]);
        assert_eq!(&a * &b, poly(3, 1, &[(&[2], 1), (&[-2], 2)]));

        let c = poly(2, 1, &[(&[1], 1), (&[0], 1)]);
        assert_eq!(c.pow(2), poly(2, 1, &[(&[2], 1), (&[0], 1)]));

        let zero = LaurentPoly::zero(p(2), 1);
        assert!((&zero * &c).is_zero());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = LaurentPoly::one(p(3), 1);
        let b = LaurentPoly::one(p(3), 2);
        let c = LaurentPoly::one(p(5), 1);
        assert!(matches!(a.checked_add(&b), Err(Error::Mismatch(_))));
        assert!(matches!(a.checked_mul(&c), Err(Error::Mismatch(_))));
    }

    #[test]
    fn frobenius_examples() {
        let f = poly(2, 2, &[(&[1, 0], 1), (&[0, -1], 1)]);
        assert_eq!(f.frobenius(), poly(2, 2, &[(&[2, 0], 1), (&[0, -2], 1)]));
        let c = poly(5, 1, &[(&[0], 3)]);
        assert_eq!(c.frobenius(), c);
        let g = poly(3, 1, &[(&[1], 2)]);
        assert_eq!(g.frobenius(), poly(3, 1, &[(&[3], 2)]));
        assert_eq!(g.frobenius(), g.pow(3));
    }

    #[test]
    fn divided_partial_examples() {
        let inv = poly(3, 1, &[(&[-1], 1)]);
        assert_eq!(inv.divided_partial(0, 2), poly(3, 1, &[(&[-3], 1)]));
        let x5 = poly(3, 1, &[(&[5], 1)]);
        assert_eq!(x5.divided_partial(0, 1), poly(3, 1, &[(&[4], 2)]));
        let x2 = poly(7, 1, &[(&[2], 1)]);
        assert!(x2.divided_partial(0, 3).is_zero());
        assert_eq!(x5.divided_partial(0, 0), x5);
    }

    #[test]
    fn unit_decompose_examples() {
        let u = poly(5, 2, &[(&[1, -3], 2)]);
        let (c, g) = u.unit_decompose().unwrap();
        assert_eq!((c.value(), g.as_slice()), (2, &[1, -3][..]));
        let not_unit = poly(5, 1, &[(&[1], 1), (&[0], 1)]);
        assert!(matches!(not_unit.unit_decompose(), Err(Error::NotAUnit(_))));
        assert!(matches!(
            LaurentPoly::zero(p(5), 1).unit_decompose(),
            Err(Error::NotAUnit(_))
        ));
        let (c, g) = LaurentPoly::one(p(5), 3).unit_decompose().unwrap();
        assert_eq!((c.value(), g.as_slice()), (1, &[0, 0, 0][..]));
    }

    #[test]
    fn display_is_descending() {
        let f = poly(3, 2, &[(&[2, 0], 1), (&[-2, 1], 2), (&[0, 0], 1)]);
        assert_eq!(f.to_string(), "x1^2 + 1 + 2*x1^-2*x2");
    }
}
