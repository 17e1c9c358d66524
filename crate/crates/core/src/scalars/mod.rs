//! Prime-field scalars and binomial coefficients modulo a prime.
//!
//! Binomials with integer or p-adic upper argument are all reduced to
//! Lucas' theorem over base-p digits, so `C(m, k) mod p` for negative `m`
//! shares one code path with the p-adic case.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use crate::error::{Error, Result};
mod padic;

pub use padic::{PadicInt, DEFAULT_PRECISION};

/// Largest admissible prime (exclusive bound).
pub const PRIME_BOUND: u64 = 1 << 16;

/// A prime `2 <= p < 2^16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..PRIME_BOUND).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Number of base-p digits of `k` (zero for `k = 0`).
    pub fn digit_len(self, mut k: u64) -> usize {
        let p = self.0 as u64;
        let mut len = 0;
        while k > 0 {
            k /= p;
            len += 1;
        }
        len
    }

    /// `p^e` as `u64`, or `None` on overflow.
    pub fn checked_pow(self, e: usize) -> Option<u64> {
        (self.0 as u64).checked_pow(e as u32)
    }

    #[inline]
    pub(crate) fn reduce_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub(crate) fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub(crate) fn pow(self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub(crate) fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 as u64 - 2)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    pub fn new(value: i64, p: Prime) -> Self {
        Fp {
            value: p.reduce_i64(value),
            p,
        }
    }

    pub(crate) fn from_raw(value: u32, p: Prime) -> Self {
        debug_assert!(value < p.get());
        Fp { value, p }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { value: 0, p }
    }

    pub fn one(p: Prime) -> Self {
        Fp {
            value: 1 % p.get(),
            p,
        }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, e: u64) -> Self {
        Fp {
            value: self.p.pow(self.value, e),
            p: self.p,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| Fp {
            value: self.p.inv(self.value),
            p: self.p,
        })
    }

    /// `self^e` for a signed exponent; `None` when `self = 0` and `e < 0`.
    pub fn powi(self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "F_p elements over different primes");
        Fp {
            value: self.p.add(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.p.neg(self.value),
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p, "F_p elements over different primes");
        Fp {
            value: self.p.mul(self.value, rhs.value),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

struct FactorialTable {
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
}

thread_local! {
    static FACTORIALS: RefCell<HashMap<u32, Rc<FactorialTable>>> = RefCell::new(HashMap::new());
}

fn factorials(p: Prime) -> Rc<FactorialTable> {
    FACTORIALS.with(|cache| {
        cache
            .borrow_mut()
            .entry(p.get())
            .or_insert_with(|| {
                let n = p.get() as usize;
                let mut fact = vec![1u32; n];
                for i in 1..n {
                    fact[i] = p.mul(fact[i - 1], i as u32);
                }
                let mut inv_fact = vec![1u32; n];
                inv_fact[n - 1] = p.inv(fact[n - 1]);
                for i in (1..n).rev() {
                    inv_fact[i - 1] = p.mul(inv_fact[i], i as u32);
                }
                Rc::new(FactorialTable { fact, inv_fact })
            })
            .clone()
    })
}

/// `C(a, b) mod p` for single digits `a, b < p`.
fn digit_binom(table: &FactorialTable, p: Prime, a: u32, b: u32) -> u32 {
    if b > a {
        return 0;
    }
    let (a, b) = (a as usize, b as usize);
    p.mul(
        p.mul(table.fact[a], table.inv_fact[b]),
        table.inv_fact[a - b],
    )
}

/// Lucas' theorem on two digit streams; `upper` yields digits of the upper
/// argument and is consulted only while `k` still has digits left.
fn lucas(p: Prime, mut upper: impl FnMut(usize) -> u32, mut k: u64) -> u32 {
    let table = factorials(p);
    let q = p.get() as u64;
    let mut acc = 1 % p.get();
    let mut idx = 0;
    while k > 0 {
        let kd = (k % q) as u32;
        if kd != 0 {
            let c = digit_binom(&table, p, upper(idx), kd);
            if c == 0 {
                return 0;
            }
            acc = p.mul(acc, c);
        }
        k /= q;
        idx += 1;
    }
    acc
}

/// `(j)! mod p` for a digit `j < p`.
pub(crate) fn digit_factorial(p: Prime, j: u32) -> u32 {
    factorials(p).fact[j as usize]
}

/// `C(m, k) mod p` for naturals, via Lucas' theorem.
pub fn binom_nat_mod_p(m: u64, k: u64, p: Prime) -> Fp {
    if k > m {
        return Fp::zero(p);
    }
    let q = p.get() as u64;
    let raw = lucas(p, |i| ((m / q.pow(i as u32)) % q) as u32, k);
    Fp::from_raw(raw, p)
}

/// `C(m, k) mod p` for an arbitrary integer `m`, through the p-adic
/// expansion of `m` truncated to the digit length of `k`.
pub fn binom_int_mod_p(m: i64, k: u64, p: Prime) -> Fp {
    Fp::from_raw(binom_int_raw(m, k, p), p)
}

pub(crate) fn binom_int_raw(m: i64, k: u64, p: Prime) -> u32 {
    if k == 0 {
        return 1 % p.get();
    }
    let len = p.digit_len(k);
    let q = p.get() as u128;
    let modulus = q.pow(len as u32);
    let r = (m as i128).rem_euclid(modulus as i128) as u128;
    lucas(p, |i| ((r / q.pow(i as u32)) % q) as u32, k)
}

/// `C(s, k) mod p` for a truncated p-adic integer `s`.
pub fn binom_padic(s: &PadicInt, k: u64) -> Result<Fp> {
    let p = s.prime();
    let needed = p.digit_len(k);
    if needed > s.precision() {
        return Err(Error::InsufficientPrecision {
            needed,
            available: s.precision(),
        });
    }
    let digits = s.digits();
    Ok(Fp::from_raw(lucas(p, |i| digits[i], k), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(Prime::new(1), Err(Error::InvalidPrime(1)));
        assert_eq!(Prime::new(9), Err(Error::InvalidPrime(9)));
        assert_eq!(Prime::new(65537), Err(Error::InvalidPrime(65537)));
        assert!(Prime::new(65521).is_ok());
    }

    #[test]
    fn nat_binomial_examples() {
        assert_eq!(binom_nat_mod_p(4, 2, p(3)).value(), 0);
        assert_eq!(binom_nat_mod_p(7, 0, p(5)).value(), 1);
        assert_eq!(binom_nat_mod_p(7, 5, p(3)).value(), 0);
        assert_eq!(binom_nat_mod_p(2, 3, p(7)).value(), 0);
    }

    #[test]
    fn int_binomial_examples() {
        assert_eq!(binom_int_mod_p(-1, 2, p(3)).value(), 1);
        assert_eq!(binom_int_mod_p(-2, 1, p(5)).value(), 3);
        assert_eq!(binom_int_mod_p(-3, 2, p(2)).value(), 0);
        // C(-1, k) = (-1)^k
        for k in 0..20 {
            let expect = if k % 2 == 0 { 1 } else { 6 };
            assert_eq!(binom_int_mod_p(-1, k, p(7)).value(), expect);
        }
    }

    #[test]
    fn padic_binomial_examples() {
        let s = PadicInt::from_digits(vec![1, 1], p(2)).unwrap();
        assert_eq!(binom_padic(&s, 2).unwrap().value(), 1);
        assert_eq!(binom_padic(&s, 0).unwrap().value(), 1);
        let t = PadicInt::from_digits(vec![4, 2, 3], p(5)).unwrap();
        assert_eq!(binom_padic(&t, 1).unwrap().value(), 4);
        assert_eq!(
            binom_padic(&s, 4),
            Err(Error::InsufficientPrecision {
                needed: 3,
                available: 2
            })
        );
    }

    #[test]
    fn inverse_and_powers() {
        let q = p(7);
        for v in 1..7 {
            let a = Fp::new(v, q);
            assert_eq!(a * a.inv().unwrap(), Fp::one(q));
            assert_eq!(a.powi(-2).unwrap() * a.pow(2), Fp::one(q));
        }
        assert!(Fp::zero(q).inv().is_none());
    }
}
