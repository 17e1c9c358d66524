//! Truncated p-adic integers `Z_p / p^K Z_p`, stored as base-p digits,
//! least significant first.

use std::fmt;

use super::Prime;
use crate::error::{Error, Result};

/// Default number of trusted p-adic digits.
pub const DEFAULT_PRECISION: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    digits: Vec<u32>,
    p: Prime,
}

impl PadicInt {
    pub fn zero(p: Prime, precision: usize) -> Self {
        assert!(precision >= 1, "p-adic precision must be at least 1");
        PadicInt {
            digits: vec![0; precision],
            p,
        }
    }

    pub fn from_digits(digits: Vec<u32>, p: Prime) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Invalid(
                "p-adic integer needs at least one digit".into(),
            ));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= p.get()) {
            return Err(Error::Invalid(format!(
                "digit {d} out of range for p = {p}"
            )));
        }
        Ok(PadicInt { digits, p })
    }

    /// Residue of `m` modulo `p^precision`; negative `m` gets the complement
    /// expansion (`-1` is all digits `p - 1`).
    pub fn from_int(m: i64, p: Prime, precision: usize) -> Self {
        assert!(precision >= 1, "p-adic precision must be at least 1");
        let q = p.get() as i128;
        let mut v = m as i128;
        let mut digits = Vec::with_capacity(precision);
        for _ in 0..precision {
            let d = v.rem_euclid(q);
            digits.push(d as u32);
            v = (v - d) / q;
        }
        PadicInt { digits, p }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, k: usize) -> u32 {
        self.digits[k]
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    fn check_compatible(&self, other: &PadicInt) -> Result<()> {
        if self.p != other.p {
            return Err(Error::mismatch(format!(
                "p-adic primes {} and {}",
                self.p, other.p
            )));
        }
        if self.precision() != other.precision() {
            return Err(Error::mismatch(format!(
                "p-adic precisions {} and {}",
                self.precision(),
                other.precision()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_compatible(other)?;
        let q = self.p.get();
        let mut carry = 0u32;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| {
                let s = a + b + carry;
                carry = (s >= q) as u32;
                s - carry * q
            })
            .collect();
        Ok(PadicInt { digits, p: self.p })
    }

    pub fn neg(&self) -> PadicInt {
        // -s = (complement of s) + 1
        let q = self.p.get();
        let mut carry = 1u32;
        let digits = self
            .digits
            .iter()
            .map(|&d| {
                let s = (q - 1 - d) + carry;
                carry = (s >= q) as u32;
                s - carry * q
            })
            .collect();
        PadicInt { digits, p: self.p }
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.add(&other.neg())
    }

    /// Product with an ordinary integer.
    pub fn mul_int(&self, m: i64) -> PadicInt {
        let q = self.p.get() as i128;
        let factor = m.unsigned_abs() as i128;
        let mut carry = 0i128;
        let digits = self
            .digits
            .iter()
            .map(|&d| {
                let v = d as i128 * factor + carry;
                carry = v / q;
                (v % q) as u32
            })
            .collect();
        let out = PadicInt { digits, p: self.p };
        if m < 0 {
            out.neg()
        } else {
            out
        }
    }

    /// `p^shift * self`, truncated.
    pub fn shift_up(&self, shift: usize) -> PadicInt {
        let k = self.precision();
        let mut digits = vec![0; k];
        if shift < k {
            digits[shift..].copy_from_slice(&self.digits[..k - shift]);
        }
        PadicInt { digits, p: self.p }
    }

    /// The integer representative in `[0, p^K)`, if it fits in `u128`.
    pub fn to_u128(&self) -> Option<u128> {
        let q = self.p.get() as u128;
        self.digits
            .iter()
            .rev()
            .try_fold(0u128, |acc, &d| acc.checked_mul(q)?.checked_add(d as u128))
    }
}

impl fmt::Display for PadicInt {
    /// `d0 + d1*p + d2*p^2 + ...`, zero digits omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &d) in self.digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{d}")?,
                1 => write!(f, "{d}*{}", self.p)?,
                _ => write!(f, "{d}*{}^{k}", self.p)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
