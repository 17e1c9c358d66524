//! The automorphisms `σ_s`, `s ∈ Z_p^n`, fixing `L_n` pointwise.
//!
//! `σ_s(d_i^[k]) = x_i^{-k} C(x_i d_i + s_i, k)`, whose normal form is the
//! Vandermonde expansion `Σ_{j=0}^{k} C(s_i, k-j) x_i^{j-k} d_i^[j]`.

use std::collections::HashMap;

use crate::diffop::{DiffOp, DividedIndex, OpBuilder};
use crate::error::{Error, Result};
use crate::laurent::ExponentVector;
use crate::scalars::{binom_padic, PadicInt, Prime};

use super::images::GeneratorImages;

/// Largest divided-power order a level image may have.
pub const MAX_LEVEL_ORDER: u64 = 1 << 20;

/// The parameter `s ∈ Z_p^n` of `σ_s`, truncated at a common precision.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SigmaShift {
    components: Vec<PadicInt>,
}

impl SigmaShift {
    pub fn new(components: Vec<PadicInt>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Invalid("a shift needs at least one component".into()))?;
        for c in &components[1..] {
            if c.prime() != first.prime() || c.precision() != first.precision() {
                return Err(Error::mismatch(
                    "shift components differ in prime or precision",
                ));
            }
        }
        Ok(SigmaShift { components })
    }

    pub fn zero(p: Prime, n: usize, precision: usize) -> Self {
        SigmaShift {
            components: vec![PadicInt::zero(p, precision); n],
        }
    }

    /// One digit list (least significant first) per variable, zero-padded to
    /// `precision`.
    pub fn from_digits(p: Prime, precision: usize, digits: &[Vec<u32>]) -> Result<Self> {
        let mut components = Vec::with_capacity(digits.len());
        for d in digits {
            if d.len() > precision {
                return Err(Error::InsufficientPrecision {
                    needed: d.len(),
                    available: precision,
                });
            }
            let mut padded = d.clone();
            padded.resize(precision, 0);
            components.push(PadicInt::from_digits(padded, p)?);
        }
        Self::new(components)
    }

    pub fn from_ints(p: Prime, precision: usize, values: &[i64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&v| PadicInt::from_int(v, p, precision))
                .collect(),
        )
    }

    pub fn components(&self) -> &[PadicInt] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &PadicInt {
        &self.components[i]
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn prime(&self) -> Prime {
        self.components[0].prime()
    }

    pub fn precision(&self) -> usize {
        self.components[0].precision()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(PadicInt::is_zero)
    }

    pub fn add(&self, other: &SigmaShift) -> Result<SigmaShift> {
        if self.nvars() != other.nvars() {
            return Err(Error::mismatch(
                "shifts over different numbers of variables",
            ));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(SigmaShift { components })
    }

    pub fn neg(&self) -> SigmaShift {
        SigmaShift {
            components: self.components.iter().map(PadicInt::neg).collect(),
        }
    }

    /// `M s` for an integer matrix `M` (row-major), over `Z_p / p^K`.
    pub fn transform(&self, matrix: &[Vec<i64>]) -> Result<SigmaShift> {
        let n = self.nvars();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::mismatch("matrix size does not match the shift"));
        }
        let zero = PadicInt::zero(self.prime(), self.precision());
        let components = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.components)
                    .try_fold(zero.clone(), |acc, (&a, s)| acc.add(&s.mul_int(a)))
            })
            .collect::<Result<_>>()?;
        Ok(SigmaShift { components })
    }
}

/// `σ_s(d_i^[k])` in normal form.
pub fn sigma_image_divided(s: &SigmaShift, i: usize, k: u64) -> Result<DiffOp> {
    let p = s.prime();
    let n = s.nvars();
    let needed = p.digit_len(k);
    if needed > s.precision() {
        return Err(Error::InsufficientPrecision {
            needed,
            available: s.precision(),
        });
    }
    let si = s.component(i);
    let mut out = OpBuilder::new(p, n);
    for m in 0..=k {
        let c = binom_padic(si, m)?;
        if c.is_zero() {
            continue;
        }
        let j = k - m;
        out.add(
            DividedIndex::unit(n, i, j),
            ExponentVector::unit(n, i, -(m as i64)),
            c.value(),
        );
    }
    Ok(out.finish())
}

/// Single-variable image as `(coefficient, x_i exponent, d_i order)` triples.
fn univariate_terms(op: &DiffOp, i: usize) -> Vec<(u32, i64, u64)> {
    op.terms()
        .map(|(c, g, b)| (c.value(), g[i], b[i]))
        .collect()
}

/// Applies `σ_s` termwise: `x^γ d^[β] -> x^γ Π_i σ_s(d_i^[β_i])`.
pub fn sigma_apply(s: &SigmaShift, op: &DiffOp) -> Result<DiffOp> {
    let p = s.prime();
    let n = s.nvars();
    if op.prime() != p || op.nvars() != n {
        return Err(Error::mismatch(
            "shift and operator live over different rings",
        ));
    }
    // (variable, order) -> terms (coefficient, x exponent, d order) of the univariate image
    type Univariate = Vec<(u32, i64, u64)>;
    let mut cache: HashMap<(usize, u64), Univariate> = HashMap::new();
    let mut out = OpBuilder::new(p, n);
    for (beta, coeff) in op.parts() {
        for i in 0..n {
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry((i, beta[i])) {
                e.insert(univariate_terms(&sigma_image_divided(s, i, beta[i])?, i));
            }
        }
        let factors: Vec<_> = (0..n).map(|i| &cache[&(i, beta[i])]).collect();
        // The factors live in distinct variables and commute, so their
        // product is the tensor product of the term lists.
        let mut combined: Vec<(u32, Vec<i64>, Vec<u64>)> =
            vec![(1 % p.get(), vec![0; n], vec![0; n])];
        for (i, terms) in factors.iter().enumerate() {
            let mut next = Vec::with_capacity(combined.len() * terms.len());
            for (c, g, b) in &combined {
                for &(ci, gi, bi) in terms.iter() {
                    let mut g2 = g.clone();
                    let mut b2 = b.clone();
                    g2[i] = gi;
                    b2[i] = bi;
                    next.push((p.mul(*c, ci), g2, b2));
                }
            }
            combined = next;
        }
        for (gamma, cf) in coeff.terms() {
            for (c, g, b) in &combined {
                out.add(
                    DividedIndex::new(b.clone()),
                    gamma.plus(g),
                    p.mul(cf.value(), *c),
                );
            }
        }
    }
    Ok(out.finish())
}

/// Generator images of `σ_s` at the precision of `s`.
pub fn build_sigma(s: &SigmaShift) -> Result<GeneratorImages> {
    let p = s.prime();
    let n = s.nvars();
    let precision = s.precision();
    let top = level_order(p, precision - 1)?;
    debug_assert!(top <= MAX_LEVEL_ORDER);
    let mut d_images = Vec::with_capacity(n);
    for i in 0..n {
        let mut levels = Vec::with_capacity(precision);
        for k in 0..precision {
            levels.push(sigma_image_divided(s, i, level_order(p, k)?)?);
        }
        d_images.push(levels);
    }
    GeneratorImages::new(
        p,
        n,
        precision,
        (0..n).map(|i| DiffOp::x_power(p, n, i, 1)).collect(),
        (0..n).map(|i| DiffOp::x_power(p, n, i, -1)).collect(),
        d_images,
    )
}

/// `p^k`, refusing orders above [`MAX_LEVEL_ORDER`].
pub fn level_order(p: Prime, k: usize) -> Result<u64> {
    match p.checked_pow(k) {
        Some(v) if v <= MAX_LEVEL_ORDER => Ok(v),
        _ => Err(Error::Invalid(format!(
            "level {k} for p = {p} exceeds the supported divided-power order {MAX_LEVEL_ORDER}"
        ))),
    }
}
