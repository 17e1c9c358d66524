//! Digit extraction for automorphisms fixing `L_n`, and the factorization
//! `σ = σ_s ∘ τ` of an arbitrary order-preserving automorphism.

use crate::diffop::{DiffOp, RecoveryOptions};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalars::{PadicInt, Prime};

use super::images::GeneratorImages;
use super::monomial::MonomialAut;
use super::sigma::{level_order, sigma_apply, SigmaShift};

/// Recovers `s` with `g = σ_s`, one p-adic digit per level.
///
/// At level `k` the residual automorphism fixes `d_i^[p^u]` for `u < k`, so
/// its image of `d_i^[p^k]` must be `d_i^[p^k] + c_i x_i^{-p^k}` with
/// `c_i ∈ F_p`; `c_i` is digit `k` of `s_i`, and composing with
/// `σ_{-p^k c}` clears it.
pub fn extract_digits(g: &GeneratorImages) -> Result<SigmaShift> {
    let (p, n, precision) = (g.prime(), g.nvars(), g.precision());
    for i in 0..n {
        if *g.x_image(i) != DiffOp::x_power(p, n, i, 1)
            || *g.xinv_image(i) != DiffOp::x_power(p, n, i, -1)
        {
            return Err(Error::NotInStabilizer(i + 1));
        }
    }
    let mut residual: Vec<Vec<DiffOp>> = g.d_images().to_vec();
    let mut digits = vec![vec![0u32; precision]; n];
    for k in 0..precision {
        let pk = level_order(p, k)?;
        let mut level_digits = Vec::with_capacity(n);
        for (i, levels) in residual.iter().enumerate() {
            let b = &levels[k] - &DiffOp::divided(p, n, i, pk);
            let c = sigma_form_coefficient(&b, i, pk).ok_or(Error::NotSigmaForm {
                variable: i + 1,
                level: k,
            })?;
            digits[i][k] = c;
            level_digits.push(PadicInt::from_int(-(c as i64), p, precision).shift_up(k));
        }
        let corrector = SigmaShift::new(level_digits)?;
        if corrector.is_zero() {
            continue;
        }
        for levels in residual.iter_mut() {
            for img in levels.iter_mut() {
                *img = sigma_apply(&corrector, img)?;
            }
        }
    }
    // every level must now be the identity
    for (i, levels) in residual.iter().enumerate() {
        for (k, img) in levels.iter().enumerate() {
            if *img != DiffOp::divided(p, n, i, level_order(p, k)?) {
                return Err(Error::NotSigmaForm {
                    variable: i + 1,
                    level: k,
                });
            }
        }
    }
    SigmaShift::from_digits(p, precision, &digits)
}

/// `c` when `b = c x_i^{-m}` (including `b = 0`).
fn sigma_form_coefficient(b: &DiffOp, i: usize, m: u64) -> Option<u32> {
    let f = b.as_laurent()?;
    if f.is_zero() {
        return Some(0);
    }
    let (c, e) = f.unit_decompose().ok()?;
    let n = f.nvars();
    let expected = crate::laurent::ExponentVector::unit(n, i, -(m as i64));
    (e == expected).then_some(c.value())
}

/// An order-preserving automorphism `σ_shift ∘ tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredAut {
    pub shift: SigmaShift,
    pub tau: MonomialAut,
}

impl FactoredAut {
    pub fn new(shift: SigmaShift, tau: MonomialAut) -> Result<Self> {
        if shift.prime() != tau.prime() || shift.nvars() != tau.nvars() {
            return Err(Error::mismatch(
                "shift and monomial part over different rings",
            ));
        }
        Ok(FactoredAut { shift, tau })
    }

    pub fn identity(p: Prime, n: usize, precision: usize) -> Self {
        FactoredAut {
            shift: SigmaShift::zero(p, n, precision),
            tau: MonomialAut::identity(p, n),
        }
    }

    /// `(s, τ)(s', τ') = (s + A s', τ τ')`, using `τ σ_{s'} τ^{-1} = σ_{A s'}`.
    pub fn compose(&self, other: &FactoredAut) -> Result<FactoredAut> {
        let shift = self.shift.add(&other.shift.transform(self.tau.matrix())?)?;
        let tau = self.tau.compose(&other.tau)?;
        Ok(FactoredAut { shift, tau })
    }

    /// `(s, τ)^{-1} = (-A^{-1} s, τ^{-1})`.
    pub fn invert(&self) -> Result<FactoredAut> {
        let tau = self.tau.inverse();
        let shift = self.shift.transform(tau.matrix())?.neg();
        Ok(FactoredAut { shift, tau })
    }

    /// Generator images of `σ_s ∘ τ`.
    pub fn to_images(&self, opts: RecoveryOptions) -> Result<GeneratorImages> {
        let lifted = self.tau.lift(self.shift.precision(), opts)?;
        apply_sigma_after(&self.shift, &lifted)
    }
}

/// Images of `σ_s ∘ g`.
pub fn apply_sigma_after(s: &SigmaShift, g: &GeneratorImages) -> Result<GeneratorImages> {
    if s.precision() != g.precision() {
        return Err(Error::mismatch("shift and images differ in precision"));
    }
    let map = |op: &DiffOp| sigma_apply(s, op);
    GeneratorImages::new(
        g.prime(),
        g.nvars(),
        g.precision(),
        g.x_images().iter().map(map).collect::<Result<_>>()?,
        g.xinv_images().iter().map(map).collect::<Result<_>>()?,
        g.d_images()
            .iter()
            .map(|levels| levels.iter().map(map).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?,
    )
}

/// Reads the monomial automorphism `τ = g|_{L_n}` from the images of `x_i`.
pub fn restriction_to_laurent(g: &GeneratorImages) -> Result<MonomialAut> {
    let n = g.nvars();
    let mut columns = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(n);
    for i in 0..n {
        let f = g
            .x_image(i)
            .as_laurent()
            .ok_or_else(|| Error::NotAUnit(g.x_image(i).to_string()))?;
        let (c, e) = f.unit_decompose()?;
        let inv = LaurentPoly::monomial(c.inv().expect("unit coefficient"), e.scaled(-1));
        if g.xinv_image(i).as_laurent().as_ref() != Some(&inv) {
            return Err(Error::NotAUnit(format!(
                "image of x{}^-1 is not the inverse of x{}",
                i + 1,
                i + 1
            )));
        }
        columns.push(e.into_vec());
        lambda.push(c);
    }
    let matrix = (0..n)
        .map(|r| (0..n).map(|c| columns[c][r]).collect())
        .collect();
    MonomialAut::new(matrix, lambda)
}

/// The unique `(s, τ)` with `g = σ_s ∘ τ`.
pub fn factorize(g: &GeneratorImages, opts: RecoveryOptions) -> Result<FactoredAut> {
    let tau = restriction_to_laurent(g)?;
    let tau_inv_images = tau.inverse().lift(g.precision(), opts)?;
    let stabilizing = g.compose(&tau_inv_images)?;
    let shift = extract_digits(&stabilizing)?;
    FactoredAut::new(shift, tau)
}
