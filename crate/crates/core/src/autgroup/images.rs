//! Automorphisms of `D(L_n)` presented by generator images: the images of
//! `x_i`, `x_i^{-1}` and of `d_i^[p^k]` for `k < K`. Every other divided
//! power is reached through its base-p digits.

use std::collections::HashMap;

use crate::diffop::{divided_image_from_levels, DiffOp};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::scalars::{Fp, Prime};

use super::sigma::level_order;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorImages {
    p: Prime,
    n: usize,
    precision: usize,
    x_images: Vec<DiffOp>,
    xinv_images: Vec<DiffOp>,
    /// `d_images[i][k]` is the image of `d_i^[p^k]`.
    d_images: Vec<Vec<DiffOp>>,
}

impl GeneratorImages {
    pub fn new(
        p: Prime,
        n: usize,
        precision: usize,
        x_images: Vec<DiffOp>,
        xinv_images: Vec<DiffOp>,
        d_images: Vec<Vec<DiffOp>>,
    ) -> Result<Self> {
        if n == 0 || precision == 0 {
            return Err(Error::Invalid(
                "need at least one variable and one level".into(),
            ));
        }
        if x_images.len() != n || xinv_images.len() != n || d_images.len() != n {
            return Err(Error::mismatch(format!(
                "expected {n} images per generator family"
            )));
        }
        if d_images.iter().any(|levels| levels.len() != precision) {
            return Err(Error::mismatch(format!(
                "expected {precision} levels per variable"
            )));
        }
        let all = x_images
            .iter()
            .chain(&xinv_images)
            .chain(d_images.iter().flatten());
        if all.into_iter().any(|op| op.prime() != p || op.nvars() != n) {
            return Err(Error::mismatch("image lives over a different ring"));
        }
        level_order(p, precision - 1)?;
        Ok(GeneratorImages {
            p,
            n,
            precision,
            x_images,
            xinv_images,
            d_images,
        })
    }

    pub fn identity(p: Prime, n: usize, precision: usize) -> Result<Self> {
        let mut d_images = Vec::with_capacity(n);
        for i in 0..n {
            let levels = (0..precision)
                .map(|k| Ok(DiffOp::divided(p, n, i, level_order(p, k)?)))
                .collect::<Result<_>>()?;
            d_images.push(levels);
        }
        Self::new(
            p,
            n,
            precision,
            (0..n).map(|i| DiffOp::x_power(p, n, i, 1)).collect(),
            (0..n).map(|i| DiffOp::x_power(p, n, i, -1)).collect(),
            d_images,
        )
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn x_image(&self, i: usize) -> &DiffOp {
        &self.x_images[i]
    }

    pub fn xinv_image(&self, i: usize) -> &DiffOp {
        &self.xinv_images[i]
    }

    pub fn d_image(&self, i: usize, k: usize) -> &DiffOp {
        &self.d_images[i][k]
    }

    pub fn levels(&self, i: usize) -> &[DiffOp] {
        &self.d_images[i]
    }

    pub fn x_images(&self) -> &[DiffOp] {
        &self.x_images
    }

    pub fn xinv_images(&self) -> &[DiffOp] {
        &self.xinv_images
    }

    pub fn d_images(&self) -> &[Vec<DiffOp>] {
        &self.d_images
    }

    /// Image of `d_i^[j]`.
    pub fn divided_image(&self, i: usize, j: u64) -> Result<DiffOp> {
        divided_image_from_levels(self.p, self.n, &self.d_images[i], j)
    }

    /// Applies the automorphism to an arbitrary operator.
    pub fn apply(&self, op: &DiffOp) -> Result<DiffOp> {
        let mut cache = ApplyCache::default();
        self.apply_cached(op, &mut cache)
    }

    fn apply_cached(&self, op: &DiffOp, cache: &mut ApplyCache) -> Result<DiffOp> {
        if op.prime() != self.p || op.nvars() != self.n {
            return Err(Error::mismatch("operator lives over a different ring"));
        }
        let mut acc = DiffOp::zero(self.p, self.n);
        for (beta, coeff) in op.parts() {
            let image_d = self.divided_multi(beta.as_slice(), cache)?;
            let image_f = self.apply_laurent(coeff)?;
            let term = match image_f.as_laurent() {
                Some(f) => image_d.left_mul_laurent(&f)?,
                None => image_f.checked_mul(&image_d)?,
            };
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    fn apply_laurent(&self, f: &LaurentPoly) -> Result<DiffOp> {
        let mut acc = DiffOp::zero(self.p, self.n);
        for (gamma, c) in f.terms() {
            let mut term = DiffOp::from_laurent(LaurentPoly::constant(c, self.n));
            for (i, &e) in gamma.as_slice().iter().enumerate() {
                let base = if e >= 0 {
                    &self.x_images[i]
                } else {
                    &self.xinv_images[i]
                };
                for _ in 0..e.unsigned_abs() {
                    term = term.checked_mul(base)?;
                }
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Image of `d^[β]`, built up one base-p digit at a time:
    /// `d^[β] = d_i^[p^k] · d^[β - p^k e_i] / c`, where `c` is the digit of
    /// `β_i` at position `k`, the lowest nonzero digit of `β`.
    fn divided_multi(&self, beta: &[u64], cache: &mut ApplyCache) -> Result<DiffOp> {
        if let Some(op) = cache.multi.get(beta) {
            return Ok(op.clone());
        }
        let q = self.p.get() as u64;
        let lowest = (0..self.n)
            .filter(|&i| beta[i] > 0)
            .map(|i| (trailing_zero_digits(beta[i], q), i))
            .min();
        let out = match lowest {
            None => DiffOp::one(self.p, self.n),
            Some((k, i)) => {
                if k >= self.precision {
                    return Err(Error::InsufficientPrecision {
                        needed: k + 1,
                        available: self.precision,
                    });
                }
                let pk = q.pow(k as u32);
                let digit = (beta[i] / pk) % q;
                let mut rest = beta.to_vec();
                rest[i] -= pk;
                let tail = self.divided_multi(&rest, cache)?;
                let inv = self.p.inv(digit as u32);
                self.d_images[i][k]
                    .checked_mul(&tail)?
                    .scale(Fp::new(inv as i64, self.p))
            }
        };
        cache.multi.insert(beta.to_vec(), out.clone());
        Ok(out)
    }

    /// Images of `self ∘ other`.
    pub fn compose(&self, other: &GeneratorImages) -> Result<GeneratorImages> {
        if self.p != other.p || self.n != other.n || self.precision != other.precision {
            return Err(Error::mismatch(
                "automorphisms over different rings or precisions",
            ));
        }
        let mut cache = ApplyCache::default();
        let mut map = |op: &DiffOp| self.apply_cached(op, &mut cache);
        let x_images = other.x_images.iter().map(&mut map).collect::<Result<_>>()?;
        let xinv_images = other
            .xinv_images
            .iter()
            .map(&mut map)
            .collect::<Result<_>>()?;
        let d_images = other
            .d_images
            .iter()
            .map(|levels| levels.iter().map(&mut map).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        GeneratorImages::new(
            self.p,
            self.n,
            self.precision,
            x_images,
            xinv_images,
            d_images,
        )
    }

    /// Checks the defining relations on the images, exactly.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let (p, n) = (self.p, self.n);
        let one = DiffOp::one(p, n);
        let zero = DiffOp::zero(p, n);
        let mut check = |name: String, result: Result<bool>| {
            report.entries.push(RelationCheck {
                relation: name,
                passed: matches!(result, Ok(true)),
            });
        };
        for i in 0..n {
            let x = &self.x_images[i];
            let xi = &self.xinv_images[i];
            check(
                format!("x{0} image is a unit", i + 1),
                Ok(x.as_laurent().is_some_and(|f| f.unit_decompose().is_ok())),
            );
            check(
                format!("x{0} * x{0}^-1 = 1", i + 1),
                x.checked_mul(xi)
                    .and_then(|a| Ok(a == one && xi.checked_mul(x)? == one)),
            );
        }
        for i in 0..n {
            for j in i + 1..n {
                check(
                    format!("[x{}, x{}] = 0", i + 1, j + 1),
                    self.x_images[i]
                        .commutator(&self.x_images[j])
                        .map(|c| c.is_zero()),
                );
            }
        }
        let gens: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..self.precision).map(move |k| (i, k)))
            .collect();
        for (a, &(i, k)) in gens.iter().enumerate() {
            for &(j, l) in &gens[a + 1..] {
                check(
                    format!("[d{}[p^{}], d{}[p^{}]] = 0", i + 1, k, j + 1, l),
                    self.d_images[i][k]
                        .commutator(&self.d_images[j][l])
                        .map(|c| c.is_zero()),
                );
            }
        }
        for (i, k) in gens.iter().copied() {
            let pk = p
                .checked_pow(k)
                .expect("level order validated at construction");
            for j in 0..n {
                let expect = if i == j {
                    self.divided_image(i, pk - 1)
                } else {
                    Ok(zero.clone())
                };
                check(
                    format!(
                        "[d{}[p^{}], x{}] = {}",
                        i + 1,
                        k,
                        j + 1,
                        if i == j { "d[p^k - 1]" } else { "0" }
                    ),
                    expect
                        .and_then(|e| Ok(self.d_images[i][k].commutator(&self.x_images[j])? == e)),
                );
            }
            check(
                format!("d{}[p^{}]^p = 0", i + 1, k),
                Ok(self.d_images[i][k].pow(p.get() as u64).is_zero()),
            );
        }
        report
    }
}

#[derive(Default)]
struct ApplyCache {
    multi: HashMap<Vec<u64>, DiffOp>,
}

fn trailing_zero_digits(mut v: u64, base: u64) -> usize {
    let mut k = 0;
    while v > 0 && v.is_multiple_of(base) {
        v /= base;
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
}

/// Pass/fail per checked relation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<RelationCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn identity_validates() {
        let g = GeneratorImages::identity(p(3), 2, 3).unwrap();
        let report = g.validate();
        assert!(
            report.all_passed(),
            "{:?}",
            report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn corrupted_level_fails_pth_power() {
        let q = p(2);
        let g = GeneratorImages::identity(q, 1, 2).unwrap();
        let mut d = g.d_images().to_vec();
        d[0][0] = &DiffOp::divided(q, 1, 0, 1) + &DiffOp::x_power(q, 1, 0, 1);
        let bad = GeneratorImages::new(q, 1, 2, g.x_images().to_vec(), g.xinv_images().to_vec(), d)
            .unwrap();
        let report = bad.validate();
        let failed: Vec<_> = report.failures().map(|c| c.relation.as_str()).collect();
        assert!(failed.contains(&"d1[p^0]^p = 0"), "{failed:?}");
        let sq = bad.d_image(0, 0).pow(2);
        assert_eq!(sq, &DiffOp::one(q, 1) + &DiffOp::x_power(q, 1, 0, 2));
    }

    #[test]
    fn identity_apply_is_identity() {
        let q = p(3);
        let g = GeneratorImages::identity(q, 2, 3).unwrap();
        let op = DiffOp::from_terms(
            q,
            2,
            [(2, vec![1, -3], vec![5, 13]), (1, vec![0, 2], vec![0, 0])],
        )
        .unwrap();
        assert_eq!(g.apply(&op).unwrap(), op);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let q = p(3);
        let g = GeneratorImages::identity(q, 1, 2).unwrap();
        let err = GeneratorImages::new(
            q,
            1,
            3,
            g.x_images().to_vec(),
            g.xinv_images().to_vec(),
            g.d_images().to_vec(),
        );
        assert!(matches!(err, Err(Error::Mismatch(_))));
    }
}
