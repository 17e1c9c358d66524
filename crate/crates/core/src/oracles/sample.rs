//! Seeded random generators for operators, shifts and monomial automorphisms.

use rand::Rng;

use crate::autgroup::{determinant, MonomialAut, SigmaShift};
use crate::diffop::DiffOp;
use crate::laurent::LaurentPoly;
use crate::scalars::{Fp, PadicInt, Prime};

fn nonzero<R: Rng>(rng: &mut R, p: Prime) -> i64 {
    rng.gen_range(1..p.get() as i64)
}

/// A Laurent polynomial with at most `max_terms` terms and exponents in
/// `[-radius, radius]`.
pub fn random_laurent<R: Rng>(
    rng: &mut R,
    p: Prime,
    n: usize,
    max_terms: usize,
    radius: i64,
) -> LaurentPoly {
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<i64>, i64)> = (0..count)
        .map(|_| {
            (
                (0..n).map(|_| rng.gen_range(-radius..=radius)).collect(),
                nonzero(rng, p),
            )
        })
        .collect();
    LaurentPoly::from_terms(p, n, terms).expect("exponents have length n")
}

/// Like [`random_laurent`] but never zero.
pub fn random_nonzero_laurent<R: Rng>(
    rng: &mut R,
    p: Prime,
    n: usize,
    max_terms: usize,
    radius: i64,
) -> LaurentPoly {
    loop {
        let f = random_laurent(rng, p, n, max_terms.max(1), radius);
        if !f.is_zero() {
            return f;
        }
    }
}

/// An operator with at most `max_terms` terms `c x^γ d^[β]`, `|γ_i| <= radius`
/// and `β_i <= max_index`.
pub fn random_diffop<R: Rng>(
    rng: &mut R,
    p: Prime,
    n: usize,
    max_terms: usize,
    radius: i64,
    max_index: u64,
) -> DiffOp {
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(i64, Vec<i64>, Vec<u64>)> = (0..count)
        .map(|_| {
            (
                nonzero(rng, p),
                (0..n).map(|_| rng.gen_range(-radius..=radius)).collect(),
                (0..n).map(|_| rng.gen_range(0..=max_index)).collect(),
            )
        })
        .collect();
    DiffOp::from_terms(p, n, terms).expect("shapes match n")
}

pub fn random_padic<R: Rng>(rng: &mut R, p: Prime, precision: usize) -> PadicInt {
    let digits = (0..precision).map(|_| rng.gen_range(0..p.get())).collect();
    PadicInt::from_digits(digits, p).expect("digits below p")
}

pub fn random_shift<R: Rng>(rng: &mut R, p: Prime, n: usize, precision: usize) -> SigmaShift {
    SigmaShift::new((0..n).map(|_| random_padic(rng, p, precision)).collect()).expect("n >= 1")
}

/// A matrix with entries in `[-bound, bound]` and determinant `±1`, by rejection.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let det = determinant(&m);
        if det == 1 || det == -1 {
            return m;
        }
    }
}

pub fn random_monomial_aut<R: Rng>(rng: &mut R, p: Prime, n: usize, bound: i64) -> MonomialAut {
    let matrix = random_unimodular(rng, n, bound);
    let lambda = (0..n).map(|_| Fp::new(nonzero(rng, p), p)).collect();
    MonomialAut::new(matrix, lambda).expect("unimodular with nonzero scalars")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_respect_bounds() {
        let p = Prime::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let f = random_laurent(&mut rng, p, 2, 4, 6);
            assert!(f.num_terms() <= 4);
            assert!(f
                .terms()
                .all(|(e, _)| e.as_slice().iter().all(|v| v.abs() <= 6)));
            let d = random_diffop(&mut rng, p, 2, 3, 2, 4);
            assert!(d.order().unwrap_or(0) <= 8);
            let m = random_unimodular(&mut rng, 2, 2);
            assert!(m.iter().flatten().all(|v| v.abs() <= 2));
        }
    }

    #[test]
    fn samplers_are_deterministic() {
        let p = Prime::new(5).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (
                random_diffop(&mut rng, p, 2, 4, 3, 3),
                random_shift(&mut rng, p, 2, 4),
            )
        };
        assert_eq!(draw(9), draw(9));
    }
}
