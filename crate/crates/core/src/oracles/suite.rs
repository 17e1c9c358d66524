//! Randomized and exhaustive relation suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgroup::{
    apply_sigma_after, build_sigma, extract_digits, GeneratorImages, SigmaShift,
};
use crate::diffop::{DiffOp, DividedIndex};
use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::scalars::{binom_nat_mod_p, Fp, Prime};

use super::kernel::{kernel_bruteforce, ExponentWindow};
use super::sample::{random_diffop, random_laurent, random_shift};
use super::{BlockResult, SuiteReport};

/// The multiplication under test. Swapping it out lets the suite be checked
/// against a deliberately broken product.
pub type Multiplier<'a> = &'a dyn Fn(&DiffOp, &DiffOp) -> DiffOp;

fn reference_mul(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a * b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteParams {
    pub p: Prime,
    pub n: usize,
    pub max_index: u64,
    pub trials: usize,
    pub seed: u64,
}

struct Tally {
    block: BlockResult,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            block: BlockResult {
                name: name.to_string(),
                checks: 0,
                failures: 0,
                first_counterexample: None,
            },
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.block.checks += 1;
        if !ok {
            self.block.failures += 1;
            if self.block.first_counterexample.is_none() {
                self.block.first_counterexample = Some(describe());
            }
        }
    }

    fn finish(self) -> BlockResult {
        self.block
    }
}

fn commutator(mul: Multiplier<'_>, a: &DiffOp, b: &DiffOp) -> DiffOp {
    &mul(a, b) - &mul(b, a)
}

/// The defining relations, exhaustively for `0 <= k, l <= max_index`:
/// commuting `x`'s, `x x^{-1} = 1`, commuting divided powers,
/// `d^[k] d^[l] = C(k+l, k) d^[k+l]`, `[d_i^[k], x_j] = δ_ij d_i^[k-1]`.
pub fn defining_relations(
    p: Prime,
    n: usize,
    max_index: u64,
    mul: Multiplier<'_>,
) -> Vec<BlockResult> {
    let x = |i, e| DiffOp::x_power(p, n, i, e);
    let d = |i, k| DiffOp::divided(p, n, i, k);
    let one = DiffOp::one(p, n);

    let mut units = Tally::new("x commute and invert");
    for i in 0..n {
        let prod = mul(&x(i, 1), &x(i, -1));
        units.record(prod == one, || format!("x{0}*x{0}^-1 = {prod}", i + 1));
        for j in 0..n {
            let c = commutator(mul, &x(i, 1), &x(j, 1));
            units.record(c.is_zero(), || format!("[x{}, x{}] = {c}", i + 1, j + 1));
        }
    }

    let mut zeroth = Tally::new("d[0] = 1");
    for i in 0..n {
        zeroth.record(d(i, 0) == one, || format!("d{}[0] != 1", i + 1));
    }

    let mut commuting = Tally::new("divided powers commute");
    let mut products = Tally::new("divided power products");
    let mut with_x = Tally::new("[d[k], x] = d[k-1]");
    for i in 0..n {
        for k in 0..=max_index {
            let dk = d(i, k);
            for j in 0..n {
                let expected = if i == j && k > 0 {
                    d(i, k - 1)
                } else {
                    DiffOp::zero(p, n)
                };
                let c = commutator(mul, &dk, &x(j, 1));
                with_x.record(c == expected, || {
                    format!("[d{}[{k}], x{}] = {c}, expected {expected}", i + 1, j + 1)
                });
                for l in 0..=max_index {
                    let dl = d(j, l);
                    let c = commutator(mul, &dk, &dl);
                    commuting.record(c.is_zero(), || {
                        format!("[d{}[{k}], d{}[{l}]] = {c}", i + 1, j + 1)
                    });
                    if i == j {
                        let got = mul(&dk, &dl);
                        let expected = d(i, k + l).scale(binom_nat_mod_p(k + l, k, p));
                        products.record(got == expected, || {
                            format!("d{0}[{k}]*d{0}[{l}] = {got}, expected {expected}", i + 1)
                        });
                    }
                }
            }
        }
    }
    vec![
        units.finish(),
        zeroth.finish(),
        commuting.finish(),
        products.finish(),
        with_x.finish(),
    ]
}

/// Random instances of `d^[α] d^[β] = C(α+β, α) d^[α+β]` for multi-indices.
pub fn multi_index_products<R: Rng>(
    p: Prime,
    n: usize,
    max_index: u64,
    trials: usize,
    rng: &mut R,
    mul: Multiplier<'_>,
) -> BlockResult {
    let mut tally = Tally::new("multi-index products");
    for _ in 0..trials {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_index)).collect();
        let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_index)).collect();
        let one = Fp::one(p);
        let da = DiffOp::term(one, ExponentVector::zeros(n), DividedIndex::new(a.clone()));
        let db = DiffOp::term(one, ExponentVector::zeros(n), DividedIndex::new(b.clone()));
        let sum: Vec<u64> = a.iter().zip(&b).map(|(u, v)| u + v).collect();
        let c = a
            .iter()
            .zip(&sum)
            .fold(one, |acc, (&u, &s)| acc * binom_nat_mod_p(s, u, p));
        let expected = DiffOp::term(c, ExponentVector::zeros(n), DividedIndex::new(sum));
        let got = mul(&da, &db);
        tally.record(got == expected, || {
            format!("d^{a:?} * d^{b:?} = {got}, expected {expected}")
        });
    }
    tally.finish()
}

/// The p-th power identity `(d_i + f)^p = d_i^{p-1} f + f^p` on random `f`
/// with at most four terms and exponents in `[-2p, 2p]`.
pub fn pth_power_identity<R: Rng>(
    p: Prime,
    n: usize,
    trials: usize,
    rng: &mut R,
    mul: Multiplier<'_>,
) -> BlockResult {
    let mut tally = Tally::new("(d + f)^p = d^{p-1} f + f^p");
    let radius = 2 * p.get() as i64;
    for _ in 0..trials {
        let f = random_laurent(rng, p, n, 4, radius);
        for i in 0..n {
            let base = &DiffOp::divided(p, n, i, 1) + &DiffOp::from_laurent(f.clone());
            let mut power = DiffOp::one(p, n);
            for _ in 0..p.get() {
                power = mul(&power, &base);
            }
            let expected =
                DiffOp::from_laurent(&f.frobenius() - &f.divided_partial(i, p.get() as u64 - 1));
            tally.record(power == expected, || {
                format!("i = {}, f = {f}: got {power}, expected {expected}", i + 1)
            });
        }
    }
    tally.finish()
}

/// The windowed kernel of `d_i^{p-1} + F` is `F_p x_i^{-1}` on
/// `[-radius, radius]^n` and zero on `[0, radius]^n`.
pub fn kernel_checks(p: Prime, n: usize, radius: i64) -> Result<BlockResult> {
    let mut tally = Tally::new("kernel of d^{p-1} + F");
    let full = ExponentWindow::cube(n, -radius, radius)?;
    let polynomial = ExponentWindow::cube(n, 0, radius)?;
    for i in 0..n {
        let basis = kernel_bruteforce(p, n, i, &full)?;
        let expected = vec![LaurentPoly::variable_power(p, n, i, -1)];
        tally.record(basis == expected, || {
            format!("i = {}: basis {}", i + 1, show_basis(&basis))
        });
        let basis = kernel_bruteforce(p, n, i, &polynomial)?;
        tally.record(basis.is_empty(), || {
            format!(
                "i = {}, polynomial window: basis {}",
                i + 1,
                show_basis(&basis)
            )
        });
    }
    Ok(tally.finish())
}

fn show_basis(basis: &[LaurentPoly]) -> String {
    let items: Vec<String> = basis.iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// `σ_s ∘ σ_t = σ_{s+t}` on generator images for random `s, t`.
pub fn group_law<R: Rng>(
    p: Prime,
    n: usize,
    precision: usize,
    trials: usize,
    rng: &mut R,
) -> Result<BlockResult> {
    let mut tally = Tally::new("sigma_s o sigma_t = sigma_{s+t}");
    for _ in 0..trials {
        let s = random_shift(rng, p, n, precision);
        let t = random_shift(rng, p, n, precision);
        let composed = apply_sigma_after(&s, &build_sigma(&t)?)?;
        let direct = build_sigma(&s.add(&t)?)?;
        tally.record(composed == direct, || {
            format!("s = {}, t = {}", show_shift(&s), show_shift(&t))
        });
    }
    Ok(tally.finish())
}

/// `extract_digits(build_sigma(s)) = s`, and a corrupted first level is rejected.
pub fn round_trip<R: Rng>(
    p: Prime,
    n: usize,
    precision: usize,
    trials: usize,
    rng: &mut R,
) -> Result<BlockResult> {
    let mut tally = Tally::new("extract_digits(build_sigma(s)) = s");
    for _ in 0..trials {
        let s = random_shift(rng, p, n, precision);
        let got = extract_digits(&build_sigma(&s)?);
        let ok = got.as_ref() == Ok(&s);
        tally.record(ok, || format!("s = {}: got {got:?}", show_shift(&s)));
    }
    for i in 0..n {
        let g = corrupted_images(p, n, precision, i)?;
        let got = extract_digits(&g);
        let ok = got
            == Err(Error::NotSigmaForm {
                variable: i + 1,
                level: 0,
            });
        tally.record(ok, || {
            format!("d{0} -> d{0} + x{0} accepted: {got:?}", i + 1)
        });
    }
    Ok(tally.finish())
}

/// Identity images except `d_i -> d_i + x_i`.
pub fn corrupted_images(p: Prime, n: usize, precision: usize, i: usize) -> Result<GeneratorImages> {
    let id = GeneratorImages::identity(p, n, precision)?;
    let mut d_images = id.d_images().to_vec();
    d_images[i][0] = &d_images[i][0] + &DiffOp::x_power(p, n, i, 1);
    GeneratorImages::new(
        p,
        n,
        precision,
        id.x_images().to_vec(),
        id.xinv_images().to_vec(),
        d_images,
    )
}

pub(crate) fn show_shift(s: &SigmaShift) -> String {
    let parts: Vec<String> = s
        .components()
        .iter()
        .map(|c| format!("{:?}", c.digits()))
        .collect();
    parts.join(";")
}

/// All defining relations for indices up to `max_index`, `trials` random
/// multi-index products, and the p-th power identity on `trials` random `f`.
pub fn relation_suite(params: SuiteParams) -> SuiteReport {
    relation_suite_with(params, &reference_mul)
}

pub fn relation_suite_with(params: SuiteParams, mul: Multiplier<'_>) -> SuiteReport {
    let SuiteParams {
        p,
        n,
        max_index,
        trials,
        seed,
    } = params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = defining_relations(p, n, max_index, mul);
    blocks.push(multi_index_products(p, n, max_index, trials, &mut rng, mul));
    blocks.push(pth_power_identity(p, n, trials, &mut rng, mul));
    SuiteReport { blocks }
}

/// Products `D1 * D2` whose action agrees with acting twice, on random triples.
pub fn product_action_consistency<R: Rng>(
    p: Prime,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<BlockResult> {
    let mut tally = Tally::new("(D1 D2) * f = D1 * (D2 * f)");
    let max_index = 2 * p.get() as u64;
    for _ in 0..trials {
        let d1 = random_diffop(rng, p, n, 3, 3, max_index);
        let d2 = random_diffop(rng, p, n, 3, 3, max_index);
        let f = random_laurent(rng, p, n, 4, 6);
        let lhs = (&d1 * &d2).act(&f)?;
        let rhs = d1.act(&d2.act(&f)?)?;
        tally.record(lhs == rhs, || format!("D1 = {d1}, D2 = {d2}, f = {f}"));
    }
    Ok(tally.finish())
}
