//! Acceptance criteria 1-11. Run with
//! `cargo test --release -p divpow --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use divpow::autgroup::{
    build_sigma, extract_digits, factorize, sigma_apply, sigma_image_divided, FactoredAut,
    GeneratorImages, SigmaShift,
};
use divpow::cli::{images_from_json, images_to_json, operator_from_json, operator_to_json, run};
use divpow::oracles::sample::{random_diffop, random_monomial_aut, random_shift};
use divpow::oracles::{self, corrupted_images};
use divpow::{DiffOp, Error, ExponentVector, Fp, LaurentPoly, PadicInt, Prime, RecoveryOptions};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 3] = [2, 3, 5];

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn mul(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a * b
}

fn blocks_outcome(blocks: &[oracles::BlockResult]) -> Outcome {
    let checks: usize = blocks.iter().map(|b| b.checks).sum();
    match blocks.iter().find(|b| !b.passed()) {
        None => pass(format!("{checks} checks")),
        Some(b) => fail(format!(
            "{}: {}",
            b.name,
            b.first_counterexample.clone().unwrap_or_default()
        )),
    }
}

fn with_limit(outcome: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    if outcome.ok && elapsed > limit {
        fail(format!(
            "{} but took {elapsed:.1?} (limit {limit:?})",
            outcome.detail
        ))
    } else {
        outcome
    }
}

fn c1_defining_relations() -> Outcome {
    let start = Instant::now();
    let mut blocks = Vec::new();
    for p in PRIMES {
        for n in [1, 2] {
            blocks.extend(oracles::defining_relations(prime(p), n, p.pow(3), &mul));
        }
    }
    with_limit(
        blocks_outcome(&blocks),
        start.elapsed(),
        Duration::from_secs(60),
    )
}

fn c2_product_action() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut blocks = Vec::new();
    for p in PRIMES {
        for n in [1, 2] {
            blocks.push(oracles::product_action_consistency(prime(p), n, 200, &mut rng).unwrap());
        }
    }
    blocks_outcome(&blocks)
}

fn c3_kernel() -> Outcome {
    let start = Instant::now();
    let mut blocks = Vec::new();
    for p in PRIMES {
        for n in [1, 2] {
            blocks.push(oracles::kernel_checks(prime(p), n, 2 * p as i64).unwrap());
        }
    }
    with_limit(
        blocks_outcome(&blocks),
        start.elapsed(),
        Duration::from_secs(30),
    )
}

fn c4_pth_power() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut blocks = Vec::new();
    for p in PRIMES {
        for n in [1, 2] {
            blocks.push(oracles::pth_power_identity(
                prime(p),
                n,
                100,
                &mut rng,
                &mul,
            ));
        }
    }
    blocks_outcome(&blocks)
}

/// `C(M, k) mod p` with exact big-integer arithmetic.
fn big_binom_mod(m: &BigUint, k: u64, p: u64) -> u64 {
    if *m < BigUint::from(k) {
        return 0;
    }
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for j in 0..k {
        num *= m - BigUint::from(j);
        den *= BigUint::from(j + 1);
    }
    let q = num / den % BigUint::from(p);
    q.iter_u64_digits().next().unwrap_or(0)
}

fn c5_sigma_action() -> Outcome {
    let precision = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checks = 0;
    for p in [2u64, 3] {
        let q = prime(p);
        let modulus = p.pow(precision as u32) as i64;
        for _ in 0..200 {
            let s_int: i64 = rng.gen_range(-100_000..100_000);
            let s = SigmaShift::from_ints(q, precision, &[s_int]).unwrap();
            let k = rng.gen_range(0..modulus as u64);
            let m: i64 = rng.gen_range(-modulus..modulus);
            let op = sigma_image_divided(&s, 0, k).unwrap();
            let got = op.act(&LaurentPoly::variable_power(q, 1, 0, m)).unwrap();
            // C(m + s, k) mod p depends on m + s mod p^precision only
            let rep = BigUint::from((m + s_int).rem_euclid(modulus) as u64);
            let c = big_binom_mod(&rep, k, p);
            let expected = LaurentPoly::monomial(
                Fp::new(c as i64, q),
                ExponentVector::new(vec![m - k as i64]),
            );
            if got != expected {
                return fail(format!(
                    "p = {p}, s = {s_int}, k = {k}, m = {m}: {got} vs {expected}"
                ));
            }
            checks += 1;
        }
    }
    pass(format!("{checks} checks"))
}

fn c6_group_law() -> Outcome {
    let precision = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut carries = 0;
    for p in [2u64, 3] {
        let q = prime(p);
        for _ in 0..50 {
            let s = random_shift(&mut rng, q, 1, precision);
            let t = random_shift(&mut rng, q, 1, precision);
            let sum = s.add(&t).unwrap();
            let plain: Vec<u32> = s
                .component(0)
                .digits()
                .iter()
                .zip(t.component(0).digits())
                .map(|(a, b)| (a + b) % p as u32)
                .collect();
            if plain != sum.component(0).digits() {
                carries += 1;
            }
            let composed = build_sigma(&s)
                .unwrap()
                .compose(&build_sigma(&t).unwrap())
                .unwrap();
            if composed != build_sigma(&sum).unwrap() {
                return fail(format!(
                    "p = {p}, s = {}, t = {}",
                    s.component(0),
                    t.component(0)
                ));
            }
        }
    }
    pass(format!("100 pairs, {carries} with carries"))
}

fn c7_round_trip() -> Outcome {
    let precision = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u64, 3] {
        let q = prime(p);
        for n in [1, 2] {
            for _ in 0..50 {
                let s = random_shift(&mut rng, q, n, precision);
                match extract_digits(&build_sigma(&s).unwrap()) {
                    Ok(found) if found == s => {}
                    other => return fail(format!("p = {p}, n = {n}, s = {s:?}: {other:?}")),
                }
            }
            for i in 0..n {
                let got = extract_digits(&corrupted_images(q, n, precision, i).unwrap());
                if got
                    != Err(Error::NotSigmaForm {
                        variable: i + 1,
                        level: 0,
                    })
                {
                    return fail(format!("malformed images accepted: {got:?}"));
                }
            }
        }
    }
    pass("200 shifts, malformed inputs rejected")
}

fn c8_factorization() -> Outcome {
    let opts = RecoveryOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let configs = [(2u64, 5usize), (3, 4), (5, 2)];
    for (p, precision) in configs {
        let q = prime(p);
        for _ in 0..25 {
            let s = random_shift(&mut rng, q, 2, precision);
            let tau = random_monomial_aut(&mut rng, q, 2, 2);
            let g = build_sigma(&s)
                .unwrap()
                .compose(&tau.lift(precision, opts).unwrap())
                .unwrap();
            let expected = FactoredAut::new(s, tau).unwrap();
            match factorize(&g, opts) {
                Ok(found) if found == expected => {}
                other => return fail(format!("p = {p}: {expected:?} -> {other:?}")),
            }
        }
    }
    pass("25 pairs each for (p, K) = (2, 5), (3, 4), (5, 2), n = 2")
}

fn c9_order_preservation() -> Outcome {
    let precision = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in PRIMES {
        let q = prime(p);
        for _ in 0..100 {
            let d = random_diffop(&mut rng, q, 2, 4, 4, p * p);
            let s = random_shift(&mut rng, q, 2, precision);
            let image = sigma_apply(&s, &d).unwrap();
            if image.order() != d.order() {
                return fail(format!("p = {p}: {d} -> {image}"));
            }
        }
    }
    pass("300 operators")
}

fn c10_twist() -> Outcome {
    let opts = RecoveryOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    // precision 5 at p = 2 as stated; p = 3 at precision 4 on top
    for (p, precision) in [(2u64, 5usize), (3, 4)] {
        let q = prime(p);
        for _ in 0..25 {
            let tau = random_monomial_aut(&mut rng, q, 2, 2);
            let s = random_shift(&mut rng, q, 2, precision);
            let conj: GeneratorImages = tau
                .lift(precision, opts)
                .unwrap()
                .compose(&build_sigma(&s).unwrap())
                .unwrap()
                .compose(&tau.inverse().lift(precision, opts).unwrap())
                .unwrap();
            let expected = SigmaShift::new(
                (0..2)
                    .map(|i| {
                        let row = &tau.matrix()[i];
                        let mut acc = PadicInt::zero(q, precision);
                        for (j, &a) in row.iter().enumerate() {
                            acc = acc.add(&s.component(j).mul_int(a)).unwrap();
                        }
                        acc
                    })
                    .collect(),
            )
            .unwrap();
            match extract_digits(&conj) {
                Ok(found) if found == expected => {}
                other => return fail(format!("A = {:?}, s = {s:?}: {other:?}", tau.matrix())),
            }
        }
    }
    pass("25 pairs each for (p, K) = (2, 5), (3, 4), n = 2")
}

fn c11_golden() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let corpus = std::fs::read_to_string(dir.join("normalize_corpus.txt")).unwrap();
    let expected = std::fs::read_to_string(dir.join("normalize_expected.txt")).unwrap();
    let mut count = 0;
    for (line, want) in corpus.lines().zip(expected.lines()) {
        let mut parts = line.splitn(3, ' ');
        let (p, n, expr) = (
            parts.next().unwrap(),
            parts.next().unwrap(),
            parts.next().unwrap(),
        );
        let out = run(["divpow", "normalize", expr, "--p", p, "--n", n]);
        if out.output != format!("{want}\n") {
            return fail(format!("{expr}: {:?} vs {want:?}", out.output));
        }
        count += 1;
    }
    if count != 30 {
        return fail(format!("corpus has {count} entries"));
    }
    let op_text = std::fs::read_to_string(dir.join("operator_p3.json")).unwrap();
    let img_text = std::fs::read_to_string(dir.join("sigma_p2_n2.json")).unwrap();
    let op_ok = operator_to_json(&operator_from_json(&op_text).unwrap()) + "\n" == op_text;
    let img_ok = images_to_json(&images_from_json(&img_text).unwrap()) + "\n" == img_text;
    if !(op_ok && img_ok) {
        return fail("interchange files do not round-trip");
    }
    pass("30 expressions, 2 interchange files")
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("1 defining relations, k, l <= p^3", c1_defining_relations),
        ("2 product/action consistency", c2_product_action),
        ("3 windowed kernel", c3_kernel),
        ("4 (d + f)^p identity", c4_pth_power),
        ("5 sigma_s action", c5_sigma_action),
        ("6 group law with carries", c6_group_law),
        ("7 digit round trip", c7_round_trip),
        ("8 factorization", c8_factorization),
        ("9 order preservation", c9_order_preservation),
        ("10 semidirect twist", c10_twist),
        ("11 CLI golden files", c11_golden),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {name}: {} [{:.2?}]",
            outcome.detail,
            start.elapsed()
        );
        if !outcome.ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
