//! Builds `σ_s ∘ τ` from random `(s, τ)`, then recovers both factors.
//!
//! cargo run --release --example factorization -- [p] [n] [precision] [trials]

use std::time::Instant;

use divpow::autgroup::{build_sigma, factorize, FactoredAut};
use divpow::oracles::sample::{random_monomial_aut, random_shift};
use divpow::{Prime, RecoveryOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arg<T: std::str::FromStr>(i: usize, default: T) -> T {
    std::env::args()
        .nth(i)
        .and_then(|s| s.parse().ok())
        .unwrap_or(default)
}

fn main() -> divpow::Result<()> {
    let p = Prime::new(arg(1, 3))?;
    let n = arg(2, 2);
    let precision = arg(3, 3);
    let trials = arg(4, 5);
    let opts = RecoveryOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    for t in 0..trials {
        let start = Instant::now();
        let s = random_shift(&mut rng, p, n, precision);
        let tau = random_monomial_aut(&mut rng, p, n, 2);
        let g = build_sigma(&s)?.compose(&tau.lift(precision, opts)?)?;
        let found = factorize(&g, opts)?;
        let expected = FactoredAut::new(s, tau)?;
        println!(
            "trial {t}: A = {:?}, lambda = {:?}, recovered = {}, {:.2?}",
            expected.tau.matrix(),
            expected
                .tau
                .lambda()
                .iter()
                .map(|l| l.value())
                .collect::<Vec<_>>(),
            found == expected,
            start.elapsed()
        );
        for (i, c) in found.shift.components().iter().enumerate() {
            println!("  s[{}] = {c}", i + 1);
        }
    }
    Ok(())
}
