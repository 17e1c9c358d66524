//! Runs the relation suite, then again with a product that ignores the
//! commutation rule, to show the suite catching it.

use divpow::oracles::{relation_suite, relation_suite_with, SuiteParams};
use divpow::{DiffOp, DividedIndex, Prime};

fn main() -> divpow::Result<()> {
    for p in [2u64, 3, 5] {
        let params = SuiteParams {
            p: Prime::new(p)?,
            n: 2,
            max_index: p.pow(3),
            trials: 100,
            seed: 1,
        };
        println!("p = {p}, n = 2, indices up to {}:", p.pow(3));
        print!("{}", relation_suite(params).render_text());
    }

    let commutative = |a: &DiffOp, b: &DiffOp| {
        let (p, n) = (a.prime(), a.nvars());
        let mut acc = DiffOp::zero(p, n);
        for (c1, g1, b1) in a.terms() {
            for (c2, g2, b2) in b.terms() {
                let beta: Vec<u64> = b1
                    .as_slice()
                    .iter()
                    .zip(b2.as_slice())
                    .map(|(u, v)| u + v)
                    .collect();
                let c = b1
                    .as_slice()
                    .iter()
                    .zip(&beta)
                    .fold(c1 * c2, |acc, (&u, &s)| {
                        acc * divpow::binom_nat_mod_p(s, u, p)
                    });
                acc = &acc + &DiffOp::term(c, g1.plus(g2.as_slice()), DividedIndex::new(beta));
            }
        }
        acc
    };
    let params = SuiteParams {
        p: Prime::new(3)?,
        n: 1,
        max_index: 9,
        trials: 20,
        seed: 1,
    };
    println!("\nwith a commutative product:");
    print!(
        "{}",
        relation_suite_with(params, &commutative).render_text()
    );
    Ok(())
}
