//! Parses operator expressions and prints their normal forms.
//!
//! cargo run --example normalize -- 3 1 "d1[2]*x1"

use divpow::cli::normalize;
use divpow::Prime;

fn main() -> divpow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [p, n, exprs @ ..] = args.as_slice() {
        let p = Prime::new(p.parse().unwrap_or(2))?;
        let n = n.parse().unwrap_or(1);
        for e in exprs {
            println!("{e}  =>  {}", normalize(e, p, n)?);
        }
        return Ok(());
    }

    let samples = [
        (3, 1, "d1[2]*x1"),
        (2, 1, "(d1[1]+x1^-1)^2"),
        (2, 1, "d1[1]*d1[1]"),
        (5, 1, "d1[1]^5"),
        (5, 1, "d1[5]*x1^5"),
        (3, 2, "d2[3]*x1*x2^2 - x2^2*x1*d2[3]"),
        (7, 2, "(x1*d1[1] + x2*d2[1])^2"),
    ];
    for (p, n, e) in samples {
        let op = normalize(e, Prime::new(p)?, n)?;
        println!("p = {p}, n = {n}: {e}  =>  {op}  (order {:?})", op.order());
    }
    Ok(())
}
