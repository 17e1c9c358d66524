//! Windowed kernels of `f -> d_i^{p-1} f + f^p`: spanned by `x_i^{-1}` over
//! Laurent polynomials, zero over polynomials.

use divpow::oracles::{kernel_bruteforce, ExponentWindow};
use divpow::Prime;

fn main() -> divpow::Result<()> {
    for p in [2u64, 3, 5, 7] {
        let prime = Prime::new(p)?;
        for n in [1usize, 2] {
            let r = 2 * p as i64;
            let full = ExponentWindow::cube(n, -r, r)?;
            let poly = ExponentWindow::cube(n, 0, r)?;
            for i in 0..n {
                let basis = kernel_bruteforce(prime, n, i, &full)?;
                let shown: Vec<String> = basis.iter().map(|f| f.to_string()).collect();
                let poly_dim = kernel_bruteforce(prime, n, i, &poly)?.len();
                println!(
                    "p = {p}, n = {n}, i = {}: window [-{r}, {r}]^{n} ({} monomials) kernel {{{}}}, polynomial window dim {poly_dim}",
                    i + 1,
                    full.size(),
                    shown.join(", ")
                );
            }
        }
    }
    Ok(())
}
