//! Images `σ_s(d^[k])` and their action on monomials, checked against
//! `x^m -> C(m + s, k) x^{m-k}`.

use divpow::autgroup::{sigma_apply, sigma_image_divided, SigmaShift};
use divpow::oracles::{action_equiv_check, ExponentWindow};
use divpow::{binom_padic, DiffOp, ExponentVector, LaurentPoly, PadicInt, Prime};

fn main() -> divpow::Result<()> {
    let p = Prime::new(2)?;
    let precision = 4;
    let s = SigmaShift::from_digits(p, precision, &[vec![1, 1]])?;
    println!("s = {}", s.component(0));
    for k in [1, 2, 3, 4, 5] {
        println!("sigma_s(d1[{k}]) = {}", sigma_image_divided(&s, 0, k)?);
    }

    let window = ExponentWindow::cube(1, -20, 20)?;
    for k in [1, 2, 4, 7] {
        let op = sigma_image_divided(&s, 0, k)?;
        let reference = |m: &ExponentVector| {
            let shifted = PadicInt::from_int(m[0], p, precision)
                .add(s.component(0))
                .expect("same precision");
            LaurentPoly::monomial(
                binom_padic(&shifted, k).expect("enough digits"),
                m.plus(&[-(k as i64)]),
            )
        };
        let outcome = action_equiv_check(&op, reference, 50, &window, 7)?;
        println!(
            "k = {k}: action matches C(m + s, k) on {} probes: {}",
            outcome.probes,
            outcome.passed()
        );
    }

    // σ_s is a ring map, so it can be applied to any operator
    let q = Prime::new(3)?;
    let t = SigmaShift::from_ints(q, 3, &[2, -1])?;
    let op = DiffOp::from_terms(
        q,
        2,
        [(1, vec![1, 0], vec![1, 1]), (2, vec![0, -1], vec![0, 3])],
    )?;
    println!(
        "\np = 3, s = (2, -1): sigma_s({op}) = {}",
        sigma_apply(&t, &op)?
    );
    Ok(())
}
