//! Writes operators and generator images in the JSON interchange format and
//! reads them back.

use divpow::autgroup::{build_sigma, SigmaShift};
use divpow::cli::{
    images_from_json, images_to_json, normalize, operator_from_json, operator_to_json,
};
use divpow::Prime;

fn main() -> divpow::Result<()> {
    let p = Prime::new(3)?;
    let op = normalize("d1[2]*x1 + 2*x1^-1*d2[1]", p, 2)?;
    let text = operator_to_json(&op);
    println!("{op}\n{text}");
    assert_eq!(operator_from_json(&text)?, op);

    let g = build_sigma(&SigmaShift::from_digits(Prime::new(2)?, 2, &[vec![1, 1]])?)?;
    let text = images_to_json(&g);
    println!("{text}");
    assert_eq!(images_from_json(&text)?, g);
    Ok(())
}
