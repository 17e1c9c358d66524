//! Recovers `s` digit by digit from the generator images of `σ_s`, and
//! rejects images that are not of that form.

use divpow::autgroup::{build_sigma, extract_digits, SigmaShift};
use divpow::oracles::corrupted_images;
use divpow::Prime;

fn main() -> divpow::Result<()> {
    let p = Prime::new(3)?;
    let precision = 5;
    let s = SigmaShift::from_ints(p, precision, &[100, -7])?;
    let g = build_sigma(&s)?;
    println!("images of sigma_s, p = 3, s = (100, -7):");
    for k in 0..3 {
        println!("  d1[3^{k}] -> {}", g.d_image(0, k));
    }
    let report = g.validate();
    println!(
        "relations preserved: {} ({} checks)",
        report.all_passed(),
        report.entries.len()
    );

    let found = extract_digits(&g)?;
    for (i, c) in found.components().iter().enumerate() {
        println!("s[{}] = {c}   digits {:?}", i + 1, c.digits());
    }
    assert_eq!(found, s);

    let bad = corrupted_images(p, 2, precision, 1)?;
    match extract_digits(&bad) {
        Err(e) => println!("d2 -> d2 + x2: {e}"),
        Ok(s) => println!("unexpectedly accepted: {s:?}"),
    }
    Ok(())
}
