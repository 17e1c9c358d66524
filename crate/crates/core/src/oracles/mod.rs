//! Brute-force verifiers independent of the closed-form formulas.

mod kernel;
pub mod sample;
mod suite;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::scalars::Fp;

pub use kernel::{
    frobenius_twisted_derivative, kernel_bruteforce, nullspace_mod_p, ExponentWindow,
    MAX_WINDOW_MONOMIALS,
};
pub use suite::{
    corrupted_images, defining_relations, group_law, kernel_checks, multi_index_products,
    product_action_consistency, pth_power_identity, relation_suite, relation_suite_with,
    round_trip, Multiplier, SuiteParams,
};

/// Outcome of [`action_equiv_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeOutcome {
    pub probes: usize,
    pub mismatch: Option<ExponentVector>,
}

impl ProbeOutcome {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares `op * x^m` with `reference(m)` on `probes` monomials drawn from
/// the window.
pub fn action_equiv_check<F>(
    op: &DiffOp,
    reference: F,
    probes: usize,
    window: &ExponentWindow,
    seed: u64,
) -> Result<ProbeOutcome>
where
    F: Fn(&ExponentVector) -> LaurentPoly,
{
    if window.nvars() != op.nvars() {
        return Err(Error::mismatch(
            "window dimension differs from the operator's",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let m = ExponentVector::new(
            window
                .lo()
                .iter()
                .zip(window.hi())
                .map(|(&l, &h)| rng.gen_range(l..=h))
                .collect(),
        );
        let got = op.act(&LaurentPoly::monomial(Fp::one(op.prime()), m.clone()))?;
        if got != reference(&m) {
            return Ok(ProbeOutcome {
                probes,
                mismatch: Some(m),
            });
        }
    }
    Ok(ProbeOutcome {
        probes,
        mismatch: None,
    })
}

/// One named family of checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockResult {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
}

impl BlockResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub blocks: Vec<BlockResult>,
}

#[derive(Serialize)]
struct Summary<'a> {
    passed: bool,
    checks: usize,
    failures: usize,
    blocks: &'a [BlockResult],
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.blocks.iter().all(BlockResult::passed)
    }

    pub fn checks(&self) -> usize {
        self.blocks.iter().map(|b| b.checks).sum()
    }

    pub fn failures(&self) -> usize {
        self.blocks.iter().map(|b| b.failures).sum()
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.blocks.extend(other.blocks);
    }

    /// One line per block, then a summary line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            let status = if b.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {}: {} checks, {} failures\n",
                b.name, b.checks, b.failures
            ));
            if let Some(c) = &b.first_counterexample {
                out.push_str(&format!("  first counterexample: {c}\n"));
            }
        }
        out.push_str(&format!(
            "summary: {} blocks, {} checks, {} failures, {}\n",
            self.blocks.len(),
            self.checks(),
            self.failures(),
            if self.passed() {
                "all passed"
            } else {
                "FAILED"
            }
        ));
        out
    }

    /// A JSON summary object.
    pub fn render_machine(&self) -> String {
        let summary = Summary {
            passed: self.passed(),
            checks: self.checks(),
            failures: self.failures(),
            blocks: &self.blocks,
        };
        serde_json::to_string_pretty(&summary).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::{sigma_image_divided, SigmaShift};
    use crate::scalars::{binom_int_mod_p, binom_padic, PadicInt, Prime};

    #[test]
    fn action_check_examples() {
        let p = Prime::new(3).unwrap();
        let window = ExponentWindow::cube(1, -12, 12).unwrap();
        let s = SigmaShift::from_ints(p, 4, &[5]).unwrap();
        for k in [1, 2, 3, 7] {
            let op = sigma_image_divided(&s, 0, k).unwrap();
            let reference = |m: &ExponentVector| {
                let shifted = PadicInt::from_int(m[0], p, 4).add(s.component(0)).unwrap();
                LaurentPoly::monomial(binom_padic(&shifted, k).unwrap(), m.plus(&[-(k as i64)]))
            };
            assert!(action_equiv_check(&op, reference, 40, &window, 1)
                .unwrap()
                .passed());
        }

        let d2 = DiffOp::divided(p, 1, 0, 2);
        let reference =
            |m: &ExponentVector| LaurentPoly::monomial(binom_int_mod_p(m[0], 2, p), m.plus(&[-2]));
        assert!(action_equiv_check(&d2, reference, 40, &window, 2)
            .unwrap()
            .passed());

        let d = DiffOp::divided(p, 1, 0, 1);
        let outcome = action_equiv_check(&d, |_| LaurentPoly::zero(p, 1), 40, &window, 2).unwrap();
        assert!(!outcome.passed());
    }

    #[test]
    fn report_rendering() {
        let report = SuiteReport {
            blocks: vec![
                BlockResult {
                    name: "a".into(),
                    checks: 3,
                    failures: 0,
                    first_counterexample: None,
                },
                BlockResult {
                    name: "b".into(),
                    checks: 2,
                    failures: 1,
                    first_counterexample: Some("x".into()),
                },
            ],
        };
        let text = report.render_text();
        assert!(
            text.starts_with("PASS a: 3 checks, 0 failures\nFAIL b: 2 checks, 1 failures\n  first")
        );
        assert!(text.ends_with("summary: 2 blocks, 5 checks, 1 failures, FAILED\n"));
        let json: serde_json::Value = serde_json::from_str(&report.render_machine()).unwrap();
        assert_eq!(json["passed"], false);
        assert_eq!(json["checks"], 5);
    }
}
