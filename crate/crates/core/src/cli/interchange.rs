//! JSON interchange for operators and generator images.
//!
//! Operators: `{"p", "n", "terms": [{"coeff", "x_exp", "d_exp"}]}`.
//! Images: `{"p", "n", "precision", "x_images", "xinv_images", "d_images"}`,
//! each image a term list; `d_images[i][k]` is the image of `d_{i+1}^[p^k]`.
//! Terms are listed in the operator's canonical (ascending) order.

use serde::{Deserialize, Serialize};

use crate::autgroup::GeneratorImages;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::scalars::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: u32,
    pub x_exp: Vec<i64>,
    pub d_exp: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub p: u64,
    pub n: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImagesRecord {
    pub p: u64,
    pub n: usize,
    pub precision: usize,
    pub x_images: Vec<Vec<TermRecord>>,
    pub xinv_images: Vec<Vec<TermRecord>>,
    pub d_images: Vec<Vec<Vec<TermRecord>>>,
}

fn to_terms(op: &DiffOp) -> Vec<TermRecord> {
    op.terms()
        .map(|(c, gamma, beta)| TermRecord {
            coeff: c.value(),
            x_exp: gamma.as_slice().to_vec(),
            d_exp: beta.as_slice().to_vec(),
        })
        .collect()
}

fn from_terms(p: Prime, n: usize, terms: &[TermRecord]) -> Result<DiffOp> {
    if terms.iter().any(|t| t.coeff >= p.get()) {
        return Err(Error::Invalid(format!("coefficients must lie in [0, {p})")));
    }
    DiffOp::from_terms(
        p,
        n,
        terms
            .iter()
            .map(|t| (t.coeff as i64, t.x_exp.clone(), t.d_exp.clone())),
    )
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Invalid(format!("malformed interchange file: {e}")))
}

pub fn operator_to_json(op: &DiffOp) -> String {
    let record = OperatorRecord {
        p: op.prime().get() as u64,
        n: op.nvars(),
        terms: to_terms(op),
    };
    serde_json::to_string_pretty(&record).expect("records serialize")
}

pub fn operator_from_json(text: &str) -> Result<DiffOp> {
    let record: OperatorRecord = parse_json(text)?;
    from_terms(Prime::new(record.p)?, record.n, &record.terms)
}

pub fn images_to_json(g: &GeneratorImages) -> String {
    let record = ImagesRecord {
        p: g.prime().get() as u64,
        n: g.nvars(),
        precision: g.precision(),
        x_images: g.x_images().iter().map(to_terms).collect(),
        xinv_images: g.xinv_images().iter().map(to_terms).collect(),
        d_images: g
            .d_images()
            .iter()
            .map(|levels| levels.iter().map(to_terms).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&record).expect("records serialize")
}

pub fn images_from_json(text: &str) -> Result<GeneratorImages> {
    let record: ImagesRecord = parse_json(text)?;
    let (p, n) = (Prime::new(record.p)?, record.n);
    let ops = |list: &[Vec<TermRecord>]| {
        list.iter()
            .map(|t| from_terms(p, n, t))
            .collect::<Result<Vec<_>>>()
    };
    GeneratorImages::new(
        p,
        n,
        record.precision,
        ops(&record.x_images)?,
        ops(&record.xinv_images)?,
        record
            .d_images
            .iter()
            .map(|levels| ops(levels))
            .collect::<Result<_>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgroup::{build_sigma, SigmaShift};

    #[test]
    fn operator_round_trip() {
        let p = Prime::new(5).unwrap();
        let op = DiffOp::from_terms(
            p,
            2,
            [(3, vec![1, -2], vec![0, 4]), (1, vec![0, 0], vec![0, 0])],
        )
        .unwrap();
        let text = operator_to_json(&op);
        assert_eq!(operator_from_json(&text).unwrap(), op);
        assert_eq!(operator_to_json(&operator_from_json(&text).unwrap()), text);
    }

    #[test]
    fn operator_format() {
        let p = Prime::new(3).unwrap();
        let op = DiffOp::divided(p, 1, 0, 2);
        let compact: serde_json::Value = serde_json::from_str(&operator_to_json(&op)).unwrap();
        assert_eq!(
            compact.to_string(),
            r#"{"n":1,"p":3,"terms":[{"coeff":1,"d_exp":[2],"x_exp":[0]}]}"#
        );
    }

    #[test]
    fn images_round_trip() {
        let p = Prime::new(2).unwrap();
        let g = build_sigma(&SigmaShift::from_ints(p, 3, &[5, -1]).unwrap()).unwrap();
        let text = images_to_json(&g);
        assert_eq!(images_from_json(&text).unwrap(), g);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(operator_from_json("{"), Err(Error::Invalid(_))));
        let bad = r#"{"p":3,"n":1,"terms":[{"coeff":4,"x_exp":[0],"d_exp":[0]}]}"#;
        assert!(operator_from_json(bad).is_err());
        let not_prime = r#"{"p":4,"n":1,"terms":[]}"#;
        assert_eq!(operator_from_json(not_prime), Err(Error::InvalidPrime(4)));
    }
}
