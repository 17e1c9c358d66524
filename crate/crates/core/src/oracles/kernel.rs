//! Windowed kernel of `f -> d_i^{p-1} f + f^p` by dense elimination over F_p.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::scalars::{Fp, Prime};

/// Window sizes above this many monomials are refused.
pub const MAX_WINDOW_MONOMIALS: usize = 10_000;

/// Per-variable exponent bounds `lo_i <= e_i <= hi_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentWindow {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl ExponentWindow {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::Invalid(
                "window bounds need one entry per variable".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::Invalid("window has lo > hi".into()));
        }
        Ok(ExponentWindow { lo, hi })
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn nvars(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn size(&self) -> usize {
        self.lo
            .iter()
            .zip(&self.hi)
            .try_fold(1usize, |acc, (l, h)| acc.checked_mul((h - l + 1) as usize))
            .unwrap_or(usize::MAX)
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        e.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| l <= v && v <= h)
    }

    /// All exponent vectors in the window, lexicographically.
    pub fn points(&self) -> Vec<ExponentVector> {
        let mut out = vec![Vec::new()];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (*l..=*h).map(move |v| {
                        let mut next = prefix.clone();
                        next.push(v);
                        next
                    })
                })
                .collect();
        }
        out.into_iter().map(ExponentVector::new).collect()
    }
}

/// The map `f -> (-1) d_i^[p-1] f + f^p`, i.e. `d_i^{p-1} + F`.
pub fn frobenius_twisted_derivative(f: &LaurentPoly, i: usize) -> LaurentPoly {
    let p = f.prime();
    let deriv = f.divided_partial(i, p.get() as u64 - 1);
    &f.frobenius() - &deriv
}

/// A basis of the kernel of `d_i^{p-1} + F` restricted to the span of the
/// window's monomials. Basis vectors are in reduced echelon form: each has
/// coefficient 1 on its own free monomial and 0 on the others.
pub fn kernel_bruteforce(
    p: Prime,
    n: usize,
    i: usize,
    window: &ExponentWindow,
) -> Result<Vec<LaurentPoly>> {
    if window.nvars() != n {
        return Err(Error::mismatch(
            "window dimension differs from the variable count",
        ));
    }
    if i >= n {
        return Err(Error::Invalid(format!(
            "variable index {} out of range",
            i + 1
        )));
    }
    let size = window.size();
    if size > MAX_WINDOW_MONOMIALS {
        return Err(Error::WindowTooLarge {
            size,
            limit: MAX_WINDOW_MONOMIALS,
        });
    }
    let columns = window.points();
    let mut rows: BTreeMap<ExponentVector, usize> = BTreeMap::new();
    let mut entries: Vec<Vec<(usize, u32)>> = Vec::with_capacity(columns.len());
    for e in &columns {
        let image = frobenius_twisted_derivative(&LaurentPoly::monomial(Fp::one(p), e.clone()), i);
        let col = image
            .terms()
            .map(|(g, c)| {
                let next = rows.len();
                (*rows.entry(g.clone()).or_insert(next), c.value())
            })
            .collect();
        entries.push(col);
    }
    let mut matrix = vec![vec![0u32; columns.len()]; rows.len()];
    for (j, col) in entries.iter().enumerate() {
        for &(r, c) in col {
            matrix[r][j] = c;
        }
    }
    let basis = nullspace_mod_p(matrix, columns.len(), p);
    Ok(basis
        .into_iter()
        .map(|v| {
            let terms = columns
                .iter()
                .zip(&v)
                .filter(|(_, &c)| c != 0)
                .map(|(e, &c)| (e.as_slice().to_vec(), c as i64));
            LaurentPoly::from_terms(p, n, terms).expect("window exponents have length n")
        })
        .collect())
}

/// Right nullspace of a dense matrix over F_p.
pub fn nullspace_mod_p(mut m: Vec<Vec<u32>>, cols: usize, p: Prime) -> Vec<Vec<u32>> {
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = p.inv(m[r][c]);
        for v in m[r].iter_mut() {
            *v = p.mul(*v, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = p.add(*v, p.neg(p.mul(factor, pv)));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = p.neg(m[row][f]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn nullspace_small() {
        let q = p(5);
        // x + 2y + 3z = 0 over F_5
        let basis = nullspace_mod_p(vec![vec![1, 2, 3]], 3, q);
        assert_eq!(basis, vec![vec![3, 1, 0], vec![2, 0, 1]]);
        // full rank
        assert!(nullspace_mod_p(vec![vec![1, 0], vec![0, 1]], 2, q).is_empty());
    }

    #[test]
    fn kernel_examples() {
        let q = p(3);
        let w = ExponentWindow::cube(1, -6, 6).unwrap();
        assert_eq!(
            kernel_bruteforce(q, 1, 0, &w).unwrap(),
            vec![LaurentPoly::variable_power(q, 1, 0, -1)]
        );
        let poly_only = ExponentWindow::cube(1, 0, 6).unwrap();
        assert!(kernel_bruteforce(q, 1, 0, &poly_only).unwrap().is_empty());

        let q2 = p(2);
        let w2 = ExponentWindow::cube(2, -4, 4).unwrap();
        assert_eq!(
            kernel_bruteforce(q2, 2, 0, &w2).unwrap(),
            vec![LaurentPoly::variable_power(q2, 2, 0, -1)]
        );
    }

    #[test]
    fn window_limits() {
        let w = ExponentWindow::cube(2, -100, 100).unwrap();
        assert_eq!(
            kernel_bruteforce(p(3), 2, 0, &w),
            Err(Error::WindowTooLarge {
                size: 201 * 201,
                limit: MAX_WINDOW_MONOMIALS
            })
        );
        assert!(ExponentWindow::new(vec![1], vec![0]).is_err());
    }
}
