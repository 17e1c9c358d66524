//! Monomial automorphisms of `L_n`: `τ(x_j) = λ_j x^{A e_j}` with
//! `A ∈ GL_n(Z)` and `λ ∈ (F_p^*)^n`. These are all of `Aut(L_n)`.

use crate::diffop::{normal_form_from_action, DiffOp, RecoveryOptions};
use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::scalars::{Fp, Prime};

use super::images::GeneratorImages;
use super::sigma::level_order;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialAut {
    /// Row-major; column `j` is the exponent vector of `τ(x_j)`.
    matrix: Vec<Vec<i64>>,
    lambda: Vec<Fp>,
}

impl MonomialAut {
    pub fn new(matrix: Vec<Vec<i64>>, lambda: Vec<Fp>) -> Result<Self> {
        let n = lambda.len();
        if n == 0 || matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::mismatch("matrix must be n x n with n scalars"));
        }
        let p = lambda[0].prime();
        if lambda.iter().any(|l| l.prime() != p) {
            return Err(Error::mismatch("scalars over different primes"));
        }
        if lambda.iter().any(|l| l.is_zero()) {
            return Err(Error::Invalid(
                "monomial automorphism scalars must be nonzero".into(),
            ));
        }
        let det = determinant(&matrix);
        if det != 1 && det != -1 {
            return Err(Error::NotGL(det));
        }
        Ok(MonomialAut { matrix, lambda })
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect();
        MonomialAut {
            matrix,
            lambda: vec![Fp::one(p); n],
        }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn lambda(&self) -> &[Fp] {
        &self.lambda
    }

    pub fn nvars(&self) -> usize {
        self.lambda.len()
    }

    pub fn prime(&self) -> Prime {
        self.lambda[0].prime()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.prime(), self.nvars())
    }

    /// `τ(x^γ) = (Π λ_j^{γ_j}) x^{Aγ}`, as `(scalar, exponent)`.
    pub fn image_of_monomial(&self, gamma: &[i64]) -> (Fp, ExponentVector) {
        let n = self.nvars();
        let mut c = Fp::one(self.prime());
        for (l, &g) in self.lambda.iter().zip(gamma) {
            c = c * l.powi(g).expect("nonzero scalar");
        }
        let e = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[i][j] * gamma[j]).sum())
            .collect();
        (c, ExponentVector::new(e))
    }

    pub fn apply_laurent(&self, f: &LaurentPoly) -> LaurentPoly {
        f.map_monomials(|g| {
            let (c, e) = self.image_of_monomial(g.as_slice());
            (c.value(), e)
        })
    }

    pub fn inverse(&self) -> MonomialAut {
        let n = self.nvars();
        let inv = integer_inverse(&self.matrix);
        // τ^{-1}(x_j) = λ'_j x^{A^{-1} e_j} with λ'_j = Π_i λ_i^{-(A^{-1})_{ij}}
        let lambda = (0..n)
            .map(|j| {
                self.lambda
                    .iter()
                    .zip(&inv)
                    .fold(Fp::one(self.prime()), |c, (l, row)| {
                        c * l.powi(-row[j]).expect("nonzero scalar")
                    })
            })
            .collect();
        MonomialAut {
            matrix: inv,
            lambda,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MonomialAut) -> Result<MonomialAut> {
        if self.nvars() != other.nvars() || self.prime() != other.prime() {
            return Err(Error::mismatch(
                "monomial automorphisms over different rings",
            ));
        }
        let n = self.nvars();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        let lambda = (0..n)
            .map(|j| {
                let col: Vec<i64> = (0..n).map(|k| other.matrix[k][j]).collect();
                other.lambda[j] * self.image_of_monomial(&col).0
            })
            .collect();
        Ok(MonomialAut { matrix, lambda })
    }

    /// The conjugate `τ D τ^{-1}`, recovered from the action
    /// `f -> τ(D * τ^{-1}(f))`.
    pub fn conjugate(&self, op: &DiffOp, opts: RecoveryOptions) -> Result<DiffOp> {
        let (p, n) = (op.prime(), op.nvars());
        if p != self.prime() || n != self.nvars() {
            return Err(Error::mismatch(
                "automorphism and operator over different rings",
            ));
        }
        let Some(order) = op.order() else {
            return Ok(op.clone());
        };
        let inv = self.inverse();
        let action = |gamma: &ExponentVector| {
            let (c, e) = inv.image_of_monomial(gamma.as_slice());
            self.apply_laurent(&op.act_monomial(&e).scale(c))
        };
        normal_form_from_action(p, n, action, order, opts)
    }

    /// Generator images of `τ` lifted to `D(L_n)` at the given precision.
    pub fn lift(&self, precision: usize, opts: RecoveryOptions) -> Result<GeneratorImages> {
        let (p, n) = (self.prime(), self.nvars());
        let mut x_images = Vec::with_capacity(n);
        let mut xinv_images = Vec::with_capacity(n);
        for j in 0..n {
            let (c, e) = self.image_of_monomial(ExponentVector::unit(n, j, 1).as_slice());
            x_images.push(DiffOp::from_laurent(LaurentPoly::monomial(c, e.clone())));
            let cinv = c.inv().expect("nonzero scalar");
            xinv_images.push(DiffOp::from_laurent(LaurentPoly::monomial(
                cinv,
                e.scaled(-1),
            )));
        }
        let mut d_images = Vec::with_capacity(n);
        for i in 0..n {
            let mut levels = Vec::with_capacity(precision);
            for k in 0..precision {
                let gen = DiffOp::divided(p, n, i, level_order(p, k)?);
                levels.push(self.conjugate(&gen, opts)?);
            }
            d_images.push(levels);
        }
        GeneratorImages::new(p, n, precision, x_images, xinv_images, d_images)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<i64>]) -> i128 {
    let n = matrix.len();
    let mut m: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// Inverse of a unimodular integer matrix via the adjugate.
fn integer_inverse(matrix: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = matrix.len();
    let det = determinant(matrix);
    debug_assert!(det == 1 || det == -1);
    let minor = |r: usize, c: usize| -> Vec<Vec<i64>> {
        matrix
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect()
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj[i][j] = (-1)^{i+j} det(minor(j, i))
                    let cof = if (i + j) % 2 == 0 { 1 } else { -1 } * determinant(&minor(j, i));
                    (cof * det) as i64
                })
                .collect()
        })
        .collect()
}
