//! Normal-form arithmetic in the ring of differential operators
//! `D(L_n) = ⊕_β L_n d^[β]`, coefficients written to the left of the
//! divided powers `d^[β] = Π d_i^{β_i} / β_i!`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{accumulate, write_monomial, ExponentVector, LaurentPoly};
use crate::scalars::{binom_int_raw, binom_nat_mod_p, digit_factorial, Fp, Prime};

/// Multi-index `β ∈ N^n` of a divided power `d^[β]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DividedIndex(Vec<u64>);

impl DividedIndex {
    pub fn new(entries: Vec<u64>) -> Self {
        DividedIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        DividedIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize, k: u64) -> Self {
        let mut v = vec![0; n];
        v[i] = k;
        DividedIndex(v)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

impl std::ops::Index<usize> for DividedIndex {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

type Parts = BTreeMap<DividedIndex, BTreeMap<ExponentVector, u32>>;

fn accumulate_part(parts: &mut Parts, p: Prime, beta: DividedIndex, gamma: ExponentVector, c: u32) {
    if c == 0 {
        return;
    }
    let inner = parts.entry(beta.clone()).or_default();
    accumulate(inner, p, gamma, c);
    if inner.is_empty() {
        parts.remove(&beta);
    }
}

/// Accumulates monomial terms `c * x^γ * d^[β]` into a normal form.
pub(crate) struct OpBuilder {
    p: Prime,
    n: usize,
    parts: Parts,
}

impl OpBuilder {
    pub(crate) fn new(p: Prime, n: usize) -> Self {
        OpBuilder {
            p,
            n,
            parts: Parts::new(),
        }
    }

    pub(crate) fn add(&mut self, beta: DividedIndex, gamma: ExponentVector, c: u32) {
        accumulate_part(&mut self.parts, self.p, beta, gamma, c);
    }

    pub(crate) fn finish(self) -> DiffOp {
        DiffOp::from_parts(self.p, self.n, self.parts)
    }
}

/// An element of `D(L_n)` in normal form `Σ f_β d^[β]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    p: Prime,
    n: usize,
    parts: BTreeMap<DividedIndex, LaurentPoly>,
}

impl DiffOp {
    pub fn zero(p: Prime, n: usize) -> Self {
        DiffOp {
            p,
            n,
            parts: BTreeMap::new(),
        }
    }

    pub fn one(p: Prime, n: usize) -> Self {
        Self::from_laurent(LaurentPoly::one(p, n))
    }

    pub fn from_laurent(f: LaurentPoly) -> Self {
        let (p, n) = (f.prime(), f.nvars());
        let mut parts = BTreeMap::new();
        if !f.is_zero() {
            parts.insert(DividedIndex::zeros(n), f);
        }
        DiffOp { p, n, parts }
    }

    /// `d_i^[k]`.
    pub fn divided(p: Prime, n: usize, i: usize, k: u64) -> Self {
        Self::term(
            Fp::one(p),
            ExponentVector::zeros(n),
            DividedIndex::unit(n, i, k),
        )
    }

    /// `x_i^e`.
    pub fn x_power(p: Prime, n: usize, i: usize, e: i64) -> Self {
        Self::from_laurent(LaurentPoly::variable_power(p, n, i, e))
    }

    /// `c * x^γ * d^[β]`.
    pub fn term(c: Fp, gamma: ExponentVector, beta: DividedIndex) -> Self {
        assert_eq!(
            gamma.len(),
            beta.0.len(),
            "exponent and divided index lengths differ"
        );
        let p = c.prime();
        let n = gamma.len();
        let mut parts = BTreeMap::new();
        if !c.is_zero() {
            parts.insert(beta, LaurentPoly::monomial(c, gamma));
        }
        DiffOp { p, n, parts }
    }

    /// Builds an operator from `(coefficient, x exponents, divided index)` triples.
    pub fn from_terms<I>(p: Prime, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Vec<i64>, Vec<u64>)>,
    {
        let mut parts = Parts::new();
        for (c, x, d) in terms {
            if x.len() != n || d.len() != n {
                return Err(Error::mismatch(format!(
                    "term with exponent lengths {}/{} in a ring with {n} variables",
                    x.len(),
                    d.len()
                )));
            }
            accumulate_part(
                &mut parts,
                p,
                DividedIndex(d),
                ExponentVector::new(x),
                p.reduce_i64(c),
            );
        }
        Ok(Self::from_parts(p, n, parts))
    }

    fn from_parts(p: Prime, n: usize, parts: Parts) -> Self {
        let parts = parts
            .into_iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(b, t)| (b, LaurentPoly::from_map(p, n, t)))
            .collect();
        DiffOp { p, n, parts }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The coefficient polynomials `f_β`, ordered by `β`.
    pub fn parts(&self) -> impl Iterator<Item = (&DividedIndex, &LaurentPoly)> {
        self.parts.iter()
    }

    pub fn part(&self, beta: &DividedIndex) -> Option<&LaurentPoly> {
        self.parts.get(beta)
    }

    /// All monomial terms `(c, γ, β)`, ordered by `(β, γ)`.
    pub fn terms(&self) -> impl Iterator<Item = (Fp, &ExponentVector, &DividedIndex)> {
        self.parts
            .iter()
            .flat_map(|(b, f)| f.terms().map(move |(g, c)| (c, g, b)))
    }

    pub fn num_terms(&self) -> usize {
        self.parts.values().map(LaurentPoly::num_terms).sum()
    }

    /// `max |β|` over the nonzero parts; `None` for the zero operator.
    pub fn order(&self) -> Option<u64> {
        self.parts.keys().map(DividedIndex::total).max()
    }

    /// The order-zero part when `self ∈ L_n`.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        match self.order() {
            None => Some(LaurentPoly::zero(self.p, self.n)),
            Some(0) => self.parts.values().next().cloned(),
            Some(_) => None,
        }
    }

    /// True when all coefficients lie in `F_p[x]`, i.e. `self ∈ D(P_n)`.
    pub fn is_polynomial_coefficient(&self) -> bool {
        self.parts.values().all(LaurentPoly::is_polynomial)
    }

    fn check_compatible(&self, p: Prime, n: usize) -> Result<()> {
        if self.p != p {
            return Err(Error::mismatch(format!("primes {} and {}", self.p, p)));
        }
        if self.n != n {
            return Err(Error::mismatch(format!("{} and {} variables", self.n, n)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_compatible(other.p, other.n)?;
        let mut parts = self.parts.clone();
        for (b, f) in &other.parts {
            let sum = match parts.get(b) {
                Some(g) => g + f,
                None => f.clone(),
            };
            if sum.is_zero() {
                parts.remove(b);
            } else {
                parts.insert(b.clone(), sum);
            }
        }
        Ok(DiffOp {
            p: self.p,
            n: self.n,
            parts,
        })
    }

    pub fn scale(&self, c: Fp) -> DiffOp {
        assert_eq!(c.prime(), self.p, "scalar over a different prime");
        if c.is_zero() {
            return DiffOp::zero(self.p, self.n);
        }
        let parts = self
            .parts
            .iter()
            .map(|(b, f)| (b.clone(), f.scale(c)))
            .collect();
        DiffOp {
            p: self.p,
            n: self.n,
            parts,
        }
    }

    /// Left multiplication by a Laurent polynomial.
    pub fn left_mul_laurent(&self, f: &LaurentPoly) -> Result<DiffOp> {
        self.check_compatible(f.prime(), f.nvars())?;
        let parts = self
            .parts
            .iter()
            .map(|(b, g)| (b.clone(), f * g))
            .filter(|(_, g)| !g.is_zero())
            .collect();
        Ok(DiffOp {
            p: self.p,
            n: self.n,
            parts,
        })
    }

    /// Normal form of `self * other`.
    ///
    /// Uses `d^[β] x^δ = Σ_{j≤β} C(δ, j) x^{δ-j} d^[β-j]` followed by
    /// `d^[a] d^[ε] = C(a+ε, ε) d^[a+ε]`.
    pub fn checked_mul(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_compatible(other.p, other.n)?;
        let (p, n) = (self.p, self.n);
        let mut parts = Parts::new();
        // per-variable (j_i, C(δ_i, j_i)) with nonzero binomial
        let mut choices: Vec<Vec<(u64, u32)>> = vec![Vec::new(); n];
        let mut odometer = vec![0usize; n];
        for (beta, f) in &self.parts {
            for (eps, g) in &other.parts {
                for (delta, &cg) in g.raw_terms() {
                    for i in 0..n {
                        choices[i].clear();
                        let top = if delta[i] >= 0 {
                            beta[i].min(delta[i] as u64)
                        } else {
                            beta[i]
                        };
                        for j in 0..=top {
                            let c = binom_int_raw(delta[i], j, p);
                            if c != 0 {
                                choices[i].push((j, c));
                            }
                        }
                    }
                    if choices.iter().any(Vec::is_empty) {
                        continue;
                    }
                    odometer.iter_mut().for_each(|o| *o = 0);
                    loop {
                        let mut c = cg;
                        let mut new_beta = Vec::with_capacity(n);
                        let mut shift = Vec::with_capacity(n);
                        for i in 0..n {
                            let (j, cj) = choices[i][odometer[i]];
                            let rest = beta[i] - j;
                            let merge = binom_nat_mod_p(rest + eps[i], eps[i], p).value();
                            c = p.mul(c, p.mul(cj, merge));
                            new_beta.push(rest + eps[i]);
                            shift.push(delta[i] - j as i64);
                        }
                        if c != 0 {
                            let nb = DividedIndex(new_beta);
                            for (gamma, &cf) in f.raw_terms() {
                                accumulate_part(
                                    &mut parts,
                                    p,
                                    nb.clone(),
                                    gamma.plus(&shift),
                                    p.mul(cf, c),
                                );
                            }
                        }
                        // advance odometer
                        let mut i = 0;
                        while i < n {
                            odometer[i] += 1;
                            if odometer[i] < choices[i].len() {
                                break;
                            }
                            odometer[i] = 0;
                            i += 1;
                        }
                        if i == n {
                            break;
                        }
                    }
                }
            }
        }
        Ok(Self::from_parts(p, n, parts))
    }

    /// `self^k` by repeated multiplication.
    pub fn pow(&self, k: u64) -> DiffOp {
        let mut acc = DiffOp::one(self.p, self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The action `D * f` on `L_n`.
    pub fn act(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_compatible(f.prime(), f.nvars())?;
        let mut acc = LaurentPoly::zero(self.p, self.n);
        for (beta, coeff) in &self.parts {
            let mut g = f.clone();
            for i in 0..self.n {
                if beta[i] > 0 {
                    g = g.divided_partial(i, beta[i]);
                }
                if g.is_zero() {
                    break;
                }
            }
            if !g.is_zero() {
                acc = &acc + &(coeff * &g);
            }
        }
        Ok(acc)
    }

    /// `D * x^γ`.
    pub fn act_monomial(&self, gamma: &ExponentVector) -> LaurentPoly {
        assert_eq!(gamma.len(), self.n);
        let mut terms = BTreeMap::new();
        for (beta, coeff) in &self.parts {
            let mut c = 1 % self.p.get();
            for i in 0..self.n {
                c = self.p.mul(c, binom_int_raw(gamma[i], beta[i], self.p));
                if c == 0 {
                    break;
                }
            }
            if c == 0 {
                continue;
            }
            let shift: Vec<i64> = (0..self.n).map(|i| gamma[i] - beta[i] as i64).collect();
            for (e, &v) in coeff.raw_terms() {
                accumulate(&mut terms, self.p, e.plus(&shift), self.p.mul(v, c));
            }
        }
        LaurentPoly::from_map(self.p, self.n, terms)
    }

    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        Ok(&self.checked_mul(other)? - &other.checked_mul(self)?)
    }
}

/// Image of `d_i^[j]` from the images `levels[k]` of `d_i^[p^k]`:
/// `Π_k levels[k]^{j_k} / j_k!` over the base-p digits `j_k` of `j`.
pub fn divided_image_from_levels(p: Prime, n: usize, levels: &[DiffOp], j: u64) -> Result<DiffOp> {
    let needed = p.digit_len(j);
    if needed > levels.len() {
        return Err(Error::InsufficientPrecision {
            needed,
            available: levels.len(),
        });
    }
    let q = p.get() as u64;
    let mut acc = DiffOp::one(p, n);
    let mut rest = j;
    let mut k = 0;
    while rest > 0 {
        let d = (rest % q) as u32;
        if d > 0 {
            let level = &levels[k];
            level.check_compatible(p, n)?;
            let inv = p.inv(digit_factorial(p, d));
            acc = acc
                .checked_mul(&level.pow(d as u64))?
                .scale(Fp::from_raw(inv, p));
        }
        rest /= q;
        k += 1;
    }
    Ok(acc)
}

/// Knobs for [`normal_form_from_action`].
#[derive(Debug, Clone, Copy)]
pub struct RecoveryOptions {
    /// Extra random monomials replayed against the recovered form.
    pub probes: usize,
    pub seed: u64,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions { probes: 8, seed: 0 }
    }
}

/// Recovers the normal form of an operator of order at most `bound` from its
/// action on monomials, by triangular elimination over `δ ≥ 0, |δ| ≤ bound`:
/// `f_δ = D*x^δ - Σ_{β<δ} C(δ,β) f_β x^{δ-β}`.
pub fn normal_form_from_action<F>(
    p: Prime,
    n: usize,
    action: F,
    bound: u64,
    opts: RecoveryOptions,
) -> Result<DiffOp>
where
    F: Fn(&ExponentVector) -> LaurentPoly,
{
    let mut recovered: Vec<(Vec<u64>, LaurentPoly)> = Vec::new();
    for delta in simplex_points(n, bound) {
        let dexp = ExponentVector::new(delta.iter().map(|&d| d as i64).collect());
        let mut r = action(&dexp);
        if r.prime() != p || r.nvars() != n {
            return Err(Error::mismatch(
                "action returned a polynomial over another ring",
            ));
        }
        for (beta, f) in &recovered {
            if !beta.iter().zip(&delta).all(|(b, d)| b <= d) {
                continue;
            }
            let mut c = 1 % p.get();
            for i in 0..n {
                c = p.mul(c, binom_nat_mod_p(delta[i], beta[i], p).value());
            }
            if c == 0 {
                continue;
            }
            let shift: Vec<i64> = (0..n).map(|i| (delta[i] - beta[i]) as i64).collect();
            r = &r - &f.mul_monomial_raw(c, &shift);
        }
        if !r.is_zero() {
            recovered.push((delta, r));
        }
    }
    let parts = recovered
        .into_iter()
        .map(|(b, f)| (DividedIndex(b), f))
        .collect();
    let op = DiffOp { p, n, parts };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let radius = bound as i64 + 3;
    for _ in 0..opts.probes {
        let gamma = ExponentVector::new((0..n).map(|_| rng.gen_range(-radius..=radius)).collect());
        if op.act_monomial(&gamma) != action(&gamma) {
            return Err(Error::InconsistentAction {
                exponent: gamma.into_vec(),
            });
        }
    }
    Ok(op)
}

/// Points of `{δ ∈ N^n : |δ| ≤ bound}` in lexicographic order.
fn simplex_points(n: usize, bound: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, left: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(n, left - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, bound, &mut Vec::with_capacity(n), &mut out);
    out
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        self.checked_add(rhs)
            .expect("operators over different rings")
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        let parts = self.parts.iter().map(|(b, f)| (b.clone(), -f)).collect();
        DiffOp {
            p: self.p,
            n: self.n,
            parts,
        }
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.checked_mul(rhs)
            .expect("operators over different rings")
    }
}

impl fmt::Display for DiffOp {
    /// Highest order first, e.g. `x1*d1[2] + d1[1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&DividedIndex> = self.parts.keys().collect();
        keys.sort_by(|a, b| b.total().cmp(&a.total()).then_with(|| b.cmp(a)));
        let mut first = true;
        for beta in keys {
            for (gamma, c) in self.parts[beta].terms().rev() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                let bare = gamma.as_slice().iter().all(|&a| a == 0) && beta.is_zero();
                let mut wrote = false;
                if c.value() != 1 || bare {
                    write!(f, "{c}")?;
                    wrote = true;
                }
                if gamma.as_slice().iter().any(|&a| a != 0) {
                    if wrote {
                        f.write_str("*")?;
                    }
                    write_monomial(f, gamma.as_slice())?;
                    wrote = true;
                }
                for (i, &b) in beta.as_slice().iter().enumerate() {
                    if b == 0 {
                        continue;
                    }
                    if wrote {
                        f.write_str("*")?;
                    }
                    write!(f, "d{}[{}]", i + 1, b)?;
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}
