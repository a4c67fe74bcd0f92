//! Hilbert functions of the Artinian algebras
//!
//! * `A = S / (x_0^2 + ... + x_N^2, x_1^q, ..., x_N^q)`,
//! * `B = A / (x_0^q)`,
//! * `C = A / (I : x_0^q)`,
//!
//! the alternating sums `γ_N` built from `dim A`, their closed forms via the
//! `w_k`/`u_k` recursions, and the binomial determinant used in the
//! ideal-quotient argument. Every closed formula has a brute-force
//! counterpart computed from Macaulay matrices in [`crate::graded`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use crate::context::QuadricContext;
use crate::algebra::{binomial, factorial, pow2, Polynomial, Prime};
use crate::context::d_index;
use crate::error::{Error, Result};
use crate::graded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    A,
    B,
    C,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::A => "A",
            Algebra::B => "B",
            Algebra::C => "C",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Formula,
    BruteForce,
}

/// Degree-indexed dimensions of one of the algebras, with where they came
/// from. Degrees outside the support are simply absent.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertTable {
    pub algebra: Algebra,
    pub context: QuadricContext,
    pub dims: BTreeMap<i64, BigInt>,
    pub source: Source,
}

impl HilbertTable {
    pub fn get(&self, i: i64) -> BigInt {
        self.dims.get(&i).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigInt {
        self.dims.values().sum()
    }
}

/// Coefficient of `t^i` in `((1 - t^q)/(1 - t))^N`.
pub fn alpha(i: i64, big_n: u32, q: u64) -> BigInt {
    if i < 0 {
        return BigInt::zero();
    }
    let n = big_n as i64;
    let q = q as i64;
    (0..=n)
        .take_while(|&j| i - j * q >= 0)
        .map(|j| {
            let term = binomial(n, j) * binomial(i - j * q + n - 1, n - 1);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// Highest degree in which `A` is nonzero: `N(q - 1) + 1`.
pub fn a_top_degree(big_n: u32, q: u64) -> i64 {
    big_n as i64 * (q as i64 - 1) + 1
}

/// `dim A_i` for the algebra in `N + 1` variables with Frobenius power `q`.
pub fn dim_a_nq(big_n: u32, q: u64, i: i64) -> BigInt {
    alpha(i, big_n, q) + alpha(i - 1, big_n, q)
}

pub fn dim_a(ctx: &QuadricContext, i: i64) -> BigInt {
    dim_a_nq(ctx.big_n(), ctx.q(), i)
}

/// `dim B_i`, valid for `q = p`.
pub fn dim_b(ctx: &QuadricContext, i: i64) -> Result<BigInt> {
    ctx.require_single_frobenius()?;
    Ok(dim_b_unchecked(ctx, i))
}

fn dim_b_unchecked(ctx: &QuadricContext, i: i64) -> BigInt {
    let d = ctx.d_pivot();
    let p = ctx.q() as i64;
    if i < 0 {
        return BigInt::zero();
    }
    if i <= d + p {
        (0..)
            .map(|j| i - j * p)
            .take_while(|&k| k >= 0)
            .enumerate()
            .map(|(j, k)| if j % 2 == 0 { dim_a(ctx, k) } else { -dim_a(ctx, k) })
            .sum()
    } else {
        dim_b_unchecked(ctx, 2 * d - i)
    }
}

/// `dim C_i`, valid for `q = p`: equal to `dim B_i` up to the pivot degree
/// and symmetric about it.
pub fn dim_c(ctx: &QuadricContext, i: i64) -> Result<BigInt> {
    ctx.require_single_frobenius()?;
    let d = ctx.d_pivot();
    Ok(if i <= d { dim_b_unchecked(ctx, i) } else { dim_b_unchecked(ctx, 2 * d - i) })
}

/// Support `[lo, hi]` of the algebra's Hilbert function.
pub fn support(ctx: &QuadricContext, algebra: Algebra) -> (i64, i64) {
    match algebra {
        Algebra::A => (0, a_top_degree(ctx.big_n(), ctx.q())),
        Algebra::B | Algebra::C => (0, ctx.n() as i64 * (ctx.q() as i64 - 1)),
    }
}

pub fn formula_dim(ctx: &QuadricContext, algebra: Algebra, i: i64) -> Result<BigInt> {
    match algebra {
        Algebra::A => Ok(dim_a(ctx, i)),
        Algebra::B => dim_b(ctx, i),
        Algebra::C => dim_c(ctx, i),
    }
}

pub fn formula_table(ctx: &QuadricContext, algebra: Algebra) -> Result<HilbertTable> {
    let (lo, hi) = support(ctx, algebra);
    let mut dims = BTreeMap::new();
    for i in lo..=hi {
        let v = formula_dim(ctx, algebra, i)?;
        if !v.is_zero() {
            dims.insert(i, v);
        }
    }
    Ok(HilbertTable { algebra, context: *ctx, dims, source: Source::Formula })
}

/// Generators of `I = (x_0^2 + ... + x_N^2, x_1^q, ..., x_N^q)`.
pub fn a_generators(ctx: &QuadricContext) -> Vec<Polynomial> {
    let nvars = ctx.big_n() as usize + 1;
    let p = ctx.p();
    let q = ctx.q() as u32;
    let mut gens = vec![Polynomial::sum_of_squares(nvars, p, 0..nvars)];
    gens.extend((1..nvars).map(|i| Polynomial::var_pow(nvars, p, i, q)));
    gens
}

/// Generators of `I + (x_0^q)`.
pub fn b_generators(ctx: &QuadricContext) -> Vec<Polynomial> {
    let mut gens = a_generators(ctx);
    let nvars = ctx.big_n() as usize + 1;
    gens.push(Polynomial::var_pow(nvars, ctx.p(), 0, ctx.q() as u32));
    gens
}

/// Brute-force dimension from Macaulay matrices. Works for any `q`.
///
/// `C_i` is the image of multiplication by `x_0^q` from `A_i` to
/// `A_{i+q}`, so its dimension is `dim A_{i+q} - dim B_{i+q}`.
pub fn brute_dim(ctx: &QuadricContext, algebra: Algebra, i: i64, max_columns: usize) -> Result<BigInt> {
    if i < 0 {
        return Ok(BigInt::zero());
    }
    let d = i as u32;
    match algebra {
        Algebra::A => graded::quotient_dim(&a_generators(ctx), d, max_columns),
        Algebra::B => graded::quotient_dim(&b_generators(ctx), d, max_columns),
        Algebra::C => {
            let shifted = d + ctx.q() as u32;
            let a = graded::quotient_dim(&a_generators(ctx), shifted, max_columns)?;
            let b = graded::quotient_dim(&b_generators(ctx), shifted, max_columns)?;
            Ok(a - b)
        }
    }
}

/// `dim C_i` as the codimension of the colon slice `(I : x_0^q)_i`.
/// Slower than [`brute_dim`]; independent of the exact-sequence argument.
pub fn brute_dim_c_by_colon(ctx: &QuadricContext, i: i64, max_columns: usize) -> Result<BigInt> {
    if i < 0 {
        return Ok(BigInt::zero());
    }
    let nvars = ctx.big_n() as usize + 1;
    let x0q = Polynomial::var_pow(nvars, ctx.p(), 0, ctx.q() as u32);
    let rank = graded::multiplication_rank(&a_generators(ctx), &x0q, i as u32, max_columns)?;
    Ok(BigInt::from(rank))
}

pub fn brute_table(ctx: &QuadricContext, algebra: Algebra, max_columns: usize) -> Result<HilbertTable> {
    let (lo, hi) = support(ctx, algebra);
    let mut dims = BTreeMap::new();
    for i in lo..=hi {
        let v = brute_dim(ctx, algebra, i, max_columns)?;
        if !v.is_zero() {
            dims.insert(i, v);
        }
    }
    Ok(HilbertTable { algebra, context: *ctx, dims, source: Source::BruteForce })
}

/// Whether `(I : x_0^p)_d = (I + (x_0^p))_d` as subspaces of `S_d`, i.e.
/// `C_d = B_d` on the nose.
pub fn brute_c_equals_b(ctx: &QuadricContext, d: u32, max_columns: usize) -> Result<bool> {
    let nvars = ctx.big_n() as usize + 1;
    let x0q = Polynomial::var_pow(nvars, ctx.p(), 0, ctx.q() as u32);
    let colon = graded::colon_piece(&a_generators(ctx), &x0q, d, max_columns)?;
    let sum = graded::ideal_piece(&b_generators(ctx), d, max_columns)?;
    colon.same_subspace(&sum)
}

fn sign(j: i64) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `γ_N(i) = 2^{-N} Σ_j (-1)^j dim A_{d + i + jq}` with `d = (N-1)(q-1)/2`.
/// The sum runs over the finite window where `dim A` is supported.
pub fn gamma_nq(big_n: u32, q: u64, i: i64) -> Result<BigInt> {
    let d = d_index(big_n, q);
    let top = a_top_degree(big_n, q);
    let q = q as i64;
    let base = d + i;
    let j_lo = (-base).div_euclid(q) - 1;
    let j_hi = (top - base).div_euclid(q) + 1;
    let sum: BigInt = (j_lo..=j_hi)
        .map(|j| sign(j) * dim_a_nq(big_n, q as u64, base + j * q))
        .sum();
    let (quot, rem) = sum.div_rem(&pow2(big_n));
    if !rem.is_zero() {
        return Err(Error::InexactDivision(sum.to_string()));
    }
    Ok(quot)
}

pub fn gamma(ctx: &QuadricContext, i: i64) -> Result<BigInt> {
    gamma_nq(ctx.big_n(), ctx.q(), i)
}

fn half_up(q: u64) -> i64 {
    (q as i64 + 1) / 2
}

/// `w_0, ..., w_k` for the even-`N` closed form.
pub fn w_seq(q: u64, k: usize) -> Vec<BigInt> {
    let h = half_up(q);
    let mut w = vec![BigInt::one()];
    while w.len() <= k {
        let kk = w.len() - 1;
        let next: BigInt = (0..=kk)
            .map(|j| sign(j as i64) * &w[kk - j] * binomial(h + j as i64, 2 * j as i64 + 2))
            .sum();
        w.push(next);
    }
    w
}

/// `u_0, ..., u_k` for the odd-`N` closed form.
pub fn u_seq(q: u64, k: usize) -> Vec<BigInt> {
    let h = half_up(q);
    let mut u = vec![BigInt::zero()];
    while u.len() <= k {
        let kk = u.len() - 1;
        let mut next = sign(kk as i64) * binomial(h + kk as i64, 2 * kk as i64 + 1);
        for j in 0..=kk {
            next += sign(j as i64) * &u[kk - j] * binomial(h + j as i64, 2 * j as i64 + 2);
        }
        u.push(next);
    }
    u
}

/// `F_k(i) = Σ_{j=0}^k (-1)^j w_{k-j} C(i + j, 2j + 1)`.
pub fn f_k(q: u64, k: usize, i: i64) -> BigInt {
    let w = w_seq(q, k);
    (0..=k)
        .map(|j| sign(j as i64) * &w[k - j] * binomial(i + j as i64, 2 * j as i64 + 1))
        .sum()
}

/// `G_k(i) = (-1)^k C(i + k, 2k) + Σ_{j=0}^k (-1)^j u_{k-j} C(i + j, 2j + 1)`.
pub fn g_k(q: u64, k: usize, i: i64) -> BigInt {
    let u = u_seq(q, k);
    let mut acc = sign(k as i64) * binomial(i + k as i64, 2 * k as i64);
    for j in 0..=k {
        acc += sign(j as i64) * &u[k - j] * binomial(i + j as i64, 2 * j as i64 + 1);
    }
    acc
}

/// Closed form of `γ_N(i)` for `1 <= i <= (q-1)/2`: `F_k` when `N = 2k+2`,
/// `G_k` when `N = 2k+1`.
pub fn gamma_closed_nq(big_n: u32, q: u64, i: i64) -> Result<BigInt> {
    if big_n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let half = (q as i64 - 1) / 2;
    if i < 1 || i > half {
        return Err(Error::OutOfRange(format!("i = {i} outside [1, {half}]")));
    }
    Ok(if big_n % 2 == 0 {
        f_k(q, (big_n as usize - 2) / 2, i)
    } else {
        g_k(q, (big_n as usize - 1) / 2, i)
    })
}

pub fn gamma_closed(ctx: &QuadricContext, i: i64) -> Result<BigInt> {
    gamma_closed_nq(ctx.big_n(), ctx.q(), i)
}

/// Both sides of `Σ_i dim B_{l + ip} = p^n + 2^n γ_N(l_0)`, where
/// `0 <= l_0 < p` and `l ≡ d + l_0 (mod p)`.
pub fn sum_b_check(ctx: &QuadricContext, l: i64) -> Result<(BigInt, BigInt)> {
    ctx.require_single_frobenius()?;
    let p = ctx.q() as i64;
    let (lo, hi) = support(ctx, Algebra::B);
    let start = lo + (l - lo).rem_euclid(p);
    let lhs: BigInt = (start..=hi).step_by(p as usize).map(|i| dim_b_unchecked(ctx, i)).sum();
    let l0 = (l - ctx.d_pivot()).rem_euclid(p);
    let rhs = BigInt::from(p).pow(ctx.n()) + pow2(ctx.n()) * gamma(ctx, l0)?;
    Ok((lhs, rhs))
}

/// Determinant of `[C(e-1+m-j, e-1-j+c-r)]_{r,c=0..j}` with the two
/// closed products it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationReport {
    pub e: i64,
    pub m: i64,
    pub j: i64,
    pub p: u32,
    pub det: BigInt,
    /// `Π_{i=0}^{j} (e-j+m-1+i)! i! / ((m-1+i)! (e-i)!)`; `None` if some
    /// factorial argument is negative or the quotient is not an integer.
    pub product: Option<BigInt>,
    /// `Π_{i=0}^{j} (a+i)! i! / ((b+i)! (m+i)!)` with `a = e-1+m-j`,
    /// `b = e-1-j`; same `None` convention.
    pub shifted_product: Option<BigInt>,
    pub nonzero_mod_p: bool,
    /// `e >= 1` and `j <= e - 1`: the diagonal entries have nonnegative
    /// lower index, which is the setting the determinant is used in.
    pub in_domain: bool,
    /// `e + m - 1 <= p - 1`.
    pub hypothesis: bool,
}

impl CombinationReport {
    pub fn product_matches(&self) -> bool {
        self.product.as_ref() == Some(&self.det)
    }
}

fn factorial_quotient(num: &[i64], den: &[i64]) -> Option<BigInt> {
    if num.iter().chain(den).any(|&a| a < 0) {
        return None;
    }
    let n: BigInt = num.iter().map(|&a| factorial(a as u64)).product();
    let d: BigInt = den.iter().map(|&a| factorial(a as u64)).product();
    let (q, r) = n.div_rem(&d);
    r.is_zero().then_some(q)
}

pub fn combination_determinant(e: i64, m: i64, j: i64, p: Prime) -> Result<CombinationReport> {
    if e < 0 || m < 0 || j < 0 {
        return Err(Error::InvalidParameter(format!("e, m, j must be nonnegative (got {e}, {m}, {j})")));
    }
    let size = j as usize + 1;
    let top = e - 1 + m - j;
    let entries: Vec<Vec<BigInt>> = (0..size)
        .map(|r| (0..size).map(|c| binomial(top, e - 1 - j + c as i64 - r as i64)).collect())
        .collect();
    let det = determinant(entries);

    let mut num = Vec::new();
    let mut den = Vec::new();
    for i in 0..=j {
        num.extend([e - j + m - 1 + i, i]);
        den.extend([m - 1 + i, e - i]);
    }
    let product = factorial_quotient(&num, &den);

    let b = e - 1 - j;
    let (mut num, mut den) = (Vec::new(), Vec::new());
    for i in 0..=j {
        num.extend([top + i, i]);
        den.extend([b + i, m + i]);
    }
    let shifted_product = factorial_quotient(&num, &den);

    let pp = BigInt::from(p.get());
    Ok(CombinationReport {
        e,
        m,
        j,
        p: p.get(),
        nonzero_mod_p: !det.mod_floor(&pp).is_zero(),
        det,
        product,
        shifted_product,
        in_domain: e >= 1 && j <= e - 1,
        hypothesis: e + m - 1 <= p.get() as i64 - 1,
    })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for jj in k + 1..n {
                let v = (&a[i][jj] * &a[k][k] - &a[i][k] * &a[k][jj]) / &prev;
                a[i][jj] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}
