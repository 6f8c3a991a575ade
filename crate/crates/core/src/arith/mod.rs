//! Scalar arithmetic functions: divisor sums, Legendre symbols, `t_k(n)` and
//! `r_k(n)` by enumeration, closed form and series powers, and the scaling
//! recursions for `r_5(p^{2α} n)` and `r_3(p^{2α} n)`.

mod sieve;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{psi_series, square_theta_series, CoefficientDomain, TruncatedSeries};

pub use sieve::{for_each_sigma_in_progression, primes_up_to};

/// Largest `k` for which `t_k` / `r_k` are supported.
pub const MAX_K: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepKind {
    Triangular,
    Squares,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepMethod {
    SeriesPower,
    Enumeration,
    ClosedForm,
}

/// `t_k(0..=limit)` or `r_k(0..=limit)` computed by one method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCounts {
    pub kind: RepKind,
    pub k: u32,
    pub method: RepMethod,
    pub values: Vec<BigInt>,
}

impl RepCounts {
    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n]
    }
}

fn check_k(k: u32) -> Result<()> {
    if (1..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "k must be in 1..={MAX_K}, got {k}"
        )))
    }
}

/// Trial-division primality.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Sum of the positive divisors of `n`.
pub fn sigma(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("sigma is defined for n >= 1".into()));
    }
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += d;
            let e = n / d;
            if e != d {
                total += e;
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `t_4(n) = σ(2n + 1)`.
pub fn t4_closed(n: u64) -> u64 {
    sigma(2 * n + 1).expect("2n + 1 >= 1")
}

/// `t_8(n) = Σ_{d | n+1, d odd} ((n+1)/d)^3`.
pub fn t8_closed(n: u64) -> u128 {
    let m = n + 1;
    let mut total = 0u128;
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            let e = m / d;
            if d % 2 == 1 {
                total += (e as u128).pow(3);
            }
            if e != d && e % 2 == 1 {
                total += (d as u128).pow(3);
            }
        }
        d += 1;
    }
    total
}

/// Number of ordered `k`-tuples of triangular numbers (0 allowed) summing to `n`.
pub fn t_enum(k: u32, n: usize) -> Result<u64> {
    Ok(t_enum_table(k, n)?.last().copied().expect("nonempty"))
}

/// Number of ordered `k`-tuples of integers whose squares sum to `n`.
pub fn r_enum(k: u32, n: usize) -> Result<u64> {
    Ok(r_enum_table(k, n)?.last().copied().expect("nonempty"))
}

/// `t_k(0..=limit)` via the memoized recursion `t_k(n) = Σ_T t_{k-1}(n - T)`.
pub fn t_enum_table(k: u32, limit: usize) -> Result<Vec<u64>> {
    check_k(k)?;
    let parts: Vec<(usize, u64)> = (0usize..)
        .map(|j| j * (j + 1) / 2)
        .take_while(|&t| t <= limit)
        .map(|t| (t, 1))
        .collect();
    Ok(layered_counts(k, limit, &parts))
}

/// `r_k(0..=limit)` via `r_k(n) = Σ_{|j| <= √n} r_{k-1}(n - j²)`.
pub fn r_enum_table(k: u32, limit: usize) -> Result<Vec<u64>> {
    check_k(k)?;
    let parts: Vec<(usize, u64)> = (0usize..)
        .map(|j| (j * j, if j == 0 { 1 } else { 2 }))
        .take_while(|&(s, _)| s <= limit)
        .collect();
    Ok(layered_counts(k, limit, &parts))
}

/// One DP layer per summand; `parts` lists (value, multiplicity) of a single summand.
fn layered_counts(k: u32, limit: usize, parts: &[(usize, u64)]) -> Vec<u64> {
    let mut prev = vec![0u64; limit + 1];
    prev[0] = 1;
    for _ in 0..k {
        let mut next = vec![0u64; limit + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            *slot = parts
                .iter()
                .take_while(|&&(v, _)| v <= n)
                .map(|&(v, mult)| mult * prev[n - v])
                .sum();
        }
        prev = next;
    }
    prev
}

fn series_counts(kind: RepKind, k: u32, limit: usize) -> Result<RepCounts> {
    check_k(k)?;
    let base = match kind {
        RepKind::Triangular => psi_series(limit, CoefficientDomain::Exact),
        RepKind::Squares => square_theta_series(limit, CoefficientDomain::Exact),
    };
    let power = base.pow(k as u64);
    Ok(RepCounts {
        kind,
        k,
        method: RepMethod::SeriesPower,
        values: power.exact_coeffs().expect("exact").to_vec(),
    })
}

/// `r_k(0..=limit)` as the `k`-th power of `Σ q^{n²}`.
pub fn rk_table(k: u32, limit: usize) -> Result<RepCounts> {
    series_counts(RepKind::Squares, k, limit)
}

/// `t_k(0..=limit)` as the `k`-th power of `ψ(q)`.
pub fn tk_table(k: u32, limit: usize) -> Result<RepCounts> {
    series_counts(RepKind::Triangular, k, limit)
}

/// `Σ r_k(n) q^n` to order `limit` in any domain; residues are all the
/// congruence checks need.
pub fn rk_series(k: u32, limit: usize, domain: CoefficientDomain) -> Result<TruncatedSeries> {
    check_k(k)?;
    Ok(square_theta_series(limit, domain).pow(k as u64))
}

/// `Σ t_k(n) q^n` to order `limit` in any domain.
pub fn tk_series(k: u32, limit: usize, domain: CoefficientDomain) -> Result<TruncatedSeries> {
    check_k(k)?;
    Ok(psi_series(limit, domain).pow(k as u64))
}

/// Enumeration-oracle tables wrapped as [`RepCounts`].
pub fn enum_counts(kind: RepKind, k: u32, limit: usize) -> Result<RepCounts> {
    let raw = match kind {
        RepKind::Triangular => t_enum_table(k, limit)?,
        RepKind::Squares => r_enum_table(k, limit)?,
    };
    Ok(RepCounts {
        kind,
        k,
        method: RepMethod::Enumeration,
        values: raw.into_iter().map(BigInt::from).collect(),
    })
}

/// Closed-form `t_4` / `t_8` tables.
pub fn closed_form_counts(k: u32, limit: usize) -> Result<RepCounts> {
    let values = match k {
        4 => (0..=limit as u64)
            .map(|n| BigInt::from(t4_closed(n)))
            .collect(),
        8 => (0..=limit as u64)
            .map(|n| BigInt::from(t8_closed(n)))
            .collect(),
        _ => return Err(Error::InvalidArgument(format!("no closed form for t_{k}"))),
    };
    Ok(RepCounts {
        kind: RepKind::Triangular,
        k,
        method: RepMethod::ClosedForm,
        values,
    })
}

/// `2^k (1 + C(k,4)/2) = 2^k + 2^{k-1} C(k,4)`, the factor relating
/// `r_k(8n + k)` to `t_k(n)`.
pub fn square_triangular_factor(k: u32) -> u64 {
    let c = binomial(k as u64, 4);
    (1u64 << k) + (1u64 << (k - 1)) * c
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p as i64))
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mm = m as u128;
    let mut acc = 1u128 % mm;
    let mut b = base as u128 % mm;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    })
}

/// `1 + x + ... + x^{terms-1}` by summation.
pub fn geometric_sum(x: &BigInt, terms: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut power = BigInt::one();
    for _ in 0..terms {
        total += &power;
        power *= x;
    }
    total
}

/// Same sum reduced mod `m`.
pub fn geometric_sum_mod(x: u64, terms: u64, m: u64) -> u64 {
    let mm = m as u128;
    let (mut total, mut power) = (0u128, 1u128 % mm);
    let x = x as u128 % mm;
    for _ in 0..terms {
        total = (total + power) % mm;
        power = power * x % mm;
    }
    total as u64
}

/// `r_5(p^{2α} n)` from `r_5(n)` for an odd prime `p` with `p² ∤ n`.
pub fn r5_scale(p: u64, alpha: u64, n: u64, r5_n: &BigInt) -> Result<BigInt> {
    require_odd_prime(p)?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if n.is_multiple_of(p * p) {
        return Err(Error::Precondition(format!(
            "p^2 = {} divides n = {n}",
            p * p
        )));
    }
    let cube = BigInt::from(p).pow(3);
    let chi = legendre(n as i64, p)?;
    let factor =
        geometric_sum(&cube, alpha + 1) - BigInt::from(p) * chi * geometric_sum(&cube, alpha);
    Ok(factor * r5_n)
}

/// `r_3(p^{2α} n)` from `r_3(n)` and `r_3(n/p²)` (the latter 0 unless `p² | n`).
pub fn r3_scale(
    p: u64,
    alpha: u64,
    n: u64,
    r3_n: &BigInt,
    r3_n_over_p2: &BigInt,
) -> Result<BigInt> {
    require_odd_prime(p)?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if !n.is_multiple_of(p * p) && !r3_n_over_p2.is_zero() {
        return Err(Error::Precondition(format!(
            "r_3(n/p^2) must be 0 when p^2 does not divide n = {n}"
        )));
    }
    let pb = BigInt::from(p);
    let chi = legendre(-(n as i64), p)?;
    let head = geometric_sum(&pb, alpha + 1) - chi * geometric_sum(&pb, alpha);
    let tail = &pb * geometric_sum(&pb, alpha);
    Ok(head * r3_n - tail * r3_n_over_p2)
}
