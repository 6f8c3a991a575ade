//! Truncated formal power series over the integers or a residue ring.
//!
//! A series of order `N` stores exactly `N + 1` coefficients `c_0..c_N`.
//! Binary operations require both operands to live in the same
//! [`CoefficientDomain`] and truncate eagerly to the smaller order.

mod convolve;
pub mod theta;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use theta::{pochhammer_inf, psi_series, square_theta_series, PochhammerSign};

/// Where coefficients live: unbounded integers or canonical residues in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CoefficientDomain {
    Exact,
    Mod(u64),
}

impl CoefficientDomain {
    /// Residue domain with a validated modulus.
    pub fn modular(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidModulus(m));
        }
        Ok(CoefficientDomain::Mod(m))
    }

    /// `0` selects the exact domain, anything else a residue ring.
    pub fn from_modulus_flag(m: u64) -> Result<Self> {
        if m == 0 {
            Ok(CoefficientDomain::Exact)
        } else {
            Self::modular(m)
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            CoefficientDomain::Exact => None,
            CoefficientDomain::Mod(m) => Some(*m),
        }
    }

    /// True when values in `self` can be reduced into `target`.
    pub fn reduces_to(&self, target: CoefficientDomain) -> bool {
        match (self, target) {
            (_, CoefficientDomain::Exact) => matches!(self, CoefficientDomain::Exact),
            (CoefficientDomain::Exact, CoefficientDomain::Mod(_)) => true,
            (CoefficientDomain::Mod(big), CoefficientDomain::Mod(small)) => big % small == 0,
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::Exact => write!(f, "exact"),
            CoefficientDomain::Mod(m) => write!(f, "mod {m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Residue { modulus: u64, values: Vec<u64> },
}

/// Coefficients `c_0..c_N` of a power series known to order `N`.
///
/// Values are immutable once built; every operation returns a new series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Coeffs,
}

impl TruncatedSeries {
    pub fn zero(domain: CoefficientDomain, order: usize) -> Self {
        match domain {
            CoefficientDomain::Exact => Self::exact(vec![BigInt::zero(); order + 1]),
            CoefficientDomain::Mod(m) => Self::residue_unchecked(m, vec![0; order + 1]),
        }
    }

    pub fn one(domain: CoefficientDomain, order: usize) -> Self {
        let mut s = Self::zero(domain, order);
        match &mut s.coeffs {
            Coeffs::Exact(v) => v[0] = BigInt::one(),
            Coeffs::Residue { values, .. } => values[0] = 1,
        }
        s
    }

    /// Series with the given small integer coefficients; order is `len - 1`.
    pub fn from_i64(domain: CoefficientDomain, coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least one coefficient".into(),
            ));
        }
        match domain {
            CoefficientDomain::Exact => Ok(Self::exact(
                coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            )),
            CoefficientDomain::Mod(m) => {
                CoefficientDomain::modular(m)?;
                let values = coeffs
                    .iter()
                    .map(|&c| (c as i128).rem_euclid(m as i128) as u64)
                    .collect();
                Ok(Self::residue_unchecked(m, values))
            }
        }
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least one coefficient".into(),
            ));
        }
        Ok(Self::exact(coeffs))
    }

    /// Residue series; values are reduced into `[0, m)`.
    pub fn from_residues(m: u64, mut values: Vec<u64>) -> Result<Self> {
        CoefficientDomain::modular(m)?;
        if values.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least one coefficient".into(),
            ));
        }
        for v in values.iter_mut() {
            *v %= m;
        }
        Ok(Self::residue_unchecked(m, values))
    }

    /// Builds `c_n = f(n)` for `n <= order`.
    pub fn from_fn(
        domain: CoefficientDomain,
        order: usize,
        mut f: impl FnMut(usize) -> i64,
    ) -> Self {
        let coeffs: Vec<i64> = (0..=order).map(&mut f).collect();
        Self::from_i64(domain, &coeffs).expect("domain validated by caller")
    }

    pub(crate) fn exact(values: Vec<BigInt>) -> Self {
        debug_assert!(!values.is_empty());
        TruncatedSeries {
            coeffs: Coeffs::Exact(values),
        }
    }

    pub(crate) fn residue_unchecked(modulus: u64, values: Vec<u64>) -> Self {
        debug_assert!(!values.is_empty() && modulus >= 2);
        debug_assert!(values.iter().all(|&v| v < modulus));
        TruncatedSeries {
            coeffs: Coeffs::Residue { modulus, values },
        }
    }

    pub fn domain(&self) -> CoefficientDomain {
        match &self.coeffs {
            Coeffs::Exact(_) => CoefficientDomain::Exact,
            Coeffs::Residue { modulus, .. } => CoefficientDomain::Mod(*modulus),
        }
    }

    /// Highest retained exponent.
    pub fn order(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Residue { values, .. } => values.len(),
        }
    }

    pub fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Residue { .. } => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Exact(_) => None,
            Coeffs::Residue { values, .. } => Some(values),
        }
    }

    /// Coefficient `n` as an integer (the canonical representative for residues).
    pub fn coeff(&self, n: usize) -> BigInt {
        match &self.coeffs {
            Coeffs::Exact(v) => v[n].clone(),
            Coeffs::Residue { values, .. } => BigInt::from(values[n]),
        }
    }

    /// Coefficient `n` reduced into `[0, m)`.
    pub fn coeff_mod(&self, n: usize, m: u64) -> u64 {
        match &self.coeffs {
            Coeffs::Exact(v) => bigint_mod(&v[n], m),
            Coeffs::Residue { values, .. } => values[n] % m,
        }
    }

    /// Number of nonzero coefficients.
    pub fn nnz(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().filter(|c| !c.is_zero()).count(),
            Coeffs::Residue { values, .. } => values.iter().filter(|&&c| c != 0).count(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.coeffs {
            Coeffs::Exact(v) => v[0].is_one() && v[1..].iter().all(Zero::is_zero),
            Coeffs::Residue { values, .. } => values[0] == 1 && values[1..].iter().all(|&c| c == 0),
        }
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch {
                left: self.domain(),
                right: other.domain(),
            });
        }
        Ok(())
    }

    /// Keeps coefficients up to `order` (never extends).
    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        match &self.coeffs {
            Coeffs::Exact(v) => Self::exact(v[..keep].to_vec()),
            Coeffs::Residue { modulus, values } => {
                Self::residue_unchecked(*modulus, values[..keep].to_vec())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let n = self.len().min(other.len());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Self::exact((0..n).map(|i| &a[i] + &b[i]).collect())
            }
            (Coeffs::Residue { modulus, values: a }, Coeffs::Residue { values: b, .. }) => {
                let m = *modulus;
                Self::residue_unchecked(m, (0..n).map(|i| add_mod(a[i], b[i], m)).collect())
            }
            _ => unreachable!("domains checked"),
        })
    }

    pub fn neg(&self) -> Self {
        match &self.coeffs {
            Coeffs::Exact(v) => Self::exact(v.iter().map(|c| -c).collect()),
            Coeffs::Residue { modulus, values } => {
                let m = *modulus;
                Self::residue_unchecked(m, values.iter().map(|&c| neg_mod(c, m)).collect())
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by the integer `k`.
    pub fn scale(&self, k: i64) -> Self {
        match &self.coeffs {
            Coeffs::Exact(v) => Self::exact(v.iter().map(|c| c * k).collect()),
            Coeffs::Residue { modulus, values } => {
                let m = *modulus;
                let k = (k as i128).rem_euclid(m as i128) as u128;
                Self::residue_unchecked(
                    m,
                    values
                        .iter()
                        .map(|&c| ((c as u128 * k) % m as u128) as u64)
                        .collect(),
                )
            }
        }
    }

    /// Multiplication by `q^r`, keeping the same order.
    pub fn shift(&self, r: usize) -> Self {
        let n = self.len();
        match &self.coeffs {
            Coeffs::Exact(v) => Self::exact(
                (0..n)
                    .map(|i| {
                        if i >= r {
                            v[i - r].clone()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect(),
            ),
            Coeffs::Residue { modulus, values } => Self::residue_unchecked(
                *modulus,
                (0..n)
                    .map(|i| if i >= r { values[i - r] } else { 0 })
                    .collect(),
            ),
        }
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let order = self.order().min(other.order());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => Self::exact(convolve::exact(a, b, order)),
            (Coeffs::Residue { modulus, values: a }, Coeffs::Residue { values: b, .. }) => {
                Self::residue_unchecked(*modulus, convolve::residue(a, b, order, *modulus))
            }
            _ => unreachable!("domains checked"),
        })
    }

    /// `self^k`, with `self^0 = 1` at the same order.
    ///
    /// Sparse bases (theta series, Pochhammer products) are raised by repeated
    /// multiplication with the base; dense ones by binary powering.
    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Self::one(self.domain(), self.order());
        }
        let n = self.len() as f64;
        let nnz = self.nnz().max(1) as f64;
        let iterated = (k - 1) as f64 * nnz * n;
        let binary = (64 - k.leading_zeros() + k.count_ones()) as f64 * n * n / 2.0;
        if iterated <= binary {
            let mut acc = self.clone();
            for _ in 1..k {
                acc = acc.mul(self).expect("same domain");
            }
            acc
        } else {
            let mut result: Option<Self> = None;
            let mut base = self.clone();
            let mut e = k;
            loop {
                if e & 1 == 1 {
                    result = Some(match result {
                        None => base.clone(),
                        Some(r) => r.mul(&base).expect("same domain"),
                    });
                }
                e >>= 1;
                if e == 0 {
                    break;
                }
                base = base.mul(&base).expect("same domain");
            }
            result.expect("k >= 1")
        }
    }

    /// Multiplicative inverse to the same order via the convolution recurrence
    /// `b_n = -c_0^{-1} * sum_{k>=1} a_k b_{n-k}`.
    pub fn inverse(&self) -> Result<Self> {
        match &self.coeffs {
            Coeffs::Exact(a) => {
                let c0 = &a[0];
                if !(c0.is_one() || (-c0).is_one()) {
                    return Err(Error::NonUnitConstant {
                        constant: c0.to_string(),
                        domain: self.domain(),
                    });
                }
                Ok(Self::exact(convolve::exact_inverse(a)))
            }
            Coeffs::Residue { modulus, values } => {
                let m = *modulus;
                let inv0 = mod_inverse(values[0], m).ok_or_else(|| Error::NonUnitConstant {
                    constant: values[0].to_string(),
                    domain: self.domain(),
                })?;
                Ok(Self::residue_unchecked(
                    m,
                    convolve::residue_inverse(values, inv0, m),
                ))
            }
        }
    }

    /// `b_n = a_{s n + r}`: the terms whose exponents are `r (mod s)`, with
    /// `q^r` divided out and `q^s` replaced by `q`.
    pub fn dissect(&self, r: usize, s: usize) -> Result<Self> {
        if s == 0 || r >= s {
            return Err(Error::InvalidDissection { r, s });
        }
        if r > self.order() {
            return Err(Error::InvalidArgument(format!(
                "dissection residue {r} exceeds series order {}",
                self.order()
            )));
        }
        let order = (self.order() - r) / s;
        Ok(match &self.coeffs {
            Coeffs::Exact(v) => Self::exact((0..=order).map(|n| v[s * n + r].clone()).collect()),
            Coeffs::Residue { modulus, values } => {
                Self::residue_unchecked(*modulus, (0..=order).map(|n| values[s * n + r]).collect())
            }
        })
    }

    /// `a(q^s)` at order `order_a * s`.
    pub fn inflate(&self, s: usize) -> Result<Self> {
        self.inflate_capped(s, usize::MAX)
    }

    /// `a(q^s)` known through exponent `min(order_a * s + s - 1, cap)`: the
    /// gap after the last known coefficient is exactly zero.
    pub fn inflate_capped(&self, s: usize, cap: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument(
                "inflation factor must be >= 1".into(),
            ));
        }
        let natural = if cap == usize::MAX {
            self.order() * s
        } else {
            self.order() * s + s - 1
        };
        let order = natural.min(cap);
        Ok(match &self.coeffs {
            Coeffs::Exact(v) => {
                let mut out = vec![BigInt::zero(); order + 1];
                for (n, c) in v.iter().enumerate() {
                    if n * s > order {
                        break;
                    }
                    out[n * s] = c.clone();
                }
                Self::exact(out)
            }
            Coeffs::Residue { modulus, values } => {
                let mut out = vec![0; order + 1];
                for (n, &c) in values.iter().enumerate() {
                    if n * s > order {
                        break;
                    }
                    out[n * s] = c;
                }
                Self::residue_unchecked(*modulus, out)
            }
        })
    }

    /// `a(-q)`.
    pub fn alternate_signs(&self) -> Self {
        match &self.coeffs {
            Coeffs::Exact(v) => Self::exact(
                v.iter()
                    .enumerate()
                    .map(|(n, c)| if n % 2 == 1 { -c } else { c.clone() })
                    .collect(),
            ),
            Coeffs::Residue { modulus, values } => {
                let m = *modulus;
                Self::residue_unchecked(
                    m,
                    values
                        .iter()
                        .enumerate()
                        .map(|(n, &c)| if n % 2 == 1 { neg_mod(c, m) } else { c })
                        .collect(),
                )
            }
        }
    }

    /// Explicit reduction into `Mod m`; a residue series only reduces to a
    /// divisor of its own modulus.
    pub fn reduce_mod(&self, m: u64) -> Result<Self> {
        let target = CoefficientDomain::modular(m)?;
        if !self.domain().reduces_to(target) {
            return Err(Error::IncompatibleReduction {
                from: self.domain(),
                to: target,
            });
        }
        Ok(match &self.coeffs {
            Coeffs::Exact(v) => {
                Self::residue_unchecked(m, v.iter().map(|c| bigint_mod(c, m)).collect())
            }
            Coeffs::Residue { values, .. } => {
                Self::residue_unchecked(m, values.iter().map(|&c| c % m).collect())
            }
        })
    }

    /// Indices where `self` and `other` differ, up to the common order.
    pub fn mismatches(&self, other: &Self) -> Result<Vec<usize>> {
        self.check_domain(other)?;
        let n = self.len().min(other.len());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => (0..n).filter(|&i| a[i] != b[i]).collect(),
            (Coeffs::Residue { values: a, .. }, Coeffs::Residue { values: b, .. }) => {
                (0..n).filter(|&i| a[i] != b[i]).collect()
            }
            _ => unreachable!("domains checked"),
        })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in 0..self.len() {
            let c = self.coeff(n);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{}) [{}]", self.len(), self.domain())
    }
}

pub(crate) fn bigint_mod(c: &BigInt, m: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(m));
    debug_assert!(!r.is_negative());
    r.to_u64().expect("residue below modulus")
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub(crate) fn neg_mod(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}
