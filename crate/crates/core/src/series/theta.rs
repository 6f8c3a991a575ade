//! Theta-function and infinite-product constructors.

use num_traits::Zero;

use super::{add_mod, CoefficientDomain, Coeffs, TruncatedSeries};

/// Sign inside `(∓q^a; q^b)_∞`: `Minus` is `Π(1 - q^{a+kb})`, `Plus` is `Π(1 + q^{a+kb})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochhammerSign {
    Minus,
    Plus,
}

/// Truncated `(q^a; q^b)_∞` or `(-q^a; q^b)_∞`.
///
/// `(q^b; q^b)_∞` takes the pentagonal-number path; everything else multiplies
/// by one binomial at a time.
pub fn pochhammer_inf(
    a: usize,
    b: usize,
    sign: PochhammerSign,
    order: usize,
    domain: CoefficientDomain,
) -> TruncatedSeries {
    assert!(a >= 1 && b >= 1, "pochhammer exponents must be positive");
    if sign == PochhammerSign::Minus && a == b {
        return euler_product(order / b, domain)
            .inflate_capped(b, order)
            .expect("b >= 1");
    }
    pochhammer_inf_generic(a, b, sign, order, domain)
}

/// Reference path: iterative multiplication by `(1 ∓ q^j)` for `j = a, a+b, ...`.
pub fn pochhammer_inf_generic(
    a: usize,
    b: usize,
    sign: PochhammerSign,
    order: usize,
    domain: CoefficientDomain,
) -> TruncatedSeries {
    assert!(a >= 1 && b >= 1, "pochhammer exponents must be positive");
    let mut s = TruncatedSeries::one(domain, order);
    let exponents = (0..).map(|k| a + k * b).take_while(|&j| j <= order);
    match &mut s.coeffs {
        Coeffs::Exact(c) => {
            for j in exponents {
                for i in (j..=order).rev() {
                    let (lo, hi) = c.split_at_mut(i);
                    let src = &lo[i - j];
                    if src.is_zero() {
                        continue;
                    }
                    match sign {
                        PochhammerSign::Minus => hi[0] -= src,
                        PochhammerSign::Plus => hi[0] += src,
                    }
                }
            }
        }
        Coeffs::Residue { modulus, values: c } => {
            let m = *modulus;
            for j in exponents {
                for i in (j..=order).rev() {
                    let src = c[i - j];
                    let delta = match sign {
                        PochhammerSign::Minus => super::neg_mod(src, m),
                        PochhammerSign::Plus => src,
                    };
                    c[i] = add_mod(c[i], delta, m);
                }
            }
        }
    }
    s
}

/// `(q;q)_∞ = Σ_k (-1)^k q^{k(3k-1)/2}` over all integers `k`.
fn euler_product(order: usize, domain: CoefficientDomain) -> TruncatedSeries {
    let mut coeffs = vec![0i64; order + 1];
    coeffs[0] = 1;
    for k in 1usize.. {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let lower = k * (3 * k - 1) / 2;
        if lower > order {
            break;
        }
        coeffs[lower] += sign;
        let upper = k * (3 * k + 1) / 2;
        if upper <= order {
            coeffs[upper] += sign;
        }
    }
    TruncatedSeries::from_i64(domain, &coeffs).expect("valid domain")
}

fn indicator(
    order: usize,
    domain: CoefficientDomain,
    points: impl Iterator<Item = (usize, i64)>,
) -> TruncatedSeries {
    let mut coeffs = vec![0i64; order + 1];
    for (n, v) in points.take_while(|&(n, _)| n <= order) {
        coeffs[n] = v;
    }
    TruncatedSeries::from_i64(domain, &coeffs).expect("valid domain")
}

/// `ψ(q) = Σ_{n>=0} q^{n(n+1)/2}`.
pub fn psi_series(order: usize, domain: CoefficientDomain) -> TruncatedSeries {
    indicator(order, domain, (0usize..).map(|n| (n * (n + 1) / 2, 1)))
}

/// `Σ_{n∈Z} q^{n²} = 1 + 2q + 2q⁴ + ...`; its k-th power generates `r_k`.
pub fn square_theta_series(order: usize, domain: CoefficientDomain) -> TruncatedSeries {
    indicator(
        order,
        domain,
        (0usize..).map(|n| (n * n, if n == 0 { 1 } else { 2 })),
    )
}
