//! Single `pod(n) mod 5` values far beyond table range.
//!
//! Over `Z/5`, `ψ(-q)^5 = ψ(-q^5)`, so
//! `Σ pod(n) q^n = ψ(-q)^4 · Σ pod(m) q^{5m}` and
//! `pod(n) ≡ Σ_m (-1)^{n-5m} σ(2(n-5m)+1) pod(m) (mod 5)` using
//! `t_4(j) = σ(2j+1)`. Only `pod(0..=n/5)` is tabulated.

use super::fast::pod_residues_small;
use crate::arith::for_each_sigma_in_progression;

/// `pod(n) mod 5`.
pub fn pod_mod5_at(n: u64) -> u8 {
    let quotient = (n / 5) as usize;
    let r = n % 5;
    let table = pod_residues_small(quotient, 5).expect("modulus 5 is valid");
    let mut total = 0u64;
    // j = r + 5i runs through n - 5m with m = quotient - i
    for_each_sigma_in_progression(2 * r + 1, 10, quotient + 1, |i, sig| {
        let j = r + 5 * i as u64;
        let pod_m = table[quotient - i] as u64;
        if pod_m == 0 {
            return;
        }
        let t4 = sig % 5;
        let term = t4 * pod_m % 5;
        total += if j % 2 == 1 { 5 - term } else { term };
    });
    (total % 5) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_table() {
        let limit = 6000;
        let table = pod_residues_small(limit, 5).unwrap();
        for (n, &want) in table.iter().enumerate() {
            assert_eq!(pod_mod5_at(n as u64), want, "n={n}");
        }
    }

    #[test]
    fn agrees_with_table_at_scale() {
        let limit = 400_000;
        let table = pod_residues_small(limit, 5).unwrap();
        for n in [34_295 * 3 + 4287, 250_001, 399_999, 400_000] {
            assert_eq!(pod_mod5_at(n as u64), table[n], "n={n}");
        }
    }
}
