use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;

use super::report::{saturate, Counterexample, Tally, VerificationReport};
use crate::arith::{
    r3_scale, r5_scale, rk_table, square_triangular_factor, t4_closed, t8_closed, tk_table,
};
use crate::error::{Error, Result};

/// Largest `k` for which `r_k(8n+k)` is a fixed multiple of `t_k(n)`.
const SQUARE_TRIANGULAR_MAX_K: u32 = 7;

/// Sweeps both scaling recursions against series tables, the
/// `r_k(8n+k)`/`t_k(n)` proportionality for `k ≤ 7`, and the `t_4`/`t_8`
/// progression congruences for each `p`, into one report.
pub fn verify_recursions(p_list: &[u64], alpha_max: u32, n_max: u64) -> Result<VerificationReport> {
    let started = Instant::now();
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let mut reach = 8 * n_max + 8;
    for &p in p_list {
        let scale = p
            .checked_pow(2 * alpha_max)
            .and_then(|s| s.checked_mul(n_max))
            .ok_or_else(|| Error::Overflow(format!("{p}^{} · {n_max}", 2 * alpha_max)))?;
        reach = reach.max(scale);
    }
    let r5 = rk_table(5, reach as usize)?;
    let r3 = rk_table(3, reach as usize)?;
    let mut tally = Tally::default();
    let mut check = |n: u64, index: u64, got: &BigInt, want: &BigInt| {
        tally.record(got == want, || Counterexample {
            n,
            index: index as u128,
            pod_residue: saturate(got),
            expected_residue: saturate(want),
        })
    };

    for &p in p_list {
        for alpha in 0..=alpha_max as u64 {
            let scale = p.pow(2 * alpha as u32);
            for n in 1..=n_max {
                let target = scale * n;
                if n % (p * p) != 0 {
                    let got = r5_scale(p, alpha, n, r5.get(n as usize))?;
                    check(n, target, &got, r5.get(target as usize));
                }
                let below = if n % (p * p) == 0 {
                    r3.get((n / (p * p)) as usize).clone()
                } else {
                    BigInt::zero()
                };
                let got = r3_scale(p, alpha, n, r3.get(n as usize), &below)?;
                check(n, target, &got, r3.get(target as usize));
            }
        }
    }

    for k in 1..=SQUARE_TRIANGULAR_MAX_K {
        let rk = rk_table(k, (8 * n_max + k as u64) as usize)?;
        let tk = tk_table(k, n_max as usize)?;
        let factor = BigInt::from(square_triangular_factor(k));
        for n in 0..=n_max {
            let index = 8 * n + k as u64;
            check(
                n,
                index,
                rk.get(index as usize),
                &(&factor * tk.get(n as usize)),
            );
        }
    }

    for &p in p_list {
        let cube = (p as u128).pow(3);
        for n in 0..=n_max {
            let index = p * n + (p - 1) / 2;
            let (a, b) = (t4_closed(index) % p, t4_closed(n) % p);
            check(n, index, &BigInt::from(a), &BigInt::from(b));
            let index = p * n + p - 1;
            let (a, b) = (t8_closed(index) % cube, t8_closed(n) % cube);
            check(n, index, &BigInt::from(a), &BigInt::from(b));
        }
    }

    let ps: Vec<String> = p_list.iter().map(u64::to_string).collect();
    let instance = format!(
        "r_5/r_3 scaling, r_k(8n+k) ∝ t_k(n) for k ≤ {SQUARE_TRIANGULAR_MAX_K}, t_4/t_8 progressions; p ∈ {{{}}}, α ≤ {alpha_max}, n ≤ {n_max}",
        ps.join(", ")
    );
    Ok(tally.into_report("recursions", instance, 0, n_max, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_verifies() {
        let r = verify_recursions(&[3, 5, 7], 1, 40).unwrap();
        assert!(r.verified(), "{:?}", r.counterexamples);
        assert!(r.checked > 0);
    }

    #[test]
    fn rejects_composite() {
        assert!(verify_recursions(&[9], 1, 10).is_err());
    }
}
