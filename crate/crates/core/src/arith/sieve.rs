//! Divisor sums along an arithmetic progression by segmented factoring.

use crate::series::mod_inverse;

const SEGMENT: usize = 1 << 18;

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Calls `f(i, σ(first + i·step))` for `i = 0..count`, in increasing `i`.
///
/// All terms must be positive. Work is `O(count · log log max)` plus one
/// pass over the primes up to `√max` per segment.
pub fn for_each_sigma_in_progression(
    first: u64,
    step: u64,
    count: usize,
    mut f: impl FnMut(usize, u64),
) {
    if count == 0 {
        return;
    }
    assert!(first >= 1, "progression terms must be positive");
    let last = first + step * (count as u64 - 1);
    let primes = primes_up_to(isqrt(last));
    let mut rest = vec![0u64; SEGMENT];
    let mut sig = vec![0u64; SEGMENT];
    let mut base = 0usize;
    while base < count {
        let len = SEGMENT.min(count - base);
        let start = first + step * base as u64;
        for i in 0..len {
            rest[i] = start + step * i as u64;
            sig[i] = 1;
        }
        for &p in &primes {
            // indices i in the segment with p | start + i·step
            let offset = match mod_inverse(step % p, p) {
                Some(inv) => {
                    let need = (p - start % p) % p;
                    (need as u128 * inv as u128 % p as u128) as usize
                }
                None if start.is_multiple_of(p) => 0,
                None => continue,
            };
            let stride = if step.is_multiple_of(p) {
                1
            } else {
                p as usize
            };
            let mut i = offset;
            while i < len {
                let mut v = rest[i];
                let mut pk = 1u64;
                let mut sum = 1u64;
                while v.is_multiple_of(p) {
                    v /= p;
                    pk *= p;
                    sum += pk;
                }
                rest[i] = v;
                sig[i] *= sum;
                i += stride;
            }
        }
        for i in 0..len {
            if rest[i] > 1 {
                sig[i] *= rest[i] + 1;
            }
            f(base + i, sig[i]);
        }
        base += len;
    }
}
