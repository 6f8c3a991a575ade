//! Schoolbook convolution kernels.
//!
//! The sparser operand drives the outer loop, so products with theta series
//! and Pochhammer factors cost `O(N * nnz)`. Output is split into fixed-size
//! chunks computed independently, which keeps results identical for any
//! thread count.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

const CHUNK: usize = 4096;

fn sparse_side<'a, T, F>(
    a: &'a [T],
    b: &'a [T],
    order: usize,
    is_zero: F,
) -> (Vec<(usize, &'a T)>, &'a [T])
where
    F: Fn(&T) -> bool,
{
    let nz = |v: &'a [T]| -> Vec<(usize, &'a T)> {
        v[..=order.min(v.len() - 1)]
            .iter()
            .enumerate()
            .filter(|(_, c)| !is_zero(c))
            .collect()
    };
    let (na, nb) = (nz(a), nz(b));
    if na.len() <= nb.len() {
        (na, b)
    } else {
        (nb, a)
    }
}

pub(super) fn exact(a: &[BigInt], b: &[BigInt], order: usize) -> Vec<BigInt> {
    let (terms, dense) = sparse_side(a, b, order, |c: &BigInt| c.is_zero());
    let mut out = vec![BigInt::zero(); order + 1];
    out.par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(ci, chunk)| {
            let lo = ci * CHUNK;
            let hi = lo + chunk.len();
            for &(i, c) in &terms {
                if i >= hi {
                    break;
                }
                for n in lo.max(i)..hi {
                    let d = &dense[n - i];
                    if !d.is_zero() {
                        chunk[n - lo] += c * d;
                    }
                }
            }
        });
    out
}

/// Whether `terms` products of residues below `m` can be summed in a `u64`.
fn lazy_fits(m: u64, terms: usize) -> bool {
    let sq = (m as u128 - 1) * (m as u128 - 1);
    sq.checked_mul(terms as u128 + 1)
        .is_some_and(|t| t < u64::MAX as u128)
}

pub(super) fn residue(a: &[u64], b: &[u64], order: usize, m: u64) -> Vec<u64> {
    let (terms, dense) = sparse_side(a, b, order, |&c: &u64| c == 0);
    let terms: Vec<(usize, u64)> = terms.into_iter().map(|(i, &c)| (i, c)).collect();
    let mut out = vec![0u64; order + 1];
    if lazy_fits(m, terms.len()) {
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(ci, chunk)| {
                let lo = ci * CHUNK;
                let hi = lo + chunk.len();
                for &(i, c) in &terms {
                    if i >= hi {
                        break;
                    }
                    let start = lo.max(i);
                    let src = &dense[start - i..hi - i];
                    for (acc, &d) in chunk[start - lo..].iter_mut().zip(src) {
                        *acc += c * d;
                    }
                }
                for acc in chunk.iter_mut() {
                    *acc %= m;
                }
            });
    } else {
        let mm = m as u128;
        out.par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(ci, chunk)| {
                let lo = ci * CHUNK;
                let hi = lo + chunk.len();
                let mut wide = vec![0u128; chunk.len()];
                for &(i, c) in &terms {
                    if i >= hi {
                        break;
                    }
                    for n in lo.max(i)..hi {
                        wide[n - lo] += (c as u128 * dense[n - i] as u128) % mm;
                    }
                }
                for (acc, w) in chunk.iter_mut().zip(wide) {
                    *acc = (w % mm) as u64;
                }
            });
    }
    out
}

pub(super) fn exact_inverse(a: &[BigInt]) -> Vec<BigInt> {
    let c0 = a[0].clone();
    let terms: Vec<(usize, &BigInt)> = a
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let mut b: Vec<BigInt> = Vec::with_capacity(a.len());
    b.push(c0.clone());
    for n in 1..a.len() {
        let mut acc = BigInt::zero();
        for &(k, ak) in &terms {
            if k > n {
                break;
            }
            acc += ak * &b[n - k];
        }
        // c0 is +-1, so c0^{-1} = c0
        b.push(-(acc * &c0));
    }
    b
}

pub(super) fn residue_inverse(a: &[u64], inv0: u64, m: u64) -> Vec<u64> {
    let terms: Vec<(usize, u64)> = a
        .iter()
        .copied()
        .enumerate()
        .skip(1)
        .filter(|&(_, c)| c != 0)
        .collect();
    let mm = m as u128;
    let mut b = vec![0u64; a.len()];
    b[0] = inv0;
    let lazy = lazy_fits(m, terms.len());
    for n in 1..a.len() {
        let acc = if lazy {
            let mut acc = 0u64;
            for &(k, ak) in &terms {
                if k > n {
                    break;
                }
                acc += ak * b[n - k];
            }
            acc % m
        } else {
            let mut acc = 0u128;
            for &(k, ak) in &terms {
                if k > n {
                    break;
                }
                acc += (ak as u128 * b[n - k] as u128) % mm;
            }
            (acc % mm) as u64
        };
        let neg = if acc == 0 { 0 } else { m - acc };
        b[n] = ((neg as u128 * inv0 as u128) % mm) as u64;
    }
    b
}
